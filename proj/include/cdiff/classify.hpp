#pragma once

#include <optional>

#include "cdiff/poly.hpp"

namespace cdiff {

// In characteristic 2, f with vanishing second Hasse derivative written as
// f = x * a(x)^4 + b(x)^4.
struct QuarticDecomposition {
  Poly a;
  Poly b;
};

struct ClassificationReport {
  int degree = Poly::kZeroDegree;
  bool is_monomial = false;    // alpha * x^k, alpha != 0, k >= 1, nothing else
  bool in_xp_subring = false;  // every exponent divisible by p
  bool h1_zero = false;
  bool h2_zero = false;
  bool has_deg3mod4_monomial = false;
  std::optional<QuarticDecomposition> char2_decomposition;
};

inline Poly reassemble(const QuarticDecomposition& d) {
  const Poly a2 = d.a * d.a, b2 = d.b * d.b;
  return Poly::x(d.a.field()) * (a2 * a2) + b2 * b2;
}

namespace detail {

// Exponents of f that are congruent to r mod 4, with coefficients replaced by
// their fourth roots, packed densely: sum c_{4i+r}^{1/4} x^i.
inline Poly fourth_root_part(const Poly& f, std::size_t r) {
  const Field& F = *f.field();
  std::vector<Elem> v;
  for (std::size_t j = r; j < f.coeffs().size(); j += 4) v.push_back(F.frobenius_inverse(F.frobenius_inverse(f.coeff(j))));
  return Poly(f.field(), std::move(v));
}

}  // namespace detail

inline ClassificationReport classify(const Poly& f) {
  if (f.is_zero()) throw DomainError("cannot classify the zero polynomial");
  ClassificationReport rep;
  rep.degree = f.degree();
  const auto& c = f.coeffs();
  std::size_t terms = 0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] == 0) continue;
    ++terms;
    if (j % 4 == 3) rep.has_deg3mod4_monomial = true;
  }
  rep.is_monomial = terms == 1 && f.degree() >= 1;
  rep.in_xp_subring = in_pth_power_subring(f);
  rep.h1_zero = hasse_derivative(f, 1).is_zero();
  rep.h2_zero = hasse_derivative(f, 2).is_zero();
  if (f.field()->characteristic() == 2 && rep.h2_zero) {
    // binom(j, 2) is odd iff j = 2, 3 mod 4, so only exponents 0, 1 mod 4 remain.
    rep.char2_decomposition = QuarticDecomposition{detail::fourth_root_part(f, 1), detail::fourth_root_part(f, 0)};
  }
  return rep;
}

}  // namespace cdiff
