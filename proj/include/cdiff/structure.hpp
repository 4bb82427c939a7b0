#pragma once

// Root-multiplicity structure of G_t(x) = f(x + a) - c f(x) - t over the
// algebraic closure, decided with gcd and resultant computations only.
//
// For fixed (a, c) write T(x) = f(x + a) - c f(x). Then
//   D  = H1 f(x + a) - c H1 f(x)   (first Hasse derivative of every G_t)
//   D2 = H2 f(x + a) - c H2 f(x)   (second Hasse derivative of every G_t)
// A root x0 of D is a multiple root of G_t exactly for t = T(x0); it is a
// root of multiplicity >= 3 iff D2(x0) = 0 as well. Two distinct roots of D
// with the same T-value give one G_t with two multiple roots (a collision).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cdiff/classify.hpp"
#include "cdiff/detail/parallel.hpp"
#include "cdiff/poly.hpp"
#include "cdiff/tower.hpp"

namespace cdiff {

namespace detail {

inline void require_nonzero_shift(Elem a) {
  if (a == 0) throw DomainError("shift a must be nonzero");
}

}  // namespace detail

// T(x) = f(x + a) - c f(x).
inline Poly transfer_poly(const Poly& f, Elem a, Elem c) { return shift(f, a) - f.scaled(c); }

inline Poly critical_poly(const Poly& f, Elem a, Elem c) {
  detail::require_nonzero_shift(a);
  const Poly h1 = hasse_derivative(f, 1);
  return shift(h1, a) - h1.scaled(c);
}

inline Poly second_critical_poly(const Poly& f, Elem a, Elem c) {
  detail::require_nonzero_shift(a);
  const Poly h2 = hasse_derivative(f, 2);
  return shift(h2, a) - h2.scaled(c);
}

struct RootStructureReport {
  Elem a = 0;
  Elem c = 0;
  Poly D;
  Poly D2;
  bool degenerate = false;         // D identically zero
  bool has_multiple_root = false;  // some G_t has a multiple root: deg D >= 1 or D == 0
  bool has_triple_root = false;
  bool triple_degenerate = false;  // D and D2 both identically zero
  bool has_critical_collision = false;
  bool good_shift = false;  // not degenerate, no triple root, no collision
};

namespace detail {

inline bool triple_from(const Poly& D, const Poly& D2, bool& both_zero) {
  both_zero = D.is_zero() && D2.is_zero();
  if (both_zero) return true;
  if (D.is_zero()) return D2.degree() >= 1;
  return gcd(D, D2).degree() >= 1;
}

inline bool collision_from(const Poly& D, const Poly& T) {
  const Poly s = squarefree_part(D);
  if (s.degree() <= 1) return false;
  // V(t) ~ prod over distinct critical points alpha of (T(alpha) - t). A
  // repeated root of V is a shared critical value. V in F_q[t^p] of degree
  // >= 2 is a p-th power, which is_squarefree reports as not squarefree.
  return !is_squarefree(resultant_in_t(s, T));
}

}  // namespace detail

inline bool has_triple_root(const Poly& f, Elem a, Elem c) {
  bool both_zero = false;
  return detail::triple_from(critical_poly(f, a, c), second_critical_poly(f, a, c), both_zero);
}

inline bool has_critical_collision(const Poly& f, Elem a, Elem c) {
  const Poly D = critical_poly(f, a, c);
  if (D.is_zero()) throw DomainError("critical polynomial vanishes identically (degenerate shift)");
  return detail::collision_from(D, transfer_poly(f, a, c));
}

inline RootStructureReport analyze_shift(const Poly& f, Elem a, Elem c) {
  if (!f.field()->contains(c)) throw DomainError("c out of range for field");
  RootStructureReport r{a, c, critical_poly(f, a, c), second_critical_poly(f, a, c)};
  r.degenerate = r.D.is_zero();
  r.has_multiple_root = r.degenerate || r.D.degree() >= 1;
  r.has_triple_root = detail::triple_from(r.D, r.D2, r.triple_degenerate);
  if (!r.degenerate) r.has_critical_collision = detail::collision_from(r.D, transfer_poly(f, a, c));
  r.good_shift = !r.degenerate && !r.has_triple_root && !r.has_critical_collision;
  return r;
}

struct PreconditionReport {
  std::uint32_t p = 0;
  int degree = 0;
  bool not_monomial = false;
  bool not_in_xp_subring = false;
  // p = 2 branch: odd degree, H1 and H2 nonzero.
  bool degree_odd = false;
  bool h1_nonzero = false;
  bool h2_nonzero = false;
  // p > 2 branch: d != 0, 1 mod p.
  bool degree_residue_ok = false;
  bool branch_ok = false;
  bool eligible = false;  // shared hypotheses and the branch for this p
  // Any exponent = 3 mod 4 forces H1, H2 != 0 in characteristic 2.
  bool deg3mod4_sufficient = false;
  // Hypotheses of the PcN count: p does not divide d(d-1), plus the shared ones.
  bool pcn_eligible = false;
  std::vector<std::string> violations;
};

inline PreconditionReport precondition_report(const Poly& f) {
  const auto cls = classify(f);
  PreconditionReport r;
  r.p = f.field()->characteristic();
  r.degree = f.degree();
  r.not_monomial = !cls.is_monomial;
  r.not_in_xp_subring = !cls.in_xp_subring;
  r.degree_odd = r.degree % 2 == 1;
  r.h1_nonzero = !cls.h1_zero;
  r.h2_nonzero = !cls.h2_zero;
  r.degree_residue_ok = r.degree % static_cast<int>(r.p) != 0 && r.degree % static_cast<int>(r.p) != 1;
  r.deg3mod4_sufficient = r.p == 2 && cls.has_deg3mod4_monomial;
  if (!r.not_monomial) r.violations.push_back("polynomial is a monomial");
  if (!r.not_in_xp_subring) r.violations.push_back("polynomial lies in F_q[x^p]");
  if (r.p == 2) {
    r.branch_ok = r.degree_odd && r.h1_nonzero && r.h2_nonzero;
    if (!r.degree_odd) r.violations.push_back("degree is even");
    if (!r.h1_nonzero) r.violations.push_back("first Hasse derivative vanishes");
    if (!r.h2_nonzero) r.violations.push_back("second Hasse derivative vanishes");
  } else {
    r.branch_ok = r.degree_residue_ok;
    if (!r.degree_residue_ok) r.violations.push_back("degree is 0 or 1 mod p");
  }
  r.eligible = r.not_monomial && r.not_in_xp_subring && r.branch_ok;
  const auto d = static_cast<std::uint64_t>(std::max(r.degree, 0));
  r.pcn_eligible = r.not_monomial && r.not_in_xp_subring && d >= 2 && (d * (d - 1)) % r.p != 0;
  return r;
}

namespace detail {

inline void require_shift_search_eligible(const Poly& f) {
  if (f.is_zero() || f.degree() < 2) throw IneligibleInput("degree must be at least 2");
  const auto cls = classify(f);
  if (cls.is_monomial) throw IneligibleInput("polynomial is a monomial");
  if (cls.in_xp_subring) throw IneligibleInput("polynomial lies in F_q[x^p]");
}

}  // namespace detail

// First a in F_q^* (encoding order) for which every G_t has either distinct
// roots or exactly one double root.
inline std::optional<Elem> good_shift_search(const Poly& f, Elem c) {
  detail::require_shift_search_eligible(f);
  for (Elem a = 1; a < f.field()->order(); ++a)
    if (analyze_shift(f, a, c).good_shift) return a;
  return std::nullopt;
}

enum class BoundVariant { lemma2, pcn, main, finale, only2 };

inline BoundVariant parse_bound_variant(const std::string& s) {
  if (s == "lemma2") return BoundVariant::lemma2;
  if (s == "pcn") return BoundVariant::pcn;
  if (s == "main") return BoundVariant::main;
  if (s == "finale") return BoundVariant::finale;
  if (s == "only2") return BoundVariant::only2;
  throw ParseError("unknown bound variant '" + s + "'");
}

inline double bound_value(int d, BoundVariant v) {
  if (d < 2) throw DomainError("bounds are defined for d >= 2");
  const double x = d;
  switch (v) {
    case BoundVariant::lemma2: return (x - 2) * (x - 2) * (x - 2);
    case BoundVariant::pcn: return std::max(6.3 * std::pow(x, 13.0 / 3.0), (x - 2) * (x - 2));
    case BoundVariant::main: return 4 * x * x;
    case BoundVariant::finale: return (2 * x - 1) * (2 * x - 3);
    case BoundVariant::only2: return (2 * x - 2) * (2 * x - 3);
  }
  throw DomainError("unknown bound variant");
}

struct CensusEntry {
  Elem c = 0;
  std::optional<Elem> good_a;
  bool degenerate = false;  // D == 0 for every a in F_q^*
};

struct CensusReport {
  FieldPtr field;
  std::string f;
  int d = 0;
  bool eligible = false;     // full hypotheses of the main theorem
  bool q_hypothesis = false;  // q > (2d-1)(2d-3)
  std::vector<CensusEntry> per_c;
  std::uint64_t theta_count = 0;  // #{c : no good a}
  double bound = 0;
  bool pass = false;
  std::vector<std::string> warnings;
};

inline CensusReport theta_census(const Poly& f, unsigned workers = 1) {
  detail::require_shift_search_eligible(f);
  const FieldPtr& field = f.field();
  CensusReport rep;
  rep.field = field;
  rep.f = f.to_string();
  rep.d = f.degree();
  const auto pre = precondition_report(f);
  rep.eligible = pre.eligible;
  for (const auto& v : pre.violations) rep.warnings.push_back("main theorem hypothesis fails: " + v);
  rep.bound = bound_value(rep.d, BoundVariant::finale);
  rep.q_hypothesis = static_cast<double>(field->order()) > rep.bound;
  if (!rep.q_hypothesis) rep.warnings.push_back("q <= (2d-1)(2d-3); the bound is not guaranteed");
  rep.per_c.resize(field->order());
  detail::parallel_for(field->order(), workers, [&](std::size_t i) {
    const auto c = static_cast<Elem>(i);
    CensusEntry e;
    e.c = c;
    bool all_degenerate = true;
    for (Elem a = 1; a < field->order(); ++a) {
      const auto r = analyze_shift(f, a, c);
      all_degenerate = all_degenerate && r.degenerate;
      if (r.good_shift) {
        e.good_a = a;
        break;
      }
    }
    e.degenerate = all_degenerate;
    rep.per_c[i] = e;
  });
  for (const auto& e : rep.per_c)
    if (!e.good_a) ++rep.theta_count;
  rep.pass = static_cast<double>(rep.theta_count) <= rep.bound;
  return rep;
}

// Values c of the form xi^i (1 - xi^j) / (1 - xi^k), xi a primitive (d-1)-th
// root of unity, with i, j in {0..d-2} and k in {1..d-2}, that lie in the
// base field. xi is built in GF(q^m) with m the order of q mod (d-1).
inline std::vector<Elem> exceptional_set(int d, const FieldPtr& base, std::uint64_t order_cap = kDefaultOrderCap) {
  if (d < 2) throw DomainError("exceptional set needs d >= 2");
  const auto k = static_cast<std::uint64_t>(d - 1);
  if (k % base->characteristic() == 0) throw IneligibleInput("p divides d-1: no primitive (d-1)-th root of unity");
  if (k == 1) return {};
  const std::uint64_t q = base->order();
  std::uint32_t m = 1;
  for (std::uint64_t r = q % k; r != 1; r = r * q % k) ++m;
  const auto ext = extend(base, m, order_cap);
  const Field& big = *ext.field;
  const Elem xi = big.pow(big.primitive_element(), (big.order() - 1) / k);
  std::vector<Elem> xi_pow(k);
  for (std::uint64_t i = 0; i < k; ++i) xi_pow[i] = big.pow(xi, i);
  std::set<Elem> out;
  for (std::uint64_t kk = 1; kk < k; ++kk) {
    const Elem denom_inv = big.inv(big.sub(1, xi_pow[kk]));
    for (std::uint64_t j = 0; j < k; ++j) {
      const Elem num = big.mul(big.sub(1, xi_pow[j]), denom_inv);
      for (std::uint64_t i = 0; i < k; ++i) {
        const Elem v = big.mul(xi_pow[i], num);
        if (big.pow(v, q) != v) continue;
        if (auto pre = ext.embedding.preimage(v)) out.insert(*pre);
      }
    }
  }
  return {out.begin(), out.end()};
}

}  // namespace cdiff
