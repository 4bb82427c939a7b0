#pragma once

// Univariate polynomials over a Field: arithmetic, Hasse derivatives,
// Taylor shifts, gcd, squarefree part, resultants and root finding.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cdiff/field.hpp"
#include "cdiff/rng.hpp"

namespace cdiff {

class Poly {
 public:
  // Degree of the zero polynomial. Never conflated with degree 0.
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  explicit Poly(FieldPtr field) : field_(std::move(field)) {}

  Poly(FieldPtr field, std::vector<Elem> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    for (Elem c : coeffs_)
      if (!field_->contains(c)) throw DomainError("coefficient out of range for field");
    trim();
  }

  static Poly constant(const FieldPtr& field, Elem c) { return Poly(field, {c}); }

  static Poly monomial(const FieldPtr& field, Elem c, std::size_t k) {
    std::vector<Elem> v(k + 1, 0);
    v[k] = c;
    return Poly(field, std::move(v));
  }

  static Poly x(const FieldPtr& field) { return monomial(field, 1, 1); }

  const FieldPtr& field() const { return field_; }
  const std::vector<Elem>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return is_zero() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1; }
  Elem coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : 0; }
  Elem leading() const { return is_zero() ? 0 : coeffs_.back(); }
  bool is_constant() const { return coeffs_.size() <= 1; }

  Elem eval(Elem x) const {
    Elem r = 0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) r = field_->add(field_->mul(r, x), coeffs_[i]);
    return r;
  }

  Poly scaled(Elem c) const {
    std::vector<Elem> v(coeffs_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = field_->mul(coeffs_[i], c);
    return Poly(field_, std::move(v));
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    require_same_field(a.field_, b.field_);
    std::vector<Elem> v(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.field_->add(a.coeff(i), b.coeff(i));
    return Poly(a.field_, std::move(v));
  }

  friend Poly operator-(const Poly& a, const Poly& b) {
    require_same_field(a.field_, b.field_);
    std::vector<Elem> v(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.field_->sub(a.coeff(i), b.coeff(i));
    return Poly(a.field_, std::move(v));
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    require_same_field(a.field_, b.field_);
    if (a.is_zero() || b.is_zero()) return Poly(a.field_);
    const Field& F = *a.field_;
    std::vector<Elem> v(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] = F.add(v[i + j], F.mul(a.coeffs_[i], b.coeffs_[j]));
    }
    return Poly(a.field_, std::move(v));
  }

  friend bool operator==(const Poly& a, const Poly& b) {
    return same_field(a.field_, b.field_) && a.coeffs_ == b.coeffs_;
  }

  // "c_d*x^d + ... + c_1*x + c_0" with canonical integer encodings; "0" for zero.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      if (coeffs_[k] == 0) continue;
      if (!first) os << " + ";
      first = false;
      os << coeffs_[k];
      if (k == 1) os << "*x";
      else if (k > 1) os << "*x^" << k;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }

  FieldPtr field_;
  std::vector<Elem> coeffs_;
};

// Accepts terms "c*x^k", "c*x", "x^k", "x", "c" joined by '+'.
inline Poly parse_poly(const FieldPtr& field, const std::string& text) {
  std::map<std::size_t, Elem> terms;
  std::string compact;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) compact.push_back(ch);
  if (compact.empty()) throw ParseError("empty polynomial");
  std::istringstream is(compact);
  std::string term;
  auto to_uint = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ParseError("bad number '" + s + "' in polynomial '" + text + "'");
    return std::stoull(s);
  };
  while (std::getline(is, term, '+')) {
    if (term.empty()) throw ParseError("empty term in polynomial '" + text + "'");
    std::uint64_t coef = 1;
    std::size_t power = 0;
    const auto xpos = term.find('x');
    if (xpos == std::string::npos) {
      coef = to_uint(term);
    } else {
      if (xpos > 0) {
        if (term[xpos - 1] != '*') throw ParseError("expected '*' before x in '" + term + "'");
        coef = to_uint(term.substr(0, xpos - 1));
      }
      const std::string rest = term.substr(xpos + 1);
      if (rest.empty()) power = 1;
      else if (rest[0] == '^') power = to_uint(rest.substr(1));
      else throw ParseError("malformed term '" + term + "'");
    }
    if (!field->contains(coef)) throw ParseError("coefficient " + std::to_string(coef) + " out of range");
    terms[power] = field->add(terms[power], static_cast<Elem>(coef));
  }
  std::vector<Elem> v(terms.rbegin()->first + 1, 0);
  for (auto [k, c] : terms) v[k] = c;
  return Poly(field, std::move(v));
}

inline Poly monic(const Poly& f) {
  if (f.is_zero()) return f;
  return f.scaled(f.field()->inv(f.leading()));
}

inline std::pair<Poly, Poly> divmod(const Poly& f, const Poly& g) {
  require_same_field(f.field(), g.field());
  if (g.is_zero()) throw DomainError("division by the zero polynomial");
  const Field& F = *f.field();
  std::vector<Elem> r = f.coeffs();
  const auto& gc = g.coeffs();
  if (r.size() < gc.size()) return {Poly(f.field()), f};
  std::vector<Elem> q(r.size() - gc.size() + 1, 0);
  const Elem lead_inv = F.inv(g.leading());
  for (std::size_t k = r.size(); k-- >= gc.size();) {
    const Elem c = F.mul(r[k], lead_inv);
    const std::size_t shift = k - (gc.size() - 1);
    q[shift] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < gc.size(); ++j) r[shift + j] = F.sub(r[shift + j], F.mul(c, gc[j]));
  }
  return {Poly(f.field(), std::move(q)), Poly(f.field(), std::move(r))};
}

inline Poly operator%(const Poly& f, const Poly& g) { return divmod(f, g).second; }
inline Poly operator/(const Poly& f, const Poly& g) { return divmod(f, g).first; }

// Monic gcd. gcd(0, 0) is undefined.
inline Poly gcd(Poly f, Poly g) {
  require_same_field(f.field(), g.field());
  if (f.is_zero() && g.is_zero()) throw DomainError("gcd of two zero polynomials");
  while (!g.is_zero()) {
    Poly r = f % g;
    f = std::move(g);
    g = std::move(r);
  }
  return monic(f);
}

inline Poly pow_mod(Poly base, std::uint64_t e, const Poly& modulus) {
  Poly result = Poly::constant(base.field(), 1) % modulus;
  base = base % modulus;
  while (e > 0) {
    if (e & 1) result = (result * base) % modulus;
    base = (base * base) % modulus;
    e >>= 1;
  }
  return result;
}

// binom(j, k) mod p via Lucas' theorem.
inline std::uint64_t binom_mod_p(std::uint64_t j, std::uint64_t k, std::uint64_t p) {
  std::uint64_t result = 1;
  while (j > 0 || k > 0) {
    const std::uint64_t jd = j % p, kd = k % p;
    if (kd > jd) return 0;
    std::uint64_t num = 1, den = 1;
    for (std::uint64_t i = 0; i < kd; ++i) {
      num = num * ((jd - i) % p) % p;
      den = den * ((i + 1) % p) % p;
    }
    result = result * num % p * detail::mod_inv(den, p) % p;
    j /= p;
    k /= p;
  }
  return result;
}

// k-th Hasse derivative: coefficient of x^(j-k) is binom(j, k) * f_j.
inline Poly hasse_derivative(const Poly& f, std::size_t k) {
  if (k == 0) return f;
  const auto& c = f.coeffs();
  if (c.size() <= k) return Poly(f.field());
  const Field& F = *f.field();
  std::vector<Elem> v(c.size() - k, 0);
  for (std::size_t j = k; j < c.size(); ++j) {
    if (c[j] == 0) continue;
    const auto b = binom_mod_p(j, k, F.characteristic());
    v[j - k] = F.mul(c[j], F.from_int(static_cast<std::int64_t>(b)));
  }
  return Poly(f.field(), std::move(v));
}

inline Poly derivative(const Poly& f) { return hasse_derivative(f, 1); }

// f(x + a), by Horner's scheme in powers of (x + a).
inline Poly shift(const Poly& f, Elem a) {
  const Field& F = *f.field();
  if (!F.contains(a)) throw DomainError("shift amount out of range for field");
  const auto& c = f.coeffs();
  std::vector<Elem> r;
  r.reserve(c.size());
  for (std::size_t i = c.size(); i-- > 0;) {
    // r <- r * (x + a) + c[i]
    r.push_back(0);
    for (std::size_t j = r.size() - 1; j > 0; --j) r[j] = F.add(r[j - 1], F.mul(r[j], a));
    r[0] = F.add(F.mul(r[0], a), c[i]);
  }
  return Poly(f.field(), std::move(r));
}

inline bool in_pth_power_subring(const Poly& f) {
  const std::uint32_t p = f.field()->characteristic();
  const auto& c = f.coeffs();
  for (std::size_t j = 0; j < c.size(); ++j)
    if (c[j] != 0 && j % p != 0) return false;
  return true;
}

// For f in F_q[x^p], the unique g with g^p = f.
inline Poly pth_root(const Poly& f) {
  if (!in_pth_power_subring(f)) throw DomainError("polynomial is not a p-th power");
  const Field& F = *f.field();
  const std::uint32_t p = F.characteristic();
  const auto& c = f.coeffs();
  std::vector<Elem> v;
  for (std::size_t j = 0; j < c.size(); j += p) v.push_back(F.frobenius_inverse(c[j]));
  return Poly(f.field(), std::move(v));
}

// Product of the distinct monic irreducible factors of f (the radical).
// When f' vanishes, f = g^p and we recurse on g.
inline Poly squarefree_part(const Poly& f) {
  if (f.is_zero()) throw DomainError("squarefree part of the zero polynomial");
  if (f.degree() == 0) return Poly::constant(f.field(), 1);
  const Poly fm = monic(f);
  const Poly df = derivative(fm);
  if (df.is_zero()) return squarefree_part(pth_root(fm));
  const Poly g = gcd(fm, df);
  const Poly w = fm / g;  // factors of multiplicity prime to p, once each
  if (g.degree() == 0) return w;
  const Poly rg = squarefree_part(g);
  return monic(w * rg / gcd(w, rg));
}

// True iff f has no repeated root in the algebraic closure.
inline bool is_squarefree(const Poly& f) {
  if (f.is_zero()) throw DomainError("squarefree test of the zero polynomial");
  if (f.degree() <= 0) return true;
  const Poly df = derivative(f);
  if (df.is_zero()) return false;  // nonconstant p-th power
  return gcd(f, df).degree() == 0;
}

// Res(f, g) = lc(f)^deg(g) * prod_{f(alpha)=0} g(alpha), by the Euclidean
// remainder sequence.
inline Elem resultant(Poly f, Poly g) {
  require_same_field(f.field(), g.field());
  if (f.is_zero() || g.is_zero()) throw DomainError("resultant with a zero polynomial");
  const Field& F = *f.field();
  const Elem minus_one = F.neg(1);
  Elem acc = 1;
  for (;;) {
    const int m = f.degree(), n = g.degree();
    if (n == 0) return F.mul(acc, F.pow(g.leading(), static_cast<std::uint64_t>(m)));
    if (m == 0) return F.mul(acc, F.pow(f.leading(), static_cast<std::uint64_t>(n)));
    Poly r = f % g;
    if (r.is_zero()) return 0;
    const int k = r.degree();
    if ((static_cast<long>(m) * n) % 2 == 1) acc = F.mul(acc, minus_one);
    acc = F.mul(acc, F.pow(g.leading(), static_cast<std::uint64_t>(m - k)));
    f = std::move(g);
    g = std::move(r);
  }
}

namespace detail {

// Lagrange interpolation through (xs[i], ys[i]) with distinct xs.
inline Poly interpolate(const FieldPtr& field, const std::vector<Elem>& xs, const std::vector<Elem>& ys) {
  const Field& F = *field;
  Poly result(field);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Poly basis = Poly::constant(field, 1);
    Elem denom = 1;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (j == i) continue;
      basis = basis * Poly(field, {F.neg(xs[j]), 1});
      denom = F.mul(denom, F.sub(xs[i], xs[j]));
    }
    result = result + basis.scaled(F.div(ys[i], denom));
  }
  return result;
}

// Determinant over F_q[t] by fraction-free (Bareiss) elimination.
inline Poly bareiss_determinant(std::vector<std::vector<Poly>> m, const FieldPtr& field) {
  const std::size_t n = m.size();
  if (n == 0) return Poly::constant(field, 1);
  bool negate = false;
  Poly prev = Poly::constant(field, 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && m[r][k].is_zero()) ++r;
      if (r == n) return Poly(field);
      std::swap(m[k], m[r]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        auto [quot, rest] = divmod(m[i][j] * m[k][k] - m[i][k] * m[k][j], prev);
        if (!rest.is_zero()) throw DomainError("Bareiss division not exact");
        m[i][j] = std::move(quot);
      }
      m[i][k] = Poly(field);
    }
    prev = m[k][k];
  }
  Poly det = m[n - 1][n - 1];
  if (negate) det = Poly(field) - det;
  return det;
}

}  // namespace detail

// Sylvester-matrix route for V(t) = Res_x(s(x), T(x) - t).
inline Poly resultant_in_t_bareiss(const Poly& s, const Poly& T) {
  require_same_field(s.field(), T.field());
  const FieldPtr& field = s.field();
  const Field& F = *field;
  const int m = s.degree(), k = T.degree();
  if (s.is_zero() || T.is_zero()) throw DomainError("resultant with a zero polynomial");
  if (k == 0) throw DomainError("resultant_in_t needs a nonconstant T");
  // T(x) - t as coefficients in F_q[t].
  std::vector<Poly> tc;
  for (int i = 0; i <= k; ++i) tc.push_back(Poly::constant(field, T.coeff(static_cast<std::size_t>(i))));
  tc[0] = tc[0] - Poly(field, {0, 1});
  const std::size_t n = static_cast<std::size_t>(m + k);
  std::vector<std::vector<Poly>> sylv(n, std::vector<Poly>(n, Poly(field)));
  // k rows of s, m rows of T - t; coefficients from the leading one down.
  for (int r = 0; r < k; ++r)
    for (int i = 0; i <= m; ++i) sylv[r][r + i] = Poly::constant(field, s.coeff(static_cast<std::size_t>(m - i)));
  for (int r = 0; r < m; ++r)
    for (int i = 0; i <= k; ++i) sylv[k + r][r + i] = tc[static_cast<std::size_t>(k - i)];
  (void)F;
  return detail::bareiss_determinant(std::move(sylv), field);
}

// V(t) = Res_x(s(x), T(x) - t), a polynomial in t of degree deg(s) equal to
// lc(s)^deg(T) * prod_{s(alpha)=0} (T(alpha) - t). Interpolates through
// deg(s)+1 field points when q allows, else falls back to the Sylvester
// determinant over F_q[t].
inline Poly resultant_in_t(const Poly& s, const Poly& T) {
  require_same_field(s.field(), T.field());
  if (s.is_zero() || T.is_zero()) throw DomainError("resultant with a zero polynomial");
  if (T.degree() == 0) throw DomainError("resultant_in_t needs a nonconstant T");
  const FieldPtr& field = s.field();
  const auto m = static_cast<std::uint64_t>(s.degree());
  if (field->order() <= m) return resultant_in_t_bareiss(s, T);
  std::vector<Elem> ts, vs;
  for (Elem t = 0; t <= m; ++t) {
    ts.push_back(t);
    vs.push_back(resultant(s, T - Poly::constant(field, t)));
  }
  return detail::interpolate(field, ts, vs);
}

// Distinct roots of f lying in f's own field, ascending by encoding.
inline std::vector<Elem> roots(const Poly& f) {
  if (f.is_zero()) throw DomainError("roots of the zero polynomial");
  const FieldPtr& field = f.field();
  const Field& F = *field;
  std::vector<Elem> out;
  if (f.degree() <= 0) return out;
  if (F.order() <= 256) {
    for (Elem x = 0; x < F.order(); ++x)
      if (f.eval(x) == 0) out.push_back(x);
    return out;
  }
  const Poly X = Poly::x(field);
  const Poly fm = monic(f);
  Poly split = gcd(fm, pow_mod(X, F.order(), fm) - X);
  Rng rng(0x5eed);
  std::vector<Poly> stack{split};
  while (!stack.empty()) {
    Poly g = std::move(stack.back());
    stack.pop_back();
    if (g.degree() <= 0) continue;
    if (g.degree() == 1) {
      out.push_back(F.neg(monic(g).coeff(0)));
      continue;
    }
    for (;;) {
      const Elem beta = static_cast<Elem>(rng.below(F.order()));
      Poly h(field);
      if (F.characteristic() == 2) {
        Poly y = Poly(field, {0, beta}) % g;
        h = y;
        for (std::uint32_t i = 1; i < F.degree(); ++i) {
          y = (y * y) % g;
          h = h + y;
        }
      } else {
        h = pow_mod(Poly(field, {beta, 1}), (F.order() - 1) / 2, g) - Poly::constant(field, 1);
      }
      if (h.is_zero()) continue;
      Poly d = gcd(g, h);
      if (d.degree() > 0 && d.degree() < g.degree()) {
        stack.push_back(g / d);
        stack.push_back(std::move(d));
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace cdiff
