#pragma once

// Affine permutations A(x) = L(x) + s of GF(p^n), with L linearized:
// L(x) = sum_i a_i x^(p^i), and how composing with them moves c-DDT entries.
//
//   input side   cDDT_{F o A}[a, b] = cDDT_F[L(a), b]                 (any c)
//   output side  cDDT_{A o F}[a, L(b) + (1 - c)s] = cDDT_F[a, b]      (when L(cx) = cL(x))

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cdiff/detail/parallel.hpp"
#include "cdiff/difftab.hpp"
#include "cdiff/rng.hpp"

namespace cdiff {

class AffineMap {
 public:
  AffineMap(FieldPtr field, std::vector<Elem> coeffs, Elem s = 0)
      : field_(std::move(field)), coeffs_(std::move(coeffs)), s_(s) {
    if (coeffs_.size() != field_->degree()) throw DomainError("affine map needs exactly n linearized coefficients");
    for (Elem a : coeffs_)
      if (!field_->contains(a)) throw DomainError("coefficient out of range for field");
    if (!field_->contains(s_)) throw DomainError("constant out of range for field");
  }

  static AffineMap identity(const FieldPtr& field) { return translation(field, 0); }

  static AffineMap translation(const FieldPtr& field, Elem s) {
    std::vector<Elem> a(field->degree(), 0);
    a[0] = 1;
    return AffineMap(field, std::move(a), s);
  }

  const FieldPtr& field() const { return field_; }
  const std::vector<Elem>& coeffs() const { return coeffs_; }
  Elem constant() const { return s_; }
  AffineMap linear_part() const { return AffineMap(field_, coeffs_, 0); }

  Elem linear(Elem x) const {
    const Field& F = *field_;
    Elem acc = 0;
    for (Elem a : coeffs_) {
      if (a != 0) acc = F.add(acc, F.mul(a, x));
      x = F.frobenius(x);
    }
    return acc;
  }

  Elem operator()(Elem x) const { return field_->add(linear(x), s_); }

  // Column j holds the coordinates of L(p^j-th basis vector).
  std::vector<std::vector<std::uint64_t>> matrix() const {
    const Field& F = *field_;
    const std::size_t n = F.degree();
    std::vector<std::vector<std::uint64_t>> m(n, std::vector<std::uint64_t>(n));
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<Elem> e(n, 0);
      e[j] = 1;
      const auto col = F.digits(linear(F.from_digits(e)));
      for (std::size_t i = 0; i < n; ++i) m[i][j] = col[i];
    }
    return m;
  }

  std::size_t rank() const {
    const std::uint64_t p = field_->characteristic();
    auto m = matrix();
    const std::size_t n = m.size();
    std::size_t r = 0;
    for (std::size_t col = 0; col < n && r < n; ++col) {
      std::size_t piv = r;
      while (piv < n && m[piv][col] == 0) ++piv;
      if (piv == n) continue;
      std::swap(m[piv], m[r]);
      const std::uint64_t inv = detail::mod_inv(m[r][col], p);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == r || m[i][col] == 0) continue;
        const std::uint64_t f = m[i][col] * inv % p;
        for (std::size_t k = col; k < n; ++k) m[i][k] = (m[i][k] + (p - f) * m[r][k]) % p;
      }
      ++r;
    }
    return r;
  }

  bool invertible() const { return rank() == field_->degree(); }

  // M with M(L(x)) = x solves sum_j b_j a_{k-j}^(p^j) = [k = 0] over F_q.
  AffineMap inverse() const {
    const Field& F = *field_;
    const std::size_t n = F.degree();
    std::vector<std::vector<Elem>> m(n, std::vector<Elem>(n + 1, 0));
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Elem v = coeffs_[(k + n - j) % n];
        for (std::size_t t = 0; t < j; ++t) v = F.frobenius(v);
        m[k][j] = v;
      }
    }
    m[0][n] = 1;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      while (piv < n && m[piv][col] == 0) ++piv;
      if (piv == n) throw DomainError("affine map is not invertible");
      std::swap(m[piv], m[col]);
      const Elem inv = F.inv(m[col][col]);
      for (std::size_t k = col; k <= n; ++k) m[col][k] = F.mul(m[col][k], inv);
      for (std::size_t i = 0; i < n; ++i) {
        if (i == col || m[i][col] == 0) continue;
        const Elem f = m[i][col];
        for (std::size_t k = col; k <= n; ++k) m[i][k] = F.sub(m[i][k], F.mul(f, m[col][k]));
      }
    }
    std::vector<Elem> b(n);
    for (std::size_t j = 0; j < n; ++j) b[j] = m[j][n];
    AffineMap lin(field_, std::move(b), 0);
    // A^{-1}(y) = M(y) - M(s).
    return AffineMap(field_, lin.coeffs_, F.neg(lin.linear(s_)));
  }

  FunctionTable table() const {
    std::vector<Elem> v(field_->order());
    for (Elem x = 0; x < field_->order(); ++x) v[x] = (*this)(x);
    return FunctionTable(field_, std::move(v));
  }

  // "L=[a_0,...,a_{n-1}] s=<elem>"
  std::string to_string() const {
    std::ostringstream os;
    os << "L=[";
    for (std::size_t i = 0; i < coeffs_.size(); ++i) os << (i ? "," : "") << coeffs_[i];
    os << "] s=" << s_;
    return os.str();
  }

  friend bool operator==(const AffineMap& x, const AffineMap& y) {
    return same_field(x.field_, y.field_) && x.coeffs_ == y.coeffs_ && x.s_ == y.s_;
  }

 private:
  FieldPtr field_;
  std::vector<Elem> coeffs_;
  Elem s_;
};

inline AffineMap parse_affine(const FieldPtr& field, const std::string& text) {
  const auto lpos = text.find("L=[");
  const auto close = text.find(']', lpos == std::string::npos ? 0 : lpos);
  const auto spos = text.find("s=", close == std::string::npos ? 0 : close);
  if (lpos == std::string::npos || close == std::string::npos || spos == std::string::npos)
    throw ParseError("affine map must look like L=[a_0,...,a_{n-1}] s=<elem>");
  std::vector<Elem> coeffs;
  std::stringstream list(text.substr(lpos + 3, close - lpos - 3));
  std::string item;
  try {
    while (std::getline(list, item, ',')) coeffs.push_back(static_cast<Elem>(std::stoull(item)));
    return AffineMap(field, std::move(coeffs), static_cast<Elem>(std::stoull(text.substr(spos + 2))));
  } catch (const std::logic_error&) {
    throw ParseError("bad number in affine map '" + text + "'");
  }
}

// L(cx) = cL(x) for all x iff every nonzero a_i has l | i, l = [F_p(c) : F_p].
inline bool commutes_with_scalar(const AffineMap& A, Elem c) {
  const std::uint32_t l = A.field()->subfield_degree(c);
  for (std::size_t i = 0; i < A.coeffs().size(); ++i)
    if (A.coeffs()[i] != 0 && i % l != 0) return false;
  return true;
}

// Uniform over invertible maps; rejection on the rank.
inline AffineMap random_affine(const FieldPtr& field, Rng& rng) {
  for (;;) {
    std::vector<Elem> a(field->degree());
    for (auto& x : a) x = static_cast<Elem>(rng.below(field->order()));
    AffineMap A(field, std::move(a), static_cast<Elem>(rng.below(field->order())));
    if (A.invertible()) return A;
  }
}

inline AffineMap random_affine(const FieldPtr& field, std::uint64_t seed) {
  Rng rng(seed);
  return random_affine(field, rng);
}

// Random invertible map that is linear over F_{p^l}: a_i = 0 unless l | i.
inline AffineMap random_affine_over_subfield(const FieldPtr& field, std::uint32_t l, Rng& rng) {
  if (l == 0 || field->degree() % l != 0) throw DomainError("subfield degree must divide n");
  for (;;) {
    std::vector<Elem> a(field->degree(), 0);
    for (std::size_t i = 0; i < a.size(); i += l) a[i] = static_cast<Elem>(rng.below(field->order()));
    AffineMap A(field, std::move(a), static_cast<Elem>(rng.below(field->order())));
    if (A.invertible()) return A;
  }
}

enum class Side { input, output };

// input: x -> F(A(x)); output: x -> A(F(x)).
inline FunctionTable compose_tables(const FunctionTable& F, const AffineMap& A, Side side) {
  require_same_field(F.field(), A.field());
  std::vector<Elem> v(F.size());
  for (Elem x = 0; x < F.size(); ++x) v[x] = side == Side::input ? F(A(x)) : A(F(x));
  return FunctionTable(F.field(), std::move(v));
}

struct InputInvarianceReport {
  bool holds = false;  // cDDT_{F o A}[a, b] = cDDT_F[L(a), b] everywhere
  bool literal_holds = false;  // cDDT_F[a, b] = cDDT_{F o A}[L(a), b] everywhere
  std::uint64_t literal_mismatches = 0;
  std::uint32_t delta_F = 0;
  std::uint32_t delta_FA = 0;
};

inline InputInvarianceReport verify_input_invariance(const FunctionTable& F, const AffineMap& A, Elem c) {
  require_same_field(F.field(), A.field());
  if (!A.invertible()) throw DomainError("affine map is not invertible");
  const DdtTable tf = c_ddt(F, c), tfa = c_ddt(compose_tables(F, A, Side::input), c);
  const std::uint64_t q = F.size();
  InputInvarianceReport r;
  r.holds = true;
  for (Elem a = 0; a < q; ++a) {
    const Elem La = A.linear(a);
    for (Elem b = 0; b < q; ++b) {
      if (tfa.at(a, b) != tf.at(La, b)) r.holds = false;
      if (tf.at(a, b) != tfa.at(La, b)) ++r.literal_mismatches;
    }
  }
  r.literal_holds = r.literal_mismatches == 0;
  r.delta_F = table_uniformity(tf);
  r.delta_FA = table_uniformity(tfa);
  return r;
}

struct OutputInvarianceReport {
  bool commutes = false;
  bool column_bijection_holds = false;  // cDDT_{A o F}[a, L(b) + (1-c)s] = cDDT_F[a, b] everywhere
  bool delta_equal = false;
  std::uint32_t delta_F = 0;
  std::uint32_t delta_AF = 0;
  std::optional<std::pair<Elem, Elem>> first_mismatch;  // (a, b) of the first column-bijection failure
};

inline OutputInvarianceReport verify_output_invariance(const FunctionTable& F, const AffineMap& A, Elem c) {
  require_same_field(F.field(), A.field());
  if (!A.invertible()) throw DomainError("affine map is not invertible");
  const Field& K = *F.field();
  const DdtTable tf = c_ddt(F, c), taf = c_ddt(compose_tables(F, A, Side::output), c);
  const Elem shift_b = K.mul(K.sub(1, c), A.constant());
  const std::uint64_t q = F.size();
  OutputInvarianceReport r;
  r.commutes = commutes_with_scalar(A, c);
  r.column_bijection_holds = true;
  for (Elem a = 0; a < q && r.column_bijection_holds; ++a)
    for (Elem b = 0; b < q; ++b)
      if (taf.at(a, K.add(A.linear(b), shift_b)) != tf.at(a, b)) {
        r.column_bijection_holds = false;
        r.first_mismatch = std::pair{a, b};
        break;
      }
  r.delta_F = table_uniformity(tf);
  r.delta_AF = table_uniformity(taf);
  r.delta_equal = r.delta_F == r.delta_AF;
  return r;
}

struct OutputCounterexample {
  std::uint64_t trial = 0;
  FunctionTable F;
  AffineMap A;
  Elem c = 0;
  std::uint32_t delta_F = 0;
  std::uint32_t delta_AF = 0;
};

struct CounterexampleSearch {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::optional<OutputCounterexample> witness;  // lowest trial index among hits
};

// Random F, generic invertible A with a_1 != 0 and c outside the prime field;
// looks for c-uniformity changing under output composition.
inline CounterexampleSearch search_output_counterexample(const FieldPtr& field, std::uint64_t trials,
                                                         std::uint64_t seed, unsigned workers = 1) {
  if (field->degree() < 2) throw DomainError("need n >= 2 for c outside the prime field");
  const Rng root(seed);
  std::vector<std::optional<OutputCounterexample>> found(trials);
  detail::parallel_for(trials, workers, [&](std::size_t i) {
    Rng rng = root.split(i);
    std::vector<Elem> v(field->order());
    for (auto& y : v) y = static_cast<Elem>(rng.below(field->order()));
    FunctionTable F(field, std::move(v));
    AffineMap A = random_affine(field, rng);
    while (A.coeffs()[1] == 0) A = random_affine(field, rng);
    const Elem c = static_cast<Elem>(field->characteristic() + rng.below(field->order() - field->characteristic()));
    const std::uint32_t dF = c_uniformity(F, c);
    const std::uint32_t dAF = c_uniformity(compose_tables(F, A, Side::output), c);
    if (dF != dAF) found[i] = OutputCounterexample{i, std::move(F), std::move(A), c, dF, dAF};
  });
  CounterexampleSearch s;
  s.trials = trials;
  for (auto& f : found) {
    if (!f) continue;
    ++s.hits;
    if (!s.witness) s.witness = std::move(f);
  }
  return s;
}

}  // namespace cdiff
