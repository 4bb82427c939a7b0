#pragma once

// Classical, c- and circ_c-difference distribution tables.
//
//   c-DDT[a, b]    = #{x : F(x + a) - c F(x) = b}
//   circ-DDT[a, b] = #{x : F(x + c a) = b + c F(x)}  (a circ_c b := a + c b)
//
// c_delta is the maximum c-DDT entry, skipping the row a = 0 only when c = 1.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdiff/detail/parallel.hpp"
#include "cdiff/field.hpp"
#include "cdiff/poly.hpp"

namespace cdiff {

// Dense q x q tables are only materialized up to this order.
inline constexpr std::uint64_t kDenseTableCap = std::uint64_t{1} << 12;

class FunctionTable {
 public:
  FunctionTable(FieldPtr field, std::vector<Elem> values) : field_(std::move(field)), values_(std::move(values)) {
    if (values_.size() != field_->order()) throw DomainError("function table length must equal the field order");
    for (Elem v : values_)
      if (!field_->contains(v)) throw DomainError("function value out of range for field");
  }

  static FunctionTable from_poly(const Poly& f) {
    const FieldPtr& field = f.field();
    std::vector<Elem> v(field->order());
    for (Elem x = 0; x < field->order(); ++x) v[x] = f.eval(x);
    return FunctionTable(field, std::move(v));
  }

  static FunctionTable identity(const FieldPtr& field) {
    std::vector<Elem> v(field->order());
    for (Elem x = 0; x < field->order(); ++x) v[x] = x;
    return FunctionTable(field, std::move(v));
  }

  const FieldPtr& field() const { return field_; }
  std::span<const Elem> values() const { return values_; }
  Elem operator()(Elem x) const { return values_[x]; }
  std::size_t size() const { return values_.size(); }

  bool is_permutation() const {
    std::vector<bool> seen(values_.size(), false);
    for (Elem v : values_) {
      if (seen[v]) return false;
      seen[v] = true;
    }
    return true;
  }

  FunctionTable inverse() const {
    if (!is_permutation()) throw DomainError("function is not a permutation");
    std::vector<Elem> inv(values_.size());
    for (Elem x = 0; x < values_.size(); ++x) inv[values_[x]] = x;
    return FunctionTable(field_, std::move(inv));
  }

  friend bool operator==(const FunctionTable& a, const FunctionTable& b) {
    return same_field(a.field_, b.field_) && a.values_ == b.values_;
  }

 private:
  FieldPtr field_;
  std::vector<Elem> values_;
};

enum class DdtKind { classical, c_ddt, circ_ddt };

inline const char* to_string(DdtKind k) {
  switch (k) {
    case DdtKind::classical: return "classical";
    case DdtKind::c_ddt: return "c-ddt";
    case DdtKind::circ_ddt: return "circ-ddt";
  }
  return "?";
}

class DdtTable {
 public:
  DdtTable(FieldPtr field, DdtKind kind, Elem c)
      : field_(std::move(field)), kind_(kind), c_(c), q_(field_->order()), counts_(q_ * q_, 0) {}

  const FieldPtr& field() const { return field_; }
  DdtKind kind() const { return kind_; }
  Elem c() const { return c_; }
  std::uint64_t order() const { return q_; }

  std::uint32_t at(Elem a, Elem b) const { return counts_[std::size_t{a} * q_ + b]; }
  std::span<const std::uint32_t> row(Elem a) const { return {counts_.data() + std::size_t{a} * q_, q_}; }
  std::span<std::uint32_t> mutable_row(Elem a) { return {counts_.data() + std::size_t{a} * q_, q_}; }

  friend bool operator==(const DdtTable& x, const DdtTable& y) {
    return same_field(x.field_, y.field_) && x.counts_ == y.counts_;
  }

 private:
  FieldPtr field_;
  DdtKind kind_;
  Elem c_;
  std::uint64_t q_;
  std::vector<std::uint32_t> counts_;
};

namespace detail {

// Histogram of x -> F(x + shift) - cF[x] into counts; returns its maximum.
// Stops early once `stop_at` is reached (0 disables).
inline std::uint32_t count_row(const Field& field, std::span<const Elem> values, std::span<const Elem> scaled,
                               Elem shift, std::span<std::uint32_t> counts, std::uint32_t stop_at = 0) {
  std::uint32_t best = 0;
  const std::size_t q = values.size();
  if (field.characteristic() == 2) {
    for (std::size_t x = 0; x < q; ++x) {
      const std::uint32_t c = ++counts[values[x ^ shift] ^ scaled[x]];
      if (c > best) {
        best = c;
        if (best == stop_at) break;
      }
    }
  } else {
    for (Elem x = 0; x < q; ++x) {
      const std::uint32_t c = ++counts[field.sub(values[field.add(x, shift)], scaled[x])];
      if (c > best) {
        best = c;
        if (best == stop_at) break;
      }
    }
  }
  return best;
}

inline std::vector<Elem> scale_values(const Field& field, std::span<const Elem> values, Elem c) {
  std::vector<Elem> out(values.size());
  for (std::size_t x = 0; x < values.size(); ++x) out[x] = field.mul(c, values[x]);
  return out;
}

inline void require_dense(const Field& field) {
  if (field.order() > kDenseTableCap)
    throw DomainError("dense difference tables are limited to q <= " + std::to_string(kDenseTableCap));
}

}  // namespace detail

// One pass per row: for each a, histogram F(x + a) - cF(x) over x.
inline DdtTable c_ddt(const FunctionTable& F, Elem c) {
  const Field& field = *F.field();
  if (!field.contains(c)) throw DomainError("c out of range for field");
  detail::require_dense(field);
  DdtTable table(F.field(), DdtKind::c_ddt, c);
  const auto scaled = detail::scale_values(field, F.values(), c);
  for (Elem a = 0; a < field.order(); ++a) detail::count_row(field, F.values(), scaled, a, table.mutable_row(a));
  return table;
}

inline DdtTable c_ddt(const FunctionTable& F, const FieldElement& c) {
  require_same_field(F.field(), c.field());
  return c_ddt(F, c.value());
}

// F(x + a) - F(x) = b.
inline DdtTable classical_ddt(const FunctionTable& F) {
  const Field& field = *F.field();
  detail::require_dense(field);
  DdtTable table(F.field(), DdtKind::classical, 1);
  for (Elem a = 0; a < field.order(); ++a) detail::count_row(field, F.values(), F.values(), a, table.mutable_row(a));
  return table;
}

// circ-DDT[a, b] = #{x : F(x + c a) = b + c F(x)} = c-DDT[c a, b].
inline DdtTable circ_ddt(const FunctionTable& F, Elem c) {
  const Field& field = *F.field();
  if (!field.contains(c)) throw DomainError("c out of range for field");
  if (c == 0) throw DomainError("circ-DDT undefined for c = 0 (x circ a = x for every a)");
  detail::require_dense(field);
  DdtTable table(F.field(), DdtKind::circ_ddt, c);
  const auto scaled = detail::scale_values(field, F.values(), c);
  for (Elem a = 0; a < field.order(); ++a)
    detail::count_row(field, F.values(), scaled, field.mul(c, a), table.mutable_row(a));
  return table;
}

inline DdtTable circ_ddt(const FunctionTable& F, const FieldElement& c) {
  require_same_field(F.field(), c.field());
  return circ_ddt(F, c.value());
}

struct Uniformity {
  std::uint32_t delta = 0;
  // The maximum occurs in row a = 0 and in no other row (possible for c != 1).
  bool only_at_a0 = false;
};

struct UniformityOptions {
  // Exclude the row a = 0 for every c, as the circ_c convention does.
  bool exclude_zero_row = false;
  // A proven upper bound on every admissible entry; the scan stops once it is
  // reached. 0 disables. For F given by a polynomial of degree d >= 1 and
  // c != 1 every entry is at most d.
  std::uint32_t known_bound = 0;
};

// Streams rows, keeping O(q) memory. Rows a != 0 are scanned first, then a = 0.
inline Uniformity c_uniformity_detail(const FunctionTable& F, Elem c, UniformityOptions opt = {}) {
  const Field& field = *F.field();
  if (!field.contains(c)) throw DomainError("c out of range for field");
  const auto scaled = detail::scale_values(field, F.values(), c);
  std::vector<std::uint32_t> counts(field.order(), 0);
  std::uint32_t best_nonzero = 0;
  for (Elem a = 1; a < field.order(); ++a) {
    const std::uint32_t m = detail::count_row(field, F.values(), scaled, a, counts, opt.known_bound);
    std::fill(counts.begin(), counts.end(), 0);
    best_nonzero = std::max(best_nonzero, m);
    if (opt.known_bound != 0 && best_nonzero >= opt.known_bound) return {best_nonzero, false};
  }
  if (c == 1 || opt.exclude_zero_row) return {best_nonzero, false};
  const std::uint32_t m0 = detail::count_row(field, F.values(), scaled, 0, counts);
  return {std::max(best_nonzero, m0), m0 > best_nonzero};
}

inline std::uint32_t c_uniformity(const FunctionTable& F, Elem c) { return c_uniformity_detail(F, c).delta; }

inline std::uint32_t c_uniformity(const FunctionTable& F, const FieldElement& c) {
  require_same_field(F.field(), c.field());
  return c_uniformity(F, c.value());
}

// Maximum of the circ-DDT over rows with c a != 0.
inline std::uint32_t circ_uniformity(const FunctionTable& F, Elem c) {
  if (c == 0) throw DomainError("circ-uniformity undefined for c = 0");
  return c_uniformity_detail(F, c, {.exclude_zero_row = true}).delta;
}

// Maximum entry of a materialized table under the c-DDT convention.
inline std::uint32_t table_uniformity(const DdtTable& t) {
  std::uint32_t best = 0;
  const bool skip_zero = t.kind() != DdtKind::c_ddt || t.c() == 1;
  for (Elem a = skip_zero ? 1 : 0; a < t.order(); ++a)
    for (std::uint32_t v : t.row(a)) best = std::max(best, v);
  return best;
}

inline double bound_main(int d) { return 4.0 * d * d; }

inline double bound_pcn(int d) {
  return std::max(6.3 * std::pow(static_cast<double>(d), 13.0 / 3.0), static_cast<double>((d - 2) * (d - 2)));
}

struct SpectrumReport {
  FieldPtr field;
  std::string function;  // polynomial text, when known
  int d = 0;
  std::vector<std::uint32_t> delta;  // indexed by c
  std::vector<Elem> pcn_set;
  std::vector<Elem> a0_only;  // c whose maximum sits only in row a = 0
  std::uint64_t bad_c_count = 0;  // #{c : delta < d}, every c in F_q
  std::uint64_t attains_d_count = 0;
  double bound_4d2 = 0;
  double bound_pcn = 0;

  std::uint32_t delta_c0() const { return delta.at(0); }
  std::uint32_t delta_c1() const { return delta.at(1); }
};

// c_delta for every c in F_q. `d` must be at least the polynomial degree of F
// when F comes from a polynomial; it enables the early stop at d for c != 1.
// Results do not depend on `workers`.
inline SpectrumReport spectrum(const FunctionTable& F, int d, unsigned workers = 1, std::string description = {}) {
  const Field& field = *F.field();
  SpectrumReport rep;
  rep.field = F.field();
  rep.function = std::move(description);
  rep.d = d;
  rep.delta.assign(field.order(), 0);
  std::vector<char> only_a0(field.order(), 0);
  detail::parallel_for(field.order(), workers, [&](std::size_t i) {
    const auto c = static_cast<Elem>(i);
    UniformityOptions opt;
    if (c != 1 && d >= 1) opt.known_bound = static_cast<std::uint32_t>(d);
    const auto u = c_uniformity_detail(F, c, opt);
    rep.delta[i] = u.delta;
    only_a0[i] = u.only_at_a0;
  });
  for (Elem c = 0; c < field.order(); ++c) {
    if (rep.delta[c] == 1) rep.pcn_set.push_back(c);
    if (only_a0[c]) rep.a0_only.push_back(c);
    if (static_cast<int>(rep.delta[c]) < d) ++rep.bad_c_count;
    if (static_cast<int>(rep.delta[c]) == d) ++rep.attains_d_count;
  }
  rep.bound_4d2 = bound_main(d);
  rep.bound_pcn = bound_pcn(d);
  return rep;
}

inline SpectrumReport spectrum(const Poly& f, unsigned workers = 1) {
  if (f.is_zero()) throw DomainError("spectrum of the zero polynomial");
  return spectrum(FunctionTable::from_poly(f), f.degree(), workers, f.to_string());
}

}  // namespace cdiff
