#pragma once

// Exact arithmetic in GF(p^n).
//
// Elements are encoded as integers in [0, q) whose base-p digits are the
// coordinates in the polynomial basis 1, x, ..., x^(n-1) modulo the field's
// monic irreducible modulus. The prime subfield GF(p) is therefore encoded as
// 0..p-1 in every field of characteristic p.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cdiff/detail/prime_poly.hpp"
#include "cdiff/errors.hpp"

namespace cdiff {

using Elem = std::uint32_t;

inline constexpr std::uint64_t kDefaultOrderCap = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kLogTableCap = std::uint64_t{1} << 16;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
  struct Passkey {};

 public:
  // Use make_field(); the modulus is assumed validated.
  Field(Passkey, std::uint32_t p, std::uint32_t n, std::vector<std::uint32_t> modulus)
      : p_(p), n_(n), modulus_(std::move(modulus)) {
    q_ = 1;
    powers_.push_back(1);
    for (std::uint32_t i = 0; i < n_; ++i) {
      q_ *= p_;
      powers_.push_back(static_cast<std::uint32_t>(q_));
    }
    if (p_ == 2) {
      for (std::uint32_t i = 0; i <= n_; ++i)
        if (modulus_[i]) mod_bits_ |= std::uint64_t{1} << i;
    }
    generator_ = find_generator();
    if (q_ <= kLogTableCap) build_tables();
  }

  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree() const { return n_; }
  std::uint64_t order() const { return q_; }
  // Monic modulus, coefficients low to high (size n + 1).
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  bool contains(std::uint64_t a) const { return a < q_; }

  Elem from_int(std::int64_t k) const {
    const auto p = static_cast<std::int64_t>(p_);
    return static_cast<Elem>(((k % p) + p) % p);
  }

  std::vector<std::uint32_t> digits(Elem a) const {
    std::vector<std::uint32_t> out(n_);
    for (std::uint32_t i = 0; i < n_; ++i) {
      out[i] = a % p_;
      a /= p_;
    }
    return out;
  }

  Elem from_digits(std::span<const std::uint32_t> d) const {
    Elem r = 0;
    for (std::size_t i = d.size(); i-- > 0;) r = r * p_ + d[i] % p_;
    return r;
  }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    if (n_ == 1) return static_cast<Elem>((std::uint64_t{a} + b) % p_);
    Elem r = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
      r += ((a % p_ + b % p_) % p_) * powers_[i];
      a /= p_;
      b /= p_;
    }
    return r;
  }

  Elem neg(Elem a) const {
    if (p_ == 2) return a;
    if (n_ == 1) return a == 0 ? 0 : p_ - a;
    Elem r = 0;
    for (std::uint32_t i = 0; i < n_; ++i) {
      r += ((p_ - a % p_) % p_) * powers_[i];
      a /= p_;
    }
    return r;
  }

  Elem sub(Elem a, Elem b) const { return p_ == 2 ? a ^ b : add(a, neg(b)); }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    if (!exp_.empty()) return exp_[log_[a] + log_[b]];
    return mul_generic(a, b);
  }

  Elem pow(Elem a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    if (!exp_.empty()) return exp_[(std::uint64_t{log_[a]} * (e % (q_ - 1))) % (q_ - 1)];
    Elem result = 1;
    while (e > 0) {
      if (e & 1) result = mul_generic(result, a);
      a = mul_generic(a, a);
      e >>= 1;
    }
    return result;
  }

  // a^(q-2).
  Elem inv(Elem a) const {
    if (a == 0) throw DomainError("inverse of zero");
    if (!exp_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    return pow(a, q_ - 2);
  }

  // Extended Euclid on the coordinate polynomial against the modulus.
  Elem inv_euclid(Elem a) const {
    if (a == 0) throw DomainError("inverse of zero");
    using detail::PrimePoly;
    PrimePoly r0(modulus_.begin(), modulus_.end()), r1;
    for (auto d : digits(a)) r1.push_back(d);
    detail::trim(r1);
    PrimePoly s0{}, s1{1};
    while (!r1.empty()) {
      auto [quot, r2] = detail::divmod(r0, r1, p_);
      PrimePoly s2 = detail::sub(s0, detail::mul(quot, s1, p_), p_);
      r0 = std::move(r1);
      r1 = std::move(r2);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    // r0 is a nonzero constant since the modulus is irreducible.
    const std::uint64_t scale = detail::mod_inv(r0[0], p_);
    std::vector<std::uint32_t> out(n_, 0);
    for (std::size_t i = 0; i < s0.size() && i < n_; ++i) out[i] = static_cast<std::uint32_t>(s0[i] * scale % p_);
    return from_digits(out);
  }

  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  // x -> x^p.
  Elem frobenius(Elem a) const { return pow(a, p_); }

  // x -> x^(p^(n-1)), the inverse of frobenius().
  Elem frobenius_inverse(Elem a) const { return pow(a, q_ / p_); }

  Elem primitive_element() const { return generator_; }

  std::uint64_t multiplicative_order(Elem a) const {
    if (a == 0) throw DomainError("zero has no multiplicative order");
    std::uint64_t order = q_ - 1;
    for (std::uint64_t r : detail::prime_factors(q_ - 1)) {
      while (order % r == 0 && pow(a, order / r) == 1) order /= r;
    }
    return order;
  }

  // Minimal l >= 1 with c^(p^l) = c, i.e. [GF(p)(c) : GF(p)]. Divides n.
  std::uint32_t subfield_degree(Elem c) const {
    Elem x = frobenius(c);
    std::uint32_t l = 1;
    while (x != c) {
      x = frobenius(x);
      ++l;
    }
    return l;
  }

  // "p=2 n=8 mod=100011011": modulus digits most significant first. For
  // p > 10 the digits are written in decimal separated by '.'.
  std::string descriptor() const {
    std::ostringstream os;
    os << "p=" << p_ << " n=" << n_ << " mod=";
    for (std::size_t i = modulus_.size(); i-- > 0;) {
      os << modulus_[i];
      if (p_ > 10 && i > 0) os << '.';
    }
    return os.str();
  }

  friend bool operator==(const Field& a, const Field& b) {
    return a.p_ == b.p_ && a.n_ == b.n_ && a.modulus_ == b.modulus_;
  }

 private:
  Elem mul_generic(Elem a, Elem b) const {
    if (p_ == 2) {
      std::uint64_t r = 0;
      for (std::uint32_t i = 0; b >> i; ++i)
        if ((b >> i) & 1) r ^= std::uint64_t{a} << i;
      for (std::uint32_t i = 2 * n_; i-- > n_;)
        if ((r >> i) & 1) r ^= mod_bits_ << (i - n_);
      return static_cast<Elem>(r);
    }
    if (n_ == 1) return static_cast<Elem>(std::uint64_t{a} * b % p_);
    const auto da = digits(a), db = digits(b);
    std::vector<std::uint64_t> prod(2 * n_ - 1, 0);
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (da[i] == 0) continue;
      for (std::uint32_t j = 0; j < n_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{da[i]} * db[j]) % p_;
    }
    for (std::uint32_t k = 2 * n_ - 1; k-- > n_;) {
      const std::uint64_t c = prod[k];
      if (c == 0) continue;
      for (std::uint32_t j = 0; j <= n_; ++j)
        prod[k - n_ + j] = (prod[k - n_ + j] + (p_ - c) * modulus_[j]) % p_;
    }
    Elem r = 0;
    for (std::uint32_t i = n_; i-- > 0;) r = r * p_ + static_cast<Elem>(prod[i]);
    return r;
  }

  Elem pow_generic(Elem a, std::uint64_t e) const {
    Elem result = 1;
    while (e > 0) {
      if (e & 1) result = mul_generic(result, a);
      a = mul_generic(a, a);
      e >>= 1;
    }
    return result;
  }

  Elem find_generator() const {
    if (q_ == 2) return 1;
    const auto factors = detail::prime_factors(q_ - 1);
    for (Elem g = 1; g < q_; ++g) {
      bool ok = true;
      for (std::uint64_t r : factors) {
        if (pow_generic(g, (q_ - 1) / r) == 1) {
          ok = false;
          break;
        }
      }
      if (ok) return g;
    }
    throw FieldError("no primitive element found");  // unreachable for a valid field
  }

  void build_tables() {
    const std::uint64_t order = q_ - 1;
    exp_.assign(2 * order, 0);
    log_.assign(q_, 0);
    Elem x = 1;
    for (std::uint64_t i = 0; i < order; ++i) {
      exp_[i] = x;
      exp_[i + order] = x;
      log_[x] = static_cast<std::uint32_t>(i);
      x = mul_generic(x, generator_);
    }
  }

  std::uint32_t p_;
  std::uint32_t n_;
  std::uint64_t q_ = 1;
  std::vector<std::uint32_t> modulus_;
  std::vector<std::uint32_t> powers_;
  std::uint64_t mod_bits_ = 0;
  Elem generator_ = 1;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;

  friend FieldPtr make_field(std::uint32_t, std::uint32_t, std::optional<std::vector<std::uint32_t>>,
                             std::uint64_t);
};

namespace detail {

inline std::vector<std::uint32_t> smallest_irreducible(std::uint32_t p, std::uint32_t n) {
  static std::mutex mutex;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::uint32_t>> memo;
  std::lock_guard lock(mutex);
  if (auto it = memo.find({p, n}); it != memo.end()) return it->second;

  std::vector<std::uint32_t> result;
  if (n == 1) {
    result = {0, 1};
  } else {
    std::uint64_t total = 1;
    for (std::uint32_t i = 0; i < n; ++i) total *= p;
    // Candidates ordered by the base-p value of the lower coefficients with
    // x^(n-1) most significant, i.e. the descriptor string order.
    for (std::uint64_t v = 1; v < total; ++v) {
      if (v % p == 0) continue;  // divisible by x
      PrimePoly cand(n + 1, 0);
      std::uint64_t w = v;
      for (std::uint32_t i = 0; i < n; ++i) {
        cand[i] = w % p;
        w /= p;
      }
      cand[n] = 1;
      if (is_irreducible(cand, p)) {
        result.assign(cand.begin(), cand.end());
        break;
      }
    }
  }
  memo[{p, n}] = result;
  return result;
}

}  // namespace detail

// Validated GF(p^n). With no modulus, the smallest monic irreducible of
// degree n (descriptor order) is used.
inline FieldPtr make_field(std::uint32_t p, std::uint32_t n,
                           std::optional<std::vector<std::uint32_t>> modulus = std::nullopt,
                           std::uint64_t order_cap = kDefaultOrderCap) {
  if (!detail::is_prime(p)) throw FieldError("characteristic " + std::to_string(p) + " is not prime");
  if (n < 1) throw FieldError("extension degree must be at least 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < n; ++i) {
    q *= p;
    if (q > order_cap) throw FieldError("field order exceeds cap " + std::to_string(order_cap));
  }
  std::vector<std::uint32_t> mod;
  if (modulus) {
    mod = *modulus;
    if (mod.size() != n + 1) throw FieldError("modulus must have degree exactly n");
    for (auto c : mod)
      if (c >= p) throw FieldError("modulus coefficient out of range");
    if (mod.back() != 1) throw FieldError("modulus must be monic");
    if (!detail::is_irreducible(detail::PrimePoly(mod.begin(), mod.end()), p))
      throw FieldError("modulus is reducible over GF(" + std::to_string(p) + ")");
  } else {
    mod = detail::smallest_irreducible(p, n);
  }
  return std::make_shared<const Field>(Field::Passkey{}, p, n, std::move(mod));
}

// Parses "p=2 n=8 mod=100011011" or "p=2 n=8" (default modulus).
inline FieldPtr parse_field(const std::string& text, std::uint64_t order_cap = kDefaultOrderCap) {
  std::istringstream is(text);
  std::string token;
  std::optional<std::uint32_t> p, n;
  std::optional<std::string> mod_text;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw ParseError("malformed field descriptor token '" + token + "'");
    const std::string key = token.substr(0, eq), value = token.substr(eq + 1);
    try {
      if (key == "p") p = static_cast<std::uint32_t>(std::stoul(value));
      else if (key == "n") n = static_cast<std::uint32_t>(std::stoul(value));
      else if (key == "mod") mod_text = value;
      else throw ParseError("unknown field descriptor key '" + key + "'");
    } catch (const std::logic_error&) {
      throw ParseError("malformed field descriptor value '" + token + "'");
    }
  }
  if (!p || !n) throw ParseError("field descriptor needs p= and n=");
  std::optional<std::vector<std::uint32_t>> modulus;
  if (mod_text) {
    std::vector<std::uint32_t> msb_first;
    if (*p > 10) {
      std::istringstream ds(*mod_text);
      std::string part;
      try {
        while (std::getline(ds, part, '.')) msb_first.push_back(static_cast<std::uint32_t>(std::stoul(part)));
      } catch (const std::logic_error&) {
        throw ParseError("bad modulus digit '" + part + "'");
      }
    } else {
      for (char ch : *mod_text) {
        if (ch < '0' || ch > '9') throw ParseError("bad modulus digit");
        msb_first.push_back(static_cast<std::uint32_t>(ch - '0'));
      }
    }
    modulus = std::vector<std::uint32_t>(msb_first.rbegin(), msb_first.rend());
  }
  return make_field(*p, *n, modulus, order_cap);
}

inline bool same_field(const FieldPtr& a, const FieldPtr& b) { return a == b || (a && b && *a == *b); }

inline void require_same_field(const FieldPtr& a, const FieldPtr& b) {
  if (!same_field(a, b)) throw FieldMismatch();
}

// A value bound to its field. Mixing fields throws FieldMismatch.
class FieldElement {
 public:
  FieldElement(FieldPtr field, std::uint64_t value) : field_(std::move(field)), value_(static_cast<Elem>(value)) {
    if (!field_->contains(value)) throw DomainError("encoding out of range for field");
  }

  const FieldPtr& field() const { return field_; }
  Elem value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  FieldElement inv() const { return {field_, field_->inv(value_)}; }
  FieldElement pow(std::uint64_t e) const { return {field_, field_->pow(value_, e)}; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b) {
    require_same_field(a.field_, b.field_);
    return {a.field_, a.field_->add(a.value_, b.value_)};
  }
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b) {
    require_same_field(a.field_, b.field_);
    return {a.field_, a.field_->sub(a.value_, b.value_)};
  }
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b) {
    require_same_field(a.field_, b.field_);
    return {a.field_, a.field_->mul(a.value_, b.value_)};
  }
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b) {
    require_same_field(a.field_, b.field_);
    return {a.field_, a.field_->div(a.value_, b.value_)};
  }
  FieldElement operator-() const { return {field_, field_->neg(value_)}; }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return same_field(a.field_, b.field_) && a.value_ == b.value_;
  }

 private:
  FieldPtr field_;
  Elem value_;
};

}  // namespace cdiff
