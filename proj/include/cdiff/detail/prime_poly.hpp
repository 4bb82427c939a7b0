#pragma once

// Dense polynomials over the prime field GF(p), coefficients low to high.
// Used to validate moduli and to implement generic extension-field
// multiplication before any Field object exists.

#include <cstdint>
#include <utility>
#include <vector>

namespace cdiff::detail {

using PrimePoly = std::vector<std::uint64_t>;

inline void trim(PrimePoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t result = 1 % p;
  base %= p;
  while (exp > 0) {
    if (exp & 1) result = result * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return result;
}

inline std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p) { return mod_pow(a, p - 2, p); }

inline PrimePoly mul(const PrimePoly& f, const PrimePoly& g, std::uint64_t p) {
  if (f.empty() || g.empty()) return {};
  PrimePoly r(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) r[i + j] = (r[i + j] + f[i] * g[j]) % p;
  }
  trim(r);
  return r;
}

inline PrimePoly sub(PrimePoly f, const PrimePoly& g, std::uint64_t p) {
  if (f.size() < g.size()) f.resize(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = (f[i] + p - g[i]) % p;
  trim(f);
  return f;
}

// Returns (quotient, remainder). g must be nonzero.
inline std::pair<PrimePoly, PrimePoly> divmod(PrimePoly f, const PrimePoly& g, std::uint64_t p) {
  trim(f);
  if (f.size() < g.size()) return {{}, f};
  const std::uint64_t lead_inv = mod_inv(g.back(), p);
  PrimePoly q(f.size() - g.size() + 1, 0);
  for (std::size_t k = f.size(); k-- >= g.size();) {
    const std::uint64_t coef = f[k] * lead_inv % p;
    const std::size_t shift = k - (g.size() - 1);
    q[shift] = coef;
    if (coef == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) f[shift + j] = (f[shift + j] + p - coef * g[j] % p) % p;
  }
  trim(q);
  trim(f);
  return {q, f};
}

inline PrimePoly rem(const PrimePoly& f, const PrimePoly& g, std::uint64_t p) {
  return divmod(f, g, p).second;
}

inline PrimePoly monic(PrimePoly f, std::uint64_t p) {
  if (f.empty()) return f;
  const std::uint64_t inv = mod_inv(f.back(), p);
  for (auto& c : f) c = c * inv % p;
  return f;
}

inline PrimePoly gcd(PrimePoly f, PrimePoly g, std::uint64_t p) {
  trim(f);
  trim(g);
  while (!g.empty()) {
    PrimePoly r = rem(f, g, p);
    f = std::move(g);
    g = std::move(r);
  }
  return monic(f, p);
}

inline PrimePoly pow_mod(PrimePoly base, std::uint64_t exp, const PrimePoly& modulus, std::uint64_t p) {
  PrimePoly result{1};
  base = rem(base, modulus, p);
  while (exp > 0) {
    if (exp & 1) result = rem(mul(result, base, p), modulus, p);
    base = rem(mul(base, base, p), modulus, p);
    exp >>= 1;
  }
  return result;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Rabin's test: f of degree n is irreducible iff x^(p^n) = x mod f and
// gcd(x^(p^(n/r)) - x, f) = 1 for every prime r dividing n.
inline bool is_irreducible(const PrimePoly& f, std::uint64_t p) {
  if (f.size() < 2) return false;
  const std::size_t n = f.size() - 1;
  if (n == 1) return true;
  const PrimePoly g = monic(f, p);
  const PrimePoly x{0, 1};
  // frob[k] = x^(p^k) mod g
  std::vector<PrimePoly> frob(n + 1);
  frob[0] = rem(x, g, p);
  for (std::size_t k = 1; k <= n; ++k) frob[k] = pow_mod(frob[k - 1], p, g, p);
  if (sub(frob[n], x, p) != PrimePoly{}) return false;
  for (std::uint64_t r : prime_factors(n)) {
    const PrimePoly h = sub(frob[n / r], x, p);
    if (gcd(g, h, p).size() != 1) return false;
  }
  return true;
}

}  // namespace cdiff::detail
