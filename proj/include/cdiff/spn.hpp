#pragma once

// Toy key-alternating SPN over GF(2^n): one full-block S-box per round.
//   state = m; for i in 1..r: state = L(S(state + k_{i-1}));  c = state + k_r
// plus the classical last-round differential attack and the c-difference
// experiment where differences are taken with a o_c b = a + cb and its
// inverse a o̅_c b = a - cb.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "cdiff/affine.hpp"
#include "cdiff/detail/parallel.hpp"
#include "cdiff/difftab.hpp"
#include "cdiff/rng.hpp"

namespace cdiff {

struct SpnSpec {
  FieldPtr field;
  std::uint32_t rounds = 1;
  FunctionTable sbox;
  AffineMap linear;
  std::vector<Elem> keys;  // k_0 .. k_r
};

class Spn {
 public:
  explicit Spn(SpnSpec spec) : spec_(std::move(spec)) {
    const Field& F = *spec_.field;
    if (F.characteristic() != 2) throw DomainError("SPN blocks live in GF(2^n)");
    if (spec_.rounds < 1) throw DomainError("SPN needs at least one round");
    require_same_field(spec_.field, spec_.sbox.field());
    require_same_field(spec_.field, spec_.linear.field());
    if (!spec_.sbox.is_permutation()) throw DomainError("S-box is not a permutation");
    if (spec_.linear.constant() != 0) throw DomainError("linear layer must have s = 0");
    if (!spec_.linear.invertible()) throw DomainError("linear layer is not invertible");
    if (spec_.keys.size() != spec_.rounds + 1) throw DomainError("need r + 1 round keys");
    for (Elem k : spec_.keys)
      if (!F.contains(k)) throw DomainError("round key out of range for field");
    const auto n = F.order();
    sbox_inv_.resize(n);
    lin_.resize(n);
    lin_inv_.resize(n);
    for (Elem x = 0; x < n; ++x) {
      sbox_inv_[spec_.sbox(x)] = x;
      lin_[x] = spec_.linear.linear(x);
    }
    for (Elem x = 0; x < n; ++x) lin_inv_[lin_[x]] = x;
  }

  const SpnSpec& spec() const { return spec_; }

  Elem encrypt(Elem m) const { return encrypt_with(m, spec_.keys); }

  Elem encrypt_with(Elem m, const std::vector<Elem>& keys) const {
    const Field& F = *spec_.field;
    for (std::uint32_t i = 0; i < spec_.rounds; ++i) m = lin_[spec_.sbox(F.add(m, keys[i]))];
    return F.add(m, keys[spec_.rounds]);
  }

  Elem decrypt(Elem c) const {
    const Field& F = *spec_.field;
    c = F.sub(c, spec_.keys[spec_.rounds]);
    for (std::uint32_t i = spec_.rounds; i-- > 0;) c = F.sub(sbox_inv_[lin_inv_[c]], spec_.keys[i]);
    return c;
  }

  Elem sbox_inverse(Elem y) const { return sbox_inv_[y]; }
  Elem linear_inverse(Elem y) const { return lin_inv_[y]; }
  Elem linear(Elem x) const { return lin_[x]; }

 private:
  SpnSpec spec_;
  std::vector<Elem> sbox_inv_;
  std::vector<Elem> lin_;
  std::vector<Elem> lin_inv_;
};

inline Elem circ(const Field& F, Elem a, Elem b, Elem c) { return F.add(a, F.mul(c, b)); }
inline Elem circ_bar(const Field& F, Elem a, Elem b, Elem c) { return F.sub(a, F.mul(c, b)); }

// ((x o_c D) + k) o̅_c (x + k), evaluated step by step.
inline Elem key_addition_difference(const Field& F, Elem x, Elem k, Elem delta, Elem c) {
  return circ_bar(F, F.add(circ(F, x, delta, c), k), F.add(x, k), c);
}

// cD - (c - 1)(x + k).
inline Elem key_addition_closed_form(const Field& F, Elem x, Elem k, Elem delta, Elem c) {
  return F.sub(F.mul(c, delta), F.mul(F.sub(c, 1), F.add(x, k)));
}

// Permutation with 2*pairs inputs arranged so that S(x + alpha) = S(x) + beta:
// `pairs` random {0, alpha}-cosets go onto `pairs` random {0, beta}-cosets,
// the rest is a random bijection. DDT[alpha][beta] >= 2*pairs.
inline FunctionTable planted_sbox(const FieldPtr& field, Elem alpha, Elem beta, std::uint32_t pairs, Rng& rng) {
  const Field& F = *field;
  if (F.characteristic() != 2) throw DomainError("planted S-boxes are built over GF(2^n)");
  if (alpha == 0 || beta == 0) throw DomainError("planted differences must be nonzero");
  const auto q = static_cast<Elem>(F.order());
  if (2ull * pairs > q) throw DomainError("too many planted pairs");
  auto coset_reps = [&](Elem d) {
    std::vector<Elem> reps;
    for (Elem x = 0; x < q; ++x)
      if (x < F.add(x, d)) reps.push_back(x);
    return reps;
  };
  auto shuffle = [&](std::vector<Elem>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
  };
  auto in = coset_reps(alpha), out = coset_reps(beta);
  shuffle(in);
  shuffle(out);
  std::vector<Elem> table(q, 0);
  std::vector<bool> used_in(q, false), used_out(q, false);
  for (std::uint32_t i = 0; i < pairs; ++i) {
    Elem y = out[i];
    if (rng.below(2)) y = F.add(y, beta);
    table[in[i]] = y;
    table[F.add(in[i], alpha)] = F.add(y, beta);
    used_in[in[i]] = used_in[F.add(in[i], alpha)] = true;
    used_out[y] = used_out[F.add(y, beta)] = true;
  }
  std::vector<Elem> free_in, free_out;
  for (Elem x = 0; x < q; ++x) {
    if (!used_in[x]) free_in.push_back(x);
    if (!used_out[x]) free_out.push_back(x);
  }
  shuffle(free_out);
  for (std::size_t i = 0; i < free_in.size(); ++i) table[free_in[i]] = free_out[i];
  return FunctionTable(field, std::move(table));
}

struct PlantedSpn {
  SpnSpec spec;
  Elem alpha = 0;
  Elem beta = 0;
};

// Random linear layer L, beta != 0, alpha = L(beta) so the planted
// differential alpha -> beta -> L(beta) = alpha iterates across rounds.
inline PlantedSpn planted_spn(const FieldPtr& field, std::uint32_t rounds, std::uint32_t pairs, Rng& rng) {
  const AffineMap A = random_affine(field, rng);
  const AffineMap L = A.linear_part();
  const Elem beta = static_cast<Elem>(1 + rng.below(field->order() - 1));
  const Elem alpha = L.linear(beta);
  FunctionTable S = planted_sbox(field, alpha, beta, pairs, rng);
  std::vector<Elem> keys(rounds + 1);
  for (auto& k : keys) k = static_cast<Elem>(rng.below(field->order()));
  return PlantedSpn{SpnSpec{field, rounds, std::move(S), L, std::move(keys)}, alpha, beta};
}

struct Trail {
  std::vector<Elem> inputs;   // S-box input difference, rounds 1..r-1
  std::vector<Elem> outputs;  // chosen S-box output difference, rounds 1..r-1
  std::vector<std::uint32_t> counts;
  Elem plaintext_diff = 0;
  Elem last_input_diff = 0;  // expected S-box input difference in round r
  double probability = 1;
};

// Greedy: the best DDT entry starts the trail; every later round takes the
// best output for the input forced by L.
inline Trail greedy_trail(const Spn& spn) {
  const auto& spec = spn.spec();
  const DdtTable ddt = classical_ddt(spec.sbox);
  const Elem q = static_cast<Elem>(spec.field->order());
  auto best_out = [&](Elem a) {
    Elem arg = 0;
    for (Elem b = 1; b < q; ++b)
      if (ddt.at(a, b) > ddt.at(a, arg)) arg = b;
    return arg;
  };
  Elem start = 1;
  for (Elem a = 1; a < q; ++a)
    if (ddt.at(a, best_out(a)) > ddt.at(start, best_out(start))) start = a;
  Trail t;
  t.plaintext_diff = start;
  Elem in = start;
  for (std::uint32_t i = 1; i < spec.rounds; ++i) {
    const Elem out = best_out(in);
    t.inputs.push_back(in);
    t.outputs.push_back(out);
    t.counts.push_back(ddt.at(in, out));
    t.probability *= static_cast<double>(ddt.at(in, out)) / q;
    in = spn.linear(out);
  }
  t.last_input_diff = in;
  return t;
}

struct KeyRecoveryReport {
  Trail trail;
  std::uint32_t sbox_delta = 0;
  double delta_over_q = 0;
  std::uint64_t pairs = 0;
  bool control = false;
  std::vector<std::pair<Elem, std::uint64_t>> ranking;  // (key guess, counter), best first
  Elem true_key = 0;
  std::size_t true_key_rank = 0;  // 1-based, ties broken by key value
  double true_key_z = 0;          // true counter against the other guesses
};

// Chosen-plaintext pairs (m, m + D) with D the trail's plaintext difference;
// in control mode the second plaintext is unrelated. A guess k for k_r scores
// a pair when S^-1(L^-1(C + k)) and S^-1(L^-1(C' + k)) differ by the expected
// last-round input difference.
inline KeyRecoveryReport last_round_recovery(const Spn& spn, std::uint64_t pair_count, std::uint64_t seed,
                                             bool control = false) {
  if (pair_count < 1) throw DomainError("pair_count must be at least 1");
  const auto& spec = spn.spec();
  const Field& F = *spec.field;
  const Elem q = static_cast<Elem>(F.order());
  KeyRecoveryReport rep;
  rep.trail = greedy_trail(spn);
  rep.sbox_delta = table_uniformity(classical_ddt(spec.sbox));
  rep.delta_over_q = static_cast<double>(rep.sbox_delta) / q;
  rep.pairs = pair_count;
  rep.control = control;
  rep.true_key = spec.keys.back();
  Rng rng(seed);
  std::vector<std::pair<Elem, Elem>> cts(pair_count);
  for (auto& [c1, c2] : cts) {
    const Elem m = static_cast<Elem>(rng.below(q));
    const Elem m2 = control ? static_cast<Elem>(rng.below(q)) : F.add(m, rep.trail.plaintext_diff);
    c1 = spn.encrypt(m);
    c2 = spn.encrypt(m2);
  }
  std::vector<std::uint64_t> counter(q, 0);
  for (Elem k = 0; k < q; ++k) {
    std::uint64_t n = 0;
    for (const auto& [c1, c2] : cts) {
      const Elem u1 = spn.sbox_inverse(spn.linear_inverse(F.add(c1, k)));
      const Elem u2 = spn.sbox_inverse(spn.linear_inverse(F.add(c2, k)));
      if (F.sub(u2, u1) == rep.trail.last_input_diff) ++n;
    }
    counter[k] = n;
  }
  for (Elem k = 0; k < q; ++k) rep.ranking.emplace_back(k, counter[k]);
  std::stable_sort(rep.ranking.begin(), rep.ranking.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  for (std::size_t i = 0; i < rep.ranking.size(); ++i)
    if (rep.ranking[i].first == rep.true_key) rep.true_key_rank = i + 1;
  double mean = 0, sq = 0;
  for (Elem k = 0; k < q; ++k)
    if (k != rep.true_key) {
      mean += static_cast<double>(counter[k]);
      sq += static_cast<double>(counter[k]) * static_cast<double>(counter[k]);
    }
  mean /= q - 1;
  const double sd = std::sqrt(std::max(sq / (q - 1) - mean * mean, 1e-12));
  rep.true_key_z = (static_cast<double>(counter[rep.true_key]) - mean) / sd;
  return rep;
}

// Max-bin statistic of a histogram against uniform sampling of the same size.
struct BiasStat {
  std::uint64_t max_count = 0;
  Elem argmax = 0;
  double max_prob = 0;
  double naive_z = 0;       // (max/N - 1/q) / sqrt(p(1-p)/N), one fixed bin
  double null_mean_max = 0;  // E[max bin] under uniform
  double null_sd_max = 0;
  double z = 0;  // (max - null_mean_max) / null_sd_max
  bool within_3sigma = false;
};

namespace detail {

inline double binom_log_pmf(std::uint64_t n, std::uint64_t k, double p) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
         (n - k) * std::log1p(-p);
}

}  // namespace detail

// P(max <= m) is taken as Binomial(N, 1/q) CDF(m)^q (bins treated as
// independent), which is accurate for q large and N/q moderate.
inline BiasStat bias_stat(const std::vector<std::uint64_t>& hist) {
  BiasStat s;
  const std::uint64_t q = hist.size();
  const std::uint64_t N = std::accumulate(hist.begin(), hist.end(), std::uint64_t{0});
  for (std::uint64_t i = 0; i < q; ++i)
    if (hist[i] > s.max_count) {
      s.max_count = hist[i];
      s.argmax = static_cast<Elem>(i);
    }
  if (N == 0 || q < 2) return s;
  const double p = 1.0 / static_cast<double>(q);
  s.max_prob = static_cast<double>(s.max_count) / static_cast<double>(N);
  s.naive_z = (s.max_prob - p) / std::sqrt(p * (1 - p) / static_cast<double>(N));
  double cdf = 0, mean = 0, second = 0;
  for (std::uint64_t m = 0; m <= N; ++m) {
    cdf = std::min(1.0, cdf + std::exp(detail::binom_log_pmf(N, m, p)));
    const double tail = 1 - std::pow(cdf, static_cast<double>(q));  // P(max > m)
    mean += tail;
    second += (2.0 * static_cast<double>(m) + 1) * tail;
    if (tail < 1e-15 && static_cast<double>(m) > static_cast<double>(N) * p) break;
  }
  s.null_mean_max = mean;
  s.null_sd_max = std::sqrt(std::max(second - mean * mean, 1e-12));
  s.z = (static_cast<double>(s.max_count) - mean) / s.null_sd_max;
  s.within_3sigma = std::abs(s.z) <= 3;
  return s;
}

struct RoundHistograms {
  std::uint32_t round = 0;
  std::vector<std::uint64_t> sbox_input;  // after adding k_{i-1}
  std::vector<std::uint64_t> output;      // after L
  BiasStat sbox_input_bias;
  BiasStat output_bias;
};

struct DiffExperimentReport {
  Elem c = 0;
  Elem delta = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  bool resample_keys = false;
  std::vector<std::uint64_t> input_relation;  // round 0: D with x' = x o_c D
  std::vector<RoundHistograms> rounds;
};

namespace detail {
inline constexpr std::uint64_t kExperimentBatch = 1024;
}

// Pairs (x, x o_c D) with x uniform; states are compared with o̅_c. With
// resample_keys every pair gets fresh round keys, otherwise spec's keys.
inline DiffExperimentReport diff_experiment(const Spn& spn, Elem c, Elem delta, std::uint64_t samples,
                                            std::uint64_t seed, bool resample_keys, unsigned workers = 1) {
  if (samples < 1) throw DomainError("samples must be at least 1");
  const auto& spec = spn.spec();
  const Field& F = *spec.field;
  if (!F.contains(c) || !F.contains(delta)) throw DomainError("c or delta out of range for field");
  const std::uint64_t q = F.order();
  const std::uint32_t r = spec.rounds;
  const std::uint64_t batches = (samples + detail::kExperimentBatch - 1) / detail::kExperimentBatch;
  struct Batch {
    std::vector<std::vector<std::uint64_t>> in, out;
    std::vector<std::uint64_t> rel;
  };
  std::vector<Batch> parts(batches);
  const Rng root(seed);
  detail::parallel_for(batches, workers, [&](std::size_t b) {
    Batch& part = parts[b];
    part.in.assign(r, std::vector<std::uint64_t>(q, 0));
    part.out.assign(r, std::vector<std::uint64_t>(q, 0));
    part.rel.assign(q, 0);
    Rng rng = root.split(b);
    std::vector<Elem> keys = spec.keys;
    const std::uint64_t lo = b * detail::kExperimentBatch, hi = std::min(samples, lo + detail::kExperimentBatch);
    for (std::uint64_t i = lo; i < hi; ++i) {
      if (resample_keys)
        for (auto& k : keys) k = static_cast<Elem>(rng.below(q));
      Elem s1 = static_cast<Elem>(rng.below(q));
      Elem s2 = circ(F, s1, delta, c);
      ++part.rel[c == 0 ? delta : F.div(F.sub(s2, s1), c)];
      for (std::uint32_t j = 0; j < r; ++j) {
        s1 = F.add(s1, keys[j]);
        s2 = F.add(s2, keys[j]);
        ++part.in[j][circ_bar(F, s2, s1, c)];
        s1 = spn.linear(spec.sbox(s1));
        s2 = spn.linear(spec.sbox(s2));
        ++part.out[j][circ_bar(F, s2, s1, c)];
      }
    }
  });
  DiffExperimentReport rep;
  rep.c = c;
  rep.delta = delta;
  rep.samples = samples;
  rep.seed = seed;
  rep.resample_keys = resample_keys;
  rep.input_relation.assign(q, 0);
  rep.rounds.resize(r);
  for (std::uint32_t j = 0; j < r; ++j) {
    rep.rounds[j].round = j + 1;
    rep.rounds[j].sbox_input.assign(q, 0);
    rep.rounds[j].output.assign(q, 0);
  }
  for (const auto& part : parts) {
    for (std::uint64_t v = 0; v < q; ++v) rep.input_relation[v] += part.rel[v];
    for (std::uint32_t j = 0; j < r; ++j)
      for (std::uint64_t v = 0; v < q; ++v) {
        rep.rounds[j].sbox_input[v] += part.in[j][v];
        rep.rounds[j].output[v] += part.out[j][v];
      }
  }
  for (auto& h : rep.rounds) {
    h.sbox_input_bias = bias_stat(h.sbox_input);
    h.output_bias = bias_stat(h.output);
  }
  return rep;
}

}  // namespace cdiff
