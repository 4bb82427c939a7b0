// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

#include "cdiff/cdiff.hpp"
#include "oracles.hpp"

using namespace cdiff;

namespace {

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

FunctionTable random_table(const FieldPtr& field, Rng& rng) {
  std::vector<Elem> v(field->order());
  for (auto& y : v) y = static_cast<Elem>(rng.below(field->order()));
  return FunctionTable(field, std::move(v));
}

Poly random_eligible(const FieldPtr& field, int d, Rng& rng) {
  for (;;) {
    Poly f = oracle::random_poly(field, static_cast<std::size_t>(d), rng);
    if (precondition_report(f).eligible) return f;
  }
}

Outcome definitional_oracle() {
  auto F = make_field(2, 4);
  Rng rng(101);
  std::uint64_t checked = 0, bad = 0;
  for (int i = 0; i < 10; ++i) {
    const Poly f = oracle::random_poly(F, rng.below(7), rng);
    const FunctionTable T = FunctionTable::from_poly(f);
    const std::vector<Elem> v(T.values().begin(), T.values().end());
    for (Elem c = 0; c < 16; ++c) {
      const DdtTable t = c_ddt(T, c);
      for (Elem a = 0; a < 16; ++a)
        for (Elem b = 0; b < 16; ++b, ++checked)
          if (t.at(a, b) != oracle::c_ddt_entry(*F, v, a, b, c)) ++bad;
    }
  }
  return {bad == 0, std::to_string(checked) + " entries, " + std::to_string(bad) + " mismatches"};
}

Outcome classical_recovery() {
  auto F = make_field(2, 6);
  Rng rng(102);
  std::uint64_t bad = 0;
  for (int i = 0; i < 10; ++i) {
    const FunctionTable T = random_table(F, rng);
    const DdtTable t = c_ddt(T, 1), cl = classical_ddt(T);
    for (Elem a = 0; a < 64; ++a)
      for (Elem b = 0; b < 64; ++b) {
        std::uint32_t n = 0;
        for (Elem x = 0; x < 64; ++x) n += (T(x ^ a) ^ T(x)) == b;
        if (t.at(a, b) != n || cl.at(a, b) != n) ++bad;
      }
  }
  return {bad == 0, "10 functions over GF(2^6), " + std::to_string(bad) + " mismatches against F(x+a)+F(x)=b"};
}

Outcome identity_pcn() {
  auto F = make_field(2, 8);
  const auto rep = spectrum(FunctionTable::identity(F), 1, workers(), "x");
  bool pcn = true;
  for (Elem c = 0; c < 256; ++c)
    if (c != 1 && rep.delta[c] != 1) pcn = false;
  return {pcn && rep.delta_c1() == 256 && rep.pcn_set.size() == 255,
          "PcN for " + std::to_string(rep.pcn_set.size()) + " of 255 c != 1, 1-delta = " + std::to_string(rep.delta_c1())};
}

Outcome theorem1_census() {
  auto F = make_field(2, 8);
  Rng rng(104);
  bool ok = true;
  std::ostringstream os;
  std::uint64_t worst_bad[2] = {0, 0}, worst_attain[2] = {256, 256};
  for (int i = 0; i < 20; ++i) {
    const int d = i % 2 ? 5 : 3;
    const auto rep = spectrum(random_eligible(F, d, rng), workers());
    const double bound = bound_main(d);
    ok = ok && rep.bad_c_count <= bound && rep.attains_d_count >= 256 - bound;
    worst_bad[i % 2] = std::max(worst_bad[i % 2], rep.bad_c_count);
    worst_attain[i % 2] = std::min(worst_attain[i % 2], rep.attains_d_count);
  }
  os << "d=3: max bad_c " << worst_bad[0] << " <= 36, min attaining " << worst_attain[0] << " >= 220; d=5: max bad_c "
     << worst_bad[1] << " <= 100, min attaining " << worst_attain[1] << " >= 156";
  return {ok, os.str()};
}

Outcome pcn_bound() {
  auto F = make_field(2, 10);
  Rng rng(105);
  std::size_t worst = 0;
  for (int i = 0; i < 5; ++i) worst = std::max(worst, spectrum(random_eligible(F, 3, rng), workers()).pcn_set.size());
  return {worst <= 733 && worst <= 36, "max #PcN c over 5 cubics in GF(2^10) = " + std::to_string(worst) +
                                           " (limits 733 and 36)"};
}

Outcome proposition7_census() {
  auto F = make_field(2, 6);
  Rng rng(106);
  std::uint64_t worst = 0;
  bool ok = true;
  for (int i = 0; i < 10; ++i) {
    const auto rep = theta_census(random_eligible(F, 3, rng), workers());
    ok = ok && rep.pass && rep.q_hypothesis;
    worst = std::max(worst, rep.theta_count);
  }
  return {ok && worst <= 15, "max theta_count over 10 cubics in GF(2^6) = " + std::to_string(worst) + " <= 15"};
}

Outcome criterion_soundness() {
  Rng rng(107);
  int compared = 0, disagree = 0, triples = 0, collisions = 0, degenerate_skipped = 0;
  while (compared < 200) {
    auto F = make_field(2, 4 + static_cast<std::uint32_t>(compared % 3));
    const Poly f = oracle::random_poly(F, 2 + rng.below(4), rng);
    const Elem a = static_cast<Elem>(1 + rng.below(F->order() - 1));
    const Elem c = static_cast<Elem>(rng.below(F->order()));
    const auto truth = oracle::root_structure_by_enumeration(f, a, c);
    if (!truth) {
      ++degenerate_skipped;
      continue;
    }
    const auto r = analyze_shift(f, a, c);
    disagree += r.has_triple_root != truth->triple || r.has_critical_collision != truth->collision;
    triples += truth->triple;
    collisions += truth->collision;
    ++compared;
  }
  std::ostringstream os;
  os << compared << " triples over GF(2^4..2^6), " << disagree << " disagreements (" << triples << " triple roots, "
     << collisions << " collisions, " << degenerate_skipped << " degenerate D=0 resampled)";
  return {disagree == 0, os.str()};
}

Outcome input_invariance() {
  auto F = make_field(2, 4);
  Rng rng(108);
  int holds = 0, literal = 0;
  for (int i = 0; i < 20; ++i) {
    const FunctionTable T = random_table(F, rng);
    const AffineMap A = random_affine(F, rng);
    const auto r = verify_input_invariance(T, A, static_cast<Elem>(rng.below(16)));
    holds += r.holds && r.delta_F == r.delta_FA;
    literal += r.literal_holds;
  }
  return {holds == 20, "cDDT_{F o A}[a,b] = cDDT_F[L(a),b] on " + std::to_string(holds) +
                           "/20 triples; literal cDDT_F[a,b] = cDDT_{F o A}[L(a),b] on " + std::to_string(literal) +
                           "/20"};
}

Outcome output_clause() {
  auto F = make_field(2, 4);
  Rng rng(109);
  int holds = 0;
  for (int i = 0; i < 20; ++i) {
    const FunctionTable T = random_table(F, rng);
    const Elem c = static_cast<Elem>(1 + rng.below(15));
    const AffineMap A = random_affine_over_subfield(F, F->subfield_degree(c), rng);
    const auto r = verify_output_invariance(T, A, c);
    holds += r.commutes && r.column_bijection_holds && r.delta_equal;
  }
  const auto s = search_output_counterexample(F, 500, 109, workers());
  std::ostringstream os;
  os << "column bijection + equal delta on " << holds << "/20; search: " << s.hits << "/500 counterexamples";
  if (s.witness) {
    const auto& w = *s.witness;
    os << ", witness trial " << w.trial << " c=" << w.c << " A: " << w.A.to_string() << " delta_F=" << w.delta_F
       << " delta_AF=" << w.delta_AF << " F=[";
    for (std::size_t i = 0; i < w.F.size(); ++i) os << (i ? "," : "") << w.F(static_cast<Elem>(i));
    os << "]";
  }
  return {holds == 20 && s.witness.has_value(), os.str()};
}

Outcome key_addition() {
  auto F = make_field(2, 8);
  Rng rng(110);
  int bad = 0;
  for (int i = 0; i < 10000; ++i) {
    const Elem x = static_cast<Elem>(rng.below(256)), k = static_cast<Elem>(rng.below(256)),
               d = static_cast<Elem>(rng.below(256)), c = static_cast<Elem>(rng.below(256));
    bad += key_addition_difference(*F, x, k, d, c) != key_addition_closed_form(*F, x, k, d, c);
    bad += key_addition_difference(*F, x, k, d, 1) != d;
  }
  return {bad == 0, "10^4 tuples over GF(2^8), " + std::to_string(bad) + " mismatches"};
}

Outcome spn_demo() {
  auto F = make_field(2, 8);
  int first = 0;
  std::uint32_t min_delta = 256;
  for (std::uint64_t t = 0; t < 20; ++t) {
    Rng rng = Rng(111).split(t);
    const auto p = planted_spn(F, 3, 32, rng);
    const Spn spn(p.spec);
    const auto rep = last_round_recovery(spn, 1u << 13, rng.next());
    min_delta = std::min(min_delta, rep.sbox_delta);
    first += rep.true_key_rank == 1;
  }
  Rng crng(112);
  const auto p = planted_spn(F, 3, 32, crng);
  const Spn spn(p.spec);
  int uniform = 0;
  std::ostringstream zs;
  for (int run = 0; run < 5; ++run) {
    Elem c = 0;
    while (c < 2) c = static_cast<Elem>(crng.below(256));
    const auto rep = diff_experiment(spn, c, p.alpha, 1u << 14, crng.next(), true, workers());
    const auto& b = rep.rounds[0].sbox_input_bias;
    uniform += b.within_3sigma;
    zs << (run ? ", " : "") << "c=" << c << " z=" << std::round(b.z * 100) / 100;
  }
  std::ostringstream os;
  os << "true key first in " << first << "/20 trials (min S-box delta " << min_delta << "); o_c round-1 bias within 3 sigma in "
     << uniform << "/5 (" << zs.str() << ")";
  return {first >= 18 && min_delta >= 32 && uniform >= 4, os.str()};
}

Outcome char2_classification() {
  auto F = make_field(2, 8);
  Rng rng(113);
  int bad = 0;
  for (int i = 0; i < 100; ++i) {
    const Poly A = oracle::random_poly(F, rng.below(4), rng), B = oracle::random_poly(F, rng.below(4), rng);
    const Poly f = reassemble({A, B});
    bad += !oracle::hasse_by_pascal(f, 2).is_zero();
  }
  for (int i = 0; i < 100; ++i) {
    std::vector<Elem> v(4 * (2 + rng.below(4)) + 2, 0);
    for (std::size_t j = 0; j < v.size(); ++j)
      if (j % 4 <= 1) v[j] = static_cast<Elem>(rng.below(256));
    const Poly f(F, v);
    if (f.is_zero() || !oracle::hasse_by_pascal(f, 2).is_zero()) {
      ++bad;
      continue;
    }
    const auto cls = classify(f);
    bad += !cls.char2_decomposition || !(reassemble(*cls.char2_decomposition) == f);
  }
  return {bad == 0, "200 instances over GF(2^8), " + std::to_string(bad) + " failures"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"definitional oracle equivalence", definitional_oracle},
      {"classical DDT recovery", classical_recovery},
      {"identity PcN baseline", identity_pcn},
      {"main theorem census", theorem1_census},
      {"PcN count bound", pcn_bound},
      {"good-shift census", proposition7_census},
      {"triple-root/collision criterion soundness", criterion_soundness},
      {"input affine invariance", input_invariance},
      {"output clause and counterexample", output_clause},
      {"key-addition identity", key_addition},
      {"SPN attack and o_c experiment", spn_demo},
      {"char-2 classification", char2_classification}};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s %2zu %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
