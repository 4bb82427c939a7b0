#pragma once

// JSON forms of the analysis results.

#include "json.hpp"

#include "cdiff/affine.hpp"
#include "cdiff/difftab.hpp"
#include "cdiff/spn.hpp"
#include "cdiff/structure.hpp"

namespace cdiff {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportFormat = "cdiff-report/1";

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json to_json(const DdtTable& t, const std::string& function) {
  Json rows = Json::array();
  for (Elem a = 0; a < t.order(); ++a) {
    const auto r = t.row(a);
    rows.push_back(std::vector<std::uint32_t>(r.begin(), r.end()));
  }
  return Json{{"field", t.field()->descriptor()},
              {"function", function},
              {"kind", to_string(t.kind())},
              {"c", t.c()},
              {"delta", table_uniformity(t)},
              {"table", std::move(rows)}};
}

inline Json to_json(const SpectrumReport& r) {
  return Json{{"field", r.field->descriptor()},
              {"function", r.function},
              {"d", r.d},
              {"delta", r.delta},
              {"delta_c0", r.delta_c0()},
              {"delta_c1", r.delta_c1()},
              {"pcn_set", r.pcn_set},
              {"pcn_count", r.pcn_set.size()},
              {"a0_only", r.a0_only},
              {"bad_c_count", r.bad_c_count},
              {"attains_d_count", r.attains_d_count},
              {"bound_4d2", r.bound_4d2},
              {"bound_pcn", r.bound_pcn}};
}

inline Json to_json(const CensusReport& r) {
  Json per_c = Json::array();
  for (const auto& e : r.per_c) per_c.push_back(Json{{"c", e.c}, {"good_a", optional_json(e.good_a)}, {"degenerate", e.degenerate}});
  return Json{{"field", r.field->descriptor()},
              {"f", r.f},
              {"d", r.d},
              {"eligible", r.eligible},
              {"q_hypothesis", r.q_hypothesis},
              {"per_c", std::move(per_c)},
              {"theta_count", r.theta_count},
              {"bound", r.bound},
              {"pass", r.pass}};
}

inline Json to_json(const PreconditionReport& r) {
  return Json{{"p", r.p},
              {"degree", r.degree},
              {"eligible", r.eligible},
              {"not_monomial", r.not_monomial},
              {"not_in_xp_subring", r.not_in_xp_subring},
              {"degree_odd", r.degree_odd},
              {"h1_nonzero", r.h1_nonzero},
              {"h2_nonzero", r.h2_nonzero},
              {"degree_residue_ok", r.degree_residue_ok},
              {"deg3mod4_sufficient", r.deg3mod4_sufficient},
              {"pcn_eligible", r.pcn_eligible},
              {"violations", r.violations}};
}

inline Json to_json(const Trail& t) {
  return Json{{"plaintext_diff", t.plaintext_diff},
              {"inputs", t.inputs},
              {"outputs", t.outputs},
              {"counts", t.counts},
              {"last_input_diff", t.last_input_diff},
              {"probability", t.probability}};
}

inline Json to_json(const KeyRecoveryReport& r, std::size_t top = 5) {
  Json best = Json::array();
  for (std::size_t i = 0; i < std::min(top, r.ranking.size()); ++i)
    best.push_back(Json{{"key", r.ranking[i].first}, {"count", r.ranking[i].second}});
  return Json{{"trail", to_json(r.trail)},
              {"sbox_delta", r.sbox_delta},
              {"delta_over_q", r.delta_over_q},
              {"pairs", r.pairs},
              {"control", r.control},
              {"true_key", r.true_key},
              {"true_key_rank", r.true_key_rank},
              {"true_key_z", r.true_key_z},
              {"top", std::move(best)}};
}

inline Json to_json(const BiasStat& s) {
  return Json{{"max_count", s.max_count},
              {"argmax", s.argmax},
              {"max_prob", s.max_prob},
              {"naive_z", s.naive_z},
              {"null_mean_max", s.null_mean_max},
              {"null_sd_max", s.null_sd_max},
              {"z", s.z},
              {"within_3sigma", s.within_3sigma}};
}

inline Json to_json(const DiffExperimentReport& r) {
  Json rounds = Json::array();
  for (const auto& h : r.rounds)
    rounds.push_back(Json{{"round", h.round},
                          {"sbox_input", h.sbox_input},
                          {"sbox_input_bias", to_json(h.sbox_input_bias)},
                          {"output", h.output},
                          {"output_bias", to_json(h.output_bias)}});
  return Json{{"c", r.c},
              {"delta", r.delta},
              {"samples", r.samples},
              {"seed", r.seed},
              {"resample_keys", r.resample_keys},
              {"input_relation", r.input_relation},
              {"rounds", std::move(rounds)}};
}

inline Json to_json(const SpnSpec& s) {
  return Json{{"field", s.field->descriptor()},
              {"r", s.rounds},
              {"sbox_table", std::vector<Elem>(s.sbox.values().begin(), s.sbox.values().end())},
              {"L_coeffs", s.linear.coeffs()},
              {"keys", s.keys}};
}

}  // namespace cdiff
