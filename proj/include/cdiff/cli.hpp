#pragma once

// Command-line front end. run_cli() is the whole program; main() forwards.
//
// Exit codes: 0 ok, 1 usage error, 2 hypothesis warnings, 3 invariant failure.
// Every report embeds its RunConfig; `cdiff rerun REPORT` replays it.

#include <fstream>
#include <functional>
#include <iostream>
#include <list>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cdiff/report.hpp"

namespace cdiff {

namespace cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kWarnings = 2, kInvariant = 3 };

// command + canonical option values; `out` is where the report was written.
struct RunConfig {
  std::string command;
  Json args = Json::object();
  std::string out;

  Json to_json() const { return Json{{"command", command}, {"args", args}, {"out", out}}; }

  static RunConfig from_json(const Json& j) {
    RunConfig c;
    try {
      c.command = j.at("command").get<std::string>();
      c.args = j.at("args");
      c.out = j.value("out", std::string{});
    } catch (const Json::exception& e) {
      throw ParseError(std::string("malformed run config: ") + e.what());
    }
    return c;
  }
};

struct Result {
  std::string text;
  int code = kOk;
};

inline std::string arg(const RunConfig& cfg, const std::string& key) {
  const auto it = cfg.args.find(key);
  if (it == cfg.args.end() || !it->is_string()) throw ParseError("missing option --" + key);
  return it->get<std::string>();
}

inline bool flag(const RunConfig& cfg, const std::string& key) {
  const auto it = cfg.args.find(key);
  return it != cfg.args.end() && it->is_boolean() && it->get<bool>();
}

inline std::uint64_t to_uint(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("--" + key + " expects a nonnegative integer, got '" + text + "'");
  }
}

inline std::uint64_t uint_arg(const RunConfig& cfg, const std::string& key) { return to_uint(key, arg(cfg, key)); }

// "p=2 n=8 [mod=...]" or the shorthand "2^8".
inline FieldPtr field_arg(const RunConfig& cfg) {
  const std::string text = arg(cfg, "field");
  const auto caret = text.find('^');
  if (caret != std::string::npos && text.find('=') == std::string::npos)
    return make_field(static_cast<std::uint32_t>(to_uint("field", text.substr(0, caret))),
                      static_cast<std::uint32_t>(to_uint("field", text.substr(caret + 1))));
  return parse_field(text);
}

inline Elem elem_arg(const RunConfig& cfg, const FieldPtr& field, const std::string& key) {
  const auto v = uint_arg(cfg, key);
  if (v >= field->order()) throw ParseError("--" + key + " must be below the field order " + std::to_string(field->order()));
  return static_cast<Elem>(v);
}

inline Json envelope(const RunConfig& cfg, Json result, const std::vector<std::string>& warnings) {
  return Json{{"format", kReportFormat}, {"config", cfg.to_json()}, {"warnings", warnings}, {"result", std::move(result)}};
}

inline Result json_result(const RunConfig& cfg, Json result, const std::vector<std::string>& warnings, int code) {
  return {envelope(cfg, std::move(result), warnings).dump(2) + "\n", code};
}

inline Result cmd_ddt(const RunConfig& cfg, unsigned) {
  const FieldPtr field = field_arg(cfg);
  const Poly f = parse_poly(field, arg(cfg, "poly"));
  const Elem c = elem_arg(cfg, field, "c");
  const std::string kind = arg(cfg, "kind"), format = arg(cfg, "format");
  if (kind != "c" && kind != "circ") throw ParseError("--kind must be c or circ");
  if (format != "csv" && format != "json") throw ParseError("--format must be csv or json");
  const FunctionTable F = FunctionTable::from_poly(f);
  const DdtTable t = kind == "c" ? c_ddt(F, c) : circ_ddt(F, c);
  if (format == "json") return json_result(cfg, to_json(t, f.to_string()), {}, kOk);
  std::ostringstream os;
  os << "# field=" << field->descriptor() << ", kind=" << to_string(t.kind()) << ", c=" << c << "\n";
  os << "# config=" << cfg.to_json().dump() << "\n";
  for (Elem a = 0; a < t.order(); ++a)
    for (Elem b = 0; b < t.order(); ++b) os << a << ',' << b << ',' << t.at(a, b) << "\n";
  return {os.str(), kOk};
}

inline Result cmd_spectrum(const RunConfig& cfg, unsigned workers) {
  const FieldPtr field = field_arg(cfg);
  const Poly f = parse_poly(field, arg(cfg, "poly"));
  if (f.degree() < 1) throw IneligibleInput("polynomial must be nonconstant");
  const auto pre = precondition_report(f);
  const auto rep = spectrum(f, workers);
  std::vector<std::string> warnings;
  for (const auto& v : pre.violations) warnings.push_back("main theorem hypothesis fails: " + v);
  Json result = to_json(rep);
  const double q = static_cast<double>(field->order());
  const bool bad_ok = static_cast<double>(rep.bad_c_count) <= rep.bound_4d2;
  const bool attain_ok = static_cast<double>(rep.attains_d_count) >= q - rep.bound_4d2;
  result["eligible"] = pre.eligible;
  result["bad_c_within_4d2"] = bad_ok;
  result["attains_d_at_least_q_minus_4d2"] = attain_ok;
  int code = warnings.empty() ? kOk : kWarnings;
  if (pre.pcn_eligible && q > rep.bound_pcn) {
    const bool pcn_ok = static_cast<double>(rep.pcn_set.size()) <= rep.bound_pcn;
    result["pcn_within_bound"] = pcn_ok;
    if (!pcn_ok) code = kInvariant;
  }
  if (pre.eligible && (!bad_ok || !attain_ok)) code = kInvariant;
  return json_result(cfg, std::move(result), warnings, code);
}

inline Result cmd_census(const RunConfig& cfg, unsigned workers) {
  const FieldPtr field = field_arg(cfg);
  const auto rep = theta_census(parse_poly(field, arg(cfg, "poly")), workers);
  int code = rep.warnings.empty() ? kOk : kWarnings;
  if (rep.eligible && rep.q_hypothesis && !rep.pass) code = kInvariant;
  return json_result(cfg, to_json(rep), rep.warnings, code);
}

inline Result cmd_preconditions(const RunConfig& cfg, unsigned) {
  const FieldPtr field = field_arg(cfg);
  const auto rep = precondition_report(parse_poly(field, arg(cfg, "poly")));
  const int code = rep.eligible ? kOk : kWarnings;
  if (arg(cfg, "format") == "json") return json_result(cfg, to_json(rep), rep.violations, code);
  std::ostringstream os;
  if (rep.eligible) {
    os << "pass\n";
  } else {
    os << "fail: ";
    for (std::size_t i = 0; i < rep.violations.size(); ++i) os << (i ? "; " : "") << rep.violations[i];
    os << "\n";
  }
  os << "degree=" << rep.degree << " p=" << rep.p << " h1_nonzero=" << rep.h1_nonzero
     << " h2_nonzero=" << rep.h2_nonzero << " deg3mod4_sufficient=" << rep.deg3mod4_sufficient
     << " pcn_eligible=" << rep.pcn_eligible << "\n";
  os << "# config=" << cfg.to_json().dump() << "\n";
  return {os.str(), code};
}

inline FunctionTable random_table(const FieldPtr& field, Rng& rng) {
  std::vector<Elem> v(field->order());
  for (auto& y : v) y = static_cast<Elem>(rng.below(field->order()));
  return FunctionTable(field, std::move(v));
}

inline Result cmd_verify_linear(const RunConfig& cfg, unsigned workers) {
  const FieldPtr field = field_arg(cfg);
  detail::require_dense(*field);
  const std::uint64_t triples = uint_arg(cfg, "seeds"), seed = uint_arg(cfg, "seed"), budget = uint_arg(cfg, "search");
  const Rng root(seed);
  std::uint64_t input_ok = 0, literal_ok = 0, input_delta_ok = 0, output_ok = 0, output_delta_ok = 0;
  for (std::uint64_t i = 0; i < triples; ++i) {
    Rng rng = root.split(2 * i);
    const FunctionTable F = random_table(field, rng);
    const AffineMap A = random_affine(field, rng);
    const auto r = verify_input_invariance(F, A, static_cast<Elem>(rng.below(field->order())));
    input_ok += r.holds;
    literal_ok += r.literal_holds;
    input_delta_ok += r.delta_F == r.delta_FA;
  }
  for (std::uint64_t i = 0; i < triples; ++i) {
    Rng rng = root.split(2 * i + 1);
    const FunctionTable F = random_table(field, rng);
    const Elem c = static_cast<Elem>(1 + rng.below(field->order() - 1));
    const AffineMap A = random_affine_over_subfield(field, field->subfield_degree(c), rng);
    const auto r = verify_output_invariance(F, A, c);
    output_ok += r.commutes && r.column_bijection_holds;
    output_delta_ok += r.delta_equal;
  }
  const auto search = search_output_counterexample(field, budget, seed, workers);
  Json witness = nullptr;
  if (search.witness) {
    const auto& w = *search.witness;
    witness = Json{{"trial", w.trial},
                   {"c", w.c},
                   {"A", w.A.to_string()},
                   {"F", std::vector<Elem>(w.F.values().begin(), w.F.values().end())},
                   {"delta_F", w.delta_F},
                   {"delta_AF", w.delta_AF}};
  }
  Json result{{"field", field->descriptor()},
              {"input", Json{{"triples", triples},
                             {"relation", "cDDT_{F o A}[a,b] = cDDT_F[L(a),b]"},
                             {"holds", input_ok},
                             {"delta_equal", input_delta_ok},
                             {"literal_relation", "cDDT_F[a,b] = cDDT_{F o A}[L(a),b]"},
                             {"literal_holds", literal_ok}}},
              {"output", Json{{"triples", triples},
                              {"relation", "cDDT_{A o F}[a, L(b)+(1-c)s] = cDDT_F[a,b], A linear over F_{p^l}"},
                              {"holds", output_ok},
                              {"delta_equal", output_delta_ok}}},
              {"counterexample_search", Json{{"trials", search.trials}, {"hits", search.hits}, {"witness", witness}}}};
  std::vector<std::string> warnings;
  if (literal_ok != triples)
    warnings.push_back("literal input relation with L(a) on the composed side fails on " +
                       std::to_string(triples - literal_ok) + " of " + std::to_string(triples) + " triples");
  const bool sound = input_ok == triples && input_delta_ok == triples && output_ok == triples && output_delta_ok == triples;
  return json_result(cfg, std::move(result), warnings, sound ? kOk : kInvariant);
}

inline Result cmd_nset(const RunConfig& cfg, unsigned) {
  const FieldPtr field = field_arg(cfg);
  const auto d = static_cast<int>(uint_arg(cfg, "d"));
  const auto set = exceptional_set(d, field);
  const auto k = static_cast<std::uint64_t>(d - 1);
  return json_result(cfg,
                     Json{{"field", field->descriptor()}, {"d", d}, {"elements", set}, {"size", set.size()},
                          {"index_bound", k * k * k}},
                     {}, kOk);
}

inline Result cmd_spn_demo(const RunConfig& cfg, unsigned) {
  const FieldPtr field = field_arg(cfg);
  detail::require_dense(*field);
  const auto rounds = static_cast<std::uint32_t>(uint_arg(cfg, "rounds"));
  const auto pairs = uint_arg(cfg, "pairs"), seed = uint_arg(cfg, "seed"), trials = uint_arg(cfg, "trials");
  const auto planted = static_cast<std::uint32_t>(uint_arg(cfg, "planted-pairs"));
  const bool control = flag(cfg, "control");
  const Rng root(seed);
  Json runs = Json::array();
  std::uint64_t first = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng = root.split(t);
    const auto p = planted_spn(field, rounds, planted, rng);
    const Spn spn(p.spec);
    const auto rep = last_round_recovery(spn, pairs, rng.next(), control);
    first += rep.true_key_rank == 1;
    Json run = to_json(rep);
    run["spec"] = to_json(p.spec);
    run["planted"] = Json{{"alpha", p.alpha}, {"beta", p.beta}};
    runs.push_back(std::move(run));
  }
  return json_result(cfg, Json{{"trials", trials}, {"true_key_first", first}, {"runs", std::move(runs)}}, {}, kOk);
}

inline Result cmd_circ_diff(const RunConfig& cfg, unsigned workers) {
  const FieldPtr field = field_arg(cfg);
  detail::require_dense(*field);
  const auto rounds = static_cast<std::uint32_t>(uint_arg(cfg, "rounds"));
  const auto samples = uint_arg(cfg, "samples"), seed = uint_arg(cfg, "seed");
  const Elem c = elem_arg(cfg, field, "c");
  Rng rng(seed);
  const auto p = planted_spn(field, rounds, static_cast<std::uint32_t>(uint_arg(cfg, "planted-pairs")), rng);
  const std::string delta_text = arg(cfg, "delta");
  const Elem delta = delta_text == "auto" ? p.alpha : elem_arg(cfg, field, "delta");
  const auto rep = diff_experiment(Spn(p.spec), c, delta, samples, rng.next(), !flag(cfg, "fixed-keys"), workers);
  Json result = to_json(rep);
  result["spec"] = to_json(p.spec);
  return json_result(cfg, std::move(result), {}, kOk);
}

inline const std::map<std::string, std::function<Result(const RunConfig&, unsigned)>>& commands() {
  static const std::map<std::string, std::function<Result(const RunConfig&, unsigned)>> table{
      {"ddt", cmd_ddt},
      {"spectrum", cmd_spectrum},
      {"census", cmd_census},
      {"preconditions", cmd_preconditions},
      {"verify-linear", cmd_verify_linear},
      {"nset", cmd_nset},
      {"spn-demo", cmd_spn_demo},
      {"circ-diff", cmd_circ_diff}};
  return table;
}

inline Result execute(const RunConfig& cfg, unsigned workers) {
  const auto it = commands().find(cfg.command);
  if (it == commands().end()) throw ParseError("unknown command '" + cfg.command + "'");
  return it->second(cfg, workers);
}

// Pulls the RunConfig back out of a JSON report or a CSV/text report's
// "# config=" line.
inline RunConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open report '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const std::string marker = "# config=";
  const auto pos = text.find(marker);
  try {
    if (pos != std::string::npos) {
      const auto end = text.find('\n', pos);
      return RunConfig::from_json(Json::parse(text.substr(pos + marker.size(), end - pos - marker.size())));
    }
    const Json j = Json::parse(text);
    if (j.value("format", std::string{}) != kReportFormat) throw ParseError("not a " + std::string(kReportFormat) + " report");
    return RunConfig::from_json(j.at("config"));
  } catch (const Json::exception& e) {
    throw ParseError("cannot read report '" + path + "': " + e.what());
  }
}

struct Registered {
  std::string name;
  std::string value;
  bool is_flag = false;
  bool on = false;
};

}  // namespace cli

inline int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"exact c-differential workbench over finite fields", "cdiff"};
  app.require_subcommand(1);
  app.fallthrough();
  unsigned workers = 1;
  std::string out_path;
  app.add_option("--workers", workers, "worker threads; never changes the output")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "write the report here instead of stdout");

  std::map<std::string, CLI::App*> subs;
  auto sub = [&](const std::string& name, const std::string& help) { subs[name] = app.add_subcommand(name, help); };
  std::map<std::string, std::list<Registered>> storage;
  auto opt = [&](const std::string& cmd, const std::string& name, const std::string& def, const std::string& help,
                 bool required = false) {
    auto& r = storage[cmd].emplace_back(Registered{name, def});
    auto* o = subs[cmd]->add_option("--" + name, r.value, help);
    if (required) o->required();
    else o->capture_default_str();
  };
  auto flg = [&](const std::string& cmd, const std::string& name, const std::string& help) {
    auto& r = storage[cmd].emplace_back(Registered{name, "", true, false});
    subs[cmd]->add_flag("--" + name, r.on, help);
  };

  sub("ddt", "dump a c-DDT or circ-DDT");
  opt("ddt", "field", "p=2 n=8", "field descriptor, e.g. \"p=2 n=8\" or 2^8");
  opt("ddt", "poly", "", "polynomial, e.g. \"x^3 + x^2\"", true);
  opt("ddt", "c", "1", "c as an element encoding");
  opt("ddt", "kind", "c", "c or circ");
  opt("ddt", "format", "csv", "csv or json");

  sub("spectrum", "c-differential uniformity for every c");
  opt("spectrum", "field", "p=2 n=8", "field descriptor");
  opt("spectrum", "poly", "", "polynomial", true);

  sub("census", "good-shift census over all c");
  opt("census", "field", "p=2 n=6", "field descriptor");
  opt("census", "poly", "", "polynomial", true);

  sub("preconditions", "check the hypotheses of the main theorem");
  opt("preconditions", "field", "p=2 n=8", "field descriptor");
  opt("preconditions", "poly", "", "polynomial", true);
  opt("preconditions", "format", "text", "text or json");

  sub("verify-linear", "affine invariance checks and counterexample search");
  opt("verify-linear", "field", "p=2 n=4", "field descriptor");
  opt("verify-linear", "seeds", "20", "random triples per check");
  opt("verify-linear", "seed", "", "base seed", true);
  opt("verify-linear", "search", "500", "counterexample search budget");

  sub("nset", "exceptional set built from (d-1)-th roots of unity");
  opt("nset", "field", "p=2 n=8", "field descriptor");
  opt("nset", "d", "", "degree d", true);

  sub("spn-demo", "last-round differential attack on a toy SPN");
  opt("spn-demo", "field", "p=2 n=8", "field descriptor");
  opt("spn-demo", "rounds", "3", "rounds");
  opt("spn-demo", "pairs", "8192", "chosen-plaintext pairs");
  opt("spn-demo", "seed", "", "seed", true);
  opt("spn-demo", "trials", "1", "independent ciphers");
  opt("spn-demo", "planted-pairs", "32", "planted coset pairs in the S-box");
  flg("spn-demo", "control", "use unrelated plaintext pairs");

  sub("circ-diff", "o_c-difference distributions through the SPN");
  opt("circ-diff", "field", "p=2 n=8", "field descriptor");
  opt("circ-diff", "c", "", "c as an element encoding", true);
  opt("circ-diff", "rounds", "3", "rounds");
  opt("circ-diff", "samples", "16384", "sampled pairs");
  opt("circ-diff", "seed", "", "seed", true);
  opt("circ-diff", "delta", "auto", "input difference, or auto for the planted one");
  opt("circ-diff", "planted-pairs", "32", "planted coset pairs in the S-box");
  flg("circ-diff", "fixed-keys", "keep the cipher's keys instead of resampling per pair");

  std::string rerun_path;
  auto* rerun = app.add_subcommand("rerun", "replay the configuration embedded in a report");
  rerun->add_option("report", rerun_path, "report file")->required();

  std::vector<std::string> args(argv.rbegin(), argv.rend());
  if (!args.empty()) args.pop_back();  // program name
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig cfg;
    if (rerun->parsed()) {
      cfg = read_config(rerun_path);
    } else {
      for (const auto& [name, s] : subs)
        if (s->parsed()) cfg.command = name;
      for (const auto& r : storage[cfg.command]) {
        if (r.is_flag) cfg.args[r.name] = r.on;
        else cfg.args[r.name] = r.value;
      }
      cfg.out = out_path;
    }
    const Result res = execute(cfg, workers);
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      if (!f) throw ParseError("cannot write '" + out_path + "'");
      f << res.text;
    } else {
      out << res.text;
    }
    return res.code;
  } catch (const IneligibleInput& e) {
    err << "error: ineligible input: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
}

inline int run_cli(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run_cli(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace cdiff
