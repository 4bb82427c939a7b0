#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cdiff/cli.hpp"
#include "oracles.hpp"

using namespace cdiff;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cdiff");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json result_of(const Run& r) { return Json::parse(r.out).at("result"); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cdiff_cli_test_" + name);
}

}  // namespace

TEST(Cli, DdtCsvMatchesDefinition) {
  const auto r = run({"ddt", "--field", "p=2 n=3", "--poly", "x^3", "--c", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line.rfind("# field=p=2 n=3 mod=1011, kind=", 0), 0u);
  auto F = make_field(2, 3);
  std::vector<Elem> values(8);
  for (Elem x = 0; x < 8; ++x) values[x] = F->pow(x, 3);
  int rows = 0;
  std::uint32_t max_nonzero_row = 0;
  while (std::getline(lines, line)) {
    if (line.starts_with("#")) continue;
    unsigned a, b, n;
    ASSERT_EQ(std::sscanf(line.c_str(), "%u,%u,%u", &a, &b, &n), 3);
    EXPECT_EQ(n, oracle::c_ddt_entry(*F, values, a, b, 1));
    if (a != 0) max_nonzero_row = std::max(max_nonzero_row, n);
    ++rows;
  }
  EXPECT_EQ(rows, 64);
  EXPECT_EQ(max_nonzero_row, 2u);
}

TEST(Cli, DdtJsonAndCirc) {
  const auto r = run({"ddt", "--field", "2^4", "--poly", "x^3 + x", "--c", "5", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j.at("format"), kReportFormat);
  EXPECT_EQ(j.at("result").at("table").size(), 16u);
  const auto circ = run({"ddt", "--field", "2^4", "--poly", "x^3 + x", "--c", "5", "--kind", "circ", "--format", "json"});
  ASSERT_EQ(circ.code, 0);
  const Json t = result_of(circ).at("table"), u = result_of(r).at("table");
  auto F = make_field(2, 4);
  for (Elem a = 0; a < 16; ++a) EXPECT_EQ(t[a], u[F->mul(5, a)]);
  EXPECT_EQ(run({"ddt", "--field", "2^4", "--poly", "x^3", "--c", "0", "--kind", "circ"}).code, 1);
}

TEST(Cli, SpectrumReport) {
  const auto r = run({"spectrum", "--field", "p=2 n=5", "--poly", "x^3 + x^2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json res = result_of(r);
  EXPECT_EQ(res.at("bound_4d2"), 36.0);
  EXPECT_LE(res.at("bad_c_count").get<int>(), 36);
  EXPECT_EQ(res.at("delta").size(), 32u);
  EXPECT_TRUE(res.at("eligible").get<bool>());
}

TEST(Cli, WorkersDoNotChangeOutput) {
  for (const std::vector<std::string>& cmd :
       {std::vector<std::string>{"spectrum", "--field", "2^6", "--poly", "x^5 + x^3 + x"},
        std::vector<std::string>{"census", "--field", "2^6", "--poly", "x^3 + x^2"},
        std::vector<std::string>{"verify-linear", "--seed", "3", "--seeds", "4", "--search", "60"},
        std::vector<std::string>{"circ-diff", "--c", "9", "--seed", "4", "--samples", "3000"}}) {
    auto one = cmd, many = cmd;
    one.insert(one.end(), {"--workers", "1"});
    many.insert(many.end(), {"--workers", "5"});
    const auto a = run(one), b = run(many);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << cmd[0];
  }
}

TEST(Cli, Preconditions) {
  const auto fail = run({"preconditions", "--poly", "x^5 + x^4"});
  EXPECT_EQ(fail.code, 2);
  EXPECT_EQ(fail.out.substr(0, fail.out.find('\n')), "fail: second Hasse derivative vanishes");
  const auto ok = run({"preconditions", "--poly", "x^3 + x^2"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out.substr(0, 4), "pass");
  const auto mono = run({"preconditions", "--poly", "x^3", "--format", "json"});
  EXPECT_EQ(mono.code, 2);
  EXPECT_FALSE(result_of(mono).at("not_monomial").get<bool>());
}

TEST(Cli, CensusSchema) {
  const auto r = run({"census", "--field", "2^6", "--poly", "x^3 + x^2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json res = result_of(r);
  for (const char* key : {"field", "f", "d", "eligible", "per_c", "theta_count", "bound", "pass"})
    EXPECT_TRUE(res.contains(key)) << key;
  EXPECT_EQ(res.at("per_c").size(), 64u);
  EXPECT_LE(res.at("theta_count").get<int>(), 15);
  const auto h2 = run({"census", "--field", "2^6", "--poly", "x^5 + x^4"});
  EXPECT_EQ(h2.code, 2);
  const auto mono = run({"census", "--field", "2^6", "--poly", "x^5"});
  EXPECT_EQ(mono.code, 1);
  EXPECT_NE(mono.err.find("monomial"), std::string::npos);
}

TEST(Cli, Nset) {
  const auto r = run({"nset", "--d", "3", "--field", "p=5 n=1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(result_of(r).at("elements"), Json::parse("[0,1,4]"));
  EXPECT_EQ(run({"nset", "--d", "3", "--field", "2^4"}).code, 1);
}

TEST(Cli, VerifyLinear) {
  const auto r = run({"verify-linear", "--seed", "11", "--seeds", "6", "--search", "200"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json res = result_of(r);
  EXPECT_EQ(res.at("input").at("holds"), 6);
  EXPECT_EQ(res.at("output").at("holds"), 6);
  const Json w = res.at("counterexample_search").at("witness");
  ASSERT_FALSE(w.is_null());
  EXPECT_NE(w.at("delta_F"), w.at("delta_AF"));
}

TEST(Cli, SpnCommands) {
  const auto demo = run({"spn-demo", "--seed", "5", "--trials", "2", "--pairs", "4096"});
  ASSERT_EQ(demo.code, 0) << demo.err;
  EXPECT_EQ(result_of(demo).at("runs").size(), 2u);
  EXPECT_EQ(demo.out, run({"spn-demo", "--seed", "5", "--trials", "2", "--pairs", "4096"}).out);
  const auto diff = run({"circ-diff", "--c", "7", "--seed", "2", "--rounds", "2", "--samples", "2048"});
  ASSERT_EQ(diff.code, 0) << diff.err;
  const Json res = result_of(diff);
  EXPECT_EQ(res.at("rounds").size(), 2u);
  EXPECT_EQ(res.at("samples"), 2048);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"bogus"}).code, 1);
  EXPECT_EQ(run({"spn-demo"}).code, 1);  // seed is mandatory
  EXPECT_EQ(run({"circ-diff", "--c", "3"}).code, 1);
  EXPECT_EQ(run({"ddt", "--poly", "x^3", "--c", "256"}).code, 1);
  EXPECT_EQ(run({"ddt", "--poly", "x^^3"}).code, 1);
  EXPECT_EQ(run({"ddt", "--field", "p=4 n=1", "--poly", "x"}).code, 1);
  EXPECT_EQ(run({"spn-demo", "--seed", "x1"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, RerunReproducesReports) {
  const std::vector<std::vector<std::string>> cmds{
      {"ddt", "--field", "2^3", "--poly", "x^3"},
      {"preconditions", "--poly", "x^5 + x^4"},
      {"spectrum", "--field", "2^5", "--poly", "x^3 + x^2"},
      {"census", "--field", "2^5", "--poly", "x^3 + x^2"},
      {"verify-linear", "--seed", "1", "--seeds", "3", "--search", "50"},
      {"nset", "--d", "4", "--field", "2^5"},
      {"spn-demo", "--seed", "9", "--pairs", "1024"},
      {"circ-diff", "--c", "3", "--seed", "9", "--samples", "1000"}};
  int i = 0;
  for (auto cmd : cmds) {
    const auto path = temp_path(std::to_string(i++));
    cmd.insert(cmd.end(), {"--out", path.string()});
    const auto first = run(cmd);
    ASSERT_NE(first.code, 1) << cmd[0] << ": " << first.err;
    const std::string report = slurp(path);
    ASSERT_FALSE(report.empty());
    const auto again = run({"rerun", path.string()});
    EXPECT_EQ(again.code, first.code) << cmd[0];
    EXPECT_EQ(again.out, report) << cmd[0];
    std::filesystem::remove(path);
  }
  EXPECT_EQ(run({"rerun", temp_path("missing").string()}).code, 1);
}
