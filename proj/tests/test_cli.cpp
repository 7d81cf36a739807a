#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "vmz/cli.hpp"

using vmz::run_command;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string field(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return "<missing>";
}

}  // namespace

TEST(Cli, EvalCmplExample) {
  const auto r = run({"eval", "cmpl", "--q", "3", "--lambda", "0", "--index", "1", "--args", "T", "--prec", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(field(r.out, "value"), "v^1 + v^2 + O(v^4)");
}

TEST(Cli, VerifyOmegaExample) {
  const auto r = run({"verify", "omega", "--q", "3", "--lambda", "0", "--t-order", "40", "--prec", "40"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(field(r.out, "residual_ord"), "inf");
  EXPECT_EQ(field(r.out, "status"), "ok");
}

TEST(Cli, GossVanishingExample) {
  const auto r = run({"eval", "mzv-v", "--index", "2", "--q", "3", "--lambda", "0", "--prec", "40"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(field(r.out, "value"), "O(v^40)");
  EXPECT_EQ(field(r.out, "is_zero_to_prec"), "true");
}

TEST(Cli, GoldenZetaValues) {
  for (const char* s : {"1", "2"}) {
    const auto r = run({"eval", "mzv-v", "--index", s, "--q", "3", "--lambda", "0", "--prec", "40"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(std::string("tests/golden/zeta_") + s + "_v_q3_l0.txt")) << s;
  }
}

TEST(Cli, TrustUnvalidatedIsReported) {
  const auto r = run({"eval", "mzv-v", "--index", "1", "--prec", "20", "--trust-unvalidated"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(field(r.out, "tmodule_validation"), "skipped");
  const auto golden = slurp("tests/golden/zeta_1_v_q3_l0.txt");
  EXPECT_EQ(field(r.out, "value").substr(0, 20), field(golden, "value").substr(0, 20));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"eval"}).code, 2);
  EXPECT_EQ(run({"eval", "cmpl", "--index", "1"}).code, 2);
  EXPECT_EQ(run({"eval", "cmpl", "--index", "1", "--args", "1"}).code, 2);  // outside ConvV
  EXPECT_EQ(run({"eval", "cmpl", "--index", "1", "--args", "T", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"eval", "cmpl", "--index", "x", "--args", "T"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({"verify", "specialize", "--index", "1", "--args", "T", "--N", "1", "--form", "literal"}).code, 1);
  EXPECT_EQ(run({"verify", "specialize", "--index", "1", "--args", "T", "--N", "1"}).code, 0);
  EXPECT_EQ(run({"certify", "vabp", "--copies", "1", "--rho", "1", "--P", "1"}).code, 1);
  EXPECT_EQ(run({"certify", "vabp", "--rho", "1,-1", "--P", "1,-1"}).code, 0);
}

TEST(Cli, MachineGrammar) {
  const std::regex line_re("^[a-z_0-9]+=.*$");
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"eval", "cmspl", "--index", "2,1", "--args", "T,1+T", "--prec", "10"},
           {"eval", "mzv-inf", "--index", "1", "--prec", "10"},
           {"verify", "system", "--index", "2,1", "--args", "T,1+T", "--t-order", "20", "--prec", "20"},
           {"verify", "tmodule", "--file", "data/tmodules/tensor_2.json", "--prec", "20"},
           {"certify", "mpl", "--index", "1", "--args", "T", "--N-list", "1,2"},
           {"relations", "find", "--value", "cmpl:1:T^2+T^3", "--value", "cmpl:1:T", "--prec", "40", "--recheck",
            "60"},
           {"appendix", "count-ball", "--q", "2", "--n", "3"},
           {"appendix", "small-solution", "--matrix", "1/T,1", "--C", "2"},
           {"appendix", "sup-norm", "--roots", "1/T", "--rho", "2"},
       }) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 0) << args[1] << r.err << r.out;
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line)) EXPECT_TRUE(std::regex_match(line, line_re)) << line;
  }
}

TEST(Cli, OutputsCarryResults) {
  EXPECT_EQ(field(run({"appendix", "count-ball", "--q", "2", "--n", "2"}).out, "count"), "8");
  EXPECT_EQ(field(run({"appendix", "count-ball", "--q", "3", "--n", "1"}).out, "count"), "9");
  EXPECT_EQ(field(run({"appendix", "sup-norm", "--poly", "1-T*t", "--rho", "2"}).out, "sup_norm"), "q^1");
  const auto ss = run({"appendix", "small-solution", "--matrix", "1/T,1", "--C", "2"});
  EXPECT_EQ(field(ss.out, "norm"), "q^1");
  const auto rel = run({"relations", "find", "--value", "cmpl:1:T^2+T^3", "--value", "cmpl:1:T", "--prec", "40",
                        "--recheck", "60"});
  EXPECT_EQ(field(rel.out, "relations"), "1");
  EXPECT_NE(rel.out.find("coeffs=["), std::string::npos);
  const auto none = run({"relations", "find", "--value", "cmpl:1:T", "--value", "cmpl:2:T", "--value", "one",
                         "--degree", "3", "--prec", "40", "--recheck", "50"});
  EXPECT_EQ(field(none.out, "relations"), "0");
}

TEST(Cli, HigherPrecisionRefines) {
  const auto lo = field(run({"eval", "cmpl", "--index", "2,1", "--args", "T,1+T", "--prec", "12"}).out, "value");
  const auto hi = field(run({"eval", "cmpl", "--index", "2,1", "--args", "T,1+T", "--prec", "24"}).out, "value");
  // Every digit term printed at low precision reappears at high precision.
  const std::string body = lo.substr(0, lo.rfind(" + O("));
  EXPECT_EQ(hi.rfind(body, 0), 0u) << lo << " vs " << hi;
}

TEST(Cli, HumanFormatAndConfigFile) {
  const auto h = run({"appendix", "count-ball", "--n", "1", "--format", "human"});
  EXPECT_NE(h.out.find("count   : 9"), std::string::npos) << h.out;
  const auto path = std::filesystem::temp_directory_path() / "vmz_cli_test.toml";
  {
    std::ofstream cfg(path);
    cfg << "q = 2\nprec = 4\n";
  }
  const auto r = run({"--config", path.string(), "appendix", "count-ball", "--n", "1"});
  EXPECT_EQ(field(r.out, "count"), "4") << r.err;
  // Flags override the file.
  const auto o = run({"--config", path.string(), "appendix", "count-ball", "--n", "1", "--q", "3"});
  EXPECT_EQ(field(o.out, "count"), "9");
  std::filesystem::remove(path);
}
