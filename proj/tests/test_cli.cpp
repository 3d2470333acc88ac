#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rewardsep/cli.hpp"
#include "rewardsep/io.hpp"
#include "support/oracles.hpp"

using oracle::fixture;

namespace {

struct Run
{
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args)
{
  std::ostringstream out, err;
  const int code = rsep::cli::run_command(args, out, err);
  return {code, out.str(), err.str()};
}

bool has(const std::string &text, const std::string &needle) { return text.find(needle) != std::string::npos; }

std::filesystem::path temp_file(const std::string &name)
{
  return std::filesystem::temp_directory_path() / ("rewardsep-test-" + name);
}

} // namespace

TEST_CASE("multi-dimensional design of the xor SOAP")
{
  const auto r = run({"design-multi", fixture("entailment.json"), "--soap", fixture("xor_soap.json"), "--exact",
                      "--reduce"});
  CHECK(r.code == rsep::cli::kPositive);
  CHECK(has(r.out, "realizable with d = 2"));
  CHECK(has(r.out, "verifier: realized"));
}

TEST_CASE("scalar design of the xor SOAP is refused with the common point")
{
  const auto r = run({"design-scalar", fixture("entailment.json"), "--soap", fixture("xor_soap.json"), "--exact"});
  CHECK(r.code == rsep::cli::kNegative);
  CHECK(has(r.out, "not realizable"));
  CHECK(has(r.out, "50/19"));
}

TEST_CASE("consistency of the degenerate SOAP")
{
  const auto r = run({"consistency", fixture("steady_state.json"), "--soap", fixture("degenerate_soap.json")});
  CHECK(r.code == rsep::cli::kNegative);
  CHECK(has(r.out, "good pi21 and bad pi22"));
}

TEST_CASE("exit codes ignore formatting flags")
{
  const std::vector<std::vector<std::string>> commands = {
      {"design-multi", fixture("entailment.json"), "--soap", fixture("xor_soap.json")},
      {"design-scalar", fixture("entailment.json"), "--soap", fixture("xor_soap.json")},
      {"design-scalar", fixture("entailment.json"), "--soap", fixture("single_hyperplane_soap.json")},
      {"design-scalar-optimal", fixture("entailment.json"), "--soap", fixture("always_a1_soap.json")},
      {"design-scalar-optimal", fixture("entailment.json"), "--soap", fixture("xor_soap.json")},
      {"consistency", fixture("steady_state.json"), "--soap", fixture("degenerate_soap.json")},
      {"verify", fixture("entailment.json"), "--soap", fixture("xor_soap.json"), "--spec", fixture("xor_spec.json")},
  };
  for (const auto &cmd : commands) {
    CAPTURE(cmd[0]);
    const int plain = run(cmd).code;
    auto with_json = cmd;
    with_json.push_back("--json");
    CHECK(run(with_json).code == plain);
    auto with_float = cmd;
    with_float.insert(with_float.end(), {"--tol", "1e-9"});
    CHECK(run(with_float).code == plain);
  }
}

TEST_CASE("verify accepts the two-row spec")
{
  const auto r = run({"verify", fixture("entailment.json"), "--soap", fixture("xor_soap.json"), "--spec",
                      fixture("xor_spec.json"), "--json"});
  CHECK(r.code == rsep::cli::kPositive);
  const auto doc = rsep::json::parse(r.out);
  CHECK(doc["realized"] == true);
}

TEST_CASE("usage and input errors exit 2")
{
  CHECK(run({}).code == rsep::cli::kUsage);
  CHECK(run({"frobnicate"}).code == rsep::cli::kUsage);
  CHECK(run({"visitation", fixture("missing.json")}).code == rsep::cli::kUsage);
  CHECK(run({"visitation", fixture("entailment.json"), "--exact", "--tol", "1e-6"}).code == rsep::cli::kUsage);
  CHECK(run({"design-scalar", fixture("entailment.json")}).code == rsep::cli::kUsage);
  CHECK(run({"enumerate", fixture("entailment.json"), "--limit", "3"}).code == rsep::cli::kUsage);
  CHECK(run({"export-plot", fixture("entailment.json"), "--x", "s0:a9", "--y", "s1:a2"}).code ==
        rsep::cli::kUsage);
}

TEST_CASE("max-dim turns a wider design into a negative answer")
{
  const std::vector<std::string> base = {"design-multi", fixture("entailment.json"), "--soap",
                                         fixture("xor_soap.json")};
  auto narrow = base;
  narrow.insert(narrow.end(), {"--max-dim", "1"});
  CHECK(run(narrow).code == rsep::cli::kNegative);
  auto wide = base;
  wide.insert(wide.end(), {"--max-dim", "2"});
  CHECK(run(wide).code == rsep::cli::kPositive);
}

TEST_CASE("visitation and enumerate")
{
  auto r = run({"visitation", fixture("entailment.json")});
  CHECK(r.code == 0);
  CHECK(has(r.out, "100/19"));
  r = run({"enumerate", fixture("entailment.json"), "--json"});
  CHECK(r.code == 0);
  CHECK(rsep::json::parse(r.out)["count"] == 4);
}

TEST_CASE("design output written with --out verifies")
{
  const auto spec_path = temp_file("spec.json");
  const auto r = run({"design-multi", fixture("entailment.json"), "--soap", fixture("xor_soap.json"), "--out",
                      spec_path.string()});
  REQUIRE(r.code == 0);
  const auto v = run({"verify", fixture("entailment.json"), "--soap", fixture("xor_soap.json"), "--spec",
                      spec_path.string()});
  CHECK(v.code == rsep::cli::kPositive);
  std::filesystem::remove(spec_path);
}

TEST_CASE("export-plot CSV")
{
  const auto csv_path = temp_file("plot.csv");
  const auto r = run({"export-plot", fixture("entailment.json"), "--soap", fixture("xor_soap.json"), "--x", "s0:a2",
                      "--y", "s1:a2", "--out", csv_path.string()});
  REQUIRE(r.code == 0);
  std::ifstream in(csv_path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(has(text.str(), "pi22,bad,5.2631578947368"));
  CHECK(has(text.str(), ",100/19,90/19"));
  std::filesystem::remove(csv_path);
}
