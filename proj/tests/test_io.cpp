#include <doctest.h>

#include "rewardsep/io.hpp"
#include "rewardsep/plot.hpp"
#include "support/oracles.hpp"

using namespace rsep;
using oracle::q;

namespace {

json entailment_doc() { return read_json_file(oracle::fixture("entailment.json")); }

std::string parse_error_text(const json &doc)
{
  try {
    bundle_from_json(doc, "doc.json");
  } catch (const ParseError &e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("entailment fixture")
{
  const auto b = oracle::load("entailment.json");
  CHECK(b.env.num_states() == 2);
  CHECK(b.env.num_actions() == 2);
  CHECK(b.env.gamma == q(9, 10));
  CHECK(b.env.start == 0);
  REQUIRE(b.policies.size() == 4);
  CHECK(b.policy("pi21").actions() == DeterministicRule{1, 0});
  CHECK(validate_env(b.env).ok());
  CHECK_FALSE(b.soap);
  CHECK_FALSE(b.spec);
}

TEST_CASE("steady-state fixture has an absorbing s1")
{
  const auto b = oracle::load("steady_state.json");
  const Index s1 = *b.env.state_index("s1");
  for (Index a = 0; a < b.env.num_actions(); ++a)
    CHECK(b.env.transition(b.env.pair_index(s1, a), s1) == 1);
}

TEST_CASE("SOAP names must resolve")
{
  auto b = oracle::load("entailment.json");
  try {
    merge_soap(b, json{{"good", {"pi12"}}, {"bad", {"pi99"}}}, "soap.json");
    FAIL("expected ParseError");
  } catch (const ParseError &e) {
    CHECK(std::string(e.what()).find("pi99") != std::string::npos);
  }
}

TEST_CASE("schema violations name the field")
{
  auto doc = entailment_doc();
  doc["transitions"].erase(doc["transitions"].begin() + 2);
  auto text = parse_error_text(doc);
  CHECK(text.find("s1") != std::string::npos);
  CHECK(text.find("a1") != std::string::npos);

  doc = entailment_doc();
  doc["gamma"] = "nine tenths";
  text = parse_error_text(doc);
  CHECK(text.find("gamma") != std::string::npos);
  CHECK(text.find("doc.json") != std::string::npos);

  doc = entailment_doc();
  doc["transitions"][0]["to"] = json{{"s1", "0.5"}};
  CHECK_THROWS(bundle_from_json(doc));

  doc = entailment_doc();
  doc["policies"][1]["name"] = "pi11";
  CHECK_THROWS(bundle_from_json(doc));

  doc = entailment_doc();
  doc["policies"][0]["actions"]["s0"] = "a7";
  CHECK(parse_error_text(doc).find("a7") != std::string::npos);

  CHECK_THROWS_AS(parse_bundle(oracle::fixture("missing.json")), ParseError);
}

TEST_CASE("bare JSON numbers are read through their decimal text")
{
  auto doc = entailment_doc();
  doc["gamma"] = 0.9;
  CHECK(bundle_from_json(doc).env.gamma == q(9, 10));
}

TEST_CASE("policies default to full enumeration")
{
  auto doc = entailment_doc();
  doc.erase("policies");
  const auto b = bundle_from_json(doc);
  REQUIRE(b.policies.size() == 4);
  CHECK(b.policies[3].name == "pi22");
}

TEST_CASE("stochastic policies and specs parse")
{
  auto doc = entailment_doc();
  doc["policies"].push_back(
      {{"name", "mix"}, {"probabilities", {{"s0", {{"a1", "1/3"}, {"a2", "2/3"}}}, {"s1", {{"a1", "1"}}}}}});
  doc["soap"] = {{"good", {"mix"}}, {"bad", {"pi11"}}};
  doc["spec"] = read_json_file(oracle::fixture("xor_spec.json"));
  const auto b = bundle_from_json(doc);
  const auto &mix = b.policy("mix");
  REQUIRE_FALSE(mix.is_deterministic());
  const auto probs = mix.action_probabilities(2, 2);
  CHECK(probs(0, 1) == q(2, 3));
  CHECK(probs(1, 1) == 0);
  REQUIRE(b.spec);
  CHECK(b.spec->lower_bounds(1) == -8);
  CHECK(b.resolve_soap().good.front().name == "mix");
}

TEST_CASE("canonical serialization round-trips")
{
  auto b = oracle::load("entailment.json", "xor_soap.json");
  merge_spec(b, read_json_file(oracle::fixture("xor_spec.json")), "xor_spec.json");
  Mat<Rational> probs(2, 2);
  probs << q(1, 3), q(2, 3), q(1, 7), q(6, 7);
  b.policies.push_back(Policy<Rational>::stochastic("mix", probs));

  const std::string text = serialize_bundle(b);
  const auto again = bundle_from_json(json::parse(text));
  CHECK(again == b);
  CHECK(serialize_bundle(again) == text);

  const auto steady = oracle::load("steady_state.json");
  CHECK(serialize_bundle(bundle_from_json(json::parse(serialize_bundle(steady)))) == serialize_bundle(steady));
}

TEST_CASE("plot export reproduces the four corners")
{
  auto b = oracle::load("entailment.json", "xor_soap.json");
  const auto ax = parse_axis(b.env, "s0:a2"), ay = parse_axis(b.env, "s1:a2");
  const auto plot = export_plot<Rational>(b, ax, ay);
  REQUIRE(plot.points.size() == 4);
  const std::vector<std::pair<Rational, Rational>> expected = {
      {0, 0}, {0, q(90, 19)}, {q(100, 19), 0}, {q(100, 19), q(90, 19)}};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(plot.points[i].x == expected[i].first);
    CHECK(plot.points[i].y == expected[i].second);
  }
  CHECK(plot.points[0].label == "bad");
  CHECK(plot.points[1].label == "good");
  CHECK(plot.hyperplanes.empty());

  const auto csv = plot_csv(plot);
  CHECK(csv.find("name,label,x,y") != std::string::npos);
  CHECK(csv.find("pi22,bad,5.2631578947368") != std::string::npos);
  CHECK(csv.find("pi11,bad,0,0,") != std::string::npos);
  CHECK(csv.find("# hyperplanes\ndim,r_x,r_y,c") != std::string::npos);
  CHECK(csv.substr(csv.find("# hyperplanes")).find("\n0,") == std::string::npos);

  merge_spec(b, read_json_file(oracle::fixture("xor_spec.json")), "xor_spec.json");
  const auto with_spec = export_plot<Rational>(b, ax, ay);
  REQUIRE(with_spec.hyperplanes.size() == 2);
  CHECK(with_spec.hyperplanes[1].r_x == -1);
  CHECK(with_spec.hyperplanes[1].c == -8);

  CHECK_THROWS_AS(parse_axis(b.env, "s9:a1"), ParseError);
  CHECK_THROWS_AS(parse_axis(b.env, "s0"), ParseError);
}

TEST_CASE("report JSON writes numbers as strings")
{
  const auto b = oracle::load("entailment.json", "xor_soap.json");
  const auto out = design_scalar(b.env, b.resolve_soap());
  const auto doc = to_json(out);
  CHECK(doc["realizable"] == false);
  CHECK(doc["obstruction"]["point"][0] == "50/19");
  CHECK(doc["obstruction"]["lambda"][0] == "0.5");
}
