#include <doctest.h>

#include <random>

#include "rewardsep/mdp.hpp"
#include "support/oracles.hpp"

using namespace rsep;
using oracle::q;

namespace {

MarkovEnv<Rational> entailment() { return oracle::load("entailment.json").env; }
MarkovEnv<Rational> steady_state() { return oracle::load("steady_state.json").env; }

Policy<Rational> det(const char *name, DeterministicRule rule) { return Policy<Rational>::deterministic(name, rule); }

RewardSpec<Rational> two_row_reward()
{
  // R(., a1) = (0, 0), R(., a2) = (1, -1); lower bounds unused here.
  RewardSpec<Rational> spec;
  spec.rewards = Mat<Rational>(2, 4);
  spec.rewards << 0, 1, 0, 1, 0, -1, 0, -1;
  spec.lower_bounds = Vec<Rational>::Zero(2);
  return spec;
}

} // namespace

TEST_CASE("environment validation")
{
  CHECK(validate_env(entailment()).ok());

  auto env = entailment();
  env.transition(0, 1) = q(9, 10);
  auto report = validate_env(env);
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().find("s0") != std::string::npos);
  CHECK(report.violations.front().find("a1") != std::string::npos);

  env = entailment();
  env.gamma = 1;
  report = validate_env(env);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations.front().find("gamma") != std::string::npos);

  env = entailment();
  env.start = 5;
  CHECK_FALSE(validate_env(env).ok());

  env = entailment();
  env.transition(2, 0) = -1;
  env.transition(2, 1) = 2;
  CHECK_FALSE(validate_env(env).ok());
}

TEST_CASE("two-cycle visitation is a geometric series")
{
  const auto env = entailment();
  const auto rho = compute_visitation(env, det("pi22", {1, 1}));
  // 1/(1 - gamma^2) and gamma/(1 - gamma^2) at gamma = 9/10.
  const Rational g = q(9, 10);
  CHECK(rho(1) == 1 / (1 - g * g));
  CHECK(rho(3) == g / (1 - g * g));
  CHECK(rho(1) == q(100, 19));
  CHECK(rho(3) == q(90, 19));
  CHECK(rho(0) == 0);
  CHECK(rho(2) == 0);

  const auto frho = compute_visitation(env.cast<double>(), det("pi22", {1, 1}).cast<double>());
  CHECK(std::abs(frho(1) - 100.0 / 19) <= 1e-9);
  CHECK(std::abs(frho(3) - 90.0 / 19) <= 1e-9);
}

TEST_CASE("self-loop never leaves the start")
{
  const auto rho = compute_visitation(steady_state(), det("pi22", {1, 1}));
  CHECK(rho(1) == 10);
  CHECK(rho(0) == 0);
  CHECK(rho(2) == 0);
  CHECK(rho(3) == 0);
}

TEST_CASE("flow equations hold for every policy of both fixtures")
{
  for (const auto &env : {entailment(), steady_state()}) {
    for (const auto &pi : enumerate_deterministic_policies(env)) {
      const auto rho = compute_visitation(env, pi);
      CHECK(oracle::flow_error(env, rho) == 0);
      CHECK(flow_residual(env, rho) == 0);
      CHECK((rho.array() >= 0).all());
      CHECK(rho.sum() == 10);
    }
  }
}

TEST_CASE("stochastic policies mix visitations")
{
  const auto env = entailment();
  Mat<Rational> half(2, 2);
  half << q(1, 2), q(1, 2), q(1, 2), q(1, 2);
  const auto rho = compute_visitation(env, Policy<Rational>::stochastic("half", half));
  CHECK(rho(0) == q(50, 19));
  CHECK(rho(1) == q(50, 19));
  CHECK(rho(2) == q(45, 19));
  CHECK(rho(3) == q(45, 19));
  CHECK(oracle::flow_error(env, rho) == 0);
}

TEST_CASE("policy values")
{
  const auto env = entailment();
  const auto spec = two_row_reward();
  auto v = policy_value(env, det("pi22", {1, 1}), spec);
  CHECK(v(0) == 10);
  CHECK(v(1) == -10);
  v = policy_value(env, det("pi12", {0, 1}), spec);
  CHECK(v(0) == q(90, 19));
  CHECK(v(1) == q(-90, 19));

  RewardSpec<Rational> zero{Mat<Rational>::Zero(1, 4), Vec<Rational>::Zero(1)};
  CHECK(policy_value(env, det("pi22", {1, 1}), zero)(0) == 0);

  RewardSpec<Rational> wrong{Mat<Rational>::Zero(1, 3), Vec<Rational>::Zero(1)};
  CHECK_THROWS_AS(policy_value(env, det("pi22", {1, 1}), wrong), MalformedInput);
}

TEST_CASE("values are linear in the reward")
{
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> coef(-5, 5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto env = oracle::random_env(rng);
    const auto pi = oracle::random_stochastic_policy(rng, env);
    const Index n = env.num_pairs();
    RewardSpec<Rational> r{Mat<Rational>(1, n), Vec<Rational>::Zero(1)};
    RewardSpec<Rational> r2{Mat<Rational>(1, n), Vec<Rational>::Zero(1)};
    for (Index i = 0; i < n; ++i) {
      r.rewards(0, i) = q(coef(rng), 3);
      r2.rewards(0, i) = coef(rng);
    }
    const Rational alpha = q(coef(rng), 7);
    RewardSpec<Rational> scaled{alpha * r.rewards, r.lower_bounds};
    RewardSpec<Rational> sum{r.rewards + r2.rewards, r.lower_bounds};
    const auto v = policy_value(env, pi, r), v2 = policy_value(env, pi, r2);
    CHECK(policy_value(env, pi, scaled)(0) == alpha * v(0));
    CHECK(policy_value(env, pi, sum)(0) == v(0) + v2(0));
  }
}

TEST_CASE("deterministic enumeration")
{
  const auto pis = enumerate_deterministic_policies(entailment());
  REQUIRE(pis.size() == 4);
  CHECK(pis[0].name == "pi11");
  CHECK(pis[1].name == "pi12");
  CHECK(pis[2].name == "pi21");
  CHECK(pis[3].name == "pi22");
  CHECK(pis[1].actions() == DeterministicRule{0, 1});

  MarkovEnv<Rational> one{{"s"}, {"x", "y", "z"}, Mat<Rational>::Ones(3, 1), q(1, 2), 0};
  CHECK(enumerate_deterministic_policies(one).size() == 3);

  MarkovEnv<Rational> nine{{"s0", "s1", "s2"}, {"a", "b", "c"}, Mat<Rational>::Zero(9, 3), q(1, 2), 0};
  nine.transition.col(0).setOnes();
  try {
    enumerate_deterministic_policies(nine, 10);
    FAIL("expected LimitExceeded");
  } catch (const LimitExceeded &e) {
    CHECK(e.count() == 27);
    CHECK(e.limit() == 10);
  }

  CHECK(deterministic_policy_count(3, 3) == 27);
  CHECK(deterministic_policy_count(64, 2) == UINT64_MAX);
  CHECK(deterministic_policy_name({0, 10}, 12) == "pi1_11");
}

TEST_CASE("invalid policies are named")
{
  const auto env = entailment();
  try {
    compute_visitation(env, det("short", {0}));
    FAIL("expected InvalidPolicy");
  } catch (const InvalidPolicy &e) {
    CHECK(std::string(e.what()).find("short") != std::string::npos);
  }
  CHECK_THROWS_AS(compute_visitation(env, det("oob", {0, 2})), InvalidPolicy);
  Mat<Rational> bad(2, 2);
  bad << q(1, 2), q(1, 3), 1, 0;
  CHECK_THROWS_AS(compute_visitation(env, Policy<Rational>::stochastic("bad", bad)), InvalidPolicy);
}

TEST_CASE("Monte-Carlo agrees with the linear solve")
{
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    const auto env = oracle::random_env(rng, 3, 2);
    const auto pi = oracle::random_stochastic_policy(rng, env);
    const auto rho = compute_visitation(env, pi);
    const auto mc = oracle::monte_carlo_visitation(env, pi, rng, 20000);
    for (Index i = 0; i < rho.size(); ++i) {
      const double diff = std::abs(mc.mean[i] - rho(i).convert_to<double>());
      CHECK(diff <= 3 * mc.standard_error[i] + mc.truncation_bias);
    }
  }
}

TEST_CASE("every visitation is counted by the self-check")
{
  const auto before = visitation_checks();
  compute_visitation(entailment(), det("pi11", {0, 0}));
  CHECK(visitation_checks() == before + 1);
}
