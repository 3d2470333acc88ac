#include "rewardsep/mdp.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

#include "rewardsep/linalg.hpp"

namespace rsep {

namespace {

std::atomic<std::uint64_t> g_visitation_checks{0};

template <typename Scalar>
bool sums_to_one(const Scalar &sum, Tolerance tol)
{
  return is_zero(Scalar(sum - Scalar(1)), tol);
}

} // namespace

std::uint64_t visitation_checks() { return g_visitation_checks.load(); }

template <typename Scalar>
std::optional<Index> MarkovEnv<Scalar>::state_index(std::string_view name) const
{
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end())
    return std::nullopt;
  return static_cast<Index>(it - states.begin());
}

template <typename Scalar>
std::optional<Index> MarkovEnv<Scalar>::action_index(std::string_view name) const
{
  auto it = std::find(actions.begin(), actions.end(), name);
  if (it == actions.end())
    return std::nullopt;
  return static_cast<Index>(it - actions.begin());
}

template <typename Scalar>
std::string MarkovEnv<Scalar>::pair_label(Index pair) const
{
  return states[pair / num_actions()] + "/" + actions[pair % num_actions()];
}

template <typename Scalar>
Mat<Scalar> Policy<Scalar>::action_probabilities(Index num_states, Index num_actions) const
{
  if (is_deterministic()) {
    Mat<Scalar> p = Mat<Scalar>::Zero(num_states, num_actions);
    for (Index s = 0; s < num_states; ++s)
      p(s, actions()[s]) = 1;
    return p;
  }
  return std::get<Mat<Scalar>>(rule);
}

template <typename Scalar>
bool Policy<Scalar>::same_rule(const Policy &other) const
{
  if (is_deterministic() != other.is_deterministic())
    return false;
  if (is_deterministic())
    return actions() == other.actions();
  const auto &a = std::get<Mat<Scalar>>(rule);
  const auto &b = std::get<Mat<Scalar>>(other.rule);
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

template <typename Scalar>
void RewardSpec<Scalar>::validate(Index num_pairs) const
{
  if (rewards.rows() < 1)
    throw MalformedInput("reward spec needs at least one dimension");
  if (rewards.cols() != num_pairs)
    throw MalformedInput("reward rows have " + std::to_string(rewards.cols()) + " entries, environment has " +
                         std::to_string(num_pairs) + " state-action pairs");
  if (lower_bounds.size() != rewards.rows())
    throw MalformedInput("reward spec has " + std::to_string(rewards.rows()) + " rows but " +
                         std::to_string(lower_bounds.size()) + " lower bounds");
  if constexpr (!is_exact_v<Scalar>) {
    if (!rewards.allFinite() || !lower_bounds.allFinite())
      throw MalformedInput("reward spec has non-finite entries");
  }
}

template <typename Scalar>
ValidationReport validate_env(const MarkovEnv<Scalar> &env, Tolerance tol)
{
  ValidationReport report;
  auto &v = report.violations;
  if (env.states.empty())
    v.push_back("no states");
  if (env.actions.empty())
    v.push_back("no actions");
  if (!(env.gamma >= 0 && env.gamma < 1))
    v.push_back("gamma out of range [0, 1): " + format_scalar(env.gamma));
  if (env.start < 0 || env.start >= env.num_states())
    v.push_back("unknown start state");
  if (env.transition.rows() != env.num_pairs() || env.transition.cols() != env.num_states()) {
    v.push_back("transition matrix must be " + std::to_string(env.num_pairs()) + " x " +
                std::to_string(env.num_states()));
    return report;
  }
  for (Index s = 0; s < env.num_states(); ++s) {
    for (Index a = 0; a < env.num_actions(); ++a) {
      const auto row = env.transition.row(env.pair_index(s, a));
      const std::string where = "(" + env.states[s] + ", " + env.actions[a] + ")";
      bool negative = false;
      for (Index j = 0; j < row.size(); ++j)
        negative = negative || !is_finite(row(j)) || row(j) < 0;
      if (negative)
        v.push_back("negative or non-finite transition probability at " + where);
      const Scalar sum = row.sum();
      if (!sums_to_one(sum, tol))
        v.push_back("transition distribution at " + where + " sums to " + format_scalar(sum));
    }
  }
  return report;
}

template <typename Scalar>
void validate_policy(const MarkovEnv<Scalar> &env, const Policy<Scalar> &policy, Tolerance tol)
{
  auto fail = [&](const std::string &what) { throw InvalidPolicy("policy \"" + policy.name + "\": " + what); };
  if (policy.is_deterministic()) {
    const auto &acts = policy.actions();
    if (static_cast<Index>(acts.size()) != env.num_states())
      fail("maps " + std::to_string(acts.size()) + " states, environment has " +
           std::to_string(env.num_states()));
    for (Index s = 0; s < env.num_states(); ++s)
      if (acts[s] < 0 || acts[s] >= env.num_actions())
        fail("invalid action in state " + env.states[s]);
    return;
  }
  const auto &p = std::get<Mat<Scalar>>(policy.rule);
  if (p.rows() != env.num_states() || p.cols() != env.num_actions())
    fail("probability matrix must be " + std::to_string(env.num_states()) + " x " +
         std::to_string(env.num_actions()));
  for (Index s = 0; s < env.num_states(); ++s) {
    for (Index a = 0; a < env.num_actions(); ++a)
      if (!is_finite(p(s, a)) || p(s, a) < 0)
        fail("negative probability in state " + env.states[s]);
    if (!sums_to_one(Scalar(p.row(s).sum()), tol))
      fail("distribution in state " + env.states[s] + " sums to " + format_scalar(Scalar(p.row(s).sum())));
  }
}

template <typename Scalar>
Mat<Scalar> policy_transition(const MarkovEnv<Scalar> &env, const Policy<Scalar> &policy)
{
  const Index ns = env.num_states();
  Mat<Scalar> p = Mat<Scalar>::Zero(ns, ns);
  if (policy.is_deterministic()) {
    for (Index s = 0; s < ns; ++s)
      p.row(s) = env.transition.row(env.pair_index(s, policy.actions()[s]));
    return p;
  }
  const auto &pi = std::get<Mat<Scalar>>(policy.rule);
  for (Index s = 0; s < ns; ++s)
    for (Index a = 0; a < env.num_actions(); ++a)
      if (pi(s, a) != 0)
        p.row(s) += pi(s, a) * env.transition.row(env.pair_index(s, a));
  return p;
}

template <typename Scalar>
Scalar flow_residual(const MarkovEnv<Scalar> &env, const Vec<Scalar> &rho)
{
  if (rho.size() != env.num_pairs())
    throw MalformedInput("visitation vector has wrong length");
  const Index ns = env.num_states();
  const Index na = env.num_actions();
  // inflow(s) = 1[s = s0] + gamma * sum_{s', a'} T(s', a', s) rho(s', a')
  Vec<Scalar> inflow = env.transition.transpose() * rho;
  inflow *= env.gamma;
  inflow(env.start) += 1;

  Scalar worst = 0;
  for (Index s = 0; s < ns; ++s) {
    Scalar outflow = 0;
    for (Index a = 0; a < na; ++a)
      outflow += rho(env.pair_index(s, a));
    worst = std::max(worst, abs_value(Scalar(outflow - inflow(s))));
  }
  const Scalar expected_total = Scalar(1) / (Scalar(1) - env.gamma);
  worst = std::max(worst, abs_value(Scalar(rho.sum() - expected_total)));
  for (Index i = 0; i < rho.size(); ++i)
    if (rho(i) < 0)
      worst = std::max(worst, abs_value(rho(i)));
  return worst;
}

template <typename Scalar>
Vec<Scalar> compute_visitation(const MarkovEnv<Scalar> &env, const Policy<Scalar> &policy, Tolerance tol)
{
  if (env.transition.rows() != env.num_pairs() || env.transition.cols() != env.num_states())
    throw MalformedInput("environment transition matrix has wrong shape");
  validate_policy(env, policy, tol);

  const Index ns = env.num_states();
  const Index na = env.num_actions();
  const Mat<Scalar> system = Mat<Scalar>::Identity(ns, ns) - env.gamma * policy_transition(env, policy).transpose();
  Vec<Scalar> start = Vec<Scalar>::Zero(ns);
  start(env.start) = 1;
  const Vec<Scalar> state_visits = solve_dense<Scalar>(system, start);

  const Mat<Scalar> pi = policy.action_probabilities(ns, na);
  Vec<Scalar> rho(env.num_pairs());
  for (Index s = 0; s < ns; ++s)
    for (Index a = 0; a < na; ++a)
      rho(env.pair_index(s, a)) = pi(s, a) * state_visits(s);

  const Scalar residual = flow_residual(env, rho);
  if constexpr (is_exact_v<Scalar>) {
    if (residual != 0)
      throw Error("visitation for \"" + policy.name + "\" violates the flow equations");
  } else {
    const double scale = std::max(1.0, 1.0 / (1.0 - env.gamma));
    if (residual > tol.eps * scale)
      throw Error("visitation for \"" + policy.name + "\" violates the flow equations (residual " +
                  format_double(residual) + ")");
  }
  g_visitation_checks.fetch_add(1, std::memory_order_relaxed);
  return rho;
}

template <typename Scalar>
Vec<Scalar> policy_value(const MarkovEnv<Scalar> &env, const Policy<Scalar> &policy, const RewardSpec<Scalar> &spec,
                         Tolerance tol)
{
  if (spec.rewards.cols() != env.num_pairs())
    throw MalformedInput("reward rows have " + std::to_string(spec.rewards.cols()) + " entries, environment has " +
                         std::to_string(env.num_pairs()) + " state-action pairs");
  return spec.rewards * compute_visitation(env, policy, tol);
}

std::uint64_t deterministic_policy_count(Index num_states, Index num_actions)
{
  constexpr auto max = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t count = 1;
  for (Index s = 0; s < num_states; ++s) {
    if (num_actions != 0 && count > max / static_cast<std::uint64_t>(num_actions))
      return max;
    count *= static_cast<std::uint64_t>(num_actions);
  }
  return count;
}

std::string deterministic_policy_name(const DeterministicRule &actions, Index num_actions)
{
  std::string name = "pi";
  const bool separate = num_actions > 9;
  for (std::size_t s = 0; s < actions.size(); ++s) {
    if (separate && s > 0)
      name += '_';
    name += std::to_string(actions[s] + 1);
  }
  return name;
}

template <typename Scalar>
std::vector<Policy<Scalar>> enumerate_deterministic_policies(const MarkovEnv<Scalar> &env, std::uint64_t limit)
{
  const std::uint64_t count = deterministic_policy_count(env.num_states(), env.num_actions());
  if (count > limit)
    throw LimitExceeded(count, limit);

  std::vector<Policy<Scalar>> out;
  out.reserve(count);
  DeterministicRule rule(static_cast<std::size_t>(env.num_states()), 0);
  for (std::uint64_t k = 0; k < count; ++k) {
    out.push_back(Policy<Scalar>::deterministic(deterministic_policy_name(rule, env.num_actions()), rule));
    // odometer, last state fastest
    for (Index s = env.num_states() - 1; s >= 0; --s) {
      if (++rule[s] < env.num_actions())
        break;
      rule[s] = 0;
    }
  }
  return out;
}

#define RSEP_INSTANTIATE_MDP(S)                                                                                  \
  template struct MarkovEnv<S>;                                                                                  \
  template struct Policy<S>;                                                                                     \
  template struct RewardSpec<S>;                                                                                 \
  template ValidationReport validate_env(const MarkovEnv<S> &, Tolerance);                                       \
  template void validate_policy(const MarkovEnv<S> &, const Policy<S> &, Tolerance);                             \
  template Mat<S> policy_transition(const MarkovEnv<S> &, const Policy<S> &);                                    \
  template S flow_residual(const MarkovEnv<S> &, const Vec<S> &);                                                \
  template Vec<S> compute_visitation(const MarkovEnv<S> &, const Policy<S> &, Tolerance);                        \
  template Vec<S> policy_value(const MarkovEnv<S> &, const Policy<S> &, const RewardSpec<S> &, Tolerance);       \
  template std::vector<Policy<S>> enumerate_deterministic_policies(const MarkovEnv<S> &, std::uint64_t);

RSEP_INSTANTIATE_MDP(double)
RSEP_INSTANTIATE_MDP(Rational)

} // namespace rsep
