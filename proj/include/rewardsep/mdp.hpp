#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rewardsep/numeric.hpp"

namespace rsep {

/// Reward-free Markov environment <S, A, T, gamma, s0>.
///
/// State-action pairs are indexed row-major in declaration order,
/// pair_index(s, a) = s * |A| + a. Every vector over pairs (visitations,
/// reward rows) uses this order.
template <typename Scalar>
struct MarkovEnv
{
  std::vector<std::string> states;
  std::vector<std::string> actions;
  /// (|S|*|A|) x |S|; row pair_index(s, a) is the next-state distribution.
  Mat<Scalar> transition;
  Scalar gamma = 0;
  Index start = 0;

  Index num_states() const { return static_cast<Index>(states.size()); }
  Index num_actions() const { return static_cast<Index>(actions.size()); }
  Index num_pairs() const { return num_states() * num_actions(); }
  Index pair_index(Index s, Index a) const { return s * num_actions() + a; }

  std::optional<Index> state_index(std::string_view name) const;
  std::optional<Index> action_index(std::string_view name) const;
  /// "s0/a2"
  std::string pair_label(Index pair) const;

  template <typename To>
  MarkovEnv<To> cast() const
  {
    return {states, actions, cast_mat<To>(transition), static_cast<To>(gamma), start};
  }
};

/// Action chosen in each state.
using DeterministicRule = std::vector<Index>;

/// Stationary policy, either deterministic or a row-stochastic |S| x |A| matrix.
template <typename Scalar>
struct Policy
{
  std::string name;
  std::variant<DeterministicRule, Mat<Scalar>> rule;

  static Policy deterministic(std::string name, DeterministicRule actions)
  {
    return {std::move(name), std::move(actions)};
  }
  static Policy stochastic(std::string name, Mat<Scalar> probabilities)
  {
    return {std::move(name), std::move(probabilities)};
  }

  bool is_deterministic() const { return std::holds_alternative<DeterministicRule>(rule); }
  const DeterministicRule &actions() const { return std::get<DeterministicRule>(rule); }

  /// pi(a|s) as an |S| x |A| matrix regardless of kind.
  Mat<Scalar> action_probabilities(Index num_states, Index num_actions) const;

  /// Same function: equal action maps, or equal probability matrices.
  bool same_rule(const Policy &other) const;

  template <typename To>
  Policy<To> cast() const
  {
    if (is_deterministic())
      return Policy<To>::deterministic(name, actions());
    return Policy<To>::stochastic(name, cast_mat<To>(std::get<Mat<Scalar>>(rule)));
  }
};

/// d x (|S|*|A|) reward matrix R and lower bounds c. A policy is feasible
/// iff R rho >= c componentwise.
template <typename Scalar>
struct RewardSpec
{
  Mat<Scalar> rewards;
  Vec<Scalar> lower_bounds;

  Index dimension() const { return rewards.rows(); }
  void validate(Index num_pairs) const;

  template <typename To>
  RewardSpec<To> cast() const
  {
    return {cast_mat<To>(rewards), cast_vec<To>(lower_bounds)};
  }
};

class InvalidPolicy : public Error
{
public:
  using Error::Error;
};

struct ValidationReport
{
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

template <typename Scalar>
ValidationReport validate_env(const MarkovEnv<Scalar> &env, Tolerance tol = {});

/// Throws InvalidPolicy naming the policy when it does not fit env.
template <typename Scalar>
void validate_policy(const MarkovEnv<Scalar> &env, const Policy<Scalar> &policy, Tolerance tol = {});

/// P_pi(s, s') = sum_a pi(a|s) T(s, a, s').
template <typename Scalar>
Mat<Scalar> policy_transition(const MarkovEnv<Scalar> &env, const Policy<Scalar> &policy);

/// Discounted expected state-action visitation rho^pi from the start state.
/// Solves d = e_s0 + gamma P_pi' d directly, then rho(s, a) = pi(a|s) d(s).
/// The Bellman flow equations and sum(rho) = 1/(1-gamma) are checked on
/// every result; a violation throws.
template <typename Scalar>
Vec<Scalar> compute_visitation(const MarkovEnv<Scalar> &env, const Policy<Scalar> &policy, Tolerance tol = {});

/// Largest absolute residual over the per-state flow equations and the
/// normalization identity. Zero (exact) for a true visitation vector.
template <typename Scalar>
Scalar flow_residual(const MarkovEnv<Scalar> &env, const Vec<Scalar> &visitation);

/// V^pi_i(s0) = r_i' rho^pi for every reward dimension.
template <typename Scalar>
Vec<Scalar> policy_value(const MarkovEnv<Scalar> &env, const Policy<Scalar> &policy,
                         const RewardSpec<Scalar> &spec, Tolerance tol = {});

/// |A|^|S|, saturating at UINT64_MAX.
std::uint64_t deterministic_policy_count(Index num_states, Index num_actions);

/// "pi" followed by 1-based action indices, e.g. pi12. Separated by '_'
/// when there are more than nine actions.
std::string deterministic_policy_name(const DeterministicRule &actions, Index num_actions);

/// All deterministic policies in lexicographic order (first state most
/// significant). Throws LimitExceeded without enumerating when
/// |A|^|S| > limit.
template <typename Scalar>
std::vector<Policy<Scalar>> enumerate_deterministic_policies(const MarkovEnv<Scalar> &env,
                                                             std::uint64_t limit = 4096);

/// Number of visitation vectors whose invariants have been checked in this
/// process.
std::uint64_t visitation_checks();

} // namespace rsep
