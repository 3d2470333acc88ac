#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rewardsep/soap.hpp"

namespace rsep {

enum class Role
{
  Good,
  Bad
};

template <typename Scalar>
struct PolicyVerdict
{
  std::string name;
  Role role = Role::Good;
  Vec<Scalar> values;
  bool feasible = false;
  /// Dimensions i with V_i < c_i.
  std::vector<Index> violated;
  /// Float mode only: dimensions with |V_i - c_i| <= tolerance. Counted as
  /// feasible, but reported so the caller can see the verdict is marginal.
  std::vector<Index> boundary;

  /// Good policies should be feasible, bad ones infeasible.
  bool as_required() const { return feasible == (role == Role::Good); }
};

template <typename Scalar>
struct RealizationReport
{
  bool realized = false;
  std::vector<PolicyVerdict<Scalar>> per_policy;

  bool has_boundary_cases() const;
};

/// Feasibility of one value vector against lower bounds (ties feasible).
template <typename Scalar>
PolicyVerdict<Scalar> judge(const Vec<Scalar> &values, const Vec<Scalar> &lower_bounds, Tolerance tol = {});

/// Does <R, c> make every good policy feasible and every bad policy infeasible?
template <typename Scalar>
RealizationReport<Scalar> verify_realization(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap,
                                             const RewardSpec<Scalar> &spec, Tolerance tol = {});

/// Every deterministic policy of env that is feasible under spec, in
/// enumeration order. Throws LimitExceeded when |A|^|S| > limit.
template <typename Scalar>
std::vector<Policy<Scalar>> brute_force_feasible_set(const MarkovEnv<Scalar> &env, const RewardSpec<Scalar> &spec,
                                                     std::uint64_t limit = 4096, Tolerance tol = {});

} // namespace rsep
