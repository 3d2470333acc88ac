#include "rewardsep/verifier.hpp"

namespace rsep {

template <typename Scalar>
bool RealizationReport<Scalar>::has_boundary_cases() const
{
  for (const auto &v : per_policy)
    if (!v.boundary.empty())
      return true;
  return false;
}

template <typename Scalar>
PolicyVerdict<Scalar> judge(const Vec<Scalar> &values, const Vec<Scalar> &lower_bounds, Tolerance tol)
{
  if (values.size() != lower_bounds.size())
    throw MalformedInput("value vector and lower bounds differ in dimension");
  PolicyVerdict<Scalar> verdict;
  verdict.values = values;
  for (Index i = 0; i < values.size(); ++i) {
    const Scalar gap = values(i) - lower_bounds(i);
    if constexpr (is_exact_v<Scalar>) {
      if (gap < 0)
        verdict.violated.push_back(i);
    } else {
      if (gap < -tol.eps)
        verdict.violated.push_back(i);
      else if (gap <= tol.eps)
        verdict.boundary.push_back(i);
    }
  }
  verdict.feasible = verdict.violated.empty();
  return verdict;
}

template <typename Scalar>
RealizationReport<Scalar> verify_realization(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap,
                                             const RewardSpec<Scalar> &spec, Tolerance tol)
{
  spec.validate(env.num_pairs());
  RealizationReport<Scalar> report;
  report.realized = true;
  auto add = [&](const Policy<Scalar> &policy, Role role) {
    auto verdict = judge<Scalar>(spec.rewards * compute_visitation(env, policy, tol), spec.lower_bounds, tol);
    verdict.name = policy.name;
    verdict.role = role;
    report.realized = report.realized && verdict.as_required();
    report.per_policy.push_back(std::move(verdict));
  };
  for (const auto &p : soap.good)
    add(p, Role::Good);
  for (const auto &p : soap.bad)
    add(p, Role::Bad);
  return report;
}

template <typename Scalar>
std::vector<Policy<Scalar>> brute_force_feasible_set(const MarkovEnv<Scalar> &env, const RewardSpec<Scalar> &spec,
                                                     std::uint64_t limit, Tolerance tol)
{
  spec.validate(env.num_pairs());
  std::vector<Policy<Scalar>> feasible;
  for (auto &policy : enumerate_deterministic_policies(env, limit)) {
    const Vec<Scalar> values = spec.rewards * compute_visitation(env, policy, tol);
    if (judge<Scalar>(values, spec.lower_bounds, tol).feasible)
      feasible.push_back(std::move(policy));
  }
  return feasible;
}

#define RSEP_INSTANTIATE_VERIFIER(S)                                                                             \
  template struct RealizationReport<S>;                                                                          \
  template PolicyVerdict<S> judge(const Vec<S> &, const Vec<S> &, Tolerance);                                    \
  template RealizationReport<S> verify_realization(const MarkovEnv<S> &, const Soap<S> &, const RewardSpec<S> &, \
                                                   Tolerance);                                                   \
  template std::vector<Policy<S>> brute_force_feasible_set(const MarkovEnv<S> &, const RewardSpec<S> &,          \
                                                           std::uint64_t, Tolerance);

RSEP_INSTANTIATE_VERIFIER(double)
RSEP_INSTANTIATE_VERIFIER(Rational)

} // namespace rsep
