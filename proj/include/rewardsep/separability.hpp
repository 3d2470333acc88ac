#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rewardsep/lp.hpp"
#include "rewardsep/soap.hpp"
#include "rewardsep/verifier.hpp"

namespace rsep {

/// Visitation vectors labelled by the policies that produced them.
template <typename Scalar>
struct PointSet
{
  std::vector<std::string> names;
  std::vector<Vec<Scalar>> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  Index dimension() const { return points.empty() ? 0 : points.front().size(); }
  void add(std::string name, Vec<Scalar> point)
  {
    names.push_back(std::move(name));
    points.push_back(std::move(point));
  }
};

template <typename Scalar>
PointSet<Scalar> visitation_points(const MarkovEnv<Scalar> &env, const std::vector<Policy<Scalar>> &policies,
                                   Tolerance tol = {});

/// { x : normal' x >= offset } holds one point set while every point of the
/// other satisfies normal' x <= offset - 1.
template <typename Scalar>
struct Hyperplane
{
  Vec<Scalar> normal;
  Scalar offset = 0;

  Scalar evaluate(const Vec<Scalar> &x) const { return normal.dot(x) - offset; }
};

template <typename Scalar>
struct HullQuery
{
  bool member = false;
  /// Convex weights over the hull points (member only).
  Vec<Scalar> coefficients;
  /// Separates the target (below) from the hull (above) when not a member.
  std::optional<Hyperplane<Scalar>> separator;
};

/// Is target a convex combination of the hull points?
template <typename Scalar>
HullQuery<Scalar> in_convex_hull(const Vec<Scalar> &target, const PointSet<Scalar> &hull, Tolerance tol = {});

template <typename Scalar>
struct HullIntersection
{
  bool intersect = false;
  /// Common point with its weights over a and over b (intersect only).
  Vec<Scalar> point;
  Vec<Scalar> lambda;
  Vec<Scalar> mu;
  /// a above, b below (disjoint only).
  std::optional<Hyperplane<Scalar>> separator;
};

template <typename Scalar>
HullIntersection<Scalar> hulls_intersect(const PointSet<Scalar> &a, const PointSet<Scalar> &b, Tolerance tol = {});

/// Margin LP: find (r, c) with r'x >= c on `above` and r'x <= c - 1 on
/// `below`. Variables are [r; c], all free; rows are above then below.
template <typename Scalar>
lp::LinearProgram<Scalar> margin_program(const PointSet<Scalar> &above, const PointSet<Scalar> &below);

// ---------------------------------------------------------------------------
// Reward design

/// A bad visitation that is a convex combination of good visitations.
template <typename Scalar>
struct BadPointInGoodHull
{
  std::string bad;
  std::vector<std::string> good;
  Vec<Scalar> lambda;
};

/// A point shared by conv(good) and conv(bad).
template <typename Scalar>
struct CommonHullPoint
{
  Vec<Scalar> point;
  std::vector<std::string> good;
  Vec<Scalar> lambda;
  std::vector<std::string> bad;
  Vec<Scalar> mu;
};

/// Farkas multipliers of the optimality LP, one per row. Labels are
/// "good:<name>", "all:<name>" and "bad:<name>".
template <typename Scalar>
struct OptimalityObstruction
{
  std::vector<std::string> labels;
  Vec<Scalar> multipliers;
};

template <typename Scalar>
using Obstruction = std::variant<BadPointInGoodHull<Scalar>, CommonHullPoint<Scalar>, OptimalityObstruction<Scalar>>;

template <typename Scalar>
struct DesignOutcome
{
  bool realizable = false;
  std::optional<RewardSpec<Scalar>> spec;
  std::optional<Obstruction<Scalar>> obstruction;
  /// Verifier report for spec (realizable only).
  std::optional<RealizationReport<Scalar>> verification;
};

class UnsupportedPolicy : public Error
{
public:
  using Error::Error;
};

/// Single reward row and threshold: realizable iff conv(P_G) and conv(P_B)
/// are disjoint. Refuses inconsistent SOAPs with InconsistentSoap.
template <typename Scalar>
DesignOutcome<Scalar> design_scalar(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap, Tolerance tol = {});

/// Multidimensional rewards: realizable iff no bad visitation lies in
/// conv(P_G). One hyperplane per bad policy, or fewer with `reduce`, which
/// merges bad policies greedily under a shared hyperplane.
template <typename Scalar>
DesignOutcome<Scalar> design_multi(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap, Tolerance tol = {},
                                   bool reduce = false);

enum class OptimalityReading
{
  /// Every good policy attains one shared optimal value.
  EqualValue,
  /// Good policies clear a shared threshold that dominates every policy.
  Range
};

/// Scalar reward under which every good policy is optimal among all
/// deterministic policies and every bad one is not. Deterministic SOAPs only;
/// enumerates |A|^|S| policies, refusing above `limit`. The returned spec
/// has c = the optimal value.
template <typename Scalar>
DesignOutcome<Scalar> check_scalar_optimality(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap,
                                              Tolerance tol = {}, std::uint64_t limit = 4096,
                                              OptimalityReading reading = OptimalityReading::EqualValue);

} // namespace rsep
