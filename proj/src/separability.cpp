#include "rewardsep/separability.hpp"

#include <algorithm>
#include <numeric>

namespace rsep {

template <typename Scalar>
PointSet<Scalar> visitation_points(const MarkovEnv<Scalar> &env, const std::vector<Policy<Scalar>> &policies,
                                   Tolerance tol)
{
  PointSet<Scalar> out;
  for (const auto &p : policies)
    out.add(p.name, compute_visitation(env, p, tol));
  return out;
}

namespace {

template <typename Scalar>
void require_dimension(const PointSet<Scalar> &set, Index dimension, const char *what)
{
  for (const auto &p : set.points)
    if (p.size() != dimension)
      throw MalformedInput(std::string(what) + ": point dimension " + std::to_string(p.size()) + " != " +
                           std::to_string(dimension));
}

template <typename Scalar>
Hyperplane<Scalar> plane_from(const Vec<Scalar> &x)
{
  const Index n = x.size() - 1;
  return {x.head(n), x(n)};
}

template <typename Scalar>
Hyperplane<Scalar> scaled_plane(const Vec<Scalar> &normal, const Scalar &offset, const Scalar &gap)
{
  return {normal / gap, Scalar(offset / gap)};
}

} // namespace

template <typename Scalar>
HullQuery<Scalar> in_convex_hull(const Vec<Scalar> &target, const PointSet<Scalar> &hull, Tolerance tol)
{
  HullQuery<Scalar> out;
  if (hull.empty())
    return out;
  const Index n = target.size();
  const Index k = static_cast<Index>(hull.size());
  require_dimension(hull, n, "in_convex_hull");

  // sum_i lambda_i rho_i = target, sum_i lambda_i = 1, lambda >= 0
  lp::LinearProgram<Scalar> program(n + 1, k);
  for (Index i = 0; i < k; ++i) {
    program.constraints.block(0, i, n, 1) = hull.points[i];
    program.constraints(n, i) = 1;
  }
  program.rhs.head(n) = target;
  program.rhs(n) = 1;
  std::fill(program.senses.begin(), program.senses.end(), lp::Sense::Equal);

  auto result = lp::check_feasible(program, tol);
  if (result.feasible) {
    out.member = true;
    out.coefficients = result.witness;
    return out;
  }
  // Farkas (y, t): rho_i'y + t <= 0 for all i and target'y + t > 0, so
  // r = -y puts the hull at r'x >= t and the target strictly below.
  const Vec<Scalar> y = result.witness.head(n);
  const Scalar t = result.witness(n);
  const Scalar gap = t + y.dot(target);
  out.separator = scaled_plane<Scalar>(-y, t, gap);
  return out;
}

template <typename Scalar>
HullIntersection<Scalar> hulls_intersect(const PointSet<Scalar> &a, const PointSet<Scalar> &b, Tolerance tol)
{
  if (a.empty() || b.empty())
    throw MalformedInput("hulls_intersect needs two nonempty point sets");
  const Index n = a.dimension();
  require_dimension(a, n, "hulls_intersect");
  require_dimension(b, n, "hulls_intersect");
  const Index ka = static_cast<Index>(a.size());
  const Index kb = static_cast<Index>(b.size());

  // sum lambda_i a_i - sum mu_j b_j = 0, sum lambda = 1, sum mu = 1
  lp::LinearProgram<Scalar> program(n + 2, ka + kb);
  for (Index i = 0; i < ka; ++i) {
    program.constraints.block(0, i, n, 1) = a.points[i];
    program.constraints(n, i) = 1;
  }
  for (Index j = 0; j < kb; ++j) {
    program.constraints.block(0, ka + j, n, 1) = -b.points[j];
    program.constraints(n + 1, ka + j) = 1;
  }
  program.rhs(n) = 1;
  program.rhs(n + 1) = 1;
  std::fill(program.senses.begin(), program.senses.end(), lp::Sense::Equal);

  HullIntersection<Scalar> out;
  auto result = lp::check_feasible(program, tol);
  if (result.feasible) {
    out.intersect = true;
    out.lambda = result.witness.head(ka);
    out.mu = result.witness.tail(kb);
    out.point = Vec<Scalar>::Zero(n);
    for (Index i = 0; i < ka; ++i)
      out.point += out.lambda(i) * a.points[i];
    return out;
  }
  // Farkas (y, ta, tb): a_i'y + ta <= 0, -b_j'y + tb <= 0, ta + tb > 0.
  const Vec<Scalar> y = result.witness.head(n);
  const Scalar ta = result.witness(n);
  const Scalar tb = result.witness(n + 1);
  out.separator = scaled_plane<Scalar>(-y, ta, Scalar(ta + tb));
  return out;
}

template <typename Scalar>
lp::LinearProgram<Scalar> margin_program(const PointSet<Scalar> &above, const PointSet<Scalar> &below)
{
  const Index n = !above.empty() ? above.dimension() : below.dimension();
  require_dimension(above, n, "margin_program");
  require_dimension(below, n, "margin_program");
  const Index rows = static_cast<Index>(above.size() + below.size());

  lp::LinearProgram<Scalar> program(rows, n + 1);
  for (Index j = 0; j <= n; ++j)
    program.set_free(j);
  Index row = 0;
  for (const auto &p : above.points) {
    program.constraints.row(row).head(n) = p.transpose();
    program.constraints(row, n) = -1;
    program.senses[row] = lp::Sense::GreaterEqual;
    ++row;
  }
  for (const auto &p : below.points) {
    program.constraints.row(row).head(n) = p.transpose();
    program.constraints(row, n) = -1;
    program.senses[row] = lp::Sense::LessEqual;
    program.rhs(row) = -1;
    ++row;
  }
  return program;
}

namespace {

template <typename Scalar>
void require_design_soap(const Soap<Scalar> &soap)
{
  if (soap.good.empty() || soap.bad.empty())
    throw InvalidSoap("design queries need nonempty good and bad policy sets");
}

template <typename Scalar>
void require_consistent(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap, Tolerance tol)
{
  auto report = check_consistency(env, soap, tol);
  if (!report.consistent)
    throw InconsistentSoap(std::move(report));
}

template <typename Scalar>
void require_valid_env(const MarkovEnv<Scalar> &env, Tolerance tol)
{
  auto report = validate_env(env, tol);
  if (!report.ok())
    throw MalformedInput("invalid environment: " + report.violations.front());
}

/// Attaches the verifier report; a synthesized spec that fails it is a bug.
template <typename Scalar>
DesignOutcome<Scalar> realized(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap, RewardSpec<Scalar> spec,
                               Tolerance tol)
{
  DesignOutcome<Scalar> out;
  auto report = verify_realization(env, soap, spec, tol);
  if (!report.realized)
    throw Error("synthesized reward spec failed verification");
  out.realizable = true;
  out.spec = std::move(spec);
  out.verification = std::move(report);
  return out;
}

template <typename Scalar>
Vec<Scalar> normalized(const Vec<Scalar> &weights)
{
  const Scalar total = weights.sum();
  if (!is_positive(total))
    throw Error("degenerate Farkas certificate");
  return weights / total;
}

template <typename Scalar>
PointSet<Scalar> subset_of(const PointSet<Scalar> &set, const std::vector<std::size_t> &indices)
{
  PointSet<Scalar> out;
  for (auto i : indices)
    out.add(set.names[i], set.points[i]);
  return out;
}

template <typename Scalar>
Scalar squared_distance(const Vec<Scalar> &a, const Vec<Scalar> &b)
{
  return (a - b).squaredNorm();
}

template <typename Scalar>
bool strictly_below(const Hyperplane<Scalar> &plane, const Vec<Scalar> &x, Tolerance tol)
{
  return is_negative(plane.evaluate(x), tol);
}

template <typename Scalar>
struct GreedyCandidate
{
  Hyperplane<Scalar> plane;
  std::vector<std::size_t> excluded;
};

// Grow a subset from `seed`, always trying the uncovered bad point closest to
// the current subset centroid next, and keep each point whose addition leaves
// the single-hyperplane LP feasible.
template <typename Scalar>
GreedyCandidate<Scalar> grow_from_seed(const PointSet<Scalar> &good, const PointSet<Scalar> &bad,
                                       const std::vector<std::size_t> &uncovered, std::size_t seed,
                                       const Hyperplane<Scalar> &seed_plane, Tolerance tol)
{
  std::vector<std::size_t> subset{seed};
  std::vector<std::size_t> untried;
  for (auto b : uncovered)
    if (b != seed)
      untried.push_back(b);
  Hyperplane<Scalar> plane = seed_plane;

  while (!untried.empty()) {
    Vec<Scalar> centroid = Vec<Scalar>::Zero(bad.dimension());
    for (auto b : subset)
      centroid += bad.points[b];
    centroid /= Scalar(static_cast<long>(subset.size()));

    auto nearest = std::min_element(untried.begin(), untried.end(), [&](std::size_t x, std::size_t y) {
      const Scalar dx = squared_distance<Scalar>(bad.points[x], centroid);
      const Scalar dy = squared_distance<Scalar>(bad.points[y], centroid);
      return dx < dy || (dx == dy && x < y);
    });
    const std::size_t candidate = *nearest;
    untried.erase(nearest);

    std::vector<std::size_t> trial = subset;
    trial.push_back(candidate);
    auto result = lp::check_feasible(margin_program(good, subset_of(bad, trial)), tol);
    if (result.feasible) {
      subset = std::move(trial);
      plane = plane_from(result.witness);
    }
  }

  GreedyCandidate<Scalar> out{plane, {}};
  for (auto b : uncovered)
    if (strictly_below(plane, bad.points[b], tol))
      out.excluded.push_back(b);
  return out;
}

template <typename Scalar>
std::vector<Hyperplane<Scalar>> greedy_reduce(const PointSet<Scalar> &good, const PointSet<Scalar> &bad,
                                              const std::vector<Hyperplane<Scalar>> &per_bad, Tolerance tol)
{
  std::vector<std::size_t> uncovered(bad.size());
  std::iota(uncovered.begin(), uncovered.end(), std::size_t{0});
  std::vector<Hyperplane<Scalar>> planes;

  while (!uncovered.empty()) {
    std::optional<GreedyCandidate<Scalar>> best;
    for (auto seed : uncovered) {
      auto candidate = grow_from_seed(good, bad, uncovered, seed, per_bad[seed], tol);
      if (!best || candidate.excluded.size() > best->excluded.size())
        best = std::move(candidate);
      if (best->excluded.size() == uncovered.size())
        break;
    }
    std::vector<std::size_t> remaining;
    for (auto b : uncovered)
      if (std::find(best->excluded.begin(), best->excluded.end(), b) == best->excluded.end())
        remaining.push_back(b);
    if (remaining.size() == uncovered.size())
      throw Error("greedy reduction made no progress");
    uncovered = std::move(remaining);
    planes.push_back(std::move(best->plane));
  }
  return planes;
}

template <typename Scalar>
RewardSpec<Scalar> spec_from_planes(const std::vector<Hyperplane<Scalar>> &planes, Index num_pairs)
{
  RewardSpec<Scalar> spec{Mat<Scalar>(static_cast<Index>(planes.size()), num_pairs),
                          Vec<Scalar>(static_cast<Index>(planes.size()))};
  for (Index i = 0; i < spec.dimension(); ++i) {
    spec.rewards.row(i) = planes[i].normal.transpose();
    spec.lower_bounds(i) = planes[i].offset;
  }
  return spec;
}

} // namespace

template <typename Scalar>
DesignOutcome<Scalar> design_scalar(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap, Tolerance tol)
{
  require_valid_env(env, tol);
  require_design_soap(soap);
  require_consistent(env, soap, tol);

  const auto good = visitation_points(env, soap.good, tol);
  const auto bad = visitation_points(env, soap.bad, tol);
  auto result = lp::check_feasible(margin_program(good, bad), tol);
  if (result.feasible)
    return realized(env, soap, spec_from_planes<Scalar>({plane_from(result.witness)}, env.num_pairs()), tol);

  // Farkas rows: good multipliers >= 0, bad multipliers <= 0, and the free
  // (r, c) columns force sum y_g rho_g = sum (-y_b) rho_b with equal totals.
  const Index ng = static_cast<Index>(good.size());
  const Index nb = static_cast<Index>(bad.size());
  CommonHullPoint<Scalar> common;
  common.good = good.names;
  common.bad = bad.names;
  common.lambda = normalized<Scalar>(result.witness.head(ng));
  common.mu = normalized<Scalar>(Vec<Scalar>(-result.witness.tail(nb)));
  common.point = Vec<Scalar>::Zero(good.dimension());
  for (Index i = 0; i < ng; ++i)
    common.point += common.lambda(i) * good.points[i];

  DesignOutcome<Scalar> out;
  out.obstruction = std::move(common);
  return out;
}

template <typename Scalar>
DesignOutcome<Scalar> design_multi(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap, Tolerance tol, bool reduce)
{
  require_valid_env(env, tol);
  require_design_soap(soap);
  require_consistent(env, soap, tol);

  const auto good = visitation_points(env, soap.good, tol);
  const auto bad = visitation_points(env, soap.bad, tol);

  std::vector<Hyperplane<Scalar>> per_bad;
  for (std::size_t j = 0; j < bad.size(); ++j) {
    auto result = lp::check_feasible(margin_program(good, subset_of(bad, {j})), tol);
    if (!result.feasible) {
      DesignOutcome<Scalar> out;
      out.obstruction = BadPointInGoodHull<Scalar>{
          bad.names[j], good.names,
          normalized<Scalar>(result.witness.head(static_cast<Index>(good.size())))};
      return out;
    }
    per_bad.push_back(plane_from(result.witness));
  }

  const auto planes = reduce ? greedy_reduce(good, bad, per_bad, tol) : per_bad;
  return realized(env, soap, spec_from_planes(planes, env.num_pairs()), tol);
}

template <typename Scalar>
DesignOutcome<Scalar> check_scalar_optimality(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap, Tolerance tol,
                                              std::uint64_t limit, OptimalityReading reading)
{
  require_valid_env(env, tol);
  require_design_soap(soap);
  if (!soap.all_deterministic())
    throw UnsupportedPolicy("optimality-based realization is only checked for deterministic SOAP policies");

  const auto all = visitation_points(env, enumerate_deterministic_policies(env, limit), tol);
  const auto good = visitation_points(env, soap.good, tol);
  const auto bad = visitation_points(env, soap.bad, tol);
  const Index n = env.num_pairs();

  // Variables [r; v], all free.
  //   good:  r'rho - v  = 0   (>= 0 for the range reading)
  //   all:   r'rho - v <= 0
  //   bad:   r'rho - v <= -1
  const Index rows = static_cast<Index>(good.size() + all.size() + bad.size());
  lp::LinearProgram<Scalar> program(rows, n + 1);
  for (Index j = 0; j <= n; ++j)
    program.set_free(j);
  std::vector<std::string> labels;
  Index row = 0;
  auto add_rows = [&](const PointSet<Scalar> &set, const std::string &tag, lp::Sense sense, const Scalar &rhs) {
    for (std::size_t i = 0; i < set.size(); ++i, ++row) {
      program.constraints.row(row).head(n) = set.points[i].transpose();
      program.constraints(row, n) = -1;
      program.senses[row] = sense;
      program.rhs(row) = rhs;
      labels.push_back(tag + ":" + set.names[i]);
    }
  };
  add_rows(good, "good", reading == OptimalityReading::EqualValue ? lp::Sense::Equal : lp::Sense::GreaterEqual,
           Scalar(0));
  add_rows(all, "all", lp::Sense::LessEqual, Scalar(0));
  add_rows(bad, "bad", lp::Sense::LessEqual, Scalar(-1));

  auto result = lp::check_feasible(program, tol);
  if (!result.feasible) {
    DesignOutcome<Scalar> out;
    out.obstruction = OptimalityObstruction<Scalar>{std::move(labels), result.witness};
    return out;
  }

  const auto plane = plane_from(result.witness);
  Scalar best = plane.normal.dot(all.points.front());
  for (const auto &p : all.points)
    best = std::max(best, Scalar(plane.normal.dot(p)));
  for (const auto &p : good.points)
    if (!is_zero(Scalar(plane.normal.dot(p) - best), tol))
      throw Error("optimality LP returned a reward under which a good policy is not optimal");
  for (const auto &p : bad.points)
    if (!is_negative(Scalar(plane.normal.dot(p) - best), tol))
      throw Error("optimality LP returned a reward under which a bad policy is optimal");

  // Threshold at the optimal value: good policies sit exactly on it.
  return realized(env, soap, spec_from_planes<Scalar>({{plane.normal, best}}, n), tol);
}

#define RSEP_INSTANTIATE_SEPARABILITY(S)                                                                          \
  template PointSet<S> visitation_points(const MarkovEnv<S> &, const std::vector<Policy<S>> &, Tolerance);       \
  template HullQuery<S> in_convex_hull(const Vec<S> &, const PointSet<S> &, Tolerance);                           \
  template HullIntersection<S> hulls_intersect(const PointSet<S> &, const PointSet<S> &, Tolerance);               \
  template lp::LinearProgram<S> margin_program(const PointSet<S> &, const PointSet<S> &);                         \
  template DesignOutcome<S> design_scalar(const MarkovEnv<S> &, const Soap<S> &, Tolerance);                      \
  template DesignOutcome<S> design_multi(const MarkovEnv<S> &, const Soap<S> &, Tolerance, bool);                 \
  template DesignOutcome<S> check_scalar_optimality(const MarkovEnv<S> &, const Soap<S> &, Tolerance,             \
                                                    std::uint64_t, OptimalityReading);

RSEP_INSTANTIATE_SEPARABILITY(double)
RSEP_INSTANTIATE_SEPARABILITY(Rational)

} // namespace rsep
