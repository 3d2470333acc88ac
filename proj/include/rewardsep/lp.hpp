#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rewardsep/numeric.hpp"

namespace rsep::lp {

enum class Sense
{
  LessEqual,
  Equal,
  GreaterEqual
};

/// minimize objective' x
/// s.t.     constraints.row(i) x  (senses[i])  rhs(i)
///          lower(j) <= x(j) <= upper(j)      (nullopt = unbounded side)
///
/// The default bounds are x >= 0.
template <typename Scalar>
struct LinearProgram
{
  Vec<Scalar> objective;
  Mat<Scalar> constraints;
  Vec<Scalar> rhs;
  std::vector<Sense> senses;
  std::vector<std::optional<Scalar>> lower;
  std::vector<std::optional<Scalar>> upper;

  LinearProgram() = default;
  LinearProgram(Index num_constraints, Index num_variables);

  Index num_variables() const { return objective.size(); }
  Index num_constraints() const { return constraints.rows(); }

  void set_free(Index j)
  {
    lower[j].reset();
    upper[j].reset();
  }

  /// Throws MalformedInput on inconsistent dimensions or non-finite data.
  void validate() const;
};

enum class Status
{
  Optimal,
  Infeasible,
  Unbounded
};

std::string to_string(Status status);

/// Certificates use one multiplier per constraint row with the sign convention
/// y_i >= 0 on >= rows and y_i <= 0 on <= rows, so every feasible x satisfies
/// y' A x >= y' b.
///   Optimal:    dual multipliers with dual_objective(lp, y) == objective_value.
///   Infeasible: Farkas vector with  sup_{x in bounds} y' A x < y' b.
///   Unbounded:  `ray` is a recession direction with objective' ray < 0.
template <typename Scalar>
struct LpSolution
{
  Status status = Status::Infeasible;
  std::optional<Vec<Scalar>> primal;
  std::optional<Scalar> objective_value;
  std::optional<Vec<Scalar>> certificate;
  std::optional<Vec<Scalar>> ray;
  Index iterations = 0;
};

/// Two-phase dense-tableau simplex with Bland's rule. Deterministic: ties
/// always go to the lowest column / basic-variable index.
template <typename Scalar>
LpSolution<Scalar> solve(const LinearProgram<Scalar> &lp, Tolerance tol = {});

template <typename Scalar>
struct FeasibilityResult
{
  bool feasible = false;
  /// A feasible point when feasible, the Farkas vector otherwise.
  Vec<Scalar> witness;
};

template <typename Scalar>
FeasibilityResult<Scalar> check_feasible(const LinearProgram<Scalar> &lp, Tolerance tol = {});

// ---------------------------------------------------------------------------
// Certificate checks (used by tests and by callers that want to double-check)

/// Largest violation of any constraint or bound; zero means feasible.
template <typename Scalar>
Scalar max_violation(const LinearProgram<Scalar> &lp, const Vec<Scalar> &x);

template <typename Scalar>
bool satisfies(const LinearProgram<Scalar> &lp, const Vec<Scalar> &x, Tolerance tol = {});

/// True when y has the right signs and sup_{x in bounds} y'Ax < y'b.
template <typename Scalar>
bool is_farkas_certificate(const LinearProgram<Scalar> &lp, const Vec<Scalar> &y, Tolerance tol = {});

/// Lagrangian dual value  y'b + min_{x in bounds} (c - A'y)'x.
/// Returns nullopt when y is sign-infeasible or the inner minimum is -inf.
template <typename Scalar>
std::optional<Scalar> dual_objective(const LinearProgram<Scalar> &lp, const Vec<Scalar> &y,
                                     Tolerance tol = {});

/// Plain-text listing of the program, one row per line.
template <typename Scalar>
std::string format_listing(const LinearProgram<Scalar> &lp);

extern template struct LinearProgram<double>;
extern template struct LinearProgram<Rational>;

} // namespace rsep::lp
