#include "rewardsep/lp.hpp"

#include <sstream>

namespace rsep::lp {

template <typename Scalar>
LinearProgram<Scalar>::LinearProgram(Index num_constraints, Index num_variables)
    : objective(Vec<Scalar>::Zero(num_variables)),
      constraints(Mat<Scalar>::Zero(num_constraints, num_variables)),
      rhs(Vec<Scalar>::Zero(num_constraints)),
      senses(static_cast<std::size_t>(num_constraints), Sense::LessEqual),
      lower(static_cast<std::size_t>(num_variables), Scalar(0)),
      upper(static_cast<std::size_t>(num_variables))
{
}

template <typename Scalar>
void LinearProgram<Scalar>::validate() const
{
  const Index n = objective.size();
  const Index m = constraints.rows();
  auto mismatch = [](const std::string &what) { throw MalformedInput("linear program: " + what); };
  if (constraints.cols() != n)
    mismatch("constraint matrix has " + std::to_string(constraints.cols()) + " columns, objective has " +
             std::to_string(n) + " entries");
  if (rhs.size() != m)
    mismatch("rhs length " + std::to_string(rhs.size()) + " != " + std::to_string(m) + " rows");
  if (static_cast<Index>(senses.size()) != m)
    mismatch("sense count " + std::to_string(senses.size()) + " != " + std::to_string(m) + " rows");
  if (static_cast<Index>(lower.size()) != n || static_cast<Index>(upper.size()) != n)
    mismatch("bound vectors must have one entry per variable");

  if constexpr (!is_exact_v<Scalar>) {
    if (!objective.allFinite() || !constraints.allFinite() || !rhs.allFinite())
      mismatch("non-finite coefficient");
    for (Index j = 0; j < n; ++j)
      if ((lower[j] && !std::isfinite(*lower[j])) || (upper[j] && !std::isfinite(*upper[j])))
        mismatch("non-finite bound on variable " + std::to_string(j) + " (use an absent bound for infinity)");
  }
}

std::string to_string(Status status)
{
  switch (status) {
  case Status::Optimal: return "optimal";
  case Status::Infeasible: return "infeasible";
  case Status::Unbounded: return "unbounded";
  }
  return "?";
}

namespace {

// x(var) = offset(var) + sum over structural columns k of sign_k * x'_k
struct StructColumn
{
  Index var;
  int sign;
};

template <typename Scalar>
class Simplex
{
public:
  Simplex(const LinearProgram<Scalar> &lp, Tolerance tol) : lp_(lp), tol_(tol) { standardize(); }

  LpSolution<Scalar> run()
  {
    LpSolution<Scalar> out;

    Vec<Scalar> phase1 = Vec<Scalar>::Zero(total_cols_);
    for (Index k = 0; k < rows_; ++k)
      phase1(art_start_ + k) = 1;
    iterate(phase1, out.iterations);

    Scalar infeasibility = 0;
    for (Index i = 0; i < rows_; ++i)
      infeasibility += phase1(basis_[i]) * tableau_(i, rhs_col_);
    if (is_positive(infeasibility, tol_)) {
      out.status = Status::Infeasible;
      out.certificate = original_duals(phase1);
      return out;
    }

    drive_out_artificials();

    Vec<Scalar> phase2 = Vec<Scalar>::Zero(total_cols_);
    for (Index k = 0; k < static_cast<Index>(struct_cols_.size()); ++k)
      phase2(k) = lp_.objective(struct_cols_[k].var) * Scalar(struct_cols_[k].sign);

    if (auto unbounded_col = iterate(phase2, out.iterations)) {
      out.status = Status::Unbounded;
      out.ray = recession_ray(*unbounded_col);
      return out;
    }

    out.status = Status::Optimal;
    out.primal = primal();
    out.objective_value = lp_.objective.dot(*out.primal);
    out.certificate = original_duals(phase2);
    return out;
  }

private:
  void standardize()
  {
    const Index n = lp_.num_variables();
    const Index m = lp_.num_constraints();
    offset_ = Vec<Scalar>::Zero(n);

    std::vector<std::pair<Index, Scalar>> bound_rows; // (struct column, width)
    for (Index j = 0; j < n; ++j) {
      const auto &lo = lp_.lower[j];
      const auto &up = lp_.upper[j];
      if (lo) {
        offset_(j) = *lo;
        struct_cols_.push_back({j, +1});
        if (up)
          bound_rows.emplace_back(static_cast<Index>(struct_cols_.size()) - 1, Scalar(*up - *lo));
      } else if (up) {
        offset_(j) = *up;
        struct_cols_.push_back({j, -1});
      } else {
        struct_cols_.push_back({j, +1});
        struct_cols_.push_back({j, -1});
      }
    }

    rows_ = m + static_cast<Index>(bound_rows.size());
    const Index num_struct = static_cast<Index>(struct_cols_.size());

    std::vector<Sense> senses(lp_.senses);
    senses.resize(static_cast<std::size_t>(rows_), Sense::LessEqual);
    Index num_slack = 0;
    for (Sense s : senses)
      num_slack += s == Sense::Equal ? 0 : 1;

    slack_start_ = num_struct;
    art_start_ = num_struct + num_slack;
    total_cols_ = art_start_ + rows_;
    rhs_col_ = total_cols_;
    tableau_ = Mat<Scalar>::Zero(rows_, total_cols_ + 1);
    flip_.assign(static_cast<std::size_t>(rows_), 1);

    for (Index i = 0; i < m; ++i) {
      for (Index k = 0; k < num_struct; ++k)
        tableau_(i, k) = lp_.constraints(i, struct_cols_[k].var) * Scalar(struct_cols_[k].sign);
      tableau_(i, rhs_col_) = lp_.rhs(i) - lp_.constraints.row(i).dot(offset_);
    }
    for (std::size_t r = 0; r < bound_rows.size(); ++r) {
      const Index i = m + static_cast<Index>(r);
      tableau_(i, bound_rows[r].first) = 1;
      tableau_(i, rhs_col_) = bound_rows[r].second;
    }

    Index slack = slack_start_;
    for (Index i = 0; i < rows_; ++i) {
      if (senses[i] == Sense::LessEqual)
        tableau_(i, slack++) = 1;
      else if (senses[i] == Sense::GreaterEqual)
        tableau_(i, slack++) = -1;
      if (tableau_(i, rhs_col_) < 0) {
        tableau_.row(i) = -tableau_.row(i);
        flip_[i] = -1;
      }
      tableau_(i, art_start_ + i) = 1;
    }

    basis_.resize(static_cast<std::size_t>(rows_));
    for (Index i = 0; i < rows_; ++i)
      basis_[i] = art_start_ + i;
  }

  Scalar reduced_cost(const Vec<Scalar> &cost, Index col) const
  {
    Scalar r = cost(col);
    for (Index i = 0; i < rows_; ++i) {
      const Scalar &a = tableau_(i, col);
      if (a != 0)
        r -= cost(basis_[i]) * a;
    }
    return r;
  }

  void pivot(Index row, Index col)
  {
    const Scalar p = tableau_(row, col);
    for (Index j = 0; j <= total_cols_; ++j)
      if (tableau_(row, j) != 0)
        tableau_(row, j) /= p;
    for (Index i = 0; i < rows_; ++i) {
      if (i == row || tableau_(i, col) == 0)
        continue;
      const Scalar factor = tableau_(i, col);
      for (Index j = 0; j <= total_cols_; ++j) {
        if (tableau_(row, j) == 0)
          continue;
        tableau_(i, j) -= factor * tableau_(row, j);
        if constexpr (!is_exact_v<Scalar>) {
          if (std::abs(tableau_(i, j)) < 1e-13)
            tableau_(i, j) = 0;
        }
      }
      tableau_(i, col) = 0;
    }
    basis_[row] = col;
  }

  // Bland's rule. Returns the entering column when the objective is unbounded.
  std::optional<Index> iterate(const Vec<Scalar> &cost, Index &iterations)
  {
    constexpr Index max_iterations = 100000;
    for (;;) {
      Index entering = -1;
      for (Index j = 0; j < art_start_; ++j) {
        if (is_negative(reduced_cost(cost, j), tol_)) {
          entering = j;
          break;
        }
      }
      if (entering < 0)
        return std::nullopt;

      Index leaving = -1;
      Scalar best_ratio = 0;
      for (Index i = 0; i < rows_; ++i) {
        const Scalar &a = tableau_(i, entering);
        if (!is_positive(a, tol_))
          continue;
        const Scalar ratio = tableau_(i, rhs_col_) / a;
        bool take = leaving < 0;
        if (!take) {
          if constexpr (is_exact_v<Scalar>)
            take = ratio < best_ratio || (ratio == best_ratio && basis_[i] < basis_[leaving]);
          else
            take = ratio < best_ratio - tol_.eps ||
                   (std::abs(ratio - best_ratio) <= tol_.eps && basis_[i] < basis_[leaving]);
        }
        if (take) {
          leaving = i;
          best_ratio = ratio;
        }
      }
      if (leaving < 0)
        return entering;

      pivot(leaving, entering);
      if (++iterations > max_iterations)
        throw Error("simplex iteration limit exceeded");
    }
  }

  // Artificials left basic at level zero are pivoted out where the row has a
  // nonzero non-artificial entry; otherwise the row is redundant and stays inert.
  void drive_out_artificials()
  {
    for (Index i = 0; i < rows_; ++i) {
      if (basis_[i] < art_start_)
        continue;
      for (Index j = 0; j < art_start_; ++j) {
        if (!is_zero(tableau_(i, j), tol_)) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  // y = c_B' B^{-1}; B^{-1} sits in the artificial columns. Mapped back
  // through the row flips and truncated to the caller's rows.
  Vec<Scalar> original_duals(const Vec<Scalar> &cost) const
  {
    const Index m = lp_.num_constraints();
    Vec<Scalar> y = Vec<Scalar>::Zero(m);
    for (Index k = 0; k < m; ++k) {
      Scalar v = 0;
      for (Index i = 0; i < rows_; ++i) {
        const Scalar &a = tableau_(i, art_start_ + k);
        if (a != 0)
          v += cost(basis_[i]) * a;
      }
      y(k) = flip_[k] < 0 ? Scalar(-v) : v;
    }
    return y;
  }

  Vec<Scalar> standard_values() const
  {
    Vec<Scalar> values = Vec<Scalar>::Zero(total_cols_);
    for (Index i = 0; i < rows_; ++i)
      values(basis_[i]) = tableau_(i, rhs_col_);
    return values;
  }

  Vec<Scalar> to_original(const Vec<Scalar> &standard, bool with_offset) const
  {
    Vec<Scalar> x = with_offset ? offset_ : Vec<Scalar>(Vec<Scalar>::Zero(lp_.num_variables()));
    for (Index k = 0; k < static_cast<Index>(struct_cols_.size()); ++k) {
      if (standard(k) == 0)
        continue;
      if (struct_cols_[k].sign > 0)
        x(struct_cols_[k].var) += standard(k);
      else
        x(struct_cols_[k].var) -= standard(k);
    }
    return x;
  }

  Vec<Scalar> primal() const { return to_original(standard_values(), true); }

  Vec<Scalar> recession_ray(Index entering) const
  {
    Vec<Scalar> d = Vec<Scalar>::Zero(total_cols_);
    d(entering) = 1;
    for (Index i = 0; i < rows_; ++i)
      d(basis_[i]) = -tableau_(i, entering);
    return to_original(d, false);
  }

  const LinearProgram<Scalar> &lp_;
  Tolerance tol_;

  std::vector<StructColumn> struct_cols_;
  Vec<Scalar> offset_;
  std::vector<int> flip_;
  std::vector<Index> basis_;
  Mat<Scalar> tableau_;
  Index rows_ = 0;
  Index slack_start_ = 0;
  Index art_start_ = 0;
  Index total_cols_ = 0;
  Index rhs_col_ = 0;
};

} // namespace

template <typename Scalar>
LpSolution<Scalar> solve(const LinearProgram<Scalar> &lp, Tolerance tol)
{
  lp.validate();
  Simplex<Scalar> simplex(lp, tol);
  return simplex.run();
}

template <typename Scalar>
FeasibilityResult<Scalar> check_feasible(const LinearProgram<Scalar> &lp, Tolerance tol)
{
  LinearProgram<Scalar> zero = lp;
  zero.objective.setZero();
  auto solution = solve(zero, tol);
  if (solution.status == Status::Infeasible)
    return {false, *solution.certificate};
  // A zero objective is never unbounded; Optimal is the only other outcome.
  return {true, *solution.primal};
}

template <typename Scalar>
Scalar max_violation(const LinearProgram<Scalar> &lp, const Vec<Scalar> &x)
{
  lp.validate();
  if (x.size() != lp.num_variables())
    throw MalformedInput("point has wrong dimension for linear program");
  Scalar worst = 0;
  auto note = [&](const Scalar &v) {
    if (v > worst)
      worst = v;
  };
  const Vec<Scalar> ax = lp.constraints * x;
  for (Index i = 0; i < lp.num_constraints(); ++i) {
    const Scalar diff = ax(i) - lp.rhs(i);
    switch (lp.senses[i]) {
    case Sense::LessEqual: note(diff); break;
    case Sense::GreaterEqual: note(Scalar(-diff)); break;
    case Sense::Equal: note(abs_value(diff)); break;
    }
  }
  for (Index j = 0; j < lp.num_variables(); ++j) {
    if (lp.lower[j])
      note(Scalar(*lp.lower[j] - x(j)));
    if (lp.upper[j])
      note(Scalar(x(j) - *lp.upper[j]));
  }
  return worst;
}

template <typename Scalar>
bool satisfies(const LinearProgram<Scalar> &lp, const Vec<Scalar> &x, Tolerance tol)
{
  return !is_positive(max_violation(lp, x), tol);
}

namespace {

template <typename Scalar>
bool signs_ok(const LinearProgram<Scalar> &lp, const Vec<Scalar> &y, Tolerance tol)
{
  if (y.size() != lp.num_constraints())
    return false;
  for (Index i = 0; i < y.size(); ++i) {
    if (lp.senses[i] == Sense::GreaterEqual && is_negative(y(i), tol))
      return false;
    if (lp.senses[i] == Sense::LessEqual && is_positive(y(i), tol))
      return false;
  }
  return true;
}

} // namespace

template <typename Scalar>
bool is_farkas_certificate(const LinearProgram<Scalar> &lp, const Vec<Scalar> &y, Tolerance tol)
{
  lp.validate();
  if (!signs_ok(lp, y, tol))
    return false;
  const Vec<Scalar> z = lp.constraints.transpose() * y;
  Scalar sup = 0;
  for (Index j = 0; j < z.size(); ++j) {
    if (is_positive(z(j), tol)) {
      if (!lp.upper[j])
        return false;
      sup += z(j) * *lp.upper[j];
    } else if (is_negative(z(j), tol)) {
      if (!lp.lower[j])
        return false;
      sup += z(j) * *lp.lower[j];
    }
  }
  return is_positive(Scalar(y.dot(lp.rhs) - sup), tol);
}

template <typename Scalar>
std::optional<Scalar> dual_objective(const LinearProgram<Scalar> &lp, const Vec<Scalar> &y, Tolerance tol)
{
  lp.validate();
  if (!signs_ok(lp, y, tol))
    return std::nullopt;
  const Vec<Scalar> reduced = lp.objective - lp.constraints.transpose() * y;
  Scalar value = y.dot(lp.rhs);
  for (Index j = 0; j < reduced.size(); ++j) {
    if (is_positive(reduced(j), tol)) {
      if (!lp.lower[j])
        return std::nullopt;
      value += reduced(j) * *lp.lower[j];
    } else if (is_negative(reduced(j), tol)) {
      if (!lp.upper[j])
        return std::nullopt;
      value += reduced(j) * *lp.upper[j];
    }
  }
  return value;
}

template <typename Scalar>
std::string format_listing(const LinearProgram<Scalar> &lp)
{
  std::ostringstream os;
  auto term_list = [&](const auto &row) {
    bool first = true;
    for (Index j = 0; j < row.size(); ++j) {
      if (row(j) == 0)
        continue;
      os << (first ? "" : " + ") << format_scalar(Scalar(row(j))) << " x" << j;
      first = false;
    }
    if (first)
      os << "0";
  };
  os << "minimize ";
  term_list(lp.objective.transpose());
  os << "\nsubject to\n";
  for (Index i = 0; i < lp.num_constraints(); ++i) {
    os << "  c" << i << ": ";
    term_list(lp.constraints.row(i));
    const char *op = lp.senses[i] == Sense::LessEqual ? " <= " : lp.senses[i] == Sense::Equal ? " = " : " >= ";
    os << op << format_scalar(Scalar(lp.rhs(i))) << "\n";
  }
  os << "bounds\n";
  for (Index j = 0; j < lp.num_variables(); ++j) {
    os << "  " << (lp.lower[j] ? format_scalar(*lp.lower[j]) : std::string("-inf")) << " <= x" << j
       << " <= " << (lp.upper[j] ? format_scalar(*lp.upper[j]) : std::string("+inf")) << "\n";
  }
  return os.str();
}

#define RSEP_INSTANTIATE_LP(S)                                                                                 \
  template struct LinearProgram<S>;                                                                            \
  template LpSolution<S> solve(const LinearProgram<S> &, Tolerance);                                          \
  template FeasibilityResult<S> check_feasible(const LinearProgram<S> &, Tolerance);                          \
  template S max_violation(const LinearProgram<S> &, const Vec<S> &);                                          \
  template bool satisfies(const LinearProgram<S> &, const Vec<S> &, Tolerance);                                \
  template bool is_farkas_certificate(const LinearProgram<S> &, const Vec<S> &, Tolerance);                    \
  template std::optional<S> dual_objective(const LinearProgram<S> &, const Vec<S> &, Tolerance);              \
  template std::string format_listing(const LinearProgram<S> &);

RSEP_INSTANTIATE_LP(double)
RSEP_INSTANTIATE_LP(Rational)

} // namespace rsep::lp
