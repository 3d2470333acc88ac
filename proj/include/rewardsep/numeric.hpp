#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

namespace rsep {

/// Exact arbitrary-precision rational. Expression templates are off so the
/// type behaves like a plain value inside Eigen expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

using Index = Eigen::Index;

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
inline constexpr bool is_exact_v = std::is_same_v<Scalar, Rational>;

// Comparison tolerance for the floating-point backend. Exact scalars ignore it.
struct Tolerance
{
  double eps = 1e-9;
};

struct NumericMode
{
  enum class Kind
  {
    ExactRational,
    Float
  };
  Kind kind = Kind::ExactRational;
  double tolerance = 1e-9;

  static NumericMode exact() { return {}; }
  static NumericMode floating(double tol = 1e-9);

  bool is_exact() const { return kind == Kind::ExactRational; }
  Tolerance tol() const { return {tolerance}; }
};

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Structurally invalid input: dimension mismatch, non-finite coefficient.
class MalformedInput : public Error
{
public:
  using Error::Error;
};

/// Text that does not parse (numbers, files, schema).
class ParseError : public Error
{
public:
  using Error::Error;
};

class LimitExceeded : public Error
{
public:
  LimitExceeded(std::uint64_t count, std::uint64_t limit);
  std::uint64_t count() const { return count_; }
  std::uint64_t limit() const { return limit_; }

private:
  std::uint64_t count_;
  std::uint64_t limit_;
};

// ---------------------------------------------------------------------------
// Scalar helpers

template <typename Scalar>
bool is_zero(const Scalar &x, Tolerance tol = {})
{
  if constexpr (is_exact_v<Scalar>)
    return x == 0;
  else
    return std::abs(x) <= tol.eps;
}

template <typename Scalar>
bool is_positive(const Scalar &x, Tolerance tol = {})
{
  if constexpr (is_exact_v<Scalar>)
    return x > 0;
  else
    return x > tol.eps;
}

template <typename Scalar>
bool is_negative(const Scalar &x, Tolerance tol = {})
{
  if constexpr (is_exact_v<Scalar>)
    return x < 0;
  else
    return x < -tol.eps;
}

template <typename Scalar>
bool is_finite(const Scalar &x)
{
  if constexpr (is_exact_v<Scalar>)
    return true;
  else
    return std::isfinite(x);
}

template <typename Scalar>
Scalar abs_value(const Scalar &x)
{
  if constexpr (is_exact_v<Scalar>)
    return x < 0 ? Scalar(-x) : x;
  else
    return std::abs(x);
}

/// Parses "-8", "0.9", "1.5e-3" or "9/10" into an exact rational.
Rational parse_rational(std::string_view text);

/// Exact textual form: integers and finite decimals print as decimals,
/// everything else as "p/q". parse_rational(format_rational(x)) == x.
std::string format_rational(const Rational &x);

/// Shortest round-trip decimal.
std::string format_double(double x);

inline std::string format_scalar(const Rational &x) { return format_rational(x); }
inline std::string format_scalar(double x) { return format_double(x); }

template <typename Scalar>
Scalar from_rational(const Rational &x)
{
  if constexpr (is_exact_v<Scalar>)
    return x;
  else
    return x.template convert_to<double>();
}

template <typename To, typename From>
Vec<To> cast_vec(const Vec<From> &v)
{
  Vec<To> out(v.size());
  for (Index i = 0; i < v.size(); ++i)
    out(i) = static_cast<To>(v(i));
  return out;
}

template <typename To, typename From>
Mat<To> cast_mat(const Mat<From> &m)
{
  Mat<To> out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      out(i, j) = static_cast<To>(m(i, j));
  return out;
}

} // namespace rsep
