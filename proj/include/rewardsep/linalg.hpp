#pragma once

#include "rewardsep/numeric.hpp"

namespace rsep {

/// Solves A x = b for square nonsingular A by Gaussian elimination.
/// Floating point uses partial pivoting; exact scalars take the first
/// nonzero pivot. Throws Error if A is singular.
template <typename Scalar>
Vec<Scalar> solve_dense(Mat<Scalar> a, Vec<Scalar> b)
{
  const Index n = a.rows();
  if (a.cols() != n || b.size() != n)
    throw MalformedInput("solve_dense: dimension mismatch");

  for (Index k = 0; k < n; ++k) {
    Index pivot = -1;
    if constexpr (is_exact_v<Scalar>) {
      for (Index i = k; i < n && pivot < 0; ++i)
        if (a(i, k) != 0)
          pivot = i;
    } else {
      double best = 0;
      for (Index i = k; i < n; ++i) {
        if (std::abs(a(i, k)) > best) {
          best = std::abs(a(i, k));
          pivot = i;
        }
      }
    }
    if (pivot < 0 || a(pivot, k) == 0)
      throw Error("solve_dense: singular matrix");
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      std::swap(b(k), b(pivot));
    }
    for (Index i = k + 1; i < n; ++i) {
      if (a(i, k) == 0)
        continue;
      const Scalar factor = a(i, k) / a(k, k);
      for (Index j = k; j < n; ++j)
        if (a(k, j) != 0)
          a(i, j) -= factor * a(k, j);
      b(i) -= factor * b(k);
    }
  }

  Vec<Scalar> x(n);
  for (Index i = n - 1; i >= 0; --i) {
    Scalar acc = b(i);
    for (Index j = i + 1; j < n; ++j)
      if (a(i, j) != 0)
        acc -= a(i, j) * x(j);
    x(i) = acc / a(i, i);
  }
  return x;
}

} // namespace rsep
