#pragma once

#include <string>
#include <vector>

#include "rewardsep/io.hpp"

namespace rsep {

/// A (state, action) coordinate of visitation space.
struct PairAxis
{
  Index state = 0;
  Index action = 0;
};

/// Parses "s0:a2" (or "s0/a2") against env; throws ParseError on an unknown name.
template <typename Scalar>
PairAxis parse_axis(const MarkovEnv<Scalar> &env, const std::string &text);

template <typename Scalar>
struct PlotPoint
{
  std::string name;
  std::string label; // good, bad or unlabeled
  Scalar x = 0;
  Scalar y = 0;
};

/// One reward row restricted to the two plotted coordinates, with its bound.
template <typename Scalar>
struct PlotHyperplane
{
  Index dimension = 0;
  Scalar r_x = 0;
  Scalar r_y = 0;
  Scalar c = 0;
};

template <typename Scalar>
struct PlotExport
{
  std::string axis_x;
  std::string axis_y;
  std::vector<PlotPoint<Scalar>> points;
  std::vector<PlotHyperplane<Scalar>> hyperplanes;
};

/// Projects every bundle policy's visitation onto two coordinates.
template <typename Scalar>
PlotExport<Scalar> export_plot(const ProblemBundle &bundle, PairAxis axis_x, PairAxis axis_y, Tolerance tol = {});

/// CSV: a "# points" section with columns name,label,x,y,x_exact,y_exact and a
/// "# hyperplanes" section with columns dim,r_x,r_y,c,r_x_exact,r_y_exact,c_exact.
/// x/y columns are decimal; *_exact columns hold the exact value.
template <typename Scalar>
std::string plot_csv(const PlotExport<Scalar> &plot);

} // namespace rsep
