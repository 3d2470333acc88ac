#include "rewardsep/plot.hpp"

#include <algorithm>
#include <sstream>

namespace rsep {

namespace {

std::string decimal(const Rational &x) { return format_double(x.convert_to<double>()); }
std::string decimal(double x) { return format_double(x); }

} // namespace

template <typename Scalar>
PairAxis parse_axis(const MarkovEnv<Scalar> &env, const std::string &text)
{
  const auto sep = text.find_first_of(":/");
  if (sep == std::string::npos)
    throw ParseError("axis \"" + text + "\" must look like state:action");
  const auto s = env.state_index(text.substr(0, sep));
  const auto a = env.action_index(text.substr(sep + 1));
  if (!s)
    throw ParseError("axis \"" + text + "\": unknown state");
  if (!a)
    throw ParseError("axis \"" + text + "\": unknown action");
  return {*s, *a};
}

template <typename Scalar>
PlotExport<Scalar> export_plot(const ProblemBundle &bundle, PairAxis axis_x, PairAxis axis_y, Tolerance tol)
{
  const auto env = bundle.env.cast<Scalar>();
  const Index ix = env.pair_index(axis_x.state, axis_x.action);
  const Index iy = env.pair_index(axis_y.state, axis_y.action);

  PlotExport<Scalar> plot;
  plot.axis_x = env.pair_label(ix);
  plot.axis_y = env.pair_label(iy);

  auto label_of = [&](const std::string &name) -> std::string {
    if (!bundle.soap)
      return "unlabeled";
    const auto &g = bundle.soap->good;
    const auto &b = bundle.soap->bad;
    if (std::find(g.begin(), g.end(), name) != g.end())
      return "good";
    if (std::find(b.begin(), b.end(), name) != b.end())
      return "bad";
    return "unlabeled";
  };
  for (const auto &policy : bundle.policies) {
    const Vec<Scalar> rho = compute_visitation(env, policy.cast<Scalar>(), tol);
    plot.points.push_back({policy.name, label_of(policy.name), rho(ix), rho(iy)});
  }
  if (bundle.spec) {
    const auto spec = bundle.spec->cast<Scalar>();
    for (Index i = 0; i < spec.dimension(); ++i)
      plot.hyperplanes.push_back({i, spec.rewards(i, ix), spec.rewards(i, iy), spec.lower_bounds(i)});
  }
  return plot;
}

template <typename Scalar>
std::string plot_csv(const PlotExport<Scalar> &plot)
{
  std::ostringstream os;
  os << "# points x=" << plot.axis_x << " y=" << plot.axis_y << "\n";
  os << "name,label,x,y,x_exact,y_exact\n";
  for (const auto &p : plot.points)
    os << p.name << ',' << p.label << ',' << decimal(p.x) << ',' << decimal(p.y) << ',' << format_scalar(p.x)
       << ',' << format_scalar(p.y) << '\n';
  os << "# hyperplanes\n";
  os << "dim,r_x,r_y,c,r_x_exact,r_y_exact,c_exact\n";
  for (const auto &h : plot.hyperplanes)
    os << h.dimension << ',' << decimal(h.r_x) << ',' << decimal(h.r_y) << ',' << decimal(h.c) << ','
       << format_scalar(h.r_x) << ',' << format_scalar(h.r_y) << ',' << format_scalar(h.c) << '\n';
  return os.str();
}

#define RSEP_INSTANTIATE_PLOT(S)                                                                                  \
  template PairAxis parse_axis(const MarkovEnv<S> &, const std::string &);                                        \
  template PlotExport<S> export_plot(const ProblemBundle &, PairAxis, PairAxis, Tolerance);                       \
  template std::string plot_csv(const PlotExport<S> &);

RSEP_INSTANTIATE_PLOT(double)
RSEP_INSTANTIATE_PLOT(Rational)

} // namespace rsep
