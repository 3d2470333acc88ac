#include "rewardsep/soap.hpp"

#include <set>

namespace rsep {

template <typename Scalar>
bool Soap<Scalar>::all_deterministic() const
{
  for (const auto *side : {&good, &bad})
    for (const auto &p : *side)
      if (!p.is_deterministic())
        return false;
  return true;
}

template <typename Scalar>
Soap<Scalar> make_soap(std::vector<Policy<Scalar>> good, std::vector<Policy<Scalar>> bad)
{
  std::set<std::string> names;
  for (const auto *side : {&good, &bad})
    for (const auto &p : *side)
      if (!names.insert(p.name).second)
        throw InvalidSoap("policy \"" + p.name + "\" appears more than once in the SOAP");
  for (const auto &g : good)
    for (const auto &b : bad)
      if (g.same_rule(b))
        throw InvalidSoap("good policy \"" + g.name + "\" and bad policy \"" + b.name +
                          "\" are the same policy; good and bad sets must be disjoint");
  return {std::move(good), std::move(bad)};
}

template <typename Scalar>
bool same_visitation(const Vec<Scalar> &a, const Vec<Scalar> &b, Tolerance tol)
{
  if (a.size() != b.size())
    return false;
  if constexpr (is_exact_v<Scalar>)
    return a == b;
  else
    return (a - b).cwiseAbs().maxCoeff() <= tol.eps;
}

namespace {

template <typename Scalar>
std::vector<NamePair> same_side_duplicates(const std::vector<Policy<Scalar>> &side,
                                           const std::vector<Vec<Scalar>> &rho, Tolerance tol)
{
  std::vector<NamePair> out;
  for (std::size_t i = 0; i < side.size(); ++i)
    for (std::size_t j = i + 1; j < side.size(); ++j)
      if (same_visitation(rho[i], rho[j], tol))
        out.emplace_back(side[i].name, side[j].name);
  return out;
}

} // namespace

template <typename Scalar>
ConsistencyReport check_consistency(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap, Tolerance tol)
{
  std::vector<Vec<Scalar>> good_rho, bad_rho;
  for (const auto &p : soap.good)
    good_rho.push_back(compute_visitation(env, p, tol));
  for (const auto &p : soap.bad)
    bad_rho.push_back(compute_visitation(env, p, tol));

  ConsistencyReport report;
  for (std::size_t i = 0; i < soap.good.size(); ++i)
    for (std::size_t j = 0; j < soap.bad.size(); ++j)
      if (same_visitation(good_rho[i], bad_rho[j], tol))
        report.witnesses.emplace_back(soap.good[i].name, soap.bad[j].name);
  report.consistent = report.witnesses.empty();
  report.good_duplicates = same_side_duplicates(soap.good, good_rho, tol);
  report.bad_duplicates = same_side_duplicates(soap.bad, bad_rho, tol);
  return report;
}

namespace {

std::string describe(const ConsistencyReport &report)
{
  std::string s = "SOAP is inconsistent:";
  for (const auto &[g, b] : report.witnesses)
    s += " (" + g + ", " + b + ")";
  s += " have identical visitations";
  return s;
}

} // namespace

InconsistentSoap::InconsistentSoap(ConsistencyReport report) : Error(describe(report)), report_(std::move(report)) {}

#define RSEP_INSTANTIATE_SOAP(S)                                                                                 \
  template struct Soap<S>;                                                                                       \
  template Soap<S> make_soap(std::vector<Policy<S>>, std::vector<Policy<S>>);                                   \
  template bool same_visitation(const Vec<S> &, const Vec<S> &, Tolerance);                                      \
  template ConsistencyReport check_consistency(const MarkovEnv<S> &, const Soap<S> &, Tolerance);

RSEP_INSTANTIATE_SOAP(double)
RSEP_INSTANTIATE_SOAP(Rational)

} // namespace rsep
