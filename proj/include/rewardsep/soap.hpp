#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rewardsep/mdp.hpp"

namespace rsep {

/// A pair <good, bad> of disjoint finite policy sets.
template <typename Scalar>
struct Soap
{
  std::vector<Policy<Scalar>> good;
  std::vector<Policy<Scalar>> bad;

  std::size_t size() const { return good.size() + bad.size(); }
  bool all_deterministic() const;

  template <typename To>
  Soap<To> cast() const
  {
    Soap<To> out;
    for (const auto &p : good)
      out.good.push_back(p.template cast<To>());
    for (const auto &p : bad)
      out.bad.push_back(p.template cast<To>());
    return out;
  }
};

class InvalidSoap : public Error
{
public:
  using Error::Error;
};

/// Builds a SOAP, rejecting shared names and policies that are the same
/// function on both sides. Within-side duplicates are rejected by name only.
template <typename Scalar>
Soap<Scalar> make_soap(std::vector<Policy<Scalar>> good, std::vector<Policy<Scalar>> bad);

using NamePair = std::pair<std::string, std::string>;

struct ConsistencyReport
{
  bool consistent = true;
  /// (good, bad) pairs with identical visitation vectors.
  std::vector<NamePair> witnesses;
  /// Informational: same-side pairs with identical visitations.
  std::vector<NamePair> good_duplicates;
  std::vector<NamePair> bad_duplicates;
};

/// Equality is exact for rationals and within tol in the infinity norm for
/// doubles.
template <typename Scalar>
bool same_visitation(const Vec<Scalar> &a, const Vec<Scalar> &b, Tolerance tol = {});

template <typename Scalar>
ConsistencyReport check_consistency(const MarkovEnv<Scalar> &env, const Soap<Scalar> &soap, Tolerance tol = {});

/// Thrown by design queries on an inconsistent SOAP.
class InconsistentSoap : public Error
{
public:
  explicit InconsistentSoap(ConsistencyReport report);
  const ConsistencyReport &report() const { return report_; }

private:
  ConsistencyReport report_;
};

} // namespace rsep
