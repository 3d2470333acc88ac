#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "rewardsep/separability.hpp"

namespace rsep {

using json = nlohmann::json;

struct SoapNames
{
  std::vector<std::string> good;
  std::vector<std::string> bad;
};

/// Everything one CLI invocation works on. Numbers are held exactly; float
/// mode casts on use.
struct ProblemBundle
{
  MarkovEnv<Rational> env;
  std::vector<Policy<Rational>> policies;
  std::optional<SoapNames> soap;
  std::optional<RewardSpec<Rational>> spec;

  /// Throws ParseError naming the policy when it is unknown.
  const Policy<Rational> &policy(std::string_view name) const;

  /// Resolves the SOAP names into policies; throws when there is no SOAP.
  Soap<Rational> resolve_soap() const;
};

/// Environment file schema:
///
///   { "states": ["s0", "s1"], "actions": ["a1", "a2"],
///     "gamma": "0.9", "start": "s0",
///     "transitions": [ {"from": "s0", "action": "a1", "to": {"s1": "1"}}, ... ],
///     "policies": [ {"name": "pi12", "actions": {"s0": "a1", "s1": "a2"}},
///                   {"name": "mix", "probabilities": {"s0": {"a1": "1/2", "a2": "1/2"}, ...}} ],
///     "soap": {"good": [...], "bad": [...]},
///     "spec": {"rewards": [[...], ...], "lower_bounds": [...]} }
///
/// Numbers are decimal or "p/q" strings. Every (state, action) needs exactly
/// one transition entry. "policies" defaults to all deterministic policies;
/// "soap" and "spec" are optional. Reward rows list one entry per
/// state-action pair in row-major (state, action) order.
ProblemBundle bundle_from_json(const json &doc, const std::string &source = "<bundle>");
ProblemBundle parse_bundle(const std::filesystem::path &path);

/// Reads {"good": [...], "bad": [...], "spec": {...}?} into the bundle.
void merge_soap(ProblemBundle &bundle, const json &doc, const std::string &source = "<soap>");
/// Reads either {"rewards", "lower_bounds"} or {"spec": {...}}.
void merge_spec(ProblemBundle &bundle, const json &doc, const std::string &source = "<spec>");

json read_json_file(const std::filesystem::path &path);

RewardSpec<Rational> spec_from_json(const json &doc, Index num_pairs, const std::string &where);

template <typename Scalar>
json spec_to_json(const RewardSpec<Scalar> &spec);

json to_json(const ProblemBundle &bundle);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string serialize_bundle(const ProblemBundle &bundle);

bool operator==(const ProblemBundle &a, const ProblemBundle &b);

// ---------------------------------------------------------------------------
// Report serialization. All numbers are written as strings.

template <typename Scalar>
json vec_to_json(const Vec<Scalar> &v);

json to_json(const ConsistencyReport &report);

template <typename Scalar>
json to_json(const RealizationReport<Scalar> &report);

template <typename Scalar>
json to_json(const DesignOutcome<Scalar> &outcome);

} // namespace rsep
