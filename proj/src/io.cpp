#include "rewardsep/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace rsep {

namespace {

[[noreturn]] void schema_error(const std::string &where, const std::string &what)
{
  throw ParseError(where + ": " + what);
}

const json &field(const json &doc, const char *key, const std::string &where)
{
  if (!doc.is_object())
    schema_error(where, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end())
    schema_error(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string as_string(const json &value, const std::string &where)
{
  if (!value.is_string())
    schema_error(where, "expected a string");
  return value.get<std::string>();
}

Rational as_number(const json &value, const std::string &where)
{
  try {
    if (value.is_string())
      return parse_rational(value.get<std::string>());
    if (value.is_number_integer())
      return Rational(value.get<long long>());
    if (value.is_number())
      return parse_rational(value.dump());
  } catch (const ParseError &e) {
    schema_error(where, e.what());
  }
  schema_error(where, "expected a number (preferably a decimal string)");
}

std::vector<std::string> as_name_list(const json &value, const std::string &where)
{
  if (!value.is_array())
    schema_error(where, "expected an array of names");
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < value.size(); ++i) {
    auto name = as_string(value[i], where + "[" + std::to_string(i) + "]");
    if (!seen.insert(name).second)
      schema_error(where, "duplicate name \"" + name + "\"");
    out.push_back(std::move(name));
  }
  return out;
}

Index lookup(const std::vector<std::string> &names, const std::string &name, const char *kind,
             const std::string &where)
{
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end())
    schema_error(where, std::string("unknown ") + kind + " \"" + name + "\"");
  return static_cast<Index>(it - names.begin());
}

MarkovEnv<Rational> env_from_json(const json &doc, const std::string &source)
{
  MarkovEnv<Rational> env;
  env.states = as_name_list(field(doc, "states", source), source + ": states");
  env.actions = as_name_list(field(doc, "actions", source), source + ": actions");
  if (env.states.empty())
    schema_error(source + ": states", "at least one state is required");
  if (env.actions.empty())
    schema_error(source + ": actions", "at least one action is required");
  env.gamma = as_number(field(doc, "gamma", source), source + ": gamma");
  env.start = lookup(env.states, as_string(field(doc, "start", source), source + ": start"), "state",
                     source + ": start");

  const json &rows = field(doc, "transitions", source);
  if (!rows.is_array())
    schema_error(source + ": transitions", "expected an array");
  env.transition = Mat<Rational>::Zero(env.num_pairs(), env.num_states());
  std::vector<bool> seen(static_cast<std::size_t>(env.num_pairs()), false);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = source + ": transitions[" + std::to_string(i) + "]";
    const json &row = rows[i];
    const Index s = lookup(env.states, as_string(field(row, "from", where), where + ".from"), "state", where + ".from");
    const Index a =
        lookup(env.actions, as_string(field(row, "action", where), where + ".action"), "action", where + ".action");
    const Index pair = env.pair_index(s, a);
    if (seen[pair])
      schema_error(where, "duplicate transition for (" + env.states[s] + ", " + env.actions[a] + ")");
    seen[pair] = true;
    const json &to = field(row, "to", where);
    if (!to.is_object())
      schema_error(where + ".to", "expected an object mapping next states to probabilities");
    for (auto it = to.begin(); it != to.end(); ++it) {
      const Index next = lookup(env.states, it.key(), "state", where + ".to");
      env.transition(pair, next) = as_number(it.value(), where + ".to." + it.key());
    }
  }
  for (Index pair = 0; pair < env.num_pairs(); ++pair)
    if (!seen[pair])
      schema_error(source + ": transitions", "no transition given for (" + env.pair_label(pair) + ")");

  auto report = validate_env(env);
  if (!report.ok()) {
    std::string all;
    for (const auto &v : report.violations)
      all += (all.empty() ? "" : "; ") + v;
    throw MalformedInput(source + ": invalid environment: " + all);
  }
  return env;
}

Policy<Rational> policy_from_json(const json &doc, const MarkovEnv<Rational> &env, const std::string &where)
{
  const std::string name = as_string(field(doc, "name", where), where + ".name");
  const std::string here = where + " (" + name + ")";
  const bool has_actions = doc.contains("actions");
  const bool has_probabilities = doc.contains("probabilities");
  if (has_actions == has_probabilities)
    schema_error(here, "give exactly one of \"actions\" or \"probabilities\"");

  Policy<Rational> policy;
  if (has_actions) {
    const json &map = doc.at("actions");
    if (!map.is_object())
      schema_error(here + ".actions", "expected an object mapping states to actions");
    DeterministicRule rule(static_cast<std::size_t>(env.num_states()), -1);
    for (auto it = map.begin(); it != map.end(); ++it) {
      const Index s = lookup(env.states, it.key(), "state", here + ".actions");
      rule[s] = lookup(env.actions, as_string(it.value(), here + ".actions." + it.key()), "action",
                       here + ".actions." + it.key());
    }
    for (Index s = 0; s < env.num_states(); ++s)
      if (rule[s] < 0)
        schema_error(here + ".actions", "no action for state \"" + env.states[s] + "\"");
    policy = Policy<Rational>::deterministic(name, std::move(rule));
  } else {
    const json &map = doc.at("probabilities");
    if (!map.is_object())
      schema_error(here + ".probabilities", "expected an object mapping states to distributions");
    Mat<Rational> p = Mat<Rational>::Zero(env.num_states(), env.num_actions());
    std::vector<bool> seen(static_cast<std::size_t>(env.num_states()), false);
    for (auto it = map.begin(); it != map.end(); ++it) {
      const Index s = lookup(env.states, it.key(), "state", here + ".probabilities");
      seen[s] = true;
      if (!it.value().is_object())
        schema_error(here + ".probabilities." + it.key(), "expected an object mapping actions to probabilities");
      for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
        const Index a = lookup(env.actions, jt.key(), "action", here + ".probabilities." + it.key());
        p(s, a) = as_number(jt.value(), here + ".probabilities." + it.key() + "." + jt.key());
      }
    }
    for (Index s = 0; s < env.num_states(); ++s)
      if (!seen[s])
        schema_error(here + ".probabilities", "no distribution for state \"" + env.states[s] + "\"");
    policy = Policy<Rational>::stochastic(name, std::move(p));
  }
  validate_policy(env, policy);
  return policy;
}

SoapNames soap_from_json(const json &doc, const std::string &where)
{
  return {as_name_list(field(doc, "good", where), where + ".good"),
          as_name_list(field(doc, "bad", where), where + ".bad")};
}

void check_soap_names(const ProblemBundle &bundle, const std::string &where)
{
  for (const auto *side : {&bundle.soap->good, &bundle.soap->bad}) {
    const char *label = side == &bundle.soap->good ? ".good" : ".bad";
    for (const auto &name : *side) {
      bool found = false;
      for (const auto &p : bundle.policies)
        found = found || p.name == name;
      if (!found)
        schema_error(where + label, "unknown policy \"" + name + "\"");
    }
  }
  // Disjointness and same-function checks.
  (void)bundle.resolve_soap();
}

} // namespace

const Policy<Rational> &ProblemBundle::policy(std::string_view name) const
{
  for (const auto &p : policies)
    if (p.name == name)
      return p;
  throw ParseError("unknown policy \"" + std::string(name) + "\"");
}

Soap<Rational> ProblemBundle::resolve_soap() const
{
  if (!soap)
    throw ParseError("no SOAP given (use --soap or a \"soap\" section)");
  std::vector<Policy<Rational>> good, bad;
  for (const auto &n : soap->good)
    good.push_back(policy(n));
  for (const auto &n : soap->bad)
    bad.push_back(policy(n));
  return make_soap(std::move(good), std::move(bad));
}

RewardSpec<Rational> spec_from_json(const json &doc, Index num_pairs, const std::string &where)
{
  const json &rows = field(doc, "rewards", where);
  const json &bounds = field(doc, "lower_bounds", where);
  if (!rows.is_array() || rows.empty())
    schema_error(where + ".rewards", "expected a nonempty array of reward rows");
  if (!bounds.is_array())
    schema_error(where + ".lower_bounds", "expected an array");
  if (bounds.size() != rows.size())
    schema_error(where, "rewards has " + std::to_string(rows.size()) + " rows but lower_bounds has " +
                            std::to_string(bounds.size()) + " entries");
  const Index d = static_cast<Index>(rows.size());
  RewardSpec<Rational> spec{Mat<Rational>(d, num_pairs), Vec<Rational>(d)};
  for (Index i = 0; i < d; ++i) {
    const std::string row_where = where + ".rewards[" + std::to_string(i) + "]";
    const json &row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != num_pairs)
      schema_error(row_where, "expected " + std::to_string(num_pairs) + " entries, one per state-action pair");
    for (Index j = 0; j < num_pairs; ++j)
      spec.rewards(i, j) = as_number(row[static_cast<std::size_t>(j)], row_where + "[" + std::to_string(j) + "]");
    spec.lower_bounds(i) = as_number(bounds[static_cast<std::size_t>(i)],
                                     where + ".lower_bounds[" + std::to_string(i) + "]");
  }
  return spec;
}

ProblemBundle bundle_from_json(const json &doc, const std::string &source)
{
  ProblemBundle bundle;
  bundle.env = env_from_json(doc, source);

  if (auto it = doc.find("policies"); it != doc.end()) {
    if (!it->is_array())
      schema_error(source + ": policies", "expected an array");
    std::set<std::string> names;
    for (std::size_t i = 0; i < it->size(); ++i) {
      auto p = policy_from_json((*it)[i], bundle.env, source + ": policies[" + std::to_string(i) + "]");
      if (!names.insert(p.name).second)
        schema_error(source + ": policies", "duplicate policy name \"" + p.name + "\"");
      bundle.policies.push_back(std::move(p));
    }
  } else {
    bundle.policies = enumerate_deterministic_policies(bundle.env);
  }

  if (auto it = doc.find("soap"); it != doc.end()) {
    bundle.soap = soap_from_json(*it, source + ": soap");
    check_soap_names(bundle, source + ": soap");
  }
  if (auto it = doc.find("spec"); it != doc.end())
    bundle.spec = spec_from_json(*it, bundle.env.num_pairs(), source + ": spec");
  return bundle;
}

json read_json_file(const std::filesystem::path &path)
{
  std::ifstream in(path);
  if (!in)
    throw ParseError(path.string() + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

ProblemBundle parse_bundle(const std::filesystem::path &path)
{
  return bundle_from_json(read_json_file(path), path.string());
}

void merge_soap(ProblemBundle &bundle, const json &doc, const std::string &source)
{
  bundle.soap = soap_from_json(doc, source);
  check_soap_names(bundle, source);
  if (doc.contains("spec"))
    bundle.spec = spec_from_json(doc.at("spec"), bundle.env.num_pairs(), source + ": spec");
}

void merge_spec(ProblemBundle &bundle, const json &doc, const std::string &source)
{
  if (doc.is_object() && doc.contains("spec"))
    bundle.spec = spec_from_json(doc.at("spec"), bundle.env.num_pairs(), source + ": spec");
  else
    bundle.spec = spec_from_json(doc, bundle.env.num_pairs(), source);
}

template <typename Scalar>
json vec_to_json(const Vec<Scalar> &v)
{
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i)
    out.push_back(format_scalar(v(i)));
  return out;
}

template <typename Scalar>
json spec_to_json(const RewardSpec<Scalar> &spec)
{
  json rows = json::array();
  for (Index i = 0; i < spec.dimension(); ++i)
    rows.push_back(vec_to_json<Scalar>(spec.rewards.row(i).transpose()));
  return {{"rewards", rows}, {"lower_bounds", vec_to_json(spec.lower_bounds)}};
}

json to_json(const ProblemBundle &bundle)
{
  const auto &env = bundle.env;
  json doc;
  doc["states"] = env.states;
  doc["actions"] = env.actions;
  doc["gamma"] = format_rational(env.gamma);
  doc["start"] = env.states[env.start];

  json transitions = json::array();
  for (Index s = 0; s < env.num_states(); ++s) {
    for (Index a = 0; a < env.num_actions(); ++a) {
      json to = json::object();
      for (Index t = 0; t < env.num_states(); ++t)
        if (env.transition(env.pair_index(s, a), t) != 0)
          to[env.states[t]] = format_rational(env.transition(env.pair_index(s, a), t));
      transitions.push_back({{"from", env.states[s]}, {"action", env.actions[a]}, {"to", to}});
    }
  }
  doc["transitions"] = transitions;

  json policies = json::array();
  for (const auto &p : bundle.policies) {
    json entry = {{"name", p.name}};
    if (p.is_deterministic()) {
      json map = json::object();
      for (Index s = 0; s < env.num_states(); ++s)
        map[env.states[s]] = env.actions[p.actions()[s]];
      entry["actions"] = map;
    } else {
      const auto &m = std::get<Mat<Rational>>(p.rule);
      json map = json::object();
      for (Index s = 0; s < env.num_states(); ++s) {
        json dist = json::object();
        for (Index a = 0; a < env.num_actions(); ++a)
          if (m(s, a) != 0)
            dist[env.actions[a]] = format_rational(m(s, a));
        map[env.states[s]] = dist;
      }
      entry["probabilities"] = map;
    }
    policies.push_back(entry);
  }
  doc["policies"] = policies;

  if (bundle.soap)
    doc["soap"] = {{"good", bundle.soap->good}, {"bad", bundle.soap->bad}};
  if (bundle.spec)
    doc["spec"] = spec_to_json(*bundle.spec);
  return doc;
}

std::string serialize_bundle(const ProblemBundle &bundle) { return to_json(bundle).dump(2) + "\n"; }

bool operator==(const ProblemBundle &a, const ProblemBundle &b)
{
  auto same_env = a.env.states == b.env.states && a.env.actions == b.env.actions && a.env.gamma == b.env.gamma &&
                  a.env.start == b.env.start && a.env.transition == b.env.transition;
  if (!same_env || a.policies.size() != b.policies.size())
    return false;
  for (std::size_t i = 0; i < a.policies.size(); ++i)
    if (a.policies[i].name != b.policies[i].name || !a.policies[i].same_rule(b.policies[i]))
      return false;
  if (a.soap.has_value() != b.soap.has_value() || a.spec.has_value() != b.spec.has_value())
    return false;
  if (a.soap && (a.soap->good != b.soap->good || a.soap->bad != b.soap->bad))
    return false;
  if (a.spec && (a.spec->rewards != b.spec->rewards || a.spec->lower_bounds != b.spec->lower_bounds))
    return false;
  return true;
}

json to_json(const ConsistencyReport &report)
{
  auto pairs = [](const std::vector<NamePair> &v) {
    json out = json::array();
    for (const auto &[x, y] : v)
      out.push_back(json::array({x, y}));
    return out;
  };
  return {{"consistent", report.consistent},
          {"witnesses", pairs(report.witnesses)},
          {"good_duplicates", pairs(report.good_duplicates)},
          {"bad_duplicates", pairs(report.bad_duplicates)}};
}

template <typename Scalar>
json to_json(const RealizationReport<Scalar> &report)
{
  json policies = json::array();
  for (const auto &v : report.per_policy) {
    policies.push_back({{"name", v.name},
                        {"role", v.role == Role::Good ? "good" : "bad"},
                        {"values", vec_to_json(v.values)},
                        {"feasible", v.feasible},
                        {"as_required", v.as_required()},
                        {"violated_dimensions", v.violated},
                        {"boundary_dimensions", v.boundary}});
  }
  return {{"realized", report.realized}, {"policies", policies}};
}

template <typename Scalar>
json to_json(const DesignOutcome<Scalar> &outcome)
{
  json doc = {{"realizable", outcome.realizable}};
  if (outcome.spec) {
    doc["dimension"] = outcome.spec->dimension();
    doc["spec"] = spec_to_json(*outcome.spec);
  }
  if (outcome.verification)
    doc["verification"] = to_json(*outcome.verification);
  if (outcome.obstruction) {
    doc["obstruction"] = std::visit(
        [](const auto &o) -> json {
          using T = std::decay_t<decltype(o)>;
          if constexpr (std::is_same_v<T, BadPointInGoodHull<Scalar>>) {
            return {{"kind", "bad_point_in_good_hull"},
                    {"bad", o.bad},
                    {"good", o.good},
                    {"lambda", vec_to_json(o.lambda)}};
          } else if constexpr (std::is_same_v<T, CommonHullPoint<Scalar>>) {
            return {{"kind", "common_hull_point"},
                    {"point", vec_to_json(o.point)},
                    {"good", o.good},
                    {"lambda", vec_to_json(o.lambda)},
                    {"bad", o.bad},
                    {"mu", vec_to_json(o.mu)}};
          } else {
            return {{"kind", "optimality_farkas"}, {"rows", o.labels}, {"multipliers", vec_to_json(o.multipliers)}};
          }
        },
        *outcome.obstruction);
  }
  return doc;
}

#define RSEP_INSTANTIATE_IO(S)                                                                                    \
  template json vec_to_json(const Vec<S> &);                                                                      \
  template json spec_to_json(const RewardSpec<S> &);                                                              \
  template json to_json(const RealizationReport<S> &);                                                            \
  template json to_json(const DesignOutcome<S> &);

RSEP_INSTANTIATE_IO(double)
RSEP_INSTANTIATE_IO(Rational)

} // namespace rsep
