#include "rewardsep/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "rewardsep/io.hpp"
#include "rewardsep/plot.hpp"

namespace rsep::cli {

namespace {

struct Options
{
  std::string bundle_path;
  std::string soap_path;
  std::string spec_path;
  std::string out_path;
  std::string axis_x;
  std::string axis_y;
  bool exact = false;
  std::optional<double> tol;
  bool json = false;
  bool reduce = false;
  bool range = false;
  std::optional<Index> max_dim;
  std::uint64_t limit = 4096;
};

struct Context
{
  const Options &opt;
  ProblemBundle bundle;
  NumericMode mode;
  std::ostream &out;
  std::ostream &err;

  Tolerance tol() const { return mode.tol(); }
  const char *mode_name() const { return mode.is_exact() ? "exact" : "float"; }
};

template <typename Scalar>
std::string vec_text(const Vec<Scalar> &v)
{
  std::string s = "[";
  for (Index i = 0; i < v.size(); ++i)
    s += (i ? ", " : "") + format_scalar(v(i));
  return s + "]";
}

template <typename Scalar>
std::string labelled_vec_text(const MarkovEnv<Scalar> &env, const Vec<Scalar> &v)
{
  std::string s;
  for (Index i = 0; i < v.size(); ++i)
    s += (i ? "  " : "") + env.pair_label(i) + "=" + format_scalar(v(i));
  return s;
}

template <typename Scalar>
std::string weights_text(const std::vector<std::string> &names, const Vec<Scalar> &w)
{
  std::string s;
  for (Index i = 0; i < w.size(); ++i)
    s += (i ? ", " : "") + names[static_cast<std::size_t>(i)] + "=" + format_scalar(w(i));
  return s;
}

void write_file(const std::string &path, const std::string &text)
{
  std::ofstream f(path);
  if (!f)
    throw ParseError(path + ": cannot write file");
  f << text;
}

void print_consistency(Context &ctx, const ConsistencyReport &report)
{
  ctx.out << "consistent: " << (report.consistent ? "yes" : "no") << "\n";
  for (const auto &[g, b] : report.witnesses)
    ctx.out << "  witness: good " << g << " and bad " << b << " have identical visitations\n";
  for (const auto &[a, b] : report.good_duplicates)
    ctx.out << "  note: good policies " << a << " and " << b << " have identical visitations\n";
  for (const auto &[a, b] : report.bad_duplicates)
    ctx.out << "  note: bad policies " << a << " and " << b << " have identical visitations\n";
}

template <typename Scalar>
void print_realization(Context &ctx, const RealizationReport<Scalar> &report)
{
  for (const auto &v : report.per_policy) {
    ctx.out << "  " << v.name << " (" << (v.role == Role::Good ? "good" : "bad") << "): V = " << vec_text(v.values)
            << (v.feasible ? "  feasible" : "  infeasible");
    if (!v.violated.empty()) {
      ctx.out << ", fails dim";
      for (auto i : v.violated)
        ctx.out << ' ' << i;
    }
    if (!v.boundary.empty()) {
      ctx.out << ", boundary dim";
      for (auto i : v.boundary)
        ctx.out << ' ' << i;
    }
    ctx.out << (v.as_required() ? "" : "  <- not as required") << "\n";
  }
}

template <typename Scalar>
void print_outcome(Context &ctx, const MarkovEnv<Scalar> &env, const std::string &command,
                   const DesignOutcome<Scalar> &outcome)
{
  if (outcome.realizable) {
    const auto &spec = *outcome.spec;
    ctx.out << command << ": realizable with d = " << spec.dimension() << "\n";
    for (Index i = 0; i < spec.dimension(); ++i) {
      ctx.out << "  r[" << i << "]: " << labelled_vec_text<Scalar>(env, spec.rewards.row(i).transpose()) << "\n";
      ctx.out << "  c[" << i << "] = " << format_scalar(spec.lower_bounds(i)) << "\n";
    }
    ctx.out << "verifier: " << (outcome.verification->realized ? "realized" : "NOT realized") << " ("
            << outcome.verification->per_policy.size() << " policies checked)\n";
    print_realization(ctx, *outcome.verification);
    return;
  }
  ctx.out << command << ": not realizable\n";
  std::visit(
      [&](const auto &o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, BadPointInGoodHull<Scalar>>) {
          ctx.out << "obstruction: bad policy " << o.bad << " lies in the convex hull of the good visitations\n";
          ctx.out << "  lambda: " << weights_text(o.good, o.lambda) << "\n";
        } else if constexpr (std::is_same_v<T, CommonHullPoint<Scalar>>) {
          ctx.out << "obstruction: the good and bad convex hulls share a point\n";
          ctx.out << "  point: " << labelled_vec_text(env, o.point) << "\n";
          ctx.out << "  lambda (good): " << weights_text(o.good, o.lambda) << "\n";
          ctx.out << "  mu (bad): " << weights_text(o.bad, o.mu) << "\n";
        } else {
          ctx.out << "obstruction: optimality constraints are infeasible; Farkas multipliers:\n";
          for (Index i = 0; i < o.multipliers.size(); ++i)
            if (o.multipliers(i) != 0)
              ctx.out << "  " << o.labels[static_cast<std::size_t>(i)] << " " << format_scalar(o.multipliers(i))
                      << "\n";
        }
      },
      *outcome.obstruction);
}

int report_inconsistent(Context &ctx, const std::string &command, const InconsistentSoap &e)
{
  if (ctx.opt.json) {
    ctx.out << json{{"command", command},
                    {"mode", ctx.mode_name()},
                    {"realizable", false},
                    {"refused", "inconsistent SOAP"},
                    {"consistency", to_json(e.report())}}
                   .dump(2)
            << "\n";
  } else {
    ctx.out << command << ": refused, the SOAP is inconsistent\n";
    print_consistency(ctx, e.report());
  }
  return kNegative;
}

// ---------------------------------------------------------------------------
// Subcommands

template <typename Scalar>
int cmd_visitation(Context &ctx)
{
  const auto env = ctx.bundle.env.cast<Scalar>();
  json doc = {{"command", "visitation"}, {"mode", ctx.mode_name()}};
  json pairs = json::array();
  for (Index i = 0; i < env.num_pairs(); ++i)
    pairs.push_back(env.pair_label(i));
  doc["pairs"] = pairs;
  json policies = json::array();
  for (const auto &p : ctx.bundle.policies) {
    const Vec<Scalar> rho = compute_visitation(env, p.cast<Scalar>(), ctx.tol());
    policies.push_back({{"name", p.name}, {"visitation", vec_to_json(rho)}});
    if (!ctx.opt.json)
      ctx.out << p.name << ": " << labelled_vec_text(env, rho) << "\n";
  }
  doc["policies"] = policies;
  if (ctx.opt.json)
    ctx.out << doc.dump(2) << "\n";
  return kPositive;
}

template <typename Scalar>
int cmd_consistency(Context &ctx)
{
  const auto env = ctx.bundle.env.cast<Scalar>();
  const auto soap = ctx.bundle.resolve_soap().cast<Scalar>();
  const auto report = check_consistency(env, soap, ctx.tol());
  if (ctx.opt.json) {
    json doc = to_json(report);
    doc["command"] = "consistency";
    doc["mode"] = ctx.mode_name();
    ctx.out << doc.dump(2) << "\n";
  } else {
    print_consistency(ctx, report);
  }
  return report.consistent ? kPositive : kNegative;
}

template <typename Scalar>
int cmd_design(Context &ctx, const std::string &command)
{
  const auto env = ctx.bundle.env.cast<Scalar>();
  const auto soap = ctx.bundle.resolve_soap().cast<Scalar>();
  DesignOutcome<Scalar> outcome;
  try {
    if (command == "design-scalar")
      outcome = design_scalar(env, soap, ctx.tol());
    else if (command == "design-multi")
      outcome = design_multi(env, soap, ctx.tol(), ctx.opt.reduce);
    else
      outcome = check_scalar_optimality(env, soap, ctx.tol(), ctx.opt.limit,
                                        ctx.opt.range ? OptimalityReading::Range : OptimalityReading::EqualValue);
  } catch (const InconsistentSoap &e) {
    return report_inconsistent(ctx, command, e);
  }

  bool over_cap = outcome.realizable && ctx.opt.max_dim && outcome.spec->dimension() > *ctx.opt.max_dim;
  if (ctx.opt.json) {
    json doc = to_json(outcome);
    doc["command"] = command;
    doc["mode"] = ctx.mode_name();
    if (over_cap)
      doc["exceeds_max_dim"] = *ctx.opt.max_dim;
    ctx.out << doc.dump(2) << "\n";
  } else {
    print_outcome(ctx, env, command, outcome);
    if (over_cap)
      ctx.out << "achieved d = " << outcome.spec->dimension() << " exceeds --max-dim " << *ctx.opt.max_dim << "\n";
  }
  if (outcome.realizable && !ctx.opt.out_path.empty())
    write_file(ctx.opt.out_path, spec_to_json(*outcome.spec).dump(2) + "\n");
  return outcome.realizable && !over_cap ? kPositive : kNegative;
}

template <typename Scalar>
int cmd_verify(Context &ctx)
{
  if (!ctx.bundle.spec)
    throw ParseError("verify needs a reward spec (--spec, or a \"spec\" section in the bundle or SOAP file)");
  const auto env = ctx.bundle.env.cast<Scalar>();
  const auto soap = ctx.bundle.resolve_soap().cast<Scalar>();
  const auto report = verify_realization(env, soap, ctx.bundle.spec->cast<Scalar>(), ctx.tol());
  if (ctx.opt.json) {
    json doc = to_json(report);
    doc["command"] = "verify";
    doc["mode"] = ctx.mode_name();
    ctx.out << doc.dump(2) << "\n";
  } else {
    ctx.out << "realized: " << (report.realized ? "yes" : "no") << "\n";
    print_realization(ctx, report);
    if (report.has_boundary_cases())
      ctx.out << "warning: some values are within tolerance of their bound\n";
  }
  return report.realized ? kPositive : kNegative;
}

template <typename Scalar>
int cmd_enumerate(Context &ctx)
{
  const auto env = ctx.bundle.env.cast<Scalar>();
  const auto policies = enumerate_deterministic_policies(env, ctx.opt.limit);
  json list = json::array();
  for (const auto &p : policies) {
    json map = json::object();
    std::string text;
    for (Index s = 0; s < env.num_states(); ++s) {
      map[env.states[s]] = env.actions[p.actions()[s]];
      text += (s ? " " : "") + env.states[s] + "->" + env.actions[p.actions()[s]];
    }
    list.push_back({{"name", p.name}, {"actions", map}});
    if (!ctx.opt.json)
      ctx.out << p.name << ": " << text << "\n";
  }
  if (ctx.opt.json)
    ctx.out << json{{"command", "enumerate"}, {"count", policies.size()}, {"policies", list}}.dump(2) << "\n";
  return kPositive;
}

template <typename Scalar>
int cmd_export_plot(Context &ctx)
{
  const auto &env = ctx.bundle.env;
  const auto plot = export_plot<Scalar>(ctx.bundle, parse_axis(env, ctx.opt.axis_x), parse_axis(env, ctx.opt.axis_y),
                                        ctx.tol());
  const std::string csv = plot_csv(plot);
  if (ctx.opt.out_path.empty())
    ctx.out << csv;
  else
    write_file(ctx.opt.out_path, csv);
  return kPositive;
}

template <typename Scalar>
int dispatch(Context &ctx, const std::string &command)
{
  if (command == "visitation")
    return cmd_visitation<Scalar>(ctx);
  if (command == "consistency")
    return cmd_consistency<Scalar>(ctx);
  if (command == "design-scalar" || command == "design-multi" || command == "design-scalar-optimal")
    return cmd_design<Scalar>(ctx, command);
  if (command == "verify")
    return cmd_verify<Scalar>(ctx);
  if (command == "enumerate")
    return cmd_enumerate<Scalar>(ctx);
  return cmd_export_plot<Scalar>(ctx);
}

} // namespace

int run_command(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Reward realizability for sets of acceptable policies", "rewardsep"};
  app.require_subcommand(1);
  Options opt;

  struct Spec
  {
    const char *name;
    const char *help;
  };
  const Spec commands[] = {
      {"visitation", "Print the discounted state-action visitation of every policy"},
      {"consistency", "Check that no good policy shares its visitation with a bad policy"},
      {"design-scalar", "Find a scalar reward and threshold realizing the SOAP"},
      {"design-multi", "Find a multidimensional reward and thresholds realizing the SOAP"},
      {"design-scalar-optimal", "Find a scalar reward making exactly the good policies optimal"},
      {"verify", "Check a reward spec against the SOAP"},
      {"enumerate", "List all deterministic policies"},
      {"export-plot", "Write visitation coordinates on two axes as CSV"},
  };
  for (const auto &c : commands) {
    auto *sub = app.add_subcommand(c.name, c.help);
    sub->add_option("bundle", opt.bundle_path, "Environment / bundle JSON file")->required();
    sub->add_option("--soap", opt.soap_path, "SOAP JSON file (good/bad policy names, optional spec)");
    sub->add_option("--spec", opt.spec_path, "Reward spec JSON file");
    auto *exact = sub->add_flag("--exact", opt.exact, "Exact rational arithmetic (default)");
    auto *tol = sub->add_option("--tol", opt.tol, "Use floating point with this tolerance");
    exact->excludes(tol);
    sub->add_flag("--json", opt.json, "Machine-readable JSON report");
    sub->add_option("--out", opt.out_path, "Output file (spec JSON for design commands, CSV for export-plot)");
    sub->add_option("--limit", opt.limit, "Cap on enumerated deterministic policies")->capture_default_str();
    const std::string name = c.name;
    if (name == "design-multi") {
      sub->add_flag("--reduce", opt.reduce, "Greedily merge bad policies under shared hyperplanes");
      sub->add_option("--max-dim", opt.max_dim, "Report failure if more reward dimensions are needed");
    }
    if (name == "design-scalar-optimal")
      sub->add_flag("--range", opt.range, "Threshold reading: good values only need to reach the optimum");
    if (name == "export-plot") {
      sub->add_option("--x", opt.axis_x, "Horizontal axis as state:action")->required();
      sub->add_option("--y", opt.axis_y, "Vertical axis as state:action")->required();
    }
  }

  std::vector<std::string> argv_storage{"rewardsep"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char *> argv;
  for (const auto &a : argv_storage)
    argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPositive : kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (opt.tol && !(*opt.tol > 0))
      throw MalformedInput("--tol must be positive");
    if (opt.max_dim && *opt.max_dim < 1)
      throw MalformedInput("--max-dim must be at least 1");
    Context ctx{opt, parse_bundle(opt.bundle_path), opt.tol ? NumericMode::floating(*opt.tol) : NumericMode::exact(),
                out, err};
    if (!opt.soap_path.empty())
      merge_soap(ctx.bundle, read_json_file(opt.soap_path), opt.soap_path);
    if (!opt.spec_path.empty())
      merge_spec(ctx.bundle, read_json_file(opt.spec_path), opt.spec_path);

    return ctx.mode.is_exact() ? dispatch<Rational>(ctx, command) : dispatch<double>(ctx, command);
  } catch (const LimitExceeded &e) {
    err << "rewardsep " << command << ": refused: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    err << "rewardsep " << command << ": error: " << e.what() << "\n";
    return kUsage;
  }
}

} // namespace rsep::cli
