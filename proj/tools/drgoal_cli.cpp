// drgoal: command-line front end for the goal-reaching solvers.
//
// Exit codes: 0 success, 2 invalid arguments or configuration, 1 numeric
// failure or a failed verification.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "drgoal/drgoal.hpp"
#include "drgoal/io.hpp"
#include "drgoal/reference_values.hpp"
#include "drgoal/verification.hpp"

namespace fs = std::filesystem;
using drgoal::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
  std::string config_path;
  std::string out_dir;
  std::string format;
  bool quiet = false;
  std::size_t grid_points = 4001;
  double root_tol = 1e-10;
};

/// Flags that override config values, echoed into every JSON report.
struct Overrides {
  json values = json::object();

  template <class T>
  void apply(const CLI::Option* opt, const char* key, const T& flag_value, T& target) {
    if (opt->count() > 0) {
      target = flag_value;
      values[key] = flag_value;
    }
  }
};

class Session {
 public:
  explicit Session(const GlobalOptions& g) : g_(g) {
    if (!g_.config_path.empty()) config_ = drgoal::io::load_yaml_file(g_.config_path);
    if (!g_.out_dir.empty()) {
      dir_ = fs::path(g_.out_dir);
      fs::create_directories(*dir_);
    }
  }

  const YAML::Node& config() const { return config_; }
  const GlobalOptions& options() const { return g_; }

  std::string format(const char* fallback) const {
    return g_.format.empty() ? fallback : g_.format;
  }

  void progress(const std::string& msg) const {
    if (!g_.quiet) std::cerr << "[drgoal] " << msg << '\n';
  }

  /// Writes to `<out-dir>/<name>` when an output directory is set, otherwise
  /// to stdout.
  void emit(const std::string& name, const std::string& content) const {
    if (!dir_) {
      std::cout << content;
      return;
    }
    const fs::path path = *dir_ / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw drgoal::io::ConfigError("cannot write '" + path.string() + "'");
    f << content;
    progress("wrote " + path.string());
  }

  bool to_directory() const { return dir_.has_value(); }

  drgoal::ReinsuranceOptions reinsurance_options() const {
    drgoal::ReinsuranceOptions o;
    o.grid_points = g_.grid_points;
    o.root_tol = g_.root_tol;
    return o;
  }

 private:
  GlobalOptions g_;
  YAML::Node config_{YAML::NodeType::Map};
  std::optional<fs::path> dir_;
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json envelope(const std::string& command, json config, const Overrides& ov, json result) {
  return json{{"command", command},
              {"config", std::move(config)},
              {"overrides", ov.values},
              {"result", std::move(result)}};
}

// ---------------------------------------------------------------------------
// portfolio

struct PortfolioArgs {
  double x0 = 1.0;
  double goal = 1.5;
  std::string kernel;
  std::string background;
  CLI::Option* x0_opt = nullptr;
  CLI::Option* goal_opt = nullptr;
};

int run_portfolio(const Session& s, const PortfolioArgs& a) {
  const YAML::Node sec = s.config()["portfolio"];
  Overrides ov;
  double x0 = sec && sec["x0"] ? sec["x0"].as<double>() : 1.0;
  double goal = sec && sec["goal"] ? sec["goal"].as<double>() : 1.5;
  ov.apply(a.x0_opt, "x0", a.x0, x0);
  ov.apply(a.goal_opt, "goal", a.goal, goal);

  const auto dist = [&](const std::string& flag, const char* key, const char* fallback) {
    if (!flag.empty()) {
      ov.values[key] = flag;
      return drgoal::io::parse_distribution(flag);
    }
    if (sec && sec[key]) return drgoal::io::parse_distribution(sec[key]);
    return drgoal::io::parse_distribution(std::string_view(fallback));
  };
  const drgoal::PortfolioProblem p{
      x0, goal, dist(a.kernel, "pricing_kernel", "{family: lognormal, mu: -0.05, sigma: 0.4}"),
      dist(a.background, "background", "{family: trunc_normal, lower: -1, upper: 1}")};

  drgoal::PortfolioOptions opt;
  opt.grid_points = s.options().grid_points;
  s.progress("solving portfolio problem");
  const drgoal::PortfolioSolution sol = drgoal::solve_goal_reaching(p, opt);

  if (s.format("json") == "csv") {
    std::ostringstream os;
    os << "r_star,kappa_star,rho_threshold,value\n"
       << drgoal::io::csv_number(sol.r_star) << ',' << drgoal::io::csv_number(sol.kappa_star)
       << ',' << drgoal::io::csv_number(sol.rho_threshold) << ','
       << drgoal::io::csv_number(sol.value) << '\n';
    s.emit("portfolio.csv", os.str());
    return kExitOk;
  }
  const json cfg{{"x0", x0},
                 {"goal", goal},
                 {"pricing_kernel", p.pricing_kernel.describe()},
                 {"background", p.background.describe()},
                 {"grid_points", opt.grid_points}};
  s.emit("portfolio.json", dump(envelope("portfolio", cfg, ov, drgoal::io::to_json(sol))));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// experiment flags shared by reinsurance and reproduce

struct ExperimentFlags {
  double w0 = 0, goal = 0, loading = 0, theta = 0;
  std::string distortion;
  CLI::Option* w0_opt = nullptr;
  CLI::Option* goal_opt = nullptr;
  CLI::Option* loading_opt = nullptr;
  CLI::Option* theta_opt = nullptr;

  void add_to(CLI::App* app, bool with_goal) {
    w0_opt = app->add_option("--w0", w0, "Initial wealth");
    if (with_goal) goal_opt = app->add_option("--goal,--xi", goal, "Goal level xi");
    app->add_option("--distortion", distortion, "Pricing, e.g. '{family: power, theta: 0.5, loading: 0.1}'");
    loading_opt = app->add_option("--loading", loading, "Safety loading")->check(CLI::NonNegativeNumber);
    theta_opt = app->add_option("--theta", theta, "Power distortion exponent")->check(CLI::PositiveNumber);
  }

  drgoal::ExperimentConfig apply(drgoal::ExperimentConfig c, Overrides& ov) const {
    if (!distortion.empty()) {
      YAML::Node root;
      root["distortion"] = drgoal::io::parse_yaml(distortion);
      c = drgoal::io::parse_scalars(root, c);
      ov.values["distortion"] = distortion;
    }
    ov.apply(w0_opt, "w0", w0, c.w0);
    if (goal_opt) ov.apply(goal_opt, "goal", goal, c.goal);
    ov.apply(loading_opt, "loading", loading, c.loading);
    ov.apply(theta_opt, "theta", theta, c.theta);
    return c;
  }
};

// ---------------------------------------------------------------------------
// reinsurance

struct ReinsuranceArgs {
  std::string mode;
  std::string loss;
  std::string background;
  ExperimentFlags exp;
};

int run_reinsurance(const Session& s, const ReinsuranceArgs& a) {
  Overrides ov;
  const drgoal::ExperimentConfig c = a.exp.apply(drgoal::io::parse_scalars(s.config()), ov);
  const drgoal::ExperimentConfig defaults{};
  const auto dist = [&](const std::string& flag, const char* key, const drgoal::Distribution& d) {
    if (!flag.empty()) {
      ov.values[key] = flag;
      return drgoal::io::parse_distribution(flag);
    }
    if (s.config()[key]) return drgoal::io::parse_distribution(s.config()[key]);
    return d;
  };
  drgoal::Distribution loss =
      dist(a.loss, "loss",
           drgoal::trunc_pareto(c.pareto_scale, c.pareto_shape, c.pareto_truncation));
  drgoal::Distribution bg = dist(a.background, "background",
                                 drgoal::trunc_normal(defaults.bg_lower, defaults.bg_upper));
  drgoal::ReinsuranceProblem p{
      c.w0, c.goal, drgoal::DistortionPricing(drgoal::DistortionFunction::power(c.theta), c.loading),
      loss, bg};
  if (a.mode == "nominal") p.comonotone_map = drgoal::comonotone_map(loss, bg);

  const drgoal::ReinsuranceOptions opt = s.reinsurance_options();
  s.progress("solving reinsurance problem (" + a.mode + ")");
  drgoal::ReinsuranceSolution sol;
  if (a.mode == "none") {
    sol = drgoal::solve_no_background(p, opt);
  } else if (a.mode == "robust") {
    sol = drgoal::solve_with_background(p, opt);
  } else {
    sol = drgoal::solve_comonotone(p, opt);
  }

  const std::string stem = "reinsurance_" + a.mode;
  if (s.format("json") == "csv") {
    std::ostringstream os;
    os << drgoal::io::kCsvHeader << '\n';
    drgoal::io::write_csv_row(os, c.goal, sol, std::nullopt, std::nullopt);
    s.emit(stem + ".csv", os.str());
    return kExitOk;
  }
  const json cfg{{"mode", a.mode},
                 {"w0", c.w0},
                 {"goal", c.goal},
                 {"loading", c.loading},
                 {"theta", c.theta},
                 {"loss", loss.describe()},
                 {"background", a.mode == "none" ? json(nullptr) : json(bg.describe())},
                 {"grid_points", opt.grid_points},
                 {"root_tol", opt.root_tol}};
  s.emit(stem + ".json", dump(envelope("reinsurance", cfg, ov, drgoal::io::to_json(sol))));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// frechet

struct FrechetArgs {
  std::string direction;
  std::string v;
  std::string w;
};

int run_frechet(const Session& s, const FrechetArgs& a) {
  const drgoal::Direction dir = drgoal::parse_direction(a.direction);
  const drgoal::Distribution v = drgoal::io::parse_distribution(a.v);
  const drgoal::Distribution w = drgoal::io::parse_distribution(a.w);
  const drgoal::FrechetResult r = drgoal::sup_prob(dir, v, w);
  if (s.format("json") == "csv") {
    std::ostringstream os;
    os << "direction,alpha,bound,argsup_z\n"
       << a.direction << ',' << drgoal::io::csv_number(r.alpha) << ','
       << drgoal::io::csv_number(r.bound) << ',' << drgoal::io::csv_number(r.argsup_z) << '\n';
    s.emit("frechet_" + a.direction + ".csv", os.str());
    return kExitOk;
  }
  Overrides ov;
  ov.values["v"] = a.v;
  ov.values["w"] = a.w;
  const json cfg{{"v", v.describe()}, {"w", w.describe()}};
  s.emit("frechet_" + a.direction + ".json",
         dump(envelope("frechet", cfg, ov, drgoal::io::to_json(r))));
  return kExitOk;
}

// ---------------------------------------------------------------------------
// reproduce

struct ReproduceArgs {
  std::string which;
  ExperimentFlags exp;
};

int run_reproduce(const Session& s, const ReproduceArgs& a) {
  Overrides ov;
  const drgoal::ExperimentConfig base = a.exp.apply(drgoal::io::parse_experiment(s.config()), ov);
  const drgoal::ReinsuranceOptions opt = s.reinsurance_options();
  json cfg = drgoal::io::to_json(base);
  cfg["grid_points"] = opt.grid_points;
  cfg["root_tol"] = opt.root_tol;

  if (a.which.rfind("table", 0) == 0) {
    const drgoal::TableKind kind = a.which == "table1"   ? drgoal::TableKind::t1
                                   : a.which == "table2" ? drgoal::TableKind::t2
                                                         : drgoal::TableKind::t3;
    s.progress("reproducing " + a.which);
    const auto rows = drgoal::run_table(kind, base, opt);
    std::ostringstream csv;
    drgoal::io::write_csv(csv, rows);
    const std::string js = dump(envelope("reproduce " + a.which, cfg, ov, drgoal::io::to_json(rows)));
    if (s.to_directory()) {
      s.emit(a.which + ".csv", csv.str());
      s.emit(a.which + ".json", js);
    } else {
      s.emit("", s.format("csv") == "csv" ? csv.str() : js);
    }
    return kExitOk;
  }

  const drgoal::SweepParameter param = a.which == "sweep-goal"      ? drgoal::SweepParameter::goal
                                       : a.which == "sweep-loading" ? drgoal::SweepParameter::loading
                                                                    : drgoal::SweepParameter::shape;
  s.progress("running " + a.which);
  const drgoal::SweepReport rep = drgoal::run_sweep(drgoal::default_sweep(param, base), opt);
  int failed = 0;
  for (const auto& r : rep.rows) {
    if (!r.ok()) {
      ++failed;
      std::cerr << "[drgoal] " << a.which << " row " << r.param << " failed: " << r.error << '\n';
    }
  }
  std::ostringstream robust, nominal;
  drgoal::io::write_csv(robust, rep, true);
  drgoal::io::write_csv(nominal, rep, false);
  const std::string js = dump(envelope("reproduce " + a.which, cfg, ov, drgoal::io::to_json(rep)));
  if (s.to_directory()) {
    s.emit(a.which + "_robust.csv", robust.str());
    s.emit(a.which + "_nominal.csv", nominal.str());
    s.emit(a.which + ".json", js);
  } else if (s.format("csv") == "csv") {
    s.emit("", robust.str() + "\n" + nominal.str());
  } else {
    s.emit("", js);
  }
  return failed == 0 ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string what;
  std::optional<std::uint64_t> seed;
  std::size_t pairs = 0;
  std::size_t draws = 1000000;
  std::size_t atoms = 6;
};

int verify_frechet(const Session& s, const VerifyArgs& a, json& out) {
  const std::size_t pairs = a.pairs ? a.pairs : 20;
  s.progress("enumerating permutation couplings for " + std::to_string(pairs) + " pairs");
  const auto trials = drgoal::brute_force_trials(pairs, a.atoms, *a.seed);
  int bad = 0;
  double worst = 0.0;
  json rows = json::array();
  for (const auto& t : trials) {
    worst = std::max(worst, std::abs(t.analytic - t.enumerated));
    if (!t.ok) {
      ++bad;
      std::cout << "MISMATCH " << to_string(t.direction) << ' ' << t.v << " vs " << t.w
                << ": analytic " << t.analytic << ", enumerated " << t.enumerated << '\n';
    }
    rows.push_back({{"v", t.v},
                    {"w", t.w},
                    {"direction", std::string(to_string(t.direction))},
                    {"analytic", t.analytic},
                    {"enumerated", t.enumerated},
                    {"ok", t.ok}});
  }
  std::cout << "frechet: " << trials.size() - bad << "/" << trials.size()
            << " bounds agree with enumeration over " << a.atoms
            << " atoms (max gap " << worst << ", allowed " << 2.0 / a.atoms + 1e-6 << ")\n";
  out = json{{"pairs", pairs}, {"atoms", a.atoms}, {"max_gap", worst}, {"trials", rows}};
  return bad == 0 ? kExitOk : kExitNumeric;
}

int verify_coupling(const Session& s, const VerifyArgs& a, json& out) {
  const std::size_t pairs = a.pairs ? a.pairs : 10;
  s.progress("sampling constructed couplings for " + std::to_string(pairs) + " pairs");
  const auto mc = drgoal::monte_carlo_trials(pairs, a.draws, *a.seed);
  const auto law = drgoal::marginal_law_trials(pairs, 200, *a.seed);
  int bad = 0;
  json rows = json::array();
  for (std::size_t i = 0; i < mc.size(); ++i) {
    const bool law_ok = law[i].max_error <= 1e-9;
    if (!mc[i].ok || !law_ok) ++bad;
    std::cout << (mc[i].ok && law_ok ? "ok   " : "FAIL ") << "empirical " << mc[i].empirical
              << " vs analytic " << mc[i].bound << " (3 sigma = " << 3.0 * mc[i].sigma
              << ", marginal error " << law[i].max_error << ")  " << mc[i].v << " | " << mc[i].w
              << '\n';
    rows.push_back({{"v", mc[i].v},
                    {"w", mc[i].w},
                    {"analytic", mc[i].bound},
                    {"empirical", mc[i].empirical},
                    {"sigma", mc[i].sigma},
                    {"marginal_error", law[i].max_error},
                    {"ok", mc[i].ok && law_ok}});
  }
  std::cout << "coupling: " << mc.size() - bad << "/" << mc.size() << " pairs pass\n";
  out = json{{"pairs", pairs}, {"draws", a.draws}, {"trials", rows}};
  return bad == 0 ? kExitOk : kExitNumeric;
}

int verify_tables(const Session& s, json& out) {
  namespace ref = drgoal::reference;
  const drgoal::ReinsuranceOptions opt = s.reinsurance_options();
  int bad = 0;
  json tables = json::object();
  const auto check = [&](drgoal::TableKind kind, const auto& expected, double tol) {
    s.progress(std::string("reproducing ") + std::string(to_string(kind)));
    const auto rows = drgoal::run_table(kind, {}, opt);
    json jr = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& e = expected[i];
      const auto& sol = rows[i].solution;
      std::vector<std::string> off;
      const auto cmp = [&](const char* name, double got, double want) {
        if (std::abs(got - want) > tol) {
          off.push_back(std::string(name) + " " + drgoal::detail::fmt(got) + " vs " +
                        drgoal::detail::fmt(want));
        }
      };
      const bool skip_premium = kind == drgoal::TableKind::t3 &&
                                e.goal == ref::kComonotonePremiumUnreliableGoal;
      cmp("value", sol.value, e.value);
      if (e.solvable) {
        if (!skip_premium) cmp("premium", sol.premium, e.premium);
        cmp("attach", sol.contract.attach, e.attach);
        cmp("detach", sol.contract.detach, e.detach);
      }
      if (!off.empty()) ++bad;
      std::cout << to_string(kind) << " goal " << e.goal << ": "
                << (off.empty() ? std::string("ok") : "MISMATCH");
      for (const auto& o : off) std::cout << " [" << o << "]";
      std::cout << '\n';
      jr.push_back({{"goal", e.goal}, {"solution", drgoal::io::to_json(sol)}, {"ok", off.empty()}});
    }
    tables[std::string(to_string(kind))] = jr;
  };
  check(drgoal::TableKind::t1, ref::kNoBackground, 2e-3);
  check(drgoal::TableKind::t2, ref::kWorstCase, 3e-3);
  check(drgoal::TableKind::t3, ref::kComonotone, 3e-3);
  std::cout << "tables: " << (bad == 0 ? "all rows match" : std::to_string(bad) + " row(s) off")
            << '\n';
  out = std::move(tables);
  return bad == 0 ? kExitOk : kExitNumeric;
}

int run_verify(const Session& s, const VerifyArgs& a) {
  if ((a.what == "frechet" || a.what == "coupling") && !a.seed) {
    std::cerr << "verify " << a.what << ": --seed is required\n";
    return kExitUsage;
  }
  json out;
  int rc = kExitOk;
  if (a.what == "frechet") {
    rc = verify_frechet(s, a, out);
  } else if (a.what == "coupling") {
    rc = verify_coupling(s, a, out);
  } else {
    rc = verify_tables(s, out);
  }
  if (s.to_directory()) {
    json report{{"command", "verify " + a.what}, {"passed", rc == kExitOk}, {"result", out}};
    if (a.seed) report["seed"] = *a.seed;
    s.emit("verify_" + a.what + ".json", dump(report));
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Goal-reaching portfolio selection and reinsurance design under dependence uncertainty",
               "drgoal"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--config", g.config_path, "YAML config file; flags override its values");
  app.add_option("--out-dir", g.out_dir, "Write reports to this directory instead of stdout")
      ->envname("DRGOAL_OUT_DIR");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("-q,--quiet", g.quiet, "Suppress progress lines on stderr");
  app.add_option("--grid-points", g.grid_points, "Points of the dense search grids")
      ->check(CLI::Range(std::size_t{3}, std::size_t{10000000}));
  app.add_option("--root-tol", g.root_tol, "Root-finding tolerance")->check(CLI::PositiveNumber);

  PortfolioArgs pa;
  CLI::App* portfolio = app.add_subcommand("portfolio", "Optimal digital payoff");
  pa.x0_opt = portfolio->add_option("--x0", pa.x0, "Initial wealth");
  pa.goal_opt = portfolio->add_option("--goal,--xi", pa.goal, "Goal level");
  portfolio->add_option("--kernel,--rho", pa.kernel, "Pricing kernel law, e.g. '{family: lognormal, mu: 0, sigma: 0.4}'");
  portfolio->add_option("--background,--bg", pa.background, "Background risk law");

  ReinsuranceArgs ra;
  CLI::App* reins = app.add_subcommand("reinsurance", "Optimal layer reinsurance");
  reins->add_option("--mode", ra.mode, "none: no background risk; robust: worst-case dependence; nominal: comonotone")
      ->required()
      ->check(CLI::IsMember({"none", "robust", "nominal"}));
  reins->add_option("--loss", ra.loss, "Loss law");
  reins->add_option("--background,--bg", ra.background, "Background risk law");
  ra.exp.add_to(reins, true);

  FrechetArgs fa;
  CLI::App* frechet = app.add_subcommand("frechet", "Extremal probability over couplings of V and W");
  frechet->add_option("--direction", fa.direction, "sup_leq, sup_geq, inf_lt, inf_gt, sup_lt, sup_gt, inf_leq or inf_geq")
      ->required();
  frechet->add_option("--v", fa.v, "Law of V")->required();
  frechet->add_option("--w", fa.w, "Law of W")->required();

  ReproduceArgs rp;
  CLI::App* reproduce = app.add_subcommand("reproduce", "Benchmark tables and parameter sweeps");
  reproduce->add_option("which", rp.which)
      ->required()
      ->check(CLI::IsMember({"table1", "table2", "table3", "sweep-goal", "sweep-loading", "sweep-shape"}));
  rp.exp.add_to(reproduce, false);

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "Oracle checks");
  verify->add_option("which", va.what)->required()->check(CLI::IsMember({"frechet", "coupling", "tables"}));
  verify->add_option("--seed", va.seed, "Seed for the randomized checks");
  verify->add_option("--pairs", va.pairs, "Number of random marginal pairs")->check(CLI::PositiveNumber);
  verify->add_option("--draws", va.draws, "Monte-Carlo draws per pair")->check(CLI::PositiveNumber);
  verify->add_option("--atoms", va.atoms, "Atoms per marginal for enumeration")
      ->check(CLI::Range(std::size_t{1}, drgoal::kMaxBruteForceAtoms));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    const Session s(g);
    if (*portfolio) return run_portfolio(s, pa);
    if (*reins) return run_reinsurance(s, ra);
    if (*frechet) return run_frechet(s, fa);
    if (*reproduce) return run_reproduce(s, rp);
    return run_verify(s, va);
  } catch (const drgoal::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    // ConfigError, PreconditionError
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const YAML::Exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}
