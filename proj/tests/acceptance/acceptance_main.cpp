// Acceptance checks 1-9. Each criterion prints one PASS/FAIL line; the exit
// code is nonzero when any selected criterion fails.
//
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "drgoal/drgoal.hpp"
#include "drgoal/reference_values.hpp"

using namespace drgoal;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes << "\n    " << what;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void check_near(Outcome& o, std::string_view label, double got, double want, double tol) {
  o.require(std::abs(got - want) <= tol, std::string(label) + ": got " + num(got) +
                                             ", expected " + num(want) + " +- " + num(tol));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string row_label(std::string_view table, double goal, std::string_view field) {
  return std::string(table) + " xi=" + num(goal) + " " + std::string(field);
}

// ---------------------------------------------------------------------------
// Tables

void c1_no_background(Outcome& o) {
  const auto rows = run_table(TableKind::t1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& ref = reference::kNoBackground[i];
    const auto& s = rows[i].solution;
    check_near(o, row_label("table1", ref.goal, "premium"), s.premium, ref.premium, 2e-3);
    check_near(o, row_label("table1", ref.goal, "value"), s.value, ref.value, 2e-3);
    check_near(o, row_label("table1", ref.goal, "attach"), s.contract.attach, ref.attach, 2e-3);
    check_near(o, row_label("table1", ref.goal, "detach"), s.contract.detach, ref.detach, 2e-3);
  }
}

void c2_worst_case(Outcome& o) {
  const auto rows = run_table(TableKind::t2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& ref = reference::kWorstCase[i];
    const auto& s = rows[i].solution;
    if (!ref.solvable) {
      o.require(s.kind == SolutionCase::indifferent,
                row_label("table2", ref.goal, "case") + ": got " + std::string(to_string(s.kind)));
      o.require(s.value == 0.0, row_label("table2", ref.goal, "value") + ": got " + num(s.value));
      continue;
    }
    check_near(o, row_label("table2", ref.goal, "premium"), s.premium, ref.premium, 3e-3);
    check_near(o, row_label("table2", ref.goal, "value"), s.value, ref.value, 3e-3);
    check_near(o, row_label("table2", ref.goal, "attach"), s.contract.attach, ref.attach, 3e-3);
    check_near(o, row_label("table2", ref.goal, "detach"), s.contract.detach, ref.detach, 3e-3);
  }
}

void c3_comonotone(Outcome& o) {
  const auto rows = run_table(TableKind::t3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& ref = reference::kComonotone[i];
    const auto& s = rows[i].solution;
    if (ref.goal != reference::kComonotonePremiumUnreliableGoal) {
      check_near(o, row_label("table3", ref.goal, "premium"), s.premium, ref.premium, 3e-3);
    }
    check_near(o, row_label("table3", ref.goal, "value"), s.value, ref.value, 3e-3);
    check_near(o, row_label("table3", ref.goal, "attach"), s.contract.attach, ref.attach, 3e-3);
    check_near(o, row_label("table3", ref.goal, "detach"), s.contract.detach, ref.detach, 3e-3);
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    o.require(rows[i].solution.premium < rows[i - 1].solution.premium,
              "table3 premium not decreasing at xi=" + num(rows[i].param));
  }
}

void c4_constant_attachment(Outcome& o) {
  for (TableKind k : {TableKind::t1, TableKind::t2, TableKind::t3}) {
    for (const TableRow& r : run_table(k)) {
      if (r.solution.kind == SolutionCase::indifferent) continue;
      check_near(o, row_label(to_string(k), r.param, "attach"), r.solution.contract.attach,
                 reference::kAttachment, 5e-4);
    }
  }
}

// ---------------------------------------------------------------------------
// Couplings

// Continuous marginals: uniform, shifted lognormal or shifted truncated Pareto.
Distribution draw_continuous(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0, 1);
  switch (std::uniform_int_distribution<int>(0, 2)(gen)) {
    case 0: {
      const double a = -2 + 4 * u(gen);
      return uniform(a, a + 0.2 + 3 * u(gen));
    }
    case 1: return shift(lognormal(-0.5 + u(gen), 0.2 + 0.6 * u(gen)), -2 + 3 * u(gen));
    default:
      return shift(trunc_pareto(1 + 9 * u(gen), 1 + 3 * u(gen), 1 + 9 * u(gen)),
                   -2 + 3 * u(gen));
  }
}

Distribution draw_discrete(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0, 1);
  const int n = std::uniform_int_distribution<int>(1, 4)(gen);
  std::vector<double> atoms, weights;
  for (int i = 0; i < n; ++i) {
    atoms.push_back(-2 + 5 * u(gen));
    weights.push_back(0.1 + u(gen));
  }
  return make_discrete(atoms, weights);
}

struct Pair {
  Distribution v, w;
};

// At least one side continuous; a quarter of the pairs carry a discrete side.
Pair draw_pair(std::mt19937_64& gen) {
  Distribution a = draw_continuous(gen);
  Distribution b = std::uniform_int_distribution<int>(0, 3)(gen) == 0 ? draw_discrete(gen)
                                                                      : draw_continuous(gen);
  if (std::uniform_int_distribution<int>(0, 1)(gen)) return {b, a};
  return {a, b};
}

std::vector<double> midpoint_atoms(const Distribution& d, std::size_t n) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(d.quantile((i + 0.5) / n));
  return out;
}

// Extremal frequency of the event over all n! pairings of the atoms.
double enumerate(Direction dir, const std::vector<double>& v, std::vector<double> w) {
  const auto event = [dir](double vi, double wi) {
    switch (dir) {
      case Direction::sup_leq:
      case Direction::inf_leq: return wi <= vi;
      case Direction::sup_lt:
      case Direction::inf_lt: return wi < vi;
      case Direction::sup_geq:
      case Direction::inf_geq: return wi >= vi;
      case Direction::sup_gt:
      case Direction::inf_gt: return wi > vi;
    }
    return false;
  };
  const bool maximize = dir == Direction::sup_leq || dir == Direction::sup_lt ||
                        dir == Direction::sup_geq || dir == Direction::sup_gt;
  std::sort(w.begin(), w.end());
  double best = maximize ? 0.0 : 1.0;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < v.size(); ++i) hits += event(v[i], w[i]);
    const double f = static_cast<double>(hits) / v.size();
    best = maximize ? std::max(best, f) : std::min(best, f);
  } while (std::next_permutation(w.begin(), w.end()));
  return best;
}

constexpr Direction kDirections[] = {Direction::sup_leq, Direction::sup_lt, Direction::sup_geq,
                                     Direction::sup_gt,  Direction::inf_leq, Direction::inf_lt,
                                     Direction::inf_geq, Direction::inf_gt};

void c5_frechet_oracles(Outcome& o) {
  constexpr std::size_t kPairs = 20, kAtoms = 6, kDraws = 1000000;
  constexpr double kGridError = 1e-6;
  std::mt19937_64 gen(20240917);
  double worst_gap = 0;
  for (std::size_t k = 0; k < kPairs; ++k) {
    const Pair p = draw_pair(gen);
    const auto av = midpoint_atoms(p.v, kAtoms);
    const auto aw = midpoint_atoms(p.w, kAtoms);
    for (Direction dir : kDirections) {
      const double analytic = sup_prob(dir, p.v, p.w).bound;
      const double brute = enumerate(dir, av, aw);
      worst_gap = std::max(worst_gap, std::abs(analytic - brute));
      o.require(std::abs(analytic - brute) <= 2.0 / kAtoms + kGridError,
                "pair " + std::to_string(k) + " " + std::string(to_string(dir)) +
                    ": analytic " + num(analytic) + " vs enumerated " + num(brute));
    }
    // Sample the constructed coupling and count {W <= V~}.
    const WorstCaseCoupling c = worst_case_coupling(p.v, p.w);
    std::mt19937_64 mc(1000 + k);
    std::uniform_real_distribution<double> u(0, 1);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < kDraws; ++i) {
      double z = u(mc);
      if (z <= 0.0) z = 0.5;
      hits += c.w_of_z(z) <= c.v_of_z(z);
    }
    const double emp = static_cast<double>(hits) / kDraws;
    const double target = 1.0 - c.alpha();
    const double sigma = std::sqrt(target * (1 - target) / kDraws);
    o.require(sigma > 0 ? std::abs(emp - target) <= 3 * sigma : emp == target,
              "pair " + std::to_string(k) + " Monte Carlo " + num(emp) + " vs " + num(target) +
                  " (3 sigma = " + num(3 * sigma) + ")");
  }
  o.notes << "\n    largest analytic/enumerated gap " << num(worst_gap);
}

void c6_marginal_law(Outcome& o) {
  constexpr std::size_t kPairs = 10, kGrid = 200;
  std::mt19937_64 gen(777);
  double worst = 0;
  for (std::size_t k = 0; k < kPairs; ++k) {
    const Pair p = draw_pair(gen);
    const WorstCaseCoupling c = worst_case_coupling(p.v, p.w);
    const Support s = effective_support(p.v);
    const double a = c.alpha();
    for (std::size_t i = 0; i < kGrid; ++i) {
      const double z = s.lo - 0.5 + (s.hi - s.lo + 1.0) * i / (kGrid - 1);
      const double fv = p.v.cdf(z);
      // Lebesgue measure of {u : V~(u) <= z} on both branches of the coupling.
      const double measure = std::clamp(std::min(1 - a, fv - a), 0.0, 1.0) + std::min(a, fv);
      const double err = std::max(std::abs(c.pushforward_cdf(z) - fv), std::abs(measure - fv));
      worst = std::max(worst, err);
    }
  }
  o.require(worst <= 1e-9, "largest marginal-law error " + num(worst));
  o.notes << "\n    largest marginal-law error " << num(worst);
}

// ---------------------------------------------------------------------------
// Portfolio

double phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void c7_portfolio(Outcome& o) {
  const double mu = -0.05, sigma = 0.4, x0 = 1.0, goal = 1.5;
  const PortfolioProblem p{x0, goal, lognormal(mu, sigma), trunc_normal(-1, 1)};
  const PortfolioSolution s = solve_goal_reaching(p);

  const double spent = s.kappa_star * capital_cost(p.pricing_kernel, s.r_star);
  check_near(o, "budget", spent, x0, 1e-8);

  // Two-valued payoff: kappa* below the threshold, nothing above it.
  std::mt19937_64 gen(99);
  std::lognormal_distribution<double> ln(mu, sigma);
  for (int i = 0; i < 10000; ++i) {
    const double rho = ln(gen);
    const double x = optimal_payoff(s, rho);
    o.require(x == (rho <= s.rho_threshold ? s.kappa_star : 0.0),
              "payoff at rho=" + num(rho) + " is " + num(x));
  }
  o.require(std::abs(s.rho_threshold - p.pricing_kernel.quantile(1 - s.r_star)) <= 1e-12,
            "threshold is not the (1 - r*) kernel quantile");

  // Degenerate background: pay xi on {rho <= c*} where xi E[rho; rho <= c*] = x0.
  const auto partial = [&](double c) {
    return std::exp(mu + 0.5 * sigma * sigma) * phi((std::log(c) - mu - sigma * sigma) / sigma);
  };
  double lo = 1e-8, hi = 1e3;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    (goal * partial(mid) > x0 ? hi : lo) = mid;
  }
  const double oracle = phi((std::log(lo) - mu) / sigma);
  const PortfolioSolution d =
      solve_goal_reaching({x0, goal, lognormal(mu, sigma), trunc_normal(-1e-6, 1e-6)});
  check_near(o, "degenerate-background value", d.value, oracle, 2e-3);

  std::uniform_real_distribution<double> u(0, 1 - 1e-6);
  const double best = portfolio_objective(p, s.r_star);
  for (int i = 0; i < 100; ++i) {
    const double r = u(gen);
    const double v = portfolio_objective(p, r);
    o.require(v <= best + 1e-9, "objective at r=" + num(r) + " beats r*: " + num(v));
  }
}

// ---------------------------------------------------------------------------
// Sweeps

void c8_orderings(Outcome& o) {
  constexpr double tol = 1e-9;
  for (SweepParameter sp : {SweepParameter::goal, SweepParameter::loading, SweepParameter::shape}) {
    const SweepReport rep = run_sweep(default_sweep(sp));
    const std::string name = "sweep-" + std::string(to_string(sp));
    for (const SweepRow& r : rep.rows) {
      const std::string at = name + " at " + num(r.param);
      if (!r.ok()) {
        o.require(false, at + " failed: " + r.error);
        continue;
      }
      o.require(r.robust->value >= r.worst_of_nominal - tol,
                at + ": worst(robust) " + num(r.robust->value) + " < worst(nominal) " +
                    num(r.worst_of_nominal));
      o.require(r.nominal->value >= r.nominal_of_robust - tol,
                at + ": nominal(nominal) " + num(r.nominal->value) + " < nominal(robust) " +
                    num(r.nominal_of_robust));
      if (sp == SweepParameter::goal && r.param <= 18.0) {
        o.require(r.worst_case_gap() > r.nominal_gap(),
                  at + ": worst-case gap " + num(r.worst_case_gap()) + " <= nominal gap " +
                      num(r.nominal_gap()));
      }
    }
    if (sp == SweepParameter::loading) {
      for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const SweepRow& a = rep.rows[i - 1];
        const SweepRow& b = rep.rows[i];
        if (!a.ok() || !b.ok()) continue;
        o.require(b.robust->value < a.robust->value,
                  name + ": robust value not decreasing at " + num(b.param));
        o.require(b.nominal->value < a.nominal->value,
                  name + ": nominal value not decreasing at " + num(b.param));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Invariants

void c9_invariants(Outcome& o) {
  const double atoms[] = {-1.0, 0.5, 2.0, 3.5};
  const double weights[] = {0.2, 0.4, 0.25, 0.15};
  const std::vector<Distribution> families{uniform(0, 1),
                                           trunc_pareto(10, 3, 10),
                                           trunc_normal(-5, 5),
                                           lognormal(-0.05, 0.4),
                                           make_discrete(atoms, weights),
                                           make_empirical(std::vector<double>{3, 1, 2, 2, 7}),
                                           shift(trunc_normal(-5, 5), 17)};
  std::mt19937_64 gen(4321);
  std::uniform_real_distribution<double> u(0, 1);
  for (const Distribution& d : families) {
    const Support s = effective_support(d);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      // F(x) >= t  <=>  x >= F^{-1}(t), probed from both sides.
      const double t = std::max(u(gen), 1e-12);
      const double q = d.quantile(t);
      if (d.cdf(q) < t - 1e-12) ++bad;
      const double below = q - 1e-7 * (1 + std::abs(q));
      if (d.cdf(below) >= t + 1e-12) ++bad;
    }
    o.require(bad == 0, d.describe() + ": " + std::to_string(bad) + " Galois violations");
    (void)s;
  }

  const DistortionPricing pricing(DistortionFunction::power(0.5), 0.1);
  const Distribution x = trunc_pareto(10, 3, 10);
  const double z = z0(pricing, x);
  const double total = layer_g_expectation(pricing, x, 0, 10);
  double prev_q = z, prev_v = total;
  for (int i = 1; i <= 200; ++i) {
    const double q = z + (10 - z) * i / 200.0;
    const double retained = total - layer_g_expectation(pricing, x, z, q);
    o.require(retained <= prev_v + 1e-12, "retained price increases at q=" + num(q));
    o.require(std::abs(retained - prev_v) <= std::abs(q - prev_q) + 1e-12,
              "retained price not 1-Lipschitz at q=" + num(q));
    prev_q = q;
    prev_v = retained;
  }

  ExperimentConfig cfg;
  const ReinsuranceProblem p = make_problem(cfg);
  const double budget = p.w0 - p.goal;
  for (int i = 0; i < 200; ++i) {
    const double a = budget * u(gen), b = budget * u(gen);
    const double mid = psi(p, 0.5 * (a + b));
    o.require(mid <= 0.5 * (psi(p, a) + psi(p, b)) + 1e-9,
              "psi not midpoint convex on [" + num(a) + ", " + num(b) + "]");
  }

  check_near(o, "distorted premium of X", premium(pricing, x), reference::kFullPremium, 0.01);
  const double left = pricing.factor() * pricing.g(x.survival(z - 1e-7));
  const double right = pricing.factor() * pricing.g(x.survival(z + 1e-7));
  o.require(left >= 1.0 && right < 1.0, "z0 is not where (1+loading) g(S) crosses 1");
  o.require(z < premium(pricing, x), "z0 exceeds the full premium");
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;  // <= 0: no runtime target
  std::function<void(Outcome&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "no-background table", 5, c1_no_background},
      {2, "worst-case table", 10, c2_worst_case},
      {3, "comonotone table", 10, c3_comonotone},
      {4, "constant attachment", 0, c4_constant_attachment},
      {5, "Frechet oracles", 30, c5_frechet_oracles},
      {6, "coupling marginal law", 0, c6_marginal_law},
      {7, "portfolio properties", 0, c7_portfolio},
      {8, "robustness orderings", 0, c8_orderings},
      {9, "invariant suites", 0, c9_invariants},
  };
  return all;
}

bool run_one(const Criterion& c) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.run(o);
  } catch (const std::exception& e) {
    o.require(false, std::string("exception: ") + e.what());
  }
  const double secs = seconds_since(t0);
  if (c.budget_seconds > 0) {
    o.require(secs <= c.budget_seconds,
              "runtime " + num(secs) + " s over the " + num(c.budget_seconds) + " s target");
  }
  std::printf("criterion %d (%s): %s [%.2f s]%s\n", c.id, c.title, o.pass ? "PASS" : "FAIL", secs,
              o.notes.str().c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string_view arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria().size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  bool ok = true;
  for (const Criterion& c : criteria()) {
    if (only == 0 || c.id == only) ok = run_one(c) && ok;
  }
  return ok ? 0 : 1;
}
