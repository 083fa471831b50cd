#pragma once

// Robust goal-reaching portfolio selection with a background risk of known
// marginal and unknown dependence on the market. Via the quantile
// formulation the optimal terminal payoff is digital,
//   X* = kappa* 1{rho <= F_rho^{-1}(1 - r*)},
// with r* maximizing r -> F_0(x0 / C(r) - xi) - r and C(r) the capital
// needed to pay one unit on the winning event {rho <= F_rho^{-1}(1 - r)}.

#include <cmath>
#include <cstddef>

#include "drgoal/distribution.hpp"
#include "drgoal/errors.hpp"
#include "drgoal/numerics.hpp"

namespace drgoal {

struct PortfolioProblem {
  double x0;                    // initial wealth
  double goal;                  // xi
  Distribution pricing_kernel;  // law of rho
  Distribution background;      // law F_0 of the background risk Y
};

struct PortfolioSolution {
  double r_star;          // probability of the losing event
  double kappa_star;      // payment on the winning event
  double rho_threshold;   // F_rho^{-1}(1 - r*); +inf when r* = 0 and rho is unbounded
  double value;           // F_0(kappa* - xi) - r*
};

struct PortfolioOptions {
  std::size_t grid_points = 4001;
  double r_cap = 1.0 - 1e-6;
  double refine_tol = 1e-12;
  QuadratureOptions quadrature{};
};

/// C(r) = int_r^1 F_rho^{-1}(1 - s) ds = int_0^{1-r} F_rho^{-1}(u) du, the
/// price of the claim 1{rho <= F_rho^{-1}(1 - r)}. The integrand may blow up
/// as u -> 1; a divergent integral raises NumericError.
inline double capital_cost(const Distribution& rho, double r, QuadratureOptions q = {}) {
  if (!(r >= 0.0) || !(r < 1.0)) throw DomainError("capital_cost: r must lie in [0, 1)");
  const double lower = rho.quantile_at_zero();
  if (!std::isfinite(lower)) {
    throw DomainError("capital_cost: pricing kernel must be bounded below");
  }
  const auto integrand = [&](double u) { return u <= 0.0 ? lower : rho.quantile(u); };
  try {
    return integrate_towards_one(integrand, 0.0, 1.0 - r, q);
  } catch (const NumericError& e) {
    throw NumericError(std::string("capital_cost: ") + e.what() + " (pricing kernel " +
                       rho.describe() + " has no finite mean)");
  }
}

namespace detail {

inline void check_portfolio(const PortfolioProblem& p) {
  if (!(p.x0 > 0.0) || !std::isfinite(p.x0)) {
    throw PreconditionError("portfolio: initial wealth must be positive");
  }
  if (!(p.goal > 0.0) || !std::isfinite(p.goal)) {
    throw PreconditionError("portfolio: goal must be positive");
  }
  if (!p.pricing_kernel.is_continuous()) {
    throw PreconditionError("portfolio: pricing kernel must be atomless");
  }
  if (p.pricing_kernel.support().lo < 0.0) {
    throw PreconditionError("portfolio: pricing kernel must be nonnegative");
  }
  if (!p.background.is_continuous()) {
    throw PreconditionError("portfolio: background risk cdf must be continuous");
  }
}

}  // namespace detail

/// r -> F_1(x0 / C(r)) - r with F_1(z) = F_0(z - xi).
inline double portfolio_objective(const PortfolioProblem& p, double r,
                                  QuadratureOptions q = {}) {
  const double kappa = p.x0 / capital_cost(p.pricing_kernel, r, q);
  return p.background.cdf(kappa - p.goal) - r;
}

inline PortfolioSolution solve_goal_reaching(const PortfolioProblem& p,
                                             PortfolioOptions opt = {}) {
  detail::check_portfolio(p);
  const auto objective = [&](double r) { return portfolio_objective(p, r, opt.quadrature); };
  const Extremum best =
      grid_refine_max(objective, 0.0, opt.r_cap, GridOptions{opt.grid_points, opt.refine_tol});
  // The objective tends to something <= 0 as r -> 1, so the cap must not be
  // where the maximum sits.
  if (best.arg >= opt.r_cap && best.value > objective(0.0)) {
    throw NumericError("solve_goal_reaching: maximizer sits on the grid cap r = " +
                       detail::fmt(opt.r_cap));
  }
  PortfolioSolution s{};
  s.r_star = best.arg;
  s.kappa_star = p.x0 / capital_cost(p.pricing_kernel, s.r_star, opt.quadrature);
  s.rho_threshold = p.pricing_kernel.quantile(1.0 - s.r_star);
  s.value = p.background.cdf(s.kappa_star - p.goal) - s.r_star;
  return s;
}

/// The digital payoff X*(rho).
inline double optimal_payoff(const PortfolioSolution& s, double rho) {
  return rho <= s.rho_threshold ? s.kappa_star : 0.0;
}

/// Law of the optimal payoff: 0 with probability r*, kappa* otherwise.
inline Distribution payoff_distribution(const PortfolioSolution& s) {
  if (s.r_star <= 0.0) {
    const double a[] = {s.kappa_star};
    const double w[] = {1.0};
    return make_discrete(a, w);
  }
  const double a[] = {0.0, s.kappa_star};
  const double w[] = {s.r_star, 1.0 - s.r_star};
  return make_discrete(a, w);
}

}  // namespace drgoal
