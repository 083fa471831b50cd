#pragma once

// Goal-reaching reinsurance design under a distortion premium principle.
//
// The insurer with wealth w0 cedes I(X) of a bounded loss X ~ F_X on [0, M]
// and wants P(w0 - Y - X + I(X) - pi(I(X)) >= xi) as large as possible. Three
// solvers are provided, all returning a layer contract
// I_{a,b}(x) = min((x - a)_+, b - a):
//
//   * solve_no_background  - Y = 0;
//   * solve_with_background - Y ~ F_0 with the worst-case coupling to X;
//   * solve_comonotone     - Y = h(X) for an increasing continuous h.
//
// evaluate_worst_case / evaluate_comonotone score an arbitrary layer in the
// robust and comonotone scenarios respectively.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "drgoal/distortion.hpp"
#include "drgoal/distribution.hpp"
#include "drgoal/errors.hpp"
#include "drgoal/numerics.hpp"

namespace drgoal {

/// Ceded loss min((x - attach)_+, detach - attach).
struct LayerContract {
  double attach = 0.0;
  double detach = 0.0;

  LayerContract() = default;
  LayerContract(double a, double b) : attach(a), detach(b) {
    if (!(a >= 0.0) || !(b >= a)) {
      throw DomainError("layer contract: requires 0 <= attach <= detach, got (" +
                        detail::fmt(a) + ", " + detail::fmt(b) + ")");
    }
  }

  double ceded(double x) const { return std::clamp(x - attach, 0.0, detach - attach); }
  double retained(double x) const { return x - ceded(x); }
  bool is_empty() const { return detach == attach; }
};

enum class SolutionCase { goal_certain, interior, indifferent, no_reinsurance };

inline std::string_view to_string(SolutionCase c) {
  switch (c) {
    case SolutionCase::goal_certain: return "goal_certain";
    case SolutionCase::interior: return "interior";
    case SolutionCase::indifferent: return "indifferent";
    case SolutionCase::no_reinsurance: return "no_reinsurance";
  }
  return "?";
}

/// Increasing continuous map h with Y = h(X).
using MonotoneMap = std::function<double(double)>;

struct ReinsuranceProblem {
  double w0;
  double goal;
  DistortionPricing pricing;
  Distribution loss;
  /// F_0, used by the worst-case scenario.
  std::optional<Distribution> background{};
  /// h, used by the comonotone scenario.
  MonotoneMap comonotone_map{};
};

struct ReinsuranceSolution {
  LayerContract contract;
  double premium;
  double value;
  SolutionCase kind;
};

struct ReinsuranceOptions {
  std::size_t grid_points = 4001;
  int scan_steps = 1000;
  double root_tol = 1e-10;
  double refine_tol = 1e-10;
  /// An optimal K at or below 1 + this is the "all contracts indifferent" case.
  double indifference_tol = 1e-9;
  QuadratureOptions quadrature{};
};

namespace detail {

inline double loss_bound(const ReinsuranceProblem& p) {
  const Support s = p.loss.support();
  if (s.lo < 0.0) throw PreconditionError("reinsurance: loss must be nonnegative");
  if (!std::isfinite(s.hi)) throw PreconditionError("reinsurance: loss must be bounded");
  return s.hi;
}

inline const Distribution& require_background(const ReinsuranceProblem& p, const char* what) {
  if (!p.background) throw PreconditionError(std::string(what) + ": background law missing");
  if (!p.background->is_continuous()) {
    throw PreconditionError(std::string(what) + ": background cdf must be continuous");
  }
  return *p.background;
}

inline const MonotoneMap& require_map(const ReinsuranceProblem& p, const char* what) {
  if (!p.comonotone_map) throw PreconditionError(std::string(what) + ": comonotone map missing");
  return p.comonotone_map;
}

}  // namespace detail

/// (1 + loading) * int_a^b g(S_X(t)) dt.
inline double contract_premium(const ReinsuranceProblem& p, const LayerContract& c,
                               QuadratureOptions q = {}) {
  return p.pricing.factor() * layer_g_expectation(p.pricing, p.loss, c.attach, c.detach, q);
}

/// psi(pi) = E^g[X] - pi/(1+loading) - int_0^{w0-pi-xi} g(S_X(y)) dy, the
/// distorted retained expectation left over once the retention level is
/// pinned at w0 - pi - xi. Convex on [0, w0 - xi].
inline double psi(const ReinsuranceProblem& p, double pi, QuadratureOptions q = {}) {
  const double budget = p.w0 - p.goal;
  if (!(pi >= 0.0) || !(pi <= budget)) {
    throw DomainError("psi: premium " + detail::fmt(pi) + " outside [0, " + detail::fmt(budget) +
                      "]");
  }
  const double m = detail::loss_bound(p);
  const auto gs = [&](double t) { return p.pricing.g(p.loss.survival(t)); };
  return adaptive_simpson(gs, 0.0, m, q) - pi / p.pricing.factor() -
         adaptive_simpson(gs, 0.0, std::min(budget - pi, m), q);
}

/// Throws PreconditionError unless w0 - min{pi^g(X), M} < xi < w0.
inline void check_no_background_assumption(const ReinsuranceProblem& p,
                                           QuadratureOptions q = {}) {
  const double m = detail::loss_bound(p);
  if (!(p.goal < p.w0)) {
    throw PreconditionError("no-background problem: goal " + detail::fmt(p.goal) +
                            " must be below initial wealth " + detail::fmt(p.w0));
  }
  const double full = premium(p.pricing, p.loss, q);
  const double lower = p.w0 - std::min(full, m);
  if (!(lower < p.goal)) {
    throw PreconditionError("no-background problem: goal " + detail::fmt(p.goal) +
                            " must exceed w0 - min{pi^g(X), M} = " + detail::fmt(lower));
  }
}

/// Optimal layer without background risk. Either the goal can be reached
/// surely with a stop-loss treaty (the cheapest such premium is used), or the
/// optimal treaty is the layer [eta*, q*] with eta* = w0 - pi* - xi where pi*
/// minimizes psi and q* is the largest detachment the premium pays for.
inline ReinsuranceSolution solve_no_background(const ReinsuranceProblem& p,
                                               ReinsuranceOptions opt = {}) {
  check_no_background_assumption(p, opt.quadrature);
  const double m = detail::loss_bound(p);
  const double budget = p.w0 - p.goal;
  const double factor = p.pricing.factor();
  const auto gs = [&](double t) { return p.pricing.g(p.loss.survival(t)); };
  const auto layer = [&](double a, double b) { return adaptive_simpson(gs, a, b, opt.quadrature); };

  // psi'(pi) >= 0  <=>  (1 + loading) g(S_X(w0 - pi - xi)) >= 1, nondecreasing in pi.
  const auto slope_nonneg = [&](double pi) {
    return factor * p.pricing.g(p.loss.survival(budget - pi)) >= 1.0;
  };
  double pi_star;
  if (slope_nonneg(0.0)) {
    pi_star = 0.0;
  } else if (!slope_nonneg(budget)) {
    pi_star = budget;
  } else {
    pi_star = bisect_threshold(slope_nonneg, 0.0, budget, opt.root_tol);
  }

  const auto psi_at = [&](double pi) { return psi(p, pi, opt.quadrature); };
  if (pi_star < budget && psi_at(pi_star) <= 0.0) {
    // Goal reachable surely; psi decreases on [0, pi*], take its first root.
    const double pi_hat =
        psi_at(0.0) <= 0.0 ? 0.0
                           : bisect_root(psi_at, 0.0, pi_star, opt.root_tol, "psi root");
    const double target = pi_hat / factor;
    const double t_hat =
        pi_hat == 0.0 ? m
                      : bisect_root([&](double t) { return layer(t, m) - target; }, 0.0, m,
                                    opt.root_tol, "stop-loss retention");
    const LayerContract c(t_hat, m);
    return {c, contract_premium(p, c, opt.quadrature), 1.0, SolutionCase::goal_certain};
  }

  const double eta = budget - pi_star;
  const double target = pi_star / factor;
  const double q_star = largest_root([&](double q) { return layer(eta, q) - target; }, eta, m,
                                     opt.scan_steps, opt.root_tol, "detachment point");
  const LayerContract c(eta, q_star);
  return {c, contract_premium(p, c, opt.quadrature), p.loss.cdf(q_star),
          pi_star == 0.0 ? SolutionCase::no_reinsurance : SolutionCase::interior};
}

/// K(z, y) = F_X(y) + F_0(w0 - (1+loading) int_z^y g(S_X(t)) dt - xi - z);
/// the worst-case reaching probability of the layer [z, y] is K - 1.
inline double k_objective(const ReinsuranceProblem& p, double z, double y,
                          QuadratureOptions q = {}) {
  const Distribution& f0 = detail::require_background(p, "K objective");
  if (z > y) throw DomainError("K objective: requires z <= y");
  if (z < 0.0) throw DomainError("K objective: requires z >= 0");
  const double pi = p.pricing.factor() * layer_g_expectation(p.pricing, p.loss, z, y, q);
  return p.loss.cdf(y) + f0.cdf(p.w0 - pi - p.goal - z);
}

/// Robust (worst-case dependence) optimal layer: y* maximizes
/// y -> K(min{y, z0}, y) over the detachments whose premium stays within
/// [0, w0 - xi], and the contract is [min{y*, z0}, y*].
inline ReinsuranceSolution solve_with_background(const ReinsuranceProblem& p,
                                                 ReinsuranceOptions opt = {}) {
  detail::require_background(p, "robust reinsurance");
  const double m = detail::loss_bound(p);
  const double budget = p.w0 - p.goal;
  if (!(budget >= 0.0)) {
    throw PreconditionError("robust reinsurance: goal " + detail::fmt(p.goal) +
                            " must not exceed initial wealth " + detail::fmt(p.w0));
  }
  const double zc = z0(p.pricing, p.loss, opt.root_tol);
  // Premium of [min{y, z0}, y] is 0 up to z0 and increasing after.
  const auto affordable = [&](double y) {
    return y <= zc ||
           p.pricing.factor() * layer_g_expectation(p.pricing, p.loss, zc, y, opt.quadrature) <=
               budget;
  };
  const double y_cap = affordable(m) ? m : bisect_last_true(affordable, zc, m, opt.root_tol);
  const auto reduced = [&](double y) {
    return k_objective(p, std::min(y, zc), y, opt.quadrature);
  };
  const Extremum best =
      grid_refine_max(reduced, 0.0, y_cap, GridOptions{opt.grid_points, opt.refine_tol});
  if (best.value <= 1.0 + opt.indifference_tol) {
    return {LayerContract{}, 0.0, 0.0, SolutionCase::indifferent};
  }
  const double y_star = best.arg;
  const LayerContract c(std::min(y_star, zc), y_star);
  const double value = std::min(best.value - 1.0, 1.0);
  SolutionCase kind = SolutionCase::interior;
  if (y_star <= zc) {
    kind = SolutionCase::no_reinsurance;
  } else if (value >= 1.0 - 1e-12) {
    kind = SolutionCase::goal_certain;
  }
  return {c, contract_premium(p, c, opt.quadrature), value, kind};
}

/// h(x) = F_Y^{-1}(F_X(x)), the comonotone coupling of Y to X. Checked to be
/// nondecreasing on a grid over the loss support.
inline MonotoneMap comonotone_map(const Distribution& loss, const Distribution& background) {
  MonotoneMap h = [loss, background](double x) {
    const double t = loss.cdf(x);
    return t <= 0.0 ? background.quantile_at_zero() : background.quantile(t);
  };
  const Support s = effective_support(loss);
  double prev = h(s.lo);
  for (int i = 1; i <= 200; ++i) {
    const double v = h(s.lo + (s.hi - s.lo) * i / 200.0);
    if (v < prev) throw PreconditionError("comonotone map: not increasing");
    prev = v;
  }
  return h;
}

/// L(a, b) = h(b) + a + (1+loading) int_a^b g(S_X(t)) dt: the worst total
/// outlay on {X <= b} under the layer [a, b].
inline double layer_outlay(const ReinsuranceProblem& p, double a, double b,
                           QuadratureOptions q = {}) {
  const MonotoneMap& h = detail::require_map(p, "layer outlay");
  return h(b) + a + p.pricing.factor() * layer_g_expectation(p.pricing, p.loss, a, b, q);
}

/// Optimal layer when Y = h(X). The attachment is always z0; the detachment
/// b* solves L(z0, b*) = w0 - xi unless no reinsurance is optimal.
inline ReinsuranceSolution solve_comonotone(const ReinsuranceProblem& p,
                                            ReinsuranceOptions opt = {}) {
  const MonotoneMap& h = detail::require_map(p, "comonotone reinsurance");
  const double m = detail::loss_bound(p);
  if (!p.loss.is_continuous()) {
    throw PreconditionError("comonotone reinsurance: loss cdf must be continuous");
  }
  for (int i = 1; i <= 200; ++i) {
    if (!(p.loss.cdf(m * i / 200.0) > p.loss.cdf(m * (i - 1) / 200.0))) {
      throw PreconditionError("comonotone reinsurance: loss cdf must be strictly increasing");
    }
  }
  if (!p.pricing.g.strictly_increasing_continuous()) {
    throw PreconditionError(
        "comonotone reinsurance: distortion must be continuous and strictly increasing");
  }
  const double budget = p.w0 - p.goal;
  const double zc = z0(p.pricing, p.loss, opt.root_tol);

  const LayerContract full(zc, m);
  const double full_premium = contract_premium(p, full, opt.quadrature);
  if (h(m) + zc + full_premium <= budget) {
    return {full, full_premium, 1.0, SolutionCase::goal_certain};
  }
  if (budget < h(0.0)) {
    return {LayerContract{}, 0.0, 0.0, SolutionCase::indifferent};
  }
  if (h(zc) + zc >= budget) {
    const double x_bar = largest_root([&](double x) { return h(x) + x - budget; }, 0.0, m,
                                      opt.scan_steps, opt.root_tol, "no-reinsurance threshold");
    return {LayerContract(zc, zc), 0.0, p.loss.cdf(x_bar), SolutionCase::no_reinsurance};
  }
  const double b_star =
      bisect_root([&](double b) { return layer_outlay(p, zc, b, opt.quadrature) - budget; }, zc,
                  m, opt.root_tol, "comonotone detachment point");
  const LayerContract c(zc, b_star);
  return {c, contract_premium(p, c, opt.quadrature), p.loss.cdf(b_star), SolutionCase::interior};
}

/// Worst-case reaching probability of a layer:
/// max{0, sup_{z in [0,M]} (F_{R(X)}(z) - F_pi(z))} with
/// F_pi(z) = 1 - F_0(w0 - pi - xi - z) and pi the layer premium.
inline double evaluate_worst_case(const ReinsuranceProblem& p, const LayerContract& c,
                                  ReinsuranceOptions opt = {}) {
  const Distribution& f0 = detail::require_background(p, "worst-case evaluation");
  const double m = detail::loss_bound(p);
  if (c.detach > m) throw DomainError("worst-case evaluation: detachment beyond loss support");
  const double pi = contract_premium(p, c, opt.quadrature);
  const double width = c.detach - c.attach;
  const auto f_pi = [&](double z) { return 1.0 - f0.cdf(p.w0 - pi - p.goal - z); };
  const auto gap = [&](double z) {
    const double fr = z < c.attach ? p.loss.cdf(z) : p.loss.cdf(z + width);
    return fr - f_pi(z);
  };
  Extremum best = grid_refine_max(gap, 0.0, m, GridOptions{opt.grid_points, opt.refine_tol});
  best.value = std::max(best.value, gap(c.attach));
  if (c.attach > 0.0) {
    best.value = std::max(best.value, p.loss.cdf_left(c.attach) - f_pi(c.attach));
  }
  return std::clamp(best.value, 0.0, 1.0);
}

/// Reaching probability of a layer when Y = h(X): F_X(x_bar) with
/// x_bar = sup{t in [0, M] : h(t) + R(t) <= w0 - xi - pi}, or 0 if the set is
/// empty.
inline double evaluate_comonotone(const ReinsuranceProblem& p, const LayerContract& c,
                                  ReinsuranceOptions opt = {}) {
  const MonotoneMap& h = detail::require_map(p, "comonotone evaluation");
  const double m = detail::loss_bound(p);
  const double rhs = p.w0 - p.goal - contract_premium(p, c, opt.quadrature);
  const auto ok = [&](double t) { return h(t) + c.retained(t) <= rhs; };
  if (!ok(0.0)) return 0.0;
  return p.loss.cdf(bisect_last_true(ok, 0.0, m, opt.root_tol));
}

}  // namespace drgoal
