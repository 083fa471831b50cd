#pragma once

// Extremal probabilities P(W <= V), P(W < V), ... over all couplings of two
// fixed marginals, the explicit coupling attaining sup P(W <= V), and two
// independent oracles: permutation enumeration on small atom sets and a
// seeded Monte-Carlo estimate under the constructed coupling.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "drgoal/distribution.hpp"
#include "drgoal/errors.hpp"
#include "drgoal/numerics.hpp"

namespace drgoal {

enum class Direction { sup_leq, sup_geq, inf_lt, inf_gt, sup_lt, sup_gt, inf_leq, inf_geq };

inline std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::sup_leq: return "sup_leq";
    case Direction::sup_geq: return "sup_geq";
    case Direction::inf_lt: return "inf_lt";
    case Direction::inf_gt: return "inf_gt";
    case Direction::sup_lt: return "sup_lt";
    case Direction::sup_gt: return "sup_gt";
    case Direction::inf_leq: return "inf_leq";
    case Direction::inf_geq: return "inf_geq";
  }
  return "?";
}

inline Direction parse_direction(std::string_view s) {
  for (Direction d : {Direction::sup_leq, Direction::sup_geq, Direction::inf_lt, Direction::inf_gt,
                      Direction::sup_lt, Direction::sup_gt, Direction::inf_leq,
                      Direction::inf_geq}) {
    if (to_string(d) == s) return d;
  }
  throw DomainError("unknown direction '" + std::string(s) + "'");
}

struct FrechetOptions {
  std::size_t grid_points = 20001;
  double refine_tol = 1e-12;
  /// Offset used to probe the left limit at an atom.
  double atom_offset = 1e-12;
};

struct FrechetResult {
  double alpha;     // sup_z of the cdf difference relevant to `direction`
  double bound;     // the extremal probability
  double argsup_z;  // smallest maximizer of that difference
  Direction direction;
};

namespace detail {

inline void require_one_continuous(const Distribution& v, const Distribution& w) {
  if (!v.is_continuous() && !w.is_continuous()) {
    throw PreconditionError(
        "frechet: at least one marginal must be continuous (got " + v.describe() + " and " +
        w.describe() + ")");
  }
}

}  // namespace detail

/// sup_z (F_V(z) - F_W(z)) together with its smallest maximizer. The sup over
/// the real line is never below 0 (both cdfs vanish at -inf); when no grid
/// point beats 0 the left end of the search window is reported.
inline Extremum sup_cdf_difference(const Distribution& v, const Distribution& w,
                                   FrechetOptions opt = {}) {
  detail::require_one_continuous(v, w);
  const auto diff = [&](double z) { return v.cdf(z) - w.cdf(z); };

  const Support sv = effective_support(v);
  const Support sw = effective_support(w);
  double lo = std::min(sv.lo, sw.lo);
  double hi = std::max(sv.hi, sw.hi);
  if (hi <= lo) hi = lo + 1.0;
  const std::size_t n = std::max<std::size_t>(opt.grid_points, 3);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  lo -= step;
  hi += step;

  Extremum best = grid_refine_max(diff, lo, hi, GridOptions{n + 2, opt.refine_tol});
  const auto consider = [&](double z) {
    const double val = diff(z);
    if (val > best.value || (val == best.value && z < best.arg)) best = {z, val};
  };
  std::vector<double> atoms = v.atoms();
  const auto wa = w.atoms();
  atoms.insert(atoms.end(), wa.begin(), wa.end());
  for (double a : atoms) {
    consider(a);
    consider(a - opt.atom_offset);
  }
  if (best.value < 0.0) return {lo, 0.0};
  return best;
}

/// alpha = sup_z (F_V(z) - F_W(z)), in [0, 1].
inline double alpha(const Distribution& v, const Distribution& w, FrechetOptions opt = {}) {
  return std::clamp(sup_cdf_difference(v, w, opt).value, 0.0, 1.0);
}

/// Extremal probability over all couplings with V ~ F_V, W ~ F_W. Strict and
/// non-strict events share their extremal value when one marginal is
/// continuous.
inline FrechetResult sup_prob(Direction dir, const Distribution& v, const Distribution& w,
                              FrechetOptions opt = {}) {
  // Which cdf difference drives the bound: F_V - F_W or F_W - F_V.
  const bool v_minus_w = dir == Direction::sup_leq || dir == Direction::sup_lt ||
                         dir == Direction::inf_gt || dir == Direction::inf_geq;
  const bool complement = dir == Direction::sup_leq || dir == Direction::sup_lt ||
                          dir == Direction::sup_geq || dir == Direction::sup_gt;
  const Extremum e = v_minus_w ? sup_cdf_difference(v, w, opt) : sup_cdf_difference(w, v, opt);
  const double a = std::clamp(e.value, 0.0, 1.0);
  return FrechetResult{a, complement ? 1.0 - a : a, e.arg, dir};
}

/// The coupling attaining sup P(W <= V): with Z ~ U(0,1), W = F_W^{-1}(Z) and
/// V~ = F_V^{-1}(Z + alpha) on {Z <= 1 - alpha}, F_V^{-1}(1 - Z) otherwise.
class WorstCaseCoupling {
 public:
  WorstCaseCoupling(Distribution v, Distribution w, double alpha)
      : v_(std::move(v)), w_(std::move(w)), alpha_(alpha) {}

  double alpha() const { return alpha_; }
  const Distribution& v_marginal() const { return v_; }
  const Distribution& w_marginal() const { return w_; }

  double w_of_z(double z) const {
    check_level(z);
    return w_.quantile(z);
  }
  double v_of_z(double z) const {
    check_level(z);
    if (z <= 1.0 - alpha_) return v_.quantile(std::min(z + alpha_, 1.0));
    const double t = 1.0 - z;
    return t > 0.0 ? v_.quantile(t) : v_.quantile_at_zero();
  }

  /// P(V~ <= x) for Z ~ U(0,1), by measuring the two branches separately:
  /// |{Z <= 1-alpha : Z + alpha <= F_V(x)}| + |{Z > 1-alpha : 1 - Z <= F_V(x)}|.
  double pushforward_cdf(double x) const {
    const double fv = v_.cdf(x);
    const double first = std::clamp(std::min(1.0 - alpha_, fv - alpha_), 0.0, 1.0);
    const double second = std::clamp(std::min(alpha_, fv), 0.0, 1.0);
    return first + second;
  }

 private:
  static void check_level(double z) {
    if (!(z > 0.0) || z > 1.0) throw DomainError("coupling: uniform level must lie in (0, 1]");
  }
  Distribution v_;
  Distribution w_;
  double alpha_;
};

inline WorstCaseCoupling worst_case_coupling(const Distribution& v, const Distribution& w,
                                             FrechetOptions opt = {}) {
  return WorstCaseCoupling(v, w, alpha(v, w, opt));
}

/// Empirical frequency of {W <= V~} over n seeded uniform draws.
inline double mc_verify(const WorstCaseCoupling& c, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("mc_verify: need at least one draw");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double z = unif(gen);
    if (z <= 0.0) z = std::numeric_limits<double>::min();
    if (c.w_of_z(z) <= c.v_of_z(z)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

inline constexpr std::size_t kMaxBruteForceAtoms = 8;

/// Exact extremal probability for two equally weighted atom lists of the same
/// size, by enumerating every permutation coupling (the extreme points of the
/// coupling polytope).
inline double brute_force_bound(Direction dir, std::span<const double> atoms_v,
                                std::span<const double> atoms_w) {
  const std::size_t n = atoms_v.size();
  if (n != atoms_w.size() || n == 0) {
    throw DomainError("brute_force_bound: atom lists must be nonempty and of equal size");
  }
  if (n > kMaxBruteForceAtoms) {
    throw DomainError("brute_force_bound: at most " + std::to_string(kMaxBruteForceAtoms) +
                      " atoms supported, got " + std::to_string(n));
  }
  const auto event = [dir](double w, double v) {
    switch (dir) {
      case Direction::sup_leq:
      case Direction::inf_leq: return w <= v;
      case Direction::sup_lt:
      case Direction::inf_lt: return w < v;
      case Direction::sup_geq:
      case Direction::inf_geq: return w >= v;
      case Direction::sup_gt:
      case Direction::inf_gt: return w > v;
    }
    return false;
  };
  const bool maximize = dir == Direction::sup_leq || dir == Direction::sup_lt ||
                        dir == Direction::sup_geq || dir == Direction::sup_gt;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = maximize ? 0 : n;
  do {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += event(atoms_w[perm[i]], atoms_v[i]) ? 1 : 0;
    best = maximize ? std::max(best, hits) : std::min(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(n);
}

/// n equally weighted atoms at the mid-quantiles (i - 1/2)/n of d.
inline std::vector<double> quantile_atoms(const Distribution& d, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = d.quantile((static_cast<double>(i) + 0.5) / static_cast<double>(n));
  }
  return out;
}

}  // namespace drgoal
