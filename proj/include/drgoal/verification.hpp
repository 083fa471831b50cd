#pragma once

// Seeded randomized checks of the extremal-probability bounds: permutation
// enumeration on discretized marginals, Monte-Carlo under the constructed
// coupling, and the marginal law of the coupled variable.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "drgoal/distribution.hpp"
#include "drgoal/frechet.hpp"

namespace drgoal {

struct MarginalPair {
  Distribution v;
  Distribution w;
};

/// A continuous family with a closed-form quantile (uniform, truncated
/// Pareto, lognormal), randomly parametrized and shifted.
inline Distribution random_continuous_marginal(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double loc = -2.0 + 4.0 * u(gen);
  switch (std::uniform_int_distribution<int>(0, 2)(gen)) {
    case 0: return uniform(loc, loc + 0.5 + 3.0 * u(gen));
    case 1:
      return shift(trunc_pareto(1.0 + 9.0 * u(gen), 1.0 + 3.0 * u(gen), 1.0 + 9.0 * u(gen)), loc);
    default: return shift(lognormal(-0.5 + u(gen), 0.2 + 0.6 * u(gen)), loc);
  }
}

/// Up to five atoms with random weights.
inline Distribution random_discrete_marginal(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = std::uniform_int_distribution<int>(1, 5)(gen);
  std::vector<double> atoms(n), weights(n);
  for (int i = 0; i < n; ++i) {
    atoms[i] = -3.0 + 6.0 * u(gen);
    weights[i] = 0.1 + u(gen);
  }
  return make_discrete(atoms, weights);
}

/// At least one side continuous; the other is discrete a third of the time.
inline MarginalPair random_marginal_pair(std::mt19937_64& gen) {
  const int kind = std::uniform_int_distribution<int>(0, 2)(gen);
  Distribution a = random_continuous_marginal(gen);
  Distribution b = kind == 0 ? random_discrete_marginal(gen) : random_continuous_marginal(gen);
  if (std::uniform_int_distribution<int>(0, 1)(gen) == 1) std::swap(a, b);
  return {a, b};
}

inline constexpr std::array<Direction, 8> kAllDirections{
    Direction::sup_leq, Direction::sup_geq, Direction::inf_lt,  Direction::inf_gt,
    Direction::sup_lt,  Direction::sup_gt,  Direction::inf_leq, Direction::inf_geq};

struct BruteForceTrial {
  std::string v;
  std::string w;
  Direction direction;
  double analytic;
  double enumerated;
  bool ok;
};

/// Compares sup_prob on each pair with permutation enumeration over `atoms`
/// mid-quantile atoms per marginal, for all eight directions. Discretizing
/// moves each cdf by at most 1/(2 atoms), hence the 2/atoms allowance.
inline std::vector<BruteForceTrial> brute_force_trials(std::size_t pairs, std::size_t atoms,
                                                       std::uint64_t seed,
                                                       double grid_error = 1e-6) {
  std::mt19937_64 gen(seed);
  std::vector<BruteForceTrial> out;
  const double tol = 2.0 / static_cast<double>(atoms) + grid_error;
  for (std::size_t i = 0; i < pairs; ++i) {
    const MarginalPair p = random_marginal_pair(gen);
    const auto av = quantile_atoms(p.v, atoms);
    const auto aw = quantile_atoms(p.w, atoms);
    for (Direction d : kAllDirections) {
      const double analytic = sup_prob(d, p.v, p.w).bound;
      const double enumerated = brute_force_bound(d, av, aw);
      out.push_back({p.v.describe(), p.w.describe(), d, analytic, enumerated,
                     std::abs(analytic - enumerated) <= tol});
    }
  }
  return out;
}

struct MonteCarloTrial {
  std::string v;
  std::string w;
  double bound;      // 1 - alpha
  double empirical;  // frequency of {W <= V~}
  double sigma;      // binomial standard error at `bound`
  bool ok;           // within 3 sigma (or exact when sigma = 0)
};

inline std::vector<MonteCarloTrial> monte_carlo_trials(std::size_t pairs, std::size_t draws,
                                                       std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<MonteCarloTrial> out;
  for (std::size_t i = 0; i < pairs; ++i) {
    const MarginalPair p = random_marginal_pair(gen);
    const WorstCaseCoupling c = worst_case_coupling(p.v, p.w);
    const double bound = 1.0 - c.alpha();
    const double emp = mc_verify(c, draws, gen());
    const double sigma = std::sqrt(bound * (1.0 - bound) / static_cast<double>(draws));
    const double gap = std::abs(emp - bound);
    out.push_back({p.v.describe(), p.w.describe(), bound, emp, sigma,
                   sigma > 0.0 ? gap <= 3.0 * sigma : gap <= 1e-12});
  }
  return out;
}

struct MarginalLawTrial {
  std::string v;
  std::string w;
  double max_error;  // max |P(V~ <= x) - F_V(x)| over the grid
};

/// The coupled variable keeps the law of V: its pushforward cdf is compared
/// with F_V on an even grid over the effective support.
inline std::vector<MarginalLawTrial> marginal_law_trials(std::size_t pairs,
                                                         std::size_t grid_points,
                                                         std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<MarginalLawTrial> out;
  for (std::size_t i = 0; i < pairs; ++i) {
    const MarginalPair p = random_marginal_pair(gen);
    const WorstCaseCoupling c = worst_case_coupling(p.v, p.w);
    const Support s = effective_support(p.v);
    double err = 0.0;
    for (std::size_t k = 0; k < grid_points; ++k) {
      const double x =
          s.lo + (s.hi - s.lo) * static_cast<double>(k) / static_cast<double>(grid_points - 1);
      err = std::max(err, std::abs(c.pushforward_cdf(x) - p.v.cdf(x)));
    }
    out.push_back({p.v.describe(), p.w.describe(), err});
  }
  return out;
}

}  // namespace drgoal
