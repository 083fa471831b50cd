#pragma once

// Distortion premium principle: pi(Z) = (1 + loading) * int_0^inf g(S_Z(z)) dz.

#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "drgoal/distribution.hpp"
#include "drgoal/errors.hpp"
#include "drgoal/numerics.hpp"

namespace drgoal {

/// Increasing map g : [0,1] -> [0,1] with g(0) = 0 and g(1) = 1.
class DistortionFunction {
 public:
  DistortionFunction(std::function<double(double)> g, std::string name,
                     bool strictly_increasing_continuous)
      : g_(std::move(g)), name_(std::move(name)),
        strict_(strictly_increasing_continuous) {
    validate();
  }

  /// g(s) = s^theta. Concave iff theta <= 1; theta = 1 is the identity.
  static DistortionFunction power(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
      throw DomainError("power distortion: theta must be positive");
    }
    return DistortionFunction(
        [theta](double s) { return s <= 0.0 ? 0.0 : (s >= 1.0 ? 1.0 : std::pow(s, theta)); },
        "power(theta=" + detail::fmt(theta) + ")", true);
  }
  static DistortionFunction identity() { return power(1.0); }

  double operator()(double s) const { return g_(s); }
  const std::string& name() const { return name_; }
  /// Declared flag; the comonotone solver requires it.
  bool strictly_increasing_continuous() const { return strict_; }

 private:
  void validate() const {
    if (g_(0.0) != 0.0 || g_(1.0) != 1.0) {
      throw DomainError("distortion " + name_ + ": requires g(0) = 0 and g(1) = 1");
    }
    double prev = 0.0;
    for (int i = 1; i <= 1000; ++i) {
      const double v = g_(i / 1000.0);
      if (v < prev || v > 1.0) throw DomainError("distortion " + name_ + ": not increasing");
      prev = v;
    }
  }

  std::function<double(double)> g_;
  std::string name_;
  bool strict_;
};

struct DistortionPricing {
  DistortionFunction g;
  double loading = 0.0;

  DistortionPricing(DistortionFunction distortion, double safety_loading)
      : g(std::move(distortion)), loading(safety_loading) {
    if (!(loading >= 0.0) || !std::isfinite(loading)) {
      throw DomainError("distortion pricing: loading must be >= 0");
    }
  }

  double factor() const { return 1.0 + loading; }
};

/// Distorted expectation of the layer min((X - a)_+, b - a), without loading:
/// int_a^b g(S_X(t)) dt.
inline double layer_g_expectation(const DistortionPricing& p, const Distribution& x, double a,
                                  double b, QuadratureOptions q = {}) {
  if (a > b) throw DomainError("layer_g_expectation: attachment exceeds detachment");
  if (a < 0.0) throw DomainError("layer_g_expectation: negative attachment");
  if (a == b) return 0.0;
  const double hi = std::min(b, x.support().hi);
  if (!std::isfinite(hi)) throw DomainError("layer_g_expectation: unbounded layer");
  if (hi <= a) return 0.0;
  return adaptive_simpson([&](double t) { return p.g(x.survival(t)); }, a, hi, q);
}

/// Distorted expectation E^g[Z] = int_0^hi g(S_Z(z)) dz of a nonnegative,
/// bounded risk.
inline double g_expectation(const DistortionPricing& p, const Distribution& z,
                            QuadratureOptions q = {}) {
  const Support s = z.support();
  if (s.lo < 0.0) throw DomainError("premium: risk must be supported on [0, inf)");
  if (!std::isfinite(s.hi)) throw DomainError("premium: risk must have finite upper support");
  return layer_g_expectation(p, z, 0.0, s.hi, q);
}

/// Distortion premium (1 + loading) * E^g[Z].
inline double premium(const DistortionPricing& p, const Distribution& z,
                      QuadratureOptions q = {}) {
  return p.factor() * g_expectation(p, z, q);
}

/// sup{z : (1 + loading) g(S_X(z)) >= 1}, clamped to the support [0, M] of X;
/// 0 when the inequality already fails at 0.
inline double z0(const DistortionPricing& p, const Distribution& x, double tol = 1e-10) {
  const Support s = x.support();
  if (s.lo < 0.0 || !std::isfinite(s.hi)) {
    throw DomainError("z0: loss must be supported on a bounded subset of [0, inf)");
  }
  const double m = s.hi;
  const auto holds = [&](double z) { return p.factor() * p.g(x.survival(z)) >= 1.0; };
  if (!holds(0.0)) return 0.0;
  // The defining set is an interval [0, z0) or [0, z0]; an atom at M keeps the
  // inequality alive up to M-.
  if (holds(std::nextafter(m, 0.0))) return m;
  return bisect_last_true(holds, 0.0, m, tol);
}

}  // namespace drgoal
