#pragma once

// Univariate distributions described by their cdf, survival function and
// left-continuous quantile F^{-1}(t) = inf{z : F(z) >= t}.
//
// A Distribution is an immutable value with shared ownership of its model, so
// copies are cheap and safe to read from several threads.

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "drgoal/errors.hpp"
#include "drgoal/numerics.hpp"

namespace drgoal {

struct Support {
  double lo;
  double hi;
};

namespace detail {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }
inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }
inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}
inline double normal_quantile(double t) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * t);
}

// Standard normal mass of [a, x], computed from whichever tail keeps the
// subtraction well conditioned.
inline double normal_mass(double a, double x) {
  if (x <= a) return 0.0;
  if (a >= 0.0) return normal_sf(a) - normal_sf(x);
  if (x <= 0.0) return normal_cdf(x) - normal_cdf(a);
  return 0.5 * (std::erf(x / std::numbers::sqrt2) - std::erf(a / std::numbers::sqrt2));
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

class DistributionModel {
 public:
  virtual ~DistributionModel() = default;
  virtual double cdf(double x) const = 0;
  // P(X < x).
  virtual double cdf_left(double x) const { return cdf(x); }
  virtual double survival(double x) const { return 1.0 - cdf(x); }
  // Only called with t in (0, 1].
  virtual double quantile(double t) const = 0;
  virtual double density(double) const {
    throw DomainError("density: " + describe() + " has no density");
  }
  virtual Support support() const = 0;
  virtual bool continuous() const = 0;
  virtual std::vector<double> atoms() const { return {}; }
  virtual std::string describe() const = 0;
};

}  // namespace detail

/// Value-semantic handle to a univariate law.
class Distribution {
 public:
  explicit Distribution(std::shared_ptr<const detail::DistributionModel> model)
      : model_(std::move(model)) {}

  double cdf(double x) const {
    if (std::isnan(x)) throw DomainError("cdf: NaN argument");
    return model_->cdf(x);
  }
  /// P(X < x).
  double cdf_left(double x) const {
    if (std::isnan(x)) throw DomainError("cdf_left: NaN argument");
    return model_->cdf_left(x);
  }
  double survival(double x) const {
    if (std::isnan(x)) throw DomainError("survival: NaN argument");
    return model_->survival(x);
  }
  /// Left-continuous inverse of the cdf. Defined on (0, 1]; any t > 1 maps
  /// to +infinity.
  double quantile(double t) const {
    if (!(t > 0.0)) throw DomainError("quantile: level must lie in (0, 1], got " + detail::fmt(t));
    if (t > 1.0) return kInf;
    return model_->quantile(t);
  }
  /// Right limit F^{-1}(0+), i.e. the lower end of the support.
  double quantile_at_zero() const { return model_->support().lo; }
  double density(double x) const { return model_->density(x); }
  Support support() const { return model_->support(); }
  /// Declared property of the family: the cdf has no jumps.
  bool is_continuous() const { return model_->continuous(); }
  /// Atom locations of a discrete law (empty for continuous families).
  std::vector<double> atoms() const { return model_->atoms(); }
  std::string describe() const { return model_->describe(); }

 private:
  std::shared_ptr<const detail::DistributionModel> model_;
};

namespace detail {

class UniformModel final : public DistributionModel {
 public:
  UniformModel(double a, double b) : a_(a), b_(b) {}
  double cdf(double x) const override {
    if (x <= a_) return 0.0;
    if (x >= b_) return 1.0;
    return (x - a_) / (b_ - a_);
  }
  double survival(double x) const override {
    if (x <= a_) return 1.0;
    if (x >= b_) return 0.0;
    return (b_ - x) / (b_ - a_);
  }
  double quantile(double t) const override { return t >= 1.0 ? b_ : a_ + t * (b_ - a_); }
  double density(double x) const override { return (x < a_ || x > b_) ? 0.0 : 1.0 / (b_ - a_); }
  Support support() const override { return {a_, b_}; }
  bool continuous() const override { return true; }
  std::string describe() const override {
    return "uniform(a=" + fmt(a_) + ", b=" + fmt(b_) + ")";
  }

 private:
  double a_, b_;
};

// Pareto(scale, shape) shifted to start at 0 and truncated at M:
// F(x) = (1 - (scale/(scale+x))^shape) / (1 - (scale/(scale+M))^shape).
class TruncatedParetoModel final : public DistributionModel {
 public:
  TruncatedParetoModel(double scale, double shape, double truncation)
      : scale_(scale), shape_(shape), m_(truncation),
        tail_at_m_(std::pow(scale / (scale + truncation), shape)), mass_(1.0 - tail_at_m_) {}

  double cdf(double x) const override {
    if (x <= 0.0) return 0.0;
    if (x >= m_) return 1.0;
    return (1.0 - tail(x)) / mass_;
  }
  double survival(double x) const override {
    if (x <= 0.0) return 1.0;
    if (x >= m_) return 0.0;
    return (tail(x) - tail_at_m_) / mass_;
  }
  double quantile(double t) const override {
    if (t >= 1.0) return m_;
    const double x = scale_ * (std::pow(1.0 - t * mass_, -1.0 / shape_) - 1.0);
    return std::clamp(x, 0.0, m_);
  }
  double density(double x) const override {
    if (x < 0.0 || x > m_) return 0.0;
    return shape_ * std::pow(scale_, shape_) / std::pow(scale_ + x, shape_ + 1.0) / mass_;
  }
  Support support() const override { return {0.0, m_}; }
  bool continuous() const override { return true; }
  std::string describe() const override {
    return "trunc_pareto(beta=" + fmt(scale_) + ", gamma=" + fmt(shape_) + ", M=" + fmt(m_) + ")";
  }

 private:
  double tail(double x) const { return std::pow(scale_ / (scale_ + x), shape_); }
  double scale_, shape_, m_, tail_at_m_, mass_;
};

// Standard normal conditioned on [a, b].
class TruncatedNormalModel final : public DistributionModel {
 public:
  TruncatedNormalModel(double a, double b) : a_(a), b_(b), mass_(normal_mass(a, b)) {}

  double cdf(double x) const override {
    if (x <= a_) return 0.0;
    if (x >= b_) return 1.0;
    return normal_mass(a_, x) / mass_;
  }
  double survival(double x) const override {
    if (x <= a_) return 1.0;
    if (x >= b_) return 0.0;
    return normal_mass(x, b_) / mass_;
  }
  // No closed-form inverse: bisection on the cdf to 1e-12 in x.
  double quantile(double t) const override {
    if (t >= 1.0) return b_;
    return bisect_threshold([&](double z) { return cdf(z) >= t; }, a_, b_, 1e-12);
  }
  double density(double x) const override {
    if (x < a_ || x > b_) return 0.0;
    return normal_pdf(x) / mass_;
  }
  Support support() const override { return {a_, b_}; }
  bool continuous() const override { return true; }
  std::string describe() const override {
    return "trunc_normal(lower=" + fmt(a_) + ", upper=" + fmt(b_) + ")";
  }

 private:
  double a_, b_, mass_;
};

class LognormalModel final : public DistributionModel {
 public:
  LognormalModel(double mu, double sigma) : mu_(mu), sigma_(sigma) {}
  double cdf(double x) const override {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return normal_cdf((std::log(x) - mu_) / sigma_);
  }
  double survival(double x) const override {
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return normal_sf((std::log(x) - mu_) / sigma_);
  }
  double quantile(double t) const override {
    if (t >= 1.0) return kInf;
    return std::exp(mu_ + sigma_ * normal_quantile(t));
  }
  double density(double x) const override {
    if (x <= 0.0 || std::isinf(x)) return 0.0;
    const double z = (std::log(x) - mu_) / sigma_;
    return normal_pdf(z) / (sigma_ * x);
  }
  Support support() const override { return {0.0, kInf}; }
  bool continuous() const override { return true; }
  std::string describe() const override {
    return "lognormal(mu=" + fmt(mu_) + ", sigma=" + fmt(sigma_) + ")";
  }

 private:
  double mu_, sigma_;
};

// Finitely many atoms; cum_[i] = P(X <= atoms_[i]) with atoms_ sorted.
class DiscreteModel final : public DistributionModel {
 public:
  DiscreteModel(std::vector<double> atoms, std::vector<double> cumulative, std::string label)
      : atoms_(std::move(atoms)), cum_(std::move(cumulative)), label_(std::move(label)) {}

  double cdf(double x) const override {
    const auto it = std::upper_bound(atoms_.begin(), atoms_.end(), x);
    return it == atoms_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
  }
  double cdf_left(double x) const override {
    const auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x);
    return it == atoms_.begin() ? 0.0 : cum_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
  }
  double quantile(double t) const override {
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), t);
    if (it == cum_.end()) return atoms_.back();
    return atoms_[static_cast<std::size_t>(it - cum_.begin())];
  }
  Support support() const override { return {atoms_.front(), atoms_.back()}; }
  bool continuous() const override { return false; }
  std::vector<double> atoms() const override {
    std::vector<double> out(atoms_);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
  std::string describe() const override { return label_; }

 private:
  std::vector<double> atoms_;
  std::vector<double> cum_;
  std::string label_;
};

class ShiftedModel final : public DistributionModel {
 public:
  ShiftedModel(Distribution base, double c) : base_(std::move(base)), c_(c) {}
  double cdf(double x) const override { return base_.cdf(x - c_); }
  double cdf_left(double x) const override { return base_.cdf_left(x - c_); }
  double survival(double x) const override { return base_.survival(x - c_); }
  double quantile(double t) const override { return base_.quantile(t) + c_; }
  double density(double x) const override { return base_.density(x - c_); }
  Support support() const override {
    const Support s = base_.support();
    return {s.lo + c_, s.hi + c_};
  }
  bool continuous() const override { return base_.is_continuous(); }
  std::vector<double> atoms() const override {
    auto a = base_.atoms();
    for (double& v : a) v += c_;
    return a;
  }
  std::string describe() const override {
    return "shift(" + base_.describe() + ", " + fmt(c_) + ")";
  }

 private:
  Distribution base_;
  double c_;
};

// Law of -X for continuous X.
class NegatedModel final : public DistributionModel {
 public:
  explicit NegatedModel(Distribution base) : base_(std::move(base)) {}
  double cdf(double x) const override { return base_.survival(-x); }
  double survival(double x) const override { return base_.cdf(-x); }
  double quantile(double t) const override {
    if (t >= 1.0) return -base_.quantile_at_zero();
    return -base_.quantile(1.0 - t);
  }
  double density(double x) const override { return base_.density(-x); }
  Support support() const override {
    const Support s = base_.support();
    return {-s.hi, -s.lo};
  }
  bool continuous() const override { return true; }
  std::string describe() const override { return "negate(" + base_.describe() + ")"; }

 private:
  Distribution base_;
};

inline Distribution discrete_from_sorted(std::vector<double> atoms, std::vector<double> probs,
                                         std::string label) {
  std::vector<double> cum(atoms.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    acc += probs[i];
    cum[i] = acc;
  }
  // Guard against round-off so that quantile(1) is the largest atom.
  for (auto& c : cum) c = std::min(c / acc, 1.0);
  cum.back() = 1.0;
  return Distribution(
      std::make_shared<DiscreteModel>(std::move(atoms), std::move(cum), std::move(label)));
}

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace detail

inline Distribution uniform(double a, double b) {
  detail::require_finite(a, "uniform: a");
  detail::require_finite(b, "uniform: b");
  if (!(a < b)) throw DomainError("uniform: requires a < b");
  return Distribution(std::make_shared<detail::UniformModel>(a, b));
}

/// Shifted Pareto with density shape*scale^shape/(scale+x)^(shape+1),
/// truncated to [0, truncation] and renormalized.
inline Distribution trunc_pareto(double scale, double shape, double truncation) {
  if (!(scale > 0.0) || !(shape > 0.0) || !(truncation > 0.0) || !std::isfinite(truncation)) {
    throw DomainError("trunc_pareto: scale, shape and truncation must be positive and finite");
  }
  return Distribution(std::make_shared<detail::TruncatedParetoModel>(scale, shape, truncation));
}

/// Standard normal truncated to [lower, upper].
inline Distribution trunc_normal(double lower, double upper) {
  detail::require_finite(lower, "trunc_normal: lower");
  detail::require_finite(upper, "trunc_normal: upper");
  if (!(lower < upper)) throw DomainError("trunc_normal: requires lower < upper");
  if (!(detail::normal_mass(lower, upper) > 0.0)) {
    throw DomainError("trunc_normal: interval carries no normal mass");
  }
  return Distribution(std::make_shared<detail::TruncatedNormalModel>(lower, upper));
}

inline Distribution lognormal(double mu, double sigma) {
  detail::require_finite(mu, "lognormal: mu");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("lognormal: sigma must be > 0");
  return Distribution(std::make_shared<detail::LognormalModel>(mu, sigma));
}

/// Equally weighted step distribution of the samples.
inline Distribution make_empirical(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("make_empirical: empty sample");
  std::vector<double> atoms(samples.begin(), samples.end());
  for (double v : atoms) detail::require_finite(v, "make_empirical: sample");
  std::sort(atoms.begin(), atoms.end());
  const std::size_t n = atoms.size();
  std::vector<double> cum(n);
  for (std::size_t i = 0; i < n; ++i) {
    cum[i] = static_cast<double>(i + 1) / static_cast<double>(n);
  }
  return Distribution(std::make_shared<detail::DiscreteModel>(
      std::move(atoms), std::move(cum), "empirical(n=" + std::to_string(n) + ")"));
}

/// Finitely supported law with the given atoms and (nonnegative) weights.
inline Distribution make_discrete(std::span<const double> atoms, std::span<const double> weights) {
  if (atoms.empty() || atoms.size() != weights.size()) {
    throw DomainError("make_discrete: need matching, nonempty atoms and weights");
  }
  std::vector<std::pair<double, double>> pts;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    detail::require_finite(atoms[i], "make_discrete: atom");
    if (!(weights[i] >= 0.0)) throw DomainError("make_discrete: negative weight");
    pts.emplace_back(atoms[i], weights[i]);
    total += weights[i];
  }
  if (!(total > 0.0)) throw DomainError("make_discrete: weights sum to zero");
  std::sort(pts.begin(), pts.end());
  std::vector<double> a, p;
  for (auto [x, w] : pts) {
    a.push_back(x);
    p.push_back(w);
  }
  return detail::discrete_from_sorted(std::move(a), std::move(p),
                                      "discrete(n=" + std::to_string(atoms.size()) + ")");
}

/// Law of X + c.
inline Distribution shift(const Distribution& d, double c) {
  detail::require_finite(c, "shift: offset");
  if (c == 0.0) return d;
  return Distribution(std::make_shared<detail::ShiftedModel>(d, c));
}

/// Law of -X.
inline Distribution negate(const Distribution& d) {
  if (d.is_continuous()) return Distribution(std::make_shared<detail::NegatedModel>(d));
  auto atoms = d.atoms();
  std::vector<double> neg_atoms, probs;
  for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
    neg_atoms.push_back(-*it);
    probs.push_back(d.cdf(*it) - d.cdf_left(*it));
  }
  return detail::discrete_from_sorted(std::move(neg_atoms), std::move(probs),
                                      "negate(" + d.describe() + ")");
}

/// Lower/upper ends of the support with infinite ends replaced by the
/// 1e-12 / 1 - 1e-12 quantiles.
inline Support effective_support(const Distribution& d) {
  Support s = d.support();
  if (!std::isfinite(s.lo)) s.lo = d.quantile(1e-12);
  if (!std::isfinite(s.hi)) s.hi = d.quantile(1.0 - 1e-12);
  return s;
}

}  // namespace drgoal
