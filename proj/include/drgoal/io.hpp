#pragma once

// Config parsing (YAML, so JSON flow maps work too), JSON reports and CSV
// tables. Link drgoal::io for this header.

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "drgoal/distribution.hpp"
#include "drgoal/errors.hpp"
#include "drgoal/frechet.hpp"
#include "drgoal/portfolio.hpp"
#include "drgoal/reinsurance.hpp"
#include "drgoal/robustness.hpp"

namespace drgoal::io {

using json = nlohmann::ordered_json;

/// Malformed or inconsistent configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline double number(const YAML::Node& n, std::string_view key, std::string_view where) {
  const YAML::Node v = n[std::string(key)];
  if (!v) {
    throw ConfigError(std::string(where) + ": missing key '" + std::string(key) + "'");
  }
  try {
    return v.as<double>();
  } catch (const YAML::Exception&) {
    throw ConfigError(std::string(where) + ": key '" + std::string(key) + "' is not a number");
  }
}

/// First key of `keys` present in n.
inline double number_any(const YAML::Node& n, std::initializer_list<std::string_view> keys,
                         std::string_view where) {
  for (std::string_view k : keys) {
    if (n[std::string(k)]) return number(n, k, where);
  }
  throw ConfigError(std::string(where) + ": missing key '" + std::string(*keys.begin()) + "'");
}

inline std::vector<double> numbers(const YAML::Node& n, std::string_view key,
                                   std::string_view where) {
  const YAML::Node v = n[std::string(key)];
  if (!v || !v.IsSequence()) {
    throw ConfigError(std::string(where) + ": '" + std::string(key) + "' must be a list");
  }
  try {
    return v.as<std::vector<double>>();
  } catch (const YAML::Exception&) {
    throw ConfigError(std::string(where) + ": '" + std::string(key) + "' must hold numbers");
  }
}

}  // namespace detail

inline YAML::Node parse_yaml(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline YAML::Node load_yaml_file(const std::string& path) {
  try {
    return YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("config: cannot read '" + path + "'");
  } catch (const YAML::Exception& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
}

/// Builds a distribution from `{family: ..., <parameters>}`. Families:
/// uniform (a, b), trunc_pareto (beta, gamma, M), trunc_normal (lower,
/// upper), lognormal (mu, sigma), discrete (atoms, weights), empirical
/// (samples). An optional `shift` key translates the result.
inline Distribution parse_distribution(const YAML::Node& n) {
  if (!n || !n.IsMap()) throw ConfigError("distribution: expected a map with a 'family' key");
  if (!n["family"]) throw ConfigError("distribution: missing key 'family'");
  const std::string family = n["family"].as<std::string>();
  const std::string where = "distribution '" + family + "'";
  Distribution d = [&]() -> Distribution {
    if (family == "uniform") {
      return uniform(detail::number_any(n, {"a", "lower"}, where),
                     detail::number_any(n, {"b", "upper"}, where));
    }
    if (family == "trunc_pareto") {
      return trunc_pareto(detail::number_any(n, {"beta", "scale"}, where),
                          detail::number_any(n, {"gamma", "shape"}, where),
                          detail::number_any(n, {"M", "truncation"}, where));
    }
    if (family == "trunc_normal") {
      return trunc_normal(detail::number_any(n, {"lower", "a"}, where),
                          detail::number_any(n, {"upper", "b"}, where));
    }
    if (family == "lognormal") {
      return lognormal(detail::number(n, "mu", where), detail::number(n, "sigma", where));
    }
    if (family == "discrete") {
      const auto atoms = detail::numbers(n, "atoms", where);
      const auto weights = detail::numbers(n, "weights", where);
      return make_discrete(atoms, weights);
    }
    if (family == "empirical") {
      const auto samples = detail::numbers(n, "samples", where);
      return make_empirical(samples);
    }
    throw ConfigError("distribution: unknown family '" + family + "'");
  }();
  if (n["shift"]) d = shift(d, detail::number(n, "shift", where));
  return d;
}

inline Distribution parse_distribution(std::string_view text) {
  return parse_distribution(parse_yaml(text));
}

/// w0, goal and the pricing table only; the distributions are left alone.
inline ExperimentConfig parse_scalars(const YAML::Node& root, ExperimentConfig c = {}) {
  if (!root || root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("config: top level must be a map");
  const auto maybe = [](const YAML::Node& n, const char* key, double& out, const char* where) {
    if (n[key]) out = detail::number(n, key, where);
  };
  maybe(root, "w0", c.w0, "config");
  maybe(root, "goal", c.goal, "config");
  for (const char* key : {"pricing", "distortion"}) {
    const YAML::Node pr = root[key];
    if (!pr) continue;
    if (pr["family"] && pr["family"].as<std::string>() != "power") {
      throw ConfigError(std::string(key) + ": only the power distortion is supported");
    }
    maybe(pr, "loading", c.loading, key);
    maybe(pr, "theta", c.theta, key);
  }
  return c;
}

/// `{family: power, theta: 0.5, loading: 0.1}`; theta defaults to 1 and the
/// loading to 0.
inline DistortionPricing parse_distortion(const YAML::Node& n) {
  if (!n || !n.IsMap()) throw ConfigError("distortion: expected a map");
  if (n["family"] && n["family"].as<std::string>() != "power") {
    throw ConfigError("distortion: unknown family '" + n["family"].as<std::string>() + "'");
  }
  const double theta = n["theta"] ? detail::number(n, "theta", "distortion") : 1.0;
  const double loading = n["loading"] ? detail::number(n, "loading", "distortion") : 0.0;
  return DistortionPricing(DistortionFunction::power(theta), loading);
}

/// Reads the experiment keys of a config document. Recognised layout:
///   w0: 20
///   goal: 17
///   pricing: {loading: 0.1, theta: 0.5}
///   loss: {family: trunc_pareto, beta: 10, gamma: 3, M: 10}
///   background: {family: trunc_normal, lower: -5, upper: 5}
/// Absent keys keep their defaults.
inline ExperimentConfig parse_experiment(const YAML::Node& root, ExperimentConfig c = {}) {
  if (!root || root.IsNull()) return c;
  c = parse_scalars(root, c);
  const auto maybe = [](const YAML::Node& n, const char* key, double& out, const char* where) {
    if (n[key]) out = detail::number(n, key, where);
  };
  if (const YAML::Node loss = root["loss"]) {
    if (loss["family"] && loss["family"].as<std::string>() != "trunc_pareto") {
      throw ConfigError("config: experiments need a trunc_pareto loss");
    }
    maybe(loss, "beta", c.pareto_scale, "loss");
    maybe(loss, "gamma", c.pareto_shape, "loss");
    maybe(loss, "M", c.pareto_truncation, "loss");
  }
  if (const YAML::Node bg = root["background"]) {
    if (bg["family"] && bg["family"].as<std::string>() != "trunc_normal") {
      throw ConfigError("config: experiments need a trunc_normal background");
    }
    maybe(bg, "lower", c.bg_lower, "background");
    maybe(bg, "upper", c.bg_upper, "background");
  }
  return c;
}

// ---------------------------------------------------------------------------
// JSON

/// Finite doubles as numbers; infinities as "+inf"/"-inf"; NaN as null.
inline json number_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v;
}

inline json to_json(const LayerContract& c) {
  return json{{"attach", number_json(c.attach)}, {"detach", number_json(c.detach)}};
}

inline json to_json(const ReinsuranceSolution& s) {
  return json{{"case", std::string(to_string(s.kind))},
              {"premium", number_json(s.premium)},
              {"value", number_json(s.value)},
              {"contract", to_json(s.contract)}};
}

inline json to_json(const PortfolioSolution& s) {
  return json{{"r_star", number_json(s.r_star)},
              {"kappa_star", number_json(s.kappa_star)},
              {"rho_threshold", number_json(s.rho_threshold)},
              {"value", number_json(s.value)}};
}

inline json to_json(const FrechetResult& r) {
  return json{{"direction", std::string(to_string(r.direction))},
              {"alpha", number_json(r.alpha)},
              {"bound", number_json(r.bound)},
              {"argsup_z", number_json(r.argsup_z)}};
}

inline json to_json(const ExperimentConfig& c) {
  return json{{"w0", c.w0},
              {"goal", c.goal},
              {"loading", c.loading},
              {"theta", c.theta},
              {"loss", {{"family", "trunc_pareto"},
                        {"beta", c.pareto_scale},
                        {"gamma", c.pareto_shape},
                        {"M", c.pareto_truncation}}},
              {"background",
               {{"family", "trunc_normal"}, {"lower", c.bg_lower}, {"upper", c.bg_upper}}}};
}

inline json to_json(std::span<const TableRow> rows) {
  json out = json::array();
  for (const TableRow& r : rows) {
    json j = to_json(r.solution);
    j["param"] = number_json(r.param);
    if (r.worst_of_nominal) j["worst_of_nominal"] = number_json(*r.worst_of_nominal);
    if (r.nominal_of_robust) j["nominal_of_robust"] = number_json(*r.nominal_of_robust);
    out.push_back(std::move(j));
  }
  return out;
}

inline json to_json(const SweepReport& rep) {
  json rows = json::array();
  for (const SweepRow& r : rep.rows) {
    json j{{"param", number_json(r.param)}};
    if (r.ok()) {
      j["robust"] = to_json(*r.robust);
      j["nominal"] = to_json(*r.nominal);
      j["worst_of_nominal"] = number_json(r.worst_of_nominal);
      j["nominal_of_robust"] = number_json(r.nominal_of_robust);
    } else {
      j["error"] = r.error;
    }
    rows.push_back(std::move(j));
  }
  return json{{"parameter", std::string(to_string(rep.parameter))}, {"rows", std::move(rows)}};
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kCsvHeader =
    "param,pi_star,value,attach,detach,worst_of_nominal,nominal_of_robust";

/// Six significant digits; empty for NaN; "+inf"/"-inf" for infinities.
inline std::string csv_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string csv_number(const std::optional<double>& v) {
  return v ? csv_number(*v) : std::string();
}

inline void write_csv_row(std::ostream& os, double param, const ReinsuranceSolution& s,
                          const std::optional<double>& worst_of_nominal,
                          const std::optional<double>& nominal_of_robust) {
  os << csv_number(param) << ',' << csv_number(s.premium) << ',' << csv_number(s.value) << ','
     << csv_number(s.contract.attach) << ',' << csv_number(s.contract.detach) << ','
     << csv_number(worst_of_nominal) << ',' << csv_number(nominal_of_robust) << '\n';
}

inline void write_csv(std::ostream& os, std::span<const TableRow> rows) {
  os << kCsvHeader << '\n';
  for (const TableRow& r : rows) {
    write_csv_row(os, r.param, r.solution, r.worst_of_nominal, r.nominal_of_robust);
  }
}

/// One scenario of a sweep: the robust or the nominal solutions, each row
/// carrying both cross evaluations. Failed rows keep only the parameter.
inline void write_csv(std::ostream& os, const SweepReport& rep, bool robust) {
  os << kCsvHeader << '\n';
  for (const SweepRow& r : rep.rows) {
    if (!r.ok()) {
      os << csv_number(r.param) << ",,,,,,\n";
      continue;
    }
    write_csv_row(os, r.param, robust ? *r.robust : *r.nominal, r.worst_of_nominal,
                  r.nominal_of_robust);
  }
}

}  // namespace drgoal::io
