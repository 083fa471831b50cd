#pragma once

// Experiment harness: the three goal tables and the goal, loading and shape
// sweeps comparing the robust contract with the comonotone (nominal) one.

#include <cmath>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drgoal/distortion.hpp"
#include "drgoal/distribution.hpp"
#include "drgoal/errors.hpp"
#include "drgoal/reinsurance.hpp"

namespace drgoal {

/// Parametric setup shared by the tables and sweeps: truncated Pareto loss,
/// standard normal background truncated to [bg_lower, bg_upper], power
/// distortion.
struct ExperimentConfig {
  double w0 = 20.0;
  double goal = 17.0;
  double loading = 0.1;
  double theta = 0.5;
  double pareto_scale = 10.0;
  double pareto_shape = 3.0;
  double pareto_truncation = 10.0;
  double bg_lower = -5.0;
  double bg_upper = 5.0;
};

inline ReinsuranceProblem make_problem(const ExperimentConfig& c) {
  Distribution loss = trunc_pareto(c.pareto_scale, c.pareto_shape, c.pareto_truncation);
  Distribution bg = trunc_normal(c.bg_lower, c.bg_upper);
  MonotoneMap h = comonotone_map(loss, bg);
  return ReinsuranceProblem{c.w0,
                            c.goal,
                            DistortionPricing(DistortionFunction::power(c.theta), c.loading),
                            std::move(loss),
                            std::move(bg),
                            std::move(h)};
}

enum class TableKind { t1, t2, t3 };
enum class SweepParameter { goal, loading, shape };

inline std::string_view to_string(TableKind t) {
  switch (t) {
    case TableKind::t1: return "table1";
    case TableKind::t2: return "table2";
    case TableKind::t3: return "table3";
  }
  return "?";
}

inline std::string_view to_string(SweepParameter s) {
  switch (s) {
    case SweepParameter::goal: return "goal";
    case SweepParameter::loading: return "loading";
    case SweepParameter::shape: return "shape";
  }
  return "?";
}

/// 15, 15.5, ..., 19.
inline std::vector<double> default_goal_grid() {
  std::vector<double> v;
  for (int i = 0; i <= 8; ++i) v.push_back(15.0 + 0.5 * i);
  return v;
}
/// 0.02, 0.04, ..., 0.2.
inline std::vector<double> default_loading_grid() {
  std::vector<double> v;
  for (int i = 1; i <= 10; ++i) v.push_back(0.02 * i);
  return v;
}
/// 2, 2.2, ..., 4.
inline std::vector<double> default_shape_grid() {
  std::vector<double> v;
  for (int i = 0; i <= 10; ++i) v.push_back(2.0 + 0.2 * i);
  return v;
}

struct TableRow {
  double param;
  ReinsuranceSolution solution;
  /// Cross evaluations; set for the worst-case and comonotone tables.
  std::optional<double> worst_of_nominal{};
  std::optional<double> nominal_of_robust{};
};

namespace detail {

inline ExperimentConfig with_param(ExperimentConfig c, SweepParameter p, double v) {
  switch (p) {
    case SweepParameter::goal: c.goal = v; break;
    case SweepParameter::loading: c.loading = v; break;
    case SweepParameter::shape: c.pareto_shape = v; break;
  }
  return c;
}

template <class F>
auto annotate(std::string_view where, double param, F&& f) -> decltype(f()) {
  const std::string tag = std::string(where) + " row " + fmt(param) + ": ";
  try {
    return f();
  } catch (const PreconditionError& e) {
    throw PreconditionError(tag + e.what());
  } catch (const NumericError& e) {
    throw NumericError(tag + e.what());
  } catch (const DomainError& e) {
    throw DomainError(tag + e.what());
  }
}

}  // namespace detail

/// Nine rows over the default goal grid. Solver errors are rethrown with the
/// failing goal level prepended.
inline std::vector<TableRow> run_table(TableKind which, const ExperimentConfig& base = {},
                                       ReinsuranceOptions opt = {}) {
  std::vector<TableRow> rows;
  for (double goal : default_goal_grid()) {
    rows.push_back(detail::annotate(to_string(which), goal, [&] {
      const ReinsuranceProblem p =
          make_problem(detail::with_param(base, SweepParameter::goal, goal));
      switch (which) {
        case TableKind::t1: return TableRow{goal, solve_no_background(p, opt)};
        case TableKind::t2: {
          TableRow r{goal, solve_with_background(p, opt)};
          r.nominal_of_robust = evaluate_comonotone(p, r.solution.contract, opt);
          return r;
        }
        case TableKind::t3: {
          TableRow r{goal, solve_comonotone(p, opt)};
          r.worst_of_nominal = evaluate_worst_case(p, r.solution.contract, opt);
          return r;
        }
      }
      throw DomainError("unknown table");
    }));
  }
  return rows;
}

struct SweepSpec {
  SweepParameter parameter;
  std::vector<double> values;
  ExperimentConfig base{};

  void validate() const {
    if (values.empty()) throw DomainError("sweep: no parameter values");
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (!(values[i] > values[i - 1])) {
        throw DomainError("sweep: parameter values must be strictly increasing");
      }
    }
  }
};

inline SweepSpec default_sweep(SweepParameter p, const ExperimentConfig& base = {}) {
  switch (p) {
    case SweepParameter::goal: return {p, default_goal_grid(), base};
    case SweepParameter::loading: return {p, default_loading_grid(), base};
    case SweepParameter::shape: return {p, default_shape_grid(), base};
  }
  throw DomainError("unknown sweep parameter");
}

struct SweepRow {
  double param;
  std::optional<ReinsuranceSolution> robust{};
  std::optional<ReinsuranceSolution> nominal{};
  /// Robust objective evaluated at the nominal contract.
  double worst_of_nominal = std::nan("");
  /// Nominal objective evaluated at the robust contract.
  double nominal_of_robust = std::nan("");
  /// Nonempty when the row failed; the sweep carries on.
  std::string error{};

  bool ok() const { return error.empty(); }
  double worst_case_gap() const { return robust->value - worst_of_nominal; }
  double nominal_gap() const { return nominal->value - nominal_of_robust; }
};

struct SweepReport {
  SweepParameter parameter;
  std::vector<SweepRow> rows;
};

/// Solves the robust and nominal problems at every value and scores each
/// contract in the other scenario. Rows come back in parameter order.
inline SweepReport run_sweep(const SweepSpec& s, ReinsuranceOptions opt = {}) {
  s.validate();
  SweepReport out{s.parameter, {}};
  out.rows.reserve(s.values.size());
  for (double v : s.values) {
    SweepRow row{v};
    try {
      const ReinsuranceProblem p = make_problem(detail::with_param(s.base, s.parameter, v));
      row.robust = solve_with_background(p, opt);
      row.nominal = solve_comonotone(p, opt);
      row.worst_of_nominal = evaluate_worst_case(p, row.nominal->contract, opt);
      row.nominal_of_robust = evaluate_comonotone(p, row.robust->contract, opt);
    } catch (const std::exception& e) {
      row = SweepRow{v};
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace drgoal
