#pragma once

#include "hvp/model.hpp"
#include "hvp/pade.hpp"
#include "hvp/scalar.hpp"
#include "hvp/series.hpp"
#include "hvp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hvp {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// [N, M]: denominator degree N, numerator degree M.
struct PadeOrders {
  int den = 0;
  int num = 0;
};

enum class OracleMode { off, variational, rspt, both };
enum class OutputFormat { table, csv };

struct SweepConfig {
  Rational omega = Rational(1);
  std::vector<int> states{0, 1, 2, 3, 4, 5};
  std::vector<double> lambdas{0.005, 0.01, 0.05, 0.1};
  int order = 8;
  std::vector<PadeOrders> pade{{3, 3}, {3, 4}};
  bool cubic = true;
  OracleMode oracle = OracleMode::variational;
  OutputFormat format = OutputFormat::table;
  double pole_threshold = 1e-3;
  Arithmetic precision = Arithmetic::exact_rational;

  void validate() const {
    if (omega <= 0) throw ConfigError("omega must be positive");
    if (states.empty()) throw ConfigError("states list is empty");
    if (lambdas.empty()) throw ConfigError("lambdas list is empty");
    if (pade.empty()) throw ConfigError("pade list is empty");
    if (order < 1) throw ConfigError("order must be at least 1");
    if (pole_threshold <= 0) throw ConfigError("pole_threshold must be positive");
    for (int n : states)
      if (n < 0) throw ConfigError("states must be non-negative");
    for (double lam : lambdas)
      if (!(lam >= 0)) throw ConfigError("lambdas must be non-negative");
    for (const PadeOrders& po : pade) {
      if (po.den < 0 || po.num < 0) throw ConfigError("pade orders must be non-negative");
      if (po.den + po.num > order)
        throw ConfigError("order " + std::to_string(order) + " is too small for [" +
                          std::to_string(po.den) + "," + std::to_string(po.num) +
                          "]; need at least " + std::to_string(po.den + po.num));
    }
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = s.find(sep);
    parts.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return parts;
}

inline int parse_int(std::string_view s, const std::string& where) {
  const std::string text(trim(s));
  size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected an integer, got '" + text + "'");
  }
  if (used != text.size())
    throw ConfigError(where + ": expected an integer, got '" + text + "'");
  return value;
}

inline double parse_double(std::string_view s, const std::string& where) {
  const std::string text(trim(s));
  size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(value))
    throw ConfigError(where + ": expected a number, got '" + text + "'");
  return value;
}

template <class T>
void sort_unique(std::vector<T>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace detail

// Applies one key = value setting; `where` names the source (config line or
// command-line flag) for error messages.
inline void apply_config_value(SweepConfig& cfg, std::string_view key, std::string_view value,
                               const std::string& where) {
  const std::string text(detail::trim(value));
  if (key == "omega") {
    try {
      cfg.omega = rational_from_string(text);
    } catch (const std::invalid_argument&) {
      throw ConfigError(where + ": invalid value for omega: '" + text + "'");
    }
    if (cfg.omega <= 0) throw ConfigError(where + ": omega must be positive");
  } else if (key == "states") {
    std::vector<int> states;
    for (auto part : detail::split(text, ',')) {
      const int n = detail::parse_int(part, where + " (states)");
      if (n < 0) throw ConfigError(where + ": states must be non-negative");
      states.push_back(n);
    }
    detail::sort_unique(states);
    cfg.states = std::move(states);
  } else if (key == "lambdas") {
    std::vector<double> lambdas;
    for (auto part : detail::split(text, ',')) {
      const double lam = detail::parse_double(part, where + " (lambdas)");
      if (lam < 0) throw ConfigError(where + ": lambdas must be non-negative");
      lambdas.push_back(lam);
    }
    detail::sort_unique(lambdas);
    cfg.lambdas = std::move(lambdas);
  } else if (key == "order") {
    cfg.order = detail::parse_int(text, where + " (order)");
  } else if (key == "pade") {
    std::vector<PadeOrders> pade;
    for (auto part : detail::split(text, ',')) {
      const auto colon = part.find(':');
      if (colon == std::string_view::npos)
        throw ConfigError(where + ": pade entries look like N:M, got '" + std::string(part) +
                          "'");
      PadeOrders po;
      po.den = detail::parse_int(part.substr(0, colon), where + " (pade)");
      po.num = detail::parse_int(part.substr(colon + 1), where + " (pade)");
      pade.push_back(po);
    }
    cfg.pade = std::move(pade);
  } else if (key == "cubic") {
    if (text == "on" || text == "true" || text == "1")
      cfg.cubic = true;
    else if (text == "off" || text == "false" || text == "0")
      cfg.cubic = false;
    else
      throw ConfigError(where + ": cubic must be on or off, got '" + text + "'");
  } else if (key == "oracle") {
    if (text == "off")
      cfg.oracle = OracleMode::off;
    else if (text == "variational")
      cfg.oracle = OracleMode::variational;
    else if (text == "rspt")
      cfg.oracle = OracleMode::rspt;
    else if (text == "both")
      cfg.oracle = OracleMode::both;
    else
      throw ConfigError(where + ": oracle must be off|variational|rspt|both, got '" + text + "'");
  } else if (key == "format") {
    if (text == "table")
      cfg.format = OutputFormat::table;
    else if (text == "csv")
      cfg.format = OutputFormat::csv;
    else
      throw ConfigError(where + ": format must be table or csv, got '" + text + "'");
  } else if (key == "pole_threshold") {
    cfg.pole_threshold = detail::parse_double(text, where + " (pole_threshold)");
    if (cfg.pole_threshold <= 0) throw ConfigError(where + ": pole_threshold must be positive");
  } else if (key == "precision") {
    if (text == "rational")
      cfg.precision = Arithmetic::exact_rational;
    else if (text == "float")
      cfg.precision = Arithmetic::extended_float;
    else
      throw ConfigError(where + ": precision must be rational or float, got '" + text + "'");
  } else {
    throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
  }
}

// Flat key = value text, one setting per line; '#' starts a comment.
inline SweepConfig parse_config(std::string_view text) {
  SweepConfig cfg;
  int line_number = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_number);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + ": expected key = value, got '" + std::string(line) + "'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": missing key");
    apply_config_value(cfg, key, value, where);
  }
  return cfg;
}

enum class CellFlag { ok, defective, pole_contaminated };

inline const char* flag_name(CellFlag flag) {
  switch (flag) {
    case CellFlag::ok: return "ok";
    case CellFlag::defective: return "defective";
    case CellFlag::pole_contaminated: return "pole-contaminated";
  }
  return "?";
}

struct PadeCell {
  double value = std::numeric_limits<double>::quiet_NaN();
  double denominator_magnitude = std::numeric_limits<double>::quiet_NaN();
  CellFlag flag = CellFlag::ok;
};

struct ResultRow {
  int state = 0;
  double lambda = 0;
  double fourth_partial = 0;  // series truncated at order min(4, K)
  std::vector<PadeCell> cells;  // parallel to SweepConfig::pade
  double reference = 0;         // closed-form benchmark, CSV column "eq13"
  std::optional<double> oracle;
  std::optional<bool> oracle_converged;
  double max_discrepancy = 0;
};

namespace detail {

// One state's worth of rows in the chosen scalar type. Per-cell trouble turns
// into flags, never into an aborted sweep.
template <class S>
void sweep_state(const SweepConfig& cfg, int n, const std::vector<double>& lambdas,
                 std::vector<ResultRow>& rows) {
  ModelSpec spec;
  spec.omega = cfg.omega;
  spec.state = n;
  spec.cubic = cfg.cubic;
  spec.max_order = cfg.order;
  spec.mode = cfg.precision;
  const SeriesResult<S> series = compute_series<S>(spec);

  std::vector<std::optional<PadeApproximant<S>>> approximants;
  approximants.reserve(cfg.pade.size());
  for (const PadeOrders& po : cfg.pade) {
    try {
      approximants.emplace_back(build_pade(series.energy, po.den, po.num));
    } catch (const DefectiveApproximant&) {
      approximants.emplace_back(std::nullopt);
    }
  }

  const double omega = to_double(cfg.omega);
  std::vector<double> rspt;
  if (cfg.oracle == OracleMode::rspt || cfg.oracle == OracleMode::both)
    rspt = rspt_coefficients(n, omega, cfg.cubic, cfg.order,
                             std::max(64, n + 3 * cfg.order + 10));

  const int fourth = std::min(4, cfg.order);
  for (double lambda : lambdas) {
    ResultRow row;
    row.state = n;
    row.lambda = lambda;
    row.fourth_partial = partial_sum(series.energy, lambda, fourth);
    row.reference = reference_fourth_order(n, omega, lambda);

    for (const auto& approx : approximants) {
      PadeCell cell;
      if (!approx) {
        cell.flag = CellFlag::defective;
      } else {
        try {
          const PadeEvaluation eval = evaluate_pade(*approx, lambda);
          cell.value = eval.value;
          cell.denominator_magnitude = eval.denominator_magnitude;
          cell.flag = eval.denominator_magnitude < cfg.pole_threshold
                          ? CellFlag::pole_contaminated
                          : CellFlag::ok;
        } catch (const PoleAtEvaluationPoint&) {
          cell.denominator_magnitude = 0.0;
          cell.flag = CellFlag::pole_contaminated;
        }
      }
      row.cells.push_back(cell);
    }

    std::vector<double> estimates{row.fourth_partial};
    for (const PadeCell& cell : row.cells)
      if (std::isfinite(cell.value)) estimates.push_back(cell.value);
    if (cfg.oracle == OracleMode::variational || cfg.oracle == OracleMode::both) {
      const ConvergedEnergy plateau = converged_energy(n, omega, lambda, cfg.cubic, 1e-8);
      row.oracle = plateau.value;
      row.oracle_converged = plateau.converged;
      estimates.push_back(plateau.value);
    }
    if (cfg.oracle == OracleMode::rspt || cfg.oracle == OracleMode::both) {
      double acc = 0.0;
      for (int k = cfg.order; k >= 0; --k) acc = acc * lambda + rspt[k];
      if (cfg.oracle == OracleMode::rspt) {
        row.oracle = acc;
        row.oracle_converged = true;  // a fixed truncation has no plateau to miss
      }
      estimates.push_back(acc);
    }

    double disc = 0.0;
    for (size_t i = 0; i < estimates.size(); ++i)
      for (size_t j = i + 1; j < estimates.size(); ++j)
        disc = std::max(disc, std::fabs(estimates[i] - estimates[j]));
    row.max_discrepancy = disc;
    rows.push_back(std::move(row));
  }
}

}  // namespace detail

// Full grid in row order (state, lambda); the series and approximants are
// built once per state and reused across the lambda grid.
inline std::vector<ResultRow> run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<int> states = cfg.states;
  std::vector<double> lambdas = cfg.lambdas;
  detail::sort_unique(states);
  detail::sort_unique(lambdas);

  std::vector<ResultRow> rows;
  rows.reserve(states.size() * lambdas.size());
  for (int n : states) {
    if (cfg.precision == Arithmetic::exact_rational)
      detail::sweep_state<Rational>(cfg, n, lambdas, rows);
    else
      detail::sweep_state<QuadFloat>(cfg, n, lambdas, rows);
  }
  return rows;
}

// 0 = clean, 2 = at least one flagged cell. (Config errors exit 1 upstream.)
inline int exit_code_for(const std::vector<ResultRow>& rows) {
  for (const ResultRow& row : rows)
    for (const PadeCell& cell : row.cells)
      if (cell.flag != CellFlag::ok) return 2;
  return 0;
}

namespace detail {

inline std::string format(const char* spec, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), spec, value);
  return buffer;
}

inline std::string pade_label(const PadeOrders& po) {
  return std::to_string(po.den) + "_" + std::to_string(po.num);
}

inline bool oracle_note_applies(const SweepConfig& cfg) {
  return cfg.cubic &&
         (cfg.oracle == OracleMode::variational || cfg.oracle == OracleMode::both);
}

}  // namespace detail

// Machine format: one header, LF line endings, '.' decimal separator, 17
// significant digits so every double round-trips. The benchmark column keeps
// its legacy wire name "eq13".
inline std::string render_csv(const std::vector<ResultRow>& rows, const SweepConfig& cfg) {
  std::string out = "n,lambda,E4";
  for (const PadeOrders& po : cfg.pade) out += ",E_" + detail::pade_label(po);
  for (const PadeOrders& po : cfg.pade) out += ",flag_" + detail::pade_label(po);
  out += ",eq13,oracle,oracle_converged,max_disc\n";
  for (const ResultRow& row : rows) {
    out += std::to_string(row.state);
    out += ',' + detail::format("%.17g", row.lambda);
    out += ',' + detail::format("%.17g", row.fourth_partial);
    for (const PadeCell& cell : row.cells) out += ',' + detail::format("%.17g", cell.value);
    for (const PadeCell& cell : row.cells) out += std::string(",") + flag_name(cell.flag);
    out += ',' + detail::format("%.17g", row.reference);
    out += ',';
    if (row.oracle) out += detail::format("%.17g", *row.oracle);
    out += ',';
    if (row.oracle_converged) out += *row.oracle_converged ? "true" : "false";
    out += ',' + detail::format("%.17g", row.max_discrepancy);
    out += '\n';
  }
  return out;
}

// Human format: six decimals (glibc rounds the binary value correctly, ties to
// even). A trailing note flags that plateau values are not variational bounds
// whenever the cubic term is on and oracle values are present.
inline std::string render_table(const std::vector<ResultRow>& rows, const SweepConfig& cfg) {
  std::string out;
  char line[512];
  std::string header = "  n    lambda           E4";
  for (const PadeOrders& po : cfg.pade) {
    std::string name = "E[" + std::to_string(po.den) + "," + std::to_string(po.num) + "]";
    std::snprintf(line, sizeof(line), " %12s %-18s", name.c_str(), "flag");
    header += line;
  }
  header += "        E_ref       oracle conv   max_disc\n";
  out += header;
  for (const ResultRow& row : rows) {
    std::snprintf(line, sizeof(line), "%3d %9.6g %12.6f", row.state, row.lambda,
                  row.fourth_partial);
    out += line;
    for (const PadeCell& cell : row.cells) {
      std::snprintf(line, sizeof(line), " %12.6f %-18s", cell.value, flag_name(cell.flag));
      out += line;
    }
    std::snprintf(line, sizeof(line), " %12.6f", row.reference);
    out += line;
    if (row.oracle)
      std::snprintf(line, sizeof(line), " %12.6f %-4s", *row.oracle,
                    row.oracle_converged && *row.oracle_converged ? "yes" : "no");
    else
      std::snprintf(line, sizeof(line), " %12s %-4s", "-", "-");
    out += line;
    std::snprintf(line, sizeof(line), " %10.2e\n", row.max_discrepancy);
    out += line;
  }
  if (detail::oracle_note_applies(cfg))
    out += "note: oracle values are plateau estimates, not variational bounds "
           "(the cubic term makes the potential unbounded below)\n";
  return out;
}

inline std::string render(const std::vector<ResultRow>& rows, const SweepConfig& cfg) {
  return cfg.format == OutputFormat::csv ? render_csv(rows, cfg) : render_table(rows, cfg);
}

// Exact coefficient export, one row per (state, order). Rational mode only:
// the whole point of the export is exactness.
inline std::string render_series_csv(const SweepConfig& cfg) {
  // Only the fields the export reads are validated; the Pade and lambda grids
  // play no part here.
  if (cfg.omega <= 0) throw ConfigError("omega must be positive");
  if (cfg.states.empty()) throw ConfigError("states list is empty");
  if (cfg.order < 1) throw ConfigError("order must be at least 1");
  for (int n : cfg.states)
    if (n < 0) throw ConfigError("states must be non-negative");
  if (cfg.precision != Arithmetic::exact_rational)
    throw ConfigError("series export requires precision = rational");
  std::vector<int> states = cfg.states;
  detail::sort_unique(states);
  std::string out = "n,k,numerator,denominator\n";
  for (int n : states) {
    ModelSpec spec;
    spec.omega = cfg.omega;
    spec.state = n;
    spec.cubic = cfg.cubic;
    spec.max_order = cfg.order;
    const SeriesResult<Rational> series = compute_series<Rational>(spec);
    for (int k = 0; k <= series.energy.order(); ++k) {
      const Rational& c = series.energy.at(k);
      out += std::to_string(n) + "," + std::to_string(k) + "," + numerator(c).str() + "," +
             denominator(c).str() + "\n";
    }
  }
  return out;
}

}  // namespace hvp
