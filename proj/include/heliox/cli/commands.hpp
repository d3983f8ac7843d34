#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heliox/cli/manifest.hpp"
#include "heliox/parallel.hpp"
#include "heliox/rdm_spectrum.hpp"
#include "heliox/variational.hpp"
#include "heliox/version.hpp"

namespace heliox::cli {

/// Rescale constant between S and L quoted for Z = 5.
inline constexpr double kRescaleFactor = 6.856;

/// Fixed-point text with `decimals` digits after the point, rounded.
inline std::string fixed(double x, int decimals) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, decimals);
  std::string s(buf, r.ptr);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

inline std::string scientific(double x, int digits) {
  char buf[64];
  const auto r =
      std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, digits);
  return std::string(buf, r.ptr);
}

/// Decimal places resolved by an absolute uncertainty `delta`.
inline int decimals_for(double delta) {
  if (!(delta > 0)) return 12;
  return std::clamp(static_cast<int>(std::floor(-std::log10(delta) + 1e-9)), 0, 12);
}

/// Energies are converged well past this by the mu search (tolerance 1e-6 in
/// mu enters E quadratically).
inline constexpr int kEnergyDecimals = 10;

struct ResultRecord {
  Command command = Command::energy;
  double Z = 0;
  int omega = 0;
  double mu = 0;
  bool mu_optimized = true;
  double E = 0;
  bool has_entropy = false;
  double S = 0;
  double L = 0;
  double deficit = 0;
  double tol_S = 0;
  double tol_L = 0;
  std::vector<LadderRecord> ladder;
  double wall_time = 0;  // seconds
};

/// Quantity text at the precision the run actually resolved.
struct FormattedRecord {
  std::string Z, omega, mu, E, S, L, deficit, R, n_m, l_m;
};

inline FormattedRecord format_record(const ResultRecord& r) {
  FormattedRecord f;
  f.Z = format_shortest(r.Z);
  f.omega = std::to_string(r.omega);
  f.mu = r.mu_optimized ? fixed(r.mu, 6) : format_shortest(r.mu);
  f.E = fixed(r.E, kEnergyDecimals);
  if (r.has_entropy) {
    f.S = fixed(r.S, decimals_for(r.tol_S));
    f.L = fixed(r.L, decimals_for(r.tol_L));
    f.deficit = scientific(r.deficit, 2);
    const auto& last = r.ladder.back();
    f.R = format_shortest(last.R);
    f.n_m = std::to_string(last.n_m);
    f.l_m = std::to_string(last.l_m);
  }
  return f;
}

// --- computations -----------------------------------------------------------

/// Rejects omega above the default cap unless overridden; returns a warning
/// to print when the override is in effect.
inline std::optional<std::string> check_omega(const RunManifest& m) {
  if (m.omega <= kDefaultOmegaCap) return std::nullopt;
  if (!m.allow_high_omega)
    throw UsageError("omega = " + std::to_string(m.omega) + " exceeds the default cap of " +
                     std::to_string(kDefaultOmegaCap) +
                     "; pass --allow-high-omega to run it anyway");
  return "warning: omega = " + std::to_string(m.omega) + " above " +
         std::to_string(kDefaultOmegaCap) +
         " runs the overlap factorisation in quad precision and is slow";
}

inline GroundState<long double> ground_state(const ReducedProblem& problem, double charge,
                                             std::optional<double> mu) {
  if (mu) return problem.state(charge, *mu);
  return problem.optimize(charge, default_mu_search(charge));
}

inline ResultRecord energy_record(const ReducedProblem& problem, double charge,
                                  std::optional<double> mu) {
  const auto start = std::chrono::steady_clock::now();
  const auto gs = ground_state(problem, charge, mu);
  ResultRecord r;
  r.command = Command::energy;
  r.Z = charge;
  r.omega = problem.omega();
  r.mu = static_cast<double>(gs.mu);
  r.mu_optimized = !mu;
  r.E = static_cast<double>(gs.energy);
  r.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Ladder for one charge with the manifest's grid overrides applied: --R
/// replaces the box list, --nm sets the finest grid (refined from nm/4),
/// --lmax the highest partial wave.
inline std::vector<LadderStep> schedule_for(const RunManifest& m, double charge) {
  std::vector<double> boxes = m.R ? std::vector<double>{*m.R} : default_box_sizes(charge);
  std::vector<int> grids = default_grid_sizes(charge);
  if (m.n_m) {
    grids.clear();
    for (int n : {*m.n_m / 4, *m.n_m / 2, *m.n_m})
      if (n >= 1 && (grids.empty() || n > grids.back())) grids.push_back(n);
  }
  const int l_m = m.l_m.value_or(20);
  std::vector<LadderStep> out;
  for (int n : grids) out.push_back({boxes.front(), n, l_m});
  for (std::size_t b = 1; b < boxes.size(); ++b) out.push_back({boxes[b], grids.back(), l_m});
  return out;
}

inline ResultRecord entropy_record(const ReducedProblem& problem, double charge,
                                   const RunManifest& m,
                                   const std::vector<LadderStep>& schedule) {
  const auto start = std::chrono::steady_clock::now();
  const auto gs = ground_state(problem, charge, m.mu);
  const auto state = gs.expansion.template cast<double>();
  const auto result = converge(state, schedule, {m.tol_S, m.tol_L, kDefaultKernelNodes});
  ResultRecord r;
  r.command = m.command;
  r.Z = charge;
  r.omega = problem.omega();
  r.mu = static_cast<double>(gs.mu);
  r.mu_optimized = !m.mu;
  r.E = static_cast<double>(gs.energy);
  r.has_entropy = true;
  r.S = result.S;
  r.L = result.L;
  r.deficit = result.deficit();
  r.tol_S = m.tol_S;
  r.tol_L = m.tol_L;
  r.ladder = result.ladder;
  r.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Entropy runs for every charge as an independent job pool; records come
/// back in input order.
inline std::vector<ResultRecord> entropy_records(const RunManifest& m,
                                                 const std::vector<double>& charges) {
  const ReducedProblem problem(m.omega);
  std::vector<ResultRecord> out(charges.size());
  parallel_for(charges.size(), [&](std::size_t i) {
    out[i] = entropy_record(problem, charges[i], m, schedule_for(m, charges[i]));
  });
  return out;
}

inline std::vector<ResultRecord> run_energy(const RunManifest& m) {
  const ReducedProblem problem(m.omega);
  std::vector<ResultRecord> out;
  for (double z : m.Z) out.push_back(energy_record(problem, z, m.mu));
  return out;
}

inline std::vector<ResultRecord> run_entropy(const RunManifest& m) {
  return entropy_records(m, m.Z);
}

/// Sweep rows plus the Z = 5 run that fixes the empirical rescale factor.
struct SweepResult {
  std::vector<ResultRecord> rows;
  ResultRecord reference;  // Z = 5
  double factor() const { return reference.S / reference.L; }
};

inline SweepResult run_sweep(const RunManifest& m) {
  std::vector<double> charges = m.Z;
  auto five = std::find(charges.begin(), charges.end(), 5.0);
  const bool has_five = five != charges.end();
  if (!has_five) charges.push_back(5.0);
  auto records = entropy_records(m, charges);
  SweepResult out;
  out.reference = has_five ? records[static_cast<std::size_t>(five - charges.begin())]
                           : records.back();
  if (!has_five) records.pop_back();
  out.rows = std::move(records);
  return out;
}

// --- emission ---------------------------------------------------------------

namespace detail {

inline double as_number(const std::string& text) { return std::stod(text); }

inline std::string csv_line(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += fields[i];
  }
  return line + '\n';
}

/// Columns padded to their widest entry, two spaces apart.
inline std::string aligned(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) line += "  ";
      line += row[j];
      if (j + 1 < row.size()) line.append(width[j] - row[j].size(), ' ');
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + '\n';
  }
  return out;
}

inline std::string render(const std::vector<std::vector<std::string>>& rows,
                          OutputFormat format) {
  if (format == OutputFormat::text) return aligned(rows);
  std::string out;
  for (const auto& row : rows) out += csv_line(row);
  return out;
}

inline nlohmann::ordered_json ladder_json(const std::vector<LadderRecord>& ladder) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& rung : ladder)
    arr.push_back({{"R", rung.R},
                   {"n_m", rung.n_m},
                   {"l_m", rung.l_m},
                   {"S", rung.S},
                   {"L", rung.L},
                   {"deficit", rung.deficit}});
  return arr;
}

inline nlohmann::ordered_json record_json(const ResultRecord& r) {
  const auto f = format_record(r);
  nlohmann::ordered_json j;
  j["command"] = std::string(to_string(r.command));
  j["Z"] = r.Z;
  j["omega"] = r.omega;
  j["mu"] = as_number(f.mu);
  j["mu_optimized"] = r.mu_optimized;
  j["E"] = as_number(f.E);
  if (r.has_entropy) {
    j["S"] = as_number(f.S);
    j["L"] = as_number(f.L);
    j["deficit"] = as_number(f.deficit);
    j["ladder"] = ladder_json(r.ladder);
  }
  j["wall_time"] = r.wall_time;
  j["version"] = std::string(kVersion);
  return j;
}

}  // namespace detail

/// Energy and entropy records as csv, aligned text, or JSON. Wall time
/// appears in JSON only so that csv and text stay byte-identical between runs.
inline std::string emit_records(const std::vector<ResultRecord>& records,
                                OutputFormat format) {
  if (format == OutputFormat::json) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& r : records) arr.push_back(detail::record_json(r));
    return arr.dump(2) + '\n';
  }
  const bool entropy = !records.empty() && records.front().has_entropy;
  std::vector<std::vector<std::string>> rows;
  if (entropy)
    rows.push_back({"Z", "omega", "mu", "E", "S", "L", "deficit", "R", "n_m", "l_m"});
  else
    rows.push_back({"Z", "omega", "mu", "E"});
  for (const auto& r : records) {
    const auto f = format_record(r);
    if (entropy)
      rows.push_back({f.Z, f.omega, f.mu, f.E, f.S, f.L, f.deficit, f.R, f.n_m, f.l_m});
    else
      rows.push_back({f.Z, f.omega, f.mu, f.E});
  }
  return detail::render(rows, format);
}

inline std::string emit_sweep(const SweepResult& sweep, OutputFormat format) {
  const double factor = sweep.factor();
  const auto& ref = sweep.reference;
  // first-order error of S/L at Z = 5
  const double factor_err = (ref.tol_S + factor * ref.tol_L) / ref.L;
  const int factor_dec = decimals_for(factor_err);

  if (format == OutputFormat::json) {
    nlohmann::ordered_json j;
    j["rescale_constant"] = kRescaleFactor;
    j["rescale_factor_Z5"] = detail::as_number(fixed(factor, factor_dec));
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : sweep.rows) {
      auto row = detail::record_json(r);
      const int ratio_dec = decimals_for((r.tol_S + (r.S / r.L) * r.tol_L) / r.L);
      row["L_rescaled"] =
          detail::as_number(fixed(kRescaleFactor * r.L, decimals_for(kRescaleFactor * r.tol_L)));
      row["S_over_L"] = detail::as_number(fixed(r.S / r.L, ratio_dec));
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + '\n';
  }

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"Z", "omega", "mu", "E", "S", "L", "L_x6.856", "S_over_L", "factor_Z5",
                  "L_x_factor_Z5"});
  for (const auto& r : sweep.rows) {
    const auto f = format_record(r);
    const int ratio_dec = decimals_for((r.tol_S + (r.S / r.L) * r.tol_L) / r.L);
    const int scaled_dec = decimals_for(kRescaleFactor * r.tol_L);
    rows.push_back({f.Z, f.omega, f.mu, f.E, f.S, f.L, fixed(kRescaleFactor * r.L, scaled_dec),
                    fixed(r.S / r.L, ratio_dec), fixed(factor, factor_dec),
                    fixed(factor * r.L, decimals_for(factor * r.tol_L))});
  }
  return detail::render(rows, format);
}

// --- table reproduction -----------------------------------------------------

/// A labelled grid; empty cells are left blank.
struct GridTable {
  std::string name;
  std::string quantity;
  std::string row_key;
  std::string column_key;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> cells;

  GridTable(std::string n, std::string q, std::string rk, std::string ck,
            std::vector<std::string> r, std::vector<std::string> c)
      : name(std::move(n)), quantity(std::move(q)), row_key(std::move(rk)),
        column_key(std::move(ck)), rows(std::move(r)), columns(std::move(c)),
        cells(rows.size(), std::vector<std::string>(columns.size())) {}
};

inline std::string emit_tables(const std::vector<GridTable>& tables, OutputFormat format) {
  if (format == OutputFormat::json) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& t : tables) {
      nlohmann::ordered_json j;
      j["table"] = t.name;
      j["quantity"] = t.quantity;
      j["row_key"] = t.row_key;
      j["column_key"] = t.column_key;
      j["rows"] = t.rows;
      j["columns"] = t.columns;
      auto cells = nlohmann::ordered_json::array();
      for (const auto& row : t.cells) {
        auto out = nlohmann::ordered_json::array();
        for (const auto& c : row)
          out.push_back(c.empty() ? nlohmann::ordered_json(nullptr)
                                  : nlohmann::ordered_json(detail::as_number(c)));
        cells.push_back(std::move(out));
      }
      j["cells"] = std::move(cells);
      arr.push_back(std::move(j));
    }
    return arr.dump(2) + '\n';
  }
  if (format == OutputFormat::csv) {
    std::string out =
        detail::csv_line({"table", "quantity", "row_key", "row", "column_key", "column", "value"});
    for (const auto& t : tables)
      for (std::size_t i = 0; i < t.rows.size(); ++i)
        for (std::size_t j = 0; j < t.columns.size(); ++j)
          if (!t.cells[i][j].empty())
            out += detail::csv_line({t.name, t.quantity, t.row_key, t.rows[i], t.column_key,
                                     t.columns[j], t.cells[i][j]});
    return out;
  }
  std::string out;
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const auto& t = tables[k];
    if (k) out += '\n';
    out += t.name + ": " + t.quantity + '\n';
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header{""};
    for (const auto& c : t.columns) header.push_back(t.column_key + "=" + c);
    rows.push_back(std::move(header));
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      std::vector<std::string> row{t.row_key + "=" + t.rows[i]};
      row.insert(row.end(), t.cells[i].begin(), t.cells[i].end());
      rows.push_back(std::move(row));
    }
    out += detail::aligned(rows);
  }
  return out;
}

/// Ground-state energies on the (omega, Z) cells of the reference table.
inline std::vector<GridTable> reproduce_table1() {
  const std::vector<int> omegas{6, 8, 10, 12, 14};
  // highest charge tabulated for each order
  const std::map<int, int> last_z{{6, 5}, {8, 5}, {10, 3}, {12, 2}, {14, 1}};
  GridTable t("table1", "E (hartree)", "omega", "Z", {"6", "8", "10", "12", "14"},
              {"1", "2", "3", "4", "5"});
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const ReducedProblem problem(omegas[i]);
    for (int z = 1; z <= last_z.at(omegas[i]); ++z)
      t.cells[i][static_cast<std::size_t>(z - 1)] =
          fixed(energy_record(problem, z, std::nullopt).E, kEnergyDecimals);
  }
  return {t};
}

namespace detail {

inline HylleraasExpansion<double> helium_state(int omega) {
  return optimize_mu(2.0, omega).expansion.cast<double>();
}

}  // namespace detail

/// Linear entropy of helium: the (omega, R) grid at n_m = 1200, then the
/// (l_m, n_m) grid at R = 10 for omega = 14.
inline std::vector<GridTable> reproduce_table2() {
  const std::vector<int> omegas{6, 10, 14};
  const std::vector<double> boxes{7, 9, 10};
  GridTable by_box("table2", "L", "omega", "R", {"6", "10", "14"}, {"7", "9", "10"});
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const auto state = detail::helium_state(omegas[i]);
    for (std::size_t j = 0; j < boxes.size(); ++j) {
      const auto spec = spectrum_on_grid(state, {boxes[j], 1200}, 2);
      by_box.cells[i][j] = fixed(entropies(spec).L, 7);
    }
  }

  const std::vector<int> grids{300, 600, 1200};
  GridTable by_grid("table2", "L", "l_m", "n_m", {"0", "1", "2"}, {"300", "600", "1200"});
  const auto state = detail::helium_state(14);
  for (std::size_t j = 0; j < grids.size(); ++j) {
    const GridSpec grid{10, grids[j]};
    const auto sums = partial_wave_sums(spectrum_on_grid(state, grid, 2), grid);
    for (std::size_t i = 0; i < 3; ++i) by_grid.cells[i][j] = fixed(sums[i].L, 7);
  }
  return {by_box, by_grid};
}

/// Von Neumann entropy of helium on the (l_m, n_m) grid at R = 10, omega = 14.
inline std::vector<GridTable> reproduce_table3() {
  const std::vector<int> lms{0, 1, 2, 3, 4, 5, 10, 14, 18, 20};
  const std::vector<int> grids{300, 600, 1200};
  std::vector<std::string> row_labels;
  for (int l : lms) row_labels.push_back(std::to_string(l));
  GridTable t("table3", "S (bits)", "l_m", "n_m", row_labels, {"300", "600", "1200"});
  const auto state = detail::helium_state(14);
  for (std::size_t j = 0; j < grids.size(); ++j) {
    const GridSpec grid{10, grids[j]};
    const auto sums = partial_wave_sums(spectrum_on_grid(state, grid, 20), grid);
    for (std::size_t i = 0; i < lms.size(); ++i)
      t.cells[i][j] = fixed(sums[static_cast<std::size_t>(lms[i])].S, 7);
  }
  return {t};
}

/// Converged L and S for Z = 1..5 with the default ladders at the default
/// omega cap.
inline std::vector<GridTable> reproduce_table5(RunManifest m) {
  m.omega = kDefaultOmegaCap;
  GridTable t("table5", "entropy", "quantity", "Z", {"L", "S"}, {"1", "2", "3", "4", "5"});
  const auto records = entropy_records(m, {1, 2, 3, 4, 5});
  for (std::size_t j = 0; j < records.size(); ++j) {
    const auto f = format_record(records[j]);
    t.cells[0][j] = f.L;
    t.cells[1][j] = f.S;
  }
  return {t};
}

/// Charges 1.0, 1.1, ..., 5.0 for the S versus rescaled-L curve.
inline std::vector<double> fig1_charges() { return parse_charges("1.0:5.0:0.1"); }

inline RunManifest fig1_manifest(RunManifest m) {
  m.command = Command::sweep;
  m.omega = kDefaultOmegaCap;
  m.Z = fig1_charges();
  return m;
}

}  // namespace heliox::cli
