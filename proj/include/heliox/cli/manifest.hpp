#pragma once

// Run manifest shared by the command-line front end and its config files.
// The config format is flat `key=value` text, one entry per line; `#` starts
// a comment. Keys are the long flag names without the leading dashes, so
// `omega=12` in a file and `--omega 12` on the command line are equivalent.

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace heliox::cli {

/// Bad flags, keys or values; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Command { energy, entropy, sweep, reproduce };
enum class OutputFormat { text, csv, json };

/// Lowest nuclear charge a sweep accepts; the two-electron ion stops binding
/// near Z = 0.911.
inline constexpr double kSweepFloor = 0.95;

struct RunManifest {
  Command command = Command::energy;
  std::vector<double> Z{2.0};
  int omega = 10;
  std::optional<double> mu;
  std::optional<double> R;
  std::optional<int> n_m;
  std::optional<int> l_m;
  double tol_S = 1e-6;
  double tol_L = 1e-6;
  std::optional<OutputFormat> format;  // unset: text for reproduce, csv otherwise
  std::string out;     // empty: standard output
  std::string target;  // reproduce id
  bool allow_high_omega = false;

  friend bool operator==(const RunManifest&, const RunManifest&) = default;
};

inline std::string_view to_string(Command c) {
  switch (c) {
    case Command::energy: return "energy";
    case Command::entropy: return "entropy";
    case Command::sweep: return "sweep";
    case Command::reproduce: return "reproduce";
  }
  return "";
}

inline std::string_view to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::text: return "text";
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
  }
  return "";
}

inline Command parse_command(std::string_view s) {
  if (s == "energy") return Command::energy;
  if (s == "entropy") return Command::entropy;
  if (s == "sweep") return Command::sweep;
  if (s == "reproduce") return Command::reproduce;
  throw UsageError("unknown command '" + std::string(s) + "'");
}

inline OutputFormat parse_format(std::string_view s) {
  if (s == "text") return OutputFormat::text;
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw UsageError("unknown format '" + std::string(s) + "' (expected csv, json or text)");
}

/// Shortest decimal text that reads back to the same double; locale-free.
inline std::string format_shortest(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s, std::string_view key) {
  double v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
    throw UsageError("invalid number '" + std::string(s) + "' for " + std::string(key));
  return v;
}

inline int parse_int(std::string_view s, std::string_view key) {
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw UsageError("invalid integer '" + std::string(s) + "' for " + std::string(key));
  return v;
}

inline bool parse_bool(std::string_view s, std::string_view key) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw UsageError("invalid boolean '" + std::string(s) + "' for " + std::string(key));
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// Comma-separated charges; an item `lo:hi:step` expands to an inclusive
/// range. Range points are snapped to a 1e-9 grid so 1.0:5.0:0.1 yields 1.3
/// rather than 1.3000000000000003.
inline std::vector<double> parse_charges(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item =
        trim(text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos));
    if (item.empty()) throw UsageError("empty entry in Z list '" + std::string(text) + "'");
    if (const auto c1 = item.find(':'); c1 != std::string_view::npos) {
      const auto c2 = item.find(':', c1 + 1);
      if (c2 == std::string_view::npos)
        throw UsageError("Z range must be lo:hi:step, got '" + std::string(item) + "'");
      const double lo = parse_double(trim(item.substr(0, c1)), "Z");
      const double hi = parse_double(trim(item.substr(c1 + 1, c2 - c1 - 1)), "Z");
      const double step = parse_double(trim(item.substr(c2 + 1)), "Z");
      if (!(step > 0) || hi < lo)
        throw UsageError("Z range needs lo <= hi and step > 0");
      const long count = std::lround(std::floor((hi - lo) / step + 1e-9));
      if (count > 100000) throw UsageError("Z range has too many points");
      for (long i = 0; i <= count; ++i)
        out.push_back(std::round((lo + static_cast<double>(i) * step) * 1e9) / 1e9);
    } else {
      out.push_back(parse_double(item, "Z"));
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

/// Throws UsageError on out-of-range fields.
inline void validate(const RunManifest& m) {
  if (m.Z.empty()) throw UsageError("at least one Z is required");
  for (double z : m.Z)
    if (!(z > 5.0 / 16.0) || z > 200)
      throw UsageError("Z = " + format_shortest(z) + " outside (0.3125, 200]");
  if (m.omega < 0 || m.omega > 20) throw UsageError("omega must lie in [0, 20]");
  if (m.mu && !(*m.mu > 0)) throw UsageError("mu must be > 0");
  if (m.R && !(*m.R > 0)) throw UsageError("R must be > 0");
  if (m.n_m && (*m.n_m < 4 || *m.n_m > 20000)) throw UsageError("nm must lie in [4, 20000]");
  if (m.l_m && (*m.l_m < 0 || *m.l_m > 60)) throw UsageError("lmax must lie in [0, 60]");
  if (!(m.tol_S > 0 && m.tol_S < 1) || !(m.tol_L > 0 && m.tol_L < 1))
    throw UsageError("tolerances must lie in (0, 1)");
  if (m.command == Command::sweep)
    for (double z : m.Z)
      if (z <= kSweepFloor)
        throw UsageError("sweep refuses Z = " + format_shortest(z) +
                         ": at or below " + format_shortest(kSweepFloor) +
                         " the two-electron ion is at risk of not binding (critical Z near 0.911)");
}

/// Applies one key=value pair.
inline void apply_setting(RunManifest& m, std::string_view key, std::string_view value) {
  if (key == "command") m.command = parse_command(value);
  else if (key == "Z") m.Z = parse_charges(value);
  else if (key == "omega") m.omega = parse_int(value, key);
  else if (key == "mu") m.mu = parse_double(value, key);
  else if (key == "R") m.R = parse_double(value, key);
  else if (key == "nm") m.n_m = parse_int(value, key);
  else if (key == "lmax") m.l_m = parse_int(value, key);
  else if (key == "tol-s") m.tol_S = parse_double(value, key);
  else if (key == "tol-l") m.tol_L = parse_double(value, key);
  else if (key == "format") m.format = parse_format(value);
  else if (key == "out") m.out = std::string(value);
  else if (key == "target") m.target = std::string(value);
  else if (key == "allow-high-omega") m.allow_high_omega = parse_bool(value, key);
  else throw UsageError("unknown config key '" + std::string(key) + "'");
}

/// Parses config text on top of `base`.
inline RunManifest parse_config(std::string_view text, RunManifest base = {}) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    apply_setting(base, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
  }
  return base;
}

/// Config text that parse_config maps back to an equal manifest.
inline std::string to_config(const RunManifest& m) {
  std::ostringstream out;
  out << "command=" << to_string(m.command) << '\n';
  out << "Z=";
  for (std::size_t i = 0; i < m.Z.size(); ++i)
    out << (i ? "," : "") << format_shortest(m.Z[i]);
  out << '\n';
  out << "omega=" << m.omega << '\n';
  if (m.mu) out << "mu=" << format_shortest(*m.mu) << '\n';
  if (m.R) out << "R=" << format_shortest(*m.R) << '\n';
  if (m.n_m) out << "nm=" << *m.n_m << '\n';
  if (m.l_m) out << "lmax=" << *m.l_m << '\n';
  out << "tol-s=" << format_shortest(m.tol_S) << '\n';
  out << "tol-l=" << format_shortest(m.tol_L) << '\n';
  if (m.format) out << "format=" << to_string(*m.format) << '\n';
  if (!m.out.empty()) out << "out=" << m.out << '\n';
  if (!m.target.empty()) out << "target=" << m.target << '\n';
  out << "allow-high-omega=" << (m.allow_high_omega ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace heliox::cli
