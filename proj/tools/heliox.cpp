// heliox: ground-state energies and entanglement entropies of two-electron
// atoms from the command line.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heliox/cli/commands.hpp"

namespace {

using namespace heliox;
using namespace heliox::cli;

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string config;
  std::string target;
  std::string Z;
  int omega = 0;
  double mu = 0;
  double R = 0;
  int n_m = 0;
  int l_m = 0;
  double tol_S = 0;
  double tol_L = 0;
  std::string format;
  std::string out;
  bool allow_high_omega = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "flat key=value file; flags override it");
  sub->add_option("--Z", f.Z, "nuclear charge(s): 2 or 1,2,3 or 1.0:5.0:0.1");
  sub->add_option("--omega", f.omega, "expansion order (n+m+p <= omega)");
  sub->add_option("--mu", f.mu, "fixed exponent; skips the optimisation");
  sub->add_option("--R", f.R, "box edge in bohr");
  sub->add_option("--nm", f.n_m, "finest grid interval count");
  sub->add_option("--lmax", f.l_m, "highest partial wave");
  sub->add_option("--tol-s", f.tol_S, "ladder tolerance on S (bits)");
  sub->add_option("--tol-l", f.tol_L, "ladder tolerance on L");
  sub->add_option("--format", f.format, "csv, json or text");
  sub->add_option("--out", f.out, "output file (default: standard output)");
  sub->add_flag("--allow-high-omega", f.allow_high_omega,
                "permit omega above the default cap of 12");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool given(const CLI::App* sub, const char* name) { return sub->count(name) > 0; }

RunManifest build_manifest(const CLI::App* sub, Command command, const Flags& f) {
  RunManifest m;
  if (given(sub, "--config")) m = parse_config(read_file(f.config));
  m.command = command;
  if (given(sub, "--Z")) m.Z = parse_charges(f.Z);
  if (given(sub, "--omega")) m.omega = f.omega;
  if (given(sub, "--mu")) m.mu = f.mu;
  if (given(sub, "--R")) m.R = f.R;
  if (given(sub, "--nm")) m.n_m = f.n_m;
  if (given(sub, "--lmax")) m.l_m = f.l_m;
  if (given(sub, "--tol-s")) m.tol_S = f.tol_S;
  if (given(sub, "--tol-l")) m.tol_L = f.tol_L;
  if (given(sub, "--format")) m.format = parse_format(f.format);
  if (given(sub, "--out")) m.out = f.out;
  if (given(sub, "--allow-high-omega")) m.allow_high_omega = true;
  if (command == Command::reproduce) m.target = f.target;
  validate(m);
  return m;
}

void write_output(const RunManifest& m, const std::string& text) {
  if (m.out.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(m.out, std::ios::binary);
  if (!out) throw UsageError("cannot open output file '" + m.out + "'");
  out << text;
  if (!out) throw UsageError("failed writing '" + m.out + "'");
}

std::string run(const RunManifest& m) {
  if (m.command == Command::reproduce) {
    const OutputFormat format = m.format.value_or(OutputFormat::text);
    if (m.target == "table1") return emit_tables(reproduce_table1(), format);
    if (m.target == "table2") return emit_tables(reproduce_table2(), format);
    if (m.target == "table3") return emit_tables(reproduce_table3(), format);
    if (m.target == "table5") return emit_tables(reproduce_table5(m), format);
    if (m.target == "fig1")
      return emit_sweep(run_sweep(fig1_manifest(m)), format);
    throw UsageError("unknown table id '" + m.target +
                     "' (expected table1, table2, table3, table5 or fig1)");
  }

  if (const auto warning = check_omega(m)) std::cerr << *warning << '\n';
  const OutputFormat format = m.format.value_or(OutputFormat::csv);
  switch (m.command) {
    case Command::energy: return emit_records(run_energy(m), format);
    case Command::entropy: return emit_records(run_entropy(m), format);
    case Command::sweep: return emit_sweep(run_sweep(m), format);
    case Command::reproduce: break;
  }
  return {};
}

void print_ladder(const std::vector<LadderRecord>& ladder) {
  std::cerr << "R,n_m,l_m,S,L,deficit\n";
  for (const auto& r : ladder)
    std::cerr << format_shortest(r.R) << ',' << r.n_m << ',' << r.l_m << ','
              << format_shortest(r.S) << ',' << format_shortest(r.L) << ','
              << format_shortest(r.deficit) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energies and entanglement entropies of helium-like atoms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Flags flags;
  auto* energy = app.add_subcommand("energy", "variational ground-state energy E(Z, omega)");
  auto* entropy = app.add_subcommand("entropy", "converged von Neumann and linear entropies");
  auto* sweep = app.add_subcommand("sweep", "entropies over a list or range of Z");
  auto* reproduce = app.add_subcommand("reproduce", "regenerate a reference table");
  for (auto* sub : {energy, entropy, sweep, reproduce}) add_common(sub, flags);
  reproduce->add_option("target", flags.target, "table1, table2, table3, table5 or fig1")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const Command command = parse_command(sub->get_name());
  try {
    const RunManifest m = build_manifest(sub, command, flags);
    write_output(m, run(m));
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "heliox: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConvergenceFailure& e) {
    std::cerr << "heliox: " << e.what() << '\n';
    print_ladder(e.ladder());
    return kExitNumerical;
  } catch (const NumericalFailure& e) {
    std::cerr << "heliox: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "heliox: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "heliox: " << e.what() << '\n';
    return kExitNumerical;
  }
}
