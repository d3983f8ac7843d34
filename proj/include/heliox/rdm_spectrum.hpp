#pragma once

// Occupation numbers of the one-electron reduced density matrix.
//
// Each partial-wave kernel f_l is sampled on the grid r_i = i dr,
// i = 0..n_m, dr = R/n_m, as M_ij = dr f_l(r_i, r_j) (plain rectangle
// weights). Its eigenvalues k_nl give lambda_nl = (4 pi k_nl / (2l+1))^2,
// each (2l+1)-fold degenerate, and from those
//
//   S = -sum (2l+1) lambda log2 lambda,   L = 1 - sum (2l+1) lambda^2.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "heliox/basis.hpp"
#include "heliox/error.hpp"
#include "heliox/linalg.hpp"
#include "heliox/parallel.hpp"
#include "heliox/schmidt_kernel.hpp"

namespace heliox {

/// Square box [0, R]^2 sampled at n_m + 1 points per side.
struct GridSpec {
  double R = 10;
  int n_m = 600;

  double dr() const { return R / n_m; }
  std::size_t points() const { return static_cast<std::size_t>(n_m) + 1; }

  void validate() const {
    if (!(R > 0) || !std::isfinite(R))
      throw std::invalid_argument("GridSpec: R must be positive");
    if (n_m < 1) throw std::invalid_argument("GridSpec: n_m must be >= 1");
  }
};

/// Occupation numbers below this are treated as discretisation noise.
inline constexpr double kLambdaCutoff = 1e-16;

struct Occupation {
  int n = 0;  // radial index, 0 = most occupied in its partial wave
  int l = 0;
  double lambda = 0;
  double k = 0;  // signed kernel eigenvalue
};

/// Retained occupations, ordered by (l, n).
struct OccupationSpectrum {
  std::vector<Occupation> entries;

  /// sum (2l+1) lambda
  double normalization() const {
    double sum = 0;
    for (const auto& e : entries) sum += (2 * e.l + 1) * e.lambda;
    return sum;
  }
  double deficit() const { return 1 - normalization(); }

  int lmax() const {
    int l = -1;
    for (const auto& e : entries) l = std::max(l, e.l);
    return l;
  }

  /// Partial waves l <= l_m only.
  OccupationSpectrum truncated(int l_m) const {
    OccupationSpectrum out;
    for (const auto& e : entries)
      if (e.l <= l_m) out.entries.push_back(e);
    return out;
  }
};

/// One rung of a convergence ladder.
struct LadderRecord {
  double R = 0;
  int n_m = 0;
  int l_m = 0;
  double S = 0;
  double L = 0;
  double deficit = 0;
};

struct EntropyResult {
  double S = 0;  // bits
  double L = 0;
  OccupationSpectrum spectrum;
  std::vector<LadderRecord> ladder;

  double deficit() const { return spectrum.deficit(); }
};

/// Ladder exhausted before two successive rungs agreed.
class ConvergenceFailure : public NumericalFailure {
 public:
  ConvergenceFailure(std::vector<LadderRecord> ladder, const std::string& what)
      : NumericalFailure(what), ladder_(std::move(ladder)) {}

  const std::vector<LadderRecord>& ladder() const noexcept { return ladder_; }
  /// The last two rungs (fewer if the ladder was shorter).
  std::vector<LadderRecord> last_two() const {
    const auto first = ladder_.size() > 2 ? ladder_.end() - 2 : ladder_.begin();
    return {first, ladder_.end()};
  }

 private:
  std::vector<LadderRecord> ladder_;
};

/// Nyström matrices M^(l) for l = 0..lmax, sampled in a single pass over the
/// grid. Rows are distributed over the worker pool.
inline std::vector<linalg::SymmetricMatrix<double>> build_kernel_matrices(
    int lmax, const GridSpec& grid, const HylleraasExpansion<double>& state,
    int nodes = kDefaultKernelNodes) {
  grid.validate();
  const KernelEvaluator prototype(state, lmax, nodes);
  const std::size_t dim = grid.points();
  const double dr = grid.dr();
  std::vector<linalg::SymmetricMatrix<double>> out;
  out.reserve(static_cast<std::size_t>(lmax) + 1);
  for (int l = 0; l <= lmax; ++l) out.emplace_back(dim);

  parallel_for(dim, [&](std::size_t i) {
    KernelEvaluator eval = prototype;
    std::vector<double> values(static_cast<std::size_t>(lmax) + 1);
    for (std::size_t j = 0; j <= i; ++j) {
      eval.evaluate(dr * static_cast<double>(i), dr * static_cast<double>(j),
                    values.data());
      for (int l = 0; l <= lmax; ++l) out[l].set(i, j, dr * values[l]);
    }
  });
  return out;
}

/// M^(l) through the requested backend.
inline linalg::SymmetricMatrix<double> build_kernel_matrix(
    int l, const GridSpec& grid, const HylleraasExpansion<double>& state,
    KernelBackend backend = KernelBackend::quadrature, int nodes = kDefaultKernelNodes) {
  grid.validate();
  if (backend == KernelBackend::quadrature) {
    // single-l pass; cheaper than sampling every l up to this one
    const std::size_t dim = grid.points();
    const double dr = grid.dr();
    linalg::SymmetricMatrix<double> m(dim);
    const RadialKernel kernel(l, state, backend, nodes);
    parallel_for(dim, [&](std::size_t i) {
      for (std::size_t j = 0; j <= i; ++j)
        m.set(i, j, dr * kernel(dr * static_cast<double>(i), dr * static_cast<double>(j)));
    });
    return m;
  }
  const std::size_t dim = grid.points();
  const double dr = grid.dr();
  linalg::SymmetricMatrix<double> m(dim);
  parallel_for(dim, [&](std::size_t i) {
    for (std::size_t j = 0; j <= i; ++j)
      m.set(i, j,
            dr * kernel_value_analytic(l, state, dr * static_cast<double>(i),
                                       dr * static_cast<double>(j)));
  });
  return m;
}

/// Kernel eigenvalues mapped to occupation numbers, descending in lambda;
/// entries below kLambdaCutoff are dropped.
inline std::vector<Occupation> occupations_from_kernel(
    const linalg::SymmetricMatrix<double>& m, int l) {
  if (l < 0) throw std::invalid_argument("occupations_from_kernel: l must be >= 0");
  const auto ks = linalg::sym_eigvals(m);
  std::vector<Occupation> out;
  const double factor = 4 * std::numbers::pi / (2 * l + 1);
  for (double k : ks) {
    const double a = factor * k;
    const double lambda = a * a;
    if (lambda >= kLambdaCutoff) out.push_back({0, l, lambda, k});
  }
  std::stable_sort(out.begin(), out.end(), [](const Occupation& x, const Occupation& y) {
    return x.lambda > y.lambda;
  });
  for (std::size_t n = 0; n < out.size(); ++n) out[n].n = static_cast<int>(n);
  return out;
}

/// Spectrum over l = 0..l_m on one grid. Each l is diagonalised
/// independently; the result is assembled in (l, n) order.
inline OccupationSpectrum spectrum_on_grid(const HylleraasExpansion<double>& state,
                                           const GridSpec& grid, int l_m,
                                           int nodes = kDefaultKernelNodes) {
  const auto matrices = build_kernel_matrices(l_m, grid, state, nodes);
  std::vector<std::vector<Occupation>> per_l(matrices.size());
  parallel_for(matrices.size(), [&](std::size_t l) {
    per_l[l] = occupations_from_kernel(matrices[l], static_cast<int>(l));
  });
  OccupationSpectrum spec;
  for (auto& occ : per_l) spec.entries.insert(spec.entries.end(), occ.begin(), occ.end());
  return spec;
}

/// S (bits) and L from a spectrum. Throws ConsistencyError when any
/// lambda exceeds one.
inline EntropyResult entropies(const OccupationSpectrum& spec) {
  if (spec.entries.empty()) throw std::invalid_argument("entropies: empty spectrum");
  double s = 0;
  double purity = 0;
  for (const auto& e : spec.entries) {
    if (e.lambda > 1 + 1e-9)
      throw ConsistencyError("entropies: occupation " + std::to_string(e.lambda) +
                             " exceeds 1 (unnormalised state?)");
    if (e.lambda < 0) throw ConsistencyError("entropies: negative occupation");
    const double weight = 2 * e.l + 1;
    if (e.lambda > 0) s -= weight * e.lambda * std::log2(e.lambda);
    purity += weight * e.lambda * e.lambda;
  }
  return {s, 1 - purity, spec, {}};
}

/// Entropies of the l <= l_m partial sums for l_m = 0..spec.lmax().
inline std::vector<LadderRecord> partial_wave_sums(const OccupationSpectrum& spec,
                                                   const GridSpec& grid) {
  std::vector<LadderRecord> out;
  for (int l_m = 0; l_m <= spec.lmax(); ++l_m) {
    const auto part = spec.truncated(l_m);
    const auto e = entropies(part);
    out.push_back({grid.R, grid.n_m, l_m, e.S, e.L, part.deficit()});
  }
  return out;
}

/// One ladder rung: box size, grid intervals, highest partial wave.
struct LadderStep {
  double R = 10;
  int n_m = 600;
  int l_m = 20;
};

struct ConvergeOptions {
  double tol_S = 1e-6;
  double tol_L = 1e-6;
  int nodes = kDefaultKernelNodes;
};

/// Walks the schedule until two successive rungs agree in both S and L.
/// Rungs sharing (R, n_m) reuse one set of kernel matrices, sampled up to the
/// largest l_m any of them needs.
inline EntropyResult converge(const HylleraasExpansion<double>& state,
                              const std::vector<LadderStep>& schedule,
                              const ConvergeOptions& options = {}) {
  if (schedule.empty()) throw std::invalid_argument("converge: empty schedule");
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    const auto& a = schedule[i - 1];
    const auto& b = schedule[i];
    if (b.R < a.R || (b.R == a.R && b.n_m < a.n_m) ||
        (b.R == a.R && b.n_m == a.n_m && b.l_m < a.l_m))
      throw std::invalid_argument("converge: schedule must be nondecreasing");
  }
  if (!(options.tol_S > 0 && options.tol_L > 0))
    throw std::invalid_argument("converge: tolerances must be > 0");

  std::vector<LadderRecord> ladder;
  OccupationSpectrum cached;
  GridSpec cached_grid{0, 0};
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto& step = schedule[i];
    const GridSpec grid{step.R, step.n_m};
    if (cached_grid.R != grid.R || cached_grid.n_m != grid.n_m) {
      int l_needed = step.l_m;
      for (std::size_t j = i; j < schedule.size(); ++j)
        if (schedule[j].R == step.R && schedule[j].n_m == step.n_m)
          l_needed = std::max(l_needed, schedule[j].l_m);
      cached = spectrum_on_grid(state, grid, l_needed, options.nodes);
      cached_grid = grid;
    }
    const auto part = cached.truncated(step.l_m);
    auto result = entropies(part);
    ladder.push_back({step.R, step.n_m, step.l_m, result.S, result.L, part.deficit()});

    if (ladder.size() >= 2) {
      const auto& prev = ladder[ladder.size() - 2];
      const auto& last = ladder.back();
      if (std::abs(last.S - prev.S) < options.tol_S &&
          std::abs(last.L - prev.L) < options.tol_L) {
        result.ladder = std::move(ladder);
        return result;
      }
    }
  }
  throw ConvergenceFailure(std::move(ladder),
                           "converge: ladder exhausted before S and L stabilised");
}

/// Box edges for a nuclear charge: {10, 12} bohr for helium scaled by 2/Z,
/// or {40, 50} bohr for the diffuse systems below Z = 1.5. Smaller boxes
/// truncate the density tail at the 1e-6 level in L while two successive
/// grid refinements already agree, so the ladder would stop early.
inline std::vector<double> default_box_sizes(double charge) {
  if (!(charge > 0)) throw std::invalid_argument("default_box_sizes: Z must be > 0");
  if (charge < 1.5) return {40, 50};
  return {10 * 2 / charge, 12 * 2 / charge};
}

/// Grid intervals refined at the first box.
inline std::vector<int> default_grid_sizes(double charge) {
  if (charge < 1.5) return {400, 800, 1600};
  return {300, 600, 1200};
}

/// Refines n_m at the first box, then grows the box at the finest n_m.
inline std::vector<LadderStep> default_schedule(double charge, int l_m = 20) {
  const auto boxes = default_box_sizes(charge);
  const auto grids = default_grid_sizes(charge);
  std::vector<LadderStep> out;
  for (int n_m : grids) out.push_back({boxes.front(), n_m, l_m});
  for (std::size_t b = 1; b < boxes.size(); ++b) out.push_back({boxes[b], grids.back(), l_m});
  return out;
}

/// Radial natural orbitals v_nl sampled on the grid for the `count` most
/// occupied n of one partial wave (unit norm in the discrete dr-weighted sense).
inline std::vector<std::vector<double>> radial_orbitals(
    const linalg::SymmetricMatrix<double>& m, const GridSpec& grid, std::size_t count) {
  const auto eig = linalg::sym_eig(m);
  std::vector<std::size_t> order(eig.values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(eig.values[a]) > std::abs(eig.values[b]);
  });
  std::vector<std::vector<double>> out;
  const double inv_sqrt_dr = 1 / std::sqrt(grid.dr());
  for (std::size_t c = 0; c < std::min(count, order.size()); ++c) {
    auto col = eig.vectors.column(order[c]);
    std::vector<double> v(col.begin(), col.end());
    for (double& x : v) x *= inv_sqrt_dr;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace heliox
