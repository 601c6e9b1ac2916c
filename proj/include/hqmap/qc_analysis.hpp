#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "hqmap/harmonic_extension.hpp"

namespace hqmap {

/// Polar sampling grid: every radius is combined with `angles` equally spaced
/// angles starting at 0.
struct PolarGrid {
  std::vector<double> radii;
  std::size_t angles = 64;

  std::size_t size() const { return radii.size() * angles; }
  Complex point(std::size_t i) const;
};

/// Radii {0} + {1 - 2^-j, j = 1..levels} + the boundary ring r = 1.
PolarGrid boundary_approaching_grid(int levels = 12, std::size_t angles = 256);

struct GridSample {
  Complex z;
  double k = 0.0;           // |f_zbar| / |f_z|
  double jacobian = 0.0;    // |f_z|^2 - |f_zbar|^2
  double norm = 0.0;        // |f_z| + |f_zbar|
  double tangential = 0.0;  // |d/dphi f(r e^{i phi})|
};

struct DilatationReport {
  std::vector<GridSample> samples;
  double k_sup = 0.0;
  Complex k_argmax;
  /// (1 + k_sup) / (1 - k_sup); infinite when k_sup >= 1 - tol.
  double K = 1.0;
  bool quasiconformal = true;
  double J_min = 0.0;
  /// J > 0 at every grid point.
  bool sense_preserving = true;
  /// max over the grid of (|f_z| + |f_zbar|)^2 - K J, relative to |Df|^2.
  double distortion_excess = 0.0;
  bool distortion_holds = true;
  std::optional<double> user_K;
  bool user_K_holds = true;
  double tangential_max = 0.0;
  double norm_max = 0.0;
};

/// Dilatation, Jacobian and distortion inequality over the grid. A supplied
/// user_K is validated against the same inequality.
DilatationReport dilatation_field(const HarmonicMap& map, const PolarGrid& grid,
                                  std::optional<double> user_K = std::nullopt, double tol = 1e-9);

struct NormalizationReport {
  std::array<Complex, 3> points{};   // f(1), f(e^{2pi i/3}), f(e^{4pi i/3})
  std::array<Complex, 3> anchors{};  // w_k = g(s_0 + k l/3)
  std::array<double, 3> arcs{};
  double max_deviation = 0.0;        // max of arc and anchor errors, relative to l
  bool pass = false;
};

/// The anchor w_0 = g(s_0) defaults to the rightmost point of the target.
/// Passes when f(e^{2pi ik/3}) = w_k and every arc has length l/3.
NormalizationReport normalization_check(const HarmonicMap& map, std::optional<double> anchor_arclength = std::nullopt,
                                        double tol = 1e-6);

/// Precomposes with the disk automorphism sending e^{2pi ik/3} to the preimages
/// of the equal-arc points w_k, and re-analyzes at the same N.
/// Throws InputError when the sampled correspondence is not injective.
HarmonicMap renormalize(const HarmonicMap& map, std::optional<double> anchor_arclength = std::nullopt);

struct LipschitzReport {
  double sup = 0.0;
  Complex z1;
  Complex z2;
  std::size_t pairs = 0;
  /// max grid |d/dphi f| times K (the mean value route).
  double tangential_max = 0.0;
  double mean_value_bound = 0.0;
};

/// Boundary chords between 256 boundary points, plus short steps of length
/// `step` in 64 directions from every point of the grid, kept inside the disk.
std::vector<std::pair<Complex, Complex>> default_lipschitz_pairs(const PolarGrid& grid, double step = 1e-4);

/// sup |f(z1) - f(z2)| / |z1 - z2| over the pairs. K feeds the mean value route.
LipschitzReport empirical_lipschitz(const HarmonicMap& map, const std::vector<std::pair<Complex, Complex>>& pairs,
                                    const PolarGrid& grid, double K);

struct HeinzReport {
  double min_norm = 0.0;
  double delta = 0.0;      // dist(f(0), boundary)
  double threshold = 0.0;  // delta / 4
  double margin = 0.0;
  bool pass = false;
};

/// min |Df| >= dist(f(0), boundary)/4 over the grid points inside the open
/// disk. Throws PreconditionError
/// for a nonconvex target.
HeinzReport heinz_lower_check(const HarmonicMap& map, const PolarGrid& grid);

struct JacobianLowerReport {
  double J_min = 0.0;
  double kappa = 0.0;      // min |Psi'|
  double delta = 0.0;
  double threshold = 0.0;  // kappa * delta / 2
  double margin = 0.0;
  bool pass = false;
};

/// min J >= kappa delta / 2 over the grid points inside the open disk. Throws
/// PreconditionError for a nonconvex target.
JacobianLowerReport jacobian_lower_check(const HarmonicMap& map, const PolarGrid& grid);

struct CriterionOptions {
  double log_threshold = 10.0;
  double hilbert_threshold = 1e4;
  std::size_t grid_angles = 256;
  int grid_levels = 12;
};

struct CriterionReport {
  double log_dF_sup = 0.0;       // max |log |Psi'||
  double hilbert_sup = 0.0;      // max |H(Psi')|
  double log_dF_sup_half = 0.0;  // same on every other sample
  double hilbert_sup_half = 0.0;
  bool predicted_qc = false;
  double measured_k_sup = 0.0;
  bool measured_qc = false;
  bool consistent = false;
};

/// Classifies the boundary data as q.c. iff both sup proxies stay below the
/// thresholds, then compares with the measured sup k on a boundary-approaching
/// grid (q.c. when sup k < 1 - 1e-3). Throws PreconditionError for a nonconvex
/// target.
CriterionReport convex_qc_criterion(const BoundaryMap& boundary, const CriterionOptions& options = {});

}  // namespace hqmap
