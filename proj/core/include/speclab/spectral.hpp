#pragma once

#include <span>
#include <utility>
#include <vector>

#include "speclab/channels.hpp"
#include "speclab/matrix.hpp"

namespace speclab {

/// Eigenvalues sorted by descending modulus together with the derived
/// quantities used throughout the analysis.
///
/// For channel spectra the leading eigenvalue z_1 is stored first and
/// excluded from `real_count` / `complex_count`, so that
/// 1 + real_count + complex_count == N^2. For raw matrices (e.g. real
/// Ginibre samples) `has_leading` is false and every eigenvalue is counted.
struct SpectrumReport {
  Index system_dim = 0;
  bool has_leading = true;
  std::vector<Complex> eigenvalues;
  std::vector<bool> real_flags;
  double gap = 0.0;     ///< 1 - |z_2|
  double radius = 0.0;  ///< |z_2|
  std::size_t real_count = 0;
  std::size_t complex_count = 0;
  bool degenerate = false;  ///< |z_2| > 1 - 1e-6

  /// Number of eigenvalues that take part in the statistics.
  std::size_t statistical_size() const noexcept { return real_count + complex_count; }
  /// Predicted relaxation rate -ln(1 - gap); +inf for a vanishing radius.
  double predicted_rate() const;
};

/// Spectrum of a superoperator. With `via_bloch` the eigenvalues are {1}
/// plus the real Schur spectrum of the contraction C and the real flags
/// are structural. Otherwise the complex eigensolver is used and values
/// with |Im z| < 1e-10 * |C| count as real.
SpectrumReport spectrum_report(const Superoperator& s, bool via_bloch = true);
SpectrumReport spectrum_report(const BlochForm& bloch);

/// Spectrum of a raw real matrix (no leading eigenvalue singled out).
SpectrumReport matrix_spectrum_report(const RealMatrix& a);

/// Binned density over [lo, hi) with `bins` equal bins.
struct DensityHistogram {
  std::vector<double> edges;
  std::vector<double> counts;
  std::vector<double> density;
  std::size_t samples = 0;  ///< number of spectra pooled
  std::size_t points = 0;   ///< number of eigenvalues pooled (before binning)

  std::size_t bins() const noexcept { return counts.size(); }
  double center(std::size_t b) const { return 0.5 * (edges.at(b) + edges.at(b + 1)); }
  double width(std::size_t b) const { return edges.at(b + 1) - edges.at(b); }
};

/// Density of r_M = |z| sqrt(M) over all non-leading eigenvalues (real ones
/// included). Normalised to a probability density over the pooled points,
/// so it integrates to 1 when no point falls outside [0, r_max).
DensityHistogram radial_density(std::span<const SpectrumReport> spectra, double M, std::size_t bins = 50,
                                double r_max = 1.25);

/// <N^R> / sqrt(n) with n the size of the matrix whose real eigenvalues are
/// counted (N^2 - 1 for channels).
double eta_ratio(std::span<const SpectrumReport> reports);

/// Expected number of real eigenvalues of an n x n real Ginibre matrix,
/// by adaptive Gauss-Kronrod quadrature after t = 1 - u^2.
double edelman_expected_real(long n);

/// Density of y_M = sqrt(M) Im z for complex (non-real) non-leading
/// eigenvalues inside the band |sqrt(M) Re z| < band_halfwidth, over
/// [-y_max, y_max). Normalised per pooled eigenvalue, per unit y_M and per
/// unit band width; the bulk value for a filled unit disk is 1/pi.
DensityHistogram imaginary_axis_density(std::span<const SpectrumReport> spectra, double M,
                                        double band_halfwidth = 0.1, std::size_t bins = 40, double y_max = 1.0);

/// Lower and upper bounds on the rescaled near-axis density at y. Both are
/// 0 at y = 0 (the limit).
std::pair<double, double> erfc_bounds(double y, double M);

/// Kolmogorov-Smirnov distance of a sample to uniform[0, 1].
double ks_distance_uniform(std::vector<double> values);

}  // namespace speclab
