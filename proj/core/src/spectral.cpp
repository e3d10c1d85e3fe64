#include "speclab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

// Descending modulus; ties broken by real then imaginary part so the order
// never depends on solver output order.
bool modulus_order(const Complex& a, const Complex& b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

void sort_tail(SpectrumReport& r, std::size_t first) {
  std::vector<std::size_t> order(r.eigenvalues.size() - first);
  std::iota(order.begin(), order.end(), first);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return modulus_order(r.eigenvalues[a], r.eigenvalues[b]); });
  std::vector<Complex> values(r.eigenvalues.begin(), r.eigenvalues.begin() + static_cast<std::ptrdiff_t>(first));
  std::vector<bool> flags(r.real_flags.begin(), r.real_flags.begin() + static_cast<std::ptrdiff_t>(first));
  for (std::size_t i : order) {
    values.push_back(r.eigenvalues[i]);
    flags.push_back(r.real_flags[i]);
  }
  r.eigenvalues = std::move(values);
  r.real_flags = std::move(flags);
}

void finish_channel_report(SpectrumReport& r) {
  sort_tail(r, 1);
  r.real_count = 0;
  r.complex_count = 0;
  for (std::size_t i = 1; i < r.eigenvalues.size(); ++i) (r.real_flags[i] ? r.real_count : r.complex_count)++;
  r.radius = r.eigenvalues.size() > 1 ? std::abs(r.eigenvalues[1]) : 0.0;
  r.gap = std::clamp(1.0 - r.radius, 0.0, 1.0);
  r.degenerate = r.radius > 1.0 - 1e-6;
}

}  // namespace

double SpectrumReport::predicted_rate() const {
  if (radius <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(radius);
}

SpectrumReport spectrum_report(const BlochForm& bloch) {
  SpectrumReport r;
  r.system_dim = bloch.system_dim;
  r.has_leading = true;
  const auto inner = eig_real_schur(bloch.contraction);
  r.eigenvalues.reserve(inner.size() + 1);
  r.real_flags.reserve(inner.size() + 1);
  r.eigenvalues.emplace_back(1.0, 0.0);
  r.real_flags.push_back(true);
  for (const auto& e : inner) {
    r.eigenvalues.push_back(e.value);
    r.real_flags.push_back(e.exactly_real);
  }
  finish_channel_report(r);
  return r;
}

SpectrumReport spectrum_report(const Superoperator& s, bool via_bloch) {
  if (via_bloch) return spectrum_report(bloch_form(s));

  SpectrumReport r;
  r.system_dim = s.system_dim();
  r.has_leading = true;
  r.eigenvalues = eig_general(s.matrix());
  // The leading eigenvalue is the one closest to 1.
  auto lead = std::min_element(r.eigenvalues.begin(), r.eigenvalues.end(), [](const Complex& a, const Complex& b) {
    return std::abs(a - 1.0) < std::abs(b - 1.0);
  });
  std::iter_swap(r.eigenvalues.begin(), lead);
  const double threshold = 1e-10 * s.matrix().norm();
  r.real_flags.resize(r.eigenvalues.size());
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) {
    r.real_flags[i] = std::abs(r.eigenvalues[i].imag()) < threshold;
  }
  finish_channel_report(r);
  return r;
}

SpectrumReport matrix_spectrum_report(const RealMatrix& a) {
  SpectrumReport r;
  r.system_dim = a.rows();
  r.has_leading = false;
  for (const auto& e : eig_real_schur(a)) {
    r.eigenvalues.push_back(e.value);
    r.real_flags.push_back(e.exactly_real);
  }
  sort_tail(r, 0);
  for (bool flag : r.real_flags) (flag ? r.real_count : r.complex_count)++;
  r.radius = r.eigenvalues.empty() ? 0.0 : std::abs(r.eigenvalues.front());
  r.gap = std::clamp(1.0 - r.radius, 0.0, 1.0);
  return r;
}

DensityHistogram radial_density(std::span<const SpectrumReport> spectra, double M, std::size_t bins, double r_max) {
  if (spectra.empty()) throw PreconditionError("radial_density: no spectra");
  if (bins == 0 || !(r_max > 0.0) || !(M > 0.0)) throw PreconditionError("radial_density: bad binning");
  DensityHistogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = r_max * static_cast<double>(b) / static_cast<double>(bins);
  h.counts.assign(bins, 0.0);
  h.samples = spectra.size();
  const double scale = std::sqrt(M);
  const double width = r_max / static_cast<double>(bins);
  for (const auto& s : spectra) {
    for (std::size_t i = s.has_leading ? 1 : 0; i < s.eigenvalues.size(); ++i) {
      ++h.points;
      const double r = std::abs(s.eigenvalues[i]) * scale;
      const auto b = static_cast<std::size_t>(std::floor(r / width));
      if (b < bins) h.counts[b] += 1.0;
    }
  }
  if (h.points == 0) throw PreconditionError("radial_density: spectra contain no eigenvalues to pool");
  h.density.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) h.density[b] = h.counts[b] / (static_cast<double>(h.points) * width);
  return h;
}

double eta_ratio(std::span<const SpectrumReport> reports) {
  if (reports.empty()) throw PreconditionError("eta_ratio: no spectra");
  const std::size_t size = reports.front().statistical_size();
  if (size == 0) throw PreconditionError("eta_ratio: empty spectra");
  double total = 0.0;
  for (const auto& r : reports) {
    if (r.statistical_size() != size) throw DimensionError("eta_ratio: spectra of mixed dimension");
    total += static_cast<double>(r.real_count);
  }
  return total / static_cast<double>(reports.size()) / std::sqrt(static_cast<double>(size));
}

double edelman_expected_real(long n) {
  if (n < 1) throw PreconditionError("edelman_expected_real: n must be positive");
  if (n == 1) return 1.0;
  const double power = static_cast<double>(n - 1);
  // With t = cos^2(theta) both endpoint singularities cancel and the
  // integrand is smooth on [0, pi/2]:
  // g(theta) = 2 cos^2 (1 - cos^{2(n-1)}) / (sin^2 (1 + cos^2)).
  const auto integrand = [power](double theta) {
    const double s = std::sin(theta);
    const double s2 = s * s;
    if (s2 < 1e-300) return power;  // limit 2 * (n-1) / 2
    const double c2 = 1.0 - s2;
    const double one_minus_pow = -std::expm1(power * std::log1p(-s2));
    return 2.0 * c2 * (one_minus_pow / s2) / (1.0 + c2);
  };
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, std::numbers::pi / 2, 20, 1e-14, &error);
  if (!std::isfinite(value) || error > 1e-9) {
    std::ostringstream os;
    os << "edelman_expected_real: quadrature failed for n = " << n << " (error estimate " << error << ")";
    throw ConvergenceError(os.str());
  }
  return 1.0 + std::numbers::sqrt2 / std::numbers::pi * value;
}

DensityHistogram imaginary_axis_density(std::span<const SpectrumReport> spectra, double M, double band_halfwidth,
                                        std::size_t bins, double y_max) {
  if (spectra.empty()) throw PreconditionError("imaginary_axis_density: no spectra");
  if (bins == 0 || !(y_max > 0.0) || !(band_halfwidth > 0.0) || !(M > 0.0)) {
    throw PreconditionError("imaginary_axis_density: bad binning");
  }
  DensityHistogram h;
  const double width = 2.0 * y_max / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = -y_max + width * static_cast<double>(b);
  h.counts.assign(bins, 0.0);
  h.samples = spectra.size();
  const double scale = std::sqrt(M);
  std::size_t in_band = 0;
  for (const auto& s : spectra) {
    for (std::size_t i = s.has_leading ? 1 : 0; i < s.eigenvalues.size(); ++i) {
      ++h.points;
      if (s.real_flags[i]) continue;
      const double x = s.eigenvalues[i].real() * scale;
      const double y = s.eigenvalues[i].imag() * scale;
      if (std::abs(x) >= band_halfwidth) continue;
      const double pos = (y + y_max) / width;
      if (pos < 0.0) continue;
      const auto b = static_cast<std::size_t>(std::floor(pos));
      if (b >= bins) continue;
      h.counts[b] += 1.0;
      ++in_band;
    }
  }
  if (in_band == 0) throw PreconditionError("imaginary_axis_density: no complex eigenvalues in the band");
  h.density.resize(bins);
  const double norm = static_cast<double>(h.points) * width * 2.0 * band_halfwidth;
  for (std::size_t b = 0; b < bins; ++b) h.density[b] = h.counts[b] / norm;
  return h;
}

std::pair<double, double> erfc_bounds(double y, double M) {
  if (!(M > 0.0)) throw PreconditionError("erfc_bounds: M must be positive");
  if (y == 0.0) return {0.0, 0.0};
  const double my2 = M * y * y;
  const double lower = (1.0 / std::numbers::pi) * 2.0 / (1.0 + std::sqrt(1.0 + 1.0 / my2));
  const double upper = (1.0 / std::numbers::pi) * 2.0 / (1.0 + std::sqrt(1.0 + (2.0 / std::numbers::pi) / my2));
  return {lower, upper};
}

double ks_distance_uniform(std::vector<double> values) {
  if (values.empty()) throw PreconditionError("ks_distance_uniform: empty sample");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x = std::clamp(values[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - x, x - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace speclab
