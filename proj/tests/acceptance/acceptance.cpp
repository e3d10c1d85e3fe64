// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "speclab/baker.hpp"
#include "speclab/channels.hpp"
#include "speclab/config.hpp"
#include "speclab/dynamics.hpp"
#include "speclab/ensembles.hpp"
#include "speclab/experiment.hpp"
#include "speclab/presets.hpp"
#include "speclab/spectral.hpp"

using namespace speclab;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

const fs::path kScratch = fs::temp_directory_path() / "speclab-acceptance";

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentConfig preset_config(std::string_view name, const std::string& out) {
  ExperimentConfig cfg = parse_config(find_preset(name)->yaml);
  cfg.out_dir = (kScratch / out).string();
  return cfg;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// The channels used by criteria 1 and 2: 25 from each constructor, N <= 8, M <= 16.
std::vector<KrausSet> channel_zoo() {
  std::vector<KrausSet> zoo;
  Rng rng(1001);
  const Index dims[] = {2, 4, 6, 8};
  for (int i = 0; i < 25; ++i) {
    const Index n = dims[i % 4];
    const Index divisors[] = {1, 2, n / 2, n};
    const Index m_div = divisors[(i / 4) % 4];
    zoo.push_back(environmental_channel(n, 1 + i % 16, rng));
    zoo.push_back(random_external_fields(n, 1 + (i * 7) % 16, rng));
    zoo.push_back(projected_unitary_channel(n, m_div, rng));
    const Index k = (i % 2 == 0) ? 2 : n;
    const double delta = n >= 4 ? 4.0 / static_cast<double>(2 * n) * (i % 3) : 0.0;  // N delta / 2 integer
    zoo.push_back(sloppy_baker_channel({n, k, 1 + i % 5, 2, std::min(delta, 1.0), ShiftMode::top}));
  }
  return zoo;
}

Verdict cptp() {
  double worst_tp = 0.0, worst_choi = 1.0;
  const auto zoo = channel_zoo();
  for (const auto& k : zoo) {
    worst_tp = std::max(worst_tp, is_trace_preserving(k).residual);
    worst_choi = std::min(worst_choi, is_completely_positive(superoperator_from_kraus(k)).min_eigenvalue);
  }
  return {zoo.size() == 100 && worst_tp < 1e-10 && worst_choi >= -1e-10,
          fmt("%zu channels, max TP residual %.2e (< 1e-10), min Choi eigenvalue %.2e (>= -1e-10)", zoo.size(),
              worst_tp, worst_choi)};
}

Verdict frobenius_perron() {
  double worst = 0.0;
  std::size_t count = 0;
  for (const auto& k : channel_zoo()) {
    double top = 0.0;
    for (const auto& z : eig_general(superoperator_from_kraus(k).matrix())) top = std::max(top, std::abs(z));
    worst = std::max(worst, std::abs(top - 1.0));
    ++count;
  }
  return {worst <= 1e-8, fmt("%zu channels, max | max|z| - 1 | = %.2e (<= 1e-8)", count, worst)};
}

Verdict gap_scaling() {
  const auto out = run_experiment(preset_config("gap-scan", "gap-scan"));
  bool ok = out.ok();
  std::string detail;
  for (int m : {2, 4, 8, 16}) {
    const double v = out.statistic("N=16,M=" + std::to_string(m) + ":mean_R_sqrtM");
    ok &= v >= 0.85 && v <= 1.15;
    detail += fmt("M=%d R*sqrt(M)=%.3f; ", m, v);
  }
  const double s = out.statistic("slope_logR_logM");
  ok &= std::abs(s + 0.5) <= 0.1;
  return {ok, detail + fmt("slope %.3f (-0.5 +- 0.1), each R*sqrt(M) in [0.85, 1.15]", s)};
}

Verdict baker_universality() {
  const auto out = run_experiment(preset_config("baker-spectrum", "baker"));
  const ResultTable& t = out.tables.at("summary.csv");
  // rows: K = 4, then K = 32
  const double gamma4 = t.row(0)[10], r4 = t.row(0)[11];
  const double gamma32 = t.row(1)[10];
  const bool nondegenerate = r4 < 1.0 - 1e-6;
  const bool ok = out.ok() && nondegenerate && r4 <= 1.0 / std::sqrt(2.0) + 0.1 && gamma32 < gamma4;
  return {ok, fmt("K=4: |z2|=%.4f (<= %.4f), nondegenerate=%d; gamma(K=32)=%.4f < gamma(K=4)=%.4f", r4,
                  1.0 / std::sqrt(2.0) + 0.1, nondegenerate, gamma32, gamma4)};
}

Verdict circular_law() {
  ExperimentConfig cfg = parse_config("kind: ensemble-spectrum\nmodel: environmental\nN: 32\nM: 16\nsamples: 10\nseed: 505\n");
  cfg.out_dir = (kScratch / "circular").string();
  const auto out = run_experiment(cfg);
  const ResultTable& spectra = out.tables.at("spectra.csv");
  std::vector<double> r2;
  const double scale = std::sqrt(16.0);
  for (std::size_t i = 0; i < spectra.rows(); ++i) {
    const auto& row = spectra.row(i);
    if (row[4] == 1.0) continue;
    const double x = row[2] * scale, y = row[3] * scale;
    if (std::abs(y) < 0.05) continue;
    r2.push_back(x * x + y * y);
  }
  const double ks = ks_distance_uniform(r2);
  return {out.ok() && ks < 0.05, fmt("%zu pooled eigenvalues off the axis band, KS distance %.4f (< 0.05)", r2.size(), ks)};
}

Verdict real_fraction() {
  bool ok = true;
  std::string detail;
  Rng rng(606);
  for (Index n : {2, 4, 10, 63}) {
    const int samples = n <= 10 ? 20000 : 5000;
    double sum = 0.0, sq = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double c = static_cast<double>(matrix_spectrum_report(real_ginibre(n, rng)).real_count);
      sum += c;
      sq += c * c;
    }
    const double m = sum / samples;
    const double se = std::sqrt((sq / samples - m * m) / (samples - 1));
    const double expected = edelman_expected_real(static_cast<long>(n));
    ok &= std::abs(m - expected) <= 3.0 * se;
    detail += fmt("n=%ld MC %.4f vs %.4f (%.1f se); ", static_cast<long>(n), m, expected, std::abs(m - expected) / se);
  }
  ExperimentConfig cfg = parse_config("kind: real-fraction-scan\nmodel: environmental\nN: [4, 6, 8]\nM_rule: N2\nsamples: 50\nseed: 607\n");
  cfg.out_dir = (kScratch / "real-fraction").string();
  const auto out = run_experiment(cfg);
  ok &= out.ok();
  for (int n : {4, 6, 8}) {
    const std::string label = "N=" + std::to_string(n) + ",M=" + std::to_string(n * n);
    const double eta = out.statistic(label + ":eta"), ref = out.statistic(label + ":eta_ginibre");
    ok &= std::abs(eta - ref) < 0.1;
    detail += fmt("N=%d eta %.3f vs %.3f; ", n, eta, ref);
  }
  return {ok, detail + "(3 se; |d eta| < 0.1)"};
}

Verdict decay_rates() {
  const auto out = run_experiment(preset_config("decay", "decay"));
  const ResultTable& t = out.tables.at("summary.csv");
  bool ok = out.ok();
  std::string detail;
  double alpha8 = 0.0, alpha12 = 0.0;
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const auto& row = t.row(r);
    const double m = row[4], alpha = row[16], pred = row[17], r2 = row[18];
    ok &= r2 > 0.95 && std::abs(alpha / pred - 1.0) < 0.2;
    (m == 8 ? alpha8 : alpha12) = alpha;
    detail += fmt("M=%.0f alpha %.3f pred %.3f R2 %.5f; ", m, alpha, pred, r2);
  }
  ok &= alpha12 > alpha8;

  ExperimentConfig cfg = parse_config("kind: decay\nmodel: environmental\nN: 16\nM: [4, 8, 16, 32]\nsamples: 4\nstates: 16\nsteps: 30\nseed: 707\n");
  cfg.out_dir = (kScratch / "decay-scan").string();
  const auto scan = run_experiment(cfg);
  ok &= scan.ok();
  std::vector<double> lnm, alphas;
  for (int m : {4, 8, 16, 32}) {
    lnm.push_back(std::log(static_cast<double>(m)));
    alphas.push_back(scan.statistic("N=16,M=" + std::to_string(m) + ":mean_alpha"));
  }
  const double s = slope(lnm, alphas);
  ok &= std::abs(s - 0.5) <= 0.15;
  return {ok, detail + fmt("alpha(12) > alpha(8); N=16 slope of alpha vs ln M %.3f (0.5 +- 0.15)", s)};
}

Verdict moments() {
  bool ok = true;
  std::string detail;
  for (auto [n, m] : {std::pair<Index, Index>{2, 2}, {3, 4}}) {
    const MomentReport r = phi_moment_check(n, m, 10000, 808);
    ok &= r.second_moments_checked && r.max_first_deviation < 5.0 && r.max_second_deviation < 5.0 &&
          r.symmetry_residual == 0.0;
    detail += fmt("(N=%ld,M=%ld) first %.2f se, second %.2f se, symmetry residual %.1e; ", static_cast<long>(n),
                  static_cast<long>(m), r.max_first_deviation, r.max_second_deviation, r.symmetry_residual);
  }
  return {ok, detail + "(< 5 se, exact symmetry)"};
}

Verdict near_axis() {
  const auto out = run_experiment(preset_config("cross-section", "cross-section"));
  const ResultTable& d = out.tables.at("densities.csv");
  bool ok = out.ok();
  std::size_t checked = 0;
  double worst = 0.0;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    const auto& row = d.row(r);
    const double y = std::abs(row[6]), density = row[8], lo = row[9], hi = row[10];
    if (!(y > 0.05 && y < 0.5)) continue;
    ++checked;
    const bool inside = density >= 0.9 * lo && density <= 1.1 * hi;
    ok &= inside;
    worst = std::max({worst, (0.9 * lo - density) / lo, (density - 1.1 * hi) / hi});
  }
  ok &= checked > 0;
  return {ok, fmt("%zu bins with 0.05 < |y_M| < 0.5 from %zu spectra, worst excess %.3f (<= 0)", checked, out.runs, worst)};
}

Verdict oracle_equivalence() {
  Rng rng(1010);
  double worst_apply = 0.0, worst_spec = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Index n = 2 + i % 5;
    const KrausSet k = i % 2 ? environmental_channel(n, 1 + i % 7, rng) : projected_unitary_channel(n, 1, rng);
    ComplexMatrix g(n, n);
    for (Index a = 0; a < n; ++a)
      for (Index b = 0; b < n; ++b) g(a, b) = rng.complex_normal();
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    const ComplexMatrix diff = apply_channel(k, rho) - apply_superoperator(superoperator_from_kraus(k), rho);
    worst_apply = std::max(worst_apply, diff.cwiseAbs().maxCoeff());
  }
  for (int i = 0; i < 50; ++i) {
    const Index n = 2 + i % 3;
    const KrausSet k = i % 3 == 0   ? environmental_channel(n, 1 + i % 9, rng)
                       : i % 3 == 1 ? random_external_fields(n, 1 + i % 4, rng)
                                    : projected_unitary_channel(4, 1 + i % 2, rng);
    const Superoperator s = superoperator_from_kraus(k);
    worst_spec = std::max(worst_spec, spectrum_distance(spectrum_report(s, true).eigenvalues,
                                                        spectrum_report(s, false).eigenvalues));
  }
  return {worst_apply < 1e-10 && worst_spec < 1e-8,
          fmt("Kraus vs superoperator max %.2e (< 1e-10); complex vs real-Schur spectra max %.2e (< 1e-8)",
              worst_apply, worst_spec)};
}

Verdict determinism() {
  bool ok = true;
  std::size_t files = 0;
  std::string mismatched;
  for (const auto& p : presets()) {
    const std::string name(p.name);
    ExperimentConfig a = preset_config(p.name, "det-a-" + name);
    ExperimentConfig b = preset_config(p.name, "det-b-" + name);
    const auto ra = run_experiment(a, 1);
    const auto rb = run_experiment(b, 2);
    ok &= ra.ok() && rb.ok();
    for (const auto& [file, table] : ra.tables) {
      ++files;
      if (slurp(fs::path(a.out_dir) / file) != slurp(fs::path(b.out_dir) / file)) {
        ok = false;
        mismatched += " " + name + "/" + file;
      }
    }
  }
  return {ok, fmt("%zu presets run twice (1 and 2 threads), %zu CSV files compared%s", presets().size(), files,
                  mismatched.empty() ? ", all identical" : (", differing:" + mismatched).c_str())};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  fs::remove_all(kScratch);
  fs::create_directories(kScratch);
  const std::vector<Criterion> criteria = {
      {1, "CPTP validity", 60, cptp},
      {2, "leading eigenvalue on the unit circle", 60, frobenius_perron},
      {3, "subleading radius scaling", 300, gap_scaling},
      {4, "baker map universality", 120, baker_universality},
      {5, "circular law", 300, circular_law},
      {6, "real eigenvalue fraction", 600, real_fraction},
      {7, "decay rates", 300, decay_rates},
      {8, "moment formulas", 300, moments},
      {9, "near-axis depletion", 300, near_axis},
      {10, "oracle equivalence", 60, oracle_equivalence},
      {11, "determinism", 600, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = v.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s [%d] %s: %s; %.1f s (< %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs,
                c.budget_seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
