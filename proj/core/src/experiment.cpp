#include "speclab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "speclab/baker.hpp"
#include "speclab/dynamics.hpp"
#include "speclab/ensembles.hpp"
#include "speclab/errors.hpp"
#include "speclab/random.hpp"
#include "speclab/spectral.hpp"

namespace speclab {

namespace {

struct RunSpec {
  std::size_t run_id = 0;
  std::size_t point = 0;  // index of the parameter point this run belongs to
  ModelKind model = ModelKind::environmental;
  Index N = 0;
  Index M = 0;
  Index K = 0;
  int L = 0;
  double delta = 0.0;
  Index n = 0;  // real Ginibre size
  std::size_t sample = 0;
};

struct RunResult {
  bool ok = false;
  std::string error;
  bool has_spectrum = false;
  SpectrumReport spectrum;
  bool has_decay = false;
  DecayTrajectory trajectory;
  DecayFit fit;
  bool has_moments = false;
  MomentReport moments;
};

struct Point {
  ModelKind model;
  Index N = 0;
  Index M = 0;
  Index K = 0;
  int L = 0;
  double delta = 0.0;
  Index n = 0;
};

std::vector<Point> enumerate_points(const ExperimentConfig& cfg) {
  std::vector<Point> points;
  if (cfg.model == ModelKind::real_ginibre) {
    for (Index size : cfg.n) points.push_back({ModelKind::real_ginibre, 0, 1, 0, 0, 0.0, size});
    return points;
  }
  for (Index system_dim : cfg.N) {
    for (Index m : cfg.m_values(system_dim)) {
      if (cfg.model == ModelKind::baker) {
        for (Index k : cfg.K)
          for (int l : cfg.L)
            for (double d : cfg.delta) points.push_back({ModelKind::baker, system_dim, m, k, l, d, 0});
      } else {
        points.push_back({cfg.model, system_dim, m, 0, 0, 0.0, 0});
      }
    }
  }
  return points;
}

std::vector<RunSpec> enumerate_runs(const ExperimentConfig& cfg, const std::vector<Point>& points) {
  std::vector<RunSpec> runs;
  const auto add = [&](const Point& p, std::size_t point_index, std::size_t samples) {
    for (std::size_t s = 0; s < samples; ++s) {
      RunSpec r;
      r.run_id = runs.size();
      r.point = point_index;
      r.model = p.model;
      r.N = p.N;
      r.M = p.M;
      r.K = p.K;
      r.L = p.L;
      r.delta = p.delta;
      r.n = p.n;
      r.sample = s;
      runs.push_back(r);
    }
  };
  if (cfg.kind == ExperimentKind::moment_check) {
    for (std::size_t i = 0; i < points.size(); ++i) add(points[i], i, 1);
    return runs;
  }
  // The baker channel is deterministic: one run per point.
  const std::size_t samples = cfg.model == ModelKind::baker ? 1 : cfg.samples;
  for (std::size_t i = 0; i < points.size(); ++i) add(points[i], i, samples);
  if (cfg.kind == ExperimentKind::ginibre_compare) {
    // Matched real Ginibre reference, n = N^2 - 1, after all channel runs.
    for (std::size_t i = 0; i < points.size(); ++i) {
      Point g{ModelKind::real_ginibre, points[i].N, 1, 0, 0, 0.0, points[i].N * points[i].N - 1};
      add(g, i, cfg.samples);
    }
  }
  return runs;
}

KrausSet build_channel(const RunSpec& run, const ExperimentConfig& cfg, Rng& rng) {
  switch (run.model) {
    case ModelKind::baker:
      return sloppy_baker_channel(BakerParams{run.N, run.K, run.L, run.M, run.delta, cfg.shift_mode});
    case ModelKind::environmental: return environmental_channel(run.N, run.M, rng);
    case ModelKind::external_fields:
      if (!cfg.p.empty()) return random_external_fields(run.N, cfg.p, rng);
      return random_external_fields(run.N, run.M, rng);
    case ModelKind::projected_unitary: return projected_unitary_channel(run.N, run.M, rng);
    case ModelKind::real_ginibre: break;
  }
  throw PreconditionError("build_channel: real_ginibre is not a channel");
}

RunResult execute(const RunSpec& run, const ExperimentConfig& cfg) {
  RunResult result;
  Rng rng(cfg.seed, run.run_id);
  if (cfg.kind == ExperimentKind::moment_check) {
    result.moments = phi_moment_check(run.N, run.M, cfg.samples, cfg.seed, static_cast<std::uint64_t>(run.point) << 32);
    result.has_moments = true;
    result.ok = true;
    return result;
  }
  if (run.model == ModelKind::real_ginibre) {
    result.spectrum = matrix_spectrum_report(real_ginibre(run.n, rng));
    result.has_spectrum = true;
    result.ok = true;
    return result;
  }
  const KrausSet kraus = build_channel(run, cfg, rng);
  const Superoperator s = superoperator_from_kraus(kraus);
  result.spectrum = spectrum_report(s, cfg.via_bloch);
  result.has_spectrum = true;
  if (cfg.kind == ExperimentKind::decay) {
    result.trajectory = distance_trajectory(kraus, cfg.steps, cfg.states, rng);
    result.fit = fit_decay_rate(result.trajectory, cfg.fit_floor, cfg.fit_start);
    result.has_decay = true;
  }
  result.ok = true;
  return result;
}

bool writes_spectra(ExperimentKind kind) {
  return kind == ExperimentKind::baker_spectrum || kind == ExperimentKind::ensemble_spectrum ||
         kind == ExperimentKind::ginibre_compare || kind == ExperimentKind::density_profile;
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Least-squares slope of y against x.
double slope_of(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

std::string point_label(const Point& p) {
  if (p.model == ModelKind::real_ginibre) return "n=" + std::to_string(p.n);
  std::string label = "N=" + std::to_string(p.N) + ",M=" + std::to_string(p.M);
  if (p.model == ModelKind::baker) {
    label += ",K=" + std::to_string(p.K) + ",L=" + std::to_string(p.L) + ",delta=" + format_cell(p.delta);
  }
  return label;
}

}  // namespace

double ExperimentOutcome::statistic(const std::string& name) const {
  for (const auto& [key, value] : statistics)
    if (key == name) return value;
  throw std::out_of_range("no statistic named '" + name + "'");
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SPECLAB_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, unsigned threads_override) {
  const auto start = std::chrono::steady_clock::now();
  if (auto errors = validate(cfg); !errors.empty()) throw ConfigError(std::move(errors));

  ExperimentOutcome outcome;
  outcome.out_dir = cfg.out_dir;
  outcome.threads = threads_override > 0 ? threads_override : resolve_threads(0);
  if (threads_override == 0 && std::getenv("SPECLAB_THREADS") == nullptr && cfg.threads > 0) {
    outcome.threads = cfg.threads;
  }

  const std::vector<Point> points = enumerate_points(cfg);
  const std::vector<RunSpec> runs = enumerate_runs(cfg, points);
  outcome.runs = runs.size();
  spdlog::info("{}: {} runs over {} parameter points on {} thread(s)", to_string(cfg.kind), runs.size(),
               points.size(), outcome.threads);

  std::vector<RunResult> results(runs.size());
  parallel_for(runs.size(), outcome.threads, [&](std::size_t i) {
    try {
      results[i] = execute(runs[i], cfg);
    } catch (const std::exception& e) {
      results[i].ok = false;
      results[i].error = e.what();
    }
  });

  for (std::size_t i = 0; i < runs.size(); ++i) {
    if (results[i].ok) continue;
    ++outcome.failed_runs;
    outcome.errors.push_back("run " + std::to_string(i) + " (" + point_label(points[runs[i].point]) +
                             "): " + results[i].error);
  }

  std::map<Index, double> eta_reference;
  const auto ginibre_eta = [&](Index size) {
    auto it = eta_reference.find(size);
    if (it == eta_reference.end()) {
      it = eta_reference
               .emplace(size, edelman_expected_real(static_cast<long>(size)) / std::sqrt(static_cast<double>(size)))
               .first;
    }
    return it->second;
  };

  // summary.csv / moments.csv
  if (cfg.kind == ExperimentKind::moment_check) {
    ResultTable moments({"run_id", "ok", "N", "M", "samples", "max_first_dev", "max_second_dev", "second_checked",
                         "symmetry_residual", "offdiag_var", "offdiag_var_pred"});
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& r = results[i];
      const auto& m = r.moments;
      moments.add_row({static_cast<double>(i), r.ok ? 1.0 : 0.0, static_cast<double>(runs[i].N),
                       static_cast<double>(runs[i].M), static_cast<double>(cfg.samples),
                       r.ok ? m.max_first_deviation : 0.0, r.ok ? m.max_second_deviation : 0.0,
                       m.second_moments_checked ? 1.0 : 0.0, r.ok ? m.symmetry_residual : 0.0,
                       r.ok ? m.offdiagonal_variance : 0.0, r.ok ? m.offdiagonal_variance_predicted : 0.0});
      if (r.ok) {
        const std::string label = point_label(points[runs[i].point]);
        outcome.statistics.emplace_back(label + ":max_first_dev", m.max_first_deviation);
        outcome.statistics.emplace_back(label + ":max_second_dev", m.max_second_deviation);
        outcome.statistics.emplace_back(label + ":symmetry_residual", m.symmetry_residual);
      }
    }
    outcome.tables.emplace("moments.csv", std::move(moments));
  } else {
    ResultTable summary({"run_id", "ok", "model", "N", "M", "K", "L", "delta", "n", "sample", "gamma", "R", "n_real",
                         "n_complex", "eta", "eta_ginibre", "alpha", "alpha_pred", "r2"});
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& run = runs[i];
      const auto& r = results[i];
      std::vector<double> row{static_cast<double>(i),
                              r.ok ? 1.0 : 0.0,
                              static_cast<double>(static_cast<int>(run.model)),
                              static_cast<double>(run.N),
                              static_cast<double>(run.M),
                              static_cast<double>(run.K),
                              static_cast<double>(run.L),
                              run.delta,
                              0.0,
                              static_cast<double>(run.sample)};
      if (r.ok && r.has_spectrum) {
        const auto& s = r.spectrum;
        const auto size = static_cast<Index>(s.statistical_size());
        row[8] = static_cast<double>(size);
        row.push_back(s.has_leading ? s.gap : 0.0);
        row.push_back(s.has_leading ? s.radius : 0.0);
        row.push_back(static_cast<double>(s.real_count));
        row.push_back(static_cast<double>(s.complex_count));
        row.push_back(size > 0 ? static_cast<double>(s.real_count) / std::sqrt(static_cast<double>(size)) : 0.0);
        row.push_back(size > 0 ? ginibre_eta(size) : 0.0);
      } else {
        row.insert(row.end(), 6, 0.0);
      }
      if (r.ok && r.has_decay) {
        const double pred = r.spectrum.predicted_rate();
        row.push_back(r.fit.alpha);
        row.push_back(std::isfinite(pred) ? pred : 0.0);
        row.push_back(r.fit.r_squared);
      } else {
        row.insert(row.end(), 3, 0.0);
      }
      summary.add_row(std::move(row));
    }
    outcome.tables.emplace("summary.csv", std::move(summary));
  }

  // spectra.csv
  if (writes_spectra(cfg.kind)) {
    ResultTable spectra({"run_id", "eig_index", "re", "im", "is_leading", "is_real_flag"});
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& r = results[i];
      if (!r.ok || !r.has_spectrum) continue;
      const auto& s = r.spectrum;
      for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) {
        spectra.add_row({static_cast<double>(i), static_cast<double>(k), s.eigenvalues[k].real(),
                         s.eigenvalues[k].imag(), (s.has_leading && k == 0) ? 1.0 : 0.0, s.real_flags[k] ? 1.0 : 0.0});
      }
    }
    outcome.tables.emplace("spectra.csv", std::move(spectra));
  }

  // decay.csv
  if (cfg.kind == ExperimentKind::decay) {
    ResultTable decay({"run_id", "t", "d_mean"});
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto& r = results[i];
      if (!r.ok || !r.has_decay) continue;
      for (std::size_t t = 0; t < r.trajectory.mean_distance.size(); ++t) {
        decay.add_row({static_cast<double>(i), static_cast<double>(t), r.trajectory.mean_distance[t]});
      }
    }
    outcome.tables.emplace("decay.csv", std::move(decay));
  }

  // Per-point pooled statistics and densities.
  const bool has_densities =
      cfg.kind == ExperimentKind::ginibre_compare || cfg.kind == ExperimentKind::density_profile;
  ResultTable densities({"series", "model", "N", "M", "bin_lo", "bin_hi", "bin_center", "count", "density",
                         "lower_bound", "upper_bound"});
  std::size_t series = 0;
  std::vector<double> gap_log_m, gap_log_r;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const Point& point = points[p];
    const std::string label = point_label(point);
    std::vector<SpectrumReport> channel_spectra;
    std::vector<SpectrumReport> ginibre_spectra;
    std::vector<double> alphas, alpha_preds;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (runs[i].point != p || !results[i].ok || !results[i].has_spectrum) continue;
      (runs[i].model == ModelKind::real_ginibre && point.model != ModelKind::real_ginibre ? ginibre_spectra
                                                                                           : channel_spectra)
          .push_back(results[i].spectrum);
      if (results[i].has_decay) {
        alphas.push_back(results[i].fit.alpha);
        alpha_preds.push_back(results[i].spectrum.predicted_rate());
      }
    }
    if (channel_spectra.empty()) continue;

    switch (cfg.kind) {
      case ExperimentKind::baker_spectrum:
      case ExperimentKind::ensemble_spectrum: {
        std::vector<double> gaps;
        for (const auto& s : channel_spectra) gaps.push_back(s.gap);
        outcome.statistics.emplace_back(label + ":mean_gamma", mean_of(gaps));
        break;
      }
      case ExperimentKind::gap_scan: {
        std::vector<double> radii;
        for (const auto& s : channel_spectra) radii.push_back(s.radius);
        const double mean_r = mean_of(radii);
        outcome.statistics.emplace_back(label + ":mean_R", mean_r);
        outcome.statistics.emplace_back(label + ":mean_R_sqrtM", mean_r * std::sqrt(static_cast<double>(point.M)));
        if (mean_r > 0.0) {
          gap_log_m.push_back(std::log(static_cast<double>(point.M)));
          gap_log_r.push_back(std::log(mean_r));
        }
        break;
      }
      case ExperimentKind::real_fraction_scan: {
        const double eta = eta_ratio(channel_spectra);
        outcome.statistics.emplace_back(label + ":eta", eta);
        outcome.statistics.emplace_back(label + ":eta_ginibre",
                                        ginibre_eta(static_cast<Index>(channel_spectra.front().statistical_size())));
        break;
      }
      case ExperimentKind::decay:
        outcome.statistics.emplace_back(label + ":mean_alpha", mean_of(alphas));
        outcome.statistics.emplace_back(label + ":mean_alpha_pred", mean_of(alpha_preds));
        break;
      case ExperimentKind::ginibre_compare: {
        const auto add_radial = [&](const std::vector<SpectrumReport>& spectra, ModelKind model, double m) {
          const DensityHistogram h = radial_density(spectra, m, cfg.bins, cfg.r_max);
          for (std::size_t b = 0; b < h.bins(); ++b) {
            const double c = h.center(b);
            const double law = c < 1.0 ? 2.0 * c : 0.0;
            densities.add_row({static_cast<double>(series), static_cast<double>(static_cast<int>(model)),
                               static_cast<double>(point.N), m, h.edges[b], h.edges[b + 1], c, h.counts[b],
                               h.density[b], law, law});
          }
          ++series;
          // KS distance of r_M^2 to uniform, away from the real axis.
          std::vector<double> r2;
          const double scale = std::sqrt(m);
          for (const auto& s : spectra)
            for (std::size_t k = s.has_leading ? 1 : 0; k < s.eigenvalues.size(); ++k) {
              const Complex z = s.eigenvalues[k] * scale;
              if (std::abs(z.imag()) < 0.05) continue;
              r2.push_back(std::norm(z));
            }
          return r2.empty() ? 1.0 : ks_distance_uniform(std::move(r2));
        };
        outcome.statistics.emplace_back(label + ":ks_channel",
                                        add_radial(channel_spectra, point.model, static_cast<double>(point.M)));
        if (!ginibre_spectra.empty()) {
          outcome.statistics.emplace_back(label + ":ks_ginibre", add_radial(ginibre_spectra, ModelKind::real_ginibre, 1.0));
        }
        break;
      }
      case ExperimentKind::density_profile: {
        const double m = point.model == ModelKind::real_ginibre ? 1.0 : static_cast<double>(point.M);
        const DensityHistogram h = imaginary_axis_density(channel_spectra, m, cfg.band_halfwidth, cfg.bins, cfg.y_max);
        double worst = 0.0;
        for (std::size_t b = 0; b < h.bins(); ++b) {
          const double c = h.center(b);
          const auto [lo, hi] = erfc_bounds(c, m);
          densities.add_row({static_cast<double>(series), static_cast<double>(static_cast<int>(point.model)),
                             static_cast<double>(point.N), m, h.edges[b], h.edges[b + 1], c, h.counts[b],
                             h.density[b], lo, hi});
          const double y = std::abs(c);
          if (y > 0.05 && y < 0.5) {
            const double below = lo > 0.0 ? std::max(0.0, (0.9 * lo - h.density[b]) / lo) : 0.0;
            const double above = hi > 0.0 ? std::max(0.0, (h.density[b] - 1.1 * hi) / hi) : 0.0;
            worst = std::max({worst, below, above});
          }
        }
        ++series;
        outcome.statistics.emplace_back(label + ":bound_violation", worst);
        break;
      }
      default: break;
    }
  }
  if (cfg.kind == ExperimentKind::gap_scan && gap_log_m.size() >= 2) {
    outcome.statistics.emplace_back("slope_logR_logM", slope_of(gap_log_m, gap_log_r));
  }
  if (has_densities) outcome.tables.emplace("densities.csv", std::move(densities));

  std::filesystem::create_directories(outcome.out_dir);
  for (const auto& [name, table] : outcome.tables) {
    const auto path = outcome.out_dir / name;
    table.write(path);
    outcome.files.push_back(path);
  }

  outcome.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::ordered_json meta;
  meta["tool"] = "speclab";
  meta["version"] = SPECLAB_VERSION;
  meta["kind"] = std::string(to_string(cfg.kind));
  meta["seed"] = cfg.seed;
  meta["rng"] = std::string(Rng::algorithm);
  meta["threads"] = outcome.threads;
  meta["runs"] = outcome.runs;
  meta["failed_runs"] = outcome.failed_runs;
  meta["wall_seconds"] = outcome.wall_seconds;
  meta["config"] = to_yaml(cfg);
  meta["errors"] = outcome.errors;
  nlohmann::ordered_json stats = nlohmann::ordered_json::object();
  for (const auto& [key, value] : outcome.statistics) stats[key] = std::isfinite(value) ? nlohmann::ordered_json(value) : nlohmann::ordered_json(nullptr);
  meta["statistics"] = std::move(stats);
  std::vector<std::string> names;
  for (const auto& f : outcome.files) names.push_back(f.filename().string());
  meta["files"] = names;
  {
    const auto path = outcome.out_dir / "meta.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << meta.dump(2) << "\n";
    outcome.files.push_back(path);
  }
  return outcome;
}

}  // namespace speclab
