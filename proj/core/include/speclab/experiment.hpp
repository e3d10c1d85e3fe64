#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "speclab/config.hpp"
#include "speclab/table.hpp"

namespace speclab {

/// What run_experiment produced. Tables are also written to `out_dir`.
struct ExperimentOutcome {
  std::filesystem::path out_dir;
  std::vector<std::filesystem::path> files;
  std::map<std::string, ResultTable> tables;  ///< keyed by file name
  std::size_t runs = 0;
  std::size_t failed_runs = 0;
  std::vector<std::string> errors;
  /// Aggregate numbers also recorded in meta.json, in insertion order.
  std::vector<std::pair<std::string, double>> statistics;
  unsigned threads = 1;
  double wall_seconds = 0.0;

  bool ok() const noexcept { return failed_runs == 0; }
  double statistic(const std::string& name) const;
};

/// Worker count: `requested` if nonzero, else SPECLAB_THREADS, else the
/// hardware concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

/// Calls body(i) for i in [0, count) on `threads` workers. Indices are
/// handed out dynamically; callers store results by index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

/// Runs every (parameter point, sample) of the config and writes
/// spectra.csv / summary.csv / densities.csv / decay.csv / moments.csv as
/// applicable, plus meta.json. Output bytes of the CSV files depend only on
/// the config (including its seed), never on the thread count.
/// `threads_override` takes precedence over SPECLAB_THREADS and the config.
ExperimentOutcome run_experiment(const ExperimentConfig& config, unsigned threads_override = 0);

}  // namespace speclab
