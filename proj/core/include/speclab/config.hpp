#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "speclab/baker.hpp"
#include "speclab/matrix.hpp"

namespace speclab {

enum class ExperimentKind {
  baker_spectrum,
  ensemble_spectrum,
  gap_scan,
  real_fraction_scan,
  decay,
  ginibre_compare,
  density_profile,
  moment_check,
};

/// Channel model driving an experiment. The numeric value is the `model`
/// code written to summary.csv.
enum class ModelKind {
  baker = 0,
  environmental = 1,
  external_fields = 2,
  projected_unitary = 3,
  real_ginibre = 4,
};

std::string_view to_string(ExperimentKind kind);
std::string_view to_string(ModelKind kind);

/// How M is derived from N in a sweep; `fixed` uses the M list as given.
enum class MRule { fixed, n_squared, n };

/// Declarative description of one experiment. Sweep keys (N, K, L, M, delta,
/// n) hold lists; scalars in the file become one-element lists.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::ensemble_spectrum;
  ModelKind model = ModelKind::environmental;

  std::vector<Index> N{4};
  std::vector<Index> K{2};
  std::vector<int> L{1};
  std::vector<Index> M{2};
  MRule m_rule = MRule::fixed;
  std::vector<double> delta{0.0};
  ShiftMode shift_mode = ShiftMode::top;
  std::vector<double> p;  ///< external_fields weights; empty = uniform
  std::vector<Index> n;   ///< real_ginibre sizes

  std::size_t samples = 1;
  std::uint64_t seed = 1;
  std::string out_dir = "speclab-out";
  unsigned threads = 0;  ///< 0 = SPECLAB_THREADS or hardware concurrency

  std::size_t bins = 50;
  double r_max = 1.25;
  double band_halfwidth = 0.1;
  double y_max = 1.0;
  int steps = 40;
  int states = 16;
  double fit_floor = 1e-12;
  int fit_start = 1;
  bool via_bloch = true;

  /// The M values used for a given N after applying m_rule.
  std::vector<Index> m_values(Index system_dim) const;
};

/// Field-level problems found while parsing or validating a config.
struct ConfigErrors {
  std::vector<std::string> messages;
  bool empty() const noexcept { return messages.empty(); }
  std::string joined() const;
};

/// Thrown by the parse/load entry points; carries every problem found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(ConfigErrors errors);
  const ConfigErrors& errors() const noexcept { return errors_; }

 private:
  ConfigErrors errors_;
};

/// Parses YAML text, then runs validate(). Unknown keys are errors.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Cross-field validation: divisibility, shift integrality, probability
/// normalisation, model/kind compatibility. Returns all problems found.
ConfigErrors validate(const ExperimentConfig& config);

/// Canonical YAML rendering with every default filled in.
std::string to_yaml(const ExperimentConfig& config);

/// Parses "0.25", "1/4" or "3e-2".
std::optional<double> parse_number(std::string_view text);

}  // namespace speclab
