#include "speclab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "speclab/ensembles.hpp"
#include "speclab/errors.hpp"

namespace speclab {

namespace {

const std::set<std::string, std::less<>> kKnownKeys = {
    "kind",  "model",   "N",       "K",       "L",         "M",    "M_rule", "delta", "shift_mode",
    "p",     "n",       "samples", "seed",    "out_dir",   "threads", "bins", "r_max", "band_halfwidth",
    "y_max", "steps",   "states",  "fit_floor", "fit_start", "via_bloch"};

ExperimentKind parse_kind(std::string_view text) {
  if (text == "baker-spectrum") return ExperimentKind::baker_spectrum;
  if (text == "ensemble-spectrum") return ExperimentKind::ensemble_spectrum;
  if (text == "gap-scan") return ExperimentKind::gap_scan;
  if (text == "real-fraction-scan") return ExperimentKind::real_fraction_scan;
  if (text == "decay") return ExperimentKind::decay;
  if (text == "ginibre-compare") return ExperimentKind::ginibre_compare;
  if (text == "density-profile") return ExperimentKind::density_profile;
  if (text == "moment-check") return ExperimentKind::moment_check;
  throw PreconditionError("unknown experiment kind '" + std::string(text) + "'");
}

ModelKind parse_model(std::string_view text) {
  if (text == "baker") return ModelKind::baker;
  switch (parse_ensemble_kind(text)) {
    case EnsembleKind::environmental: return ModelKind::environmental;
    case EnsembleKind::external_fields: return ModelKind::external_fields;
    case EnsembleKind::projected_unitary: return ModelKind::projected_unitary;
    case EnsembleKind::real_ginibre: return ModelKind::real_ginibre;
  }
  return ModelKind::environmental;
}

MRule parse_m_rule(std::string_view text) {
  if (text == "fixed") return MRule::fixed;
  if (text == "N2") return MRule::n_squared;
  if (text == "N") return MRule::n;
  throw PreconditionError("M_rule must be one of fixed, N2, N (got '" + std::string(text) + "')");
}

std::string_view to_string(MRule rule) {
  switch (rule) {
    case MRule::fixed: return "fixed";
    case MRule::n_squared: return "N2";
    case MRule::n: return "N";
  }
  return "fixed";
}

double number_of(const YAML::Node& node) {
  const auto v = parse_number(node.as<std::string>());
  if (!v) throw PreconditionError("not a number: '" + node.as<std::string>() + "'");
  return *v;
}

template <typename T>
T integer_of(const YAML::Node& node) {
  const double v = number_of(node);
  if (v != std::floor(v)) throw PreconditionError("expected an integer, got '" + node.as<std::string>() + "'");
  return static_cast<T>(v);
}

template <typename T, typename Convert>
std::vector<T> list_of(const YAML::Node& node, Convert convert) {
  std::vector<T> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(convert(item));
  } else if (node.IsScalar()) {
    out.push_back(convert(node));
  } else {
    throw PreconditionError("expected a scalar or a list");
  }
  if (out.empty()) throw PreconditionError("list must not be empty");
  return out;
}

bool is_channel_model(ModelKind m) { return m != ModelKind::real_ginibre; }
bool is_ensemble_model(ModelKind m) { return m != ModelKind::baker; }

// Shortest text that reads back to the same double.
std::string format_number(double v) {
  char buffer[32];
  const auto res = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, res.ptr);
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::baker_spectrum: return "baker-spectrum";
    case ExperimentKind::ensemble_spectrum: return "ensemble-spectrum";
    case ExperimentKind::gap_scan: return "gap-scan";
    case ExperimentKind::real_fraction_scan: return "real-fraction-scan";
    case ExperimentKind::decay: return "decay";
    case ExperimentKind::ginibre_compare: return "ginibre-compare";
    case ExperimentKind::density_profile: return "density-profile";
    case ExperimentKind::moment_check: return "moment-check";
  }
  return "ensemble-spectrum";
}

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::baker: return "baker";
    case ModelKind::environmental: return "environmental";
    case ModelKind::external_fields: return "external_fields";
    case ModelKind::projected_unitary: return "projected_unitary";
    case ModelKind::real_ginibre: return "real_ginibre";
  }
  return "environmental";
}

std::optional<double> parse_number(std::string_view text) {
  const auto parse_plain = [](std::string_view s) -> std::optional<double> {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_plain(text);
  const auto num = parse_plain(text.substr(0, slash));
  const auto den = parse_plain(text.substr(slash + 1));
  if (!num || !den || *den == 0.0) return std::nullopt;
  return *num / *den;
}

std::vector<Index> ExperimentConfig::m_values(Index system_dim) const {
  switch (m_rule) {
    case MRule::n_squared: return {system_dim * system_dim};
    case MRule::n: return {system_dim};
    case MRule::fixed: break;
  }
  return M;
}

std::string ConfigErrors::joined() const {
  std::string out;
  for (const auto& m : messages) {
    if (!out.empty()) out += "\n";
    out += m;
  }
  return out;
}

ConfigError::ConfigError(ConfigErrors errors)
    : std::runtime_error("invalid config:\n" + errors.joined()), errors_(std::move(errors)) {}

ExperimentConfig parse_config(std::string_view text) {
  ConfigErrors errors;
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    errors.messages.push_back(std::string("syntax: ") + e.what());
    throw ConfigError(std::move(errors));
  }
  if (!root.IsMap()) {
    errors.messages.emplace_back("config must be a mapping of key: value pairs");
    throw ConfigError(std::move(errors));
  }

  ExperimentConfig cfg;
  bool has_kind = false;
  for (const auto& entry : root) {
    const auto key = entry.first.as<std::string>();
    const YAML::Node& value = entry.second;
    if (!kKnownKeys.contains(key)) {
      errors.messages.push_back(key + ": unknown key");
      continue;
    }
    try {
      if (key == "kind") {
        cfg.kind = parse_kind(value.as<std::string>());
        has_kind = true;
      } else if (key == "model") {
        cfg.model = parse_model(value.as<std::string>());
      } else if (key == "N") {
        cfg.N = list_of<Index>(value, integer_of<Index>);
      } else if (key == "K") {
        cfg.K = list_of<Index>(value, integer_of<Index>);
      } else if (key == "L") {
        cfg.L = list_of<int>(value, integer_of<int>);
      } else if (key == "M") {
        cfg.M = list_of<Index>(value, integer_of<Index>);
      } else if (key == "M_rule") {
        cfg.m_rule = parse_m_rule(value.as<std::string>());
      } else if (key == "delta") {
        cfg.delta = list_of<double>(value, number_of);
      } else if (key == "shift_mode") {
        cfg.shift_mode = parse_shift_mode(value.as<std::string>());
      } else if (key == "p") {
        cfg.p = list_of<double>(value, number_of);
      } else if (key == "n") {
        cfg.n = list_of<Index>(value, integer_of<Index>);
      } else if (key == "samples") {
        cfg.samples = integer_of<std::size_t>(value);
      } else if (key == "seed") {
        cfg.seed = value.as<std::uint64_t>();
      } else if (key == "out_dir") {
        cfg.out_dir = value.as<std::string>();
      } else if (key == "threads") {
        cfg.threads = integer_of<unsigned>(value);
      } else if (key == "bins") {
        cfg.bins = integer_of<std::size_t>(value);
      } else if (key == "r_max") {
        cfg.r_max = number_of(value);
      } else if (key == "band_halfwidth") {
        cfg.band_halfwidth = number_of(value);
      } else if (key == "y_max") {
        cfg.y_max = number_of(value);
      } else if (key == "steps") {
        cfg.steps = integer_of<int>(value);
      } else if (key == "states") {
        cfg.states = integer_of<int>(value);
      } else if (key == "fit_floor") {
        cfg.fit_floor = number_of(value);
      } else if (key == "fit_start") {
        cfg.fit_start = integer_of<int>(value);
      } else if (key == "via_bloch") {
        cfg.via_bloch = value.as<bool>();
      }
    } catch (const std::exception& e) {
      errors.messages.push_back(key + ": " + e.what());
    }
  }
  if (!has_kind) errors.messages.emplace_back("kind: missing required key");
  if (!errors.empty()) throw ConfigError(std::move(errors));

  ConfigErrors semantic = validate(cfg);
  if (!semantic.empty()) throw ConfigError(std::move(semantic));
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    ConfigErrors errors;
    errors.messages.push_back("cannot read config file '" + path.string() + "'");
    throw ConfigError(std::move(errors));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

ConfigErrors validate(const ExperimentConfig& cfg) {
  ConfigErrors errors;
  const auto add = [&](std::string message) { errors.messages.push_back(std::move(message)); };

  switch (cfg.kind) {
    case ExperimentKind::baker_spectrum:
      if (cfg.model != ModelKind::baker) add("model: baker-spectrum requires model baker");
      break;
    case ExperimentKind::ensemble_spectrum:
    case ExperimentKind::real_fraction_scan:
    case ExperimentKind::density_profile:
      if (!is_ensemble_model(cfg.model)) add("model: " + std::string(to_string(cfg.kind)) + " requires a random ensemble");
      break;
    case ExperimentKind::gap_scan:
    case ExperimentKind::decay:
    case ExperimentKind::ginibre_compare:
      if (!is_channel_model(cfg.model)) add("model: " + std::string(to_string(cfg.kind)) + " requires a channel model");
      break;
    case ExperimentKind::moment_check:
      if (cfg.model != ModelKind::environmental) add("model: moment-check requires model environmental");
      if (cfg.samples < 100) add("samples: moment-check needs at least 100 samples");
      break;
  }

  if (cfg.samples < 1) add("samples: must be at least 1");
  if (cfg.bins < 1) add("bins: must be at least 1");
  if (!(cfg.r_max > 0.0)) add("r_max: must be positive");
  if (!(cfg.band_halfwidth > 0.0)) add("band_halfwidth: must be positive");
  if (!(cfg.y_max > 0.0)) add("y_max: must be positive");
  if (cfg.steps < 1) add("steps: must be at least 1");
  if (cfg.states < 1) add("states: must be at least 1");
  if (!(cfg.fit_floor > 0.0)) add("fit_floor: must be positive");
  if (cfg.fit_start < 0 || cfg.fit_start >= cfg.steps) add("fit_start: must lie in [0, steps)");

  if (cfg.model == ModelKind::real_ginibre) {
    if (cfg.n.empty()) add("n: real_ginibre requires matrix sizes n");
    for (Index size : cfg.n)
      if (size < 1) add("n: sizes must be positive");
    return errors;
  }

  for (Index system_dim : cfg.N) {
    const std::string at = "N=" + std::to_string(system_dim) + ": ";
    if (system_dim < 2) {
      add(at + "N must be at least 2");
      continue;
    }
    for (Index m : cfg.m_values(system_dim)) {
      const std::string atm = "N=" + std::to_string(system_dim) + ", M=" + std::to_string(m) + ": ";
      if (m < 1) {
        add(atm + "M must be at least 1");
        continue;
      }
      switch (cfg.model) {
        case ModelKind::baker:
          for (Index k : cfg.K)
            for (int l : cfg.L)
              for (double d : cfg.delta) {
                BakerParams params{system_dim, k, l, m, d, cfg.shift_mode};
                try {
                  params.validate();
                } catch (const PreconditionError& e) {
                  add("N=" + std::to_string(system_dim) + ", K=" + std::to_string(k) + ", L=" + std::to_string(l) +
                      ", M=" + std::to_string(m) + ", delta=" + format_number(d) + ": " + e.what());
                }
              }
          break;
        case ModelKind::projected_unitary:
          if (system_dim % m != 0) add(atm + "M must divide N");
          break;
        case ModelKind::external_fields:
          if (!cfg.p.empty()) {
            if (static_cast<Index>(cfg.p.size()) != m) add(atm + "p must have M entries");
            double total = 0.0;
            bool negative = false;
            for (double pm : cfg.p) {
              total += pm;
              negative = negative || pm < 0.0;
            }
            if (negative) add("p: probabilities must be nonnegative");
            if (std::abs(total - 1.0) > 1e-12) add("p: probabilities must sum to 1");
          }
          break;
        case ModelKind::environmental:
        case ModelKind::real_ginibre:
          break;
      }
    }
  }
  return errors;
}

std::string to_yaml(const ExperimentConfig& cfg) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(cfg.kind));
  out << YAML::Key << "model" << YAML::Value << std::string(to_string(cfg.model));
  const auto seq = [&](const char* key, const auto& values) {
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto& v : values) out << v;
    out << YAML::EndSeq;
  };
  if (cfg.model == ModelKind::real_ginibre) {
    seq("n", cfg.n);
  } else {
    seq("N", cfg.N);
    seq("M", cfg.M);
    out << YAML::Key << "M_rule" << YAML::Value << std::string(to_string(cfg.m_rule));
  }
  if (cfg.model == ModelKind::baker) {
    seq("K", cfg.K);
    seq("L", cfg.L);
    std::vector<std::string> deltas;
    for (double d : cfg.delta) deltas.push_back(format_number(d));
    seq("delta", deltas);
    out << YAML::Key << "shift_mode" << YAML::Value << std::string(to_string(cfg.shift_mode));
  }
  if (cfg.model == ModelKind::external_fields && !cfg.p.empty()) {
    std::vector<std::string> ps;
    for (double v : cfg.p) ps.push_back(format_number(v));
    seq("p", ps);
  }
  out << YAML::Key << "samples" << YAML::Value << cfg.samples;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  out << YAML::Key << "out_dir" << YAML::Value << cfg.out_dir;
  out << YAML::Key << "threads" << YAML::Value << cfg.threads;
  out << YAML::Key << "bins" << YAML::Value << cfg.bins;
  out << YAML::Key << "r_max" << YAML::Value << format_number(cfg.r_max);
  out << YAML::Key << "band_halfwidth" << YAML::Value << format_number(cfg.band_halfwidth);
  out << YAML::Key << "y_max" << YAML::Value << format_number(cfg.y_max);
  out << YAML::Key << "steps" << YAML::Value << cfg.steps;
  out << YAML::Key << "states" << YAML::Value << cfg.states;
  out << YAML::Key << "fit_floor" << YAML::Value << format_number(cfg.fit_floor);
  out << YAML::Key << "fit_start" << YAML::Value << cfg.fit_start;
  out << YAML::Key << "via_bloch" << YAML::Value << cfg.via_bloch;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace speclab
