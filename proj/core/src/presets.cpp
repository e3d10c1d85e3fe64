#include "speclab/presets.hpp"

#include <algorithm>
#include <array>

namespace speclab {

namespace {

// Sized so each one finishes in well under a minute on a single core.
constexpr std::array kPresets{
    Preset{"baker-spectrum",
           "measured baker map, N=32, M=2, shift 1/4; K=4 vs K=32 gaps (one leading row per run)",
           R"(kind: baker-spectrum
model: baker
N: 32
K: [4, 32]
L: 8
M: 2
delta: 1/4
shift_mode: top
seed: 20260101
out_dir: out/baker-spectrum
)"},
    Preset{"ensemble-spectrum",
           "environmental channel spectra, N=8, M in {2,4}, 4 samples each",
           R"(kind: ensemble-spectrum
model: environmental
N: 8
M: [2, 4]
samples: 4
seed: 20260102
out_dir: out/ensemble-spectrum
)"},
    Preset{"gap-scan",
           "environmental channel, N=16, M in {2,4,8,16}, 20 samples; R*sqrt(M) close to 1, slope -1/2",
           R"(kind: gap-scan
model: environmental
N: 16
M: [2, 4, 8, 16]
samples: 20
seed: 20260103
out_dir: out/gap-scan
)"},
    Preset{"decay",
           "distance to the invariant state, N=24, M in {8,12}, 16 pure states; fitted vs predicted rates",
           R"(kind: decay
model: environmental
N: 24
M: [8, 12]
samples: 1
states: 16
steps: 30
seed: 20260104
out_dir: out/decay
)"},
    Preset{"ginibre-compare",
           "radial density and KS statistic, N=16, M=16, 10 samples, with matched real Ginibre",
           R"(kind: ginibre-compare
model: environmental
N: 16
M: 16
samples: 10
bins: 50
r_max: 1.25
seed: 20260105
out_dir: out/ginibre-compare
)"},
    Preset{"real-fraction",
           "real eigenvalue ratio eta for M=N^2, N in {2..8}, 50 samples, next to the Ginibre value",
           R"(kind: real-fraction-scan
model: environmental
N: [2, 3, 4, 5, 6, 7, 8]
M_rule: N2
samples: 50
seed: 20260106
out_dir: out/real-fraction
)"},
    Preset{"cross-section",
           "imaginary-axis density near the real axis, N=8, M=64, 2000 samples, with the two bound curves",
           R"(kind: density-profile
model: environmental
N: 8
M: 64
samples: 2000
bins: 40
band_halfwidth: 0.1
y_max: 1.0
seed: 20260107
out_dir: out/cross-section
)"},
};

}  // namespace

std::span<const Preset> presets() { return kPresets; }

std::optional<Preset> find_preset(std::string_view name) {
  const auto it = std::find_if(kPresets.begin(), kPresets.end(), [&](const Preset& p) { return p.name == name; });
  if (it == kPresets.end()) return std::nullopt;
  return *it;
}

}  // namespace speclab
