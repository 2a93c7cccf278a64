// Copyright 2026 The nanomech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "nanomech/dynamics.hpp"
#include "nanomech/entanglement.hpp"
#include "nanomech/lindblad.hpp"
#include "nanomech/physical.hpp"

namespace nanomech {

inline constexpr const char* kToolVersion = "nanomech 1.0.0";

struct InitialSpec {
    enum class Kind { basis, dark, thermal, amplitudes };
    Kind kind = Kind::basis;
    BasisState state{};                 // basis
    int n = 1;                          // dark
    double n_bar = 0.0;                 // thermal
    int cutoff = 1;                     // thermal
    std::vector<Complex> amplitudes{};  // amplitudes, in basis order
};

struct SpaceSpec {
    enum class Kind { full, manifold, truncated };
    Kind kind = Kind::manifold;
    int atom_cap = 1;
    int cap_a = 1;  // full
    int cap_b = 1;  // full
    int excitations = 1;  // manifold number or truncation bound

    SpacePtr build() const;
};

struct TimeSpec {
    double t_end = 1.0;  // in units of 1/kappa
    int samples = 2;
};

enum class Solver { automatic, schrodinger, master };

/// One simulation run. Times are in units of 1/kappa with
/// kappa = sqrt((kappa_a^2 + kappa_b^2) / 2) (or 1 when both vanish), and the
/// CSV time column uses the same unit.
struct ScenarioConfig {
    std::string name = "scenario";
    SpinMode mode = SpinMode::exact;
    Picture picture = Picture::interaction;
    Solver solver = Solver::automatic;
    SystemParams params{};
    InitialSpec initial{};
    SpaceSpec space{};
    TimeSpec times{};
    std::vector<std::string> outputs{"populations"};
    double tolerance = 1e-9;
    nlohmann::json notes = nlohmann::json::object();

    /// Throws ParameterError naming the offending field.
    void validate() const;

    double kappa_unit() const;
    std::vector<double> sample_times() const;  // physical times
    bool uses_master_equation() const;
};

/// Parse and validate. Unknown keys are ignored (sidecars carry extras).
/// params.N_gamma_over_kappa, when present, sets gamma_atom = ratio * kappa / N.
ScenarioConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioConfig& cfg);

struct RunResult {
    std::vector<std::filesystem::path> files;
    std::optional<Trajectory> pure;
    std::optional<DensityTrajectory> mixed;
    std::optional<NegativitySeries> negativity;
};

/// Simulate and write `<name>.json` (resolved config + tool version),
/// `<name>_basis.csv` and one `<name>_<output>.csv` per requested output.
RunResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// Names accepted by figure_configs.
const std::vector<std::string>& figure_names();

/// Built-in configs mirroring each figure's initial condition.
std::vector<ScenarioConfig> figure_configs(const std::string& name);

/// Run every config of a figure into out_dir and write `<name>_plot.py`.
std::vector<std::filesystem::path> run_figure(const std::string& name,
                                              const std::filesystem::path& out_dir);

/// Parse a device description; `mu` may be omitted and is then taken as
/// N_mag nickel moments.
physical::DeviceParams parse_device(const nlohmann::json& j);

/// Run every config matching `pattern` into out_root/<config stem>/,
/// with up to `jobs` runs in flight. Returns the number of failed runs;
/// failures are reported on `log`.
int run_sweep(const std::string& pattern, const std::filesystem::path& out_root, unsigned jobs,
              std::ostream& log);

}  // namespace nanomech
