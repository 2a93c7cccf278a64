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

#include "nanomech/scenario.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "nanomech/csv.hpp"
#include "nanomech/errors.hpp"

namespace nanomech {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParameterError("missing field '" + path + key + "'");
    }
    return obj.at(key);
}

double number(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_number()) throw ParameterError("field '" + path + key + "' must be a number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
    return obj.contains(key) ? number(obj, key, path) : fallback;
}

int integer(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_number_integer()) {
        throw ParameterError("field '" + path + key + "' must be an integer");
    }
    return v.get<int>();
}

int integer_or(const json& obj, const std::string& key, const std::string& path, int fallback) {
    return obj.contains(key) ? integer(obj, key, path) : fallback;
}

std::string text(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_string()) throw ParameterError("field '" + path + key + "' must be a string");
    return v.get<std::string>();
}

template <typename Parse>
auto parse_field(const std::string& field, Parse parse) {
    try {
        return parse();
    } catch (const ParameterError& e) {
        throw ParameterError("field '" + field + "': " + e.what());
    }
}

std::string_view to_string(Solver s) {
    switch (s) {
        case Solver::schrodinger:
            return "schrodinger";
        case Solver::master:
            return "master";
        default:
            return "auto";
    }
}

std::string_view to_string(InitialSpec::Kind k) {
    switch (k) {
        case InitialSpec::Kind::dark:
            return "dark";
        case InitialSpec::Kind::thermal:
            return "thermal";
        case InitialSpec::Kind::amplitudes:
            return "amplitudes";
        default:
            return "basis";
    }
}

std::string_view to_string(SpaceSpec::Kind k) {
    switch (k) {
        case SpaceSpec::Kind::full:
            return "full";
        case SpaceSpec::Kind::truncated:
            return "truncated";
        default:
            return "manifold";
    }
}

const std::vector<std::string>& known_outputs() {
    static const std::vector<std::string> names{"populations", "negativity", "dark_populations"};
    return names;
}

StateVector initial_pure_state(const ScenarioConfig& cfg, const SpacePtr& space) {
    const auto& in = cfg.initial;
    switch (in.kind) {
        case InitialSpec::Kind::basis:
            if (!space->contains(in.state)) {
                throw ParameterError("field 'initial.state': " + to_string(in.state) +
                                     " is outside the configured space");
            }
            return StateVector::basis(space, in.state);
        case InitialSpec::Kind::dark:
            try {
                return dark_state(in.n, cfg.params.kappa_a, cfg.params.kappa_b, space);
            } catch (const std::exception& e) {
                throw ParameterError(std::string("field 'initial.n': ") + e.what());
            }
        case InitialSpec::Kind::amplitudes: {
            if (in.amplitudes.size() != space->dimension()) {
                throw ParameterError("field 'initial.values': expected " +
                                     std::to_string(space->dimension()) + " amplitudes, got " +
                                     std::to_string(in.amplitudes.size()));
            }
            Vector v(static_cast<Eigen::Index>(in.amplitudes.size()));
            for (std::size_t i = 0; i < in.amplitudes.size(); ++i) {
                v(static_cast<Eigen::Index>(i)) = in.amplitudes[i];
            }
            if (std::abs(v.norm() - 1.0) > 1e-9) {
                throw ParameterError("field 'initial.values': amplitudes are not normalised");
            }
            return {space, std::move(v)};
        }
        default:
            throw ParameterError("field 'initial.type': thermal states are mixed");
    }
}

DensityMatrix initial_density(const ScenarioConfig& cfg, const SpacePtr& space) {
    if (cfg.initial.kind == InitialSpec::Kind::thermal) {
        try {
            return thermal_mixture(cfg.initial.n_bar, cfg.initial.cutoff, space);
        } catch (const CapacityError& e) {
            throw ParameterError(std::string("field 'initial.cutoff': ") + e.what());
        }
    }
    return DensityMatrix::pure(initial_pure_state(cfg, space));
}

std::vector<std::pair<int, Vector>> representable_darks(const SystemParams& params,
                                                        const SpacePtr& space) {
    std::vector<std::pair<int, Vector>> darks;
    if (params.kappa_a == 0.0 && params.kappa_b == 0.0) return darks;
    for (int n = 0; n <= 3; ++n) {
        try {
            darks.emplace_back(n, dark_state(n, params.kappa_a, params.kappa_b, space).amplitudes());
        } catch (const CapacityError&) {
        }
    }
    return darks;
}

void write_file(const fs::path& path, const std::string& content, RunResult& result) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    result.files.push_back(path);
}

template <typename T>
T rescaled(T traj, double unit) {
    for (double& t : traj.times) t *= unit;
    return traj;
}

}  // namespace

SpacePtr SpaceSpec::build() const {
    switch (kind) {
        case Kind::full:
            return build_space(atom_cap, cap_a, cap_b);
        case Kind::truncated:
            return truncated_space(atom_cap, excitations);
        default:
            return manifold_space(atom_cap, excitations);
    }
}

void ScenarioConfig::validate() const {
    parse_field("params", [&] {
        params.validate();
        return 0;
    });
    if (space.atom_cap < 0 || space.cap_a < 0 || space.cap_b < 0 || space.excitations < 0) {
        throw ParameterError("field 'space': caps must be nonnegative");
    }
    if (mode == SpinMode::exact && space.build()->atom_cap() > params.N) {
        throw ParameterError("field 'space.atom_cap': exceeds params.N in exact mode");
    }
    if (!(times.t_end > 0.0)) throw ParameterError("field 'times.t_end' must be > 0");
    if (times.samples < 2) throw ParameterError("field 'times.samples' must be >= 2");
    if (!(tolerance > 0.0)) throw ParameterError("field 'tolerance' must be > 0");
    for (const auto& o : outputs) {
        if (std::find(known_outputs().begin(), known_outputs().end(), o) == known_outputs().end()) {
            throw ParameterError("field 'outputs': unknown series \"" + o + "\"");
        }
    }
    if (solver == Solver::schrodinger && initial.kind == InitialSpec::Kind::thermal) {
        throw ParameterError("field 'solver': a thermal initial state needs the master equation");
    }
    if (solver == Solver::schrodinger && (params.gamma_atom > 0.0 || params.cantilever_damping)) {
        throw ParameterError("field 'solver': dissipation needs the master equation");
    }
    // initial state must fit the space
    if (initial.kind == InitialSpec::Kind::thermal) {
        if (!(initial.n_bar >= 0.0)) throw ParameterError("field 'initial.n_bar' must be >= 0");
        if (initial.cutoff < 1) throw ParameterError("field 'initial.cutoff' must be >= 1");
    }
    initial_density(*this, space.build());
}

double ScenarioConfig::kappa_unit() const {
    const double k = std::sqrt(0.5 * (params.kappa_a * params.kappa_a +
                                      params.kappa_b * params.kappa_b));
    return k > 0.0 ? k : 1.0;
}

std::vector<double> ScenarioConfig::sample_times() const {
    std::vector<double> t(static_cast<std::size_t>(times.samples));
    const double end = times.t_end / kappa_unit();
    for (int i = 0; i < times.samples; ++i) {
        t[static_cast<std::size_t>(i)] = end * i / (times.samples - 1);
    }
    return t;
}

bool ScenarioConfig::uses_master_equation() const {
    if (solver != Solver::automatic) return solver == Solver::master;
    return initial.kind == InitialSpec::Kind::thermal || params.gamma_atom > 0.0 ||
           (params.cantilever_damping && params.gamma_cant > 0.0);
}

ScenarioConfig parse_config(const json& j) {
    if (!j.is_object()) throw ParameterError("config must be a JSON object");
    ScenarioConfig cfg;
    if (j.contains("name")) cfg.name = text(j, "name", "");
    if (cfg.name.empty() || cfg.name.find_first_of("/\\") != std::string::npos) {
        throw ParameterError("field 'name' must be a plain, non-empty file stem");
    }
    if (j.contains("mode")) {
        cfg.mode = parse_field("mode", [&] { return parse_spin_mode(text(j, "mode", "")); });
    }
    if (j.contains("picture")) {
        cfg.picture =
            parse_field("picture", [&] { return parse_picture(text(j, "picture", "")); });
    }
    if (j.contains("solver")) {
        const auto s = text(j, "solver", "");
        if (s == "auto") cfg.solver = Solver::automatic;
        else if (s == "schrodinger") cfg.solver = Solver::schrodinger;
        else if (s == "master") cfg.solver = Solver::master;
        else throw ParameterError("field 'solver' must be auto, schrodinger or master");
    }

    const auto& p = require(j, "params", "");
    cfg.params.omega0 = number_or(p, "omega0", "params.", cfg.params.omega0);
    if (p.contains("kappa")) {
        cfg.params.kappa_a = cfg.params.kappa_b = number(p, "kappa", "params.");
    }
    cfg.params.kappa_a = number_or(p, "kappa_a", "params.", cfg.params.kappa_a);
    cfg.params.kappa_b = number_or(p, "kappa_b", "params.", cfg.params.kappa_b);
    cfg.params.N = integer_or(p, "N", "params.", cfg.params.N);
    cfg.params.gamma_atom = number_or(p, "gamma_atom", "params.", 0.0);
    cfg.params.gamma_cant = number_or(p, "gamma_cant", "params.", 0.0);
    if (p.contains("cantilever_damping")) {
        if (!p.at("cantilever_damping").is_boolean()) {
            throw ParameterError("field 'params.cantilever_damping' must be a boolean");
        }
        cfg.params.cantilever_damping = p.at("cantilever_damping").get<bool>();
    }
    if (p.contains("N_gamma_over_kappa")) {
        const double ratio = number(p, "N_gamma_over_kappa", "params.");
        if (!(ratio >= 0.0)) throw ParameterError("field 'params.N_gamma_over_kappa' must be >= 0");
        if (cfg.params.N < 1) throw ParameterError("field 'params.N' must be >= 1");
        cfg.params.gamma_atom = ratio * cfg.kappa_unit() / cfg.params.N;
        cfg.notes["N_gamma_over_kappa"] = ratio;
    }

    const auto& in = require(j, "initial", "");
    const auto type = text(in, "type", "initial.");
    if (type == "basis") {
        cfg.initial.kind = InitialSpec::Kind::basis;
        const auto& s = require(in, "state", "initial.");
        if (!s.is_array() || s.size() != 3 || !s[0].is_number_integer() ||
            !s[1].is_number_integer() || !s[2].is_number_integer()) {
            throw ParameterError("field 'initial.state' must be [atom_exc, n_a, n_b]");
        }
        cfg.initial.state = {s[0].get<int>(), s[1].get<int>(), s[2].get<int>()};
    } else if (type == "dark") {
        cfg.initial.kind = InitialSpec::Kind::dark;
        cfg.initial.n = integer(in, "n", "initial.");
    } else if (type == "thermal") {
        cfg.initial.kind = InitialSpec::Kind::thermal;
        cfg.initial.n_bar = number(in, "n_bar", "initial.");
        cfg.initial.cutoff = integer(in, "cutoff", "initial.");
    } else if (type == "amplitudes") {
        cfg.initial.kind = InitialSpec::Kind::amplitudes;
        const auto& vals = require(in, "values", "initial.");
        if (!vals.is_array()) throw ParameterError("field 'initial.values' must be an array");
        for (const auto& v : vals) {
            if (v.is_number()) {
                cfg.initial.amplitudes.emplace_back(v.get<double>(), 0.0);
            } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
                cfg.initial.amplitudes.emplace_back(v[0].get<double>(), v[1].get<double>());
            } else {
                throw ParameterError("field 'initial.values' entries must be numbers or [re, im]");
            }
        }
    } else {
        throw ParameterError("field 'initial.type' must be basis, dark, thermal or amplitudes");
    }

    const auto& sp = require(j, "space", "");
    const auto kind = text(sp, "kind", "space.");
    if (kind == "full") {
        cfg.space.kind = SpaceSpec::Kind::full;
        cfg.space.cap_a = integer(sp, "cap_a", "space.");
        cfg.space.cap_b = integer(sp, "cap_b", "space.");
        cfg.space.atom_cap = integer_or(sp, "atom_cap", "space.", 1);
    } else if (kind == "manifold" || kind == "truncated") {
        cfg.space.kind = kind == "manifold" ? SpaceSpec::Kind::manifold : SpaceSpec::Kind::truncated;
        cfg.space.excitations = integer(sp, "excitations", "space.");
        // the boson picture has no natural atomic cap below the excitation number
        const int fallback = cfg.mode == SpinMode::hp ? cfg.space.excitations : 1;
        cfg.space.atom_cap = integer_or(sp, "atom_cap", "space.", fallback);
    } else {
        throw ParameterError("field 'space.kind' must be full, manifold or truncated");
    }

    const auto& t = require(j, "times", "");
    cfg.times.t_end = number(t, "t_end", "times.");
    cfg.times.samples = integer(t, "samples", "times.");

    if (j.contains("outputs")) {
        const auto& o = j.at("outputs");
        if (!o.is_array()) throw ParameterError("field 'outputs' must be an array of strings");
        cfg.outputs.clear();
        for (const auto& v : o) {
            if (!v.is_string()) throw ParameterError("field 'outputs' must be an array of strings");
            cfg.outputs.push_back(v.get<std::string>());
        }
    }
    cfg.tolerance = number_or(j, "tolerance", "", cfg.tolerance);
    if (j.contains("notes") && j.at("notes").is_object()) {
        for (const auto& [k, v] : j.at("notes").items()) {
            if (!cfg.notes.contains(k)) cfg.notes[k] = v;
        }
    }
    cfg.validate();
    return cfg;
}

json to_json(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["mode"] = std::string(to_string(cfg.mode));
    j["picture"] = std::string(to_string(cfg.picture));
    j["solver"] = std::string(to_string(cfg.solver));
    j["params"] = {{"omega0", cfg.params.omega0},
                   {"kappa_a", cfg.params.kappa_a},
                   {"kappa_b", cfg.params.kappa_b},
                   {"N", cfg.params.N},
                   {"gamma_atom", cfg.params.gamma_atom},
                   {"gamma_cant", cfg.params.gamma_cant},
                   {"cantilever_damping", cfg.params.cantilever_damping}};
    json in{{"type", std::string(to_string(cfg.initial.kind))}};
    switch (cfg.initial.kind) {
        case InitialSpec::Kind::basis:
            in["state"] = {cfg.initial.state.atom_exc, cfg.initial.state.n_a, cfg.initial.state.n_b};
            break;
        case InitialSpec::Kind::dark:
            in["n"] = cfg.initial.n;
            break;
        case InitialSpec::Kind::thermal:
            in["n_bar"] = cfg.initial.n_bar;
            in["cutoff"] = cfg.initial.cutoff;
            break;
        case InitialSpec::Kind::amplitudes:
            in["values"] = json::array();
            for (const auto& a : cfg.initial.amplitudes) in["values"].push_back({a.real(), a.imag()});
            break;
    }
    j["initial"] = in;
    json sp{{"kind", std::string(to_string(cfg.space.kind))}, {"atom_cap", cfg.space.atom_cap}};
    if (cfg.space.kind == SpaceSpec::Kind::full) {
        sp["cap_a"] = cfg.space.cap_a;
        sp["cap_b"] = cfg.space.cap_b;
    } else {
        sp["excitations"] = cfg.space.excitations;
    }
    j["space"] = sp;
    j["times"] = {{"t_end", cfg.times.t_end}, {"samples", cfg.times.samples}};
    j["outputs"] = cfg.outputs;
    j["tolerance"] = cfg.tolerance;
    j["notes"] = cfg.notes;
    return j;
}

RunResult run_scenario(const ScenarioConfig& cfg, const fs::path& out_dir) {
    cfg.validate();
    fs::create_directories(out_dir);
    const auto space = cfg.space.build();
    const auto times = cfg.sample_times();
    const double unit = cfg.kappa_unit();
    const auto wants = [&cfg](const char* o) {
        return std::find(cfg.outputs.begin(), cfg.outputs.end(), o) != cfg.outputs.end();
    };
    const auto darks = representable_darks(cfg.params, space);

    RunResult result;
    json sidecar = to_json(cfg);
    sidecar["tool_version"] = kToolVersion;
    if (cfg.uses_master_equation()) {
        sidecar["notes"]["decay_rate_convention"] =
            "gamma_atom is the single-spin rate; one collective excitation decays at N * gamma_atom";
    }
    write_file(out_dir / (cfg.name + ".json"), sidecar.dump(2) + "\n", result);
    {
        std::ostringstream os;
        space->write_csv(os);
        write_file(out_dir / (cfg.name + "_basis.csv"), os.str(), result);
    }

    // per-sample dark projections, shared by both solvers
    std::vector<std::vector<double>> dark_rows;

    if (cfg.uses_master_equation()) {
        const auto rho0 = initial_density(cfg, space);
        auto traj = evolve_master(rho0, cfg.params, times, cfg.tolerance, cfg.mode, cfg.picture);
        traj.meta["scenario"] = cfg.name;
        if (wants("populations")) {
            std::ostringstream os;
            rescaled(traj, unit).write_csv(os, cfg.params);
            write_file(out_dir / (cfg.name + "_populations.csv"), os.str(), result);
        }
        for (const auto& rho : traj.rhos) {
            std::vector<double> row;
            for (const auto& [n, d] : darks) {
                row.push_back((d.adjoint() * rho.entries() * d)(0, 0).real());
            }
            dark_rows.push_back(std::move(row));
        }
        if (wants("negativity")) result.negativity = negativity_trajectory(rescaled(traj, unit));
        result.mixed = std::move(traj);
    } else {
        const auto psi0 = initial_pure_state(cfg, space);
        const auto H = hamiltonian(cfg.params, space, cfg.picture, cfg.mode);
        auto traj = evolve_schrodinger(H, psi0, times, cfg.tolerance);
        traj.meta["scenario"] = cfg.name;
        if (wants("populations")) {
            std::ostringstream os;
            rescaled(traj, unit).write_csv(os);
            write_file(out_dir / (cfg.name + "_populations.csv"), os.str(), result);
        }
        for (const auto& psi : traj.states) {
            std::vector<double> row;
            for (const auto& [n, d] : darks) row.push_back(std::norm(d.dot(psi.amplitudes())));
            dark_rows.push_back(std::move(row));
        }
        if (wants("negativity")) result.negativity = negativity_trajectory(rescaled(traj, unit));
        result.pure = std::move(traj);
    }

    if (result.negativity) {
        std::ostringstream os;
        write_negativity_csv(os, *result.negativity);
        write_file(out_dir / (cfg.name + "_negativity.csv"), os.str(), result);
    }
    if (wants("dark_populations")) {
        std::ostringstream os;
        os << 't';
        for (const auto& [n, d] : darks) os << ",dark_pop_" << n;
        os << '\n';
        for (std::size_t k = 0; k < times.size(); ++k) {
            os << format_number(times[k] * unit);
            for (double v : dark_rows[k]) os << ',' << format_number(v);
            os << '\n';
        }
        write_file(out_dir / (cfg.name + "_dark_populations.csv"), os.str(), result);
    }
    return result;
}

const std::vector<std::string>& figure_names() {
    static const std::vector<std::string> names{"fig2", "fig3", "fig4", "fig5",
                                                "fig6", "fig7", "fig8"};
    return names;
}

namespace {

// kappa = 1, so times are kappa * t. Two Rabi periods of the one-excitation manifold.
constexpr double kTwoPeriods = 2.0 * 2.0 * std::numbers::pi / std::numbers::sqrt2;
constexpr double kDefaultCollectiveDecay = 10.0;  // N Gamma / kappa

ScenarioConfig base_config(const std::string& name) {
    ScenarioConfig c;
    c.name = name;
    c.params.omega0 = 100.0;
    c.params.kappa_a = c.params.kappa_b = 1.0;
    c.params.N = 100;
    c.tolerance = 1e-10;
    return c;
}

ScenarioConfig unitary(const std::string& name, BasisState start, int excitations,
                       double t_end, int samples, std::vector<std::string> outputs) {
    auto c = base_config(name);
    c.initial.kind = InitialSpec::Kind::basis;
    c.initial.state = start;
    c.space.kind = SpaceSpec::Kind::manifold;
    c.space.atom_cap = 1;
    c.space.excitations = excitations;
    c.times = {t_end, samples};
    c.outputs = std::move(outputs);
    return c;
}

ScenarioConfig dissipative(const std::string& name, int excitations, double t_end) {
    auto c = base_config(name);
    c.params.gamma_atom = kDefaultCollectiveDecay / c.params.N;
    c.notes["N_gamma_over_kappa"] = kDefaultCollectiveDecay;
    c.notes["caveat"] = "N_gamma_over_kappa = 10 is a default choice, not a fitted value";
    c.space.kind = SpaceSpec::Kind::truncated;
    c.space.atom_cap = 1;
    c.space.excitations = excitations;
    c.times = {t_end, 601};
    c.outputs = {"populations", "dark_populations", "negativity"};
    return c;
}

}  // namespace

std::vector<ScenarioConfig> figure_configs(const std::string& name) {
    if (name == "fig2") {
        return {unitary("fig2a", {0, 1, 0}, 1, kTwoPeriods, 401, {"populations"}),
                unitary("fig2b", {1, 0, 0}, 1, kTwoPeriods, 401, {"populations"})};
    }
    if (name == "fig3") {
        return {unitary("fig3", {0, 3, 0}, 3, 4.0 * kTwoPeriods, 801, {"populations"})};
    }
    if (name == "fig4") {
        auto c = dissipative("fig4", 1, 30.0);
        c.initial.state = {0, 1, 0};
        return {c};
    }
    if (name == "fig5") {
        auto c = dissipative("fig5", 2, 30.0);
        c.initial.state = {0, 0, 2};
        return {c};
    }
    if (name == "fig6") {
        auto c = dissipative("fig6", 3, 30.0);
        c.initial.kind = InitialSpec::Kind::thermal;
        c.initial.n_bar = 0.3;
        c.initial.cutoff = 3;
        return {c};
    }
    if (name == "fig7") {
        return {unitary("fig7_n1_cantilever", {0, 1, 0}, 1, kTwoPeriods, 801, {"negativity"}),
                unitary("fig7_n1_gas", {1, 0, 0}, 1, kTwoPeriods, 801, {"negativity"}),
                unitary("fig7_n2", {0, 2, 0}, 2, kTwoPeriods, 801, {"negativity"}),
                unitary("fig7_n3", {0, 3, 0}, 3, kTwoPeriods, 801, {"negativity"})};
    }
    if (name == "fig8") {
        auto c = base_config("fig8");
        c.initial.kind = InitialSpec::Kind::thermal;
        c.initial.n_bar = 0.3;
        c.initial.cutoff = 3;
        c.space.kind = SpaceSpec::Kind::truncated;
        c.space.atom_cap = 1;
        c.space.excitations = 3;
        c.times = {2.0 * kTwoPeriods, 801};
        c.outputs = {"negativity", "populations"};
        return {c};
    }
    throw ParameterError("unknown figure '" + name + "'");
}

std::vector<fs::path> run_figure(const std::string& name, const fs::path& out_dir) {
    const auto configs = figure_configs(name);
    std::vector<fs::path> files;
    std::ostringstream script;
    script << "# Plot stub for " << name << "; run with python3 from this directory.\n"
           << "import csv\nimport matplotlib.pyplot as plt\n\n"
           << "def load(path):\n"
           << "    with open(path) as f:\n"
           << "        rows = list(csv.reader(f))\n"
           << "    return rows[0], [[float(x) for x in r] for r in rows[1:]]\n\n";
    for (const auto& cfg : configs) {
        auto r = run_scenario(cfg, out_dir);
        files.insert(files.end(), r.files.begin(), r.files.end());
        for (const auto& f : r.files) {
            const auto fname = f.filename().string();
            if (f.extension() != ".csv" || fname.ends_with("_basis.csv")) continue;
            script << "header, rows = load(\"" << fname << "\")\n"
                   << "plt.figure()\n"
                   << "for k, label in enumerate(header[1:], start=1):\n"
                   << "    if label.startswith((\"pop\", \"negativity\", \"dark_pop\")):\n"
                   << "        plt.plot([r[0] for r in rows], [r[k] for r in rows], label=label)\n"
                   << "plt.xlabel(\"kappa t\")\nplt.legend()\nplt.title(\"" << fname << "\")\n\n";
        }
    }
    script << "plt.show()\n";
    const auto script_path = out_dir / (name + "_plot.py");
    std::ofstream(script_path, std::ios::binary) << script.str();
    files.push_back(script_path);
    return files;
}

physical::DeviceParams parse_device(const json& j) {
    if (!j.is_object()) throw ParameterError("device description must be a JSON object");
    physical::DeviceParams dev;
    dev.d = number(j, "d", "");
    dev.N = number(j, "N", "");
    dev.m_eff = number(j, "m_eff", "");
    dev.omega0 = number(j, "omega0", "");
    dev.N_mag = number(j, "N_mag", "");
    dev.mu = j.contains("mu") ? number(j, "mu", "")
                              : dev.N_mag * physical::kNickelMomentBohr * physical::kBohrMagneton;
    dev.B0 = number_or(j, "B0", "", dev.B0);
    dev.validate();
    return dev;
}

int run_sweep(const std::string& pattern, const fs::path& out_root, unsigned jobs,
              std::ostream& log) {
    glob_t g{};
    std::vector<fs::path> configs;
    if (::glob(pattern.c_str(), 0, nullptr, &g) == 0) {
        for (std::size_t i = 0; i < g.gl_pathc; ++i) configs.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (configs.empty()) {
        log << "sweep: no config matches " << pattern << '\n';
        return 1;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<int> failures{0};
    std::mutex log_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
            const auto& path = configs[i];
            try {
                std::ifstream in(path);
                if (!in) throw std::runtime_error("cannot read file");
                const auto cfg = parse_config(json::parse(in));
                run_scenario(cfg, out_root / path.stem());
            } catch (const std::exception& e) {
                ++failures;
                std::lock_guard lock(log_mutex);
                log << "sweep: " << path.string() << ": " << e.what() << '\n';
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return failures;
}

}  // namespace nanomech
