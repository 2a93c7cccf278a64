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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "nanomech/dynamics.hpp"
#include "nanomech/errors.hpp"
#include "nanomech/scenario.hpp"

using namespace nanomech;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag) {
    const auto dir = fs::temp_directory_path() / ("nanomech_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string* header = nullptr) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

json one_excitation_config() {
    return json::parse(R"({
        "name": "one",
        "params": {"kappa": 1.0, "N": 100},
        "initial": {"type": "basis", "state": [0, 1, 0]},
        "space": {"kind": "manifold", "excitations": 1},
        "times": {"t_end": 6.0, "samples": 31},
        "outputs": ["populations", "negativity", "dark_populations"],
        "tolerance": 1e-11
    })");
}

std::string error_of(const json& j) {
    try {
        parse_config(j);
    } catch (const ParameterError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("config errors name the field") {
    auto j = one_excitation_config();
    j["times"]["samples"] = 1;
    CHECK(error_of(j).find("times.samples") != std::string::npos);

    j = one_excitation_config();
    j["times"]["t_end"] = -1.0;
    CHECK(error_of(j).find("times.t_end") != std::string::npos);

    j = one_excitation_config();
    j.erase("params");
    CHECK(error_of(j).find("params") != std::string::npos);

    j = one_excitation_config();
    j["params"]["N"] = -5;
    CHECK(error_of(j).find("params.N") != std::string::npos);

    j = one_excitation_config();
    j["mode"] = "quantum";
    CHECK(error_of(j).find("mode") != std::string::npos);

    j = one_excitation_config();
    j["initial"]["state"] = json::array({0, 3, 0});
    CHECK(error_of(j).find("initial") != std::string::npos);

    j = one_excitation_config();
    j["outputs"] = json::array({"wigner"});
    CHECK(error_of(j).find("outputs") != std::string::npos);

    j = one_excitation_config();
    j["space"]["kind"] = "sphere";
    CHECK(error_of(j).find("space.kind") != std::string::npos);

    j = one_excitation_config();
    j["params"]["kappa"] = "fast";
    CHECK(error_of(j).find("params.kappa") != std::string::npos);

    j = one_excitation_config();
    j["solver"] = "schrodinger";
    j["params"]["gamma_atom"] = 0.1;
    CHECK(error_of(j).find("solver") != std::string::npos);

    CHECK_NOTHROW(parse_config(one_excitation_config()));
}

TEST_CASE("decay knob and time unit") {
    auto j = one_excitation_config();
    j["params"]["kappa"] = 2.0;
    j["params"]["N_gamma_over_kappa"] = 10.0;
    j["space"] = {{"kind", "truncated"}, {"excitations", 1}};
    const auto cfg = parse_config(j);
    CHECK(cfg.params.gamma_atom == doctest::Approx(0.2));
    CHECK(cfg.kappa_unit() == 2.0);
    CHECK(cfg.uses_master_equation());
    const auto t = cfg.sample_times();
    CHECK(t.size() == 31);
    CHECK(t.back() == doctest::Approx(3.0));
}

TEST_CASE("one-excitation run matches the closed form") {
    const auto dir = scratch("one");
    const auto res = run_scenario(parse_config(one_excitation_config()), dir);
    CHECK(res.files.size() == 5);
    std::string header;
    const auto rows = read_csv(dir / "one_populations.csv", &header);
    REQUIRE(rows.size() == 31);
    CHECK(header.find("pop(0;1;0)") != std::string::npos);
    for (const auto& r : rows) {
        REQUIRE(r.size() == 10);
        const auto ref = analytic_one_excitation(1.0, r[0], OneExcitationStart::g10).populations();
        for (std::size_t k = 0; k < 3; ++k) CHECK(std::abs(r[7 + k] - ref[k]) < 1e-8);
    }
    const auto neg = read_csv(dir / "one_negativity.csv");
    CHECK(neg.size() == 31);
    const auto dark = read_csv(dir / "one_dark_populations.csv", &header);
    CHECK(header == "t,dark_pop_1");
    for (const auto& r : dark) {
        REQUIRE(r.size() == 2);
        CHECK(r[1] == doctest::Approx(0.5).epsilon(1e-9));
    }
    CHECK(fs::exists(dir / "one_basis.csv"));
}

TEST_CASE("reruns are byte-identical and the sidecar reproduces the run") {
    auto j = one_excitation_config();
    j["params"]["N_gamma_over_kappa"] = 10.0;
    j["space"] = {{"kind", "truncated"}, {"excitations", 2}};
    j["initial"] = {{"type", "thermal"}, {"n_bar", 0.3}, {"cutoff", 2}};
    j["times"]["t_end"] = 4.0;
    const auto cfg = parse_config(j);
    const auto a = scratch("rerun_a");
    const auto b = scratch("rerun_b");
    const auto c = scratch("rerun_c");
    run_scenario(cfg, a);
    run_scenario(cfg, b);

    const auto sidecar = json::parse(slurp(a / "one.json"));
    CHECK(sidecar.at("tool_version") == kToolVersion);
    CHECK(sidecar.at("notes").contains("decay_rate_convention"));
    run_scenario(parse_config(sidecar), c);

    for (const auto* f : {"one.json", "one_basis.csv", "one_populations.csv", "one_negativity.csv",
                          "one_dark_populations.csv"}) {
        CAPTURE(f);
        CHECK(slurp(a / f) == slurp(b / f));
        CHECK(slurp(a / f) == slurp(c / f));
    }
}

TEST_CASE("config round trip through json") {
    for (const auto& name : figure_names()) {
        for (const auto& cfg : figure_configs(name)) {
            const auto back = parse_config(to_json(cfg));
            CHECK(to_json(back) == to_json(cfg));
        }
    }
}

TEST_CASE("figure catalogue") {
    CHECK(figure_names().size() == 7);
    CHECK(figure_configs("fig2").size() == 2);
    CHECK(figure_configs("fig7").size() == 4);
    CHECK_THROWS_AS(figure_configs("fig99"), ParameterError);
    for (const auto& name : figure_names()) {
        for (const auto& cfg : figure_configs(name)) CHECK_NOTHROW(cfg.validate());
    }
    for (const auto* dissipative : {"fig4", "fig5", "fig6"}) {
        const auto cfg = figure_configs(dissipative).front();
        CHECK(cfg.uses_master_equation());
        CHECK(cfg.params.N * cfg.params.gamma_atom == doctest::Approx(10.0));
    }
}

TEST_CASE("fig2 writes two three-curve population files") {
    const auto dir = scratch("fig2");
    const auto files = run_figure("fig2", dir);
    CHECK(fs::exists(dir / "fig2_plot.py"));
    for (const auto* stem : {"fig2a", "fig2b"}) {
        std::string header;
        const auto rows = read_csv(dir / (std::string(stem) + "_populations.csv"), &header);
        CHECK(rows.size() == 401);
        std::size_t pops = 0;
        for (std::size_t pos = 0; (pos = header.find("pop(", pos)) != std::string::npos; ++pos) ++pops;
        CHECK(pops == 3);
        for (const auto& r : rows) CHECK(r[7] + r[8] + r[9] == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK(files.size() >= 7);
}

TEST_CASE("fig5 populations approach the dark-mixture asymptotes") {
    const auto cfg = figure_configs("fig5").front();
    const auto dir = scratch("fig5");
    const auto res = run_scenario(cfg, dir);
    REQUIRE(res.mixed);
    const auto& last = res.mixed->rhos.back();
    CHECK(last.population({0, 0, 2}) == doctest::Approx(0.0625).epsilon(1e-4));
    CHECK(last.population({0, 1, 1}) == doctest::Approx(0.125).epsilon(1e-4));
    CHECK(last.population({0, 2, 0}) == doctest::Approx(0.0625).epsilon(1e-4));
    CHECK(last.population({0, 1, 0}) == doctest::Approx(0.25).epsilon(1e-4));
    CHECK(last.population({0, 0, 1}) == doctest::Approx(0.25).epsilon(1e-4));
    CHECK(last.population({0, 0, 0}) == doctest::Approx(0.25).epsilon(1e-4));
    const auto dark = read_csv(dir / "fig5_dark_populations.csv");
    CHECK(dark.back()[1] == doctest::Approx(0.25).epsilon(1e-4));
    CHECK(dark.back()[2] == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(dark.back()[3] == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("thermal dissipative run settles") {
    const auto cfg = figure_configs("fig6").front();
    const auto dir = scratch("fig6");
    run_scenario(cfg, dir);
    const auto dark = read_csv(dir / "fig6_dark_populations.csv");
    const auto& end = dark.back();
    const auto& before = dark[dark.size() - 21];
    REQUIRE(end.size() == 5);
    for (std::size_t k = 1; k < end.size(); ++k) {
        CHECK(std::abs(end[k] - before[k]) < 1e-5);
        if (k >= 2) CHECK(end[k] > 0.0);
    }
    const auto neg = read_csv(dir / "fig6_negativity.csv");
    CHECK(neg.back()[1] > 0.0);
}

TEST_CASE("fig7 yields four negativity series") {
    const auto dir = scratch("fig7");
    run_figure("fig7", dir);
    for (const auto* stem : {"fig7_n1_cantilever", "fig7_n1_gas", "fig7_n2", "fig7_n3"}) {
        std::string header;
        const auto rows = read_csv(dir / (std::string(stem) + "_negativity.csv"), &header);
        CHECK(header == "t,negativity");
        CHECK(rows.size() == 801);
    }
}

TEST_CASE("device parsing") {
    auto j = json::parse(R"({"d": 2.5e-7, "N": 100, "m_eff": 1e-16, "omega0": 6283185.307179586,
                              "N_mag": 1e6, "B0": 1e-4})");
    const auto dev = parse_device(j);
    CHECK(dev.mu == doctest::Approx(1e6 * 0.6 * physical::kBohrMagneton));
    CHECK(physical::coupling_constant(dev).rad_per_s == doctest::Approx(38.5).epsilon(0.01));

    auto missing = j;
    missing.erase("m_eff");
    try {
        parse_device(missing);
        FAIL("expected ParameterError");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("m_eff") != std::string::npos);
    }
    auto negative = j;
    negative["d"] = -1.0;
    try {
        parse_device(negative);
        FAIL("expected ParameterError");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("'d'") != std::string::npos);
    }
}

TEST_CASE("sweep runs each config into its own directory") {
    const auto in = scratch("sweep_in");
    const auto out = scratch("sweep_out");
    auto good = one_excitation_config();
    good["times"]["samples"] = 5;
    for (const auto* stem : {"alpha", "beta"}) {
        good["name"] = stem;
        std::ofstream(in / (std::string(stem) + ".json")) << good.dump();
    }
    auto bad = good;
    bad["times"]["samples"] = 1;
    std::ofstream(in / "gamma.json") << bad.dump();
    std::ofstream(in / "broken.json") << "{ not json";

    std::ostringstream log;
    const int failures = run_sweep((in / "*.json").string(), out, 2, log);
    CHECK(failures == 2);
    CHECK(fs::exists(out / "alpha" / "alpha_populations.csv"));
    CHECK(fs::exists(out / "beta" / "beta_populations.csv"));
    CHECK(log.str().find("gamma") != std::string::npos);
    CHECK(log.str().find("broken") != std::string::npos);

    std::ostringstream none;
    CHECK(run_sweep((in / "*.nothing").string(), out, 1, none) == 1);
    CHECK(none.str().find("no config matches") != std::string::npos);
}
