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

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <thread>

#include "nanomech/csv.hpp"
#include "nanomech/errors.hpp"
#include "nanomech/scenario.hpp"

namespace {

nlohmann::json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw nanomech::ParameterError(path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two cantilevers coupled through a collective atomic spin"};
    app.set_version_flag("--version", nanomech::kToolVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    auto* simulate = app.add_subcommand("simulate", "Run one scenario config");
    simulate->add_option("config", config_path, "Scenario JSON")->required();
    simulate->add_option("--out", out_dir, "Output directory");

    std::string figure_name;
    std::string figure_out = ".";
    auto* figure = app.add_subcommand("figure", "Write curve data for a built-in figure config");
    figure->add_option("name", figure_name, "Figure name")
        ->required()
        ->check(CLI::IsMember(nanomech::figure_names()));
    figure->add_option("--out", figure_out, "Output directory");

    std::string device_path;
    auto* coupling = app.add_subcommand("coupling", "Print model rates for a device description");
    coupling->add_option("device", device_path, "Device JSON")->required();

    std::string pattern;
    std::string sweep_out = "sweep";
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* sweep = app.add_subcommand("sweep", "Run every config matching a glob");
    sweep->add_option("pattern", pattern, "Glob of scenario JSON files")->required();
    sweep->add_option("--out", sweep_out, "Root directory; one subdirectory per config");
    sweep->add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            const auto cfg = nanomech::parse_config(read_json(config_path));
            for (const auto& f : nanomech::run_scenario(cfg, out_dir).files) {
                std::cout << f.string() << '\n';
            }
        } else if (*figure) {
            for (const auto& f : nanomech::run_figure(figure_name, figure_out)) {
                std::cout << f.string() << '\n';
            }
        } else if (*coupling) {
            const auto dev = nanomech::parse_device(read_json(device_path));
            std::printf("%-26s %-20s %s\n", "name", "value", "unit");
            for (const auto& row : nanomech::physical::coupling_report(dev)) {
                std::printf("%-26s %-20s %s\n", row.name.c_str(),
                            nanomech::format_number(row.value).c_str(), row.unit.c_str());
            }
        } else if (*sweep) {
            return nanomech::run_sweep(pattern, sweep_out, jobs, std::cerr) == 0 ? 0 : 1;
        }
    } catch (const nanomech::ParameterError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const nanomech::IntegrationError& e) {
        std::cerr << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
