// Copyright 2026 The qmetro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qmetro: scenario-driven verification of multiparameter phase-estimation bounds.
//
//   qmetro verify     --scenario FILE [--out FILE] [--seed S]
//   qmetro gain       --particles N --modes M [--out FILE] [--format csv|json]
//   qmetro montecarlo --scenario FILE [--mu U] [--records R] [--seed S] [--out FILE] [--format csv|json]
//   qmetro bounds     (--scenario FILE | --particles N --modes M) [--out FILE] [--format json|csv]
//
// Exit status: 0 success, 1 a check failed (the report is still written), 2 usage or input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include "qmetro/commands.hpp"
#include "qmetro/error.hpp"

namespace {

using nlohmann::json;

void emit(const std::string &text, const std::optional<std::string> &path) {
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path);
    if (!out) {
        throw qmetro::Error(qmetro::ErrorCode::InvalidArgs, "cannot write " + *path);
    }
    out << text;
}

std::optional<std::string> choose(const std::string &flag, const std::optional<std::string> &fallback) {
    if (!flag.empty()) {
        return flag;
    }
    return fallback;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multiparameter quantum phase-estimation bounds"};
    app.require_subcommand(1);

    std::string scenario_path, out_path, format;
    std::uint64_t seed = 0, mu = 10000;
    std::uint32_t records = 200;
    int particles = 0, modes = 0;

    auto *verify = app.add_subcommand("verify", "Evaluate the bounds and checks of a scenario");
    verify->add_option("--scenario", scenario_path, "Scenario file (JSON)")->required();
    verify->add_option("--out", out_path, "Report path (default: scenario output.report, else stdout)");
    verify->add_option("--seed", seed, "Seed for sampled states, overriding the scenario");

    auto *gain = app.add_subcommand("gain", "Gain factors for all (M_e, P_e)");
    gain->add_option("--particles", particles, "Total particle number N")->required();
    gain->add_option("--modes", modes, "Number of modes M")->required();
    gain->add_option("--out", out_path, "Output path (default stdout)");
    gain->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto *mc = app.add_subcommand("montecarlo", "Simulated measurements and maximum-likelihood estimation");
    mc->add_option("--scenario", scenario_path, "Scenario file with a POVM")->required();
    mc->add_option("--mu", mu, "Repetitions per record");
    mc->add_option("--records", records, "Number of records");
    mc->add_option("--seed", seed, "Master seed; record r uses seed + r");
    mc->add_option("--out", out_path, "Per-record estimates CSV (default: scenario output.estimates)");
    mc->add_option("--format", format, "Summary format, csv or json")->check(CLI::IsMember({"csv", "json"}));

    auto *bounds = app.add_subcommand("bounds", "Bound matrices for given moments");
    bounds->add_option("--scenario", scenario_path, "Scenario with moments, direction and entanglement");
    bounds->add_option("--particles", particles, "Total particle number, split evenly over the modes");
    bounds->add_option("--modes", modes, "Number of two-level modes");
    bounds->add_option("--out", out_path, "Output path (default stdout)");
    bounds->add_option("--format", format, "json or csv")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return qmetro::kExitUsage;
    }

    try {
        if (verify->parsed()) {
            auto scenario = qmetro::load_scenario(scenario_path);
            if (verify->count("--seed")) {
                scenario.seed = seed;
            }
            auto result = qmetro::run_verify(scenario);
            emit(result.report.dump(2) + "\n", choose(out_path, scenario.output.report));
            return result.passed ? qmetro::kExitOk : qmetro::kExitCheckFailed;
        }
        if (gain->parsed()) {
            std::string text = format == "json" ? qmetro::gain_table(particles, modes).dump(2) + "\n"
                                                : qmetro::gain_csv(particles, modes);
            emit(text, choose(out_path, std::nullopt));
            return qmetro::kExitOk;
        }
        if (mc->parsed()) {
            auto scenario = qmetro::load_scenario(scenario_path);
            std::uint64_t master = mc->count("--seed") ? seed : scenario.seed.value_or(0);
            auto result = qmetro::run_montecarlo(scenario, mu, records, master);
            if (auto path = choose(out_path, scenario.output.estimates)) {
                emit(qmetro::estimates_csv(result.run), path);
            }
            std::string summary = format == "json" ? qmetro::montecarlo_json(result).dump(2) + "\n"
                                                   : qmetro::summary_csv(result.report);
            emit(summary, scenario.output.summary);
            if (scenario.output.summary) {
                std::cout << summary;
            }
            return result.passed ? qmetro::kExitOk : qmetro::kExitCheckFailed;
        }
        if (bounds->parsed()) {
            json table;
            if (!scenario_path.empty()) {
                auto scenario = qmetro::load_scenario(scenario_path);
                auto config = scenario.config();
                qmetro::MomentData moments;
                if (scenario.moments) {
                    const auto &spec = *scenario.moments;
                    const auto m = static_cast<Eigen::Index>(spec.first.size());
                    moments.first = Eigen::Map<const qmetro::RVector>(spec.first.data(), m);
                    moments.second.resize(m, m);
                    for (Eigen::Index i = 0; i < m; ++i) {
                        for (Eigen::Index j = 0; j < m; ++j) {
                            moments.second(i, j) = spec.second.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
                        }
                    }
                } else {
                    auto state = qmetro::build_state(scenario);
                    moments = qmetro::moments_from_state(state, qmetro::build_generators(state.basis()));
                }
                auto direction =
                    qmetro::scenario_direction(scenario).value_or(qmetro::Direction::uniform(config.modes()));
                table = qmetro::bounds_table(config, moments, direction, scenario.P, scenario.partition);
            } else {
                if (modes < 1 || particles < 0) {
                    throw qmetro::Error(qmetro::ErrorCode::InvalidArgs,
                                        "bounds needs --scenario or --particles and --modes");
                }
                auto config = qmetro::ModeConfig::two_level(modes);
                auto moments = qmetro::MomentData::fixed(qmetro::even_split(particles, modes));
                table = qmetro::bounds_table(config, moments, qmetro::Direction::uniform(modes), std::nullopt,
                                             std::nullopt);
            }
            emit(format == "csv" ? qmetro::bounds_csv(table) : table.dump(2) + "\n", choose(out_path, std::nullopt));
            return qmetro::kExitOk;
        }
    } catch (const qmetro::Error &e) {
        std::cerr << "qmetro: " << e.what() << "\n";
        return qmetro::kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "qmetro: " << e.what() << "\n";
        return qmetro::kExitUsage;
    }
    return qmetro::kExitUsage;
}
