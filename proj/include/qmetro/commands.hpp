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

#ifndef QMETRO_COMMANDS_HPP
#define QMETRO_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qmetro/bounds.hpp"
#include "qmetro/estimation.hpp"
#include "qmetro/scenario.hpp"

namespace qmetro {

enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2 };

nlohmann::json matrix_json(const RMatrix &m);
nlohmann::json vector_json(const RVector &v);
nlohmann::json report_json(const BoundReport &report);

struct VerifyResult {
    nlohmann::json report;
    bool passed = true;
};

/// Evaluates the state's Fisher data, the standard bound set and every requested check.
VerifyResult run_verify(const Scenario &scenario);

/// One row per valid (M_e, P_e).
nlohmann::json gain_table(int particles, int modes);
std::string gain_csv(int particles, int modes);

/// F_SN, F_MS and F_HL for the given moments, plus F_P and F_Lambda when P or a partition is given.
nlohmann::json bounds_table(const ModeConfig &config, const MomentData &moments, const Direction &direction,
                            const std::optional<std::vector<int>> &P,
                            const std::optional<std::vector<std::vector<int>>> &partition);
std::string bounds_csv(const nlohmann::json &table);

struct MonteCarloResult {
    EstimationRun run;
    CrbReport report;
    RMatrix fisher;
    RMatrix quantum_fisher;
    /// Non-degenerate runs pass when no direction exceeds the weak bound by 3 standard errors.
    bool passed = true;
};

/// Throws InvalidArgs when the scenario has no POVM.
MonteCarloResult run_montecarlo(const Scenario &scenario, std::uint64_t mu, std::uint64_t records,
                                std::uint64_t seed);
nlohmann::json montecarlo_json(const MonteCarloResult &result);

}  // namespace qmetro

#endif
