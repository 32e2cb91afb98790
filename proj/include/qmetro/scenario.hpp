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

#ifndef QMETRO_SCENARIO_HPP
#define QMETRO_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qmetro/fisher.hpp"
#include "qmetro/states.hpp"

namespace qmetro {

/// Parameters of a registered state family. Only the fields in the family's signature may be set.
///
///   msps_state               assignment | targets
///   meps_state               total, targets
///   mspe_noon_product        particles
///   mepe_multinoon           particles            (needs direction)
///   p_producible_noon_chain  particles, P
///   lambda_sep_multinoon     particles, partition (needs direction)
///   block_multinoon          total, me, pe        (needs direction)
///   sample                   class, total [, seed]
struct StateSpec {
    std::string family;
    std::optional<std::vector<int>> assignment;
    std::optional<std::vector<double>> targets;
    std::optional<int> total;
    std::optional<std::vector<int>> particles;
    std::optional<std::vector<int>> P;
    std::optional<std::vector<std::vector<int>>> partition;
    std::optional<int> me;
    std::optional<int> pe;
    std::optional<std::string> sample_class;
    std::optional<std::uint64_t> seed;
    /// "native" (default) or "distinguishable" (symmetric embedding of a fixed-number Fock state).
    std::optional<std::string> basis;

    bool operator==(const StateSpec &) const = default;
};

struct MomentSpec {
    std::vector<double> first;
    std::vector<std::vector<double>> second;
    bool operator==(const MomentSpec &) const = default;
};

/// `<bound>` or `<bound>:saturated`.
struct CheckSpec {
    std::string bound;
    bool saturated = false;
    bool operator==(const CheckSpec &) const = default;
    std::string to_string() const;
};

/// noon_parity | computational | vectors
struct PovmSpec {
    std::string kind;
    /// Complex entries as [re, im] pairs, one list per vector.
    std::vector<std::vector<std::pair<double, double>>> vectors;
    bool complete = true;
    bool operator==(const PovmSpec &) const = default;
};

struct GridSpec {
    double half_width = 0.5;
    int points = 201;
    bool operator==(const GridSpec &) const = default;
};

struct OutputSpec {
    std::optional<std::string> report;
    std::optional<std::string> estimates;
    std::optional<std::string> summary;
    bool operator==(const OutputSpec &) const = default;
};

struct Scenario {
    std::string name;
    std::vector<std::vector<double>> spectra;
    StateSpec state;
    std::optional<std::vector<double>> direction;
    std::optional<std::vector<int>> P;
    std::optional<std::vector<std::vector<int>>> partition;
    std::optional<std::vector<std::vector<double>>> weights;
    std::optional<MomentSpec> moments;
    std::vector<CheckSpec> checks;
    std::optional<PovmSpec> povm;
    std::optional<std::vector<double>> theta;
    std::optional<GridSpec> grid;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> dimension_cap;
    OutputSpec output;

    bool operator==(const Scenario &) const = default;

    ModeConfig config() const;
    int modes() const {
        return static_cast<int>(spectra.size());
    }
};

/// Names accepted in `checks`.
const std::vector<std::string> &known_bounds();
CheckSpec parse_check(std::string_view text);

/// Throws ParseError on malformed input, unknown keys or check names, and parameters outside the
/// family's signature.
Scenario parse_scenario(const nlohmann::json &doc);
Scenario parse_scenario_text(std::string_view text);
Scenario load_scenario(const std::string &path);
nlohmann::json to_json(const Scenario &scenario);

std::optional<Direction> scenario_direction(const Scenario &scenario);
EntanglementSpec scenario_entanglement(const Scenario &scenario);
QuantumState build_state(const Scenario &scenario);
Povm build_povm(const PovmSpec &spec, const Basis &basis);

}  // namespace qmetro

#endif
