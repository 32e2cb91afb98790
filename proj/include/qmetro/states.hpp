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
#ifndef QMETRO_STATES_HPP
#define QMETRO_STATES_HPP

#include <cstdint>
#include <string_view>
#include <vector>

#include "qmetro/hilbert.hpp"

namespace qmetro {

/// Estimation direction n with signs eps_k = sign(n_k), sign(0) = +1.
struct Direction {
    RVector n;

    static Direction uniform(int modes);
    /// Throws InvalidArgs for zero vectors.
    Direction normalized() const;
    int modes() const {
        return static_cast<int>(n.size());
    }
    int sign(int k) const {
        return n(k) < 0 ? -1 : 1;
    }
};

/// Constraints on particle and mode entanglement.
struct EntanglementSpec {
    std::vector<int> P;
    std::vector<std::vector<int>> partition;
    int mode_groups_size = 1;      // M_e
    int particle_groups_size = 1;  // P_e
};

/// Throws InvalidPartition unless the groups are disjoint and cover 0..modes-1.
void validate_partition(const std::vector<std::vector<int>> &partition, int modes);
/// Throws InvalidP unless 1 <= P_k <= N_k.
void validate_producibility(const std::vector<int> &particles, const std::vector<int> &P);
/// Throws UnbalancedSpectrum.
void require_balanced(const ModeConfig &config);

/// Product of single-particle superpositions (|k_i,+> + |k_i,->)/sqrt(2), particle i in mode k_i.
QuantumState msps_state(const ModeConfig &config, const std::vector<int> &assignment);
/// Same, with particles assigned to modes in order from integer targets <N_k>. Throws NonIntegerTargets.
QuantumState msps_state_for_targets(const ModeConfig &config, const std::vector<double> &targets);
/// Every particle delocalized: sum_k sqrt(<N_k>/2N) (|k,+> + |k,->).
QuantumState meps_state(const ModeConfig &config, int particles, const std::vector<double> &targets);

/// Product over modes of NOON(N_k), fixed-number Fock basis.
QuantumState mspe_noon_product(const ModeConfig &config, const std::vector<int> &particles);
/// (x)_k |N_k, eps_k> + (x)_k |N_k, -eps_k>, normalized, fixed-number Fock basis over all modes.
QuantumState mepe_multinoon(const ModeConfig &config, const std::vector<int> &particles, const Direction &direction);
/// Multimode NOON restricted to the listed modes, in the Fock basis over those modes only.
QuantumState multinoon_on(const ModeConfig &config, const std::vector<int> &modes, const std::vector<int> &particles,
                          const Direction &direction);

/// Per mode: floor(N_k/P_k) NOON blocks of P_k particles and one block of the remainder.
/// Distinguishable-particle representation, particles of mode 0 first.
QuantumState p_producible_noon_chain(const ModeConfig &config, const std::vector<int> &particles,
                                     const std::vector<int> &P, std::size_t dimension_cap = kDefaultDimensionCap);

/// Product over groups of multimode NOON states; carries its mode factorization.
QuantumState lambda_sep_multinoon(const ModeConfig &config, const std::vector<int> &particles,
                                  const std::vector<std::vector<int>> &partition, const Direction &direction);

/// Multimode NOON blocks with at most pe entangled particles per mode and me entangled modes,
/// N/M particles per mode. Distinguishable-particle representation.
QuantumState block_multinoon(const ModeConfig &config, int particles, int me, int pe, const Direction &direction,
                             std::size_t dimension_cap);

/// Particles of the given modes, all in their + (or -) sublevel, as one distinguishable block.
QuantumState ghz_block(const ModeConfig &config, const std::vector<int> &modes, const std::vector<int> &counts,
                       const std::vector<int> &signs, std::size_t dimension_cap = kDefaultDimensionCap);

enum class SampleClass {
    ParticleSeparable,
    ModeSeparable,
    LambdaSeparable,
    PProducible,
    ArbitraryPure,
};

std::string_view sample_class_name(SampleClass c);
SampleClass parse_sample_class(std::string_view name);

/// Random member of the class, deterministic per seed.
///
/// particle-sep: 1-4 products of Haar single-particle states, Dirichlet weights.
/// mode-sep: per-mode number-block-diagonal mixtures with N split evenly as caps.
/// lambda-sep: per-group Haar states, fixed N_k from the even split.
/// p-producible: per-mode particle blocks of size P_k, Haar within the mode.
QuantumState sample_state(const ModeConfig &config, int particles, SampleClass cls, const EntanglementSpec &spec,
                          std::uint64_t seed, std::size_t dimension_cap = kDefaultDimensionCap);

/// N split over M modes as evenly as possible, earlier modes first.
std::vector<int> even_split(int particles, int modes);

}  // namespace qmetro

#endif
