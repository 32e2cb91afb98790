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

#include "qmetro/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "qmetro/error.hpp"

namespace qmetro {

Direction Direction::uniform(int modes) {
    return {RVector::Constant(modes, 1.0 / std::sqrt(static_cast<double>(modes)))};
}

Direction Direction::normalized() const {
    double norm = n.norm();
    if (!(norm > 0.0)) {
        throw Error(ErrorCode::InvalidArgs, "direction must be non-zero");
    }
    return {n / norm};
}

void validate_partition(const std::vector<std::vector<int>> &partition, int modes) {
    std::set<int> seen;
    for (const auto &group : partition) {
        if (group.empty()) {
            throw Error(ErrorCode::InvalidPartition, "empty group in partition");
        }
        for (int k : group) {
            if (k < 0 || k >= modes) {
                throw Error(ErrorCode::InvalidPartition, "mode " + std::to_string(k) + " out of range");
            }
            if (!seen.insert(k).second) {
                throw Error(ErrorCode::InvalidPartition, "mode " + std::to_string(k) + " appears twice");
            }
        }
    }
    if (static_cast<int>(seen.size()) != modes) {
        throw Error(ErrorCode::InvalidPartition, "partition does not cover every mode");
    }
}

void validate_producibility(const std::vector<int> &particles, const std::vector<int> &P) {
    if (particles.size() != P.size()) {
        throw Error(ErrorCode::InvalidP, "one P_k per mode is required");
    }
    for (std::size_t k = 0; k < P.size(); ++k) {
        if (P[k] < 1 || P[k] > particles[k]) {
            throw Error(ErrorCode::InvalidP, "P_" + std::to_string(k) + " = " + std::to_string(P[k]) +
                                                 " outside [1, " + std::to_string(particles[k]) + "]");
        }
    }
}

void require_balanced(const ModeConfig &config) {
    if (!config.balanced()) {
        throw Error(ErrorCode::UnbalancedSpectrum, "construction needs lambda_+ = -lambda_- in every mode");
    }
}

std::vector<int> even_split(int particles, int modes) {
    std::vector<int> out(modes, particles / modes);
    for (int k = 0; k < particles % modes; ++k) {
        out[k] += 1;
    }
    return out;
}

namespace {

void require_modes(const ModeConfig &config, std::size_t count, const char *what) {
    if (static_cast<int>(count) != config.modes()) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + " needs one entry per mode");
    }
}

void require_direction(const ModeConfig &config, const Direction &direction) {
    if (direction.modes() != config.modes()) {
        throw Error(ErrorCode::DimensionMismatch, "direction length differs from number of modes");
    }
}

Basis single_particle(const ModeConfig &config) {
    return Basis(config, DistinguishableParticles{1});
}

QuantumState particle_product(const ModeConfig &config, const std::vector<CVector> &singles) {
    Basis one = single_particle(config);
    std::vector<QuantumState> factors;
    std::vector<std::vector<int>> groups;
    for (std::size_t i = 0; i < singles.size(); ++i) {
        factors.push_back(QuantumState::pure(one, singles[i]));
        groups.push_back({static_cast<int>(i)});
    }
    return compose(FactorKind::Particles, groups, factors);
}

/// Local index of "all n particles in sublevel j" for mode position `pos` of a Fock basis.
std::size_t extremal_local(const Basis &basis, int pos, int sublevel, int n) {
    for (std::size_t local = 0; local < basis.fock_local_count(pos); ++local) {
        auto occ = basis.fock_local_occupation(pos, local);
        if (occ[sublevel] == n) {
            return local;
        }
    }
    throw Error(ErrorCode::InvalidArgs, "occupation not present in basis");
}

std::vector<double> dirichlet(int count, std::mt19937_64 &rng) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(count);
    double total = 0.0;
    for (auto &x : w) {
        x = e(rng);
        total += x;
    }
    for (auto &x : w) {
        x /= total;
    }
    return w;
}

CVector haar(Eigen::Index n, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CVector v(n);
    for (auto &x : v) {
        x = complex(g(rng), g(rng));
    }
    return v.normalized();
}

/// Haar vector supported on the given basis indices.
CVector haar_on(Eigen::Index n, const std::vector<Eigen::Index> &support, std::mt19937_64 &rng) {
    CVector local = haar(static_cast<Eigen::Index>(support.size()), rng);
    CVector v = CVector::Zero(n);
    for (std::size_t i = 0; i < support.size(); ++i) {
        v(support[i]) = local(static_cast<Eigen::Index>(i));
    }
    return v;
}

}  // namespace

QuantumState msps_state(const ModeConfig &config, const std::vector<int> &assignment) {
    require_balanced(config);
    if (assignment.empty()) {
        throw Error(ErrorCode::InvalidArgs, "at least one particle is required");
    }
    const int levels = config.total_levels();
    std::vector<CVector> singles;
    for (int k : assignment) {
        if (k < 0 || k >= config.modes()) {
            throw Error(ErrorCode::InvalidArgs, "particle assigned to unknown mode " + std::to_string(k));
        }
        CVector v = CVector::Zero(levels);
        v(config.level_offset(k) + config.plus_index(k)) = 1.0 / std::sqrt(2.0);
        v(config.level_offset(k) + config.minus_index(k)) = 1.0 / std::sqrt(2.0);
        singles.push_back(v);
    }
    return particle_product(config, singles);
}

QuantumState msps_state_for_targets(const ModeConfig &config, const std::vector<double> &targets) {
    require_modes(config, targets.size(), "targets");
    std::vector<int> assignment;
    for (int k = 0; k < config.modes(); ++k) {
        if (targets[k] < 0) {
            throw Error(ErrorCode::NegativeTarget, "negative particle-number target");
        }
        double rounded = std::round(targets[k]);
        if (std::abs(targets[k] - rounded) > 1e-12) {
            throw Error(ErrorCode::NonIntegerTargets,
                        "mode-localized strategy needs integer <N_k>; use the delocalized state instead");
        }
        assignment.insert(assignment.end(), static_cast<int>(rounded), k);
    }
    return msps_state(config, assignment);
}

QuantumState meps_state(const ModeConfig &config, int particles, const std::vector<double> &targets) {
    require_balanced(config);
    require_modes(config, targets.size(), "targets");
    if (particles < 1) {
        throw Error(ErrorCode::InvalidArgs, "at least one particle is required");
    }
    double total = 0.0;
    for (double t : targets) {
        if (t < 0) {
            throw Error(ErrorCode::NegativeTarget, "negative particle-number target");
        }
        total += t;
    }
    if (std::abs(total - particles) > 1e-10 * particles) {
        throw Error(ErrorCode::InvalidArgs, "targets must sum to the particle number");
    }
    CVector v = CVector::Zero(config.total_levels());
    for (int k = 0; k < config.modes(); ++k) {
        double amp = std::sqrt(targets[k] / (2.0 * particles));
        v(config.level_offset(k) + config.plus_index(k)) = amp;
        v(config.level_offset(k) + config.minus_index(k)) = amp;
    }
    v.normalize();
    return particle_product(config, std::vector<CVector>(particles, v));
}

QuantumState multinoon_on(const ModeConfig &config, const std::vector<int> &modes, const std::vector<int> &particles,
                          const Direction &direction) {
    require_balanced(config);
    require_direction(config, direction);
    if (modes.size() != particles.size() || modes.empty()) {
        throw Error(ErrorCode::DimensionMismatch, "one particle number per listed mode is required");
    }
    std::vector<std::pair<int, int>> sorted;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (particles[i] < 1) {
            throw Error(ErrorCode::InvalidArgs, "NOON components need at least one particle per mode");
        }
        sorted.emplace_back(modes[i], particles[i]);
    }
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> sorted_modes, sorted_particles;
    for (auto [k, n] : sorted) {
        sorted_modes.push_back(k);
        sorted_particles.push_back(n);
    }
    Basis basis(config, fock_fixed_on(sorted_modes, sorted_particles));
    std::vector<std::size_t> up(sorted.size()), down(sorted.size());
    for (std::size_t pos = 0; pos < sorted.size(); ++pos) {
        int k = sorted_modes[pos];
        int plus = config.plus_index(k);
        int minus = config.minus_index(k);
        if (direction.sign(k) < 0) {
            std::swap(plus, minus);
        }
        up[pos] = extremal_local(basis, static_cast<int>(pos), plus, sorted_particles[pos]);
        down[pos] = extremal_local(basis, static_cast<int>(pos), minus, sorted_particles[pos]);
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
    v(static_cast<Eigen::Index>(basis.fock_index(up))) = 1.0 / std::sqrt(2.0);
    v(static_cast<Eigen::Index>(basis.fock_index(down))) = 1.0 / std::sqrt(2.0);
    return unchecked_pure(basis, v);
}

QuantumState mspe_noon_product(const ModeConfig &config, const std::vector<int> &particles) {
    require_balanced(config);
    require_modes(config, particles.size(), "particle numbers");
    Direction plus{RVector::Ones(config.modes())};
    std::vector<QuantumState> factors;
    std::vector<std::vector<int>> groups;
    for (int k = 0; k < config.modes(); ++k) {
        factors.push_back(multinoon_on(config, {k}, {particles[k]}, plus));
        groups.push_back({k});
    }
    return compose(FactorKind::Modes, groups, factors);
}

QuantumState mepe_multinoon(const ModeConfig &config, const std::vector<int> &particles, const Direction &direction) {
    require_modes(config, particles.size(), "particle numbers");
    std::vector<int> modes(config.modes());
    for (int k = 0; k < config.modes(); ++k) {
        modes[k] = k;
    }
    return multinoon_on(config, modes, particles, direction);
}

QuantumState ghz_block(const ModeConfig &config, const std::vector<int> &modes, const std::vector<int> &counts,
                       const std::vector<int> &signs, std::size_t dimension_cap) {
    require_balanced(config);
    int total = 0;
    for (int c : counts) {
        total += c;
    }
    Basis basis(config, DistinguishableParticles{total}, dimension_cap);
    const std::size_t levels = config.total_levels();
    std::size_t up = 0, down = 0;
    for (std::size_t g = 0; g < modes.size(); ++g) {
        int k = modes[g];
        std::size_t plus = config.level_offset(k) + config.plus_index(k);
        std::size_t minus = config.level_offset(k) + config.minus_index(k);
        if (signs[g] < 0) {
            std::swap(plus, minus);
        }
        for (int c = 0; c < counts[g]; ++c) {
            up = up * levels + plus;
            down = down * levels + minus;
        }
    }
    CVector v = CVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
    v(static_cast<Eigen::Index>(up)) = 1.0 / std::sqrt(2.0);
    v(static_cast<Eigen::Index>(down)) = 1.0 / std::sqrt(2.0);
    return unchecked_pure(basis, v);
}

namespace {

QuantumState compose_blocks(const std::vector<QuantumState> &blocks, std::size_t dimension_cap) {
    std::vector<std::vector<int>> groups;
    int next = 0;
    double dim = 1.0;
    for (const auto &b : blocks) {
        std::vector<int> group;
        for (int i = 0; i < b.basis().particles(); ++i) {
            group.push_back(next++);
        }
        groups.push_back(group);
        dim *= static_cast<double>(b.basis().dimension());
    }
    if (dim > static_cast<double>(dimension_cap)) {
        throw Error(ErrorCode::DimensionOverflow, "block product dimension exceeds cap " + std::to_string(dimension_cap));
    }
    return compose(FactorKind::Particles, groups, blocks);
}

}  // namespace

QuantumState p_producible_noon_chain(const ModeConfig &config, const std::vector<int> &particles,
                                     const std::vector<int> &P, std::size_t dimension_cap) {
    require_balanced(config);
    require_modes(config, particles.size(), "particle numbers");
    validate_producibility(particles, P);
    std::vector<QuantumState> blocks;
    for (int k = 0; k < config.modes(); ++k) {
        int s = particles[k] / P[k];
        int r = particles[k] - s * P[k];
        for (int b = 0; b < s; ++b) {
            blocks.push_back(ghz_block(config, {k}, {P[k]}, {1}, dimension_cap));
        }
        if (r > 0) {
            blocks.push_back(ghz_block(config, {k}, {r}, {1}, dimension_cap));
        }
    }
    return compose_blocks(blocks, dimension_cap);
}

QuantumState lambda_sep_multinoon(const ModeConfig &config, const std::vector<int> &particles,
                                  const std::vector<std::vector<int>> &partition, const Direction &direction) {
    require_balanced(config);
    require_modes(config, particles.size(), "particle numbers");
    validate_partition(partition, config.modes());
    StructuredMixture mix{FactorKind::Modes, partition, {}};
    MixtureTerm term{1.0, {}};
    for (const auto &group : partition) {
        std::vector<int> counts;
        for (int k : group) {
            counts.push_back(particles[k]);
        }
        term.factors.push_back(multinoon_on(config, group, counts, direction));
    }
    mix.terms.push_back(std::move(term));
    return QuantumState::mixture(std::move(mix));
}

QuantumState block_multinoon(const ModeConfig &config, int particles, int me, int pe, const Direction &direction,
                             std::size_t dimension_cap) {
    require_balanced(config);
    require_direction(config, direction);
    const int m = config.modes();
    if (particles < 1 || particles % m != 0) {
        throw Error(ErrorCode::InvalidArgs, "particle number must be a positive multiple of the mode count");
    }
    const int per_mode = particles / m;
    if (me < 1 || me > m || pe < 1 || pe > per_mode) {
        throw Error(ErrorCode::InvalidArgs, "need 1 <= M_e <= M and 1 <= P_e <= N/M");
    }
    std::vector<std::vector<int>> mode_groups;
    for (int start = 0; start < m; start += me) {
        std::vector<int> group;
        for (int k = start; k < std::min(m, start + me); ++k) {
            group.push_back(k);
        }
        mode_groups.push_back(group);
    }
    std::vector<int> block_sizes(per_mode / pe, pe);
    if (per_mode % pe != 0) {
        block_sizes.push_back(per_mode % pe);
    }
    std::vector<QuantumState> blocks;
    for (const auto &group : mode_groups) {
        std::vector<int> signs;
        for (int k : group) {
            signs.push_back(direction.sign(k));
        }
        for (int size : block_sizes) {
            blocks.push_back(ghz_block(config, group, std::vector<int>(group.size(), size), signs, dimension_cap));
        }
    }
    return compose_blocks(blocks, dimension_cap);
}

std::string_view sample_class_name(SampleClass c) {
    switch (c) {
        case SampleClass::ParticleSeparable:
            return "particle-sep";
        case SampleClass::ModeSeparable:
            return "mode-sep";
        case SampleClass::LambdaSeparable:
            return "lambda-sep";
        case SampleClass::PProducible:
            return "p-producible";
        case SampleClass::ArbitraryPure:
            return "arbitrary-pure";
    }
    return "unknown";
}

SampleClass parse_sample_class(std::string_view name) {
    for (auto c : {SampleClass::ParticleSeparable, SampleClass::ModeSeparable, SampleClass::LambdaSeparable,
                   SampleClass::PProducible, SampleClass::ArbitraryPure}) {
        if (sample_class_name(c) == name) {
            return c;
        }
    }
    throw Error(ErrorCode::InvalidArgs, "unknown state class '" + std::string(name) + "'");
}

QuantumState sample_state(const ModeConfig &config, int particles, SampleClass cls, const EntanglementSpec &spec,
                          std::uint64_t seed, std::size_t dimension_cap) {
    if (particles < 1) {
        throw Error(ErrorCode::InvalidArgs, "at least one particle is required");
    }
    std::mt19937_64 rng(seed);
    const int m = config.modes();
    const int levels = config.total_levels();
    std::uniform_int_distribution<int> term_count(1, 4);

    switch (cls) {
        case SampleClass::ArbitraryPure: {
            Basis basis(config, DistinguishableParticles{particles}, dimension_cap);
            return unchecked_pure(basis, haar(static_cast<Eigen::Index>(basis.dimension()), rng));
        }
        case SampleClass::ParticleSeparable: {
            Basis full(config, DistinguishableParticles{particles}, dimension_cap);
            Basis one = single_particle(config);
            int terms = term_count(rng);
            auto weights = dirichlet(terms, rng);
            StructuredMixture mix{FactorKind::Particles, {}, {}};
            for (int i = 0; i < particles; ++i) {
                mix.groups.push_back({i});
            }
            for (int t = 0; t < terms; ++t) {
                MixtureTerm term{weights[t], {}};
                for (int i = 0; i < particles; ++i) {
                    term.factors.push_back(unchecked_pure(one, haar(levels, rng)));
                }
                mix.terms.push_back(std::move(term));
            }
            return QuantumState::mixture(std::move(mix));
        }
        case SampleClass::ModeSeparable: {
            auto caps = even_split(particles, m);
            Basis full(config, fock_mode_product(caps), dimension_cap);
            int terms = term_count(rng);
            auto weights = dirichlet(terms, rng);
            StructuredMixture mix{FactorKind::Modes, {}, {}};
            for (int k = 0; k < m; ++k) {
                mix.groups.push_back({k});
            }
            for (int t = 0; t < terms; ++t) {
                MixtureTerm term{weights[t], {}};
                for (int k = 0; k < m; ++k) {
                    Basis local(config, fock_mode_local(k, caps[k]));
                    const auto dim = static_cast<Eigen::Index>(local.dimension());
                    // Number-block-diagonal: Haar state in each sector, Dirichlet sector weights.
                    auto sector_weights = dirichlet(caps[k] + 1, rng);
                    CMatrix rho = CMatrix::Zero(dim, dim);
                    for (int n = 0; n <= caps[k]; ++n) {
                        std::vector<Eigen::Index> support;
                        for (Eigen::Index i = 0; i < dim; ++i) {
                            auto occ = local.occupation(static_cast<std::size_t>(i));
                            int count = 0;
                            for (int j = 0; j < config.sublevels(k); ++j) {
                                count += occ[config.level_offset(k) + j];
                            }
                            if (count == n) {
                                support.push_back(i);
                            }
                        }
                        CVector v = haar_on(dim, support, rng);
                        rho += sector_weights[n] * v * v.adjoint();
                    }
                    term.factors.push_back(unchecked_density(local, rho));
                }
                mix.terms.push_back(std::move(term));
            }
            return QuantumState::mixture(std::move(mix));
        }
        case SampleClass::LambdaSeparable: {
            auto counts = even_split(particles, m);
            auto partition = spec.partition;
            if (partition.empty()) {
                for (int k = 0; k < m; ++k) {
                    partition.push_back({k});
                }
            }
            validate_partition(partition, m);
            Basis full(config, fock_fixed_per_mode(counts), dimension_cap);
            int terms = term_count(rng);
            auto weights = dirichlet(terms, rng);
            StructuredMixture mix{FactorKind::Modes, partition, {}};
            for (int t = 0; t < terms; ++t) {
                MixtureTerm term{weights[t], {}};
                for (auto group : partition) {
                    std::sort(group.begin(), group.end());
                    std::vector<int> n;
                    for (int k : group) {
                        n.push_back(counts[k]);
                    }
                    Basis local(config, fock_fixed_on(group, n));
                    term.factors.push_back(
                        unchecked_pure(local, haar(static_cast<Eigen::Index>(local.dimension()), rng)));
                }
                mix.terms.push_back(std::move(term));
            }
            return QuantumState::mixture(std::move(mix));
        }
        case SampleClass::PProducible: {
            auto counts = even_split(particles, m);
            std::vector<int> P = spec.P.empty() ? counts : spec.P;
            for (int k = 0; k < m; ++k) {
                if (counts[k] == 0) {
                    throw Error(ErrorCode::InvalidP, "every mode needs at least one particle");
                }
            }
            validate_producibility(counts, P);
            Basis full(config, DistinguishableParticles{particles}, dimension_cap);
            std::vector<std::pair<int, int>> blocks;  // (mode, size)
            for (int k = 0; k < m; ++k) {
                int s = counts[k] / P[k];
                for (int b = 0; b < s; ++b) {
                    blocks.emplace_back(k, P[k]);
                }
                if (counts[k] % P[k] != 0) {
                    blocks.emplace_back(k, counts[k] % P[k]);
                }
            }
            int terms = term_count(rng);
            auto weights = dirichlet(terms, rng);
            StructuredMixture mix{FactorKind::Particles, {}, {}};
            int next = 0;
            for (auto [k, size] : blocks) {
                std::vector<int> group;
                for (int i = 0; i < size; ++i) {
                    group.push_back(next++);
                }
                mix.groups.push_back(group);
            }
            for (int t = 0; t < terms; ++t) {
                MixtureTerm term{weights[t], {}};
                for (auto [k, size] : blocks) {
                    Basis local(config, DistinguishableParticles{size});
                    std::vector<Eigen::Index> support;
                    for (std::size_t i = 0; i < local.dimension(); ++i) {
                        bool inside = true;
                        for (int p = 0; p < size; ++p) {
                            inside = inside && config.mode_of_level(local.particle_level(i, p)) == k;
                        }
                        if (inside) {
                            support.push_back(static_cast<Eigen::Index>(i));
                        }
                    }
                    term.factors.push_back(
                        unchecked_pure(local, haar_on(static_cast<Eigen::Index>(local.dimension()), support, rng)));
                }
                mix.terms.push_back(std::move(term));
            }
            return QuantumState::mixture(std::move(mix));
        }
    }
    throw Error(ErrorCode::InvalidArgs, "unknown state class");
}

}  // namespace qmetro
