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

#ifndef QMETRO_HILBERT_HPP
#define QMETRO_HILBERT_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "qmetro/linalg.hpp"

namespace qmetro {

inline constexpr std::size_t kDefaultDimensionCap = 5000;

/// Interferometer geometry: per mode k the single-particle sublevel eigenvalues lambda_{kj}.
///
/// Sublevels are addressed by a flattened "level" index running over all (k, j) pairs,
/// mode-major. Every particle sees the same spectrum.
class ModeConfig {
   public:
    explicit ModeConfig(std::vector<std::vector<double>> spectra);

    /// `modes` modes, each with the two sublevels {+1/2, -1/2}.
    static ModeConfig two_level(int modes);

    int modes() const {
        return static_cast<int>(spectra_.size());
    }
    int sublevels(int k) const {
        return static_cast<int>(spectra_[k].size());
    }
    const std::vector<double> &spectrum(int k) const {
        return spectra_[k];
    }
    double lambda(int k, int j) const {
        return spectra_[k][j];
    }
    int plus_index(int k) const;
    int minus_index(int k) const;
    double lambda_plus(int k) const {
        return spectra_[k][plus_index(k)];
    }
    double lambda_minus(int k) const {
        return spectra_[k][minus_index(k)];
    }
    /// max_j |lambda_{kj}|
    double lambda_max(int k) const;
    bool balanced() const;

    int level_offset(int k) const {
        return offsets_[k];
    }
    int total_levels() const {
        return offsets_.back();
    }
    int mode_of_level(int level) const;

    bool operator==(const ModeConfig &other) const {
        return spectra_ == other.spectra_;
    }

   private:
    std::vector<std::vector<double>> spectra_;
    std::vector<int> offsets_;
};

/// N distinguishable particles; each particle lives in the span of all (mode, sublevel) levels.
struct DistinguishableParticles {
    int particles;
    bool operator==(const DistinguishableParticles &) const = default;
};

/// Occupation-number basis over a subset of modes. For each listed mode the allowed total
/// particle numbers are given; states with other totals are excluded.
struct FockSectors {
    std::vector<int> modes;
    std::vector<std::vector<int>> totals;
    bool operator==(const FockSectors &) const = default;
};

using BasisTag = std::variant<DistinguishableParticles, FockSectors>;

/// Exactly N_k particles in every mode k.
BasisTag fock_fixed_per_mode(std::vector<int> particles);
/// Exactly N_k particles in each of the listed modes (others absent).
BasisTag fock_fixed_on(std::vector<int> modes, std::vector<int> particles);
/// Mode k alone with 0..max_particles particles.
BasisTag fock_mode_local(int mode, int max_particles);
/// Product over all modes of 0..max_k particles.
BasisTag fock_mode_product(std::vector<int> max_particles);

/// Enumerated basis of a representation. Cheap to copy (shared immutable tables).
///
/// Distinguishable: index = sum_p level_p * L^(N-1-p), particle 0 most significant.
/// Fock: product over listed modes (first most significant) of per-mode occupation vectors,
/// ordered by total ascending, then lexicographically descending.
class Basis {
   public:
    Basis(const ModeConfig &config, BasisTag tag, std::size_t dimension_cap = kDefaultDimensionCap);

    const ModeConfig &config() const {
        return data_->config;
    }
    const BasisTag &tag() const {
        return data_->tag;
    }
    std::size_t dimension() const {
        return data_->dimension;
    }
    bool is_distinguishable() const {
        return std::holds_alternative<DistinguishableParticles>(data_->tag);
    }
    int particles() const;

    /// Occupation count of each flattened level for basis state `index`.
    std::span<const int> occupation(std::size_t index) const;
    int particle_level(std::size_t index, int particle) const;

    // Fock-only helpers.
    const std::vector<int> &fock_modes() const;
    /// Per-mode local indices of basis state `index` (one per listed mode).
    std::vector<std::size_t> fock_local_indices(std::size_t index) const;
    std::size_t fock_local_count(int position) const;
    std::span<const int> fock_local_occupation(int position, std::size_t local) const;
    std::size_t fock_index(std::span<const std::size_t> locals) const;

    bool operator==(const Basis &other) const;
    bool operator!=(const Basis &other) const {
        return !(*this == other);
    }

   private:
    struct Data {
        ModeConfig config;
        BasisTag tag;
        std::size_t dimension = 0;
        std::vector<int> occupations;
        // Fock: per listed mode, flattened occupation vectors over that mode's sublevels.
        std::vector<std::vector<int>> local_occupations;
        std::vector<std::size_t> local_counts;
        std::vector<std::size_t> strides;
    };
    std::shared_ptr<const Data> data_;
};

/// Commuting collective generators H_k and number operators N_k, all diagonal in the basis.
class GeneratorSet {
   public:
    GeneratorSet(Basis basis, std::vector<RVector> hamiltonians, std::vector<RVector> numbers);

    const Basis &basis() const {
        return basis_;
    }
    int modes() const {
        return static_cast<int>(h_.size());
    }
    const RVector &diagonal(int k) const {
        return h_[k];
    }
    const RVector &number_diagonal(int k) const {
        return n_[k];
    }
    CMatrix dense(int k) const;
    CMatrix number_dense(int k) const;
    /// Diagonal of sum_k n_k H_k.
    RVector combination(const RVector &n) const;

   private:
    Basis basis_;
    std::vector<RVector> h_;
    std::vector<RVector> n_;
};

GeneratorSet build_generators(const Basis &basis);

class QuantumState;

struct MixtureTerm {
    double weight;
    std::vector<QuantumState> factors;
};

enum class FactorKind {
    /// Factors over consecutive groups of particles, composed by Kronecker product.
    Particles,
    /// Factors over disjoint groups of modes, each in a Fock basis over its group.
    Modes,
};

/// A convex mixture of product states, sum_g p_g (x)_m rho_{g,m}. The factorization is shared by all
/// terms: factor m of every term lives in the same basis.
struct StructuredMixture {
    FactorKind kind;
    std::vector<std::vector<int>> groups;
    std::vector<MixtureTerm> terms;
};

class QuantumState {
   public:
    /// Validates unit norm within 1e-10.
    static QuantumState pure(Basis basis, CVector amplitudes);
    /// Validates Hermiticity, unit trace and positivity within 1e-10.
    static QuantumState density(Basis basis, CMatrix matrix);
    /// Validates weights and factor bases; the composed basis is derived from the factors.
    static QuantumState mixture(StructuredMixture structure);

    const Basis &basis() const {
        return basis_;
    }
    bool is_pure() const {
        return std::holds_alternative<CVector>(form_);
    }
    bool is_density() const {
        return std::holds_alternative<CMatrix>(form_);
    }
    bool is_structured() const {
        return std::holds_alternative<StructuredMixture>(form_);
    }
    const CVector &vector() const;
    const CMatrix &matrix() const;
    const StructuredMixture &structure() const;

    CMatrix density_matrix() const;
    /// Diagonal of the density matrix in the basis.
    RVector populations() const;
    /// Pure stays pure; mixtures collapse to a density matrix.
    QuantumState densified() const;

   private:
    using Form = std::variant<CVector, CMatrix, StructuredMixture>;
    QuantumState(Basis basis, Form form) : basis_(std::move(basis)), form_(std::move(form)) {
    }
    friend QuantumState unchecked_pure(Basis, CVector);
    friend QuantumState unchecked_density(Basis, CMatrix);

    Basis basis_;
    Form form_;
};

QuantumState unchecked_pure(Basis basis, CVector amplitudes);
QuantumState unchecked_density(Basis basis, CMatrix matrix);

/// Product of factor states over the given groups. Particle groups must be consecutive
/// ranges in order; mode groups must be disjoint.
QuantumState compose(FactorKind kind, const std::vector<std::vector<int>> &groups,
                     const std::vector<QuantumState> &factors);

/// U(theta) rho U(theta)^dagger with U = exp(-i sum_k theta_k H_k). Mixtures keep their structure.
QuantumState phase_evolve(const QuantumState &state, const GeneratorSet &gens, const RVector &theta);

/// Single-particle reduced density matrix in DistinguishableParticles(1).
QuantumState reduce_particle(const QuantumState &state, int particle);

/// sum_g p_g rho_{g,k}; the mixture must carry a singleton mode group {k}.
QuantumState reduce_mode_structured(const QuantumState &state, int mode);
/// sum_g p_g rho_{g,A} for the mode group at position `group`.
QuantumState reduce_mode_group(const QuantumState &state, int group);

/// Symmetric embedding of a fixed-per-mode Fock state into the distinguishable representation.
QuantumState symmetrize_embed(const QuantumState &state, std::size_t dimension_cap = kDefaultDimensionCap);

}  // namespace qmetro

#endif
