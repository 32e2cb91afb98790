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

#include "qmetro/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "qmetro/error.hpp"

namespace qmetro {

// ---------------------------------------------------------------------------------------------
// ModeConfig

ModeConfig::ModeConfig(std::vector<std::vector<double>> spectra) : spectra_(std::move(spectra)) {
    if (spectra_.empty()) {
        throw Error(ErrorCode::InvalidArgs, "at least one mode is required");
    }
    offsets_.push_back(0);
    for (std::size_t k = 0; k < spectra_.size(); ++k) {
        if (spectra_[k].size() < 2) {
            throw Error(ErrorCode::InvalidArgs, "mode " + std::to_string(k) + " needs at least two sublevels");
        }
        for (double value : spectra_[k]) {
            if (!std::isfinite(value)) {
                throw Error(ErrorCode::InvalidArgs, "mode " + std::to_string(k) + " has a non-finite eigenvalue");
            }
        }
        offsets_.push_back(offsets_.back() + static_cast<int>(spectra_[k].size()));
    }
}

ModeConfig ModeConfig::two_level(int modes) {
    if (modes < 1) {
        throw Error(ErrorCode::InvalidArgs, "at least one mode is required");
    }
    return ModeConfig(std::vector<std::vector<double>>(modes, {0.5, -0.5}));
}

int ModeConfig::plus_index(int k) const {
    const auto &s = spectra_[k];
    return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

int ModeConfig::minus_index(int k) const {
    const auto &s = spectra_[k];
    return static_cast<int>(std::min_element(s.begin(), s.end()) - s.begin());
}

double ModeConfig::lambda_max(int k) const {
    return std::max(std::abs(lambda_plus(k)), std::abs(lambda_minus(k)));
}

bool ModeConfig::balanced() const {
    for (int k = 0; k < modes(); ++k) {
        if (std::abs(lambda_plus(k) + lambda_minus(k)) > 1e-12 * (1.0 + lambda_max(k))) {
            return false;
        }
    }
    return true;
}

int ModeConfig::mode_of_level(int level) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), level);
    return static_cast<int>(it - offsets_.begin()) - 1;
}

// ---------------------------------------------------------------------------------------------
// Basis tags

BasisTag fock_fixed_per_mode(std::vector<int> particles) {
    std::vector<int> modes(particles.size());
    std::iota(modes.begin(), modes.end(), 0);
    return fock_fixed_on(std::move(modes), std::move(particles));
}

BasisTag fock_fixed_on(std::vector<int> modes, std::vector<int> particles) {
    if (modes.size() != particles.size()) {
        throw Error(ErrorCode::DimensionMismatch, "one particle number per listed mode is required");
    }
    FockSectors sectors{std::move(modes), {}};
    for (int n : particles) {
        sectors.totals.push_back({n});
    }
    return sectors;
}

BasisTag fock_mode_local(int mode, int max_particles) {
    std::vector<int> totals(max_particles + 1);
    std::iota(totals.begin(), totals.end(), 0);
    return FockSectors{{mode}, {totals}};
}

BasisTag fock_mode_product(std::vector<int> max_particles) {
    FockSectors sectors;
    for (std::size_t k = 0; k < max_particles.size(); ++k) {
        sectors.modes.push_back(static_cast<int>(k));
        std::vector<int> totals(max_particles[k] + 1);
        std::iota(totals.begin(), totals.end(), 0);
        sectors.totals.push_back(std::move(totals));
    }
    return sectors;
}

// ---------------------------------------------------------------------------------------------
// Basis

namespace {

double binomial(int n, int k) {
    double result = 1.0;
    for (int i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
    }
    return result;
}

void enumerate_occupations(int levels, int total, std::vector<int> &prefix, std::vector<int> &out) {
    if (levels == 1) {
        prefix.push_back(total);
        out.insert(out.end(), prefix.begin(), prefix.end());
        prefix.pop_back();
        return;
    }
    for (int first = total; first >= 0; --first) {
        prefix.push_back(first);
        enumerate_occupations(levels - 1, total - first, prefix, out);
        prefix.pop_back();
    }
}

void overflow(double dimension, std::size_t cap) {
    throw Error(ErrorCode::DimensionOverflow, "basis dimension " + std::to_string(static_cast<long double>(dimension)) +
                                                  " exceeds cap " + std::to_string(cap));
}

}  // namespace

Basis::Basis(const ModeConfig &config, BasisTag tag, std::size_t dimension_cap) {
    auto data = std::make_shared<Data>(Data{config, std::move(tag), 0, {}, {}, {}, {}});
    const int levels = config.total_levels();

    if (auto *dist = std::get_if<DistinguishableParticles>(&data->tag)) {
        if (dist->particles < 1) {
            throw Error(ErrorCode::InvalidArgs, "distinguishable basis needs at least one particle");
        }
        double dim = std::pow(static_cast<double>(levels), dist->particles);
        if (dim > static_cast<double>(dimension_cap)) {
            overflow(dim, dimension_cap);
        }
        data->dimension = static_cast<std::size_t>(dim);
        data->occupations.assign(data->dimension * levels, 0);
        for (std::size_t index = 0; index < data->dimension; ++index) {
            std::size_t rest = index;
            for (int p = 0; p < dist->particles; ++p) {
                data->occupations[index * levels + rest % levels] += 1;
                rest /= levels;
            }
        }
    } else {
        auto &sectors = std::get<FockSectors>(data->tag);
        if (sectors.modes.size() != sectors.totals.size() || sectors.modes.empty()) {
            throw Error(ErrorCode::InvalidArgs, "Fock basis needs allowed totals for each listed mode");
        }
        std::set<int> seen;
        for (std::size_t pos = 0; pos < sectors.modes.size(); ++pos) {
            int mode = sectors.modes[pos];
            if (mode < 0 || mode >= config.modes() || !seen.insert(mode).second) {
                throw Error(ErrorCode::InvalidArgs, "invalid or repeated mode " + std::to_string(mode));
            }
            if (pos > 0 && mode < sectors.modes[pos - 1]) {
                throw Error(ErrorCode::InvalidArgs, "Fock modes must be listed in ascending order");
            }
            auto &totals = sectors.totals[pos];
            std::sort(totals.begin(), totals.end());
            totals.erase(std::unique(totals.begin(), totals.end()), totals.end());
            if (totals.empty() || totals.front() < 0) {
                throw Error(ErrorCode::InvalidArgs, "particle numbers must be non-negative");
            }
        }
        double dim = 1.0;
        for (std::size_t pos = 0; pos < sectors.modes.size(); ++pos) {
            int d = config.sublevels(sectors.modes[pos]);
            double count = 0.0;
            for (int n : sectors.totals[pos]) {
                count += binomial(n + d - 1, d - 1);
            }
            dim *= count;
        }
        if (dim > static_cast<double>(dimension_cap)) {
            overflow(dim, dimension_cap);
        }
        data->dimension = static_cast<std::size_t>(dim);

        for (std::size_t pos = 0; pos < sectors.modes.size(); ++pos) {
            int d = config.sublevels(sectors.modes[pos]);
            std::vector<int> local;
            std::vector<int> prefix;
            for (int n : sectors.totals[pos]) {
                enumerate_occupations(d, n, prefix, local);
            }
            data->local_counts.push_back(local.size() / d);
            data->local_occupations.push_back(std::move(local));
        }
        data->strides.assign(sectors.modes.size(), 1);
        for (int pos = static_cast<int>(sectors.modes.size()) - 2; pos >= 0; --pos) {
            data->strides[pos] = data->strides[pos + 1] * data->local_counts[pos + 1];
        }
        data->occupations.assign(data->dimension * levels, 0);
        for (std::size_t index = 0; index < data->dimension; ++index) {
            for (std::size_t pos = 0; pos < sectors.modes.size(); ++pos) {
                int mode = sectors.modes[pos];
                int d = config.sublevels(mode);
                std::size_t local = (index / data->strides[pos]) % data->local_counts[pos];
                for (int j = 0; j < d; ++j) {
                    data->occupations[index * levels + config.level_offset(mode) + j] =
                        data->local_occupations[pos][local * d + j];
                }
            }
        }
    }
    data_ = std::move(data);
}

int Basis::particles() const {
    if (auto *dist = std::get_if<DistinguishableParticles>(&data_->tag)) {
        return dist->particles;
    }
    throw Error(ErrorCode::BasisUnsupported, "particle count is only fixed in the distinguishable basis");
}

std::span<const int> Basis::occupation(std::size_t index) const {
    const std::size_t levels = data_->config.total_levels();
    return {data_->occupations.data() + index * levels, levels};
}

int Basis::particle_level(std::size_t index, int particle) const {
    const int n = particles();
    const std::size_t levels = data_->config.total_levels();
    for (int p = n - 1; p > particle; --p) {
        index /= levels;
    }
    return static_cast<int>(index % levels);
}

const std::vector<int> &Basis::fock_modes() const {
    if (is_distinguishable()) {
        throw Error(ErrorCode::BasisUnsupported, "not a Fock basis");
    }
    return std::get<FockSectors>(data_->tag).modes;
}

std::vector<std::size_t> Basis::fock_local_indices(std::size_t index) const {
    const auto &modes = fock_modes();
    std::vector<std::size_t> locals(modes.size());
    for (std::size_t pos = 0; pos < modes.size(); ++pos) {
        locals[pos] = (index / data_->strides[pos]) % data_->local_counts[pos];
    }
    return locals;
}

std::size_t Basis::fock_local_count(int position) const {
    fock_modes();
    return data_->local_counts[position];
}

std::span<const int> Basis::fock_local_occupation(int position, std::size_t local) const {
    const auto &modes = fock_modes();
    const std::size_t d = data_->config.sublevels(modes[position]);
    return {data_->local_occupations[position].data() + local * d, d};
}

std::size_t Basis::fock_index(std::span<const std::size_t> locals) const {
    std::size_t index = 0;
    for (std::size_t pos = 0; pos < locals.size(); ++pos) {
        index += locals[pos] * data_->strides[pos];
    }
    return index;
}

bool Basis::operator==(const Basis &other) const {
    if (data_ == other.data_) {
        return true;
    }
    return data_->config == other.data_->config && data_->tag == other.data_->tag &&
           data_->dimension == other.data_->dimension;
}

// ---------------------------------------------------------------------------------------------
// Generators

GeneratorSet::GeneratorSet(Basis basis, std::vector<RVector> hamiltonians, std::vector<RVector> numbers)
    : basis_(std::move(basis)), h_(std::move(hamiltonians)), n_(std::move(numbers)) {
    const auto dim = static_cast<Eigen::Index>(basis_.dimension());
    for (const auto &h : h_) {
        if (h.size() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "generator diagonal does not match basis dimension");
        }
    }
    for (const auto &n : n_) {
        if (n.size() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "number operator does not match basis dimension");
        }
    }
}

CMatrix GeneratorSet::dense(int k) const {
    return h_[k].cast<complex>().asDiagonal();
}

CMatrix GeneratorSet::number_dense(int k) const {
    return n_[k].cast<complex>().asDiagonal();
}

RVector GeneratorSet::combination(const RVector &n) const {
    if (n.size() != modes()) {
        throw Error(ErrorCode::DimensionMismatch, "direction length differs from number of generators");
    }
    RVector out = RVector::Zero(static_cast<Eigen::Index>(basis_.dimension()));
    for (int k = 0; k < modes(); ++k) {
        out += n(k) * h_[k];
    }
    return out;
}

GeneratorSet build_generators(const Basis &basis) {
    const ModeConfig &config = basis.config();
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    std::vector<RVector> h(config.modes(), RVector::Zero(dim));
    std::vector<RVector> n(config.modes(), RVector::Zero(dim));
    for (Eigen::Index index = 0; index < dim; ++index) {
        auto occ = basis.occupation(static_cast<std::size_t>(index));
        for (int k = 0; k < config.modes(); ++k) {
            for (int j = 0; j < config.sublevels(k); ++j) {
                int count = occ[config.level_offset(k) + j];
                h[k](index) += config.lambda(k, j) * count;
                n[k](index) += count;
            }
        }
    }
    return GeneratorSet(basis, std::move(h), std::move(n));
}

// ---------------------------------------------------------------------------------------------
// QuantumState

namespace {

CVector kron(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        out.segment(i * b.size(), b.size()) = a(i) * b;
    }
    return out;
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

void require_same_basis(const Basis &a, const Basis &b, const char *what) {
    if (a != b) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": state and generators use different bases");
    }
}

// Basis of the product of factors, plus a map from Kronecker index to composed index.
struct Composition {
    Basis basis;
    std::vector<std::size_t> permutation;  // empty means identity
};

Composition compose_basis(FactorKind kind, const std::vector<std::vector<int>> &groups,
                          const std::vector<Basis> &factor_bases) {
    if (groups.size() != factor_bases.size() || groups.empty()) {
        throw Error(ErrorCode::NoStructure, "one factor per group is required");
    }
    const ModeConfig &config = factor_bases.front().config();
    for (const auto &b : factor_bases) {
        if (!(b.config() == config)) {
            throw Error(ErrorCode::DimensionMismatch, "factors use different mode configurations");
        }
    }
    double dim = 1.0;
    for (const auto &b : factor_bases) {
        dim *= static_cast<double>(b.dimension());
    }
    const std::size_t cap = std::max<std::size_t>(kDefaultDimensionCap, static_cast<std::size_t>(dim));

    if (kind == FactorKind::Particles) {
        int next = 0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (!factor_bases[g].is_distinguishable() ||
                factor_bases[g].particles() != static_cast<int>(groups[g].size())) {
                throw Error(ErrorCode::NoStructure, "particle factor basis does not match its group");
            }
            for (int p : groups[g]) {
                if (p != next++) {
                    throw Error(ErrorCode::InvalidPartition, "particle groups must be consecutive ranges in order");
                }
            }
        }
        return {Basis(config, DistinguishableParticles{next}, cap), {}};
    }

    FockSectors target;
    std::vector<std::pair<int, std::vector<int>>> per_mode;
    std::set<int> seen;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (factor_bases[g].is_distinguishable()) {
            throw Error(ErrorCode::NoStructure, "mode factors must use a Fock basis");
        }
        std::vector<int> sorted = groups[g];
        std::sort(sorted.begin(), sorted.end());
        const auto &sectors = std::get<FockSectors>(factor_bases[g].tag());
        if (sectors.modes != sorted) {
            throw Error(ErrorCode::NoStructure, "mode factor basis does not cover exactly its group");
        }
        for (std::size_t pos = 0; pos < sorted.size(); ++pos) {
            if (!seen.insert(sorted[pos]).second) {
                throw Error(ErrorCode::InvalidPartition, "mode groups overlap");
            }
            per_mode.emplace_back(sorted[pos], sectors.totals[pos]);
        }
    }
    std::sort(per_mode.begin(), per_mode.end());
    for (auto &[mode, totals] : per_mode) {
        target.modes.push_back(mode);
        target.totals.push_back(totals);
    }
    Basis basis(config, target, cap);

    // Position of each factor mode inside the composed mode list.
    std::vector<std::vector<int>> positions(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (int mode : std::get<FockSectors>(factor_bases[g].tag()).modes) {
            positions[g].push_back(static_cast<int>(
                std::find(target.modes.begin(), target.modes.end(), mode) - target.modes.begin()));
        }
    }
    std::vector<std::size_t> permutation(basis.dimension());
    std::vector<std::size_t> locals(target.modes.size());
    for (std::size_t kron_index = 0; kron_index < basis.dimension(); ++kron_index) {
        std::size_t rest = kron_index;
        for (int g = static_cast<int>(groups.size()) - 1; g >= 0; --g) {
            std::size_t fdim = factor_bases[g].dimension();
            auto factor_locals = factor_bases[g].fock_local_indices(rest % fdim);
            rest /= fdim;
            for (std::size_t pos = 0; pos < factor_locals.size(); ++pos) {
                locals[positions[g][pos]] = factor_locals[pos];
            }
        }
        permutation[kron_index] = basis.fock_index(locals);
    }
    return {basis, std::move(permutation)};
}

CVector permute(const CVector &v, const std::vector<std::size_t> &perm) {
    if (perm.empty()) {
        return v;
    }
    CVector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(perm[i])) = v(i);
    }
    return out;
}

CMatrix permute(const CMatrix &m, const std::vector<std::size_t> &perm) {
    if (perm.empty()) {
        return m;
    }
    CMatrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(perm[j])) = m(i, j);
        }
    }
    return out;
}

std::vector<Basis> factor_bases_of(const std::vector<QuantumState> &factors) {
    std::vector<Basis> bases;
    bases.reserve(factors.size());
    for (const auto &f : factors) {
        bases.push_back(f.basis());
    }
    return bases;
}

}  // namespace

QuantumState unchecked_pure(Basis basis, CVector amplitudes) {
    return QuantumState(std::move(basis), std::move(amplitudes));
}

QuantumState unchecked_density(Basis basis, CMatrix matrix) {
    return QuantumState(std::move(basis), std::move(matrix));
}

QuantumState QuantumState::pure(Basis basis, CVector amplitudes) {
    if (static_cast<std::size_t>(amplitudes.size()) != basis.dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "amplitude count differs from basis dimension");
    }
    if (std::abs(amplitudes.norm() - 1.0) > 1e-10) {
        throw Error(ErrorCode::InvalidArgs, "pure state is not normalized");
    }
    return QuantumState(std::move(basis), std::move(amplitudes));
}

QuantumState QuantumState::density(Basis basis, CMatrix matrix) {
    if (static_cast<std::size_t>(matrix.rows()) != basis.dimension() || matrix.rows() != matrix.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "density matrix size differs from basis dimension");
    }
    if (!is_hermitian(matrix, 1e-10)) {
        throw Error(ErrorCode::NonHermitianInput, "density matrix is not Hermitian");
    }
    if (std::abs(matrix.trace().real() - 1.0) > 1e-10) {
        throw Error(ErrorCode::InvalidArgs, "density matrix trace differs from one");
    }
    if (eigh(matrix).values(0) < -1e-10) {
        throw Error(ErrorCode::InvalidArgs, "density matrix is not positive semi-definite");
    }
    return QuantumState(std::move(basis), std::move(matrix));
}

QuantumState QuantumState::mixture(StructuredMixture structure) {
    if (structure.terms.empty()) {
        throw Error(ErrorCode::InvalidArgs, "mixture needs at least one term");
    }
    double total = 0.0;
    for (const auto &term : structure.terms) {
        if (term.weight < 0.0) {
            throw Error(ErrorCode::InvalidArgs, "negative mixture weight");
        }
        total += term.weight;
        if (term.factors.size() != structure.groups.size()) {
            throw Error(ErrorCode::NoStructure, "mixture term has wrong number of factors");
        }
        for (std::size_t g = 0; g < term.factors.size(); ++g) {
            if (term.factors[g].is_structured()) {
                throw Error(ErrorCode::InvalidArgs, "mixture factors must be pure or density states");
            }
            if (term.factors[g].basis() != structure.terms.front().factors[g].basis()) {
                throw Error(ErrorCode::NoStructure, "factor bases differ between mixture terms");
            }
        }
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw Error(ErrorCode::InvalidArgs, "mixture weights do not sum to one");
    }
    auto composition =
        compose_basis(structure.kind, structure.groups, factor_bases_of(structure.terms.front().factors));
    return QuantumState(std::move(composition.basis), std::move(structure));
}

const CVector &QuantumState::vector() const {
    if (!is_pure()) {
        throw Error(ErrorCode::InvalidArgs, "state is not a pure vector");
    }
    return std::get<CVector>(form_);
}

const CMatrix &QuantumState::matrix() const {
    if (!is_density()) {
        throw Error(ErrorCode::InvalidArgs, "state is not stored as a density matrix");
    }
    return std::get<CMatrix>(form_);
}

const StructuredMixture &QuantumState::structure() const {
    if (!is_structured()) {
        throw Error(ErrorCode::NoStructure, "state carries no structural decomposition");
    }
    return std::get<StructuredMixture>(form_);
}

CMatrix QuantumState::density_matrix() const {
    if (is_pure()) {
        const auto &v = std::get<CVector>(form_);
        return v * v.adjoint();
    }
    if (is_density()) {
        return std::get<CMatrix>(form_);
    }
    const auto &mix = std::get<StructuredMixture>(form_);
    const auto dim = static_cast<Eigen::Index>(basis_.dimension());
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (const auto &term : mix.terms) {
        if (term.weight == 0.0) {
            continue;
        }
        rho += term.weight * compose(mix.kind, mix.groups, term.factors).density_matrix();
    }
    return rho;
}

RVector QuantumState::populations() const {
    if (is_pure()) {
        return std::get<CVector>(form_).cwiseAbs2();
    }
    return density_matrix().diagonal().real();
}

QuantumState QuantumState::densified() const {
    if (is_structured()) {
        const auto &mix = std::get<StructuredMixture>(form_);
        if (mix.terms.size() == 1) {
            return compose(mix.kind, mix.groups, mix.terms.front().factors);
        }
        return unchecked_density(basis_, density_matrix());
    }
    return *this;
}

QuantumState compose(FactorKind kind, const std::vector<std::vector<int>> &groups,
                     const std::vector<QuantumState> &factors) {
    auto composition = compose_basis(kind, groups, factor_bases_of(factors));
    bool all_pure = std::all_of(factors.begin(), factors.end(), [](const auto &f) { return f.is_pure(); });
    if (all_pure) {
        CVector v = factors.front().vector();
        for (std::size_t g = 1; g < factors.size(); ++g) {
            v = kron(v, factors[g].vector());
        }
        return unchecked_pure(std::move(composition.basis), permute(v, composition.permutation));
    }
    CMatrix m = factors.front().density_matrix();
    for (std::size_t g = 1; g < factors.size(); ++g) {
        m = kron(m, factors[g].density_matrix());
    }
    return unchecked_density(std::move(composition.basis), permute(m, composition.permutation));
}

// ---------------------------------------------------------------------------------------------
// Evolution and reductions

QuantumState phase_evolve(const QuantumState &state, const GeneratorSet &gens, const RVector &theta) {
    require_same_basis(state.basis(), gens.basis(), "phase_evolve");
    if (theta.size() != gens.modes()) {
        throw Error(ErrorCode::DimensionMismatch, "theta length differs from number of modes");
    }
    if (state.is_structured()) {
        StructuredMixture evolved = state.structure();
        for (auto &term : evolved.terms) {
            for (auto &factor : term.factors) {
                factor = phase_evolve(factor, build_generators(factor.basis()), theta);
            }
        }
        return QuantumState::mixture(std::move(evolved));
    }
    RVector phase = gens.combination(theta);
    CVector u(phase.size());
    for (Eigen::Index i = 0; i < phase.size(); ++i) {
        u(i) = std::polar(1.0, -phase(i));
    }
    if (state.is_pure()) {
        return unchecked_pure(state.basis(), u.cwiseProduct(state.vector()));
    }
    CMatrix rho = u.asDiagonal() * state.matrix() * u.conjugate().asDiagonal();
    return unchecked_density(state.basis(), std::move(rho));
}

QuantumState reduce_particle(const QuantumState &state, int particle) {
    const Basis &basis = state.basis();
    if (!basis.is_distinguishable()) {
        throw Error(ErrorCode::BasisUnsupported, "particle reduction needs the distinguishable representation");
    }
    const int n = basis.particles();
    if (particle < 0 || particle >= n) {
        throw Error(ErrorCode::InvalidArgs, "particle index out of range");
    }
    Basis single(basis.config(), DistinguishableParticles{1});
    const auto levels = static_cast<std::size_t>(basis.config().total_levels());

    if (state.is_structured()) {
        const auto &mix = state.structure();
        if (mix.kind != FactorKind::Particles) {
            return reduce_particle(state.densified(), particle);
        }
        std::size_t g = 0;
        int offset = 0;
        while (offset + static_cast<int>(mix.groups[g].size()) <= particle) {
            offset += static_cast<int>(mix.groups[g].size());
            ++g;
        }
        CMatrix rho = CMatrix::Zero(static_cast<Eigen::Index>(levels), static_cast<Eigen::Index>(levels));
        for (const auto &term : mix.terms) {
            rho += term.weight * reduce_particle(term.factors[g], particle - offset).matrix();
        }
        return unchecked_density(single, std::move(rho));
    }

    std::size_t stride = 1;
    for (int p = n - 1; p > particle; --p) {
        stride *= levels;
    }
    const auto L = static_cast<Eigen::Index>(levels);
    CMatrix rho = CMatrix::Zero(L, L);
    const std::size_t dim = basis.dimension();
    if (state.is_pure()) {
        const CVector &psi = state.vector();
        for (std::size_t index = 0; index < dim; ++index) {
            std::size_t x = (index / stride) % levels;
            std::size_t base = index - x * stride;
            for (std::size_t y = 0; y < levels; ++y) {
                rho(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) +=
                    psi(static_cast<Eigen::Index>(index)) * std::conj(psi(static_cast<Eigen::Index>(base + y * stride)));
            }
        }
    } else {
        const CMatrix &full = state.matrix();
        for (std::size_t index = 0; index < dim; ++index) {
            std::size_t x = (index / stride) % levels;
            std::size_t base = index - x * stride;
            for (std::size_t y = 0; y < levels; ++y) {
                rho(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) +=
                    full(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(base + y * stride));
            }
        }
    }
    return unchecked_density(single, std::move(rho));
}

QuantumState reduce_mode_group(const QuantumState &state, int group) {
    if (!state.is_structured() || state.structure().kind != FactorKind::Modes) {
        throw Error(ErrorCode::NoStructure, "mode reduction needs a mode-factorized mixture");
    }
    const auto &mix = state.structure();
    if (group < 0 || group >= static_cast<int>(mix.groups.size())) {
        throw Error(ErrorCode::InvalidArgs, "group index out of range");
    }
    const Basis &basis = mix.terms.front().factors[group].basis();
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    CMatrix rho = CMatrix::Zero(dim, dim);
    for (const auto &term : mix.terms) {
        rho += term.weight * term.factors[group].density_matrix();
    }
    return unchecked_density(basis, std::move(rho));
}

QuantumState reduce_mode_structured(const QuantumState &state, int mode) {
    if (!state.is_structured() || state.structure().kind != FactorKind::Modes) {
        throw Error(ErrorCode::NoStructure, "mode reduction needs a mode-factorized mixture");
    }
    const auto &groups = state.structure().groups;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].size() == 1 && groups[g].front() == mode) {
            return reduce_mode_group(state, static_cast<int>(g));
        }
    }
    throw Error(ErrorCode::NoStructure, "mode " + std::to_string(mode) + " is not a separate factor");
}

QuantumState symmetrize_embed(const QuantumState &state, std::size_t dimension_cap) {
    const Basis &fock = state.basis();
    if (fock.is_distinguishable()) {
        throw Error(ErrorCode::BasisUnsupported, "state is already in the distinguishable representation");
    }
    const auto &sectors = std::get<FockSectors>(fock.tag());
    const ModeConfig &config = fock.config();
    if (static_cast<int>(sectors.modes.size()) != config.modes()) {
        throw Error(ErrorCode::BasisUnsupported, "embedding needs a Fock basis over all modes");
    }
    int total = 0;
    for (const auto &t : sectors.totals) {
        if (t.size() != 1) {
            throw Error(ErrorCode::BasisUnsupported, "embedding needs a fixed particle number per mode");
        }
        total += t.front();
    }
    if (total < 1) {
        throw Error(ErrorCode::BasisUnsupported, "embedding needs at least one particle");
    }
    Basis dist(config, DistinguishableParticles{total}, dimension_cap);

    // Fock index and multiplicity for every distinguishable basis state; -1 when outside the sector.
    const auto levels = static_cast<std::size_t>(config.total_levels());
    std::vector<long> target(dist.dimension(), -1);
    std::vector<double> scale(dist.dimension(), 0.0);
    std::vector<double> factorial(total + 1, 1.0);
    for (int i = 1; i <= total; ++i) {
        factorial[i] = factorial[i - 1] * i;
    }
    std::vector<std::size_t> locals(sectors.modes.size());
    for (std::size_t index = 0; index < dist.dimension(); ++index) {
        auto occ = dist.occupation(index);
        bool inside = true;
        double multiplicity = factorial[total];
        for (std::size_t pos = 0; pos < sectors.modes.size() && inside; ++pos) {
            int mode = sectors.modes[pos];
            int d = config.sublevels(mode);
            int count = 0;
            for (int j = 0; j < d; ++j) {
                count += occ[config.level_offset(mode) + j];
                multiplicity /= factorial[occ[config.level_offset(mode) + j]];
            }
            if (count != sectors.totals[pos].front()) {
                inside = false;
                break;
            }
            // Locate the local occupation vector; tables are small.
            for (std::size_t local = 0; local < fock.fock_local_count(static_cast<int>(pos)); ++local) {
                auto candidate = fock.fock_local_occupation(static_cast<int>(pos), local);
                if (std::equal(candidate.begin(), candidate.end(), occ.begin() + config.level_offset(mode))) {
                    locals[pos] = local;
                    break;
                }
            }
        }
        (void)levels;
        if (inside) {
            target[index] = static_cast<long>(fock.fock_index(locals));
            scale[index] = 1.0 / std::sqrt(multiplicity);
        }
    }

    const auto dim = static_cast<Eigen::Index>(dist.dimension());
    if (state.is_pure()) {
        const CVector &a = state.vector();
        CVector out = CVector::Zero(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            if (target[i] >= 0) {
                out(i) = a(target[i]) * scale[i];
            }
        }
        return unchecked_pure(dist, std::move(out));
    }
    CMatrix rho = state.density_matrix();
    CMatrix out = CMatrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (target[i] < 0) {
            continue;
        }
        for (Eigen::Index j = 0; j < dim; ++j) {
            if (target[j] >= 0) {
                out(i, j) = rho(target[i], target[j]) * scale[i] * scale[j];
            }
        }
    }
    return unchecked_density(dist, std::move(out));
}

}  // namespace qmetro
