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

#include "qmetro/bounds.hpp"

#include <cmath>
#include <string>

#include "qmetro/error.hpp"
#include "qmetro/fisher.hpp"

namespace qmetro {

MomentData MomentData::fixed(const std::vector<int> &particles) {
    const auto m = static_cast<Eigen::Index>(particles.size());
    RVector first(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        first(k) = particles[k];
    }
    return {first, first * first.transpose(), MomentSource::UserSupplied};
}

MomentData moments_from_state(const QuantumState &state, const GeneratorSet &gens) {
    if (state.basis() != gens.basis()) {
        throw Error(ErrorCode::DimensionMismatch, "state and generators use different bases");
    }
    RVector pop = state.populations();
    const int m = gens.modes();
    MomentData out{RVector(m), RMatrix(m, m), MomentSource::FromState};
    for (int k = 0; k < m; ++k) {
        out.first(k) = pop.dot(gens.number_diagonal(k));
        for (int l = k; l < m; ++l) {
            out.second(k, l) = out.second(l, k) =
                pop.dot(gens.number_diagonal(k).cwiseProduct(gens.number_diagonal(l)));
        }
    }
    return out;
}

void validate_moments(const MomentData &moments) {
    const Eigen::Index m = moments.first.size();
    if (moments.second.rows() != m || moments.second.cols() != m) {
        throw Error(ErrorCode::DimensionMismatch, "second moments must be an M x M matrix");
    }
    const double tol = 1e-9 * (1.0 + max_abs(moments.second));
    for (Eigen::Index k = 0; k < m; ++k) {
        if (moments.first(k) < -tol) {
            throw Error(ErrorCode::InvalidArgs, "negative <N_k>");
        }
        if (moments.second(k, k) < moments.first(k) - tol) {
            throw Error(ErrorCode::InvalidArgs, "<N_k^2> is smaller than <N_k>");
        }
        for (Eigen::Index l = 0; l < m; ++l) {
            if (std::abs(moments.second(k, l) - moments.second(l, k)) > tol) {
                throw Error(ErrorCode::InvalidArgs, "second moments are not symmetric");
            }
            if (std::abs(moments.second(k, l)) > std::sqrt(moments.second(k, k) * moments.second(l, l)) + tol) {
                throw Error(ErrorCode::InvalidArgs, "<N_k N_l> violates the Cauchy-Schwarz inequality");
            }
        }
    }
}

MomentData resolve_moments(const std::optional<MomentData> &from_state, const std::optional<MomentData> &user) {
    if (from_state && user) {
        if (from_state->first.size() != user->first.size()) {
            throw Error(ErrorCode::DimensionMismatch, "supplied moments have the wrong number of modes");
        }
        double scale = 1.0 + max_abs(from_state->second);
        if (max_abs(from_state->first - user->first) > 1e-9 * scale ||
            max_abs(from_state->second - user->second) > 1e-9 * scale) {
            throw Error(ErrorCode::InvalidArgs, "supplied moments disagree with the state");
        }
    }
    if (from_state) {
        return *from_state;
    }
    if (user) {
        return *user;
    }
    throw Error(ErrorCode::InvalidArgs, "no moments available");
}

namespace {

void require_modes(const MomentData &moments, const ModeConfig &config) {
    if (moments.first.size() != config.modes() || moments.second.rows() != config.modes()) {
        throw Error(ErrorCode::DimensionMismatch, "moments do not match the number of modes");
    }
}

double spread(const ModeConfig &config, int k) {
    return config.lambda_plus(k) - config.lambda_minus(k);
}

}  // namespace

RMatrix shot_noise_bound(const MomentData &moments, const ModeConfig &config) {
    require_modes(moments, config);
    RMatrix out = RMatrix::Zero(config.modes(), config.modes());
    for (int k = 0; k < config.modes(); ++k) {
        double lm = config.lambda_max(k);
        out(k, k) = 4.0 * lm * lm * moments.first(k);
    }
    return out;
}

RMatrix mode_separable_bound(const MomentData &moments, const ModeConfig &config) {
    require_modes(moments, config);
    RMatrix out = RMatrix::Zero(config.modes(), config.modes());
    for (int k = 0; k < config.modes(); ++k) {
        double lm = config.lambda_max(k);
        out(k, k) = 4.0 * lm * lm * moments.second(k, k);
    }
    return out;
}

RMatrix p_producible_bound(const std::vector<int> &particles, const std::vector<int> &P, const ModeConfig &config) {
    if (static_cast<int>(particles.size()) != config.modes()) {
        throw Error(ErrorCode::DimensionMismatch, "one particle number per mode is required");
    }
    validate_producibility(particles, P);
    RMatrix out = RMatrix::Zero(config.modes(), config.modes());
    for (int k = 0; k < config.modes(); ++k) {
        int s = particles[k] / P[k];
        int r = particles[k] - s * P[k];
        double d = spread(config, k);
        out(k, k) = static_cast<double>(s * P[k] * P[k] + r * r) * d * d;
    }
    return out;
}

HeisenbergBound heisenberg_bound(const Direction &direction, const MomentData &moments, const ModeConfig &config) {
    require_modes(moments, config);
    if (direction.modes() != config.modes()) {
        throw Error(ErrorCode::DimensionMismatch, "direction length differs from number of modes");
    }
    const int m = config.modes();
    HeisenbergBound out{RVector(m), RMatrix(m, m), RMatrix(m, m)};
    for (int k = 0; k < m; ++k) {
        double lk = direction.sign(k) * config.lambda_max(k);
        out.v(k) = 2.0 * lk * std::sqrt(std::max(0.0, moments.second(k, k)));
        for (int l = 0; l < m; ++l) {
            double ll = direction.sign(l) * config.lambda_max(l);
            out.cross(k, l) = 4.0 * lk * ll * moments.second(k, l);
        }
    }
    out.matrix = out.v * out.v.transpose();
    return out;
}

RMatrix heisenberg_fixed_bound(const Direction &direction, const std::vector<int> &particles,
                               const ModeConfig &config) {
    if (direction.modes() != config.modes() || static_cast<int>(particles.size()) != config.modes()) {
        throw Error(ErrorCode::DimensionMismatch, "direction and particle numbers need one entry per mode");
    }
    RVector f(config.modes());
    for (int k = 0; k < config.modes(); ++k) {
        f(k) = direction.sign(k) * particles[k] * spread(config, k);
    }
    return f * f.transpose();
}

RMatrix partition_bound(const Direction &direction, const std::vector<std::vector<int>> &partition,
                        const MomentData &moments, const ModeConfig &config) {
    validate_partition(partition, config.modes());
    RMatrix full = heisenberg_bound(direction, moments, config).matrix;
    std::vector<int> group_of(config.modes());
    for (std::size_t g = 0; g < partition.size(); ++g) {
        for (int k : partition[g]) {
            group_of[k] = static_cast<int>(g);
        }
    }
    for (int k = 0; k < config.modes(); ++k) {
        for (int l = 0; l < config.modes(); ++l) {
            if (group_of[k] != group_of[l]) {
                full(k, l) = 0.0;
            }
        }
    }
    return full;
}

double weak_qcrb(const RVector &n, const RMatrix &F) {
    if (F.rows() != n.size() || F.cols() != n.size()) {
        throw Error(ErrorCode::DimensionMismatch, "direction and Fisher matrix sizes differ");
    }
    double info = n.dot(F * n);
    if (info <= 1e-14) {
        throw Error(ErrorCode::ZeroInformation, "no Fisher information along the direction");
    }
    double nn = n.squaredNorm();
    return nn * nn / info;
}

int shot_noise_rank(const RMatrix &fq, const RMatrix &fsn) {
    if (fq.rows() != fsn.rows() || fq.cols() != fsn.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "F_Q and F_SN sizes differ");
    }
    return count_positive_eigenvalues(fq - fsn, 1e-9);
}

GainFactor gain_factor(int particles, int modes, int me, int pe) {
    if (modes < 1 || particles < 1 || particles % modes != 0) {
        throw Error(ErrorCode::InvalidArgs, "the mode count must divide the particle number");
    }
    const int nbar = particles / modes;
    if (me < 1 || me > modes || pe < 1 || pe > nbar) {
        throw Error(ErrorCode::InvalidArgs, "need 1 <= M_e <= M and 1 <= P_e <= N/M");
    }
    auto s_max = [&](int e_modes, int e_particles) {
        int s = nbar / e_particles;
        int r = nbar - s * e_particles;
        int u = modes / e_modes;
        int v = modes - u * e_modes;
        return static_cast<double>(s * e_particles * e_particles + r * r) *
               static_cast<double>(u * e_modes * e_modes + v * v) / modes;
    };
    double value = s_max(me, pe);
    return {value, value * modes, value / s_max(1, 1)};
}

LocalizationEnvelope localization_envelope(const ModeConfig &config, const std::vector<std::vector<double>> &conditional,
                                           const std::vector<double> &targets,
                                           const std::vector<std::vector<double>> &distributions) {
    const int m = config.modes();
    if (static_cast<int>(conditional.size()) != m || static_cast<int>(targets.size()) != m) {
        throw Error(ErrorCode::DimensionMismatch, "conditional probabilities and targets need one entry per mode");
    }
    RVector fluct(m), mean(m);
    for (int k = 0; k < m; ++k) {
        if (static_cast<int>(conditional[k].size()) != config.sublevels(k)) {
            throw Error(ErrorCode::DimensionMismatch, "one conditional probability per sublevel is required");
        }
        double total = 0.0;
        fluct(k) = mean(k) = 0.0;
        for (int j = 0; j < config.sublevels(k); ++j) {
            double p = conditional[k][j];
            if (p < 0) {
                throw Error(ErrorCode::InvalidArgs, "negative conditional probability");
            }
            total += p;
            fluct(k) += config.lambda(k, j) * config.lambda(k, j) * p;
            mean(k) += config.lambda(k, j) * p;
        }
        if (std::abs(total - 1.0) > 1e-10) {
            throw Error(ErrorCode::InvalidArgs, "conditional probabilities of a mode must sum to one");
        }
    }
    const int n = static_cast<int>(distributions.size());
    if (n < 1) {
        throw Error(ErrorCode::InvalidArgs, "at least one particle is required");
    }
    RVector column = RVector::Zero(m);
    for (const auto &row : distributions) {
        if (static_cast<int>(row.size()) != m) {
            throw Error(ErrorCode::DimensionMismatch, "particle distributions need one entry per mode");
        }
        double total = 0.0;
        for (int k = 0; k < m; ++k) {
            if (row[k] < 0) {
                throw Error(ErrorCode::InvalidArgs, "negative particle-in-mode probability");
            }
            total += row[k];
            column(k) += row[k];
        }
        if (std::abs(total - 1.0) > 1e-10) {
            throw Error(ErrorCode::InvalidArgs, "particle-in-mode probabilities must sum to one");
        }
    }
    for (int k = 0; k < m; ++k) {
        if (std::abs(column(k) - targets[k]) > 1e-9 * n) {
            throw Error(ErrorCode::InvalidArgs, "particle distributions do not reproduce the targets");
        }
        if (std::abs(targets[k] - std::round(targets[k])) > 1e-9) {
            throw Error(ErrorCode::NonIntegerTargets, "mode-localized strategy needs integer <N_k>");
        }
    }

    auto covariance = [&](const std::vector<RVector> &rows) {
        RMatrix gamma = RMatrix::Zero(m, m);
        for (const auto &p : rows) {
            RVector h = p.cwiseProduct(mean);
            gamma += RMatrix(p.cwiseProduct(fluct).asDiagonal()) - h * h.transpose();
        }
        return gamma;
    };

    std::vector<RVector> given, localized, delocalized;
    for (const auto &row : distributions) {
        given.push_back(Eigen::Map<const RVector>(row.data(), m));
    }
    for (int k = 0; k < m; ++k) {
        for (int c = 0; c < static_cast<int>(std::round(targets[k])); ++c) {
            localized.push_back(RVector::Unit(m, k));
        }
    }
    RVector uniform(m);
    for (int k = 0; k < m; ++k) {
        uniform(k) = targets[k] / n;
    }
    delocalized.assign(n, uniform);
    return {covariance(localized), covariance(given), covariance(delocalized)};
}

BoundReport matrix_report(std::string name, const RMatrix &bound, const RMatrix &fq) {
    BoundReport r;
    r.name = std::move(name);
    r.kind = BoundKind::Matrix;
    r.matrix = bound;
    r.bound_value = bound.trace();
    r.state_value = fq.trace();
    double scale = 1.0 + max_abs(bound);
    r.margin = loewner_margin(fq, bound);
    r.satisfied = r.margin >= -1e-8 * scale;
    r.saturated = std::abs(r.margin) <= 1e-8 * scale && max_abs(bound - fq) <= 1e-8 * scale;
    return r;
}

BoundReport quadratic_report(std::string name, const RMatrix &bound, const RMatrix &fq, const RVector &n) {
    BoundReport r;
    r.name = std::move(name);
    r.kind = BoundKind::QuadraticForm;
    r.matrix = bound;
    r.direction = n;
    r.bound_value = n.dot(bound * n);
    r.state_value = n.dot(fq * n);
    double scale = 1.0 + max_abs(bound);
    r.margin = r.bound_value - r.state_value;
    r.satisfied = r.margin >= -1e-8 * scale;
    r.saturated = std::abs(r.margin) <= 1e-8 * scale;
    return r;
}

std::vector<BoundReport> check_state_dependent_bounds(const QuantumState &state, const GeneratorSet &gens,
                                                      const Direction &direction, bool require_structure) {
    if (direction.modes() != gens.modes()) {
        throw Error(ErrorCode::DimensionMismatch, "direction length differs from number of modes");
    }
    const int m = gens.modes();
    RMatrix fq = qfi_matrix(state, gens);
    std::vector<BoundReport> reports;

    if (state.is_structured()) {
        const auto &mix = state.structure();
        RMatrix bound = RMatrix::Zero(m, m);
        bool singletons = true;
        for (std::size_t g = 0; g < mix.groups.size(); ++g) {
            singletons = singletons && mix.groups[g].size() == 1;
            const Basis &basis = mix.terms.front().factors[g].basis();
            const auto dim = static_cast<Eigen::Index>(basis.dimension());
            CMatrix rho = CMatrix::Zero(dim, dim);
            for (const auto &term : mix.terms) {
                rho += term.weight * term.factors[g].density_matrix();
            }
            auto reduced = unchecked_density(basis, rho);
            bound += 4.0 * covariance_matrix(reduced, build_generators(basis));
        }
        std::string name;
        if (mix.kind == FactorKind::Particles) {
            name = singletons ? "particle_sep" : "particle_blocks";
        } else {
            name = singletons ? "mode_sep" : "lambda_sep";
        }
        reports.push_back(matrix_report(name, bound, fq));
    } else if (require_structure) {
        throw Error(ErrorCode::NoStructure, "separability bounds need a structured mixture");
    }

    RMatrix gamma = covariance_matrix(state, gens);
    RVector v(m);
    for (int k = 0; k < m; ++k) {
        v(k) = direction.sign(k) * std::sqrt(std::max(0.0, gamma(k, k)));
    }
    reports.push_back(quadratic_report("cauchy_schwarz", 4.0 * v * v.transpose(), fq, direction.n));
    return reports;
}

}  // namespace qmetro
