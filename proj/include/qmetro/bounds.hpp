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

#ifndef QMETRO_BOUNDS_HPP
#define QMETRO_BOUNDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "qmetro/hilbert.hpp"
#include "qmetro/states.hpp"

namespace qmetro {

enum class MomentSource { FromState, UserSupplied };

/// <N_k> and <N_k N_l>.
struct MomentData {
    RVector first;
    RMatrix second;
    MomentSource source = MomentSource::UserSupplied;

    /// Fixed particle numbers: <N_k N_l> = N_k N_l.
    static MomentData fixed(const std::vector<int> &particles);
};

MomentData moments_from_state(const QuantumState &state, const GeneratorSet &gens);

/// Throws InvalidArgs on negative first moments, <N_k^2> < <N_k> or Cauchy-Schwarz violations.
void validate_moments(const MomentData &moments);

/// State moments win over user moments; a disagreement beyond 1e-9 is an InvalidArgs error.
MomentData resolve_moments(const std::optional<MomentData> &from_state, const std::optional<MomentData> &user);

/// diag(4 lambda_kmax^2 <N_k>).
RMatrix shot_noise_bound(const MomentData &moments, const ModeConfig &config);

/// diag(4 lambda_kmax^2 <N_k^2>).
RMatrix mode_separable_bound(const MomentData &moments, const ModeConfig &config);

/// diag((s_k P_k^2 + r_k^2)(lambda_k+ - lambda_k-)^2). Throws InvalidP.
RMatrix p_producible_bound(const std::vector<int> &particles, const std::vector<int> &P, const ModeConfig &config);

struct HeisenbergBound {
    /// v_k = 2 eps_k lambda_kmax sqrt(<N_k^2>)
    RVector v;
    /// v v^T
    RMatrix matrix;
    /// 4 lambda~_k lambda~_l <N_k N_l>, lambda~_k = eps_k lambda_kmax.
    RMatrix cross;

    double quadratic(const RVector &n) const {
        return n.dot(matrix * n);
    }
    double cross_quadratic(const RVector &n) const {
        return n.dot(cross * n);
    }
};

HeisenbergBound heisenberg_bound(const Direction &direction, const MomentData &moments, const ModeConfig &config);

/// f f^T with f_k = eps_k N_k (lambda_k+ - lambda_k-): the fixed-number Heisenberg matrix.
RMatrix heisenberg_fixed_bound(const Direction &direction, const std::vector<int> &particles,
                               const ModeConfig &config);

/// Heisenberg matrix with entries between different groups set to zero. Throws InvalidPartition.
RMatrix partition_bound(const Direction &direction, const std::vector<std::vector<int>> &partition,
                        const MomentData &moments, const ModeConfig &config);

/// (n^T n)^2 / (n^T F n). Throws ZeroInformation when n^T F n <= 1e-14.
double weak_qcrb(const RVector &n, const RMatrix &F);

/// Positive eigenvalues of F_Q - F_SN with tolerance 1e-9.
int shot_noise_rank(const RMatrix &fq, const RMatrix &fsn);

struct GainFactor {
    /// (s P_e^2 + r^2)(u M_e^2 + v^2) / M, for |n_k| = 1/sqrt(M).
    double s_max;
    /// Same with |n_k| = 1.
    double s_max_unit_components;
    double gain;
};

/// Throws InvalidArgs unless M divides N, 1 <= M_e <= M and 1 <= P_e <= N/M.
GainFactor gain_factor(int particles, int modes, int me, int pe);

struct LocalizationEnvelope {
    RMatrix localized;    // Gamma_MsPs
    RMatrix given;        // covariance for the supplied distributions
    RMatrix delocalized;  // Gamma_MePs
};

/// Covariances of pure particle-product states with conditional sublevel probabilities
/// p_{j|k} (`conditional[k][j]`) and particle-in-mode distributions p_k^(i) (`distributions[i][k]`).
/// Throws NonIntegerTargets when the targets are not integers.
LocalizationEnvelope localization_envelope(const ModeConfig &config, const std::vector<std::vector<double>> &conditional,
                                           const std::vector<double> &targets,
                                           const std::vector<std::vector<double>> &distributions);

enum class BoundKind { Matrix, QuadraticForm, Identity };

/// One bound evaluated against a state's quantum Fisher matrix.
///
/// Matrix: margin = min eig(bound - F_Q). QuadraticForm: margin = n^T (bound - F_Q) n.
/// Identity: margin = -residual. Saturation tolerance 1e-8 * (1 + |bound|_max).
struct BoundReport {
    std::string name;
    BoundKind kind = BoundKind::Matrix;
    RMatrix matrix;
    RVector direction;
    double bound_value = 0.0;
    double state_value = 0.0;
    double margin = 0.0;
    bool satisfied = false;
    bool saturated = false;
};

BoundReport matrix_report(std::string name, const RMatrix &bound, const RMatrix &fq);
BoundReport quadratic_report(std::string name, const RMatrix &bound, const RMatrix &fq, const RVector &n);

/// Separability bounds from the state's own decomposition and the Cauchy-Schwarz bound along `direction`:
///   particle_sep     F_Q <= 4 sum_i Gamma[rho^(i)]          (single-particle factors)
///   particle_blocks  F_Q <= 4 sum_b Gamma[rho^(b)]          (multi-particle factors)
///   mode_sep         F_Q <= 4 diag(Var_k[rho_k])            (single-mode factors)
///   lambda_sep       F_Q <= 4 blockdiag(Gamma[rho_A])       (mode-group factors)
///   cauchy_schwarz   n^T F_Q n <= 4 (sum_k |n_k| Delta H_k)^2
/// States without a decomposition get only the last report. When `require_structure` is set they
/// raise NoStructure instead.
std::vector<BoundReport> check_state_dependent_bounds(const QuantumState &state, const GeneratorSet &gens,
                                                      const Direction &direction, bool require_structure = false);

}  // namespace qmetro

#endif
