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

#ifndef QMETRO_FISHER_HPP
#define QMETRO_FISHER_HPP

#include <vector>

#include "qmetro/hilbert.hpp"

namespace qmetro {

/// Positive operators summing to the identity.
class Povm {
   public:
    /// Validates Hermiticity, positivity and completeness within 1e-10.
    explicit Povm(std::vector<CMatrix> elements);

    /// Rank-one projectors onto the given vectors (normalized here), plus the projector
    /// onto their orthogonal complement when `complete` is set and it is non-zero.
    static Povm from_vectors(const std::vector<CVector> &vectors, bool complete);

    const std::vector<CMatrix> &elements() const {
        return elements_;
    }
    std::size_t size() const {
        return elements_.size();
    }
    Eigen::Index dimension() const {
        return elements_.front().rows();
    }

   private:
    std::vector<CMatrix> elements_;
};

/// <H_k> for every k.
RVector generator_means(const QuantumState &state, const GeneratorSet &gens);

/// Gamma_kl = <{H_k, H_l}>/2 - <H_k><H_l>.
RMatrix covariance_matrix(const QuantumState &state, const GeneratorSet &gens);

/// Gamma~_kl = <{H_k, H_l}>/2.
RMatrix fluctuation_matrix(const QuantumState &state, const GeneratorSet &gens);

/// Quantum Fisher matrix from the spectral decomposition of the state. Pairs of eigenvalues with
/// p_a + p_b < 1e-12 are skipped; pure states use 4 * covariance directly.
RMatrix qfi_matrix(const QuantumState &state, const GeneratorSet &gens);

/// Single-parameter quantum Fisher information of the diagonal generator `h`.
double qfi_scalar(const QuantumState &state, const RVector &h);

/// Symmetric logarithmic derivatives for d rho / d theta_k = -i [H_k, rho].
std::vector<CMatrix> sld_operators(const QuantumState &state, const GeneratorSet &gens);

/// p(x | theta) = Tr[Pi_x rho(theta)], clipped at zero.
RVector outcome_probabilities(const QuantumState &state, const GeneratorSet &gens, const Povm &povm,
                              const RVector &theta);

/// Classical Fisher matrix of the POVM at theta with exact derivatives; outcomes with
/// p < 1e-12 are excluded.
RMatrix classical_fisher_matrix(const QuantumState &state, const GeneratorSet &gens, const Povm &povm,
                                const RVector &theta);

}  // namespace qmetro

#endif
