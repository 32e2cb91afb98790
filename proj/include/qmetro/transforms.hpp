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

#ifndef QMETRO_TRANSFORMS_HPP
#define QMETRO_TRANSFORMS_HPP

#include <string>
#include <vector>

#include "qmetro/bounds.hpp"
#include "qmetro/hilbert.hpp"

namespace qmetro {

/// PSD weight matrix W = O diag(w) O^T.
///
/// Columns of O are eigenvectors with ascending w and first non-zero component positive.
/// A diagonal W keeps O = I and w = diag(W).
struct WeightMatrix {
    RMatrix W;
    RMatrix O;
    RVector w;

    /// Throws InvalidArgs for non-symmetric or indefinite W.
    static WeightMatrix from(const RMatrix &W);
};

/// H'_k = sum_l O_kl H_l. Throws NotOrthogonal when |O^T O - I|_max > 1e-8.
GeneratorSet transform_generators(const GeneratorSet &gens, const RMatrix &O);

/// Residual |F_Q[rho, O H] - O F_Q[rho, H] O^T|_max as an Identity report.
BoundReport verify_qfi_transform(const QuantumState &state, const GeneratorSet &gens, const RMatrix &O);

struct WeightedBound {
    RMatrix sigma_max;
    /// Spectral spread of each transformed generator over the fixed-number sector (0 when w_k = 0).
    RVector spreads;
    WeightMatrix weights;
    /// Tr{W sigma_max}
    double trace_value = 0.0;
    /// For each weighted transformed mode, basis indices of its largest and smallest eigenvalue.
    std::vector<std::pair<std::size_t, std::size_t>> extremal_states;
    std::string optimal_state;
};

/// Sigma^W_max = sum_{w_k > 0} o_k o_k^T / (delta Lambda'_k)^2 with H'_k = o_k . H on the
/// fixed-number Fock sector. Throws SingularTransformedFisher when a weighted spread vanishes.
WeightedBound weighted_bound(const WeightMatrix &W, const ModeConfig &config, const std::vector<int> &particles);

/// Tr{W F^-1} = sum_k w_k o_k^T F^-1 o_k. Throws SingularMatrix.
double trace_weighted_crb(const WeightMatrix &W, const RMatrix &F);

}  // namespace qmetro

#endif
