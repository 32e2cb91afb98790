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

#include "qmetro/transforms.hpp"

#include <cmath>
#include <sstream>

#include "qmetro/error.hpp"
#include "qmetro/fisher.hpp"

namespace qmetro {

WeightMatrix WeightMatrix::from(const RMatrix &W) {
    if (W.rows() != W.cols() || W.rows() == 0) {
        throw Error(ErrorCode::DimensionMismatch, "weight matrix must be square and non-empty");
    }
    const double scale = 1.0 + max_abs(W);
    if (max_abs(W - W.transpose()) > 1e-10 * scale) {
        throw Error(ErrorCode::InvalidArgs, "weight matrix is not symmetric");
    }
    const Eigen::Index m = W.rows();
    RMatrix off = W;
    off.diagonal().setZero();
    WeightMatrix out{symmetrized(W), RMatrix::Identity(m, m), RVector(m)};
    if (max_abs(off) <= 1e-14 * scale) {
        out.w = W.diagonal();
    } else {
        auto d = eigh(out.W);
        out.w = d.values;
        out.O = d.vectors;
        for (Eigen::Index c = 0; c < m; ++c) {
            for (Eigen::Index r = 0; r < m; ++r) {
                if (std::abs(out.O(r, c)) > 1e-12) {
                    if (out.O(r, c) < 0) {
                        out.O.col(c) *= -1.0;
                    }
                    break;
                }
            }
        }
    }
    for (Eigen::Index k = 0; k < m; ++k) {
        if (out.w(k) < -1e-10 * scale) {
            throw Error(ErrorCode::InvalidArgs, "weight matrix is not positive semi-definite");
        }
        out.w(k) = std::max(0.0, out.w(k));
    }
    return out;
}

GeneratorSet transform_generators(const GeneratorSet &gens, const RMatrix &O) {
    const int m = gens.modes();
    if (O.rows() != m || O.cols() != m) {
        throw Error(ErrorCode::DimensionMismatch, "transformation size differs from number of modes");
    }
    if (max_abs(O.transpose() * O - RMatrix::Identity(m, m)) > 1e-8) {
        throw Error(ErrorCode::NotOrthogonal, "transformation is not orthogonal");
    }
    std::vector<RVector> h, numbers;
    for (int k = 0; k < m; ++k) {
        h.push_back(gens.combination(O.row(k).transpose()));
        numbers.push_back(gens.number_diagonal(k));
    }
    return GeneratorSet(gens.basis(), std::move(h), std::move(numbers));
}

BoundReport verify_qfi_transform(const QuantumState &state, const GeneratorSet &gens, const RMatrix &O) {
    RMatrix fq = qfi_matrix(state, gens);
    RMatrix expected = O * fq * O.transpose();
    RMatrix transformed = qfi_matrix(state, transform_generators(gens, O));
    BoundReport r;
    r.name = "transform";
    r.kind = BoundKind::Identity;
    r.matrix = expected;
    r.bound_value = expected.trace();
    r.state_value = transformed.trace();
    double residual = max_abs(transformed - expected);
    double scale = 1.0 + max_abs(expected);
    r.margin = -residual;
    r.satisfied = residual <= 1e-8 * scale;
    r.saturated = r.satisfied;
    return r;
}

WeightedBound weighted_bound(const WeightMatrix &W, const ModeConfig &config, const std::vector<int> &particles) {
    const int m = config.modes();
    if (W.W.rows() != m || static_cast<int>(particles.size()) != m) {
        throw Error(ErrorCode::DimensionMismatch, "weight matrix and particle numbers need one entry per mode");
    }
    Basis basis(config, fock_fixed_per_mode(particles));
    GeneratorSet gens = build_generators(basis);
    WeightedBound out{RMatrix::Zero(m, m), RVector::Zero(m), W, 0.0, {}, {}};
    std::ostringstream text;
    text << "equal superposition of the extremal eigenstates of";
    const double scale = 1.0 + W.w.cwiseAbs().maxCoeff();
    bool first = true;
    for (int k = 0; k < m; ++k) {
        if (W.w(k) <= 1e-12 * scale) {
            continue;
        }
        RVector o = W.O.col(k);
        RVector h = gens.combination(o);
        Eigen::Index hi, lo;
        double top = h.maxCoeff(&hi);
        double bottom = h.minCoeff(&lo);
        double spread = top - bottom;
        if (spread <= 1e-12) {
            throw Error(ErrorCode::SingularTransformedFisher,
                        "transformed generator " + std::to_string(k) + " has no spectral spread");
        }
        out.spreads(k) = spread;
        out.sigma_max += o * o.transpose() / (spread * spread);
        out.extremal_states.emplace_back(static_cast<std::size_t>(hi), static_cast<std::size_t>(lo));
        text << (first ? " " : ", ") << "H'_" << k + 1;
        first = false;
    }
    out.trace_value = (W.W * out.sigma_max).trace();
    out.optimal_state = text.str();
    return out;
}

double trace_weighted_crb(const WeightMatrix &W, const RMatrix &F) {
    if (F.rows() != W.W.rows() || F.cols() != W.W.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "weight and Fisher matrix sizes differ");
    }
    RMatrix inverse = invert_spd(F).inverse;
    double total = 0.0;
    for (Eigen::Index k = 0; k < W.w.size(); ++k) {
        RVector o = W.O.col(k);
        total += W.w(k) * o.dot(inverse * o);
    }
    return total;
}

}  // namespace qmetro
