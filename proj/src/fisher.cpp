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

#include "qmetro/fisher.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmetro/error.hpp"

namespace qmetro {

namespace {

void require_same_basis(const QuantumState &state, const GeneratorSet &gens) {
    if (state.basis() != gens.basis()) {
        throw Error(ErrorCode::DimensionMismatch, "state and generators use different bases");
    }
}

/// Spectral data of a state: eigenvalues clipped at zero and eigenvectors.
struct Spectrum {
    RVector p;
    CMatrix v;
};

Spectrum spectrum_of(const CMatrix &rho) {
    auto d = eigh(rho);
    return {d.values.cwiseMax(0.0), std::move(d.vectors)};
}

/// 2 sum_ab (p_a - p_b)^2 / (p_a + p_b) Re(A[a,b] B[b,a]).
double spectral_term(const RVector &p, const CMatrix &a, const CMatrix &b) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        for (Eigen::Index j = 0; j < p.size(); ++j) {
            double s = p(i) + p(j);
            if (s < 1e-12) {
                continue;
            }
            double d = p(i) - p(j);
            total += d * d / s * (a(i, j) * b(j, i)).real();
        }
    }
    return 2.0 * total;
}

CMatrix in_eigenbasis(const CMatrix &v, const RVector &h) {
    return v.adjoint() * h.cast<complex>().asDiagonal() * v;
}

}  // namespace

Povm::Povm(std::vector<CMatrix> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) {
        throw Error(ErrorCode::InvalidArgs, "POVM needs at least one element");
    }
    const Eigen::Index dim = elements_.front().rows();
    CMatrix total = CMatrix::Zero(dim, dim);
    for (std::size_t x = 0; x < elements_.size(); ++x) {
        const auto &e = elements_[x];
        if (e.rows() != dim || e.cols() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "POVM elements differ in size");
        }
        if (!is_hermitian(e, 1e-10)) {
            throw Error(ErrorCode::NonHermitianInput, "POVM element " + std::to_string(x) + " is not Hermitian");
        }
        if (eigh(e).values(0) < -1e-10) {
            throw Error(ErrorCode::InvalidArgs, "POVM element " + std::to_string(x) + " is not positive");
        }
        total += e;
    }
    if (max_abs(total - CMatrix::Identity(dim, dim)) > 1e-10) {
        throw Error(ErrorCode::InvalidArgs, "POVM elements do not sum to the identity");
    }
}

Povm Povm::from_vectors(const std::vector<CVector> &vectors, bool complete) {
    if (vectors.empty()) {
        throw Error(ErrorCode::InvalidArgs, "POVM needs at least one vector");
    }
    const Eigen::Index dim = vectors.front().size();
    std::vector<CMatrix> elements;
    CMatrix total = CMatrix::Zero(dim, dim);
    for (const auto &v : vectors) {
        if (v.size() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "POVM vectors differ in size");
        }
        if (v.norm() == 0.0) {
            throw Error(ErrorCode::InvalidArgs, "zero POVM vector");
        }
        CVector u = v.normalized();
        elements.push_back(u * u.adjoint());
        total += elements.back();
    }
    if (complete) {
        CMatrix rest = CMatrix::Identity(dim, dim) - total;
        if (max_abs(rest) > 1e-12) {
            elements.push_back(0.5 * (rest + rest.adjoint()));
        }
    }
    return Povm(std::move(elements));
}

RVector generator_means(const QuantumState &state, const GeneratorSet &gens) {
    require_same_basis(state, gens);
    RVector pop = state.populations();
    RVector mean(gens.modes());
    for (int k = 0; k < gens.modes(); ++k) {
        mean(k) = pop.dot(gens.diagonal(k));
    }
    return mean;
}

RMatrix fluctuation_matrix(const QuantumState &state, const GeneratorSet &gens) {
    require_same_basis(state, gens);
    RVector pop = state.populations();
    const int m = gens.modes();
    RMatrix out(m, m);
    for (int k = 0; k < m; ++k) {
        for (int l = k; l < m; ++l) {
            out(k, l) = out(l, k) = pop.dot(gens.diagonal(k).cwiseProduct(gens.diagonal(l)));
        }
    }
    return out;
}

RMatrix covariance_matrix(const QuantumState &state, const GeneratorSet &gens) {
    RVector mean = generator_means(state, gens);
    return fluctuation_matrix(state, gens) - mean * mean.transpose();
}

RMatrix qfi_matrix(const QuantumState &state, const GeneratorSet &gens) {
    require_same_basis(state, gens);
    QuantumState dense = state.densified();
    if (dense.is_pure()) {
        return 4.0 * covariance_matrix(dense, gens);
    }
    auto spec = spectrum_of(dense.matrix());
    const int m = gens.modes();
    std::vector<CMatrix> a;
    for (int k = 0; k < m; ++k) {
        a.push_back(in_eigenbasis(spec.v, gens.diagonal(k)));
    }
    RMatrix out(m, m);
    for (int k = 0; k < m; ++k) {
        for (int l = k; l < m; ++l) {
            out(k, l) = out(l, k) = spectral_term(spec.p, a[k], a[l]);
        }
    }
    return out;
}

double qfi_scalar(const QuantumState &state, const RVector &h) {
    if (static_cast<std::size_t>(h.size()) != state.basis().dimension()) {
        throw Error(ErrorCode::DimensionMismatch, "generator does not match basis dimension");
    }
    QuantumState dense = state.densified();
    if (dense.is_pure()) {
        RVector pop = dense.populations();
        double mean = pop.dot(h);
        return 4.0 * (pop.dot(h.cwiseProduct(h)) - mean * mean);
    }
    auto spec = spectrum_of(dense.matrix());
    CMatrix a = in_eigenbasis(spec.v, h);
    return spectral_term(spec.p, a, a);
}

std::vector<CMatrix> sld_operators(const QuantumState &state, const GeneratorSet &gens) {
    require_same_basis(state, gens);
    auto spec = spectrum_of(state.density_matrix());
    const Eigen::Index dim = spec.p.size();
    std::vector<CMatrix> out;
    for (int k = 0; k < gens.modes(); ++k) {
        CMatrix a = in_eigenbasis(spec.v, gens.diagonal(k));
        CMatrix l = CMatrix::Zero(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                double s = spec.p(i) + spec.p(j);
                if (s < 1e-12) {
                    continue;
                }
                l(i, j) = complex(0.0, 2.0) * (spec.p(i) - spec.p(j)) / s * a(i, j);
            }
        }
        out.push_back(spec.v * l * spec.v.adjoint());
    }
    return out;
}

namespace {

CMatrix evolved_density(const QuantumState &state, const GeneratorSet &gens, const Povm &povm, const RVector &theta) {
    require_same_basis(state, gens);
    if (povm.dimension() != static_cast<Eigen::Index>(state.basis().dimension())) {
        throw Error(ErrorCode::DimensionMismatch, "POVM dimension differs from basis dimension");
    }
    return phase_evolve(state.densified(), gens, theta).density_matrix();
}

}  // namespace

RVector outcome_probabilities(const QuantumState &state, const GeneratorSet &gens, const Povm &povm,
                              const RVector &theta) {
    CMatrix rho = evolved_density(state, gens, povm, theta);
    RVector p(static_cast<Eigen::Index>(povm.size()));
    for (std::size_t x = 0; x < povm.size(); ++x) {
        p(static_cast<Eigen::Index>(x)) = std::max(0.0, (povm.elements()[x] * rho).trace().real());
    }
    return p;
}

RMatrix classical_fisher_matrix(const QuantumState &state, const GeneratorSet &gens, const Povm &povm,
                                const RVector &theta) {
    CMatrix rho = evolved_density(state, gens, povm, theta);
    const int m = gens.modes();
    const Eigen::Index dim = rho.rows();
    std::vector<CMatrix> drho;
    for (int k = 0; k < m; ++k) {
        const RVector &h = gens.diagonal(k);
        CMatrix d(dim, dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index j = 0; j < dim; ++j) {
                d(i, j) = complex(0.0, -(h(i) - h(j))) * rho(i, j);
            }
        }
        drho.push_back(std::move(d));
    }
    RMatrix out = RMatrix::Zero(m, m);
    RVector grad(m);
    for (const auto &e : povm.elements()) {
        double p = (e * rho).trace().real();
        if (p < 1e-12) {
            continue;
        }
        for (int k = 0; k < m; ++k) {
            grad(k) = (e * drho[k]).trace().real();
        }
        out += grad * grad.transpose() / p;
    }
    return symmetrized(out);
}

}  // namespace qmetro
