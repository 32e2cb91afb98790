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

#ifndef QMETRO_LINALG_HPP
#define QMETRO_LINALG_HPP

#include <Eigen/Dense>
#include <complex>

namespace qmetro {

using complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived> &m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Spectral decomposition of a Hermitian matrix. `values` ascending, `vectors` unitary columns.
struct EigenDecomposition {
    RVector values;
    CMatrix vectors;
};

struct RealEigenDecomposition {
    RVector values;
    RMatrix vectors;
};

bool is_hermitian(const CMatrix &a, double tol);

/// Throws NonHermitianInput if `a` deviates from Hermitian by more than 1e-10*(1+|a|_max).
EigenDecomposition eigh(const CMatrix &a);
RealEigenDecomposition eigh(const RMatrix &a);

double min_eigenvalue(const RMatrix &a);

/// A <= B in the Loewner order: min eig(B - A) >= -tol*(1 + |B - A|_max).
bool loewner_leq(const RMatrix &a, const RMatrix &b, double tol = 1e-9);

/// Smallest eigenvalue of (b - a), the signed distance from violating a <= b.
double loewner_margin(const RMatrix &a, const RMatrix &b);

/// Eigenvalues strictly greater than tol*(1 + |a|_max).
int count_positive_eigenvalues(const RMatrix &a, double tol = 1e-9);

struct SpdInverse {
    RMatrix inverse;
    double condition;
};

/// Throws SingularMatrix when the smallest eigenvalue is <= 1e-12*|a|_max.
SpdInverse invert_spd(const RMatrix &a);

RMatrix symmetrized(const RMatrix &a);

}  // namespace qmetro

#endif
