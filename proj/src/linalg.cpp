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

#include "qmetro/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <string>

#include "qmetro/error.hpp"

namespace qmetro {

namespace {

void require_square(Eigen::Index rows, Eigen::Index cols, const char *what) {
    if (rows != cols) {
        throw Error(ErrorCode::DimensionMismatch,
                    std::string(what) + " requires a square matrix, got " + std::to_string(rows) + "x" +
                        std::to_string(cols));
    }
}

}  // namespace

bool is_hermitian(const CMatrix &a, double tol) {
    if (a.rows() != a.cols()) {
        return false;
    }
    return max_abs(a - a.adjoint()) <= tol;
}

EigenDecomposition eigh(const CMatrix &a) {
    require_square(a.rows(), a.cols(), "eigh");
    double scale = 1.0 + max_abs(a);
    if (!is_hermitian(a, 1e-10 * scale)) {
        throw Error(ErrorCode::NonHermitianInput, "matrix is not Hermitian within 1e-10 relative tolerance");
    }
    if (a.rows() == 0) {
        return {};
    }
    CMatrix h = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NonHermitianInput, "Hermitian eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RealEigenDecomposition eigh(const RMatrix &a) {
    require_square(a.rows(), a.cols(), "eigh");
    double scale = 1.0 + max_abs(a);
    if (max_abs(a - a.transpose()) > 1e-10 * scale) {
        throw Error(ErrorCode::NonHermitianInput, "matrix is not symmetric within 1e-10 relative tolerance");
    }
    if (a.rows() == 0) {
        return {};
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(symmetrized(a), Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NonHermitianInput, "symmetric eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

RMatrix symmetrized(const RMatrix &a) {
    return 0.5 * (a + a.transpose());
}

double min_eigenvalue(const RMatrix &a) {
    require_square(a.rows(), a.cols(), "min_eigenvalue");
    if (a.rows() == 0) {
        return 0.0;
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(symmetrized(a), Eigen::EigenvaluesOnly);
    return solver.eigenvalues()(0);
}

double loewner_margin(const RMatrix &a, const RMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "Loewner comparison of differently sized matrices");
    }
    return min_eigenvalue(b - a);
}

bool loewner_leq(const RMatrix &a, const RMatrix &b, double tol) {
    double margin = loewner_margin(a, b);
    return margin >= -tol * (1.0 + max_abs(b - a));
}

int count_positive_eigenvalues(const RMatrix &a, double tol) {
    require_square(a.rows(), a.cols(), "count_positive_eigenvalues");
    if (a.rows() == 0) {
        return 0;
    }
    Eigen::SelfAdjointEigenSolver<RMatrix> solver(symmetrized(a), Eigen::EigenvaluesOnly);
    double threshold = tol * (1.0 + max_abs(a));
    int count = 0;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        if (solver.eigenvalues()(i) > threshold) {
            ++count;
        }
    }
    return count;
}

SpdInverse invert_spd(const RMatrix &a) {
    auto decomposition = eigh(a);
    if (a.rows() == 0) {
        return {RMatrix(0, 0), 1.0};
    }
    double smallest = decomposition.values(0);
    double largest = decomposition.values(decomposition.values.size() - 1);
    if (smallest <= 1e-12 * max_abs(a) || smallest <= 0.0) {
        throw Error(ErrorCode::SingularMatrix,
                    "matrix is singular (smallest eigenvalue " + std::to_string(smallest) + ")");
    }
    const RMatrix &v = decomposition.vectors;
    RMatrix inverse = v * decomposition.values.cwiseInverse().asDiagonal() * v.transpose();
    return {symmetrized(inverse), largest / smallest};
}

}  // namespace qmetro
