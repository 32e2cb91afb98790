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

#ifndef QMETRO_ESTIMATION_HPP
#define QMETRO_ESTIMATION_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmetro/fisher.hpp"
#include "qmetro/hilbert.hpp"

namespace qmetro {

/// Phase-encoded state measured with a fixed POVM.
class MeasurementModel {
   public:
    MeasurementModel(const QuantumState &state, GeneratorSet gens, Povm povm, RVector true_theta);

    const GeneratorSet &generators() const {
        return gens_;
    }
    const Povm &povm() const {
        return povm_;
    }
    const RVector &true_theta() const {
        return true_theta_;
    }
    const QuantumState &state() const {
        return state_;
    }
    int parameters() const {
        return gens_.modes();
    }

    /// p(x | theta), clipped at zero and renormalized.
    RVector probabilities(const RVector &theta) const;

   private:
    QuantumState state_;
    GeneratorSet gens_;
    Povm povm_;
    RVector true_theta_;
    // Nonzero entries Pi_x[j,i] rho[i,j], evaluated with phases exp(-i(phi_i - phi_j)).
    struct Entry {
        Eigen::Index i, j;
        complex c;
    };
    std::vector<std::vector<Entry>> entries_;
};

/// Multinomial counts of mu outcomes at the true parameters.
std::vector<std::uint64_t> sample_outcomes(const MeasurementModel &model, std::uint64_t mu, std::uint64_t seed);

/// Regular grid per parameter: center +- half_width with `points` points.
struct Grid {
    RVector center;
    RVector half_width;
    int points = 201;

    static Grid around(const RVector &center, double half_width = 0.5, int points = 201);
    double step(int k) const {
        return 2.0 * half_width(k) / (points - 1);
    }
    double value(int k, int index) const {
        return center(k) - half_width(k) + index * step(k);
    }
};

/// Grid maximum of sum_x counts_x log p(x | theta), then a parabolic refinement per axis.
/// Ties within 1e-9 (1 + |L|) go to the point closest to the grid center.
/// Throws FlatLikelihood when the log-likelihood varies by at most 1e-12 over the grid.
RVector mle_estimate(const std::vector<std::uint64_t> &counts, const MeasurementModel &model, const Grid &grid);

struct EstimationRun {
    std::uint64_t mu = 0;
    std::uint64_t records = 0;
    std::uint64_t seed = 0;
    Grid grid;
    RVector true_theta;
    /// records x M
    RMatrix estimates;
    RVector mean;
    /// Sample covariance with denominator R - 1 (zero when R = 1).
    RMatrix sigma;
    bool degenerate = false;
};

/// Record r uses seed + r.
EstimationRun run_estimation(const MeasurementModel &model, std::uint64_t mu, std::uint64_t records,
                             std::uint64_t seed, const Grid &grid);

struct DirectionSummary {
    RVector n;
    double empirical = 0.0;
    /// Standard error of the empirical variance, empirical * sqrt(2/(R-1)).
    double standard_error = 0.0;
    std::optional<double> inverse_fisher;  // n^T F^-1 n / mu
    std::optional<double> weak_classical;  // (n^T n)^2 / (mu n^T F n)
    std::optional<double> weak_quantum;    // (n^T n)^2 / (mu n^T F_Q n)
    /// empirical / weak_classical - 1
    double relative_excess = 0.0;
    /// weak_classical <= inverse_fisher (when both exist)
    bool weak_ordering_holds = true;
    /// empirical >= weak_classical - 3 standard errors
    bool within_weak_bound = true;
};

struct CrbReport {
    std::uint64_t mu = 0;
    std::uint64_t records = 0;
    bool degenerate = false;
    RVector bias;
    RVector bias_standard_error;
    std::vector<DirectionSummary> directions;
};

CrbReport crb_report(const EstimationRun &run, const RMatrix &F, const RMatrix &FQ, const std::vector<RVector> &directions);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

/// record,theta_1,...,theta_M
std::string estimates_csv(const EstimationRun &run);

/// direction,n_1..n_M,empirical,standard_error,inverse_fisher,weak_classical,weak_quantum,relative_excess,degenerate
std::string summary_csv(const CrbReport &report);

}  // namespace qmetro

#endif
