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

#include "qmetro/estimation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qmetro/bounds.hpp"
#include "qmetro/error.hpp"

namespace qmetro {

MeasurementModel::MeasurementModel(const QuantumState &state, GeneratorSet gens, Povm povm, RVector true_theta)
    : state_(state.densified()), gens_(std::move(gens)), povm_(std::move(povm)), true_theta_(std::move(true_theta)) {
    if (state_.basis() != gens_.basis()) {
        throw Error(ErrorCode::DimensionMismatch, "state and generators use different bases");
    }
    if (povm_.dimension() != static_cast<Eigen::Index>(state_.basis().dimension())) {
        throw Error(ErrorCode::DimensionMismatch, "POVM dimension differs from basis dimension");
    }
    if (true_theta_.size() != gens_.modes()) {
        throw Error(ErrorCode::DimensionMismatch, "true theta length differs from number of modes");
    }
    CMatrix rho = state_.density_matrix();
    for (const auto &e : povm_.elements()) {
        std::vector<Entry> list;
        for (Eigen::Index i = 0; i < rho.rows(); ++i) {
            for (Eigen::Index j = 0; j < rho.cols(); ++j) {
                complex c = e(j, i) * rho(i, j);
                if (std::abs(c) > 1e-15) {
                    list.push_back({i, j, c});
                }
            }
        }
        entries_.push_back(std::move(list));
    }
}

RVector MeasurementModel::probabilities(const RVector &theta) const {
    RVector phase = gens_.combination(theta);
    CVector u(phase.size());
    for (Eigen::Index i = 0; i < phase.size(); ++i) {
        u(i) = std::polar(1.0, -phase(i));
    }
    RVector p(static_cast<Eigen::Index>(entries_.size()));
    double total = 0.0;
    for (std::size_t x = 0; x < entries_.size(); ++x) {
        double value = 0.0;
        for (const auto &entry : entries_[x]) {
            value += (entry.c * u(entry.i) * std::conj(u(entry.j))).real();
        }
        value = std::max(0.0, value);
        p(static_cast<Eigen::Index>(x)) = value;
        total += value;
    }
    if (total > 0.0) {
        p /= total;
    }
    return p;
}

std::vector<std::uint64_t> sample_outcomes(const MeasurementModel &model, std::uint64_t mu, std::uint64_t seed) {
    RVector p = model.probabilities(model.true_theta());
    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(p.size()), 0);
    std::uint64_t remaining = mu;
    double mass = 1.0;
    for (Eigen::Index x = 0; x + 1 < p.size() && remaining > 0; ++x) {
        double q = mass > 0.0 ? std::clamp(p(x) / mass, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> draw(remaining, q);
        std::uint64_t c = draw(rng);
        counts[static_cast<std::size_t>(x)] = c;
        remaining -= c;
        mass -= p(x);
    }
    counts.back() += remaining;
    return counts;
}

Grid Grid::around(const RVector &center, double half_width, int points) {
    if (points < 3 || points % 2 == 0) {
        throw Error(ErrorCode::InvalidArgs, "grid needs an odd number of at least 3 points");
    }
    if (!(half_width > 0.0)) {
        throw Error(ErrorCode::InvalidArgs, "grid half-width must be positive");
    }
    return {center, RVector::Constant(center.size(), half_width), points};
}

namespace {

double log_likelihood(const std::vector<std::uint64_t> &counts, const RVector &p) {
    double total = 0.0;
    for (std::size_t x = 0; x < counts.size(); ++x) {
        if (counts[x] == 0) {
            continue;
        }
        double px = p(static_cast<Eigen::Index>(x));
        if (px <= 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        total += static_cast<double>(counts[x]) * std::log(px);
    }
    return total;
}

}  // namespace

RVector mle_estimate(const std::vector<std::uint64_t> &counts, const MeasurementModel &model, const Grid &grid) {
    const int m = model.parameters();
    if (grid.center.size() != m || grid.half_width.size() != m) {
        throw Error(ErrorCode::DimensionMismatch, "grid dimension differs from number of parameters");
    }
    if (counts.size() != model.povm().size()) {
        throw Error(ErrorCode::DimensionMismatch, "one count per POVM outcome is required");
    }
    const int points = grid.points;
    std::size_t total = 1;
    for (int k = 0; k < m; ++k) {
        total *= static_cast<std::size_t>(points);
    }
    auto indices_of = [&](std::size_t flat) {
        std::vector<int> idx(m);
        for (int k = m - 1; k >= 0; --k) {
            idx[k] = static_cast<int>(flat % points);
            flat /= points;
        }
        return idx;
    };
    auto theta_of = [&](const std::vector<int> &idx) {
        RVector theta(m);
        for (int k = 0; k < m; ++k) {
            theta(k) = grid.value(k, idx[k]);
        }
        return theta;
    };
    auto evaluate = [&](const std::vector<int> &idx) {
        return log_likelihood(counts, model.probabilities(theta_of(idx)));
    };

    std::vector<double> values(total);
    double best = -std::numeric_limits<double>::infinity();
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t flat = 0; flat < total; ++flat) {
        values[flat] = evaluate(indices_of(flat));
        best = std::max(best, values[flat]);
        worst = std::min(worst, values[flat]);
    }
    if (!std::isfinite(best) || (std::isfinite(worst) && best - worst <= 1e-12)) {
        throw Error(ErrorCode::FlatLikelihood, "log-likelihood is flat over the grid");
    }

    const double tie = 1e-9 * (1.0 + std::abs(best));
    const double mid = 0.5 * (points - 1);
    std::size_t chosen = 0;
    double chosen_distance = std::numeric_limits<double>::infinity();
    for (std::size_t flat = 0; flat < total; ++flat) {
        if (values[flat] < best - tie) {
            continue;
        }
        auto idx = indices_of(flat);
        double distance = 0.0;
        for (int k = 0; k < m; ++k) {
            distance += (idx[k] - mid) * (idx[k] - mid);
        }
        if (distance < chosen_distance) {
            chosen_distance = distance;
            chosen = flat;
        }
    }

    auto idx = indices_of(chosen);
    RVector theta = theta_of(idx);
    const double center_value = values[chosen];
    for (int k = 0; k < m; ++k) {
        if (idx[k] == 0 || idx[k] == points - 1) {
            continue;
        }
        auto lower = idx;
        auto upper = idx;
        lower[k] -= 1;
        upper[k] += 1;
        double a = evaluate(lower);
        double c = evaluate(upper);
        double curvature = a - 2.0 * center_value + c;
        if (!std::isfinite(a) || !std::isfinite(c) || curvature >= 0.0) {
            continue;
        }
        double shift = std::clamp(0.5 * (a - c) / curvature, -1.0, 1.0);
        theta(k) += shift * grid.step(k);
    }
    return theta;
}

EstimationRun run_estimation(const MeasurementModel &model, std::uint64_t mu, std::uint64_t records,
                             std::uint64_t seed, const Grid &grid) {
    if (mu < 1 || records < 1) {
        throw Error(ErrorCode::InvalidArgs, "mu and records must be positive");
    }
    const int m = model.parameters();
    EstimationRun run;
    run.mu = mu;
    run.records = records;
    run.seed = seed;
    run.grid = grid;
    run.true_theta = model.true_theta();
    run.estimates.resize(static_cast<Eigen::Index>(records), m);
    for (std::uint64_t r = 0; r < records; ++r) {
        auto counts = sample_outcomes(model, mu, seed + r);
        run.estimates.row(static_cast<Eigen::Index>(r)) = mle_estimate(counts, model, grid).transpose();
    }
    run.mean = run.estimates.colwise().mean().transpose();
    RMatrix centered = run.estimates.rowwise() - run.mean.transpose();
    if (records > 1) {
        run.sigma = symmetrized(centered.transpose() * centered / static_cast<double>(records - 1));
    } else {
        run.sigma = RMatrix::Zero(m, m);
    }
    run.degenerate = records < 2 || max_abs(centered) == 0.0;
    return run;
}

CrbReport crb_report(const EstimationRun &run, const RMatrix &F, const RMatrix &FQ,
                     const std::vector<RVector> &directions) {
    const Eigen::Index m = run.sigma.rows();
    if (F.rows() != m || FQ.rows() != m) {
        throw Error(ErrorCode::DimensionMismatch, "Fisher matrices do not match the number of parameters");
    }
    CrbReport report;
    report.mu = run.mu;
    report.records = run.records;
    report.degenerate = run.degenerate;
    report.bias = run.mean - run.true_theta;
    report.bias_standard_error = (run.sigma.diagonal() / static_cast<double>(run.records)).cwiseSqrt();
    std::optional<RMatrix> inverse;
    try {
        inverse = invert_spd(F).inverse;
    } catch (const Error &e) {
        if (e.code() != ErrorCode::SingularMatrix) {
            throw;
        }
    }
    const double mu = static_cast<double>(run.mu);
    for (const auto &n : directions) {
        if (n.size() != m) {
            throw Error(ErrorCode::DimensionMismatch, "direction length differs from number of parameters");
        }
        DirectionSummary s;
        s.n = n;
        s.empirical = n.dot(run.sigma * n);
        s.standard_error = run.records > 1 ? s.empirical * std::sqrt(2.0 / static_cast<double>(run.records - 1)) : 0.0;
        if (inverse) {
            s.inverse_fisher = n.dot(*inverse * n) / mu;
        }
        try {
            s.weak_classical = weak_qcrb(n, F) / mu;
        } catch (const Error &e) {
            if (e.code() != ErrorCode::ZeroInformation) {
                throw;
            }
        }
        try {
            s.weak_quantum = weak_qcrb(n, FQ) / mu;
        } catch (const Error &e) {
            if (e.code() != ErrorCode::ZeroInformation) {
                throw;
            }
        }
        if (s.weak_classical) {
            s.relative_excess = s.empirical / *s.weak_classical - 1.0;
            s.within_weak_bound = !run.degenerate && s.empirical >= *s.weak_classical - 3.0 * s.standard_error;
        }
        if (s.weak_classical && s.inverse_fisher) {
            s.weak_ordering_holds = *s.weak_classical <= *s.inverse_fisher * (1.0 + 1e-10);
        }
        report.directions.push_back(std::move(s));
    }
    return report;
}

std::string format_double(double value) {
    char buffer[64];
    auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string estimates_csv(const EstimationRun &run) {
    std::ostringstream out;
    out << "record";
    for (Eigen::Index k = 0; k < run.estimates.cols(); ++k) {
        out << ",theta_" << k + 1;
    }
    out << "\n";
    for (Eigen::Index r = 0; r < run.estimates.rows(); ++r) {
        out << r;
        for (Eigen::Index k = 0; k < run.estimates.cols(); ++k) {
            out << "," << format_double(run.estimates(r, k));
        }
        out << "\n";
    }
    return out.str();
}

std::string summary_csv(const CrbReport &report) {
    std::ostringstream out;
    auto optional = [](const std::optional<double> &v) { return v ? format_double(*v) : std::string(); };
    const Eigen::Index m = report.bias.size();
    out << "direction";
    for (Eigen::Index k = 0; k < m; ++k) {
        out << ",n_" << k + 1;
    }
    out << ",empirical,standard_error,inverse_fisher,weak_classical,weak_quantum,relative_excess,degenerate\n";
    for (std::size_t d = 0; d < report.directions.size(); ++d) {
        const auto &s = report.directions[d];
        out << d;
        for (Eigen::Index k = 0; k < m; ++k) {
            out << "," << format_double(s.n(k));
        }
        out << "," << format_double(s.empirical) << "," << format_double(s.standard_error) << ","
            << optional(s.inverse_fisher) << "," << optional(s.weak_classical) << "," << optional(s.weak_quantum) << ","
            << format_double(s.relative_excess) << "," << (report.degenerate ? "true" : "false") << "\n";
    }
    return out.str();
}

}  // namespace qmetro
