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

#include "qmetro/commands.hpp"

#include <cmath>
#include <sstream>

#include "qmetro/error.hpp"
#include "qmetro/fisher.hpp"
#include "qmetro/transforms.hpp"

namespace qmetro {

using nlohmann::json;

json matrix_json(const RMatrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(row);
    }
    return rows;
}

json vector_json(const RVector &v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

json report_json(const BoundReport &r) {
    static const char *kinds[] = {"matrix", "quadratic_form", "identity"};
    json j = {
        {"name", r.name},
        {"kind", kinds[static_cast<int>(r.kind)]},
        {"margin", r.margin},
        {"satisfied", r.satisfied},
        {"saturated", r.saturated},
    };
    if (r.matrix.size() > 0) {
        j["matrix"] = matrix_json(r.matrix);
    }
    if (r.kind == BoundKind::QuadraticForm) {
        j["direction"] = vector_json(r.direction);
        j["bound_value"] = r.bound_value;
        j["state_value"] = r.state_value;
    }
    return j;
}

namespace {

std::vector<int> fixed_particles(const MomentData &moments) {
    std::vector<int> particles;
    for (Eigen::Index k = 0; k < moments.first.size(); ++k) {
        double n = moments.first(k);
        double rounded = std::round(n);
        if (std::abs(n - rounded) > 1e-9 || std::abs(moments.second(k, k) - n * n) > 1e-9 * (1 + n * n)) {
            throw Error(ErrorCode::InvalidArgs, "bound needs a fixed particle number in every mode");
        }
        particles.push_back(static_cast<int>(rounded));
    }
    return particles;
}

std::string basis_kind(const Basis &basis) {
    return basis.is_distinguishable() ? "distinguishable" : "fock";
}

}  // namespace

VerifyResult run_verify(const Scenario &s) {
    const ModeConfig config = s.config();
    QuantumState state = build_state(s);
    GeneratorSet gens = build_generators(state.basis());
    const Direction direction = scenario_direction(s).value_or(Direction::uniform(config.modes()));
    const RVector &n = direction.n;

    const RMatrix fq = qfi_matrix(state, gens);
    const RMatrix cov = covariance_matrix(state, gens);
    const RMatrix fluct = fluctuation_matrix(state, gens);
    std::optional<MomentData> user;
    if (s.moments) {
        MomentData m;
        m.first = Eigen::Map<const RVector>(s.moments->first.data(), static_cast<Eigen::Index>(s.moments->first.size()));
        m.second = RMatrix(static_cast<Eigen::Index>(s.moments->second.size()),
                           static_cast<Eigen::Index>(s.moments->second.size()));
        for (std::size_t i = 0; i < s.moments->second.size(); ++i) {
            if (s.moments->second[i].size() != s.moments->second.size()) {
                throw Error(ErrorCode::ParseError, "moments.second must be square");
            }
            for (std::size_t j = 0; j < s.moments->second.size(); ++j) {
                m.second(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s.moments->second[i][j];
            }
        }
        validate_moments(m);
        user = m;
    }
    const MomentData moments = resolve_moments(moments_from_state(state, gens), user);

    const RMatrix fsn = shot_noise_bound(moments, config);
    const HeisenbergBound hl = heisenberg_bound(direction, moments, config);
    std::vector<BoundReport> reports = {
        matrix_report("4Gamma", 4.0 * cov, fq),
        matrix_report("F_SN", fsn, fq),
        matrix_report("F_MS", mode_separable_bound(moments, config), fq),
        quadratic_report("F_HL", hl.matrix, fq, n),
        quadratic_report("F_HL_prime", hl.cross, fq, n),
    };
    auto state_reports = check_state_dependent_bounds(state, gens, direction);
    reports.insert(reports.end(), state_reports.begin(), state_reports.end());

    auto find = [&](const std::string &name) -> const BoundReport * {
        for (const auto &r : reports) {
            if (r.name == name) {
                return &r;
            }
        }
        return nullptr;
    };
    const EntanglementSpec spec = scenario_entanglement(s);
    auto evaluate = [&](const std::string &name) -> BoundReport {
        if (const auto *existing = find(name)) {
            return *existing;
        }
        if (name == "F_P") {
            std::vector<int> P = s.P ? *s.P : s.state.P.value_or(std::vector<int>{});
            if (P.empty()) {
                throw Error(ErrorCode::InvalidArgs, "check F_P needs entanglement.P");
            }
            return matrix_report("F_P", p_producible_bound(fixed_particles(moments), P, config), fq);
        }
        if (name == "F_Lambda") {
            auto partition = s.partition ? s.partition : s.state.partition;
            if (!partition) {
                throw Error(ErrorCode::InvalidArgs, "check F_Lambda needs entanglement.partition");
            }
            return quadratic_report("F_Lambda", partition_bound(direction, *partition, moments, config), fq, n);
        }
        if (name == "transform") {
            RMatrix O = RMatrix::Identity(config.modes(), config.modes());
            if (s.weights) {
                RMatrix W(config.modes(), config.modes());
                for (int i = 0; i < config.modes(); ++i) {
                    for (int j = 0; j < config.modes(); ++j) {
                        W(i, j) = (*s.weights)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                    }
                }
                O = WeightMatrix::from(W).O.transpose();
            }
            auto r = verify_qfi_transform(state, gens, O);
            r.name = "transform";
            return r;
        }
        throw Error(ErrorCode::NoStructure, "state carries no decomposition for check '" + name + "'");
    };

    VerifyResult result;
    json checks = json::array();
    for (const auto &c : s.checks) {
        BoundReport r = evaluate(c.bound);
        if (!find(r.name)) {
            reports.push_back(r);
        }
        bool ok = r.satisfied && (!c.saturated || r.saturated);
        result.passed = result.passed && ok;
        checks.push_back({{"check", c.to_string()}, {"passed", ok}, {"margin", r.margin}});
    }

    json bounds = json::array();
    for (const auto &r : reports) {
        bounds.push_back(report_json(r));
    }
    json report = {
        {"scenario", s.name},
        {"state_family", s.state.family},
        {"basis", {{"kind", basis_kind(state.basis())}, {"dimension", state.basis().dimension()}}},
        {"modes", config.modes()},
        {"direction", vector_json(n)},
        {"moments",
         {{"first", vector_json(moments.first)},
          {"second", matrix_json(moments.second)},
          {"source", moments.source == MomentSource::FromState ? "from-state" : "user-supplied"}}},
        {"qfi", matrix_json(fq)},
        {"covariance", matrix_json(cov)},
        {"fluctuation", matrix_json(fluct)},
        {"shot_noise_rank", shot_noise_rank(fq, fsn)},
        {"bounds", bounds},
        {"checks", checks},
    };

    if (s.weights) {
        RMatrix W(config.modes(), config.modes());
        for (int i = 0; i < config.modes(); ++i) {
            for (int j = 0; j < config.modes(); ++j) {
                W(i, j) = (*s.weights)[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
        }
        auto wm = WeightMatrix::from(W);
        json weighted = {{"W", matrix_json(W)}};
        try {
            auto wb = weighted_bound(wm, config, fixed_particles(moments));
            weighted["sigma_max"] = matrix_json(wb.sigma_max);
            weighted["trace_bound"] = wb.trace_value;
            weighted["spreads"] = vector_json(wb.spreads);
            weighted["optimal_state"] = wb.optimal_state;
        } catch (const Error &e) {
            weighted["sigma_max_error"] = std::string(error_code_name(e.code()));
        }
        try {
            weighted["trace_crb_state"] = trace_weighted_crb(wm, fq);
        } catch (const Error &e) {
            weighted["trace_crb_state_error"] = std::string(error_code_name(e.code()));
        }
        report["weighted"] = weighted;
    }
    report["passed"] = result.passed;
    result.report = std::move(report);
    return result;
}

json gain_table(int particles, int modes) {
    if (modes < 1 || particles < 1 || particles % modes != 0) {
        throw Error(ErrorCode::InvalidArgs, "gain table needs M >= 1 dividing N");
    }
    json rows = json::array();
    for (int me = 1; me <= modes; ++me) {
        for (int pe = 1; pe <= particles / modes; ++pe) {
            auto g = gain_factor(particles, modes, me, pe);
            rows.push_back({{"M_e", me}, {"P_e", pe}, {"S_max", g.s_max}, {"S_max_unit", g.s_max_unit_components},
                            {"G", g.gain}});
        }
    }
    return rows;
}

std::string gain_csv(int particles, int modes) {
    std::ostringstream out;
    out << "M_e,P_e,S_max,G\n";
    for (const auto &row : gain_table(particles, modes)) {
        out << row["M_e"].get<int>() << ',' << row["P_e"].get<int>() << ','
            << format_double(row["S_max"].get<double>()) << ',' << format_double(row["G"].get<double>()) << '\n';
    }
    return out.str();
}

json bounds_table(const ModeConfig &config, const MomentData &moments, const Direction &direction,
                  const std::optional<std::vector<int>> &P,
                  const std::optional<std::vector<std::vector<int>>> &partition) {
    validate_moments(moments);
    auto hl = heisenberg_bound(direction, moments, config);
    json table = {
        {"direction", vector_json(direction.n)},
        {"F_SN", matrix_json(shot_noise_bound(moments, config))},
        {"F_MS", matrix_json(mode_separable_bound(moments, config))},
        {"F_HL", matrix_json(hl.matrix)},
        {"F_HL_prime", matrix_json(hl.cross)},
    };
    if (P) {
        table["F_P"] = matrix_json(p_producible_bound(fixed_particles(moments), *P, config));
    }
    if (partition) {
        table["F_Lambda"] = matrix_json(partition_bound(direction, *partition, moments, config));
    }
    return table;
}

std::string bounds_csv(const json &table) {
    std::ostringstream out;
    out << "bound,row,col,value\n";
    for (const auto &item : table.items()) {
        if (item.key() == "direction") {
            continue;
        }
        const auto &rows = item.value();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
                out << item.key() << ',' << i << ',' << j << ',' << format_double(rows[i][j].get<double>()) << '\n';
            }
        }
    }
    return out.str();
}

MonteCarloResult run_montecarlo(const Scenario &s, std::uint64_t mu, std::uint64_t records, std::uint64_t seed) {
    if (!s.povm) {
        throw Error(ErrorCode::InvalidArgs, "montecarlo needs a POVM in the scenario");
    }
    if (mu == 0 || records == 0) {
        throw Error(ErrorCode::InvalidArgs, "mu and records must be positive");
    }
    QuantumState state = build_state(s);
    GeneratorSet gens = build_generators(state.basis());
    Povm povm = build_povm(*s.povm, state.basis());
    const int m = gens.modes();
    RVector theta = RVector::Constant(m, 0.1);
    if (s.theta) {
        for (int k = 0; k < m; ++k) {
            theta(k) = (*s.theta)[static_cast<std::size_t>(k)];
        }
    }
    GridSpec gs = s.grid.value_or(GridSpec{});
    Grid grid = Grid::around(theta, gs.half_width, gs.points);
    MeasurementModel model(state, gens, povm, theta);

    MonteCarloResult result;
    result.run = run_estimation(model, mu, records, seed, grid);
    result.fisher = classical_fisher_matrix(state, gens, povm, theta);
    result.quantum_fisher = qfi_matrix(state, gens);
    std::vector<RVector> directions;
    for (int k = 0; k < m; ++k) {
        directions.push_back(RVector::Unit(m, k));
    }
    if (auto d = scenario_direction(s); d && m > 1) {
        directions.push_back(d->n);
    }
    result.report = crb_report(result.run, result.fisher, result.quantum_fisher, directions);
    if (!result.report.degenerate) {
        for (const auto &d : result.report.directions) {
            result.passed = result.passed && d.within_weak_bound && d.weak_ordering_holds;
        }
    }
    return result;
}

json montecarlo_json(const MonteCarloResult &r) {
    json directions = json::array();
    auto optional = [](const std::optional<double> &v) { return v ? json(*v) : json(nullptr); };
    for (const auto &d : r.report.directions) {
        directions.push_back({
            {"n", vector_json(d.n)},
            {"empirical", d.empirical},
            {"standard_error", d.standard_error},
            {"inverse_fisher", optional(d.inverse_fisher)},
            {"weak_classical", optional(d.weak_classical)},
            {"weak_quantum", optional(d.weak_quantum)},
            {"relative_excess", d.relative_excess},
            {"weak_ordering_holds", d.weak_ordering_holds},
            {"within_weak_bound", d.within_weak_bound},
        });
    }
    return {
        {"mu", r.report.mu},
        {"records", r.report.records},
        {"seed", r.run.seed},
        {"true_theta", vector_json(r.run.true_theta)},
        {"degenerate", r.report.degenerate},
        {"mean", vector_json(r.run.mean)},
        {"sigma", matrix_json(r.run.sigma)},
        {"bias", vector_json(r.report.bias)},
        {"bias_standard_error", vector_json(r.report.bias_standard_error)},
        {"fisher", matrix_json(r.fisher)},
        {"quantum_fisher", matrix_json(r.quantum_fisher)},
        {"directions", directions},
        {"passed", r.passed},
    };
}

}  // namespace qmetro
