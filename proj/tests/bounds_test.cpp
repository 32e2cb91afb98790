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

#include "qmetro/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qmetro/error.hpp"
#include "qmetro/fisher.hpp"
#include "qmetro/states.hpp"
#include "test_util.hpp"

using namespace qmetro;

namespace {

double scale(const RMatrix &m) {
    return 1.0 + max_abs(m);
}

RMatrix diag(std::initializer_list<double> values) {
    RVector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) {
        v(i++) = x;
    }
    return v.asDiagonal();
}

Direction dir(std::initializer_list<double> values) {
    RVector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) {
        v(i++) = x;
    }
    return Direction{v}.normalized();
}

template <typename F>
void expect_code(F f, ErrorCode code) {
    try {
        f();
        FAIL() << "no exception";
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), code) << e.what();
    }
}

const BoundReport *find(const std::vector<BoundReport> &reports, const std::string &name) {
    for (const auto &r : reports) {
        if (r.name == name) {
            return &r;
        }
    }
    return nullptr;
}

struct Evaluated {
    RMatrix fq;
    MomentData moments;
};

Evaluated evaluate(const QuantumState &state) {
    auto gens = build_generators(state.basis());
    return {qfi_matrix(state, gens), moments_from_state(state, gens)};
}

}  // namespace

TEST(bounds, shot_noise_examples) {
    auto two = ModeConfig::two_level(2);
    EXPECT_LE(max_abs(shot_noise_bound(MomentData::fixed({2, 2}), two) - diag({2, 2})), 1e-15);
    auto one = ModeConfig::two_level(1);
    RMatrix f = shot_noise_bound(MomentData::fixed({5}), one);
    EXPECT_NEAR(f(0, 0), 5.0, 1e-15);
    EXPECT_NEAR(invert_spd(f).inverse(0, 0), 1.0 / 5.0, 1e-15);
    ModeConfig wide({{1.0, -1.0}});
    EXPECT_NEAR(shot_noise_bound(MomentData::fixed({3}), wide)(0, 0), 12.0, 1e-15);
}

TEST(bounds, mode_separable_examples) {
    auto two = ModeConfig::two_level(2);
    EXPECT_LE(max_abs(mode_separable_bound(MomentData::fixed({3, 2}), two) - diag({9, 4})), 1e-15);
    auto one = ModeConfig::two_level(1);
    auto single = MomentData::fixed({1});
    EXPECT_EQ(mode_separable_bound(single, one)(0, 0), shot_noise_bound(single, one)(0, 0));
}

TEST(bounds, shot_noise_below_mode_separable_for_state_moments) {
    std::mt19937_64 rng(2);
    auto config = ModeConfig::two_level(2);
    EntanglementSpec spec;
    for (int seed = 0; seed < 30; ++seed) {
        auto state = sample_state(config, 3, SampleClass::ArbitraryPure, spec, seed);
        auto ev = evaluate(state);
        validate_moments(ev.moments);
        EXPECT_TRUE(loewner_leq(shot_noise_bound(ev.moments, config), mode_separable_bound(ev.moments, config)));
    }
}

TEST(bounds, p_producible_examples) {
    auto one = ModeConfig::two_level(1);
    EXPECT_EQ(p_producible_bound({4}, {4}, one)(0, 0), 16.0);
    EXPECT_EQ(p_producible_bound({4}, {2}, one)(0, 0), 8.0);
    EXPECT_EQ(p_producible_bound({4}, {1}, one)(0, 0), 4.0);
    EXPECT_EQ(p_producible_bound({5}, {2}, one)(0, 0), 9.0);
    expect_code([&] { p_producible_bound({4}, {5}, one); }, ErrorCode::InvalidP);
    expect_code([&] { p_producible_bound({4}, {0}, one); }, ErrorCode::InvalidP);
}

TEST(bounds, p_producible_hierarchy) {
    auto config = ModeConfig::two_level(2);
    std::vector<int> n = {6, 5};
    auto moments = MomentData::fixed(n);
    for (int p0 = 1; p0 <= 6; ++p0) {
        for (int p1 = 1; p1 <= 5; ++p1) {
            RMatrix f = p_producible_bound(n, {p0, p1}, config);
            EXPECT_TRUE(loewner_leq(shot_noise_bound(moments, config), f));
            EXPECT_TRUE(loewner_leq(f, mode_separable_bound(moments, config)));
            if (p0 > 1) {
                EXPECT_TRUE(loewner_leq(p_producible_bound(n, {p0 - 1, p1}, config), f));
            }
            if (p1 > 1) {
                EXPECT_TRUE(loewner_leq(p_producible_bound(n, {p0, p1 - 1}, config), f));
            }
        }
    }
    EXPECT_LE(max_abs(p_producible_bound(n, {1, 1}, config) - shot_noise_bound(moments, config)), 1e-15);
    EXPECT_LE(max_abs(p_producible_bound(n, {6, 5}, config) - mode_separable_bound(moments, config)), 1e-15);
}

TEST(bounds, heisenberg_examples) {
    auto two = ModeConfig::two_level(2);
    auto moments = MomentData::fixed({2, 2});
    auto hl = heisenberg_bound(Direction::uniform(2), moments, two);
    EXPECT_LE(max_abs(hl.matrix - RMatrix::Constant(2, 2, 4.0)), 1e-12);
    EXPECT_NEAR(hl.quadratic(Direction::uniform(2).n), 8.0, 1e-12);
    RMatrix alternating(2, 2);
    alternating << 4, -4, -4, 4;
    EXPECT_LE(max_abs(heisenberg_bound(dir({1, -1}), moments, two).matrix - alternating), 1e-12);
    auto one = ModeConfig::two_level(1);
    EXPECT_NEAR(heisenberg_bound(Direction::uniform(1), MomentData::fixed({7}), one).matrix(0, 0), 49.0, 1e-12);
    EXPECT_LE(max_abs(heisenberg_fixed_bound(dir({1, -1}), {2, 2}, two) - alternating), 1e-12);
    EXPECT_THROW(invert_spd(hl.matrix), Error);
}

TEST(bounds, heisenberg_cross_quadratic_ordering) {
    auto config = ModeConfig::two_level(3);
    std::mt19937_64 rng(5);
    EntanglementSpec spec;
    for (int seed = 0; seed < 10; ++seed) {
        auto ev = evaluate(sample_state(config, 2, SampleClass::ArbitraryPure, spec, seed));
        for (int t = 0; t < 20; ++t) {
            Direction d{testutil::random_unit(3, rng)};
            auto hl = heisenberg_bound(d, ev.moments, config);
            double s = scale(hl.matrix);
            EXPECT_LE(hl.cross_quadratic(d.n), hl.quadratic(d.n) + 1e-10 * s);
            EXPECT_LE(d.n.dot(ev.fq * d.n), hl.cross_quadratic(d.n) + 1e-8 * s);
            EXPECT_LE(d.n.dot(ev.fq * d.n), hl.quadratic(d.n) + 1e-8 * s);
        }
    }
}

TEST(bounds, partition_examples) {
    auto three = ModeConfig::two_level(3);
    auto moments = MomentData::fixed({2, 2, 2});
    auto d = Direction::uniform(3);
    EXPECT_LE(max_abs(partition_bound(d, {{0}, {1}, {2}}, moments, three) - mode_separable_bound(moments, three)),
              1e-12);
    EXPECT_LE(max_abs(partition_bound(d, {{0, 1, 2}}, moments, three) - heisenberg_bound(d, moments, three).matrix),
              1e-12);
    RMatrix expected = RMatrix::Zero(3, 3);
    expected.topLeftCorner(2, 2).setConstant(4);
    expected(2, 2) = 4;
    RMatrix fl = partition_bound(d, {{0, 1}, {2}}, moments, three);
    EXPECT_LE(max_abs(fl - expected), 1e-12);
    auto state = lambda_sep_multinoon(three, {2, 2, 2}, {{0, 1}, {2}}, d);
    RMatrix fq = qfi_matrix(state, build_generators(state.basis()));
    EXPECT_TRUE(matrix_report("F_Lambda", fl, fq).saturated);
    expect_code([&] { partition_bound(d, {{0, 1}}, moments, three); }, ErrorCode::InvalidPartition);
}

TEST(bounds, partition_refinement_hierarchy) {
    auto config = ModeConfig::two_level(3);
    std::mt19937_64 rng(7);
    EntanglementSpec spec;
    std::vector<std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>> pairs = {
        {{{0, 1, 2}}, {{0, 1}, {2}}},
        {{{0, 1, 2}}, {{0, 2}, {1}}},
        {{{0, 1}, {2}}, {{0}, {1}, {2}}},
        {{{1, 2}, {0}}, {{0}, {1}, {2}}},
        {{{0, 1, 2}}, {{0}, {1}, {2}}},
    };
    for (int seed = 0; seed < 5; ++seed) {
        auto ev = evaluate(sample_state(config, 2, SampleClass::ArbitraryPure, spec, seed));
        for (const auto &[coarse, fine] : pairs) {
            for (int t = 0; t < 20; ++t) {
                Direction d{testutil::random_unit(3, rng)};
                double a = d.n.dot(partition_bound(d, coarse, ev.moments, config) * d.n);
                double b = d.n.dot(partition_bound(d, fine, ev.moments, config) * d.n);
                EXPECT_GE(a, b - 1e-10);
            }
        }
    }
}

TEST(bounds, weak_qcrb_examples) {
    RMatrix f = RMatrix::Constant(2, 2, 4.0);
    EXPECT_NEAR(weak_qcrb(Direction::uniform(2).n, f), 1.0 / 8.0, 1e-15);
    EXPECT_THROW(invert_spd(f), Error);
    RMatrix d = diag({3, 7});
    RVector e1 = RVector::Unit(2, 0);
    EXPECT_NEAR(weak_qcrb(e1, d), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(weak_qcrb(e1, d), invert_spd(d).inverse(0, 0), 1e-15);
    expect_code([&] { weak_qcrb(dir({1, -1}).n, f); }, ErrorCode::ZeroInformation);
}

TEST(bounds, weak_qcrb_below_inverse) {
    std::mt19937_64 rng(13);
    for (int t = 0; t < 100; ++t) {
        int m = 1 + t % 5;
        RMatrix f = testutil::random_spd(m, rng);
        RVector n = testutil::random_unit(m, rng);
        EXPECT_LE(weak_qcrb(n, f), n.dot(invert_spd(f).inverse * n) + 1e-10);
    }
    RMatrix f = testutil::random_spd(3, rng);
    auto dec = eigh(f);
    RVector v = dec.vectors.col(1);
    EXPECT_NEAR(weak_qcrb(v, f), v.dot(invert_spd(f).inverse * v), 1e-10);
}

TEST(bounds, shot_noise_rank_examples) {
    auto config = ModeConfig::two_level(2);
    auto fsn = shot_noise_bound(MomentData::fixed({2, 2}), config);
    auto noon = mspe_noon_product(config, {2, 2});
    RMatrix fq_noon = qfi_matrix(noon, build_generators(noon.basis()));
    EXPECT_LE(max_abs(fq_noon - fsn - diag({2, 2})), 1e-12);
    EXPECT_EQ(shot_noise_rank(fq_noon, fsn), 2);

    auto multi = mepe_multinoon(config, {2, 2}, Direction::uniform(2));
    RMatrix fq_multi = qfi_matrix(multi, build_generators(multi.basis()));
    RMatrix expected(2, 2);
    expected << 2, 4, 4, 2;
    EXPECT_LE(max_abs(fq_multi - fsn - expected), 1e-12);
    auto eig = eigh(RMatrix(fq_multi - fsn));
    EXPECT_NEAR(eig.values(0), -2.0, 1e-12);
    EXPECT_NEAR(eig.values(1), 6.0, 1e-12);
    EXPECT_EQ(shot_noise_rank(fq_multi, fsn), 1);

    auto sep = msps_state(config, {0, 1});
    EXPECT_EQ(shot_noise_rank(qfi_matrix(sep, build_generators(sep.basis())), fsn), 0);
    expect_code([&] { shot_noise_rank(fq_multi, RMatrix::Zero(3, 3)); }, ErrorCode::DimensionMismatch);
}

TEST(bounds, gain_factor_examples) {
    EXPECT_NEAR(gain_factor(8, 2, 1, 1).gain, 1.0, 1e-15);
    EXPECT_NEAR(gain_factor(8, 2, 1, 4).gain, 4.0, 1e-15);
    EXPECT_NEAR(gain_factor(8, 2, 2, 1).gain, 2.0, 1e-15);
    EXPECT_NEAR(gain_factor(8, 2, 2, 4).gain, 8.0, 1e-15);
    EXPECT_NEAR(gain_factor(8, 2, 2, 2).gain, 4.0, 1e-15);
    EXPECT_NEAR(gain_factor(8, 2, 1, 1).s_max, 4.0, 1e-15);
    EXPECT_NEAR(gain_factor(8, 2, 1, 1).s_max_unit_components, 8.0, 1e-15);
    expect_code([&] { gain_factor(7, 2, 1, 1); }, ErrorCode::InvalidArgs);
    expect_code([&] { gain_factor(8, 2, 3, 1); }, ErrorCode::InvalidArgs);
    expect_code([&] { gain_factor(8, 2, 1, 5); }, ErrorCode::InvalidArgs);
    expect_code([&] { gain_factor(8, 2, 0, 1); }, ErrorCode::InvalidArgs);
}

TEST(bounds, gain_factor_matches_constructed_states) {
    const std::size_t cap = 1 << 16;
    for (int m = 1; m <= 3; ++m) {
        auto config = ModeConfig::two_level(m);
        auto d = Direction::uniform(m);
        for (int n = m; n <= 8; n += m) {
            auto quadratic = [&](int me, int pe) {
                auto state = block_multinoon(config, n, me, pe, d, cap);
                return qfi_scalar(state, build_generators(state.basis()).combination(d.n));
            };
            double base = quadratic(1, 1);
            EXPECT_NEAR(base, gain_factor(n, m, 1, 1).s_max, 1e-9 * (1 + base));
            for (int me = 1; me <= m; ++me) {
                for (int pe = 1; pe <= n / m; ++pe) {
                    auto g = gain_factor(n, m, me, pe);
                    double s = quadratic(me, pe);
                    EXPECT_NEAR(s, g.s_max, 1e-9 * (1 + s)) << n << " " << m << " " << me << " " << pe;
                    EXPECT_NEAR(s / base, g.gain, 1e-9 * (1 + g.gain));
                }
            }
        }
    }
}

TEST(bounds, localization_envelope_example) {
    auto config = ModeConfig::two_level(2);
    std::vector<std::vector<double>> conditional = {{0.8, 0.2}, {0.8, 0.2}};
    auto env = localization_envelope(config, conditional, {1, 1}, {{0.5, 0.5}, {0.5, 0.5}});
    EXPECT_LE(max_abs(env.localized - diag({0.16, 0.16})), 1e-12);
    RMatrix deloc(2, 2);
    deloc << 0.205, -0.045, -0.045, 0.205;
    EXPECT_LE(max_abs(env.delocalized - deloc), 1e-12);
    EXPECT_LE(max_abs(env.given - deloc), 1e-12);
    auto eig = eigh(RMatrix(env.delocalized - env.localized));
    EXPECT_NEAR(eig.values(0), 0.0, 1e-12);
    EXPECT_NEAR(eig.values(1), 0.09, 1e-12);
    expect_code([&] { localization_envelope(config, conditional, {0.5, 1.5}, {{0.5, 0.5}, {0, 1}}); },
                ErrorCode::NonIntegerTargets);
}

TEST(bounds, localization_envelope_balanced_collapses) {
    auto config = ModeConfig::two_level(3);
    std::vector<std::vector<double>> conditional = {{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}};
    auto env = localization_envelope(config, conditional, {1, 1, 1}, {{0.2, 0.3, 0.5}, {0.4, 0.4, 0.2}, {0.4, 0.3, 0.3}});
    EXPECT_LE(max_abs(env.localized - env.delocalized), 1e-12);
    EXPECT_LE(max_abs(env.localized - env.given), 1e-12);
}

TEST(bounds, localization_envelope_matches_product_state) {
    // The "given" matrix equals the covariance of the explicit particle-product state.
    auto config = ModeConfig::two_level(2);
    std::vector<std::vector<double>> conditional = {{0.7, 0.3}, {0.1, 0.9}};
    std::vector<std::vector<double>> dist = {{0.25, 0.75}, {0.6, 0.4}, {0.15, 0.85}};
    auto env = localization_envelope(config, conditional, {1, 2}, dist);
    std::vector<QuantumState> factors;
    std::vector<std::vector<int>> groups;
    Basis single(config, DistinguishableParticles{1});
    for (std::size_t i = 0; i < dist.size(); ++i) {
        CVector amp(4);
        for (int k = 0; k < 2; ++k) {
            for (int j = 0; j < 2; ++j) {
                amp(2 * k + j) = std::sqrt(dist[i][k] * conditional[k][j]);
            }
        }
        factors.push_back(QuantumState::pure(single, amp));
        groups.push_back({static_cast<int>(i)});
    }
    auto product = compose(FactorKind::Particles, groups, factors);
    auto gens = build_generators(product.basis());
    RMatrix brute = testutil::brute_covariance(product.density_matrix(), gens);
    EXPECT_LE(max_abs(env.given - brute), 1e-12);
    EXPECT_TRUE(loewner_leq(env.localized, env.given, 1e-10));
    EXPECT_TRUE(loewner_leq(env.given, env.delocalized, 1e-10));
}

TEST(bounds, localization_envelope_single_particle) {
    auto config = ModeConfig::two_level(2);
    std::vector<std::vector<double>> conditional = {{0.9, 0.1}, {0.3, 0.7}};
    auto env = localization_envelope(config, conditional, {1, 0}, {{1.0, 0.0}});
    auto state = msps_state(config, {0});
    Basis single = state.basis();
    CVector amp = CVector::Zero(4);
    amp(0) = std::sqrt(0.9);
    amp(1) = std::sqrt(0.1);
    auto direct = QuantumState::pure(single, amp);
    RMatrix cov = covariance_matrix(direct, build_generators(single));
    EXPECT_LE(max_abs(env.localized - cov), 1e-12);
}

TEST(bounds, moment_resolution) {
    auto state_moments = MomentData::fixed({2, 2});
    state_moments.source = MomentSource::FromState;
    auto user = MomentData::fixed({2, 2});
    EXPECT_EQ(resolve_moments(state_moments, user).source, MomentSource::FromState);
    EXPECT_EQ(resolve_moments(std::nullopt, user).source, MomentSource::UserSupplied);
    auto other = MomentData::fixed({2, 3});
    expect_code([&] { resolve_moments(state_moments, other); }, ErrorCode::InvalidArgs);

    MomentData bad{RVector::Constant(1, 2.0), RMatrix::Constant(1, 1, 1.5)};
    expect_code([&] { validate_moments(bad); }, ErrorCode::InvalidArgs);
    MomentData skew{RVector::Constant(2, 1.0), RMatrix::Identity(2, 2)};
    skew.second(0, 1) = skew.second(1, 0) = 2.0;
    expect_code([&] { validate_moments(skew); }, ErrorCode::InvalidArgs);
}

TEST(bounds, saturation_by_optimal_states) {
    auto two = ModeConfig::two_level(2);
    auto three = ModeConfig::two_level(3);
    {
        auto ev = evaluate(msps_state(two, {0, 1, 1}));
        EXPECT_TRUE(matrix_report("F_SN", shot_noise_bound(ev.moments, two), ev.fq).saturated);
    }
    {
        auto ev = evaluate(meps_state(two, 3, {1.0, 2.0}));
        EXPECT_TRUE(matrix_report("F_SN", shot_noise_bound(ev.moments, two), ev.fq).saturated);
    }
    {
        auto ev = evaluate(mspe_noon_product(two, {3, 2}));
        EXPECT_TRUE(matrix_report("F_MS", mode_separable_bound(ev.moments, two), ev.fq).saturated);
    }
    {
        auto one = ModeConfig::two_level(1);
        auto ev = evaluate(p_producible_noon_chain(one, {5}, {2}));
        EXPECT_TRUE(matrix_report("F_P", p_producible_bound({5}, {2}, one), ev.fq).saturated);
    }
    {
        auto d = dir({1, -2});
        auto ev = evaluate(mepe_multinoon(two, {2, 3}, d));
        auto hl = heisenberg_bound(d, ev.moments, two);
        auto report = quadratic_report("F_HL", hl.matrix, ev.fq, d.n);
        EXPECT_TRUE(report.saturated) << report.margin;
        EXPECT_NEAR(d.n.dot(ev.fq * d.n), hl.cross_quadratic(d.n), 1e-8 * scale(hl.matrix));
    }
    {
        auto d = Direction::uniform(3);
        auto ev = evaluate(lambda_sep_multinoon(three, {1, 2, 2}, {{0}, {1, 2}}, d));
        EXPECT_TRUE(matrix_report("F_Lambda", partition_bound(d, {{0}, {1, 2}}, ev.moments, three), ev.fq).saturated);
    }
}

TEST(bounds, report_semantics) {
    RMatrix bound = diag({2, 2});
    auto loose = matrix_report("x", bound, diag({1, 2}));
    EXPECT_TRUE(loose.satisfied);
    EXPECT_FALSE(loose.saturated);
    EXPECT_NEAR(loose.margin, 0.0, 1e-15);
    auto broken = matrix_report("x", bound, diag({3, 1}));
    EXPECT_FALSE(broken.satisfied);
    EXPECT_NEAR(broken.margin, -1.0, 1e-12);
    auto exact = matrix_report("x", bound, bound);
    EXPECT_TRUE(exact.satisfied && exact.saturated);
}

TEST(bounds, sampled_states_respect_class_bounds) {
    auto config = ModeConfig::two_level(2);
    EntanglementSpec spec;
    spec.P = {2, 1};
    spec.partition = {{0, 1}};
    std::mt19937_64 rng(99);
    for (int seed = 0; seed < 100; ++seed) {
        const int n = 2 + seed % 2;
        auto psep = sample_state(config, n, SampleClass::ParticleSeparable, spec, seed);
        auto ev = evaluate(psep);
        EXPECT_TRUE(loewner_leq(ev.fq, shot_noise_bound(ev.moments, config), 1e-8)) << seed;
        Direction d{testutil::random_unit(2, rng)};
        auto reports = check_state_dependent_bounds(psep, build_generators(psep.basis()), d);
        auto *ps = find(reports, "particle_sep");
        ASSERT_NE(ps, nullptr);
        EXPECT_TRUE(ps->satisfied);
        EXPECT_GE(ps->margin, -1e-8 * scale(ps->matrix));
        auto *cs = find(reports, "cauchy_schwarz");
        ASSERT_NE(cs, nullptr);
        EXPECT_TRUE(cs->satisfied);

        auto msep = sample_state(config, n, SampleClass::ModeSeparable, spec, seed);
        auto evm = evaluate(msep);
        EXPECT_TRUE(loewner_leq(evm.fq, mode_separable_bound(evm.moments, config), 1e-8)) << seed;
        auto mreports = check_state_dependent_bounds(msep, build_generators(msep.basis()), d);
        ASSERT_NE(find(mreports, "mode_sep"), nullptr);
        EXPECT_TRUE(find(mreports, "mode_sep")->satisfied);

        std::vector<int> fixed = {n == 2 ? 1 : 2, 1};
        spec.P = {fixed[0], 1};
        auto pprod = sample_state(config, n, SampleClass::PProducible, spec, seed);
        auto evp = evaluate(pprod);
        EXPECT_TRUE(loewner_leq(evp.fq, p_producible_bound(fixed, spec.P, config), 1e-8)) << seed;
        auto preports = check_state_dependent_bounds(pprod, build_generators(pprod.basis()), d);
        for (const auto &r : preports) {
            EXPECT_TRUE(r.satisfied) << r.name << " " << seed;
        }

        auto arbitrary = sample_state(config, n, SampleClass::ArbitraryPure, spec, seed);
        auto eva = evaluate(arbitrary);
        for (int t = 0; t < 20; ++t) {
            Direction u{testutil::random_unit(2, rng)};
            auto hl = heisenberg_bound(u, eva.moments, config);
            EXPECT_LE(u.n.dot(eva.fq * u.n), hl.quadratic(u.n) + 1e-8 * scale(hl.matrix));
        }
    }
}

TEST(bounds, sampled_lambda_separable_respect_partition_bound) {
    auto config = ModeConfig::two_level(3);
    EntanglementSpec spec;
    spec.partition = {{0, 1}, {2}};
    std::mt19937_64 rng(4);
    for (int seed = 0; seed < 30; ++seed) {
        auto state = sample_state(config, 2, SampleClass::LambdaSeparable, spec, seed);
        auto ev = evaluate(state);
        Direction d{testutil::random_unit(3, rng)};
        RMatrix fl = partition_bound(d, spec.partition, ev.moments, config);
        EXPECT_LE(d.n.dot(ev.fq * d.n), d.n.dot(fl * d.n) + 1e-8 * scale(fl)) << seed;
        auto reports = check_state_dependent_bounds(state, build_generators(state.basis()), d);
        ASSERT_NE(find(reports, "lambda_sep"), nullptr);
        for (const auto &r : reports) {
            EXPECT_TRUE(r.satisfied) << r.name << " " << seed;
        }
    }
}

TEST(bounds, particle_product_saturates_particle_sep) {
    auto config = ModeConfig::two_level(2);
    Basis single(config, DistinguishableParticles{1});
    std::mt19937_64 rng(8);
    std::vector<QuantumState> factors;
    for (int i = 0; i < 3; ++i) {
        factors.push_back(QuantumState::pure(single, testutil::haar_vector(4, rng)));
    }
    auto state = QuantumState::mixture({FactorKind::Particles, {{0}, {1}, {2}}, {{1.0, factors}}});
    auto reports = check_state_dependent_bounds(state, build_generators(state.basis()), Direction::uniform(2));
    auto *ps = find(reports, "particle_sep");
    ASSERT_NE(ps, nullptr);
    EXPECT_TRUE(ps->saturated);
}

TEST(bounds, cauchy_schwarz_saturated_by_multinoon) {
    auto config = ModeConfig::two_level(2);
    auto d = dir({2, -1});
    auto state = mepe_multinoon(config, {2, 3}, d);
    auto reports = check_state_dependent_bounds(state, build_generators(state.basis()), d);
    auto *cs = find(reports, "cauchy_schwarz");
    ASSERT_NE(cs, nullptr);
    EXPECT_TRUE(cs->saturated);
    expect_code([&] { check_state_dependent_bounds(state, build_generators(state.basis()), d, true); },
                ErrorCode::NoStructure);
}
