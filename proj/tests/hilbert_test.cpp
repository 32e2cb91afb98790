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
#include "qmetro/hilbert.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qmetro/error.hpp"
#include "test_util.hpp"

using namespace qmetro;

namespace {

double choose(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

complex expect(const CMatrix &rho, const RVector &diag) {
    return (rho * diag.cast<complex>().asDiagonal()).trace();
}

}  // namespace

TEST(hilbert, mode_config_validation) {
    EXPECT_THROW(ModeConfig(std::vector<std::vector<double>>{{1.0}}), Error);
    EXPECT_THROW(ModeConfig(std::vector<std::vector<double>>{}), Error);
    EXPECT_THROW(ModeConfig({{1.0, NAN}}), Error);
    EXPECT_TRUE(ModeConfig::two_level(3).balanced());
    ModeConfig skew({{1.0, -0.5}, {0.5, -0.5}});
    EXPECT_FALSE(skew.balanced());
    ModeConfig multi({{1.0, 0.2, -1.0}});
    EXPECT_TRUE(multi.balanced());
    EXPECT_EQ(multi.plus_index(0), 0);
    EXPECT_EQ(multi.minus_index(0), 2);
    EXPECT_DOUBLE_EQ(skew.lambda_max(0), 1.0);
}

TEST(hilbert, basis_dimensions) {
    ModeConfig config({{0.5, -0.5}, {1.0, 0.0, -1.0}});
    for (int n = 1; n <= 4; ++n) {
        Basis b(config, DistinguishableParticles{n});
        EXPECT_EQ(b.dimension(), static_cast<std::size_t>(std::pow(5, n)));
    }
    for (int n1 = 0; n1 <= 3; ++n1) {
        for (int n2 = 0; n2 <= 3; ++n2) {
            Basis b(config, fock_fixed_per_mode({n1, n2}));
            EXPECT_EQ(b.dimension(), static_cast<std::size_t>(choose(n1 + 1, 1) * choose(n2 + 2, 2)));
        }
    }
    for (int n = 0; n <= 4; ++n) {
        Basis b(config, fock_mode_local(1, n));
        double expected = 0;
        for (int m = 0; m <= n; ++m) {
            expected += choose(m + 2, 2);
        }
        EXPECT_EQ(b.dimension(), static_cast<std::size_t>(expected));
    }
}

TEST(hilbert, dimension_cap) {
    auto config = ModeConfig::two_level(3);
    try {
        Basis b(config, DistinguishableParticles{5});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionOverflow);
    }
    Basis big(config, DistinguishableParticles{5}, 10000);
    EXPECT_EQ(big.dimension(), 7776u);
}

TEST(hilbert, fock_ordering) {
    auto config = ModeConfig::two_level(1);
    Basis b(config, fock_fixed_per_mode({2}));
    ASSERT_EQ(b.dimension(), 3u);
    EXPECT_EQ(b.occupation(0)[0], 2);
    EXPECT_EQ(b.occupation(1)[0], 1);
    EXPECT_EQ(b.occupation(2)[0], 0);
    Basis local(config, fock_mode_local(0, 1));
    ASSERT_EQ(local.dimension(), 3u);
    EXPECT_EQ(local.occupation(0)[0] + local.occupation(0)[1], 0);
}

TEST(hilbert, generators_examples) {
    auto config = ModeConfig::two_level(1);
    auto g1 = build_generators(Basis(config, DistinguishableParticles{1}));
    EXPECT_DOUBLE_EQ(g1.diagonal(0)(0), 0.5);
    EXPECT_DOUBLE_EQ(g1.diagonal(0)(1), -0.5);

    auto config2 = ModeConfig::two_level(2);
    Basis fock(config2, fock_fixed_per_mode({2, 2}));
    auto g2 = build_generators(fock);
    // First basis state: mode 1 occupation (2,0), mode 2 occupation (2,0).
    EXPECT_DOUBLE_EQ(g2.diagonal(0)(0), 1.0);
    EXPECT_DOUBLE_EQ(g2.number_diagonal(0)(0), 2.0);
    for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
            CMatrix hk = g2.dense(k);
            CMatrix hl = g2.dense(l);
            EXPECT_LE(max_abs(hk * hl - hl * hk), 1e-10);
        }
    }
}

TEST(hilbert, generators_count_occupations) {
    ModeConfig config({{0.7, -0.2}, {1.0, 0.3, -1.0}});
    Basis b(config, DistinguishableParticles{3});
    auto gens = build_generators(b);
    for (std::size_t i = 0; i < b.dimension(); ++i) {
        double h0 = 0, h1 = 0, n0 = 0;
        for (int p = 0; p < 3; ++p) {
            int level = b.particle_level(i, p);
            int k = config.mode_of_level(level);
            double lambda = config.lambda(k, level - config.level_offset(k));
            (k == 0 ? h0 : h1) += lambda;
            n0 += k == 0;
        }
        EXPECT_NEAR(gens.diagonal(0)(i), h0, 1e-14);
        EXPECT_NEAR(gens.diagonal(1)(i), h1, 1e-14);
        EXPECT_NEAR(gens.number_diagonal(0)(i), n0, 1e-14);
    }
}

TEST(hilbert, state_validation) {
    auto config = ModeConfig::two_level(1);
    Basis b(config, DistinguishableParticles{1});
    EXPECT_THROW(QuantumState::pure(b, CVector::Ones(2)), Error);
    EXPECT_THROW(QuantumState::pure(b, CVector::Ones(3)), Error);
    CMatrix bad = CMatrix::Zero(2, 2);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    EXPECT_THROW(QuantumState::density(b, bad), Error);
    CMatrix ok = 0.5 * CMatrix::Identity(2, 2);
    EXPECT_NO_THROW(QuantumState::density(b, ok));
}

TEST(hilbert, phase_evolve_single_particle) {
    auto config = ModeConfig::two_level(1);
    Basis b(config, DistinguishableParticles{1});
    auto gens = build_generators(b);
    CVector v(2);
    v << 1, 1;
    auto psi = QuantumState::pure(b, v / std::sqrt(2.0));
    RVector theta(1);
    theta << std::numbers::pi;
    auto out = phase_evolve(psi, gens, theta);
    EXPECT_LE(std::abs(out.vector()(0) - std::polar(1 / std::sqrt(2.0), -std::numbers::pi / 2)), 1e-12);
    EXPECT_LE(std::abs(out.vector()(1) - std::polar(1 / std::sqrt(2.0), std::numbers::pi / 2)), 1e-12);
    auto same = phase_evolve(psi, gens, RVector::Zero(1));
    EXPECT_LE(max_abs(same.vector() - psi.vector()), 1e-15);
    EXPECT_THROW(phase_evolve(psi, gens, RVector::Zero(2)), Error);
}

TEST(hilbert, phase_evolve_composes_and_preserves_trace) {
    std::mt19937_64 rng(5);
    auto config = ModeConfig::two_level(2);
    Basis b(config, DistinguishableParticles{2});
    auto gens = build_generators(b);
    for (int trial = 0; trial < 20; ++trial) {
        auto rho = QuantumState::density(b, testutil::random_density(b.dimension(), 3, rng));
        RVector t1 = testutil::random_unit(2, rng);
        RVector t2 = 2.0 * testutil::random_unit(2, rng);
        auto a = phase_evolve(phase_evolve(rho, gens, t1), gens, t2);
        auto c = phase_evolve(rho, gens, t1 + t2);
        EXPECT_LE(max_abs(a.matrix() - c.matrix()), 1e-9);
        EXPECT_NEAR(a.matrix().trace().real(), 1.0, 1e-10);
    }
}

TEST(hilbert, reduce_particle_product_and_bell) {
    std::mt19937_64 rng(9);
    auto config = ModeConfig::two_level(2);
    Basis one(config, DistinguishableParticles{1});
    std::vector<QuantumState> factors;
    for (int i = 0; i < 3; ++i) {
        factors.push_back(QuantumState::pure(one, testutil::haar_vector(4, rng)));
    }
    auto product = compose(FactorKind::Particles, {{0}, {1}, {2}}, factors);
    for (int i = 0; i < 3; ++i) {
        auto reduced = reduce_particle(product, i);
        CMatrix expected = factors[i].vector() * factors[i].vector().adjoint();
        EXPECT_LE(max_abs(reduced.matrix() - expected), 1e-12);
        EXPECT_NEAR((reduced.matrix() * reduced.matrix()).trace().real(), 1.0, 1e-9);
    }

    auto single = ModeConfig::two_level(1);
    Basis pair(single, DistinguishableParticles{2});
    CVector bell = CVector::Zero(4);
    bell(0) = bell(3) = 1 / std::sqrt(2.0);
    auto reduced = reduce_particle(QuantumState::pure(pair, bell), 1);
    EXPECT_LE(max_abs(reduced.matrix() - 0.5 * CMatrix::Identity(2, 2)), 1e-12);

    Basis fock(single, fock_fixed_per_mode({2}));
    CVector v = CVector::Zero(3);
    v(0) = 1;
    try {
        reduce_particle(QuantumState::pure(fock, v), 0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::BasisUnsupported);
    }
}

TEST(hilbert, reduce_particle_structured_linearity) {
    std::mt19937_64 rng(10);
    auto config = ModeConfig::two_level(2);
    Basis one(config, DistinguishableParticles{1});
    StructuredMixture mix{FactorKind::Particles, {{0}, {1}}, {}};
    for (double w : {0.3, 0.7}) {
        mix.terms.push_back({w,
                             {QuantumState::pure(one, testutil::haar_vector(4, rng)),
                              QuantumState::pure(one, testutil::haar_vector(4, rng))}});
    }
    auto state = QuantumState::mixture(mix);
    auto structured = reduce_particle(state, 1);
    auto dense = reduce_particle(QuantumState::density(state.basis(), state.density_matrix()), 1);
    EXPECT_LE(max_abs(structured.matrix() - dense.matrix()), 1e-12);
    EXPECT_NEAR(structured.matrix().trace().real(), 1.0, 1e-10);
}

TEST(hilbert, reduce_mode_structured) {
    auto config = ModeConfig::two_level(2);
    Basis m0(config, fock_fixed_on({0}, {2}));
    Basis m1(config, fock_fixed_on({1}, {1}));
    CVector noon = CVector::Zero(3);
    noon(0) = noon(2) = 1 / std::sqrt(2.0);
    CVector anti = noon;
    anti(2) = -anti(2);
    CVector up = CVector::Zero(2);
    up(0) = 1;
    StructuredMixture mix{FactorKind::Modes, {{0}, {1}}, {}};
    mix.terms.push_back({0.5, {QuantumState::pure(m0, noon), QuantumState::pure(m1, up)}});
    mix.terms.push_back({0.5, {QuantumState::pure(m0, anti), QuantumState::pure(m1, up)}});
    auto state = QuantumState::mixture(mix);
    auto rho0 = reduce_mode_structured(state, 0);
    CMatrix expected = 0.5 * (noon * noon.adjoint() + anti * anti.adjoint());
    EXPECT_LE(max_abs(rho0.matrix() - expected), 1e-12);
    auto rho1 = reduce_mode_structured(state, 1);
    EXPECT_NEAR(rho1.matrix()(0, 0).real(), 1.0, 1e-12);

    auto dense = state.densified();
    try {
        reduce_mode_structured(dense, 0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NoStructure);
    }
}

TEST(hilbert, compose_modes_matches_occupations) {
    ModeConfig config({{0.5, -0.5}, {1.0, 0.0, -1.0}, {0.5, -0.5}});
    Basis a(config, fock_fixed_on({0, 2}, {1, 2}));
    Basis b(config, fock_fixed_on({1}, {2}));
    std::mt19937_64 rng(4);
    auto fa = QuantumState::pure(a, testutil::haar_vector(a.dimension(), rng));
    auto fb = QuantumState::pure(b, testutil::haar_vector(b.dimension(), rng));
    auto joint = compose(FactorKind::Modes, {{0, 2}, {1}}, {fa, fb});
    ASSERT_EQ(joint.basis().dimension(), a.dimension() * b.dimension());
    // Every joint amplitude equals the product of the factor amplitudes with matching occupations.
    const int levels = config.total_levels();
    for (std::size_t ia = 0; ia < a.dimension(); ++ia) {
        for (std::size_t ib = 0; ib < b.dimension(); ++ib) {
            std::vector<int> occ(levels);
            for (int l = 0; l < levels; ++l) {
                occ[l] = a.occupation(ia)[l] + b.occupation(ib)[l];
            }
            std::size_t found = joint.basis().dimension();
            for (std::size_t j = 0; j < joint.basis().dimension(); ++j) {
                auto o = joint.basis().occupation(j);
                if (std::equal(o.begin(), o.end(), occ.begin())) {
                    found = j;
                }
            }
            ASSERT_LT(found, joint.basis().dimension());
            EXPECT_LE(std::abs(joint.vector()(found) - fa.vector()(ia) * fb.vector()(ib)), 1e-14);
        }
    }
}

TEST(hilbert, symmetrize_embed_examples) {
    auto config = ModeConfig::two_level(1);
    Basis f1(config, fock_fixed_per_mode({1}));
    CVector up = CVector::Zero(2);
    up(0) = 1;
    auto single = symmetrize_embed(QuantumState::pure(f1, up));
    EXPECT_TRUE(single.basis().is_distinguishable());
    EXPECT_LE(std::abs(single.vector()(0) - 1.0), 1e-14);

    Basis f2(config, fock_fixed_per_mode({2}));
    CVector noon = CVector::Zero(3);
    noon(0) = noon(2) = 1 / std::sqrt(2.0);
    auto embedded = symmetrize_embed(QuantumState::pure(f2, noon));
    CVector expected = CVector::Zero(4);
    expected(0) = expected(3) = 1 / std::sqrt(2.0);
    EXPECT_LE(max_abs(embedded.vector() - expected), 1e-14);
}

TEST(hilbert, symmetrize_embed_moments_agree) {
    std::mt19937_64 rng(12);
    ModeConfig config({{0.5, -0.5}, {1.0, 0.25, -1.0}});
    for (auto particles : std::vector<std::vector<int>>{{1, 1}, {2, 1}, {1, 2}, {2, 2}}) {
        Basis fock(config, fock_fixed_per_mode(particles));
        auto gf = build_generators(fock);
        for (int trial = 0; trial < 5; ++trial) {
            auto state = trial % 2 == 0
                             ? QuantumState::pure(fock, testutil::haar_vector(fock.dimension(), rng))
                             : QuantumState::density(fock, testutil::random_density(fock.dimension(), 2, rng));
            auto embedded = symmetrize_embed(state);
            auto gd = build_generators(embedded.basis());
            CMatrix rf = state.density_matrix();
            CMatrix rd = embedded.density_matrix();
            EXPECT_NEAR(rd.trace().real(), 1.0, 1e-10);
            for (int k = 0; k < 2; ++k) {
                EXPECT_NEAR(expect(rf, gf.diagonal(k)).real(), expect(rd, gd.diagonal(k)).real(), 1e-9);
                EXPECT_NEAR(expect(rf, gf.number_diagonal(k)).real(), expect(rd, gd.number_diagonal(k)).real(),
                            1e-9);
                for (int l = 0; l < 2; ++l) {
                    RVector pf = gf.diagonal(k).cwiseProduct(gf.diagonal(l));
                    RVector pd = gd.diagonal(k).cwiseProduct(gd.diagonal(l));
                    EXPECT_NEAR(expect(rf, pf).real(), expect(rd, pd).real(), 1e-9);
                }
            }
        }
    }
}
