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

#include <gtest/gtest.h>

#include "qmetro/error.hpp"
#include "test_util.hpp"

using namespace qmetro;

TEST(linalg, eigh_diagonal) {
    CMatrix a = CMatrix::Zero(3, 3);
    a(0, 0) = 1;
    a(1, 1) = 2;
    a(2, 2) = 3;
    auto d = eigh(a);
    EXPECT_NEAR(d.values(0), 1, 1e-12);
    EXPECT_NEAR(d.values(1), 2, 1e-12);
    EXPECT_NEAR(d.values(2), 3, 1e-12);
    EXPECT_LE(max_abs(d.vectors.cwiseAbs() - RMatrix::Identity(3, 3)), 1e-12);
}

TEST(linalg, eigh_pauli_x) {
    CMatrix a(2, 2);
    a << 0, 1, 1, 0;
    auto d = eigh(a);
    EXPECT_NEAR(d.values(0), -1, 1e-12);
    EXPECT_NEAR(d.values(1), 1, 1e-12);
}

TEST(linalg, eigh_random_reconstruction) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        CMatrix a = testutil::random_hermitian(20, rng);
        auto d = eigh(a);
        double scale = 1 + max_abs(a);
        EXPECT_LE(max_abs(a * d.vectors - d.vectors * d.values.cast<complex>().asDiagonal()), 1e-9 * scale);
        EXPECT_LE(max_abs(d.vectors.adjoint() * d.vectors - CMatrix::Identity(20, 20)), 1e-9);
        for (int i = 1; i < 20; ++i) {
            EXPECT_LE(d.values(i - 1), d.values(i));
        }
    }
}

TEST(linalg, eigh_rejects_non_hermitian) {
    CMatrix a(2, 2);
    a << 0, 1, 0, 0;
    try {
        eigh(a);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NonHermitianInput);
    }
    CMatrix b(2, 3);
    EXPECT_THROW(eigh(b), Error);
}

TEST(linalg, loewner_examples) {
    RMatrix a = RMatrix::Identity(2, 2);
    RMatrix b = 2 * RMatrix::Identity(2, 2);
    EXPECT_TRUE(loewner_leq(a, b));
    EXPECT_FALSE(loewner_leq(b, a));
    EXPECT_TRUE(loewner_leq(a, a));

    RMatrix f(2, 2);
    f << 4, 4, 4, 4;
    RMatrix d = 4 * RMatrix::Identity(2, 2);
    EXPECT_FALSE(loewner_leq(f, d));
    EXPECT_NEAR(loewner_margin(f, d), -4, 1e-12);

    RMatrix c(3, 3);
    try {
        loewner_leq(a, c);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(linalg, loewner_reflexive_transitive) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        RMatrix a = testutil::random_spd(4, rng);
        RMatrix b = a + testutil::random_spd(4, rng);
        RMatrix c = b + testutil::random_spd(4, rng);
        EXPECT_TRUE(loewner_leq(a, a));
        EXPECT_TRUE(loewner_leq(a, b));
        EXPECT_TRUE(loewner_leq(b, c));
        EXPECT_TRUE(loewner_leq(a, c));
    }
}

TEST(linalg, count_positive) {
    EXPECT_EQ(count_positive_eigenvalues(2 * RMatrix::Identity(2, 2)), 2);
    RMatrix a(2, 2);
    a << 2, 4, 4, 2;
    EXPECT_EQ(count_positive_eigenvalues(a), 1);
    EXPECT_EQ(count_positive_eigenvalues(RMatrix::Zero(3, 3)), 0);
}

TEST(linalg, invert_spd_examples) {
    RMatrix a = RMatrix::Zero(2, 2);
    a(0, 0) = 2;
    a(1, 1) = 4;
    auto inv = invert_spd(a);
    EXPECT_NEAR(inv.inverse(0, 0), 0.5, 1e-14);
    EXPECT_NEAR(inv.inverse(1, 1), 0.25, 1e-14);
    EXPECT_NEAR(inv.inverse(0, 1), 0.0, 1e-14);
    EXPECT_NEAR(inv.condition, 2.0, 1e-12);

    RMatrix hl(2, 2);
    hl << 4, 4, 4, 4;
    try {
        invert_spd(hl);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::SingularMatrix);
    }
}

TEST(linalg, invert_spd_random) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        RMatrix a = testutil::random_spd(5, rng);
        RMatrix inv = invert_spd(a).inverse;
        EXPECT_LE(max_abs(a * inv - RMatrix::Identity(5, 5)), 1e-8);
        EXPECT_LE(max_abs(invert_spd(inv).inverse - a), 1e-7 * (1 + max_abs(a)));
    }
}
