// Copyright 2026 The cmoe Authors
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

#include <cmath>

#include <gtest/gtest.h>

#include "cmoe/kernels.hpp"
#include "oracle/two_mode_oracle.hpp"

using namespace cmoe;
using oracle::Interaction;

namespace {

double max_row_error(const StochasticKernel& k, int n, const std::vector<double>& row) {
    double err = 0.0;
    for (int m = 0; m < static_cast<int>(row.size()) && m <= k.out_cutoff(); ++m) {
        err = std::max(err, std::abs(row[static_cast<std::size_t>(m)] - k(n, m)));
    }
    return err;
}

std::pair<double, double> moments(std::span<const double> p) {
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t m = 0; m < p.size(); ++m) {
        m1 += static_cast<double>(m) * p[m];
        m2 += static_cast<double>(m * m) * p[m];
    }
    return {m1, m2 - m1 * m1};
}

}  // namespace

TEST(kernel_oracle, thinning_matches_bernoulli_enumeration) {
    for (double lambda : {0.0, 0.13, 0.5, 0.77, 1.0}) {
        const auto k = thinning_kernel(lambda, 16, 16);
        for (int n = 0; n <= 16; ++n) {
            EXPECT_LT(max_row_error(k, n, oracle::bernoulli_enumeration_row(n, lambda)), 1e-13) << lambda << " " << n;
        }
    }
}

TEST(kernel_oracle, attenuator_full_space_cutoff_20) {
    for (double lambda : {0.1, 0.5, 0.9}) {
        const oracle::TwoModeUnitary u(Interaction::beamsplitter, lambda, 20);
        const auto k = ql_attenuator_kernel(lambda, 10, 20);
        for (int n = 0; n <= 10; ++n) {
            EXPECT_LT(max_row_error(k, n, u.output_distribution(n, 0, true)), 1e-8) << lambda << " " << n;
        }
    }
}

TEST(kernel_oracle, squeezer_full_space_cutoff_20_low_gain) {
    // truncating the squeezer generator at 20 is only faithful for weak squeezing
    for (double kappa : {1.01, 1.02, 1.05}) {
        const oracle::TwoModeUnitary u(Interaction::squeezer, kappa, 20);
        const auto amp = ql_amplifier_kernel(kappa, 10, 20);
        const auto con = ql_contravariant_kernel(kappa, 10, 20);
        for (int n = 0; n <= 10; ++n) {
            EXPECT_LT(max_row_error(amp, n, u.output_distribution(n, 0, true)), 1e-8) << kappa << " " << n;
            EXPECT_LT(max_row_error(con, n, u.output_distribution(n, 0, false)), 1e-8) << kappa << " " << n;
        }
    }
}

TEST(kernel_oracle, sector_oracle_agrees_with_full_space) {
    const oracle::TwoModeUnitary bs(Interaction::beamsplitter, 0.35, 12);
    const oracle::TwoModeUnitary sq(Interaction::squeezer, 1.01, 20);
    for (int n = 0; n <= 6; ++n) {
        for (int k = 0; k <= 6; ++k) {
            const auto a = bs.output_distribution(n, k, true);
            const auto b = oracle::sector_output(Interaction::beamsplitter, 0.35, n, k, true, 12);
            for (std::size_t m = 0; m < a.size(); ++m) {
                EXPECT_NEAR(a[m], b[m], 1e-12);
            }
            const auto c = sq.output_distribution(n, k, false);
            const auto d = oracle::sector_output(Interaction::squeezer, 1.01, n, k, false, 20);
            for (std::size_t m = 0; m < c.size(); ++m) {
                EXPECT_NEAR(c[m], d[m], 1e-10);
            }
        }
    }
}

TEST(kernel_oracle, squeezer_sector_high_gain) {
    for (double kappa : {1.5, 2.0, 4.0}) {
        const auto amp = ql_amplifier_kernel(kappa, 10, 40);
        const auto con = ql_contravariant_kernel(kappa, 10, 40);
        for (int n = 0; n <= 10; ++n) {
            EXPECT_LT(max_row_error(amp, n, oracle::sector_output(Interaction::squeezer, kappa, n, 0, true, 40)), 1e-12);
            EXPECT_LT(max_row_error(con, n, oracle::sector_output(Interaction::squeezer, kappa, n, 0, false, 40)),
                      1e-12);
        }
    }
}

TEST(kernel_oracle, thermal_environment_kernels) {
    struct Case {
        Family family;
        double param;
        double env;
    };
    for (const Case c : {Case{Family::attenuator, 0.3, 0.5}, Case{Family::attenuator, 0.8, 1.0},
                         Case{Family::amplifier, 1.5, 0.5}, Case{Family::amplifier, 2.0, 0.3},
                         Case{Family::contravariant, 1.5, 0.5}, Case{Family::contravariant, 2.0, 0.3}}) {
        ChannelSpec spec;
        spec.family = c.family;
        spec.lambda = c.param;
        spec.kappa = c.param;
        spec.env_energy = c.env;
        const auto k = build_channel(spec, 10, 160);
        const Interaction it = c.family == Family::attenuator ? Interaction::beamsplitter : Interaction::squeezer;
        const bool system_side = c.family != Family::contravariant;
        for (int n = 0; n <= 10; ++n) {
            const auto row = oracle::thermal_environment_row(it, c.param, n, c.env, system_side, 160);
            EXPECT_LT(max_row_error(k, n, row), 1e-12) << spec.describe() << " n=" << n;
            // output occupation moments of the point-mass input
            const auto [mk, vk] = moments(k.row(n));
            const auto [mo, vo] = moments(row);
            EXPECT_NEAR(mk, spec.output_energy(n), 1e-9);
            EXPECT_NEAR(mo, spec.output_energy(n), 1e-9);
            EXPECT_NEAR(vk, vo, 1e-8 * (1.0 + vo)) << spec.describe() << " n=" << n;
        }
    }
}

TEST(kernel_oracle, thermal_environment_full_space_cutoff_20) {
    // beamsplitter conserves photon number, so n + k <= 20 is exact; env weight above 10 is ~1e-12
    const double env = 0.1;
    const double lambda = 0.4;
    ChannelSpec spec;
    spec.family = Family::attenuator;
    spec.lambda = lambda;
    spec.env_energy = env;
    const auto k = build_channel(spec, 10, 20);
    const oracle::TwoModeUnitary u(Interaction::beamsplitter, lambda, 20);
    for (int n = 0; n <= 10; ++n) {
        EXPECT_LT(max_row_error(k, n, oracle::thermal_environment_row(u, n, env, true)), 1e-8);
    }
}
