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

#include "cmoe/kernels.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "cmoe/dist.hpp"
#include "cmoe/errors.hpp"

using namespace cmoe;

namespace {

int cutoff_for_tail(double mean, double tail) {
    if (mean == 0.0) {
        return 0;
    }
    return static_cast<int>(std::ceil(std::log(tail) / std::log(mean / (mean + 1.0))));
}

ChannelSpec make(Family f, double p, double e) {
    ChannelSpec s;
    s.family = f;
    if (f == Family::thinning || f == Family::attenuator) {
        s.lambda = p;
    } else {
        s.kappa = p;
    }
    s.env_energy = e;
    return s;
}

double output_mean(const TruncatedDist& d) {
    return mean_energy(d).total;
}

void expect_rows_stochastic(const StochasticKernel& k) {
    for (int n = 0; n < k.rows(); ++n) {
        double sum = 0.0;
        for (double p : k.row(n)) {
            ASSERT_GE(p, 0.0);
            sum += p;
        }
        EXPECT_GE(k.leak(n), 0.0);
        EXPECT_NEAR(sum + k.leak(n), 1.0, 1e-12) << n;
    }
}

}  // namespace

TEST(kernels, family_names) {
    for (Family f : {Family::thinning, Family::attenuator, Family::amplifier, Family::additive_noise,
                     Family::contravariant}) {
        EXPECT_EQ(parse_family(to_string(f)), f);
    }
    EXPECT_THROW(parse_family("beamsplitter"), DomainError);
}

TEST(kernels, spec_validation) {
    EXPECT_THROW(make(Family::thinning, 1.2, 0.0).validate(), DomainError);
    EXPECT_THROW(make(Family::thinning, 0.5, 0.1).validate(), DomainError);
    EXPECT_THROW(make(Family::attenuator, -0.1, 0.0).validate(), DomainError);
    EXPECT_THROW(make(Family::amplifier, 0.9, 0.0).validate(), DomainError);
    EXPECT_THROW(make(Family::contravariant, 2.0, -1.0).validate(), DomainError);
    ChannelSpec s = make(Family::additive_noise, 1.0, 0.5);
    s.n_modes = 0;
    EXPECT_THROW(s.validate(), DomainError);
    EXPECT_NO_THROW(make(Family::contravariant, 1.0, 0.0).validate());
    EXPECT_EQ(make(Family::attenuator, 0.5, 0.2).describe(), "attenuator(lambda=0.5,E=0.2,n=1)");
}

TEST(kernels, thinning_edges) {
    const auto id = thinning_kernel(1.0, 12, 12);
    const auto zero = thinning_kernel(0.0, 12, 12);
    for (int n = 0; n <= 12; ++n) {
        for (int m = 0; m <= 12; ++m) {
            EXPECT_EQ(id(n, m), n == m ? 1.0 : 0.0);
            EXPECT_EQ(zero(n, m), m == 0 ? 1.0 : 0.0);
        }
        EXPECT_EQ(id.leak(n), 0.0);
    }
    EXPECT_THROW(thinning_kernel(1.5, 3, 3), DomainError);
    EXPECT_THROW(thinning_kernel(0.5, -1, 3), DomainError);
}

TEST(kernels, thinning_large_occupations_no_overflow) {
    const auto k = thinning_kernel(0.5, 400, 400);
    expect_rows_stochastic(k);
    // C(400,200) 2^-400
    EXPECT_NEAR(k(400, 200), 0.03986930196379293, 1e-13);
    EXPECT_EQ(k.max_leak(), 0.0);
}

TEST(kernels, thinning_truncated_output_leaks) {
    const auto k = thinning_kernel(0.9, 10, 5);
    expect_rows_stochastic(k);
    EXPECT_EQ(k.leak(5), 0.0);
    EXPECT_GT(k.leak(10), 0.0);
}

TEST(kernels, attenuator_equals_thinning) {
    const auto a = ql_attenuator_kernel(0.37, 20, 20);
    const auto t = thinning_kernel(0.37, 20, 20);
    for (std::size_t i = 0; i < a.matrix().size(); ++i) {
        EXPECT_EQ(a.matrix()[i], t.matrix()[i]);
    }
}

TEST(kernels, amplifier_edges) {
    const auto id = ql_amplifier_kernel(1.0, 8, 8);
    for (int n = 0; n <= 8; ++n) {
        for (int m = 0; m <= 8; ++m) {
            EXPECT_EQ(id(n, m), n == m ? 1.0 : 0.0);
        }
    }
    const double kappa = 2.5;
    const auto k = ql_amplifier_kernel(kappa, 6, 200);
    expect_rows_stochastic(k);
    const auto vac = geometric(kappa - 1.0, 200);
    for (int m = 0; m <= 200; ++m) {
        EXPECT_NEAR(k(0, m), vac[static_cast<std::size_t>(m)], 1e-15);
    }
    for (int n = 1; n <= 6; ++n) {
        for (int m = 0; m < n; ++m) {
            EXPECT_EQ(k(n, m), 0.0);
        }
    }
    EXPECT_THROW(ql_amplifier_kernel(0.5, 3, 3), DomainError);
}

TEST(kernels, contravariant_edges) {
    const auto unit = ql_contravariant_kernel(1.0, 8, 8);
    for (int n = 0; n <= 8; ++n) {
        for (int m = 0; m <= 8; ++m) {
            EXPECT_EQ(unit(n, m), m == 0 ? 1.0 : 0.0);
        }
    }
    const double kappa = 1.8;
    const auto k = ql_contravariant_kernel(kappa, 6, 200);
    expect_rows_stochastic(k);
    const auto vac = geometric(kappa - 1.0, 200);
    for (int m = 0; m <= 200; ++m) {
        EXPECT_NEAR(k(0, m), vac[static_cast<std::size_t>(m)], 1e-15);
    }
}

TEST(kernels, default_output_cutoff_contains_leak) {
    for (const auto& s : {make(Family::amplifier, 3.0, 0.5), make(Family::contravariant, 2.0, 1.0),
                          make(Family::additive_noise, 1.0, 2.0), make(Family::attenuator, 0.4, 3.0)}) {
        for (int n : {0, 5, 40}) {
            const auto k = build_channel(s, n);
            EXPECT_LT(k.max_leak(), 1e-12) << s.describe() << " " << n;
            expect_rows_stochastic(k);
        }
    }
    EXPECT_EQ(default_output_cutoff(make(Family::thinning, 0.3, 0.0), 17), 17);
}

TEST(kernels, decomposition_parameters) {
    auto d = decompose(make(Family::attenuator, 0.5, 2.0));
    EXPECT_DOUBLE_EQ(d.gain, 2.0);
    EXPECT_DOUBLE_EQ(d.attenuation, 0.25);
    d = decompose(make(Family::amplifier, 2.0, 1.0));
    EXPECT_DOUBLE_EQ(d.gain, 3.0);
    EXPECT_DOUBLE_EQ(d.attenuation, 2.0 / 3.0);
    d = decompose(make(Family::additive_noise, 1.0, 0.5));
    EXPECT_DOUBLE_EQ(d.gain, 1.5);
    EXPECT_DOUBLE_EQ(d.attenuation, 1.0 / 1.5);
    d = decompose(make(Family::contravariant, 2.0, 0.5));
    EXPECT_TRUE(d.contravariant);
    EXPECT_DOUBLE_EQ(d.gain, 3.0);
    EXPECT_DOUBLE_EQ(d.attenuation, 0.5);
    d = decompose(make(Family::contravariant, 1.0, 0.0));
    EXPECT_DOUBLE_EQ(d.gain, 1.0);
    EXPECT_DOUBLE_EQ(d.attenuation, 1.0);
}

TEST(kernels, build_channel_is_composition) {
    const auto spec = make(Family::attenuator, 0.6, 0.7);
    const auto parts = decompose(spec);
    const auto built = build_channel(spec, 10, 60);
    const auto manual = compose(ql_attenuator_kernel(parts.attenuation, 10, 10), ql_amplifier_kernel(parts.gain, 10, 60));
    for (std::size_t i = 0; i < built.matrix().size(); ++i) {
        EXPECT_EQ(built.matrix()[i], manual.matrix()[i]);
    }
}

TEST(kernels, thermal_action_laws) {
    for (Family f : {Family::thinning, Family::attenuator, Family::amplifier, Family::additive_noise,
                     Family::contravariant}) {
        for (double p : {0.2, 0.5, 0.9}) {
            for (double e : {0.0, 0.3, 1.5}) {
                if (f == Family::thinning && e > 0.0) {
                    continue;
                }
                const double param = (f == Family::amplifier || f == Family::contravariant) ? 1.0 + 3.0 * p : p;
                const auto spec = make(f, param, e);
                for (double ein : {0.0, 0.5, 2.0}) {
                    const auto in = geometric(ein, cutoff_for_tail(ein, 1e-11));
                    const auto out = apply_multimode(spec, in);
                    const double law = spec.output_energy(ein);
                    const auto expect = geometric(law, std::max(out.cutoff(), cutoff_for_tail(law, 1e-11)));
                    EXPECT_LT(total_variation(out, expect), 1e-8) << spec.describe() << " E'=" << ein;
                }
            }
        }
    }
}

TEST(kernels, mean_energy_law_on_random_inputs) {
    for (const auto& spec : {make(Family::attenuator, 0.3, 0.8), make(Family::amplifier, 1.7, 0.4),
                             make(Family::additive_noise, 1.0, 1.2), make(Family::contravariant, 2.2, 0.3),
                             make(Family::thinning, 0.45, 0.0)}) {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto in = random_dist(1, 20, seed);
            const auto out = apply(build_channel(spec, 20), in);
            EXPECT_LT(out.tail_mass(), 1e-12);
            EXPECT_NEAR(output_mean(out), spec.output_energy(output_mean(in)), 1e-8) << spec.describe();
        }
    }
}

TEST(kernels, thinning_semigroup) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto d = random_dist(1, 30, seed);
        const auto half = thinning_kernel(0.5, 30, 30);
        const auto twice = apply(half, apply(half, d));
        const auto once = apply(thinning_kernel(0.25, 30, 30), d);
        EXPECT_LT(total_variation(twice, once), 1e-14);
    }
    const auto composed = compose(thinning_kernel(0.7, 25, 25), thinning_kernel(0.4, 25, 25));
    const auto direct = thinning_kernel(0.28, 25, 25);
    for (std::size_t i = 0; i < direct.matrix().size(); ++i) {
        EXPECT_NEAR(composed.matrix()[i], direct.matrix()[i], 1e-14);
    }
}

TEST(kernels, compose_identity_and_leak) {
    const auto k = ql_amplifier_kernel(2.0, 10, 30);
    const auto c = compose(StochasticKernel::identity(10), k);
    for (std::size_t i = 0; i < k.matrix().size(); ++i) {
        EXPECT_EQ(c.matrix()[i], k.matrix()[i]);
    }
    // leaks from both stages accumulate
    const auto two = compose(ql_amplifier_kernel(2.0, 10, 15), ql_amplifier_kernel(2.0, 15, 20));
    expect_rows_stochastic(two);
    EXPECT_GT(two.max_leak(), 0.0);
    EXPECT_THROW(compose(k, k), DomainError);
}

TEST(kernels, kernel_constructor_validation) {
    EXPECT_THROW(StochasticKernel(1, 1, {0.5, 0.5, 0.5}), DomainError);
    EXPECT_THROW(StochasticKernel(0, 1, {-0.1, 1.1}), DomainError);
    EXPECT_THROW(StochasticKernel(0, 1, {0.5, 0.5}, {0.2}), DomainError);
    const StochasticKernel k(0, 1, {0.25, 0.5});
    EXPECT_DOUBLE_EQ(k.leak(0), 0.25);
}

TEST(kernels, apply_identity_and_tail) {
    const auto d = random_dist(1, 12, 3);
    const auto same = apply(StochasticKernel::identity(12), d);
    for (std::size_t i = 0; i < d.size(); ++i) {
        EXPECT_EQ(same[i], d[i]);
    }
    const auto g = geometric(1.0, 10);
    const auto out = apply(thinning_kernel(1.0, 10, 4), g);
    double sum = std::accumulate(out.probs().begin(), out.probs().end(), 0.0);
    EXPECT_NEAR(sum + out.tail_mass(), 1.0, 1e-14);
    EXPECT_NEAR(out.tail_mass(), std::pow(0.5, 5), 1e-14);
    EXPECT_THROW(apply(thinning_kernel(0.5, 5, 5), d), DomainError);
    EXPECT_THROW(apply(thinning_kernel(0.5, 12, 12), random_dist(2, 4, 1)), DomainError);
}

TEST(kernels, multimode_product_factorizes) {
    const auto spec = make(Family::amplifier, 1.5, 0.2);
    const auto a = random_dist(1, 6, 1);
    const auto b = random_dist(1, 6, 2);
    ChannelSpec two = spec;
    two.n_modes = 2;
    const auto joint = apply_multimode(two, tensor(a, b));
    const auto k = build_channel(spec, 6);
    const auto expect = tensor(apply(k, a), apply(k, b));
    ASSERT_EQ(joint.size(), expect.size());
    for (std::size_t i = 0; i < joint.size(); ++i) {
        EXPECT_NEAR(joint[i], expect[i], 1e-15);
    }
    EXPECT_NEAR(joint.tail_mass(), expect.tail_mass(), 1e-15);
}

TEST(kernels, multimode_marginals_commute_with_channel) {
    const auto spec1 = make(Family::contravariant, 1.4, 0.1);
    ChannelSpec spec2 = spec1;
    spec2.n_modes = 2;
    const auto d = random_dist(2, 15, 9);
    const auto out = apply_multimode(spec2, d);
    const auto k = build_channel(spec1, 15);
    for (int mode = 0; mode < 2; ++mode) {
        const auto lhs = marginal(out, mode);
        const auto rhs = apply(k, marginal(d, mode));
        EXPECT_LT(total_variation(lhs, rhs), 1e-13);
    }
}

TEST(kernels, multimode_thermal_attenuator) {
    ChannelSpec spec = make(Family::attenuator, 0.6, 0.5);
    spec.n_modes = 2;
    const auto out = apply_multimode(spec, geometric_product(1.0, 40, 2));
    const double law = 0.6 * 1.0 + 0.4 * 0.5;
    EXPECT_LT(total_variation(out, geometric_product(law, out.cutoff(), 2)), 1e-8);
    EXPECT_THROW(apply_multimode(make(Family::attenuator, 0.6, 0.5), geometric_product(1.0, 4, 2)), DomainError);
}

TEST(kernels, csv_export) {
    const auto csv = kernel_to_csv(thinning_kernel(0.5, 1, 1), "t");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "# cmoe-kernel-csv v1 t");
    std::getline(in, line);
    EXPECT_EQ(line, "n,p0,p1,leak");
    std::getline(in, line);
    EXPECT_EQ(line, "0,1,0,0");
    std::getline(in, line);
    EXPECT_EQ(line, "1,0.5,0.5,0");
}
