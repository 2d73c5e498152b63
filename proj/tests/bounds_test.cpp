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

#include "cmoe/bounds.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "cmoe/errors.hpp"

using namespace cmoe;

namespace {

ChannelSpec make(Family f, double p, double e, int n = 1) {
    ChannelSpec s;
    s.family = f;
    if (f == Family::thinning || f == Family::attenuator) {
        s.lambda = p;
    } else {
        s.kappa = p;
    }
    s.env_energy = e;
    s.n_modes = n;
    return s;
}

std::vector<ChannelSpec> family_grid() {
    std::vector<ChannelSpec> out;
    for (double p : {0.1, 0.5, 0.95}) {
        out.push_back(make(Family::thinning, p, 0.0));
        for (double e : {0.0, 0.4, 2.0}) {
            out.push_back(make(Family::attenuator, p, e));
            out.push_back(make(Family::amplifier, 1.0 + 2.0 * p, e));
            out.push_back(make(Family::contravariant, 1.0 + 2.0 * p, e));
            out.push_back(make(Family::additive_noise, 1.0, e + p));
        }
    }
    return out;
}

}  // namespace

TEST(bounds, lemma_params_satisfy_lemma) {
    for (const auto& spec : family_grid()) {
        EXPECT_TRUE(lemma_params(spec).satisfies_lemma()) << spec.describe();
    }
}

TEST(bounds, single_copy_examples) {
    for (double s : {0.0, 0.5, 2.0}) {
        EXPECT_NEAR(single_copy_bound(make(Family::thinning, 1.0, 0.0), s), s, 1e-12);
    }
    EXPECT_NEAR(single_copy_bound(make(Family::attenuator, 0.3, 0.7), g(1.2)), g(0.3 * 1.2 + 0.7 * 0.7), 1e-12);
    EXPECT_NEAR(single_copy_bound(make(Family::amplifier, 2.5, 0.0), 0.0), g(1.5), 1e-15);
    EXPECT_NEAR(single_copy_bound(WehrlMeasure{}, g(1.0)), 1.0 + std::log(2.0), 1e-12);
    EXPECT_THROW(single_copy_bound(make(Family::thinning, 1.0, 0.0), -1.0), DomainError);
    EXPECT_THROW(single_copy_bound(make(Family::thinning, 2.0, 0.0), 1.0), DomainError);
}

TEST(bounds, thermal_output_entropy_law) {
    for (const auto& spec : family_grid()) {
        for (double ein : {0.0, 0.3, 1.0, 4.0}) {
            EXPECT_NEAR(single_copy_bound(spec, g(ein)), g(spec.output_energy(ein)), 1e-10)
                << spec.describe() << " " << ein;
        }
    }
}

TEST(bounds, lifted_examples) {
    const auto one = make(Family::thinning, 0.4, 0.0);
    const auto two = make(Family::thinning, 0.4, 0.0, 2);
    for (double s : {0.0, 0.7, 3.0}) {
        EXPECT_EQ(lifted_bound(one, s), single_copy_bound(one, s));
    }
    EXPECT_NEAR(lifted_bound(two, 2 * g(1.5)), 2 * g(0.6), 1e-12);
    EXPECT_NEAR(lifted_bound(WehrlMeasure{2}, 2 * g(1.0)), 2 * (1 + std::log(2.0)), 1e-12);
}

TEST(bounds, lifted_is_monotone_and_below_splits) {
    for (const auto& base : family_grid()) {
        ChannelSpec spec = base;
        spec.n_modes = 2;
        double prev = -1.0;
        for (double s = 0.0; s < 6.0; s += 0.25) {
            const double lifted = lifted_bound(spec, s);
            EXPECT_GT(lifted, prev - 1e-15);
            prev = lifted;
            for (double frac : {0.0, 0.1, 0.3}) {
                const double split = single_copy_bound(base, frac * s) + single_copy_bound(base, (1 - frac) * s);
                EXPECT_LE(lifted, split + 1e-10) << spec.describe() << " s=" << s;
            }
        }
    }
}

TEST(bounds, verify_thinning_examples) {
    const auto r = verify_thinning(geometric(1.3, 120), 0.6);
    EXPECT_TRUE(r.valid);
    EXPECT_LT(std::abs(r.margin), 1e-6);
    const auto pm = verify_thinning(point_mass(7, 10), 0.5);
    EXPECT_EQ(pm.bound, 0.0);
    EXPECT_GE(pm.margin, 0.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto rr = verify_thinning(random_dist(2, 10, seed), 0.35);
        EXPECT_TRUE(rr.valid);
        EXPECT_GE(rr.margin, -1e-9);
        EXPECT_FALSE(rr.violation());
    }
}

TEST(bounds, verify_channel_examples) {
    auto att = make(Family::attenuator, 0.7, 0.3, 2);
    const auto eq = verify_channel(geometric_product(0.8, 50, 2), att);
    EXPECT_TRUE(eq.valid) << eq.flag;
    EXPECT_LT(std::abs(eq.margin), 1e-6);

    const auto amp = make(Family::amplifier, 1.5, 0.2, 2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = verify_channel(random_dist(2, 12, seed), amp);
        EXPECT_TRUE(r.valid) << r.flag;
        EXPECT_GE(r.margin, -1e-9);
    }
    const int fock[2] = {3, 5};
    const auto con = make(Family::contravariant, 1.8, 0.0, 2);
    const auto r = verify_channel(point_mass(fock, 12), con);
    EXPECT_NEAR(r.bound, 2 * g(0.8), 1e-12);
    EXPECT_GE(r.output_entropy, r.bound);
    EXPECT_THROW(verify_channel(random_dist(1, 5, 1), amp), DomainError);
}

TEST(bounds, heavy_tails_are_flagged_not_counted) {
    const auto r = verify_thinning(geometric(3.0, 10), 0.5);
    EXPECT_FALSE(r.valid);
    EXPECT_FALSE(r.flag.empty());
    EXPECT_FALSE(r.violation());
    Tolerances loose;
    loose.max_tail = 1.0;
    EXPECT_TRUE(verify_thinning(geometric(3.0, 10), 0.5, loose).valid);
}

TEST(bounds, violation_uses_tolerance) {
    VerificationReport r;
    r.margin = -2e-9;
    r.tolerance = 1e-9;
    EXPECT_TRUE(r.violation());
    r.valid = false;
    EXPECT_FALSE(r.violation());
}

TEST(bounds, verify_wehrl_examples) {
    const auto th = verify_wehrl(DensityMatrix::thermal(1.0, 50));
    EXPECT_TRUE(th.valid);
    EXPECT_LT(std::abs(th.margin), 1e-6);
    const auto pure = verify_wehrl(DensityMatrix::random_pure(8, 5));
    EXPECT_NEAR(pure.input_entropy, 0.0, 1e-10);
    EXPECT_GE(pure.output_entropy, 1.0 - 1e-8);
    const auto two = verify_wehrl(geometric_product(0.5, 40, 2));
    EXPECT_TRUE(two.valid) << two.flag;
    EXPECT_LT(std::abs(two.margin), 1e-6);
    EXPECT_EQ(two.n_modes, 2);
}

TEST(bounds, input_families) {
    for (InputFamily f : {InputFamily::random, InputFamily::perturbed_geometric, InputFamily::geometric,
                          InputFamily::point_mass}) {
        EXPECT_EQ(parse_input_family(to_string(f)), f);
        const auto d = make_input(f, 2, 6, 3, 1.0, 0.5);
        EXPECT_EQ(d.n_modes(), 2);
        EXPECT_EQ(d.cutoff(), 6);
    }
    EXPECT_THROW(parse_input_family("gaussian"), DomainError);
}

TEST(bounds, sweep_order_and_determinism) {
    SweepConfig cfg;
    EXPECT_TRUE(sweep(cfg).empty());
    cfg.specs = {make(Family::thinning, 0.5, 0.0), WehrlMeasure{1}};
    cfg.cutoff = 12;
    cfg.seeds = {4, 5, 6};
    const auto a = sweep(cfg);
    const auto b = sweep(cfg);
    ASSERT_EQ(a.size(), 6u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].instance, b[i].instance);
        EXPECT_EQ(a[i].margin, b[i].margin);
    }
    EXPECT_EQ(a[0].family, "thinning");
    EXPECT_EQ(a[3].family, "wehrl");
    EXPECT_NE(a[1].instance.find("seed=5"), std::string::npos);
    const auto s = summarize(a);
    EXPECT_EQ(s.total, 6u);
    EXPECT_EQ(s.violations, 0u);
    EXPECT_EQ(s.valid + s.flagged, 6u);
}

TEST(bounds, sweep_flags_failures_per_instance) {
    SweepConfig cfg;
    cfg.specs = {WehrlMeasure{1}};
    cfg.input = InputFamily::geometric;
    cfg.input_energy = 4.0;
    cfg.cutoff = 5;  // thermal state cannot be truncated here
    cfg.seeds = {0, 1};
    const auto reports = sweep(cfg);
    ASSERT_EQ(reports.size(), 2u);
    for (const auto& r : reports) {
        EXPECT_FALSE(r.valid);
        EXPECT_FALSE(r.flag.empty());
    }
    EXPECT_EQ(summarize(reports).flagged, 2u);
}

TEST(bounds, hundred_thinning_instances) {
    SweepConfig cfg;
    cfg.specs = {make(Family::thinning, 0.5, 0.0)};
    cfg.cutoff = 40;
    for (std::uint64_t s = 0; s < 100; ++s) {
        cfg.seeds.push_back(s);
    }
    const auto summary = summarize(sweep(cfg));
    EXPECT_EQ(summary.valid, 100u);
    EXPECT_GE(summary.min_margin, -1e-9);
}
