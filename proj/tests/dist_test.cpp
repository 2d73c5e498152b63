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

#include "cmoe/dist.hpp"

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "cmoe/errors.hpp"
#include "cmoe/specfun.hpp"

using namespace cmoe;

namespace {

double total(const TruncatedDist& d) {
    return std::accumulate(d.probs().begin(), d.probs().end(), 0.0) + d.tail_mass();
}

}  // namespace

TEST(dist, construction_validates) {
    EXPECT_THROW(TruncatedDist({0.5, 0.6}, 1, 1, 0.0), DomainError);
    EXPECT_THROW(TruncatedDist({0.5, -0.1}, 1, 1, 0.6), DomainError);
    EXPECT_THROW(TruncatedDist({0.5, 0.5}, 1, 2, 0.0), DomainError);
    EXPECT_THROW(TruncatedDist({1.0}, 1, 0, -1e-3), DomainError);
    EXPECT_NO_THROW(TruncatedDist({0.5, 0.25}, 1, 1, 0.25));
    const auto d = TruncatedDist::from_probs({0.5, 0.25}, 1, 1);
    EXPECT_DOUBLE_EQ(d.tail_mass(), 0.25);
}

TEST(dist, dense_budget) {
    EXPECT_EQ(dense_size(3, 63), std::size_t{1} << 18);
    EXPECT_EQ(dense_size(2, 2047), std::size_t{1} << 22);
    EXPECT_THROW(dense_size(2, 2048), ResourceError);
    EXPECT_THROW(dense_size(40, 1), ResourceError);
    EXPECT_THROW(dense_size(0, 3), DomainError);
    EXPECT_THROW(uniform(8, 15), ResourceError);
}

TEST(dist, geometric_examples) {
    const auto zero = geometric(0.0, 5);
    EXPECT_EQ(zero[0], 1.0);
    EXPECT_EQ(zero.tail_mass(), 0.0);
    const auto g1 = geometric(1.0, 3);
    EXPECT_DOUBLE_EQ(g1[0], 0.5);
    EXPECT_DOUBLE_EQ(g1[1], 0.25);
    EXPECT_DOUBLE_EQ(g1[2], 0.125);
    EXPECT_DOUBLE_EQ(g1[3], 0.0625);
    EXPECT_DOUBLE_EQ(g1.tail_mass(), 0.0625);
    EXPECT_NEAR(mean_energy(geometric(2.5, 200)).total, 2.5, 1e-8);
    EXPECT_THROW(geometric(-1.0, 3), DomainError);
}

TEST(dist, entropy_examples) {
    EXPECT_EQ(entropy(point_mass(3, 5)), 0.0);
    EXPECT_NEAR(entropy(uniform(1, 6)), std::log(7.0), 1e-14);
    EXPECT_NEAR(entropy(uniform(2, 6)), 2 * std::log(7.0), 1e-13);
    EXPECT_NEAR(entropy(geometric(2.0, 120)), g(2.0), 1e-8);
}

TEST(dist, entropy_refuses_heavy_tails) {
    const auto d = geometric(1.0, 10);
    EXPECT_THROW(entropy(d), TruncationError);
    EXPECT_NO_THROW(entropy(d, 1e-3));
    const double t = d.tail_mass();
    EXPECT_NEAR(tail_entropy_bound(d), -t * std::log(t) + t * std::log(11.0), 1e-15);
    EXPECT_EQ(tail_entropy_bound(uniform(1, 3)), 0.0);
}

TEST(dist, geometric_entropy_converges_with_cutoff) {
    const double e = 1.5;
    double prev = std::numeric_limits<double>::infinity();
    for (int cutoff = 10; cutoff <= 150; cutoff += 10) {
        const double err = std::abs(entropy(geometric(e, cutoff), 1.0) - g(e));
        // strictly decreasing until roundoff takes over
        if (prev > 1e-14) {
            EXPECT_LT(err, prev) << cutoff;
        }
        prev = err;
    }
    EXPECT_LT(prev, 1e-12);
}

TEST(dist, tensor_examples) {
    const auto d = random_dist(1, 6, 4);
    const auto joint = tensor(point_mass(0, 6), d);
    for (int k = 0; k <= 6; ++k) {
        const int idx[2] = {0, k};
        EXPECT_EQ(joint.at(idx), d[static_cast<std::size_t>(k)]);
    }
    const auto a = random_dist(1, 9, 1);
    const auto b = random_dist(1, 9, 2);
    EXPECT_NEAR(entropy(tensor(a, b)), entropy(a) + entropy(b), 1e-10);
    const auto gg = tensor(geometric(0.7, 80), geometric(0.7, 80));
    EXPECT_NEAR(mean_energy(gg).total, 1.4, 1e-8);
    EXPECT_NEAR(total(gg), 1.0, 1e-12);
    EXPECT_THROW(tensor(a, random_dist(1, 8, 2)), DomainError);
}

TEST(dist, tensor_tail_accounting) {
    const auto a = geometric(1.0, 4);
    const auto joint = tensor(a, a);
    EXPECT_NEAR(total(joint), 1.0, 1e-14);
    EXPECT_NEAR(joint.tail_mass(), 1.0 - std::pow(1.0 - a.tail_mass(), 2), 1e-15);
}

TEST(dist, marginal_examples) {
    const auto a = random_dist(1, 5, 11);
    const auto b = random_dist(1, 5, 12);
    const auto ab = tensor(a, b);
    EXPECT_LT(total_variation(marginal(ab, 0), a), 1e-15);
    EXPECT_LT(total_variation(marginal(ab, 1), b), 1e-15);
    EXPECT_THROW(marginal(ab, 2), DomainError);
    EXPECT_THROW(marginal(ab, -1), DomainError);

    // symmetric correlated pair
    std::vector<double> p(36, 0.0);
    const auto r = random_dist(2, 5, 3);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            p[static_cast<std::size_t>(i * 6 + j)] = 0.5 * (r[static_cast<std::size_t>(i * 6 + j)] + r[static_cast<std::size_t>(j * 6 + i)]);
        }
    }
    const TruncatedDist sym(p, 2, 5, 0.0);
    EXPECT_LT(total_variation(marginal(sym, 0), marginal(sym, 1)), 1e-15);
}

TEST(dist, subadditivity) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto d = random_dist(3, 4, seed, 0.3);
        double sum = 0.0;
        for (int m = 0; m < 3; ++m) {
            const double h = entropy(marginal(d, m));
            EXPECT_GE(h, 0.0);
            sum += h;
        }
        EXPECT_GE(sum, entropy(d) - 1e-12);
    }
}

TEST(dist, random_dist_properties) {
    const auto a = random_dist(2, 7, 99);
    const auto b = random_dist(2, 7, 99);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i], b[i]);
    }
    EXPECT_NEAR(total(a), 1.0, 1e-12);
    EXPECT_EQ(a.tail_mass(), 0.0);
    EXPECT_GT(total_variation(a, random_dist(2, 7, 100)), 0.0);
    double prev = 1.0;
    for (double c : {1.0, 100.0, 1e4, 1e6}) {
        const double tv = total_variation(random_dist(1, 30, 5, c), uniform(1, 30));
        EXPECT_LT(tv, prev);
        prev = tv;
    }
    EXPECT_LT(prev, 1e-2);
    EXPECT_THROW(random_dist(1, 3, 0, 0.0), DomainError);
}

TEST(dist, total_variation_embeds_boxes) {
    const auto a = geometric(1.0, 60);
    const auto b = geometric(1.0, 80);
    EXPECT_LE(total_variation(a, b), 2.0 * a.tail_mass());
    EXPECT_EQ(total_variation(a, a), a.tail_mass());
    EXPECT_NEAR(total_variation(point_mass(0, 3), point_mass(2, 5)), 1.0, 1e-15);
    EXPECT_THROW(total_variation(a, uniform(2, 3)), DomainError);
}

TEST(dist, at_and_point_mass) {
    const int idx[3] = {1, 0, 2};
    const auto d = point_mass(idx, 2);
    EXPECT_EQ(d.at(idx), 1.0);
    EXPECT_EQ(d.n_modes(), 3);
    const int bad[3] = {1, 0, 3};
    EXPECT_THROW(d.at(bad), DomainError);
    EXPECT_THROW(point_mass(bad, 2), DomainError);
    const auto e = mean_energy(d);
    EXPECT_EQ(e.per_mode, (std::vector<double>{1.0, 0.0, 2.0}));
    EXPECT_EQ(e.total, 3.0);
}
