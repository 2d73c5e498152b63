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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "cmoe/errors.hpp"

namespace cmoe {

namespace {

double normalization_tolerance(std::size_t n) {
    return 1e-12 + 8.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(n);
}

double neumaier_sum(std::span<const double> xs) {
    double sum = 0.0;
    double c = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

// Embeds row-major index `i` of a box with `from_levels` per mode into one with `to_levels`.
// Returns npos when a coordinate does not fit.
std::size_t remap_index(std::size_t i, int n_modes, int from_levels, int to_levels) {
    std::size_t out = 0;
    std::size_t stride = 1;
    for (int m = 0; m < n_modes; ++m) {
        const auto k = static_cast<int>(i % static_cast<std::size_t>(from_levels));
        i /= static_cast<std::size_t>(from_levels);
        if (k >= to_levels) {
            return std::numeric_limits<std::size_t>::max();
        }
        out += static_cast<std::size_t>(k) * stride;
        stride *= static_cast<std::size_t>(to_levels);
    }
    return out;
}

}  // namespace

std::size_t dense_size(int n_modes, int cutoff) {
    if (n_modes < 1 || cutoff < 0) {
        throw DomainError("invalid box: n_modes=" + std::to_string(n_modes) + " cutoff=" + std::to_string(cutoff));
    }
    std::size_t size = 1;
    for (int m = 0; m < n_modes; ++m) {
        size *= static_cast<std::size_t>(cutoff) + 1;
        if (size > kMaxDenseEntries) {
            throw ResourceError("dense box with " + std::to_string(n_modes) + " modes at cutoff " +
                                std::to_string(cutoff) + " exceeds the entry budget");
        }
    }
    return size;
}

TruncatedDist::TruncatedDist(std::vector<double> probs, int n_modes, int cutoff, double tail_mass)
    : probs_(std::move(probs)), n_modes_(n_modes), cutoff_(cutoff), tail_mass_(tail_mass) {
    if (probs_.size() != dense_size(n_modes, cutoff)) {
        throw DomainError("probability vector has " + std::to_string(probs_.size()) + " entries, expected " +
                          std::to_string(dense_size(n_modes, cutoff)));
    }
    if (!(tail_mass_ >= 0.0) || !std::isfinite(tail_mass_)) {
        throw DomainError("tail mass must be finite and nonnegative");
    }
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p)) {
            throw DomainError("probabilities must be finite and nonnegative");
        }
    }
    const double total = neumaier_sum(probs_) + tail_mass_;
    if (std::abs(total - 1.0) > normalization_tolerance(probs_.size())) {
        throw DomainError("distribution is not normalized: sum + tail = " + std::to_string(total));
    }
}

TruncatedDist TruncatedDist::from_probs(std::vector<double> probs, int n_modes, int cutoff) {
    const double tail = std::max(0.0, 1.0 - neumaier_sum(probs));
    return TruncatedDist(std::move(probs), n_modes, cutoff, tail);
}

double TruncatedDist::at(std::span<const int> index) const {
    if (static_cast<int>(index.size()) != n_modes_) {
        throw DomainError("multi-index has wrong number of modes");
    }
    std::size_t flat = 0;
    for (int k : index) {
        if (k < 0 || k > cutoff_) {
            throw DomainError("multi-index outside the box");
        }
        flat = flat * static_cast<std::size_t>(levels()) + static_cast<std::size_t>(k);
    }
    return probs_[flat];
}

TruncatedDist geometric(double mean, int cutoff) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw DomainError("geometric: mean must be finite and nonnegative");
    }
    if (cutoff < 0) {
        throw DomainError("geometric: cutoff must be nonnegative");
    }
    std::vector<double> probs(static_cast<std::size_t>(cutoff) + 1, 0.0);
    const double ratio = mean / (mean + 1.0);
    double p = 1.0 / (mean + 1.0);
    for (auto& x : probs) {
        x = p;
        p *= ratio;
    }
    const double tail = std::pow(ratio, cutoff + 1);
    return TruncatedDist(std::move(probs), 1, cutoff, tail);
}

TruncatedDist geometric_product(double mean, int cutoff, int n_modes) {
    if (n_modes < 1) {
        throw DomainError("geometric_product: n_modes must be positive");
    }
    const TruncatedDist one = geometric(mean, cutoff);
    TruncatedDist out = one;
    for (int m = 1; m < n_modes; ++m) {
        out = tensor(out, one);
    }
    return out;
}

TruncatedDist point_mass(std::span<const int> index, int cutoff) {
    const int n = static_cast<int>(index.size());
    std::vector<double> probs(dense_size(n, cutoff), 0.0);
    std::size_t flat = 0;
    for (int k : index) {
        if (k < 0 || k > cutoff) {
            throw DomainError("point_mass: occupation outside the box");
        }
        flat = flat * (static_cast<std::size_t>(cutoff) + 1) + static_cast<std::size_t>(k);
    }
    probs[flat] = 1.0;
    return TruncatedDist(std::move(probs), n, cutoff, 0.0);
}

TruncatedDist point_mass(int k, int cutoff) {
    const int index[1] = {k};
    return point_mass(std::span<const int>(index), cutoff);
}

TruncatedDist uniform(int n_modes, int cutoff) {
    const std::size_t size = dense_size(n_modes, cutoff);
    return TruncatedDist(std::vector<double>(size, 1.0 / static_cast<double>(size)), n_modes, cutoff, 0.0);
}

double entropy(const TruncatedDist& d, double max_tail) {
    if (d.tail_mass() > max_tail) {
        throw TruncationError("entropy: tail mass " + std::to_string(d.tail_mass()) + " exceeds threshold " +
                              std::to_string(max_tail));
    }
    double h = 0.0;
    for (double p : d.probs()) {
        if (p > 0.0) {
            h -= p * std::log(p);
        }
    }
    return h;
}

double tail_entropy_bound(const TruncatedDist& d) {
    const double t = d.tail_mass();
    if (t <= 0.0) {
        return 0.0;
    }
    return -t * std::log(t) + t * std::log(static_cast<double>(d.cutoff()) + 1.0);
}

TruncatedDist tensor(const TruncatedDist& first, const TruncatedDist& second) {
    if (first.cutoff() != second.cutoff()) {
        throw DomainError("tensor: factors must share a cutoff");
    }
    const std::size_t size = dense_size(first.n_modes() + second.n_modes(), first.cutoff());
    std::vector<double> probs(size);
    std::size_t i = 0;
    for (double p : first.probs()) {
        for (double q : second.probs()) {
            probs[i++] = p * q;
        }
    }
    const double tail = first.tail_mass() + second.tail_mass() - first.tail_mass() * second.tail_mass();
    return TruncatedDist(std::move(probs), first.n_modes() + second.n_modes(), first.cutoff(), tail);
}

TruncatedDist marginal(const TruncatedDist& d, int mode) {
    if (mode < 0 || mode >= d.n_modes()) {
        throw DomainError("marginal: mode index " + std::to_string(mode) + " out of range");
    }
    const auto levels = static_cast<std::size_t>(d.levels());
    std::size_t inner = 1;
    for (int m = mode + 1; m < d.n_modes(); ++m) {
        inner *= levels;
    }
    std::vector<double> probs(levels, 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
        probs[(i / inner) % levels] += d[i];
    }
    return TruncatedDist(std::move(probs), 1, d.cutoff(), d.tail_mass());
}

EnergyReport mean_energy(const TruncatedDist& d) {
    EnergyReport report;
    for (int m = 0; m < d.n_modes(); ++m) {
        const TruncatedDist one = marginal(d, m);
        double e = 0.0;
        for (int k = 0; k <= one.cutoff(); ++k) {
            e += k * one[static_cast<std::size_t>(k)];
        }
        report.per_mode.push_back(e);
        report.total += e;
    }
    return report;
}

TruncatedDist random_dist(int n_modes, int cutoff, std::uint64_t seed, double concentration) {
    if (!(concentration > 0.0) || !std::isfinite(concentration)) {
        throw DomainError("random_dist: concentration must be finite and positive");
    }
    const std::size_t size = dense_size(n_modes, cutoff);
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> gamma(concentration, 1.0);
    std::vector<double> probs(size);
    double total = 0.0;
    for (auto& p : probs) {
        p = gamma(rng);
        total += p;
    }
    if (!(total > 0.0)) {
        // Every draw underflowed; only possible for tiny concentrations.
        probs.assign(size, 0.0);
        probs[static_cast<std::size_t>(rng() % size)] = 1.0;
        total = 1.0;
    }
    for (auto& p : probs) {
        p /= total;
    }
    return TruncatedDist(std::move(probs), n_modes, cutoff, 0.0);
}

double total_variation(const TruncatedDist& a, const TruncatedDist& b) {
    if (a.n_modes() != b.n_modes()) {
        throw DomainError("total_variation: mode counts differ");
    }
    const TruncatedDist& big = a.cutoff() >= b.cutoff() ? a : b;
    const TruncatedDist& small = a.cutoff() >= b.cutoff() ? b : a;
    std::vector<double> embedded(big.size(), 0.0);
    for (std::size_t i = 0; i < small.size(); ++i) {
        embedded[remap_index(i, small.n_modes(), small.levels(), big.levels())] = small[i];
    }
    double diff = 0.0;
    for (std::size_t i = 0; i < big.size(); ++i) {
        diff += std::abs(big[i] - embedded[i]);
    }
    return 0.5 * (diff + a.tail_mass() + b.tail_mass());
}

}  // namespace cmoe
