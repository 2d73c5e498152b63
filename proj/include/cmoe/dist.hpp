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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace cmoe {

/// Dense limit on the number of stored probabilities (covers n <= 3 modes at cutoff 63 with
/// headroom for the wider outputs of amplifying channels).
inline constexpr std::size_t kMaxDenseEntries = std::size_t{1} << 22;

/// Tail mass above which entropies are refused.
inline constexpr double kEntropyTailThreshold = 1e-10;

/// Probability vector on {0..N}^n, row-major (mode 0 slowest), plus the mass that fell
/// outside the box.
class TruncatedDist {
  public:
    TruncatedDist() = default;

    /// Validates nonnegativity and sum(probs) + tail_mass = 1.
    TruncatedDist(std::vector<double> probs, int n_modes, int cutoff, double tail_mass);

    /// Takes tail_mass = 1 - sum(probs), clamped at zero.
    static TruncatedDist from_probs(std::vector<double> probs, int n_modes, int cutoff);

    std::span<const double> probs() const { return probs_; }
    int n_modes() const { return n_modes_; }
    int cutoff() const { return cutoff_; }
    int levels() const { return cutoff_ + 1; }
    double tail_mass() const { return tail_mass_; }
    std::size_t size() const { return probs_.size(); }

    double operator[](std::size_t i) const { return probs_[i]; }
    /// Probability of the multi-index (k_0, ..., k_{n-1}).
    double at(std::span<const int> index) const;

  private:
    std::vector<double> probs_;
    int n_modes_ = 1;
    int cutoff_ = 0;
    double tail_mass_ = 0.0;
};

struct EnergyReport {
    std::vector<double> per_mode;
    double total = 0.0;
};

/// Number of entries of a dense n-mode box, throwing ResourceError above kMaxDenseEntries.
std::size_t dense_size(int n_modes, int cutoff);

/// Truncated geometric (thermal) distribution with mean E.
TruncatedDist geometric(double mean, int cutoff);

/// geometric(E) tensored n times.
TruncatedDist geometric_product(double mean, int cutoff, int n_modes);

TruncatedDist point_mass(std::span<const int> index, int cutoff);
TruncatedDist point_mass(int k, int cutoff);
TruncatedDist uniform(int n_modes, int cutoff);

/// Shannon entropy in nats. Throws TruncationError if tail_mass exceeds `max_tail`.
double entropy(const TruncatedDist& d, double max_tail = kEntropyTailThreshold);

/// Upper bound on the entropy carried by the tail: -t ln t + t ln(cutoff + 1).
double tail_entropy_bound(const TruncatedDist& d);

/// Product distribution on the concatenated modes. Both factors must share a cutoff.
TruncatedDist tensor(const TruncatedDist& first, const TruncatedDist& second);

/// Distribution of a single mode. The joint tail is carried over unchanged.
TruncatedDist marginal(const TruncatedDist& d, int mode);

EnergyReport mean_energy(const TruncatedDist& d);

/// Symmetric Dirichlet sample over the whole box; tail_mass is 0.
TruncatedDist random_dist(int n_modes, int cutoff, std::uint64_t seed, double concentration = 1.0);

/// Upper bound on the total variation distance, counting both tails as disjoint.
double total_variation(const TruncatedDist& a, const TruncatedDist& b);

}  // namespace cmoe
