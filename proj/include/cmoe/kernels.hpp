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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmoe/dist.hpp"

namespace cmoe {

enum class Family { thinning, attenuator, amplifier, additive_noise, contravariant };

std::string_view to_string(Family family);
/// Accepts the names produced by to_string; throws DomainError otherwise.
Family parse_family(std::string_view name);

/// One-mode channel family and parameters, applied independently to each of `n_modes` modes.
struct ChannelSpec {
    Family family = Family::thinning;
    double lambda = 1.0;      // transmissivity, thinning and attenuator
    double kappa = 1.0;       // gain, amplifier and contravariant
    double env_energy = 0.0;  // thermal energy of the environment
    int n_modes = 1;

    /// Throws DomainError when a parameter is outside its family's range.
    void validate() const;

    /// Mean photon number of the output when the input has mean `input_energy`.
    double output_energy(double input_energy) const;

    /// Short human-readable form, e.g. "attenuator(lambda=0.5,E=0.2)".
    std::string describe() const;
};

/// Row-stochastic matrix from occupations 0..in_cutoff to 0..out_cutoff. The mass that
/// leaves the output range is recorded per row in `leak`.
class StochasticKernel {
  public:
    StochasticKernel() = default;
    /// `matrix` is row-major, (in_cutoff + 1) x (out_cutoff + 1). Leaks are 1 - row sum.
    StochasticKernel(int in_cutoff, int out_cutoff, std::vector<double> matrix);
    StochasticKernel(int in_cutoff, int out_cutoff, std::vector<double> matrix, std::vector<double> leak);

    static StochasticKernel identity(int cutoff);

    int in_cutoff() const { return in_cutoff_; }
    int out_cutoff() const { return out_cutoff_; }
    int rows() const { return in_cutoff_ + 1; }
    int cols() const { return out_cutoff_ + 1; }

    double operator()(int n, int m) const {
        return matrix_[static_cast<std::size_t>(n) * static_cast<std::size_t>(cols()) + static_cast<std::size_t>(m)];
    }
    std::span<const double> row(int n) const {
        return std::span<const double>(matrix_).subspan(static_cast<std::size_t>(n) * static_cast<std::size_t>(cols()),
                                                        static_cast<std::size_t>(cols()));
    }
    std::span<const double> matrix() const { return matrix_; }
    std::span<const double> leak() const { return leak_; }
    double leak(int n) const { return leak_[static_cast<std::size_t>(n)]; }
    double max_leak() const;

  private:
    int in_cutoff_ = 0;
    int out_cutoff_ = 0;
    std::vector<double> matrix_;
    std::vector<double> leak_;
};

/// Binomial thinning: P(m|n) = C(n,m) lambda^m (1-lambda)^(n-m).
StochasticKernel thinning_kernel(double lambda, int in_cutoff, int out_cutoff);

/// Photon-number action of the vacuum-environment beamsplitter; equal to thinning.
StochasticKernel ql_attenuator_kernel(double lambda, int in_cutoff, int out_cutoff);

/// Photon-number action of two-mode squeezing with the environment in vacuum, output on the
/// system side: P(m|n) = C(m,n) (1-1/kappa)^(m-n) kappa^-(n+1), m >= n.
StochasticKernel ql_amplifier_kernel(double kappa, int in_cutoff, int out_cutoff);

/// Same squeezing, output on the environment side:
/// P(m|n) = C(n+m,m) (1-1/kappa)^m kappa^-(n+1).
StochasticKernel ql_contravariant_kernel(double kappa, int in_cutoff, int out_cutoff);

/// Output cutoff used when the caller does not pass one. For amplifying channels this starts
/// at ceil(k N + 10 sqrt(k N + k)) and grows until the worst row leaks less than `max_leak`.
int default_output_cutoff(const ChannelSpec& spec, int in_cutoff, double max_leak = 1e-12);

/// The one-mode kernel of `spec`. For E > 0 the channel is a quantum-limited attenuator
/// followed by a quantum-limited amplifier (or contravariant channel) with matched parameters.
StochasticKernel build_channel(const ChannelSpec& spec, int in_cutoff, std::optional<int> out_cutoff = std::nullopt);

/// Parameters of the quantum-limited stages realizing `spec`. Attenuator stage first.
struct ChannelDecomposition {
    double attenuation = 1.0;
    double gain = 1.0;
    bool contravariant = false;
};
ChannelDecomposition decompose(const ChannelSpec& spec);

/// Kernel of "first `first`, then `second`". Leaks accumulate.
StochasticKernel compose(const StochasticKernel& first, const StochasticKernel& second);

/// Single-mode application. Output tail = input tail + sum_n p_n leak_n.
TruncatedDist apply(const StochasticKernel& kernel, const TruncatedDist& d);

/// Applies the one-mode kernel independently along every mode of a (possibly correlated)
/// joint distribution. OpenMP-parallel; see reference::apply_multimode for the serial version.
TruncatedDist apply_multimode(const StochasticKernel& kernel, const TruncatedDist& d);
TruncatedDist apply_multimode(const ChannelSpec& spec, const TruncatedDist& d);

/// CSV with a versioned header comment, one row per input occupation, leak in the last column.
std::string kernel_to_csv(const StochasticKernel& kernel, std::string_view label = {});

}  // namespace cmoe
