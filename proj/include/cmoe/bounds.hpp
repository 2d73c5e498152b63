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

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cmoe/dist.hpp"
#include "cmoe/kernels.hpp"
#include "cmoe/specfun.hpp"
#include "cmoe/wehrl.hpp"

namespace cmoe {

/// Heterodyne measurement on `n_modes` modes; its output entropy is the Wehrl entropy.
struct WehrlMeasure {
    int n_modes = 1;
};

using BoundSpec = std::variant<ChannelSpec, WehrlMeasure>;

int n_modes(const BoundSpec& spec);
std::string describe(const BoundSpec& spec);

/// (a, b) such that the channel's single-copy bound is g(a g^{-1}(s) + b).
LemmaParams lemma_params(const ChannelSpec& spec);

/// Minimum one-mode output entropy at input entropy s. The mode count of `spec` is ignored.
double single_copy_bound(const BoundSpec& spec, double entropy);

/// n f(s / n) with n the mode count of `spec`.
double lifted_bound(const BoundSpec& spec, double total_entropy);

struct Tolerances {
    double classical_margin = 1e-9;
    double wehrl_margin = 1e-6;
    /// Largest input tail / output tail (including kernel leak) for a valid report.
    double max_tail = 1e-10;
};

struct VerificationReport {
    std::string instance;
    std::string family;
    int n_modes = 1;
    double input_entropy = 0.0;
    double output_entropy = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    double input_tail = 0.0;
    double output_tail = 0.0;
    double max_leak = 0.0;
    double tail_entropy_bound = 0.0;
    double tolerance = 0.0;
    bool valid = true;
    /// Why the report is invalid; empty for valid reports.
    std::string flag;

    bool violation() const { return valid && margin < -tolerance; }
};

/// H(T_lambda^{(x)n} d) against n g(lambda g^{-1}(H(d)/n)).
VerificationReport verify_thinning(const TruncatedDist& d, double lambda, const Tolerances& tol = {});

/// Output entropy of spec^{(x)n} on the Fock-diagonal state with spectrum `d`, against the
/// lifted bound of the family. The input entropy is the Shannon entropy of `d`.
VerificationReport verify_channel(const TruncatedDist& d, const ChannelSpec& spec, const Tolerances& tol = {});

/// Wehrl entropy of a single-mode state against ln(g^{-1}(S) + 1) + 1.
VerificationReport verify_wehrl(const DensityMatrix& rho, const Tolerances& tol = {}, const QuadratureSpec& quad = {});

/// Wehrl entropy of a Fock-diagonal state on one or two modes against the lifted bound.
VerificationReport verify_wehrl(const TruncatedDist& d, const Tolerances& tol = {}, const QuadratureSpec& quad = {});

enum class InputFamily { random, perturbed_geometric, geometric, point_mass };

std::string_view to_string(InputFamily input);
InputFamily parse_input_family(std::string_view name);

struct SweepConfig {
    std::vector<BoundSpec> specs;
    InputFamily input = InputFamily::random;
    int cutoff = 15;
    std::vector<std::uint64_t> seeds;
    double concentration = 1.0;
    /// Mean energy of geometric-type inputs.
    double input_energy = 1.0;
    Tolerances tolerances;
};

/// Input state for one sweep instance. Deterministic in its arguments.
TruncatedDist make_input(InputFamily input, int n_modes, int cutoff, std::uint64_t seed, double concentration = 1.0,
                         double energy = 1.0);

/// One report per (spec, seed), ordered spec-major. Instances run in parallel; failures
/// become flagged reports rather than exceptions.
std::vector<VerificationReport> sweep(const SweepConfig& config);

struct SweepSummary {
    std::size_t total = 0;
    std::size_t valid = 0;
    std::size_t flagged = 0;
    std::size_t violations = 0;
    double min_margin = std::numeric_limits<double>::infinity();
};

SweepSummary summarize(std::span<const VerificationReport> reports);

}  // namespace cmoe
