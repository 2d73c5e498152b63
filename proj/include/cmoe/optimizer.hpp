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
#include <span>
#include <string>
#include <vector>

#include "cmoe/dist.hpp"
#include "cmoe/kernels.hpp"

namespace cmoe {

struct OptimizationProblem {
    ChannelSpec channel;
    double target_entropy = 0.0;
    int cutoff = 30;
    int starts = 8;
    std::uint64_t seed = 0;
    int max_iterations = 5000;
    double gradient_tolerance = 1e-9;
    /// Stop when the objective changes by less than this (relative) over `stall_window` steps.
    double stall_tolerance = 1e-12;
    int stall_window = 20;
    /// Largest admissible negative gap before a result counts as a counterexample candidate.
    double gap_tolerance = 1e-6;

    int n_modes() const { return channel.n_modes; }
    /// Throws DomainError unless 0 <= target <= n ln(cutoff + 1) and the channel is valid.
    void validate() const;
};

struct OptimizationResult {
    TruncatedDist argmin;
    double target_entropy = 0.0;
    double input_entropy = 0.0;
    double output_entropy = 0.0;
    /// Lifted analytic bound at the achieved input entropy.
    double bound = 0.0;
    double gap = 0.0;
    /// Distance to the geometric product with the same entropy per mode.
    double tv_to_geometric = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    int best_start = 0;
    std::string start_kind;
    std::vector<double> start_objectives;
    /// Always "local": multi-start descent certifies nothing globally.
    std::string label = "local";
};

/// Multi-start mirror descent on the simplex at fixed input entropy. Starts run in parallel;
/// the smallest objective wins, ties broken by start index.
OptimizationResult minimize_output_entropy(const OptimizationProblem& problem);

/// Single descent from `start`, which is first tilted onto the entropy constraint.
OptimizationResult minimize_from(const OptimizationProblem& problem, const TruncatedDist& start);

/// p^beta / Z(beta) with beta chosen so the entropy equals `target`. Entries that are zero
/// stay zero, except that target = ln(box size) returns the uniform distribution.
TruncatedDist entropy_projection(const TruncatedDist& d, double target);

struct GridOutcome {
    double target_entropy = 0.0;
    double min_gap = 0.0;
    OptimizationResult best;
};

struct CounterexampleSummary {
    std::vector<GridOutcome> points;
    double min_gap = 0.0;
    /// Grid points whose minimal gap fell below -gap_tolerance.
    std::size_t candidates = 0;
};

/// Runs the optimizer at each target entropy with each seed and keeps the smallest gap.
CounterexampleSummary counterexample_search(const ChannelSpec& channel, std::span<const double> entropy_grid,
                                            std::span<const std::uint64_t> seeds, int cutoff, int starts = 8,
                                            double gap_tolerance = 1e-6);

}  // namespace cmoe
