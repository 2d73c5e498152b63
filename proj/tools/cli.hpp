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
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cmoe::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitUsage = 64;

/// Everything a subcommand reads. Filled from --config first, then from flags.
struct RunConfig {
    std::string command;
    std::string family = "thinning";
    double lambda = 0.5;
    double kappa = 2.0;
    double env_energy = 0.0;
    int modes = 1;
    std::optional<int> cutoff;
    std::optional<int> out_cutoff;
    std::optional<double> entropy;
    std::optional<std::string> grid;
    std::string seeds;
    std::string out;
    std::optional<double> tol;
    std::string input = "random";
    double input_energy = 1.0;
    double concentration = 1.0;
    int starts = 8;
    std::string state = "thermal";
    std::string density;
};

/// "lo:hi:count" (inclusive, evenly spaced) or a comma list. Entries may be written g(E).
std::vector<double> parse_grid(std::string_view text);
/// "N" (seeds 0..N-1), "a:b" (a..b-1) or a comma list.
std::vector<std::uint64_t> parse_seeds(std::string_view text);

/// Runs the command line and returns the exit code. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cmoe::cli
