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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cmoe/bounds.hpp"
#include "cmoe/dist.hpp"
#include "cmoe/kernels.hpp"
#include "cmoe/optimizer.hpp"
#include "cmoe/wehrl.hpp"

namespace cmoe {

using Json = nlohmann::ordered_json;

/// {"n_modes", "cutoff", "probs", "tail_mass"}. Unknown keys are rejected.
Json dist_to_json(const TruncatedDist& d);
TruncatedDist dist_from_json(const Json& j);

/// {"cutoff", "real": [[...]], "imag": [[...]]}, row-major.
Json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& j);

Json channel_to_json(const ChannelSpec& spec);
ChannelSpec channel_from_json(const Json& j);

Json problem_to_json(const OptimizationProblem& problem);
OptimizationProblem problem_from_json(const Json& j);
Json result_to_json(const OptimizationResult& result);

Json report_to_json(const VerificationReport& report);
Json reports_to_json(std::span<const VerificationReport> reports);
/// Versioned header comment, one row per report.
std::string reports_to_csv(std::span<const VerificationReport> reports);

/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// 64-bit FNV-1a, used for payload fingerprints.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace cmoe
