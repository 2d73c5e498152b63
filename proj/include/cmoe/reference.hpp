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

// Straightforward serial versions of the OpenMP kernels. They are kept as the reference the
// parallel code is tested and benchmarked against.

#include "cmoe/dist.hpp"
#include "cmoe/kernels.hpp"
#include "cmoe/wehrl.hpp"

namespace cmoe::reference {

/// Sums p(x) prod_i K(x_i, y_i) over every pair of input and output multi-indices.
TruncatedDist apply_multimode(const StochasticKernel& kernel, const TruncatedDist& d);

/// Evaluates husimi_q at every node of the polar grid.
WehrlResult wehrl_entropy_general(const DensityMatrix& rho, const QuadratureSpec& quad = {});

}  // namespace cmoe::reference
