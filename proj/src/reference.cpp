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

#include "cmoe/reference.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "cmoe/errors.hpp"
#include "cmoe/quadrature.hpp"

namespace cmoe::reference {

TruncatedDist apply_multimode(const StochasticKernel& kernel, const TruncatedDist& d) {
    if (d.cutoff() > kernel.in_cutoff()) {
        throw DomainError("apply_multimode: distribution cutoff exceeds kernel input cutoff");
    }
    const int n = d.n_modes();
    const int lin = d.levels();
    const int lout = kernel.cols();
    const std::size_t out_size = dense_size(n, kernel.out_cutoff());
    std::vector<double> out(out_size, 0.0);
    double tail = d.tail_mass();

    std::vector<int> x(static_cast<std::size_t>(n));
    std::vector<int> y(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double p = d[i];
        std::size_t rest = i;
        for (int m = n - 1; m >= 0; --m) {
            x[static_cast<std::size_t>(m)] = static_cast<int>(rest % static_cast<std::size_t>(lin));
            rest /= static_cast<std::size_t>(lin);
        }
        double kept = 1.0;
        for (int m = 0; m < n; ++m) {
            kept *= 1.0 - kernel.leak(x[static_cast<std::size_t>(m)]);
        }
        tail += p * (1.0 - kept);
        if (p == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < out_size; ++j) {
            std::size_t r = j;
            double w = p;
            for (int m = n - 1; m >= 0; --m) {
                const int ym = static_cast<int>(r % static_cast<std::size_t>(lout));
                r /= static_cast<std::size_t>(lout);
                w *= kernel(x[static_cast<std::size_t>(m)], ym);
            }
            out[j] += w;
        }
    }
    return TruncatedDist(std::move(out), n, kernel.out_cutoff(), tail);
}

WehrlResult wehrl_entropy_general(const DensityMatrix& rho, const QuadratureSpec& quad) {
    WehrlResult result;
    result.u_max = quad.u_max ? *quad.u_max : default_u_max(rho.cutoff());
    const QuadratureRule rule = radial_rule(quad.radial_nodes, result.u_max);
    const int angles = quad.angular_nodes;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double r = std::sqrt(rule.nodes[i]);
        for (int l = 0; l < angles; ++l) {
            const double q = husimi_q(rho, std::polar(r, 2.0 * std::numbers::pi * l / angles));
            const double w = rule.weights[i] / angles;
            result.normalization += w * q;
            if (q > 0.0) {
                result.entropy -= w * q * std::log(q);
            }
        }
    }
    return result;
}

}  // namespace cmoe::reference
