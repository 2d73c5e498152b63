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

#include "cmoe/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "cmoe/errors.hpp"

namespace cmoe {

namespace {

void require_nonnegative(double x, const char* what) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw DomainError(std::string(what) + " must be finite and nonnegative, got " + std::to_string(x));
    }
}

void require_positive(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("argument must be finite and positive, got " + std::to_string(t));
    }
}

}  // namespace

double g(double energy) {
    require_nonnegative(energy, "mean photon number");
    if (energy == 0.0) {
        return 0.0;
    }
    if (energy < 1e-8) {
        // (E+1) ln(1+E) - E ln E expanded to second order.
        return energy * (1.0 - std::log(energy)) + 0.5 * energy * energy;
    }
    // ln(E+1) + E ln(1 + 1/E): no cancellation for large E.
    return std::log1p(energy) + energy * std::log1p(1.0 / energy);
}

double g_prime(double energy) {
    require_nonnegative(energy, "mean photon number");
    if (energy == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return std::log1p(1.0 / energy);
}

double g_second(double energy) {
    require_nonnegative(energy, "mean photon number");
    if (energy == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return -1.0 / (energy * (energy + 1.0));
}

double g_inv(double entropy, const RootOptions& options) {
    require_nonnegative(entropy, "entropy");
    if (entropy == 0.0) {
        return 0.0;
    }

    // g(E) >= ln(E + 1), so g(e^s) > s.
    double lo = 0.0;
    double hi = std::exp(entropy);
    if (!std::isfinite(hi)) {
        hi = std::numeric_limits<double>::max();
    }
    if (g(hi) < entropy) {
        throw NumericError("g_inv: entropy " + std::to_string(entropy) + " exceeds the range of double precision");
    }

    // Large-E asymptote g(E) ~ ln(E + 1/2) + 1 gives a good starting point.
    double x = std::exp(entropy - 1.0) - 0.5;
    if (!(x > lo && x < hi)) {
        x = 0.5 * (lo + hi);
    }

    for (int it = 0; it < options.max_iterations; ++it) {
        const double fx = g(x) - entropy;
        if (std::abs(fx) < options.tolerance) {
            return x;
        }
        if (fx < 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        double next = x - fx / g_prime(x);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (next == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            // Bracket collapsed to machine resolution.
            return next;
        }
        x = next;
    }
    throw NumericError("g_inv: no convergence for entropy " + std::to_string(entropy));
}

double bound_f(const LemmaParams& params, double entropy) {
    require_nonnegative(params.a, "lemma parameter a");
    require_nonnegative(params.b, "lemma parameter b");
    return g(params.a * g_inv(entropy) + params.b);
}

double wehrl_bound_f(double entropy) { return std::log1p(g_inv(entropy)) + 1.0; }

double lemma_aux_h(double t) {
    require_positive(t);
    return -t * (t + 1.0) * std::log1p(1.0 / t);
}

double lemma_aux_theta(double t) {
    require_positive(t);
    return std::log1p(1.0 / t);
}

double lemma_aux_phi_small_gain(double t) {
    require_positive(t);
    return -(t + 1.0) * std::log1p(1.0 / t);
}

double lemma_aux_phi_large_gain(double t) {
    require_positive(t);
    return -t * std::log1p(1.0 / t);
}

}  // namespace cmoe
