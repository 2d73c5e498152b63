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

namespace cmoe {

/// Coefficients of the composed bound x -> g(a * g^{-1}(x) + b).
struct LemmaParams {
    double a = 1.0;
    double b = 0.0;

    /// The range 0 <= a <= b + 1 on which the composed bound is known to be increasing and convex.
    bool satisfies_lemma() const { return a >= 0.0 && b >= 0.0 && a <= b + 1.0; }
};

struct RootOptions {
    double tolerance = 1e-12;
    int max_iterations = 200;
};

/// Entropy (nats) of the thermal state with mean photon number `energy`:
/// g(E) = (E + 1) ln(E + 1) - E ln E. Throws DomainError for negative or non-finite E.
double g(double energy);

/// First derivative ln(1 + 1/E). Infinite at E = 0.
double g_prime(double energy);

/// Second derivative -1 / (E (E + 1)).
double g_second(double energy);

/// Inverse of g on [0, inf). Safeguarded Newton on the bracket [0, e^s].
double g_inv(double entropy, const RootOptions& options = {});

/// g(a * g_inv(s) + b).
double bound_f(const LemmaParams& params, double entropy);

/// ln(g_inv(s) + 1) + 1, the minimum Wehrl entropy at von Neumann entropy s.
double wehrl_bound_f(double entropy);

/// h(t) = g'(t) / g''(t) = t (t + 1) ln(t / (t + 1)), t > 0.
double lemma_aux_h(double t);

/// theta(t) = ln((t + 1) / t), so that t = 1 / (e^theta - 1).
double lemma_aux_theta(double t);

/// h(t) / t = (t + 1) ln(t / (t + 1)); increasing.
double lemma_aux_phi_small_gain(double t);

/// h(t) / (t + 1) = t ln(t / (t + 1)); decreasing.
double lemma_aux_phi_large_gain(double t);

}  // namespace cmoe
