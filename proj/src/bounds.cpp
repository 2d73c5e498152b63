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

#include "cmoe/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cmoe/errors.hpp"

namespace cmoe {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_entropy(double s) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
        throw DomainError("entropy must be finite and nonnegative, got " + std::to_string(s));
    }
}

void finish(VerificationReport& r, double tolerance) {
    r.margin = r.output_entropy - r.bound;
    r.tolerance = tolerance;
}

std::string seed_label(InputFamily input, std::uint64_t seed) {
    std::ostringstream os;
    os << "input=" << to_string(input) << " seed=" << seed;
    return os.str();
}

DensityMatrix make_wehrl_state(InputFamily input, int cutoff, std::uint64_t seed, double concentration,
                               double energy) {
    switch (input) {
        case InputFamily::random:
            return DensityMatrix::random_mixed(cutoff, 1 + static_cast<int>(seed % static_cast<std::uint64_t>(cutoff + 1)),
                                               seed);
        case InputFamily::geometric:
            return DensityMatrix::thermal(energy, cutoff);
        case InputFamily::point_mass:
        case InputFamily::perturbed_geometric:
            return DensityMatrix::from_diagonal(make_input(input, 1, cutoff, seed, concentration, energy));
    }
    throw DomainError("unknown input family");
}

VerificationReport run_instance(const BoundSpec& spec, const SweepConfig& config, std::uint64_t seed) {
    const int n = n_modes(spec);
    VerificationReport report;
    try {
        report = std::visit(
            overloaded{
                [&](const ChannelSpec& channel) {
                    const TruncatedDist d =
                        make_input(config.input, n, config.cutoff, seed, config.concentration, config.input_energy);
                    return verify_channel(d, channel, config.tolerances);
                },
                [&](const WehrlMeasure&) {
                    if (n == 1) {
                        return verify_wehrl(make_wehrl_state(config.input, config.cutoff, seed, config.concentration,
                                                             config.input_energy),
                                            config.tolerances);
                    }
                    const TruncatedDist d =
                        make_input(config.input, n, config.cutoff, seed, config.concentration, config.input_energy);
                    return verify_wehrl(d, config.tolerances);
                },
            },
            spec);
    } catch (const std::exception& e) {
        report = VerificationReport{};
        report.family = describe(spec);
        report.n_modes = n;
        report.valid = false;
        report.flag = e.what();
    }
    report.instance = describe(spec) + " " + seed_label(config.input, seed);
    return report;
}

}  // namespace

int n_modes(const BoundSpec& spec) {
    return std::visit(overloaded{[](const ChannelSpec& c) { return c.n_modes; },
                                 [](const WehrlMeasure& w) { return w.n_modes; }},
                      spec);
}

std::string describe(const BoundSpec& spec) {
    return std::visit(overloaded{[](const ChannelSpec& c) { return c.describe(); },
                                 [](const WehrlMeasure& w) { return "wehrl(n=" + std::to_string(w.n_modes) + ")"; }},
                      spec);
}

LemmaParams lemma_params(const ChannelSpec& spec) {
    spec.validate();
    const double e = spec.env_energy;
    switch (spec.family) {
        case Family::thinning:
            return {spec.lambda, 0.0};
        case Family::attenuator:
            return {spec.lambda, (1.0 - spec.lambda) * e};
        case Family::amplifier:
            return {spec.kappa, (spec.kappa - 1.0) * (e + 1.0)};
        case Family::additive_noise:
            return {1.0, e};
        case Family::contravariant:
            return {spec.kappa - 1.0, (spec.kappa - 1.0) + spec.kappa * e};
    }
    throw DomainError("unknown channel family");
}

double single_copy_bound(const BoundSpec& spec, double entropy) {
    require_entropy(entropy);
    return std::visit(overloaded{[&](const ChannelSpec& c) { return bound_f(lemma_params(c), entropy); },
                                 [&](const WehrlMeasure&) { return wehrl_bound_f(entropy); }},
                      spec);
}

double lifted_bound(const BoundSpec& spec, double total_entropy) {
    require_entropy(total_entropy);
    const int n = n_modes(spec);
    if (n < 1) {
        throw DomainError("lifted_bound: n_modes must be positive");
    }
    return n * single_copy_bound(spec, total_entropy / n);
}

VerificationReport verify_thinning(const TruncatedDist& d, double lambda, const Tolerances& tol) {
    ChannelSpec spec;
    spec.family = Family::thinning;
    spec.lambda = lambda;
    spec.n_modes = d.n_modes();
    return verify_channel(d, spec, tol);
}

VerificationReport verify_channel(const TruncatedDist& d, const ChannelSpec& spec, const Tolerances& tol) {
    if (spec.n_modes != d.n_modes()) {
        throw DomainError("verify_channel: channel and input mode counts differ");
    }
    spec.validate();
    VerificationReport r;
    r.family = std::string(to_string(spec.family));
    r.instance = spec.describe();
    r.n_modes = d.n_modes();
    r.input_tail = d.tail_mass();

    const StochasticKernel kernel = build_channel(spec, d.cutoff());
    const TruncatedDist out = apply_multimode(kernel, d);
    r.max_leak = kernel.max_leak();
    r.output_tail = out.tail_mass();
    r.tail_entropy_bound = tail_entropy_bound(out);
    r.input_entropy = entropy(d, 1.0);
    r.output_entropy = entropy(out, 1.0);
    r.bound = lifted_bound(spec, r.input_entropy);
    finish(r, tol.classical_margin);

    if (r.input_tail > tol.max_tail) {
        r.valid = false;
        r.flag = "input tail " + std::to_string(r.input_tail) + " above threshold";
    } else if (r.output_tail > tol.max_tail) {
        r.valid = false;
        r.flag = "output tail " + std::to_string(r.output_tail) + " above threshold";
    }
    return r;
}

VerificationReport verify_wehrl(const DensityMatrix& rho, const Tolerances& tol, const QuadratureSpec& quad) {
    VerificationReport r;
    r.family = "wehrl";
    r.instance = "wehrl(n=1)";
    r.n_modes = 1;
    r.input_entropy = von_neumann_entropy(rho);
    try {
        const WehrlResult w =
            rho.is_diagonal() ? wehrl_entropy_diag(rho.diagonal(), quad) : wehrl_entropy_general(rho, quad);
        r.output_entropy = w.entropy;
        r.output_tail = w.neglected_mass;
    } catch (const NumericError& e) {
        r.valid = false;
        r.flag = e.what();
    }
    r.bound = lifted_bound(WehrlMeasure{1}, r.input_entropy);
    finish(r, tol.wehrl_margin);
    return r;
}

VerificationReport verify_wehrl(const TruncatedDist& d, const Tolerances& tol, const QuadratureSpec& quad) {
    VerificationReport r;
    r.family = "wehrl";
    r.instance = "wehrl(n=" + std::to_string(d.n_modes()) + ")";
    r.n_modes = d.n_modes();
    r.input_tail = d.tail_mass();
    r.input_entropy = entropy(d, 1.0);
    try {
        const WehrlResult w = wehrl_entropy_diag(d, quad);
        r.output_entropy = w.entropy;
        r.output_tail = w.neglected_mass;
    } catch (const NumericError& e) {
        r.valid = false;
        r.flag = e.what();
    }
    r.bound = lifted_bound(WehrlMeasure{d.n_modes()}, r.input_entropy);
    finish(r, tol.wehrl_margin);
    if (r.valid && r.input_tail > tol.max_tail) {
        r.valid = false;
        r.flag = "input tail " + std::to_string(r.input_tail) + " above threshold";
    }
    return r;
}

std::string_view to_string(InputFamily input) {
    switch (input) {
        case InputFamily::random:
            return "random";
        case InputFamily::perturbed_geometric:
            return "perturbed_geometric";
        case InputFamily::geometric:
            return "geometric";
        case InputFamily::point_mass:
            return "point_mass";
    }
    return "unknown";
}

InputFamily parse_input_family(std::string_view name) {
    for (InputFamily f :
         {InputFamily::random, InputFamily::perturbed_geometric, InputFamily::geometric, InputFamily::point_mass}) {
        if (name == to_string(f)) {
            return f;
        }
    }
    throw DomainError("unknown input family '" + std::string(name) + "'");
}

TruncatedDist make_input(InputFamily input, int n_modes, int cutoff, std::uint64_t seed, double concentration,
                         double energy) {
    switch (input) {
        case InputFamily::random:
            return random_dist(n_modes, cutoff, seed, concentration);
        case InputFamily::geometric:
            return geometric_product(energy, cutoff, n_modes);
        case InputFamily::perturbed_geometric: {
            const TruncatedDist base = geometric_product(energy, cutoff, n_modes);
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> jitter(0.5, 1.5);
            std::vector<double> probs(base.probs().begin(), base.probs().end());
            double total = 0.0;
            for (auto& p : probs) {
                p *= jitter(rng);
                total += p;
            }
            for (auto& p : probs) {
                p /= total;
            }
            return TruncatedDist(std::move(probs), n_modes, cutoff, 0.0);
        }
        case InputFamily::point_mass: {
            std::mt19937_64 rng(seed);
            std::uniform_int_distribution<int> level(0, cutoff);
            std::vector<int> index(static_cast<std::size_t>(n_modes));
            for (auto& k : index) {
                k = level(rng);
            }
            return point_mass(index, cutoff);
        }
    }
    throw DomainError("unknown input family");
}

std::vector<VerificationReport> sweep(const SweepConfig& config) {
    const std::size_t per_spec = config.seeds.size();
    const std::size_t total = config.specs.size() * per_spec;
    std::vector<VerificationReport> reports(total);
    const auto count = static_cast<std::int64_t>(total);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        reports[idx] = run_instance(config.specs[idx / per_spec], config, config.seeds[idx % per_spec]);
    }
    return reports;
}

SweepSummary summarize(std::span<const VerificationReport> reports) {
    SweepSummary s;
    s.total = reports.size();
    for (const auto& r : reports) {
        if (!r.valid) {
            ++s.flagged;
            continue;
        }
        ++s.valid;
        if (r.violation()) {
            ++s.violations;
        }
        s.min_margin = std::min(s.min_margin, r.margin);
    }
    return s;
}

}  // namespace cmoe
