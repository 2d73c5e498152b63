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

#include "cmoe/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "cmoe/errors.hpp"

namespace cmoe {

namespace {

// ln k! for k = 0..n.
std::vector<double> log_factorials(int n) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 2; k <= n; ++k) {
        out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k) - 1] + std::log(static_cast<double>(k));
    }
    return out;
}

// k * ln(x) with 0 * ln(0) = 0.
double power_log(int k, double log_x) { return k == 0 ? 0.0 : k * log_x; }

void check_cutoffs(int in_cutoff, int out_cutoff) {
    if (in_cutoff < 0 || out_cutoff < 0) {
        throw DomainError("kernel cutoffs must be nonnegative");
    }
    if ((static_cast<std::size_t>(in_cutoff) + 1) * (static_cast<std::size_t>(out_cutoff) + 1) > kMaxDenseEntries) {
        throw ResourceError("kernel of size " + std::to_string(in_cutoff + 1) + "x" + std::to_string(out_cutoff + 1) +
                            " exceeds the entry budget");
    }
}

void check_unit_interval(double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError("transmissivity must lie in [0, 1], got " + std::to_string(lambda));
    }
}

void check_gain(double kappa) {
    if (!(kappa >= 1.0) || !std::isfinite(kappa)) {
        throw DomainError("gain must be finite and >= 1, got " + std::to_string(kappa));
    }
}

// Negative-binomial style kernels share the prefactor kappa^-(n+1) and ratio (1 - 1/kappa).
template <typename LogCoefficient>
StochasticKernel squeezing_kernel(double kappa, int in_cutoff, int out_cutoff, bool output_on_system,
                                  LogCoefficient log_coefficient) {
    const int rows = in_cutoff + 1;
    const int cols = out_cutoff + 1;
    std::vector<double> matrix(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
    const double log_kappa = std::log(kappa);
    const double log_ratio = kappa == 1.0 ? -std::numeric_limits<double>::infinity() : std::log1p(-1.0 / kappa);
    for (int n = 0; n < rows; ++n) {
        for (int m = 0; m < cols; ++m) {
            const int excess = output_on_system ? m - n : m;
            if (excess < 0) {
                continue;
            }
            const double log_p = log_coefficient(n, m) + power_log(excess, log_ratio) - (n + 1) * log_kappa;
            matrix[static_cast<std::size_t>(n) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(m)] =
                std::exp(log_p);
        }
    }
    return StochasticKernel(in_cutoff, out_cutoff, std::move(matrix));
}

}  // namespace

std::string_view to_string(Family family) {
    switch (family) {
        case Family::thinning:
            return "thinning";
        case Family::attenuator:
            return "attenuator";
        case Family::amplifier:
            return "amplifier";
        case Family::additive_noise:
            return "additive_noise";
        case Family::contravariant:
            return "contravariant";
    }
    return "unknown";
}

Family parse_family(std::string_view name) {
    for (Family f : {Family::thinning, Family::attenuator, Family::amplifier, Family::additive_noise,
                     Family::contravariant}) {
        if (name == to_string(f)) {
            return f;
        }
    }
    throw DomainError("unknown channel family '" + std::string(name) + "'");
}

void ChannelSpec::validate() const {
    if (n_modes < 1) {
        throw DomainError("n_modes must be positive");
    }
    if (!(env_energy >= 0.0) || !std::isfinite(env_energy)) {
        throw DomainError("environment energy must be finite and nonnegative");
    }
    switch (family) {
        case Family::thinning:
            if (env_energy != 0.0) {
                throw DomainError("thinning has no environment energy");
            }
            check_unit_interval(lambda);
            break;
        case Family::attenuator:
            check_unit_interval(lambda);
            break;
        case Family::amplifier:
        case Family::contravariant:
            check_gain(kappa);
            break;
        case Family::additive_noise:
            break;
    }
}

double ChannelSpec::output_energy(double input_energy) const {
    switch (family) {
        case Family::thinning:
            return lambda * input_energy;
        case Family::attenuator:
            return lambda * input_energy + (1.0 - lambda) * env_energy;
        case Family::amplifier:
            return kappa * input_energy + (kappa - 1.0) * (env_energy + 1.0);
        case Family::additive_noise:
            return input_energy + env_energy;
        case Family::contravariant:
            return (kappa - 1.0) * (input_energy + 1.0) + kappa * env_energy;
    }
    return 0.0;
}

std::string ChannelSpec::describe() const {
    std::ostringstream os;
    os << to_string(family) << '(';
    switch (family) {
        case Family::thinning:
            os << "lambda=" << lambda;
            break;
        case Family::attenuator:
            os << "lambda=" << lambda << ",E=" << env_energy;
            break;
        case Family::amplifier:
        case Family::contravariant:
            os << "kappa=" << kappa << ",E=" << env_energy;
            break;
        case Family::additive_noise:
            os << "E=" << env_energy;
            break;
    }
    os << ",n=" << n_modes << ')';
    return os.str();
}

StochasticKernel::StochasticKernel(int in_cutoff, int out_cutoff, std::vector<double> matrix)
    : in_cutoff_(in_cutoff), out_cutoff_(out_cutoff), matrix_(std::move(matrix)) {
    check_cutoffs(in_cutoff, out_cutoff);
    if (matrix_.size() != static_cast<std::size_t>(rows()) * static_cast<std::size_t>(cols())) {
        throw DomainError("kernel matrix has the wrong number of entries");
    }
    leak_.resize(static_cast<std::size_t>(rows()));
    for (int n = 0; n < rows(); ++n) {
        double sum = 0.0;
        for (double p : row(n)) {
            if (!(p >= 0.0)) {
                throw DomainError("kernel entries must be nonnegative");
            }
            sum += p;
        }
        leak_[static_cast<std::size_t>(n)] = std::max(0.0, 1.0 - sum);
    }
}

StochasticKernel::StochasticKernel(int in_cutoff, int out_cutoff, std::vector<double> matrix, std::vector<double> leak)
    : in_cutoff_(in_cutoff), out_cutoff_(out_cutoff), matrix_(std::move(matrix)), leak_(std::move(leak)) {
    check_cutoffs(in_cutoff, out_cutoff);
    if (matrix_.size() != static_cast<std::size_t>(rows()) * static_cast<std::size_t>(cols()) ||
        leak_.size() != static_cast<std::size_t>(rows())) {
        throw DomainError("kernel matrix or leak vector has the wrong number of entries");
    }
    for (int n = 0; n < rows(); ++n) {
        double sum = leak_[static_cast<std::size_t>(n)];
        if (!(sum >= 0.0)) {
            throw DomainError("kernel leaks must be nonnegative");
        }
        for (double p : row(n)) {
            if (!(p >= 0.0)) {
                throw DomainError("kernel entries must be nonnegative");
            }
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12 + 4.0 * std::numeric_limits<double>::epsilon() * cols()) {
            throw DomainError("kernel row " + std::to_string(n) + " is not stochastic");
        }
    }
}

StochasticKernel StochasticKernel::identity(int cutoff) {
    check_cutoffs(cutoff, cutoff);
    const auto size = static_cast<std::size_t>(cutoff) + 1;
    std::vector<double> matrix(size * size, 0.0);
    for (std::size_t i = 0; i < size; ++i) {
        matrix[i * size + i] = 1.0;
    }
    return StochasticKernel(cutoff, cutoff, std::move(matrix), std::vector<double>(size, 0.0));
}

double StochasticKernel::max_leak() const {
    return leak_.empty() ? 0.0 : *std::max_element(leak_.begin(), leak_.end());
}

StochasticKernel thinning_kernel(double lambda, int in_cutoff, int out_cutoff) {
    check_unit_interval(lambda);
    check_cutoffs(in_cutoff, out_cutoff);
    const int rows = in_cutoff + 1;
    const int cols = out_cutoff + 1;
    const auto log_fact = log_factorials(in_cutoff);
    const double log_keep = std::log(lambda);
    const double log_drop = std::log1p(-lambda);
    std::vector<double> matrix(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
    std::vector<double> leak(static_cast<std::size_t>(rows), 0.0);
    std::vector<double> full(static_cast<std::size_t>(rows));
    for (int n = 0; n < rows; ++n) {
        double sum = 0.0;
        for (int m = 0; m <= n; ++m) {
            const double log_p = log_fact[static_cast<std::size_t>(n)] - log_fact[static_cast<std::size_t>(m)] -
                                 log_fact[static_cast<std::size_t>(n - m)] + power_log(m, log_keep) +
                                 power_log(n - m, log_drop);
            full[static_cast<std::size_t>(m)] = std::exp(log_p);
            sum += full[static_cast<std::size_t>(m)];
        }
        // Exact row has unit mass; remove the rounding drift of the log-space evaluation.
        double kept = 0.0;
        for (int m = 0; m <= std::min(n, out_cutoff); ++m) {
            const double p = full[static_cast<std::size_t>(m)] / sum;
            matrix[static_cast<std::size_t>(n) * static_cast<std::size_t>(cols) + static_cast<std::size_t>(m)] = p;
            kept += p;
        }
        leak[static_cast<std::size_t>(n)] = n <= out_cutoff ? 0.0 : std::max(0.0, 1.0 - kept);
    }
    return StochasticKernel(in_cutoff, out_cutoff, std::move(matrix), std::move(leak));
}

StochasticKernel ql_attenuator_kernel(double lambda, int in_cutoff, int out_cutoff) {
    return thinning_kernel(lambda, in_cutoff, out_cutoff);
}

StochasticKernel ql_amplifier_kernel(double kappa, int in_cutoff, int out_cutoff) {
    check_gain(kappa);
    check_cutoffs(in_cutoff, out_cutoff);
    const auto log_fact = log_factorials(out_cutoff);
    return squeezing_kernel(kappa, in_cutoff, out_cutoff, true, [&](int n, int m) {
        return log_fact[static_cast<std::size_t>(m)] - log_fact[static_cast<std::size_t>(n)] -
               log_fact[static_cast<std::size_t>(m - n)];
    });
}

StochasticKernel ql_contravariant_kernel(double kappa, int in_cutoff, int out_cutoff) {
    check_gain(kappa);
    check_cutoffs(in_cutoff, out_cutoff);
    const auto log_fact = log_factorials(in_cutoff + out_cutoff);
    return squeezing_kernel(kappa, in_cutoff, out_cutoff, false, [&](int n, int m) {
        return log_fact[static_cast<std::size_t>(n + m)] - log_fact[static_cast<std::size_t>(n)] -
               log_fact[static_cast<std::size_t>(m)];
    });
}

ChannelDecomposition decompose(const ChannelSpec& spec) {
    spec.validate();
    const double e = spec.env_energy;
    ChannelDecomposition out;
    switch (spec.family) {
        case Family::thinning:
            out.attenuation = spec.lambda;
            break;
        case Family::attenuator:
            out.gain = 1.0 + (1.0 - spec.lambda) * e;
            out.attenuation = spec.lambda / out.gain;
            break;
        case Family::amplifier:
            out.gain = 1.0 + (spec.kappa - 1.0) * (e + 1.0);
            out.attenuation = spec.kappa / out.gain;
            break;
        case Family::additive_noise:
            out.gain = 1.0 + e;
            out.attenuation = 1.0 / out.gain;
            break;
        case Family::contravariant:
            out.contravariant = true;
            out.gain = spec.kappa * (1.0 + e);
            // At unit gain the output is the vacuum whatever the attenuation.
            out.attenuation = out.gain == 1.0 ? 1.0 : (spec.kappa - 1.0) / (out.gain - 1.0);
            break;
    }
    return out;
}

namespace {

StochasticKernel build_with_cutoff(const ChannelDecomposition& parts, int in_cutoff, int out_cutoff) {
    if (!parts.contravariant && parts.gain == 1.0) {
        return ql_attenuator_kernel(parts.attenuation, in_cutoff, out_cutoff);
    }
    const StochasticKernel second = parts.contravariant ? ql_contravariant_kernel(parts.gain, in_cutoff, out_cutoff)
                                                        : ql_amplifier_kernel(parts.gain, in_cutoff, out_cutoff);
    if (parts.attenuation == 1.0) {
        return second;
    }
    return compose(ql_attenuator_kernel(parts.attenuation, in_cutoff, in_cutoff), second);
}

}  // namespace

int default_output_cutoff(const ChannelSpec& spec, int in_cutoff, double max_leak) {
    const ChannelDecomposition parts = decompose(spec);
    if (!parts.contravariant && parts.gain == 1.0) {
        return in_cutoff;
    }
    const double k = parts.gain;
    const double n = static_cast<double>(in_cutoff);
    int out_cutoff = static_cast<int>(std::ceil(k * n + 10.0 * std::sqrt(k * n + k)));
    // The largest input occupation leaks the most; widen until it is contained.
    for (int attempt = 0; attempt < 64; ++attempt) {
        const StochasticKernel kernel = build_with_cutoff(parts, in_cutoff, out_cutoff);
        if (kernel.max_leak() < max_leak) {
            return out_cutoff;
        }
        out_cutoff = out_cutoff + std::max(8, out_cutoff / 4);
    }
    throw ResourceError("could not find an output cutoff with leak below " + std::to_string(max_leak));
}

StochasticKernel build_channel(const ChannelSpec& spec, int in_cutoff, std::optional<int> out_cutoff) {
    const ChannelDecomposition parts = decompose(spec);
    const int out = out_cutoff ? *out_cutoff : default_output_cutoff(spec, in_cutoff);
    return build_with_cutoff(parts, in_cutoff, out);
}

StochasticKernel compose(const StochasticKernel& first, const StochasticKernel& second) {
    if (first.out_cutoff() != second.in_cutoff()) {
        throw DomainError("compose: output cutoff " + std::to_string(first.out_cutoff()) +
                          " does not match input cutoff " + std::to_string(second.in_cutoff()));
    }
    const int rows = first.rows();
    const int mid = first.cols();
    const int cols = second.cols();
    std::vector<double> matrix(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
    std::vector<double> leak(static_cast<std::size_t>(rows), 0.0);
    for (int n = 0; n < rows; ++n) {
        double* out = matrix.data() + static_cast<std::size_t>(n) * static_cast<std::size_t>(cols);
        double lost = first.leak(n);
        for (int j = 0; j < mid; ++j) {
            const double w = first(n, j);
            if (w == 0.0) {
                continue;
            }
            const auto r = second.row(j);
            for (int m = 0; m < cols; ++m) {
                out[m] += w * r[static_cast<std::size_t>(m)];
            }
            lost += w * second.leak(j);
        }
        leak[static_cast<std::size_t>(n)] = lost;
    }
    return StochasticKernel(first.in_cutoff(), second.out_cutoff(), std::move(matrix), std::move(leak));
}

TruncatedDist apply(const StochasticKernel& kernel, const TruncatedDist& d) {
    if (d.n_modes() != 1) {
        throw DomainError("apply: expected a single-mode distribution, use apply_multimode");
    }
    if (d.cutoff() > kernel.in_cutoff()) {
        throw DomainError("apply: distribution cutoff " + std::to_string(d.cutoff()) + " exceeds kernel input cutoff " +
                          std::to_string(kernel.in_cutoff()));
    }
    std::vector<double> out(static_cast<std::size_t>(kernel.cols()), 0.0);
    double tail = d.tail_mass();
    for (int n = 0; n <= d.cutoff(); ++n) {
        const double p = d[static_cast<std::size_t>(n)];
        if (p == 0.0) {
            continue;
        }
        const auto r = kernel.row(n);
        for (std::size_t m = 0; m < out.size(); ++m) {
            out[m] += p * r[m];
        }
        tail += p * kernel.leak(n);
    }
    return TruncatedDist(std::move(out), 1, kernel.out_cutoff(), tail);
}

TruncatedDist apply_multimode(const StochasticKernel& kernel, const TruncatedDist& d) {
    if (d.cutoff() > kernel.in_cutoff()) {
        throw DomainError("apply_multimode: distribution cutoff exceeds kernel input cutoff");
    }
    const int n_modes = d.n_modes();
    const auto lin = static_cast<std::size_t>(d.levels());
    const auto lout = static_cast<std::size_t>(kernel.cols());
    dense_size(n_modes, kernel.out_cutoff());

    std::vector<double> current(d.probs().begin(), d.probs().end());
    double tail = d.tail_mass();
    for (int axis = 0; axis < n_modes; ++axis) {
        // Axes before `axis` already have lout levels, those after still have lin.
        std::size_t outer = 1;
        for (int a = 0; a < axis; ++a) {
            outer *= lout;
        }
        std::size_t inner = 1;
        for (int a = axis + 1; a < n_modes; ++a) {
            inner *= lin;
        }

        std::vector<double> mass(lin, 0.0);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t k = 0; k < lin; ++k) {
                const double* src = current.data() + (o * lin + k) * inner;
                for (std::size_t i = 0; i < inner; ++i) {
                    mass[k] += src[i];
                }
            }
        }
        for (std::size_t k = 0; k < lin; ++k) {
            tail += mass[k] * kernel.leak(static_cast<int>(k));
        }

        std::vector<double> next(outer * lout * inner, 0.0);
        const auto work = static_cast<std::int64_t>(outer * lout);
#pragma omp parallel for schedule(static)
        for (std::int64_t job = 0; job < work; ++job) {
            const auto o = static_cast<std::size_t>(job) / lout;
            const auto m = static_cast<std::size_t>(job) % lout;
            double* dst = next.data() + (o * lout + m) * inner;
            for (std::size_t k = 0; k < lin; ++k) {
                const double w = kernel(static_cast<int>(k), static_cast<int>(m));
                if (w == 0.0) {
                    continue;
                }
                const double* src = current.data() + (o * lin + k) * inner;
                for (std::size_t i = 0; i < inner; ++i) {
                    dst[i] += w * src[i];
                }
            }
        }
        current = std::move(next);
    }
    return TruncatedDist(std::move(current), n_modes, kernel.out_cutoff(), tail);
}

TruncatedDist apply_multimode(const ChannelSpec& spec, const TruncatedDist& d) {
    if (spec.n_modes != d.n_modes()) {
        throw DomainError("apply_multimode: channel has " + std::to_string(spec.n_modes) +
                          " modes but distribution has " + std::to_string(d.n_modes()));
    }
    return apply_multimode(build_channel(spec, d.cutoff()), d);
}

std::string kernel_to_csv(const StochasticKernel& kernel, std::string_view label) {
    std::ostringstream os;
    os << "# cmoe-kernel-csv v1";
    if (!label.empty()) {
        os << ' ' << label;
    }
    os << '\n' << "n";
    for (int m = 0; m < kernel.cols(); ++m) {
        os << ",p" << m;
    }
    os << ",leak\n" << std::setprecision(17);
    for (int n = 0; n < kernel.rows(); ++n) {
        os << n;
        for (double p : kernel.row(n)) {
            os << ',' << p;
        }
        os << ',' << kernel.leak(n) << '\n';
    }
    return os.str();
}

}  // namespace cmoe
