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

#include "cmoe/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <random>

#include "cmoe/bounds.hpp"
#include "cmoe/errors.hpp"
#include "cmoe/specfun.hpp"

namespace cmoe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArmijo = 1e-4;
constexpr double kTiltTolerance = 1e-13;

using LogProbs = std::vector<double>;

bool in_support(double x) { return x > -kInf; }

double log_sum_exp(const LogProbs& x, double scale) {
    double hi = -kInf;
    for (double v : x) {
        if (in_support(v)) {
            hi = std::max(hi, scale * v);
        }
    }
    double sum = 0.0;
    for (double v : x) {
        if (in_support(v)) {
            sum += std::exp(scale * v - hi);
        }
    }
    return hi + std::log(sum);
}

// Normalized log-probabilities of p^beta.
LogProbs tilt(const LogProbs& x, double beta) {
    const double z = log_sum_exp(x, beta);
    LogProbs out(x.size(), -kInf);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (in_support(x[i])) {
            out[i] = beta * x[i] - z;
        }
    }
    return out;
}

double entropy_of(const LogProbs& logp) {
    double h = 0.0;
    for (double v : logp) {
        if (in_support(v)) {
            h -= std::exp(v) * v;
        }
    }
    return h;
}

// Variance of the unscaled log-weights x under the tilted distribution logq.
double tilted_variance(const LogProbs& x, const LogProbs& logq) {
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (in_support(logq[i])) {
            const double q = std::exp(logq[i]);
            mean += q * x[i];
            second += q * x[i] * x[i];
        }
    }
    return std::max(0.0, second - mean * mean);
}

LogProbs tilt_to_entropy(const LogProbs& x, double target) {
    std::size_t support = 0;
    double top = -kInf;
    for (double v : x) {
        if (in_support(v)) {
            ++support;
            top = std::max(top, v);
        }
    }
    if (support == 0) {
        throw DomainError("entropy_projection: empty support");
    }
    std::size_t at_top = 0;
    for (double v : x) {
        if (in_support(v) && v >= top - 1e-12 * std::max(1.0, std::abs(top))) {
            ++at_top;
        }
    }
    const double h_max = std::log(static_cast<double>(support));
    const double h_min = std::log(static_cast<double>(at_top));
    if (target > h_max + 1e-12 || target < h_min - 1e-12) {
        throw DomainError("entropy_projection: target " + std::to_string(target) + " outside reachable range [" +
                          std::to_string(h_min) + ", " + std::to_string(h_max) + "]");
    }
    if (target >= h_max - kTiltTolerance) {
        return tilt(x, 0.0);
    }
    if (target <= h_min + kTiltTolerance) {
        LogProbs out(x.size(), -kInf);
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (in_support(x[i]) && x[i] >= top - 1e-12 * std::max(1.0, std::abs(top))) {
                out[i] = -std::log(static_cast<double>(at_top));
            }
        }
        return out;
    }

    // H(beta) decreases from h_max at beta = 0 towards h_min.
    double lo = 0.0;
    double hi = 1.0;
    while (entropy_of(tilt(x, hi)) > target) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) {
            throw NumericError("entropy_projection: could not bracket the tilt parameter");
        }
    }
    double beta = 1.0 >= lo && 1.0 <= hi ? 1.0 : 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const LogProbs q = tilt(x, beta);
        const double diff = entropy_of(q) - target;
        if (std::abs(diff) < kTiltTolerance) {
            return q;
        }
        if (diff > 0.0) {
            lo = beta;
        } else {
            hi = beta;
        }
        const double slope = -beta * tilted_variance(x, q);
        double next = slope < 0.0 ? beta - diff / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
            return tilt(x, next);
        }
        beta = next;
    }
    return tilt(x, beta);
}

LogProbs to_log(std::span<const double> p) {
    LogProbs out(p.size());
    std::transform(p.begin(), p.end(), out.begin(), [](double v) { return v > 0.0 ? std::log(v) : -kInf; });
    return out;
}

TruncatedDist from_log(const LogProbs& logp, int n_modes, int cutoff) {
    std::vector<double> p(logp.size());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = in_support(logp[i]) ? std::exp(logp[i]) : 0.0;
        total += p[i];
    }
    for (auto& v : p) {
        v /= total;
    }
    return TruncatedDist(std::move(p), n_modes, cutoff, 0.0);
}

// w[..k..] = sum_m K(k, m) v[..m..] along every axis: the adjoint of apply_multimode.
std::vector<double> pull_back(const StochasticKernel& kernel, std::vector<double> v, int n_modes) {
    const auto lin = static_cast<std::size_t>(kernel.rows());
    const auto lout = static_cast<std::size_t>(kernel.cols());
    for (int axis = 0; axis < n_modes; ++axis) {
        std::size_t outer = 1;
        for (int a = 0; a < axis; ++a) {
            outer *= lin;
        }
        std::size_t inner = 1;
        for (int a = axis + 1; a < n_modes; ++a) {
            inner *= lout;
        }
        std::vector<double> next(outer * lin * inner, 0.0);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t k = 0; k < lin; ++k) {
                double* dst = next.data() + (o * lin + k) * inner;
                const auto row = kernel.row(static_cast<int>(k));
                for (std::size_t m = 0; m < lout; ++m) {
                    const double w = row[m];
                    if (w == 0.0) {
                        continue;
                    }
                    const double* src = v.data() + (o * lout + m) * inner;
                    for (std::size_t i = 0; i < inner; ++i) {
                        dst[i] += w * src[i];
                    }
                }
            }
        }
        v = std::move(next);
    }
    return v;
}

struct Descent {
    LogProbs logp;
    double objective = kInf;
    double gradient_norm = kInf;
    int iterations = 0;
    bool converged = false;
};

class Objective {
  public:
    Objective(const OptimizationProblem& problem)
        : problem_(problem), kernel_(build_channel(problem.channel, problem.cutoff)) {}

    const StochasticKernel& kernel() const { return kernel_; }

    TruncatedDist output(const LogProbs& logp) const {
        return apply_multimode(kernel_, from_log(logp, problem_.n_modes(), problem_.cutoff));
    }

    double value(const LogProbs& logp) const { return entropy(output(logp), 1.0); }

    // Gradient of the output entropy with respect to the input probabilities.
    std::vector<double> gradient(const LogProbs& logp) const {
        const TruncatedDist q = output(logp);
        std::vector<double> v(q.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = q[i] > 0.0 ? -1.0 - std::log(q[i]) : 0.0;
        }
        return pull_back(kernel_, std::move(v), problem_.n_modes());
    }

    Descent run(const LogProbs& start) const {
        Descent d;
        d.logp = tilt_to_entropy(start, problem_.target_entropy);
        d.objective = value(d.logp);
        std::deque<double> history{d.objective};
        for (d.iterations = 0; d.iterations < problem_.max_iterations; ++d.iterations) {
            const std::vector<double> g = gradient(d.logp);
            const std::vector<double> r = tangent_direction(d.logp, g);
            double norm2 = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (in_support(d.logp[i])) {
                    norm2 += std::exp(d.logp[i]) * r[i] * r[i];
                }
            }
            d.gradient_norm = std::sqrt(norm2);
            if (d.gradient_norm < problem_.gradient_tolerance) {
                d.converged = true;
                break;
            }

            std::optional<LogProbs> accepted;
            double accepted_value = d.objective;
            for (double t = 1.0; t > 1e-16; t *= 0.5) {
                LogProbs trial = d.logp;
                for (std::size_t i = 0; i < trial.size(); ++i) {
                    if (in_support(trial[i])) {
                        trial[i] -= t * r[i];
                    }
                }
                LogProbs candidate = tilt_to_entropy(trial, problem_.target_entropy);
                const double f = value(candidate);
                if (f <= d.objective - kArmijo * t * norm2) {
                    accepted = std::move(candidate);
                    accepted_value = f;
                    break;
                }
            }
            if (!accepted) {
                // No decrease representable in double precision.
                d.converged = d.gradient_norm < 1e-6;
                break;
            }
            d.logp = std::move(*accepted);
            d.objective = accepted_value;
            history.push_back(d.objective);
            if (static_cast<int>(history.size()) > problem_.stall_window) {
                const double old = history.front();
                history.pop_front();
                if (std::abs(old - d.objective) <= problem_.stall_tolerance * std::max(1.0, std::abs(d.objective))) {
                    d.converged = true;
                    ++d.iterations;
                    break;
                }
            }
        }
        return d;
    }

  private:
    // Component of g orthogonal (in the p-weighted inner product) to the constant vector and
    // to ln p, i.e. to the normals of the simplex and of the entropy constraint.
    static std::vector<double> tangent_direction(const LogProbs& logp, const std::vector<double>& g) {
        double eg = 0.0;
        double el = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (in_support(logp[i])) {
                const double p = std::exp(logp[i]);
                eg += p * g[i];
                el += p * logp[i];
            }
        }
        double cov = 0.0;
        double var = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (in_support(logp[i])) {
                const double p = std::exp(logp[i]);
                cov += p * (g[i] - eg) * (logp[i] - el);
                var += p * (logp[i] - el) * (logp[i] - el);
            }
        }
        const double beta = var > 1e-300 ? cov / var : 0.0;
        std::vector<double> r(g.size(), 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (in_support(logp[i])) {
                r[i] = (g[i] - eg) - beta * (logp[i] - el);
            }
        }
        return r;
    }

    const OptimizationProblem& problem_;
    StochasticKernel kernel_;
};

OptimizationResult finish_result(const OptimizationProblem& problem, const Objective& objective, const Descent& d) {
    OptimizationResult result;
    result.argmin = from_log(d.logp, problem.n_modes(), problem.cutoff);
    result.target_entropy = problem.target_entropy;
    result.input_entropy = entropy(result.argmin);
    result.output_entropy = objective.value(d.logp);
    result.bound = lifted_bound(problem.channel, result.input_entropy);
    result.gap = result.output_entropy - result.bound;
    const double per_mode = g_inv(problem.target_entropy / problem.n_modes());
    result.tv_to_geometric =
        total_variation(result.argmin, geometric_product(per_mode, problem.cutoff, problem.n_modes()));
    result.gradient_norm = d.gradient_norm;
    result.iterations = d.iterations;
    result.converged = d.converged;
    return result;
}

// The zero-entropy feasible set is the point masses; the best is found by enumeration.
OptimizationResult minimize_point_masses(const OptimizationProblem& problem, const Objective& objective) {
    const std::size_t size = dense_size(problem.n_modes(), problem.cutoff);
    Descent best;
    for (std::size_t i = 0; i < size; ++i) {
        LogProbs logp(size, -kInf);
        logp[i] = 0.0;
        const double f = objective.value(logp);
        if (f < best.objective) {
            best.logp = std::move(logp);
            best.objective = f;
        }
    }
    best.gradient_norm = 0.0;
    best.converged = true;
    OptimizationResult result = finish_result(problem, objective, best);
    result.start_kind = "point_mass_enumeration";
    return result;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Start 0: geometric product matched to the target. Start 1: linear ramp in total
// occupation. Remaining starts: seeded Dirichlet samples.
std::pair<LogProbs, std::string> make_start(const OptimizationProblem& problem, int index) {
    const int n = problem.n_modes();
    const int cutoff = problem.cutoff;
    if (index == 0) {
        const TruncatedDist geo = geometric_product(g_inv(problem.target_entropy / n), cutoff, n);
        return {to_log(geo.probs()), "geometric"};
    }
    if (index == 1) {
        const std::size_t size = dense_size(n, cutoff);
        const auto levels = static_cast<std::size_t>(cutoff) + 1;
        LogProbs x(size);
        for (std::size_t i = 0; i < size; ++i) {
            std::size_t total = 0;
            for (std::size_t rest = i; rest > 0; rest /= levels) {
                total += rest % levels;
            }
            x[i] = std::log(static_cast<double>(n * cutoff + 1 - static_cast<int>(total)));
        }
        return {x, "ramp"};
    }
    const TruncatedDist d = random_dist(n, cutoff, mix_seed(problem.seed, static_cast<std::uint64_t>(index)), 1.0);
    return {to_log(d.probs()), "random"};
}

}  // namespace

void OptimizationProblem::validate() const {
    channel.validate();
    if (cutoff < 0 || starts < 1 || max_iterations < 0) {
        throw DomainError("optimization problem has invalid cutoff, starts or iteration budget");
    }
    dense_size(n_modes(), cutoff);
    const double h_max = n_modes() * std::log(cutoff + 1.0);
    if (!(target_entropy >= 0.0) || target_entropy > h_max + 1e-12) {
        throw DomainError("target entropy " + std::to_string(target_entropy) + " is not achievable in [0, " +
                          std::to_string(h_max) + "]");
    }
}

TruncatedDist entropy_projection(const TruncatedDist& d, double target) {
    const double h_max = d.n_modes() * std::log(static_cast<double>(d.levels()));
    if (!(target >= 0.0) || target > h_max + 1e-12) {
        throw DomainError("entropy_projection: target outside [0, ln(box size)]");
    }
    if (target >= h_max - kTiltTolerance) {
        return uniform(d.n_modes(), d.cutoff());
    }
    return from_log(tilt_to_entropy(to_log(d.probs()), target), d.n_modes(), d.cutoff());
}

OptimizationResult minimize_from(const OptimizationProblem& problem, const TruncatedDist& start) {
    problem.validate();
    if (start.n_modes() != problem.n_modes() || start.cutoff() != problem.cutoff) {
        throw DomainError("minimize_from: start does not match the problem box");
    }
    const Objective objective(problem);
    if (problem.target_entropy == 0.0) {
        return minimize_point_masses(problem, objective);
    }
    const Descent d = objective.run(to_log(start.probs()));
    OptimizationResult result = finish_result(problem, objective, d);
    result.start_kind = "given";
    result.start_objectives = {d.objective};
    return result;
}

OptimizationResult minimize_output_entropy(const OptimizationProblem& problem) {
    problem.validate();
    const Objective objective(problem);
    if (problem.target_entropy == 0.0) {
        return minimize_point_masses(problem, objective);
    }

    std::vector<Descent> runs(static_cast<std::size_t>(problem.starts));
    std::vector<std::string> kinds(runs.size());
    std::vector<std::string> errors(runs.size());
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < problem.starts; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            auto [start, kind] = make_start(problem, i);
            kinds[idx] = std::move(kind);
            runs[idx] = objective.run(start);
        } catch (const std::exception& e) {
            errors[idx] = e.what();
        }
    }

    int best = -1;
    for (int i = 0; i < problem.starts; ++i) {
        const auto& r = runs[static_cast<std::size_t>(i)];
        if (errors[static_cast<std::size_t>(i)].empty() &&
            (best < 0 || r.objective < runs[static_cast<std::size_t>(best)].objective)) {
            best = i;
        }
    }
    if (best < 0) {
        throw NumericError("minimize_output_entropy: every start failed: " + errors.front());
    }
    OptimizationResult result = finish_result(problem, objective, runs[static_cast<std::size_t>(best)]);
    result.best_start = best;
    result.start_kind = kinds[static_cast<std::size_t>(best)];
    for (const auto& r : runs) {
        result.start_objectives.push_back(r.objective);
    }
    return result;
}

CounterexampleSummary counterexample_search(const ChannelSpec& channel, std::span<const double> entropy_grid,
                                            std::span<const std::uint64_t> seeds, int cutoff, int starts,
                                            double gap_tolerance) {
    if (seeds.empty()) {
        throw DomainError("counterexample_search: no seeds");
    }
    CounterexampleSummary summary;
    summary.min_gap = kInf;
    for (double target : entropy_grid) {
        GridOutcome point;
        point.target_entropy = target;
        point.min_gap = kInf;
        for (std::uint64_t seed : seeds) {
            OptimizationProblem problem;
            problem.channel = channel;
            problem.target_entropy = target;
            problem.cutoff = cutoff;
            problem.starts = starts;
            problem.seed = seed;
            problem.gap_tolerance = gap_tolerance;
            OptimizationResult r = minimize_output_entropy(problem);
            if (r.gap < point.min_gap) {
                point.min_gap = r.gap;
                point.best = std::move(r);
            }
        }
        if (point.min_gap < -gap_tolerance) {
            ++summary.candidates;
        }
        summary.min_gap = std::min(summary.min_gap, point.min_gap);
        summary.points.push_back(std::move(point));
    }
    return summary;
}

}  // namespace cmoe
