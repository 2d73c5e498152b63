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

#include "cmoe/wehrl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "cmoe/errors.hpp"
#include "cmoe/quadrature.hpp"

namespace cmoe {

namespace {

constexpr double kStateTolerance = 1e-12;
constexpr double kNormalizationTolerance = 1e-10;

std::vector<double> log_factorials(int n) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 2; k <= n; ++k) {
        out[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(k) - 1] + std::log(static_cast<double>(k));
    }
    return out;
}

// P(Poisson(u) <= k) for k = 0..n, i.e. the Husimi mass of |k><k| beyond u.
std::vector<double> poisson_cdf(double u, int n) {
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    double term = std::exp(-u);
    double sum = 0.0;
    if (term > 0.0) {
        for (int k = 0; k <= n; ++k) {
            if (k > 0) {
                term *= u / k;
            }
            sum += term;
            out[static_cast<std::size_t>(k)] = std::min(1.0, sum);
        }
        return out;
    }
    // e^{-u} underflows: sum in log space.
    const double log_u = std::log(u);
    double log_term = -u;
    double log_sum = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            log_term += log_u - std::log(static_cast<double>(k));
        }
        const double hi = std::max(log_sum, log_term);
        log_sum = hi + std::log(std::exp(log_sum - hi) + std::exp(log_term - hi));
        out[static_cast<std::size_t>(k)] = std::min(1.0, std::exp(log_sum));
    }
    return out;
}

double neglected_mass(std::span<const double> diag, double u_max) {
    const auto cdf = poisson_cdf(u_max, static_cast<int>(diag.size()) - 1);
    double mass = 0.0;
    for (std::size_t k = 0; k < diag.size(); ++k) {
        mass += diag[k] * cdf[k];
    }
    return mass;
}

double entropy_integrand(double q) { return q > 0.0 ? -q * std::log(q) : 0.0; }

// Poisson weights e^{-u} u^k / k! for every node and k = 0..cutoff, row-major by node.
Eigen::MatrixXd poisson_table(const std::vector<double>& nodes, int cutoff) {
    const auto lf = log_factorials(cutoff);
    Eigen::MatrixXd table(static_cast<Eigen::Index>(nodes.size()), cutoff + 1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double log_u = std::log(nodes[i]);
        for (int k = 0; k <= cutoff; ++k) {
            table(static_cast<Eigen::Index>(i), k) = std::exp(-nodes[i] + k * log_u - lf[static_cast<std::size_t>(k)]);
        }
    }
    return table;
}

void check_quadrature(const WehrlResult& r, double trace) {
    const double expected = trace - r.neglected_mass;
    if (std::abs(r.normalization - expected) > kNormalizationTolerance) {
        throw NumericError("Wehrl quadrature normalization " + std::to_string(r.normalization) + " differs from " +
                           std::to_string(expected));
    }
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        throw DomainError("density matrix must be square and non-empty");
    }
    if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kStateTolerance) {
        throw DomainError("density matrix is not Hermitian");
    }
    if (std::abs(entries_.trace() - std::complex<double>(1.0, 0.0)) > kStateTolerance) {
        throw DomainError("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigen-decomposition failed");
    }
    if (solver.eigenvalues().minCoeff() < -kStateTolerance) {
        throw DomainError("density matrix is not positive semidefinite");
    }
}

DensityMatrix DensityMatrix::from_diagonal(const TruncatedDist& d) {
    if (d.n_modes() != 1) {
        throw DomainError("from_diagonal: expected a single-mode distribution");
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d.levels(), d.levels());
    for (int k = 0; k <= d.cutoff(); ++k) {
        m(k, k) = d[static_cast<std::size_t>(k)];
    }
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::thermal(double mean, int cutoff) { return from_diagonal(geometric(mean, cutoff)); }

DensityMatrix DensityMatrix::fock(int k, int cutoff) { return from_diagonal(point_mass(k, cutoff)); }

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
    const double norm = psi.norm();
    if (!(norm > 0.0)) {
        throw DomainError("pure: zero vector");
    }
    const Eigen::VectorXcd v = psi / norm;
    Eigen::MatrixXcd m = v * v.adjoint();
    // Exact Hermitian symmetry.
    m = 0.5 * (m + m.adjoint()).eval();
    return DensityMatrix(std::move(m));
}

DensityMatrix DensityMatrix::coherent(std::complex<double> alpha, int cutoff) {
    if (cutoff < 0) {
        throw DomainError("coherent: cutoff must be nonnegative");
    }
    Eigen::VectorXcd psi(cutoff + 1);
    std::complex<double> amp = std::exp(-0.5 * std::norm(alpha));
    for (int k = 0; k <= cutoff; ++k) {
        if (k > 0) {
            amp *= alpha / std::sqrt(static_cast<double>(k));
        }
        psi(k) = amp;
    }
    return pure(psi);
}

DensityMatrix DensityMatrix::random_pure(int cutoff, std::uint64_t seed) {
    if (cutoff < 0) {
        throw DomainError("random_pure: cutoff must be nonnegative");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::VectorXcd psi(cutoff + 1);
    for (int k = 0; k <= cutoff; ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        psi(k) = {re, im};
    }
    return pure(psi);
}

DensityMatrix DensityMatrix::random_mixed(int cutoff, int rank, std::uint64_t seed) {
    if (cutoff < 0 || rank < 1) {
        throw DomainError("random_mixed: invalid cutoff or rank");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Eigen::MatrixXcd g(cutoff + 1, rank);
    for (int j = 0; j < rank; ++j) {
        for (int k = 0; k <= cutoff; ++k) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(k, j) = {re, im};
        }
    }
    Eigen::MatrixXcd m = g * g.adjoint();
    m /= m.trace().real();
    m = 0.5 * (m + m.adjoint()).eval();
    return DensityMatrix(std::move(m));
}

bool DensityMatrix::is_diagonal(double tolerance) const {
    Eigen::MatrixXcd off = entries_;
    off.diagonal().setZero();
    return off.cwiseAbs().maxCoeff() <= tolerance;
}

TruncatedDist DensityMatrix::diagonal() const {
    std::vector<double> probs(static_cast<std::size_t>(entries_.rows()));
    for (Eigen::Index k = 0; k < entries_.rows(); ++k) {
        probs[static_cast<std::size_t>(k)] = std::max(0.0, entries_(k, k).real());
    }
    return TruncatedDist::from_probs(std::move(probs), 1, cutoff());
}

double default_u_max(int cutoff) {
    if (cutoff < 0) {
        throw DomainError("default_u_max: cutoff must be nonnegative");
    }
    const double n = static_cast<double>(cutoff);
    double u = n + 20.0 * std::sqrt(n) + 20.0;
    // -Q ln Q is at most ~ (u + 100) Q out there.
    while ((u + 100.0) * poisson_cdf(u, cutoff).back() > 1e-15) {
        u += 5.0;
    }
    return u;
}

double husimi_q(const DensityMatrix& rho, std::complex<double> z) {
    const int n = rho.cutoff();
    // coeff_k = <k|z> = e^{-|z|^2/2} z^k / sqrt(k!)
    Eigen::VectorXcd coeff(n + 1);
    std::complex<double> c = std::exp(-0.5 * std::norm(z));
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            c *= z / std::sqrt(static_cast<double>(k));
        }
        coeff(k) = c;
    }
    const std::complex<double> q = coeff.dot(rho.entries() * coeff);
    return std::max(0.0, q.real());
}

double husimi_q_diag(const TruncatedDist& p, std::span<const double> u) {
    if (static_cast<int>(u.size()) != p.n_modes() || p.n_modes() > 2) {
        throw DomainError("husimi_q_diag: supports one or two modes with one coordinate per mode");
    }
    const auto lf = log_factorials(p.cutoff());
    auto weight = [&](double x, int k) {
        return std::exp(-x + (k == 0 ? 0.0 : k * std::log(x)) - lf[static_cast<std::size_t>(k)]);
    };
    double q = 0.0;
    if (p.n_modes() == 1) {
        for (int k = 0; k <= p.cutoff(); ++k) {
            q += p[static_cast<std::size_t>(k)] * weight(u[0], k);
        }
        return q;
    }
    const auto levels = static_cast<std::size_t>(p.levels());
    for (int j = 0; j <= p.cutoff(); ++j) {
        const double wj = weight(u[0], j);
        for (int k = 0; k <= p.cutoff(); ++k) {
            q += p[static_cast<std::size_t>(j) * levels + static_cast<std::size_t>(k)] * wj * weight(u[1], k);
        }
    }
    return q;
}

WehrlResult wehrl_entropy_diag(const TruncatedDist& p, const QuadratureSpec& quad) {
    if (p.n_modes() > 2) {
        throw DomainError("wehrl_entropy_diag: at most two modes are supported");
    }
    if (p.tail_mass() > kEntropyTailThreshold) {
        throw TruncationError("wehrl_entropy_diag: tail mass " + std::to_string(p.tail_mass()) + " too large");
    }
    if (quad.radial_nodes < 16) {
        throw DomainError("quadrature needs at least 16 nodes per dimension");
    }
    WehrlResult result;
    result.u_max = quad.u_max ? *quad.u_max : default_u_max(p.cutoff());
    const QuadratureRule rule = radial_rule(quad.radial_nodes, result.u_max);
    const Eigen::MatrixXd table = poisson_table(rule.nodes, p.cutoff());
    const auto nodes = static_cast<Eigen::Index>(rule.nodes.size());
    const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), nodes);

    double trace = 0.0;
    for (double x : p.probs()) {
        trace += x;
    }

    if (p.n_modes() == 1) {
        const Eigen::Map<const Eigen::VectorXd> probs(p.probs().data(), p.levels());
        const Eigen::VectorXd q = table * probs;
        double h = 0.0;
        for (Eigen::Index i = 0; i < nodes; ++i) {
            h += w(i) * entropy_integrand(q(i));
        }
        result.entropy = h;
        result.normalization = w.dot(q);
        result.neglected_mass = neglected_mass(p.probs(), result.u_max);
    } else {
        // Q(u1, u2) = sum_jk p_jk pi_j(u1) pi_k(u2), one matrix product per axis.
        const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> probs(
            p.probs().data(), p.levels(), p.levels());
        const Eigen::MatrixXd q = table * probs * table.transpose();
        double h = 0.0;
        double norm = 0.0;
#pragma omp parallel for reduction(+ : h, norm) schedule(static)
        for (Eigen::Index i = 0; i < nodes; ++i) {
            double hi = 0.0;
            double ni = 0.0;
            for (Eigen::Index j = 0; j < nodes; ++j) {
                hi += w(j) * entropy_integrand(q(i, j));
                ni += w(j) * q(i, j);
            }
            h += w(i) * hi;
            norm += w(i) * ni;
        }
        result.entropy = h;
        result.normalization = norm;
        // Mass outside the square [0, U]^2 by inclusion-exclusion over the marginals.
        const TruncatedDist m0 = marginal(p, 0);
        const TruncatedDist m1 = marginal(p, 1);
        const auto cdf = poisson_cdf(result.u_max, p.cutoff());
        double both = 0.0;
        for (std::size_t j = 0; j < static_cast<std::size_t>(p.levels()); ++j) {
            for (std::size_t k = 0; k < static_cast<std::size_t>(p.levels()); ++k) {
                both += probs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) * cdf[j] * cdf[k];
            }
        }
        result.neglected_mass =
            neglected_mass(m0.probs(), result.u_max) + neglected_mass(m1.probs(), result.u_max) - both;
    }
    check_quadrature(result, trace);
    return result;
}

WehrlResult wehrl_entropy_general(const DensityMatrix& rho, const QuadratureSpec& quad) {
    if (quad.radial_nodes < 16 || quad.angular_nodes < 16) {
        throw DomainError("quadrature needs at least 16 nodes per dimension");
    }
    const int n = rho.cutoff();
    WehrlResult result;
    result.u_max = quad.u_max ? *quad.u_max : default_u_max(n);
    const QuadratureRule rule = radial_rule(quad.radial_nodes, result.u_max);
    const int angles = quad.angular_nodes;
    const auto lf = log_factorials(n);
    const Eigen::MatrixXcd& r = rho.entries();

    // Unit phases e^{i d theta_l} for d = 0..n.
    std::vector<std::complex<double>> phase(static_cast<std::size_t>(angles) * static_cast<std::size_t>(n + 1));
    for (int l = 0; l < angles; ++l) {
        const double theta = 2.0 * std::numbers::pi * l / angles;
        for (int d = 0; d <= n; ++d) {
            phase[static_cast<std::size_t>(l) * static_cast<std::size_t>(n + 1) + static_cast<std::size_t>(d)] =
                std::polar(1.0, d * theta);
        }
    }

    double h = 0.0;
    double norm = 0.0;
    const auto radial = static_cast<std::int64_t>(rule.nodes.size());
#pragma omp parallel for reduction(+ : h, norm) schedule(dynamic, 8)
    for (std::int64_t i = 0; i < radial; ++i) {
        const double u = rule.nodes[static_cast<std::size_t>(i)];
        const double log_u = std::log(u);
        // a_k = e^{-u/2} u^{k/2} / sqrt(k!)
        std::vector<double> a(static_cast<std::size_t>(n) + 1);
        for (int k = 0; k <= n; ++k) {
            a[static_cast<std::size_t>(k)] = std::exp(-0.5 * u + 0.5 * k * log_u - 0.5 * lf[static_cast<std::size_t>(k)]);
        }
        // Fourier coefficients c_d = sum_{k - j = d} rho_jk a_j a_k, d >= 0.
        std::vector<std::complex<double>> c(static_cast<std::size_t>(n) + 1, 0.0);
        for (int d = 0; d <= n; ++d) {
            for (int j = 0; j + d <= n; ++j) {
                c[static_cast<std::size_t>(d)] +=
                    r(j, j + d) * a[static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(j + d)];
            }
        }
        double hi = 0.0;
        double ni = 0.0;
        for (int l = 0; l < angles; ++l) {
            const std::complex<double>* ph = &phase[static_cast<std::size_t>(l) * static_cast<std::size_t>(n + 1)];
            double q = c[0].real();
            for (int d = 1; d <= n; ++d) {
                q += 2.0 * (c[static_cast<std::size_t>(d)] * ph[d]).real();
            }
            q = std::max(0.0, q);
            hi += entropy_integrand(q);
            ni += q;
        }
        const double wi = rule.weights[static_cast<std::size_t>(i)] / angles;
        h += wi * hi;
        norm += wi * ni;
    }
    result.entropy = h;
    result.normalization = norm;
    const TruncatedDist diag = rho.diagonal();
    result.neglected_mass = neglected_mass(diag.probs(), result.u_max);
    check_quadrature(result, rho.entries().trace().real());
    return result;
}

double von_neumann_entropy(const DensityMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho.entries(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("von_neumann_entropy: eigen-decomposition failed");
    }
    double s = 0.0;
    for (double lambda : solver.eigenvalues()) {
        if (lambda > 0.0) {
            s -= lambda * std::log(lambda);
        }
    }
    return s;
}

}  // namespace cmoe
