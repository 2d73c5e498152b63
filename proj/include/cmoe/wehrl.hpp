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

#include <complex>
#include <cstdint>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "cmoe/dist.hpp"

namespace cmoe {

/// Single-mode density matrix in the Fock basis |0>..|cutoff>.
class DensityMatrix {
  public:
    /// Validates Hermiticity, unit trace and positivity, each to 1e-12.
    explicit DensityMatrix(Eigen::MatrixXcd entries);

    static DensityMatrix from_diagonal(const TruncatedDist& d);
    /// Truncated thermal state. The truncated tail must be below 1e-12.
    static DensityMatrix thermal(double mean, int cutoff);
    static DensityMatrix fock(int k, int cutoff);
    /// |psi><psi| after normalizing psi.
    static DensityMatrix pure(const Eigen::VectorXcd& psi);
    /// Coherent state |alpha>, renormalized after truncation.
    static DensityMatrix coherent(std::complex<double> alpha, int cutoff);
    /// Haar-random pure state.
    static DensityMatrix random_pure(int cutoff, std::uint64_t seed);
    /// G G^dagger / tr with G a (cutoff+1) x rank complex Gaussian matrix.
    static DensityMatrix random_mixed(int cutoff, int rank, std::uint64_t seed);

    int cutoff() const { return static_cast<int>(entries_.rows()) - 1; }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    bool is_diagonal(double tolerance = 1e-14) const;
    /// Photon-number distribution (the diagonal).
    TruncatedDist diagonal() const;

  private:
    Eigen::MatrixXcd entries_;
};

struct QuadratureSpec {
    enum class Scheme { radial, planar };
    Scheme scheme = Scheme::radial;
    int radial_nodes = 512;
    int angular_nodes = 256;
    /// Upper limit of u = |z|^2. Chosen from the cutoff when absent.
    std::optional<double> u_max;
};

struct WehrlResult {
    double entropy = 0.0;
    /// Quadrature of the Husimi function over the integration domain.
    double normalization = 0.0;
    /// Exact Husimi mass beyond u_max (per mode, summed), given the truncated state.
    double neglected_mass = 0.0;
    double u_max = 0.0;
};

/// Integration limit for u = |z|^2 such that the Husimi mass of any state supported on
/// {0..cutoff} beyond it, weighted by the entropy integrand, is below 1e-15.
double default_u_max(int cutoff);

/// <z|rho|z> = e^{-|z|^2} sum_{j,k} rho_jk conj(z)^j z^k / sqrt(j! k!).
double husimi_q(const DensityMatrix& rho, std::complex<double> z);

/// Husimi function of a Fock-diagonal state (one or two modes) at u_i = |z_i|^2.
double husimi_q_diag(const TruncatedDist& p, std::span<const double> u);

/// Wehrl entropy of a Fock-diagonal state on one or two modes, by Gauss-Legendre
/// quadrature in u = |z|^2 per mode. Throws NumericError if the quadrature does not
/// reproduce the Husimi normalization.
WehrlResult wehrl_entropy_diag(const TruncatedDist& p, const QuadratureSpec& quad = {});

/// Wehrl entropy of a general single-mode state on a polar grid (Gauss-Legendre in u,
/// uniform in angle). OpenMP-parallel over radial nodes.
WehrlResult wehrl_entropy_general(const DensityMatrix& rho, const QuadratureSpec& quad = {});

/// -sum lambda ln lambda over the eigenvalues, with round-off negatives clamped to zero.
double von_neumann_entropy(const DensityMatrix& rho);

}  // namespace cmoe
