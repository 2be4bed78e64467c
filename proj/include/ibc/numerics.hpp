// SPDX-License-Identifier: Apache-2.0
//
// ibc-transceivers: transceiver design for the two-cell MIMO interfering
// broadcast channel.
// Copyright (C) 2026 The ibc-transceivers authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef IBC_NUMERICS_HPP
#define IBC_NUMERICS_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ibc {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Raised for inputs that violate a dimension or parameter contract.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a channel draw makes a null space of the wrong dimension.
class DegenerateChannel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on NaN/Inf or other numerical breakdown.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace numerics {

// Assertion tolerances for orthonormality and null-space residuals.
inline constexpr double kTolOrth = 1e-8;
inline constexpr double kTolNull = 1e-8;

// Relative slack accepted when comparing a transmit power against its budget
// inside the bisection (rounding of an exactly-binding allocation).
inline constexpr double kPowerSlack = 1e-12;

struct SpreadMode {
  enum class Kind { kDeterministic, kSeeded };
  Kind kind = Kind::kDeterministic;
  std::uint64_t seed = 0;

  static SpreadMode deterministic() { return {}; }
  static SpreadMode seeded(std::uint64_t s) { return {Kind::kSeeded, s}; }
};

/// M x N_p matrix with orthonormal columns. Deterministic mode truncates the
/// identity; seeded mode orthonormalizes a seeded complex Gaussian matrix.
CMat spreading_matrix(int M, int Np, SpreadMode mode = SpreadMode::deterministic());

/// Orthonormal basis B (r x dim) with B^H A = 0, taken from the left singular
/// vectors of the dim smallest singular values (ascending). Throws
/// DegenerateChannel if A is rank deficient or its left null space has fewer
/// than `dim` dimensions.
CMat left_null_basis(const CMat& A, int dim);

/// Orthonormal basis V (c x dim) with A V = 0. Equivalent to
/// left_null_basis(A^H, dim).
CMat right_null_basis(const CMat& A, int dim);

/// Numerical rank with the relative threshold used by the null-space routines.
int numerical_rank(const CMat& A);

struct WaterFillResult {
  RVec allocation;
  std::optional<double> water_level;  // absent when nothing is allocated
  bool degenerate = false;            // positive budget but every gain zero
};

/// Maximizes sum_j log(1 + gains[j] * phi_j / noise_var) over phi >= 0 with
/// sum(phi) <= budget. Gains are power gains (squared singular values).
WaterFillResult water_fill(const RVec& gains, double budget, double noise_var);

/// sum_j log2(1 + gains[j] * alloc[j] / noise_var).
double water_fill_objective(const RVec& gains, const RVec& alloc, double noise_var);

struct Bisection {
  double mu = 0.0;            // upper bracket endpoint, always feasible
  double lower = 0.0;
  double upper = 0.0;
  double initial_lower = 0.0; // bracket before bisection; both 0 on the mu=0 shortcut
  double initial_upper = 0.0;
  int steps = 0;
  double power = 0.0;         // power_of_mu(mu)
};

/// Finds the multiplier for a nonincreasing power curve. Returns mu = 0 when
/// power_of_mu(0) already fits the budget. Otherwise doubles (or halves) from
/// mu = 1 to a bracket [mu_hi/2, mu_hi] whose upper end is feasible and lower
/// end is not, runs exactly `iters` bisection steps on it and returns the upper
/// endpoint, so the result is always feasible. power_of_mu may return +inf
/// where its system is singular; NaN or -inf raise NumericalFailure.
Bisection bisect_multiplier(const std::function<double(double)>& power_of_mu, double budget,
                            int iters);

struct RegularizedPrecoders {
  std::vector<CMat> V;  // (A + mu I)^{-1} rhs[k]
  Bisection bisection;
};

/// Solves V_k(mu) = (A + mu I)^{-1} rhs[k] for Hermitian PSD A, with mu from
/// bisect_multiplier so that sum_k ||V_k||_F^2 fits the budget. A is
/// eigendecomposed once; a singular A makes power(0) = +inf, which starts the
/// bisection strictly above zero.
RegularizedPrecoders regularized_precoders(const CMat& A, const std::vector<CMat>& rhs,
                                           double budget, int iters);

// Small helpers shared by the designers.

/// (A + mu I)^{-1} B for Hermitian PSD A; nullopt if the Cholesky factor fails.
std::optional<CMat> solve_regularized(const CMat& A, double mu, const CMat& B);

/// log2 det of a Hermitian positive definite matrix.
double log2_det_hpd(const CMat& A);

inline double frob2(const CMat& A) { return A.squaredNorm(); }

bool all_finite(const CMat& A);

using Rng = std::mt19937_64;

/// One splitmix64 step; used to decorrelate consecutive seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// rows x cols matrix of i.i.d. CN(0, 1) entries (real and imaginary parts
/// each N(0, 1/2)).
CMat complex_gaussian(int rows, int cols, Rng& rng);

}  // namespace numerics
}  // namespace ibc

#endif  // IBC_NUMERICS_HPP
