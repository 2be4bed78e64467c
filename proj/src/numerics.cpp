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

#include "ibc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ibc::numerics {

namespace {

// Singular values below this fraction of the largest count as zero.
constexpr double kRankRelTol = 1e-10;

// Upper limit for the doubling search of the multiplier bracket.
constexpr double kMaxMultiplier = 1e300;
constexpr double kMinMultiplier = 1e-300;

// Relative rhs energy treated as rounding noise in a null direction of A.
constexpr double kNullEnergyRelTol = 1e-20;

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CMat complex_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMat out(rows, cols);
  // Column-major fill; the order is part of the reproducibility contract.
  for (int c = 0; c < cols; ++c) {
    for (int r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(r, c) = cplx(re, im);
    }
  }
  return out;
}

bool all_finite(const CMat& A) {
  for (Eigen::Index j = 0; j < A.size(); ++j) {
    const cplx z = A.data()[j];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

CMat spreading_matrix(int M, int Np, SpreadMode mode) {
  if (Np < 1 || M <= Np) {
    throw InvalidArgument("spreading_matrix requires M > N_p >= 1 (got M=" + std::to_string(M) +
                          ", N_p=" + std::to_string(Np) + ")");
  }
  if (mode.kind == SpreadMode::Kind::kDeterministic) {
    return CMat::Identity(M, Np);
  }
  Rng rng(splitmix64(mode.seed));
  const CMat G = complex_gaussian(M, Np, rng);
  Eigen::HouseholderQR<CMat> qr(G);
  return qr.householderQ() * CMat::Identity(M, Np);
}

int numerical_rank(const CMat& A) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(A);
  const RVec& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double thresh = kRankRelTol * s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > thresh) ++rank;
  }
  return rank;
}

CMat left_null_basis(const CMat& A, int dim) {
  const int r = static_cast<int>(A.rows());
  const int c = static_cast<int>(A.cols());
  if (dim < 1 || dim > r) {
    throw InvalidArgument("left_null_basis: dim must lie in [1, rows]");
  }
  if (!all_finite(A)) throw NumericalFailure("left_null_basis: non-finite input");
  if (c == 0) return CMat::Identity(r, dim);

  Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullU);
  const RVec& s = svd.singularValues();
  int rank = 0;
  if (s.size() > 0 && s(0) > 0.0) {
    const double thresh = kRankRelTol * s(0);
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > thresh) ++rank;
    }
  }
  // A rank-deficient draw changes the null-space dimension.
  if (rank < std::min(r, c)) {
    throw DegenerateChannel("rank-deficient matrix: rank " + std::to_string(rank) + " < " +
                            std::to_string(std::min(r, c)));
  }
  if (r - rank < dim) {
    throw DegenerateChannel("left null space has dimension " + std::to_string(r - rank) +
                            ", need " + std::to_string(dim));
  }
  // Trailing left singular vectors in ascending singular-value order.
  const CMat& U = svd.matrixU();
  CMat B(r, dim);
  for (int j = 0; j < dim; ++j) B.col(j) = U.col(r - 1 - j);
  return B;
}

CMat right_null_basis(const CMat& A, int dim) { return left_null_basis(A.adjoint(), dim); }

double water_fill_objective(const RVec& gains, const RVec& alloc, double noise_var) {
  double total = 0.0;
  for (Eigen::Index j = 0; j < gains.size(); ++j) {
    total += std::log2(1.0 + gains(j) * alloc(j) / noise_var);
  }
  return total;
}

WaterFillResult water_fill(const RVec& gains, double budget, double noise_var) {
  if (!(noise_var > 0.0)) throw InvalidArgument("water_fill: noise_var must be positive");
  if (!(budget >= 0.0) || !std::isfinite(budget)) {
    throw InvalidArgument("water_fill: budget must be finite and nonnegative");
  }
  for (Eigen::Index j = 0; j < gains.size(); ++j) {
    if (!(gains(j) >= 0.0) || !std::isfinite(gains(j))) {
      throw InvalidArgument("water_fill: gains must be finite and nonnegative");
    }
  }

  WaterFillResult result;
  result.allocation = RVec::Zero(gains.size());
  if (budget == 0.0) return result;

  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < gains.size(); ++j) {
    if (gains(j) > 0.0) active.push_back(j);
  }
  if (active.empty()) {
    result.degenerate = true;
    return result;
  }

  // Floors noise/g ascending; stable so equal gains keep index order.
  std::stable_sort(active.begin(), active.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return gains(a) > gains(b); });
  std::vector<double> floors(active.size());
  for (std::size_t i = 0; i < active.size(); ++i) floors[i] = noise_var / gains(active[i]);

  double level = 0.0;
  double prefix = std::accumulate(floors.begin(), floors.end(), 0.0);
  for (std::size_t n = active.size(); n >= 1; --n) {
    level = (budget + prefix) / static_cast<double>(n);
    if (level > floors[n - 1]) break;
    prefix -= floors[n - 1];
  }

  for (std::size_t i = 0; i < active.size(); ++i) {
    result.allocation(active[i]) = std::max(0.0, level - floors[i]);
  }
  result.water_level = level;
  return result;
}

Bisection bisect_multiplier(const std::function<double(double)>& power_of_mu, double budget,
                            int iters) {
  if (!(budget > 0.0) || !std::isfinite(budget)) {
    throw InvalidArgument("bisect_multiplier: budget must be positive and finite");
  }
  if (iters < 0) throw InvalidArgument("bisect_multiplier: iters must be nonnegative");

  auto eval = [&](double mu) {
    const double p = power_of_mu(mu);
    if (std::isnan(p) || p == -std::numeric_limits<double>::infinity()) {
      throw NumericalFailure("bisect_multiplier: power evaluation is not finite");
    }
    return p;
  };
  const double limit = budget * (1.0 + kPowerSlack);
  auto feasible = [&](double p) { return p <= limit; };

  Bisection out;
  const double p0 = eval(0.0);
  if (feasible(p0)) {
    out.power = p0;
    return out;
  }

  // Geometric search from 1 for a bracket [hi/2, hi] with hi feasible and
  // hi/2 infeasible; keeps the relative precision of mu independent of scale.
  double hi = 1.0;
  double p_hi = eval(hi);
  double lo = 0.0;
  if (!feasible(p_hi)) {
    while (!feasible(p_hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > kMaxMultiplier) {
        throw NumericalFailure("bisect_multiplier: no feasible multiplier found");
      }
      p_hi = eval(hi);
    }
  } else {
    for (;;) {
      const double half = 0.5 * hi;
      if (half < kMinMultiplier) {
        lo = 0.0;
        break;
      }
      const double p_half = eval(half);
      if (!feasible(p_half)) {
        lo = half;
        break;
      }
      hi = half;
      p_hi = p_half;
    }
  }
  out.initial_upper = hi;
  out.initial_lower = lo;

  for (int step = 0; step < iters; ++step) {
    const double mid = 0.5 * (lo + hi);
    const double p_mid = eval(mid);
    if (feasible(p_mid)) {
      hi = mid;
      p_hi = p_mid;
    } else {
      lo = mid;
    }
    ++out.steps;
  }
  out.mu = hi;
  out.lower = lo;
  out.upper = hi;
  out.power = p_hi;
  return out;
}

RegularizedPrecoders regularized_precoders(const CMat& A, const std::vector<CMat>& rhs,
                                           double budget, int iters) {
  if (!all_finite(A)) throw NumericalFailure("regularized_precoders: non-finite system matrix");
  const CMat Ah = 0.5 * (A + A.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> eig(Ah);
  if (eig.info() != Eigen::Success) {
    throw NumericalFailure("regularized_precoders: eigendecomposition failed");
  }
  const CMat& Q = eig.eigenvectors();
  const RVec lambda = eig.eigenvalues().cwiseMax(0.0);
  const double lambda_max = lambda.size() > 0 ? lambda.maxCoeff() : 0.0;
  const double singular_floor = 1e-14 * std::max(1.0, lambda_max);

  // Energy of every rhs in the eigenbasis of A, per eigenvalue.
  std::vector<CMat> projected;
  projected.reserve(rhs.size());
  RVec energy = RVec::Zero(lambda.size());
  for (const CMat& b : rhs) {
    projected.push_back(Q.adjoint() * b);
    energy += projected.back().rowwise().squaredNorm();
  }

  // rhs energy in a null direction of A at the rounding level is dropped
  // (pseudo-inverse); anything larger makes the mu = 0 system singular.
  const double total_energy = energy.sum();
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    if (lambda(j) <= singular_floor && energy(j) <= kNullEnergyRelTol * total_energy) {
      energy(j) = 0.0;
      for (CMat& pb : projected) pb.row(j).setZero();
    }
  }

  auto power_of_mu = [&](double mu) {
    double p = 0.0;
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
      const double d = lambda(j) + mu;
      if (energy(j) == 0.0) continue;
      if (d <= singular_floor) return std::numeric_limits<double>::infinity();
      p += energy(j) / (d * d);
    }
    return p;
  };

  RegularizedPrecoders out;
  out.bisection = bisect_multiplier(power_of_mu, budget, iters);
  const double mu = out.bisection.mu;
  RVec inv(lambda.size());
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    const double d = lambda(j) + mu;
    inv(j) = d > singular_floor ? 1.0 / d : 0.0;
  }
  out.V.reserve(rhs.size());
  for (const CMat& pb : projected) out.V.push_back(Q * (inv.asDiagonal() * pb));
  return out;
}

std::optional<CMat> solve_regularized(const CMat& A, double mu, const CMat& B) {
  CMat R = A;
  if (mu != 0.0) R.diagonal().array() += mu;
  Eigen::LLT<CMat> llt(R);
  if (llt.info() != Eigen::Success) return std::nullopt;
  CMat X = llt.solve(B);
  if (!all_finite(X)) return std::nullopt;
  return X;
}

double log2_det_hpd(const CMat& A) {
  Eigen::LLT<CMat> llt(A);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("log2_det_hpd: matrix is not positive definite");
  }
  double acc = 0.0;
  const CMat& L = llt.matrixLLT();
  for (Eigen::Index i = 0; i < L.rows(); ++i) acc += std::log(L(i, i).real());
  return 2.0 * acc / std::log(2.0);
}

}  // namespace ibc::numerics
