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

#include "ibc/metrics.hpp"

#include <algorithm>

namespace ibc::metrics {

count_t CostModel::inverse(count_t n) const {
  count_t r = 1;
  for (int i = 0; i < inverse_exponent; ++i) r *= n;
  return r;
}

count_t CostModel::svd(count_t m, count_t n) const {
  if (m == 0 || n == 0) return 0;
  return c_svd * m * n * std::min(m, n);
}

namespace {

// Regularized precoder solve for one cell: `dim` x `dim` system, K right-hand
// sides of width Ls, I2 bisection steps plus the final solve.
count_t bisection_cost(const CostModel& cm, count_t dim, count_t K, count_t Ls, int I2) {
  const count_t apply = K * cm.matmul(dim, dim, Ls);
  const count_t power = K * dim * Ls;
  const count_t steps = static_cast<count_t>(I2);
  if (cm.reuse_factorization) {
    // One eigendecomposition, rhs projected once, O(dim) per power evaluation.
    return cm.svd(dim, dim) + apply + steps * dim + apply;
  }
  return (steps + 1) * (cm.inverse(dim) + apply + power);
}

}  // namespace

CostBreakdown count_gzfia(const Scenario& s, const CostModel& cm) {
  const count_t K = s.K, M = s.M, N = s.N, Ls = s.Ls, Np = s.Np;
  const count_t users = 2 * K;
  CostBreakdown c;
  // H P for the cross link, then its null space.
  c.one_time += users * (cm.matmul(N, M, Np) + cm.svd(N, Np));
  // Omega = Ubar^H H P for the own link.
  c.one_time += users * (cm.matmul(N, M, Np) + cm.matmul(Ls, N, Np));
  // Block diagonalization against the other K-1 users.
  c.one_time += users * cm.svd((K - 1) * Ls, Np);
  // Effective channel and its SVD.
  c.one_time += users * (cm.matmul(Ls, Np, Ls) + cm.svd(Ls, Ls));
  // Water-filling over K Ls modes per cell.
  c.one_time += 2 * K * Ls;
  // T = P Vbar Vhat Phi^{1/2}, U = Ubar Uhat.
  c.one_time += users * (cm.matmul(Np, Ls, Ls) + cm.matmul(M, Np, Ls) + M * Ls +
                         cm.matmul(N, Ls, Ls));
  return c;
}

CostBreakdown count_rzfia(const Scenario& s, int I2, const CostModel& cm) {
  const count_t K = s.K, M = s.M, N = s.N, Ls = s.Ls, Np = s.Np;
  const count_t users = 2 * K;
  CostBreakdown c = count_gzfia(s, cm);
  // Lambda = U^H H T, once.
  c.one_time += users * (cm.matmul(Ls, N, M) + cm.matmul(Ls, M, Ls));

  // Per cell: effective channels U^H Hbar of all users, Xi sum, rhs, bisection.
  const count_t per_cell = users * (cm.matmul(Ls, N, Np) + cm.matmul(Np, Ls, Np)) +
                           K * cm.matmul(Np, Ls, Ls) + bisection_cost(cm, Np, K, Ls, I2);
  c.precoder = 2 * per_cell;

  // Per user: Hbar V for every stream group, covariance, inverse, filter.
  const count_t per_user = users * (cm.matmul(N, Np, Ls) + cm.matmul(N, Ls, N)) + cm.inverse(N) +
                           cm.matmul(N, Ls, Ls) + cm.matmul(N, N, Ls);
  c.receiver = users * per_user;
  c.weights = 0;
  return c;
}

CostBreakdown count_maxwsr(const Scenario& s, int I2, const CostModel& cm) {
  const count_t K = s.K, M = s.M, N = s.N, Ls = s.Ls;
  const count_t users = 2 * K;
  CostBreakdown c;
  // Random initialization scaled to the budget.
  c.one_time = users * M * Ls;

  const count_t per_user_rx = users * (cm.matmul(N, M, Ls) + cm.matmul(N, Ls, N)) +
                              cm.inverse(N) + cm.matmul(N, N, Ls);
  c.receiver = users * per_user_rx;

  // E = I - U^H F - F^H U + U^H C U, then W = E^{-1}.
  const count_t per_user_w = cm.matmul(Ls, N, Ls) + cm.matmul(Ls, N, N) + cm.matmul(Ls, N, Ls) +
                             cm.inverse(Ls);
  c.weights = users * per_user_w;

  const count_t per_cell = users * (cm.matmul(Ls, N, M) + cm.matmul(M, Ls, Ls) +
                                    cm.matmul(M, Ls, M)) +
                           K * cm.matmul(M, Ls, Ls) + bisection_cost(cm, M, K, Ls, I2);
  c.precoder = 2 * per_cell;
  return c;
}

ExchangeReport count_exchange(Scheme scheme, const Scenario& s, int I1) {
  const count_t K = s.K, M = s.M, N = s.N, Ls = s.Ls, Np = s.Np;
  const count_t users = 2 * K;
  const count_t bss = 2;
  ExchangeReport r;
  r.scheme = scheme;
  switch (scheme) {
    case Scheme::kGzfia:
      r.header =
          "gzfia: one-time, each BS receives Omega = Ubar^H H P (L_s x N_p) of its own K users; "
          "no iteration, no BS cooperation";
      r.one_time = bss * K * Ls * Np;
      r.per_iteration = 0;
      break;
    case Scheme::kRzfia:
      r.header =
          "rzfia: per iteration, each BS receives the effective channel U^H H P (L_s x N_p) of "
          "all 2K users; one-time, the diagonal MSE weights (L_s per user)";
      r.one_time = users * Ls;
      r.per_iteration = bss * users * Ls * Np;
      break;
    case Scheme::kMaxwsr:
      r.header =
          "maxwsr: one-time, each BS receives full CSI H (N x M) to all 2K users; per iteration, "
          "each BS receives receive filters U (N x L_s) and MSE weights W (L_s x L_s) of all 2K "
          "users";
      r.one_time = bss * users * N * M;
      r.per_iteration = bss * users * (N * Ls + Ls * Ls);
      break;
  }
  r.cumulative = r.at(I1);
  return r;
}

}  // namespace ibc::metrics
