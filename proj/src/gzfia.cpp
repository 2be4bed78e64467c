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

#include "ibc/gzfia.hpp"

#include <cmath>
#include <string>

namespace ibc::gzfia {

CMat ici_null_receive_basis(const ChannelSet& ch, const CMat& P, int m, int k, int Ls) {
  const CMat Hbar_cross = ch.link(other_cell(m), m, k) * P;
  return numerics::left_null_basis(Hbar_cross, Ls);
}

CMat omega_stack(const ChannelSet& ch, const CMat& P, const PerUser<CMat>& Ubar, int m, int k) {
  const int K = ch.K();
  const Eigen::Index Ls = Ubar[m][k].cols();
  CMat stack(Ls * (K - 1), P.cols());
  Eigen::Index row = 0;
  for (int i = 0; i < K; ++i) {
    if (i == k) continue;
    stack.middleRows(row, Ls) = Ubar[m][i].adjoint() * (ch.link(m, m, i) * P);
    row += Ls;
  }
  return stack;
}

CMat bd_precoder_basis(const CMat& omega_stack, int Ls) {
  // Single-user cell: nothing to block-diagonalize against.
  if (omega_stack.rows() == 0) return CMat::Identity(omega_stack.cols(), Ls);
  return numerics::right_null_basis(omega_stack, Ls);
}

CMat effective_channel(const ChannelSet& ch, const CMat& P, const CMat& Ubar, const CMat& Vbar,
                       int m, int k) {
  return Ubar.adjoint() * (ch.link(m, m, k) * P) * Vbar;
}

Diagonalization diagonalize_effective(const CMat& H_eff) {
  if (!numerics::all_finite(H_eff)) {
    throw NumericalFailure("diagonalize_effective: non-finite effective channel");
  }
  Eigen::JacobiSVD<CMat> svd(H_eff, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

std::vector<RVec> allocate_power(const std::vector<RVec>& sigma_hat, double budget,
                                 double noise_var) {
  Eigen::Index total = 0;
  for (const RVec& s : sigma_hat) total += s.size();
  RVec gains(total);
  Eigen::Index pos = 0;
  for (const RVec& s : sigma_hat) {
    gains.segment(pos, s.size()) = s.array().square().matrix();
    pos += s.size();
  }
  const numerics::WaterFillResult wf = numerics::water_fill(gains, budget, noise_var);
  if (wf.degenerate) throw DegenerateChannel("allocate_power: every eigenmode of the cell is dead");

  std::vector<RVec> out;
  out.reserve(sigma_hat.size());
  pos = 0;
  for (const RVec& s : sigma_hat) {
    out.push_back(wf.allocation.segment(pos, s.size()));
    pos += s.size();
  }
  return out;
}

GzfDesign design(const ChannelSet& ch, const Scenario& scenario, const CMat& P) {
  scenario.validate();
  if (ch.K() != scenario.K || ch.N() != scenario.N || ch.M() != scenario.M) {
    throw InvalidArgument("gzfia::design: channel dimensions do not match the scenario");
  }
  if (P.rows() != scenario.M || P.cols() != scenario.Np) {
    throw InvalidArgument("gzfia::design: spreading matrix must be M x N_p");
  }
  const int K = scenario.K;
  const int Ls = scenario.Ls;

  GzfDesign d;
  d.P = P;
  d.Ubar = make_per_user<CMat>(K);
  d.Vbar = make_per_user<CMat>(K);
  d.Uhat = make_per_user<CMat>(K);
  d.Vhat = make_per_user<CMat>(K);
  d.sigma_hat = make_per_user<RVec>(K);
  d.phi = make_per_user<RVec>(K);
  d.tx.scheme = Scheme::kGzfia;
  d.tx.T = make_per_user<CMat>(K);
  d.tx.U = make_per_user<CMat>(K);

  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < K; ++k) d.Ubar[m][k] = ici_null_receive_basis(ch, P, m, k, Ls);
  }

  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < K; ++k) {
      d.Vbar[m][k] = bd_precoder_basis(omega_stack(ch, P, d.Ubar, m, k), Ls);
      const Diagonalization diag =
          diagonalize_effective(effective_channel(ch, P, d.Ubar[m][k], d.Vbar[m][k], m, k));
      d.Uhat[m][k] = diag.Uhat;
      d.Vhat[m][k] = diag.Vhat;
      d.sigma_hat[m][k] = diag.sigma_hat;
    }
    const std::vector<RVec> phi = allocate_power(d.sigma_hat[m], scenario.power[m],
                                                 scenario.noise_var);
    for (int k = 0; k < K; ++k) {
      d.phi[m][k] = phi[k];
      const RVec amp = phi[k].array().sqrt().matrix();
      d.tx.T[m][k] = P * d.Vbar[m][k] * d.Vhat[m][k] * amp.asDiagonal();
      d.tx.U[m][k] = d.Ubar[m][k] * d.Uhat[m][k];
    }
  }
  return d;
}

GzfDesign design(const ChannelSet& ch, const Scenario& scenario, numerics::SpreadMode mode) {
  return design(ch, scenario, numerics::spreading_matrix(scenario.M, scenario.Np, mode));
}

}  // namespace ibc::gzfia
