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

#include "ibc/rzfia.hpp"

#include <cmath>

namespace ibc::rzfia {

void RzfConfig::validate() const {
  if (I1 < 1) throw InvalidArgument("rzfia: I1 must be >= 1");
  if (I2 < 1) throw InvalidArgument("rzfia: I2 must be >= 1");
  if (!(conv_tol > 0.0)) throw InvalidArgument("rzfia: conv_tol must be positive");
}

MseWeights one_shot_weights(const ChannelSet& ch, const gzfia::GzfDesign& gzf) {
  const int K = ch.K();
  MseWeights w = make_per_user<CMat>(K);
  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < K; ++k) {
      w[m][k] = gzf.tx.U[m][k].adjoint() * ch.link(m, m, k) * gzf.tx.T[m][k];
    }
  }
  return w;
}

CMat precoder_system(const ChannelSet& ch, const CMat& P, const PerUser<CMat>& U, int m) {
  const Eigen::Index Np = P.cols();
  CMat A = CMat::Zero(Np, Np);
  for (int n = 0; n < kCells; ++n) {
    for (int i = 0; i < ch.K(); ++i) {
      // Effective channel U^H Hbar, L_s x N_p: the only per-user feedback.
      const CMat G = U[n][i].adjoint() * (ch.link(m, n, i) * P);
      A.noalias() += G.adjoint() * G;
    }
  }
  return A;
}

PrecoderUpdate update_precoders(const ChannelSet& ch, const CMat& P, const PerUser<CMat>& U,
                                const MseWeights& weights, const std::array<double, kCells>& power,
                                int I2) {
  const int K = ch.K();
  PrecoderUpdate out;
  out.V = make_per_user<CMat>(K);
  for (int m = 0; m < kCells; ++m) {
    const CMat A = precoder_system(ch, P, U, m);
    std::vector<CMat> rhs;
    rhs.reserve(K);
    for (int k = 0; k < K; ++k) {
      const CMat Hbar = ch.link(m, m, k) * P;
      rhs.push_back(Hbar.adjoint() * U[m][k] * weights[m][k]);
    }
    numerics::RegularizedPrecoders sol = numerics::regularized_precoders(A, rhs, power[m], I2);
    for (int k = 0; k < K; ++k) out.V[m][k] = std::move(sol.V[k]);
    out.bisection[m] = sol.bisection;
  }
  return out;
}

PerUser<CMat> update_receivers(const ChannelSet& ch, const CMat& P, const PerUser<CMat>& V,
                               const MseWeights& weights, double noise_var) {
  if (!(noise_var > 0.0)) throw InvalidArgument("update_receivers: noise_var must be positive");
  const int K = ch.K();
  const int N = ch.N();
  PerUser<CMat> U = make_per_user<CMat>(K);
  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < K; ++k) {
      CMat C = noise_var * CMat::Identity(N, N);
      CMat F_own;
      for (int n = 0; n < kCells; ++n) {
        const CMat Hbar = ch.link(n, m, k) * P;
        for (int i = 0; i < K; ++i) {
          const CMat F = Hbar * V[n][i];
          C.noalias() += F * F.adjoint();
          if (n == m && i == k) F_own = F;
        }
      }
      Eigen::LLT<CMat> llt(C);
      if (llt.info() != Eigen::Success) {
        throw NumericalFailure("update_receivers: receive covariance not positive definite");
      }
      U[m][k] = llt.solve(F_own * weights[m][k].adjoint());
    }
  }
  return U;
}

namespace {

PerUser<CMat> lift(const CMat& P, const PerUser<CMat>& V) {
  PerUser<CMat> T;
  for (int m = 0; m < kCells; ++m) {
    T[m].reserve(V[m].size());
    for (const CMat& v : V[m]) T[m].push_back(P * v);
  }
  return T;
}

PerUser<CMat> spread_domain(const CMat& P, const PerUser<CMat>& T) {
  PerUser<CMat> V;
  for (int m = 0; m < kCells; ++m) {
    V[m].reserve(T[m].size());
    for (const CMat& t : T[m]) V[m].push_back(P.adjoint() * t);
  }
  return V;
}

}  // namespace

RzfResult run(const ChannelSet& ch, const Scenario& scenario, const gzfia::GzfDesign& gzf,
              const RzfConfig& config) {
  config.validate();
  scenario.validate();
  const CMat& P = gzf.P;
  const double noise = scenario.noise_var;

  RzfResult res;
  res.weights = one_shot_weights(ch, gzf);
  res.trace.weight_updates = 1;
  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < scenario.K; ++k) {
      if (res.weights[m][k].squaredNorm() == 0.0) res.trace.zero_weight_users.push_back({m, k});
    }
  }

  PerUser<CMat> U = gzf.tx.U;
  PerUser<CMat> V = spread_domain(P, gzf.tx.T);
  res.trace.initial_objective = model::wmse_objective(ch, P, V, U, res.weights, noise);

  double prev = res.trace.initial_objective;
  for (int it = 1; it <= config.I1; ++it) {
    PrecoderUpdate pu = update_precoders(ch, P, U, res.weights, scenario.power, config.I2);
    ++res.trace.precoder_updates;
    V = std::move(pu.V);

    IterationRecord rec;
    rec.iter = it;
    rec.objective_after_precoder = model::wmse_objective(ch, P, V, U, res.weights, noise);

    U = update_receivers(ch, P, V, res.weights, noise);
    ++res.trace.receiver_updates;
    rec.objective = model::wmse_objective(ch, P, V, U, res.weights, noise);

    TransceiverSet tx{lift(P, V), U, Scheme::kRzfia};
    for (int m = 0; m < kCells; ++m) {
      rec.mu[m] = pu.bisection[m].mu;
      rec.power[m] = tx.cell_power(m);
    }
    if (config.record_trace) {
      rec.sum_rate = model::sum_rate(ch, tx, noise);
      rec.residual = model::summarize_residuals(ch, tx);
    }
    res.trace.iterations.push_back(rec);

    const double change = std::abs(prev - rec.objective);
    prev = rec.objective;
    if (config.stop_on_convergence && change <= config.conv_tol * std::abs(rec.objective)) break;
  }

  res.tx = TransceiverSet{lift(P, V), U, Scheme::kRzfia};
  res.V = std::move(V);
  return res;
}

}  // namespace ibc::rzfia
