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

#include "ibc/maxwsr.hpp"

#include <cmath>

#include "ibc/gzfia.hpp"

namespace ibc::maxwsr {

void WsrConfig::validate() const {
  if (I1 < 1) throw InvalidArgument("maxwsr: I1 must be >= 1");
  if (I2 < 1) throw InvalidArgument("maxwsr: I2 must be >= 1");
}

namespace {

// Receive covariance at user (m,k), including its own signal.
CMat receive_cov(const ChannelSet& ch, const PerUser<CMat>& T, int m, int k, double noise_var) {
  const int N = ch.N();
  CMat C = noise_var * CMat::Identity(N, N);
  for (int n = 0; n < kCells; ++n) {
    const CMat& H = ch.link(n, m, k);
    for (const CMat& t : T[n]) {
      const CMat F = H * t;
      C.noalias() += F * F.adjoint();
    }
  }
  return C;
}

}  // namespace

PerUser<CMat> wmmse_receivers(const ChannelSet& ch, const PerUser<CMat>& T, double noise_var) {
  if (!(noise_var > 0.0)) throw InvalidArgument("wmmse_receivers: noise_var must be positive");
  const int K = ch.K();
  PerUser<CMat> U = make_per_user<CMat>(K);
  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < K; ++k) {
      Eigen::LLT<CMat> llt(receive_cov(ch, T, m, k, noise_var));
      if (llt.info() != Eigen::Success) {
        throw NumericalFailure("wmmse_receivers: receive covariance not positive definite");
      }
      U[m][k] = llt.solve(ch.link(m, m, k) * T[m][k]);
    }
  }
  return U;
}

PerUser<CMat> mse_matrices(const ChannelSet& ch, const PerUser<CMat>& T, const PerUser<CMat>& U,
                           double noise_var) {
  const int K = ch.K();
  PerUser<CMat> E = make_per_user<CMat>(K);
  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < K; ++k) {
      const CMat& u = U[m][k];
      const CMat UhF = u.adjoint() * ch.link(m, m, k) * T[m][k];
      const Eigen::Index Ls = T[m][k].cols();
      CMat e = CMat::Identity(Ls, Ls) - UhF - UhF.adjoint() +
               u.adjoint() * receive_cov(ch, T, m, k, noise_var) * u;
      E[m][k] = 0.5 * (e + e.adjoint());
    }
  }
  return E;
}

PerUser<CMat> wmmse_weights(const ChannelSet& ch, const PerUser<CMat>& T,
                            const PerUser<CMat>& U, double noise_var) {
  PerUser<CMat> E = mse_matrices(ch, T, U, noise_var);
  PerUser<CMat> W = make_per_user<CMat>(ch.K());
  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < ch.K(); ++k) {
      Eigen::LLT<CMat> llt(E[m][k]);
      if (llt.info() != Eigen::Success) {
        throw NumericalFailure("wmmse_weights: MSE matrix is not positive definite");
      }
      const Eigen::Index Ls = E[m][k].rows();
      CMat w = llt.solve(CMat::Identity(Ls, Ls));
      W[m][k] = 0.5 * (w + w.adjoint());
    }
  }
  return W;
}

PrecoderUpdate wmmse_precoders(const ChannelSet& ch, const PerUser<CMat>& U,
                               const PerUser<CMat>& W, const std::array<double, kCells>& power,
                               int I2) {
  const int K = ch.K();
  const int M = ch.M();
  PrecoderUpdate out;
  out.T = make_per_user<CMat>(K);
  for (int m = 0; m < kCells; ++m) {
    CMat A = CMat::Zero(M, M);
    for (int n = 0; n < kCells; ++n) {
      for (int i = 0; i < K; ++i) {
        const CMat G = U[n][i].adjoint() * ch.link(m, n, i);
        A.noalias() += G.adjoint() * W[n][i] * G;
      }
    }
    std::vector<CMat> rhs;
    rhs.reserve(K);
    for (int k = 0; k < K; ++k) {
      rhs.push_back(ch.link(m, m, k).adjoint() * U[m][k] * W[m][k]);
    }
    numerics::RegularizedPrecoders sol = numerics::regularized_precoders(A, rhs, power[m], I2);
    for (int k = 0; k < K; ++k) out.T[m][k] = std::move(sol.V[k]);
    out.bisection[m] = sol.bisection;
  }
  return out;
}

double wmmse_surrogate(const ChannelSet& ch, const PerUser<CMat>& T, const PerUser<CMat>& U,
                       const PerUser<CMat>& W, double noise_var) {
  const PerUser<CMat> E = mse_matrices(ch, T, U, noise_var);
  double total = 0.0;
  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < ch.K(); ++k) {
      total += (W[m][k] * E[m][k]).trace().real() -
               numerics::log2_det_hpd(W[m][k]) * std::log(2.0);
    }
  }
  return total;
}

PerUser<CMat> random_feasible_precoders(const Scenario& scenario, std::uint64_t seed) {
  numerics::Rng rng(numerics::splitmix64(seed ^ 0x5eedf00dcafe1234ULL));
  PerUser<CMat> T = make_per_user<CMat>(scenario.K);
  for (int m = 0; m < kCells; ++m) {
    double p = 0.0;
    for (int k = 0; k < scenario.K; ++k) {
      T[m][k] = numerics::complex_gaussian(scenario.M, scenario.Ls, rng);
      p += T[m][k].squaredNorm();
    }
    const double scale = std::sqrt(scenario.power[m] / p);
    for (CMat& t : T[m]) t *= scale;
  }
  return T;
}

WsrResult run(const ChannelSet& ch, const Scenario& scenario, const WsrConfig& config) {
  config.validate();
  scenario.validate();
  const double noise = scenario.noise_var;

  PerUser<CMat> T;
  if (config.init == Init::kGzfia) {
    T = gzfia::design(ch, scenario).tx.T;
  } else {
    T = random_feasible_precoders(scenario, config.init_seed);
  }

  WsrResult res;
  PerUser<CMat> U;
  PerUser<CMat> W;
  for (int it = 1; it <= config.I1; ++it) {
    U = wmmse_receivers(ch, T, noise);
    ++res.trace.receiver_updates;
    W = wmmse_weights(ch, T, U, noise);
    ++res.trace.weight_updates;
    if (it == 1) res.trace.initial_objective = wmmse_surrogate(ch, T, U, W, noise);

    PrecoderUpdate pu = wmmse_precoders(ch, U, W, scenario.power, config.I2);
    ++res.trace.precoder_updates;
    T = std::move(pu.T);

    IterationRecord rec;
    rec.iter = it;
    rec.objective_after_precoder = wmmse_surrogate(ch, T, U, W, noise);
    rec.objective = rec.objective_after_precoder;
    TransceiverSet tx{T, U, Scheme::kMaxwsr};
    for (int m = 0; m < kCells; ++m) {
      rec.mu[m] = pu.bisection[m].mu;
      rec.power[m] = tx.cell_power(m);
    }
    if (config.record_trace) {
      rec.sum_rate = model::sum_rate(ch, tx, noise);
      // Residuals are reported against receivers matched to the new precoders.
      tx.U = wmmse_receivers(ch, T, noise);
      rec.residual = model::summarize_residuals(ch, tx);
    }
    res.trace.iterations.push_back(rec);
  }

  // Receivers matched to the final precoders.
  res.tx = TransceiverSet{T, wmmse_receivers(ch, T, noise), Scheme::kMaxwsr};
  res.W = std::move(W);
  return res;
}

}  // namespace ibc::maxwsr
