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

#include "ibc/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ibc {

Scenario Scenario::make(int M, int K, int Ls, double power, double noise_var) {
  Scenario s = unchecked(M, K, Ls, power, noise_var);
  s.validate();
  return s;
}

Scenario Scenario::unchecked(int M, int K, int Ls, double power, double noise_var) {
  Scenario s;
  s.M = M;
  s.N = M;
  s.K = K;
  s.Ls = Ls;
  s.Np = K * Ls;
  s.power = {power, power};
  s.noise_var = noise_var;
  return s;
}

Scenario Scenario::from_snr_db(int M, int K, int Ls, double snr_db) {
  return make(M, K, Ls, db_to_linear(snr_db), 1.0);
}

void Scenario::validate() const {
  if (K < 1 || Ls < 1) throw InvalidArgument("scenario requires K >= 1 and L_s >= 1");
  if (M != K * (Ls + 1)) {
    throw InvalidArgument("scenario violates M = K(L_s+1): M=" + std::to_string(M) +
                          ", K=" + std::to_string(K) + ", L_s=" + std::to_string(Ls) +
                          " requires M=" + std::to_string(K * (Ls + 1)));
  }
  if (K < Ls) {
    throw InvalidArgument("scenario requires K >= L_s: the ICI null space of H P has dimension "
                          "M - N_p = K, which must hold L_s receive streams");
  }
  if (N != M) throw InvalidArgument("scenario violates M = N (symmetric antennas)");
  if (Np != K * Ls) throw InvalidArgument("scenario violates N_p = K L_s");
  for (double p : power) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw InvalidArgument("scenario requires positive finite per-BS power");
    }
  }
  if (!(noise_var > 0.0) || !std::isfinite(noise_var)) {
    throw InvalidArgument("scenario requires positive noise variance");
  }
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

ChannelSet::ChannelSet(int K, int N, int M) : K_(K), N_(N), M_(M) {
  h_.assign(static_cast<std::size_t>(kCells) * kCells * K, CMat::Zero(N, M));
}

std::uint64_t ChannelSet::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 0x100000001b3ULL;
    }
  };
  for (const CMat& H : h_) mix(H.data(), sizeof(cplx) * static_cast<std::size_t>(H.size()));
  return h;
}

std::string_view scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kGzfia:
      return "gzfia";
    case Scheme::kRzfia:
      return "rzfia";
    case Scheme::kMaxwsr:
      return "maxwsr";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "gzfia") return Scheme::kGzfia;
  if (name == "rzfia") return Scheme::kRzfia;
  if (name == "maxwsr") return Scheme::kMaxwsr;
  throw InvalidArgument("unknown scheme '" + std::string(name) + "'");
}

double TransceiverSet::cell_power(int m) const {
  double p = 0.0;
  for (const CMat& t : T[m]) p += t.squaredNorm();
  return p;
}

namespace model {

ChannelSet draw_channels(const Scenario& scenario, std::uint64_t seed) {
  ChannelSet ch(scenario.K, scenario.N, scenario.M);
  numerics::Rng rng(numerics::splitmix64(seed));
  for (int n = 0; n < kCells; ++n) {
    for (int m = 0; m < kCells; ++m) {
      for (int k = 0; k < scenario.K; ++k) {
        ch.link(n, m, k) = numerics::complex_gaussian(scenario.N, scenario.M, rng);
      }
    }
  }
  return ch;
}

CMat interference_plus_noise_cov(const ChannelSet& ch, const TransceiverSet& tx, int m, int k,
                                 double noise_var) {
  const int N = ch.N();
  CMat Q = noise_var * CMat::Identity(N, N);
  for (int n = 0; n < kCells; ++n) {
    const CMat& H = ch.link(n, m, k);
    for (int i = 0; i < tx.K(); ++i) {
      if (n == m && i == k) continue;
      const CMat F = H * tx.T[n][i];
      Q.noalias() += F * F.adjoint();
    }
  }
  return Q;
}

double user_rate_optimal(const ChannelSet& ch, const TransceiverSet& tx, int m, int k,
                         double noise_var) {
  const CMat Q = interference_plus_noise_cov(ch, tx, m, k, noise_var);
  const CMat F = ch.link(m, m, k) * tx.T[m][k];
  Eigen::LLT<CMat> llt(Q);
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("user_rate: interference-plus-noise covariance not positive definite");
  }
  const CMat G = CMat::Identity(F.cols(), F.cols()) + F.adjoint() * llt.solve(F);
  const double r = numerics::log2_det_hpd(0.5 * (G + G.adjoint()));
  if (!std::isfinite(r)) throw NumericalFailure("user_rate: non-finite rate");
  return std::max(0.0, r);
}

double user_rate(const ChannelSet& ch, const TransceiverSet& tx, int m, int k, double noise_var) {
  if (static_cast<int>(tx.U[m].size()) <= k || tx.U[m][k].size() == 0) {
    return user_rate_optimal(ch, tx, m, k, noise_var);
  }
  const CMat& U = tx.U[m][k];
  if (U.squaredNorm() == 0.0) return 0.0;
  // Orthonormal basis of range(U); the rate is invariant to invertible
  // recombination of the filter outputs.
  Eigen::JacobiSVD<CMat> svd(U, Eigen::ComputeThinU);
  const RVec& s = svd.singularValues();
  int rank = 0;
  while (rank < s.size() && s(rank) > 1e-10 * s(0)) ++rank;
  const CMat B = svd.matrixU().leftCols(rank);

  const CMat Q = B.adjoint() * interference_plus_noise_cov(ch, tx, m, k, noise_var) * B;
  const CMat F = B.adjoint() * ch.link(m, m, k) * tx.T[m][k];
  Eigen::LLT<CMat> llt(0.5 * (Q + Q.adjoint()));
  if (llt.info() != Eigen::Success) {
    throw NumericalFailure("user_rate: filtered interference-plus-noise covariance not positive definite");
  }
  const CMat G = CMat::Identity(F.cols(), F.cols()) + F.adjoint() * llt.solve(F);
  const double r = numerics::log2_det_hpd(0.5 * (G + G.adjoint()));
  if (!std::isfinite(r)) throw NumericalFailure("user_rate: non-finite rate");
  return std::max(0.0, r);
}

double cell_sum_rate(const ChannelSet& ch, const TransceiverSet& tx, int m, double noise_var) {
  double total = 0.0;
  for (int k = 0; k < tx.K(); ++k) total += user_rate(ch, tx, m, k, noise_var);
  return total;
}

double sum_rate(const ChannelSet& ch, const TransceiverSet& tx, double noise_var) {
  double total = 0.0;
  for (int m = 0; m < kCells; ++m) total += cell_sum_rate(ch, tx, m, noise_var);
  return total;
}

ResidualInterference residual_interference(const ChannelSet& ch, const TransceiverSet& tx, int m,
                                           int k) {
  ResidualInterference r;
  const CMat& U = tx.U[m][k];
  const CMat UhHown = U.adjoint() * ch.link(m, m, k);
  const CMat UhHcross = U.adjoint() * ch.link(other_cell(m), m, k);
  for (int i = 0; i < tx.K(); ++i) {
    r.ici_power += (UhHcross * tx.T[other_cell(m)][i]).squaredNorm();
    const double p = (UhHown * tx.T[m][i]).squaredNorm();
    if (i == k) {
      r.signal_power = p;
    } else {
      r.iui_power += p;
    }
  }
  return r;
}

ResidualSummary summarize_residuals(const ChannelSet& ch, const TransceiverSet& tx) {
  ResidualSummary out;
  int users = 0;
  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < tx.K(); ++k) {
      const ResidualInterference r = residual_interference(ch, tx, m, k);
      ++users;
      if (r.signal_power <= 0.0) continue;
      const double ici = r.ici_power / r.signal_power;
      const double iui = r.iui_power / r.signal_power;
      out.mean_ici += ici;
      out.mean_iui += iui;
      out.max_total = std::max(out.max_total, ici + iui);
    }
  }
  if (users > 0) {
    out.mean_ici /= users;
    out.mean_iui /= users;
  }
  return out;
}

double wmse_objective(const ChannelSet& ch, const CMat& P, const PerUser<CMat>& V,
                      const PerUser<CMat>& U, const MseWeights& weights, double noise_var) {
  const int K = ch.K();
  double total = 0.0;
  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < K; ++k) {
      const CMat& Umk = U[m][k];
      const CMat& Lam = weights[m][k];
      CMat UhF_own;
      CMat cov_quad = noise_var * (Umk.adjoint() * Umk);
      for (int n = 0; n < kCells; ++n) {
        const CMat UhHbar = Umk.adjoint() * (ch.link(n, m, k) * P);
        for (int i = 0; i < K; ++i) {
          const CMat G = UhHbar * V[n][i];
          cov_quad.noalias() += G * G.adjoint();
          if (n == m && i == k) UhF_own = G;
        }
      }
      const cplx cross = (UhF_own * Lam.adjoint()).trace();
      total += Lam.squaredNorm() - 2.0 * cross.real() + cov_quad.trace().real();
    }
  }
  return std::max(0.0, total);
}

}  // namespace model
}  // namespace ibc
