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

#ifndef IBC_RZFIA_HPP
#define IBC_RZFIA_HPP

#include <array>

#include "ibc/gzfia.hpp"

/// Regularized ZF-IA: weighted-MSE alternating minimization seeded by the
/// GZF-IA design.
///
/// The MSE weights Lambda^{[m,k]} = U_gzf^H H_m^{[m,k]} T_gzf are computed once
/// and held fixed. Each iteration updates the spread-domain precoders V (with
/// a per-BS multiplier found by bisection) and then the receive filters U,
/// both in closed form. Transmit precoders are T = P V with the same P as the
/// GZF-IA design, so Tr(T T^H) = Tr(V V^H).
namespace ibc::rzfia {

struct RzfConfig {
  int I1 = 2;                       // alternating iterations (cap)
  int I2 = 10;                      // bisection steps per precoder update
  double conv_tol = 1e-6;           // relative WMSE change
  bool stop_on_convergence = false; // default: run exactly I1 iterations
  bool record_trace = true;         // per-iteration sum rate and residuals

  void validate() const;
};

struct PrecoderUpdate {
  PerUser<CMat> V;  // N_p x L_s
  std::array<numerics::Bisection, kCells> bisection;
};

struct RzfResult {
  TransceiverSet tx;
  PerUser<CMat> V;
  MseWeights weights;
  DesignTrace trace;
};

MseWeights one_shot_weights(const ChannelSet& ch, const gzfia::GzfDesign& gzf);

/// Xi sum for BS m: sum over all users (n,i) of Hbar_m^{[n,i]H} U U^H Hbar_m^{[n,i]}.
CMat precoder_system(const ChannelSet& ch, const CMat& P, const PerUser<CMat>& U, int m);

PrecoderUpdate update_precoders(const ChannelSet& ch, const CMat& P, const PerUser<CMat>& U,
                                const MseWeights& weights, const std::array<double, kCells>& power,
                                int I2);

PerUser<CMat> update_receivers(const ChannelSet& ch, const CMat& P, const PerUser<CMat>& V,
                               const MseWeights& weights, double noise_var);

RzfResult run(const ChannelSet& ch, const Scenario& scenario, const gzfia::GzfDesign& gzf,
              const RzfConfig& config);

}  // namespace ibc::rzfia

#endif  // IBC_RZFIA_HPP
