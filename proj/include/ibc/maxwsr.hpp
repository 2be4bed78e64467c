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

#ifndef IBC_MAXWSR_HPP
#define IBC_MAXWSR_HPP

#include <array>
#include <cstdint>

#include "ibc/model.hpp"

// WMMSE weighted-sum-rate baseline in the full M-antenna domain: MMSE
// receivers, W = E^{-1}, regularized precoders. All rate weights are one.
namespace ibc::maxwsr {

enum class Init { kRandom, kGzfia };

struct WsrConfig {
  int I1 = 2;
  int I2 = 10;
  Init init = Init::kRandom;
  std::uint64_t init_seed = 0;
  bool record_trace = true;

  void validate() const;
};

struct PrecoderUpdate {
  PerUser<CMat> T;
  std::array<numerics::Bisection, kCells> bisection;
};

struct WsrResult {
  TransceiverSet tx;
  PerUser<CMat> W;
  DesignTrace trace;
};

PerUser<CMat> wmmse_receivers(const ChannelSet& ch, const PerUser<CMat>& T, double noise_var);

/// E^{[m,k]} for the given transceivers.
PerUser<CMat> mse_matrices(const ChannelSet& ch, const PerUser<CMat>& T, const PerUser<CMat>& U,
                           double noise_var);

/// W = E^{-1}; throws NumericalFailure when an E is not positive definite.
PerUser<CMat> wmmse_weights(const ChannelSet& ch, const PerUser<CMat>& T,
                            const PerUser<CMat>& U, double noise_var);

PrecoderUpdate wmmse_precoders(const ChannelSet& ch, const PerUser<CMat>& U,
                               const PerUser<CMat>& W, const std::array<double, kCells>& power,
                               int I2);

/// sum over users of Tr(W E) - ln det W.
double wmmse_surrogate(const ChannelSet& ch, const PerUser<CMat>& T, const PerUser<CMat>& U,
                       const PerUser<CMat>& W, double noise_var);

/// Gaussian precoders scaled so each cell uses exactly its budget.
PerUser<CMat> random_feasible_precoders(const Scenario& scenario, std::uint64_t seed);

WsrResult run(const ChannelSet& ch, const Scenario& scenario, const WsrConfig& config);

}  // namespace ibc::maxwsr

#endif  // IBC_MAXWSR_HPP
