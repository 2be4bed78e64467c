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

#ifndef IBC_GZFIA_HPP
#define IBC_GZFIA_HPP

#include <vector>

#include "ibc/model.hpp"

/// Generalized zero-forcing interference alignment.
///
/// Both BSs spread K L_s streams over M = K(L_s+1) antennas with a shared
/// orthonormal matrix P. Each user's receive front end Ubar spans the left
/// null space of the cross-cell channel H_{other} P, which removes ICI. Each
/// BS block-diagonalizes the remaining own-cell channels (Vbar), then the
/// L_s x L_s effective channel is diagonalized by SVD and the eigenmodes of
/// the whole cell are water-filled jointly.
namespace ibc::gzfia {

struct GzfDesign {
  CMat P;
  PerUser<CMat> Ubar;       // N x L_s
  PerUser<CMat> Vbar;       // N_p x L_s
  PerUser<CMat> Uhat;       // L_s x L_s
  PerUser<CMat> Vhat;       // L_s x L_s
  PerUser<RVec> sigma_hat;  // descending singular values of H_eff
  PerUser<RVec> phi;        // per-mode power
  TransceiverSet tx;        // T = P Vbar Vhat Phi^{1/2}, U = Ubar Uhat
};

struct Diagonalization {
  CMat Uhat;
  RVec sigma_hat;
  CMat Vhat;
};

/// Ubar^{[m,k]}: left null basis of H_{other(m)}^{[m,k]} P, dimension L_s.
CMat ici_null_receive_basis(const ChannelSet& ch, const CMat& P, int m, int k, int Ls);

/// Vbar: right null basis of the stacked Omega rows of the other own-cell users.
CMat bd_precoder_basis(const CMat& omega_stack, int Ls);

/// Stack of Omega^{[m,i]} = Ubar^{[m,i]H} H_m^{[m,i]} P for i != k.
CMat omega_stack(const ChannelSet& ch, const CMat& P, const PerUser<CMat>& Ubar, int m, int k);

/// H_eff = Ubar^H (H_m^{[m,k]} P) Vbar.
CMat effective_channel(const ChannelSet& ch, const CMat& P, const CMat& Ubar, const CMat& Vbar,
                       int m, int k);

Diagonalization diagonalize_effective(const CMat& H_eff);

/// Pooled water-filling over all K L_s modes of one cell, gains sigma_hat^2.
/// Returns per-user allocations in the input mode order.
std::vector<RVec> allocate_power(const std::vector<RVec>& sigma_hat, double budget,
                                 double noise_var);

GzfDesign design(const ChannelSet& ch, const Scenario& scenario, const CMat& P);
GzfDesign design(const ChannelSet& ch, const Scenario& scenario,
                 numerics::SpreadMode mode = numerics::SpreadMode::deterministic());

}  // namespace ibc::gzfia

#endif  // IBC_GZFIA_HPP
