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


// Helpers shared by the test binaries.

#ifndef IBC_TESTS_SUPPORT_HPP
#define IBC_TESTS_SUPPORT_HPP

#include <cmath>
#include <complex>

#include "ibc/model.hpp"
#include "ibc/numerics.hpp"

namespace ibc::test {

inline CMat gaussian(int rows, int cols, std::uint64_t seed) {
  numerics::Rng rng(seed);
  return numerics::complex_gaussian(rows, cols, rng);
}

inline CMat scalar(double re, double im = 0.0) { return CMat::Constant(1, 1, cplx(re, im)); }

/// One BS, one user, one antenna: every link zero except the own link h.
inline ChannelSet scalar_channel(double h) {
  ChannelSet ch(1, 1, 1);
  for (int n = 0; n < kCells; ++n) {
    for (int m = 0; m < kCells; ++m) ch.link(n, m, 0) = CMat::Zero(1, 1);
  }
  ch.link(0, 0, 0) = scalar(h);
  return ch;
}

inline PerUser<CMat> zeros_per_user(int K, int rows, int cols) {
  return make_per_user<CMat>(K, CMat::Zero(rows, cols));
}

/// Projector distance between column spaces; independent of basis and phase.
inline double subspace_distance(const CMat& A, const CMat& B) {
  return (A * A.adjoint() - B * B.adjoint()).norm();
}

inline double orth_error(const CMat& B) {
  return (B.adjoint() * B - CMat::Identity(B.cols(), B.cols())).norm();
}

/// Default evaluation scenario M=6, K=2, L_s=2 at the given SNR.
inline Scenario default_scenario(double snr_db = 20.0) { return Scenario::from_snr_db(6, 2, 2, snr_db); }

}  // namespace ibc::test

#endif  // IBC_TESTS_SUPPORT_HPP
