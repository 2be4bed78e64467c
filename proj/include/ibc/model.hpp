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

#ifndef IBC_MODEL_HPP
#define IBC_MODEL_HPP

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ibc/numerics.hpp"

namespace ibc {

/// Two cells, indexed 0 and 1.
inline constexpr int kCells = 2;
inline constexpr int other_cell(int m) { return 1 - m; }

/// One value per user: values[m][k] for cell m, user k.
template <class T>
using PerUser = std::array<std::vector<T>, kCells>;

template <class T>
PerUser<T> make_per_user(int K, const T& init = T{}) {
  return {std::vector<T>(K, init), std::vector<T>(K, init)};
}

/// Static experiment parameters. Construct through Scenario::make, which
/// enforces the symmetric configuration M = N = K(L_s + 1), N_p = K L_s, and
/// K >= L_s so the cross-cell null space can hold L_s streams.
struct Scenario {
  int M = 0;   // transmit antennas per BS
  int N = 0;   // receive antennas per user
  int K = 0;   // users per cell
  int Ls = 0;  // streams per user
  int Np = 0;  // spread dimension
  std::array<double, kCells> power{};  // per-BS budget, linear
  double noise_var = 1.0;

  static Scenario make(int M, int K, int Ls, double power, double noise_var = 1.0);
  /// Same fields without validation; for symbolic cost accounting only.
  static Scenario unchecked(int M, int K, int Ls, double power = 1.0, double noise_var = 1.0);
  /// SNR = P / noise_var with noise_var = 1.
  static Scenario from_snr_db(int M, int K, int Ls, double snr_db);

  void validate() const;
  double tol_power(int m) const { return 1e-9 * power[m]; }
};

double db_to_linear(double db);

/// H_n^{[m,k]}: channel from BS n to user k of cell m, N x M.
class ChannelSet {
 public:
  ChannelSet() = default;
  ChannelSet(int K, int N, int M);

  const CMat& link(int bs, int cell, int user) const { return h_[index(bs, cell, user)]; }
  CMat& link(int bs, int cell, int user) { return h_[index(bs, cell, user)]; }

  int K() const { return K_; }
  int N() const { return N_; }
  int M() const { return M_; }

  /// FNV-1a over the raw entries; identifies a draw for pairing checks.
  std::uint64_t hash() const;

 private:
  std::size_t index(int bs, int cell, int user) const {
    return (static_cast<std::size_t>(bs) * kCells + cell) * K_ + user;
  }
  int K_ = 0, N_ = 0, M_ = 0;
  std::vector<CMat> h_;
};

enum class Scheme { kGzfia, kRzfia, kMaxwsr };
std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name);

struct TransceiverSet {
  PerUser<CMat> T;  // precoders, M x L_s
  PerUser<CMat> U;  // receive filters, N x L_s
  Scheme scheme = Scheme::kGzfia;

  int K() const { return static_cast<int>(T[0].size()); }
  double cell_power(int m) const;
};

/// Lambda^{[m,k]}, L_s x L_s.
using MseWeights = PerUser<CMat>;

struct ResidualInterference {
  double ici_power = 0.0;
  double iui_power = 0.0;
  double signal_power = 0.0;  // ||U^H H_m T^{[m,k]}||_F^2
};

/// Residuals normalized by each user's signal power, averaged over users.
struct ResidualSummary {
  double mean_ici = 0.0;
  double mean_iui = 0.0;
  double max_total = 0.0;  // max over users of (ici + iui) / signal
};

/// Per-iteration diagnostics shared by the iterative designers.
struct IterationRecord {
  int iter = 0;
  double objective_after_precoder = 0.0;
  double objective = 0.0;  // after the full iteration
  double sum_rate = 0.0;
  std::array<double, kCells> mu{};
  std::array<double, kCells> power{};
  ResidualSummary residual;
};

struct DesignTrace {
  double initial_objective = 0.0;
  std::vector<IterationRecord> iterations;
  int weight_updates = 0;
  int precoder_updates = 0;
  int receiver_updates = 0;
  std::vector<std::array<int, 2>> zero_weight_users;  // (m, k)
};

namespace model {

ChannelSet draw_channels(const Scenario& scenario, std::uint64_t seed);

/// sigma^2 I + sum over (n,i) != (m,k) of H_n^{[m,k]} T^{[n,i]} T^{[n,i]H} H_n^{[m,k]H}.
CMat interference_plus_noise_cov(const ChannelSet& ch, const TransceiverSet& tx, int m, int k,
                                 double noise_var);

/// Rate after the receive filter: log2 det(I + F^H (B^H Q B)^{-1} F), F = B^H H T,
/// B an orthonormal basis of range(U[m][k]) and Q the interference-plus-noise
/// covariance. Equals user_rate_optimal when U spans the MMSE filter's range;
/// falls back to it when no filter is set for the user.
double user_rate(const ChannelSet& ch, const TransceiverSet& tx, int m, int k, double noise_var);

/// log2 det(I + T^H H^H Q^{-1} H T); the rate with an optimal receiver, independent of U.
double user_rate_optimal(const ChannelSet& ch, const TransceiverSet& tx, int m, int k,
                         double noise_var);

double cell_sum_rate(const ChannelSet& ch, const TransceiverSet& tx, int m, double noise_var);
double sum_rate(const ChannelSet& ch, const TransceiverSet& tx, double noise_var);

ResidualInterference residual_interference(const ChannelSet& ch, const TransceiverSet& tx, int m,
                                           int k);

ResidualSummary summarize_residuals(const ChannelSet& ch, const TransceiverSet& tx);

/// Closed-form weighted MSE with spread-domain precoders V (N_p x L_s) and
/// H-bar = H P. Equals sum over users of E||Lambda s - U^H y||^2.
double wmse_objective(const ChannelSet& ch, const CMat& P, const PerUser<CMat>& V,
                      const PerUser<CMat>& U, const MseWeights& weights, double noise_var);

}  // namespace model
}  // namespace ibc

#endif  // IBC_MODEL_HPP
