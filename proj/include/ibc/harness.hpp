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

#ifndef IBC_HARNESS_HPP
#define IBC_HARNESS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ibc/maxwsr.hpp"
#include "ibc/model.hpp"

namespace ibc::harness {

/// Monte Carlo sweep over SNR x scheme x I1. Every scheme of a trial sees the
/// same channel draw; trial t uses seed base_seed ^ t.
struct ExperimentConfig {
  int M = 6;
  int K = 2;
  int Ls = 2;
  std::vector<double> snr_db{0, 10, 20, 30, 40, 50};
  std::vector<Scheme> schemes{Scheme::kGzfia, Scheme::kRzfia, Scheme::kMaxwsr};
  std::vector<int> i1_list{1, 2};
  int I2 = 30;
  int trials = 500;
  std::uint64_t base_seed = 1;
  numerics::SpreadMode p_mode = numerics::SpreadMode::deterministic();
  maxwsr::Init wsr_init = maxwsr::Init::kRandom;
  int threads = 0;  // 0: OpenMP default
  bool debug_hash = false;

  void validate() const;
  Scenario scenario_at(double snr_db) const;
  int max_i1() const;
};

struct ResultRow {
  Scheme scheme = Scheme::kGzfia;
  double snr_db = 0.0;
  int i1 = 0;
  int trials = 0;
  double mean_sum_rate = 0.0;
  double std_err = 0.0;
  double mean_residual_ici = 0.0;  // mean over trials and users of ici / signal
  double mean_residual_iui = 0.0;
  double mean_mu = 0.0;            // mean over trials and BSs; 0 for gzfia
  std::vector<double> per_trial;   // sum rate per trial, trial order
};

struct TraceRow {
  Scheme scheme = Scheme::kGzfia;
  double snr_db = 0.0;
  int iter = 0;
  double mean_sum_rate = 0.0;
};

struct TrialHash {
  double snr_db = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::kGzfia;
  std::uint64_t channel_hash = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;   // ordered scheme, snr, i1 as configured
  std::vector<TraceRow> trace;   // iterations 1..max(i1_list)
  std::vector<TrialHash> hashes; // filled when debug_hash is set
  int replaced_draws = 0;        // degenerate draws re-drawn
  std::vector<std::string> log;
};

enum class Execution { kParallel, kSerial };

ExperimentResult run_experiment(const ExperimentConfig& config,
                                Execution exec = Execution::kParallel);

/// Single-threaded reference path; must agree bit-for-bit with the parallel one.
inline ExperimentResult run_experiment_serial(const ExperimentConfig& config) {
  return run_experiment(config, Execution::kSerial);
}

struct MeanStdErr {
  double mean = 0.0;
  double std_err = 0.0;
};

/// Two-pass mean and standard error of the mean (0 for a single sample).
MeanStdErr summarize(std::span<const double> xs);

/// Welford accumulator; independent route to the same statistics.
class StreamingMoments {
 public:
  void push(double x);
  MeanStdErr result() const;
  long count() const { return n_; }

 private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Paired z-score of mean(a - b); a and b are per-trial values in trial order.
double paired_z(std::span<const double> a, std::span<const double> b);

/// Writes <path> and <path>.trace.csv (and <path>.hashes.csv with debug hashes).
void emit_csv(const ExperimentResult& result, const std::string& path);

std::vector<ResultRow> parse_result_csv(const std::string& path);
std::vector<TraceRow> parse_trace_csv(const std::string& path);

/// Parses "a:b:step", "a:b" (step 1) or "a,b,c".
std::vector<double> parse_real_list(const std::string& spec);
std::vector<int> parse_int_list(const std::string& spec);
std::vector<Scheme> parse_scheme_list(const std::string& spec);
numerics::SpreadMode parse_p_mode(const std::string& spec);

/// CLI entry point; 0 success, 1 validation error, 2 numerical failure.
int cli_main(int argc, char** argv);

}  // namespace ibc::harness

#endif  // IBC_HARNESS_HPP
