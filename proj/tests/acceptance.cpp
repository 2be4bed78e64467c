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


// Acceptance checks for the full system. Prints one PASS/FAIL line per
// criterion and exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ibc/gzfia.hpp"
#include "ibc/harness.hpp"
#include "ibc/maxwsr.hpp"
#include "ibc/metrics.hpp"
#include "ibc/rzfia.hpp"

using namespace ibc;

namespace {

// Pinned thresholds.
constexpr int kM = 6, kK = 2, kLs = 2;
constexpr int kI2 = 30;
constexpr double kZfTol = 1e-12;
constexpr double kSlopeRelTol = 0.05;
constexpr double kGridTolBits = 1e-2;
constexpr double kDescentRelTol = 1e-9;
constexpr double kZMin = 2.0;
constexpr double kIndepTol = 1e-8;
constexpr double kPowerRelTol = 1e-9;
constexpr double kTightFrac = 0.99;
constexpr double kReachFrac = 0.95;

const std::vector<double> kSnrGrid{0, 10, 20, 30, 40, 50};

Scenario scenario(double snr_db) { return Scenario::from_snr_db(kM, kK, kLs, snr_db); }

std::uint64_t trial_seed(int t) { return 1ULL ^ static_cast<std::uint64_t>(t); }

// Criterion 12 is checked on every precoder update made below.
struct PowerAudit {
  long updates = 0;
  long over = 0;
  long loose = 0;
  double worst_over = 0.0;
  double worst_loose = 1.0;

  void check(const DesignTrace& trace, const Scenario& s) {
    for (const IterationRecord& rec : trace.iterations) {
      for (int m = 0; m < kCells; ++m) {
        ++updates;
        const double ratio = rec.power[m] / s.power[m];
        if (rec.power[m] > s.power[m] * (1.0 + kPowerRelTol)) {
          ++over;
          worst_over = std::max(worst_over, ratio - 1.0);
        }
        if (rec.mu[m] > 0.0 && ratio < kTightFrac) {
          ++loose;
          worst_loose = std::min(worst_loose, ratio);
        }
      }
    }
  }
} audit;

struct WeightAudit {
  long runs = 0;
  long bad = 0;
} weight_audit;

rzfia::RzfResult run_rzf(const ChannelSet& ch, const Scenario& s, const gzfia::GzfDesign& g,
                         int I1) {
  rzfia::RzfConfig c;
  c.I1 = I1;
  c.I2 = kI2;
  rzfia::RzfResult r = rzfia::run(ch, s, g, c);
  audit.check(r.trace, s);
  ++weight_audit.runs;
  if (r.trace.weight_updates != 1) ++weight_audit.bad;
  return r;
}

maxwsr::WsrResult run_wsr(const ChannelSet& ch, const Scenario& s, std::uint64_t seed, int I1) {
  maxwsr::WsrConfig c;
  c.I1 = I1;
  c.I2 = kI2;
  c.init_seed = seed;
  maxwsr::WsrResult r = maxwsr::run(ch, s, c);
  audit.check(r.trace, s);
  ++weight_audit.runs;
  if (r.trace.weight_updates != I1) ++weight_audit.bad;
  return r;
}

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail, double seconds) {
  std::printf("%s  [%2d] %s: %s (%.1fs)\n", ok ? "PASS" : "FAIL", id, name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

template <class F>
void timed(int id, const char* name, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, name, ok, detail, dt);
}

double mode_rate(const RVec& sigma, const RVec& phi) {
  double r = 0.0;
  for (Eigen::Index j = 0; j < sigma.size(); ++j) r += std::log2(1.0 + sigma(j) * sigma(j) * phi(j));
  return r;
}

int iterations_to_reach(const DesignTrace& trace, double frac) {
  const double target = frac * trace.iterations.back().sum_rate;
  for (const IterationRecord& rec : trace.iterations) {
    if (rec.sum_rate >= target) return rec.iter;
  }
  return static_cast<int>(trace.iterations.size());
}

}  // namespace

int main() {
  timed(1, "zero-forcing exactness", [](std::string& d) {
    double worst = 0.0;
    const int draws = 1000;
    for (int t = 0; t < draws; ++t) {
      const Scenario s = scenario(kSnrGrid[t % kSnrGrid.size()]);
      const ChannelSet ch = model::draw_channels(s, trial_seed(t));
      const gzfia::GzfDesign g = gzfia::design(ch, s);
      worst = std::max(worst, model::summarize_residuals(ch, g.tx).max_total);
    }
    d = fmt("max (ICI+IUI)/signal over %d draws = %.3g < %.0e", draws, worst, kZfTol);
    return worst < kZfTol;
  });

  timed(2, "DoF slope", [](std::string& d) {
    const int trials = 500;
    double r40 = 0.0, r50 = 0.0;
    for (int t = 0; t < trials; ++t) {
      const ChannelSet ch = model::draw_channels(scenario(40), trial_seed(t));
      r40 += model::sum_rate(ch, gzfia::design(ch, scenario(40)).tx, 1.0);
      r50 += model::sum_rate(ch, gzfia::design(ch, scenario(50)).tx, 1.0);
    }
    const double slope = (r50 - r40) / trials;
    const double expect = 2.0 * kK * kLs * std::log2(10.0);  // 2KL_s streams over 10 dB
    d = fmt("rate(50 dB) - rate(40 dB) = %.3f bits, expected %.3f +/- %.0f%%", slope, expect,
            100 * kSlopeRelTol);
    return std::abs(slope - expect) <= kSlopeRelTol * expect;
  });

  timed(3, "water-filling optimality", [](std::string& d) {
    int below_uniform = 0;
    const int draws = 1000;
    for (int t = 0; t < draws; ++t) {
      const Scenario s = scenario(kSnrGrid[t % kSnrGrid.size()]);
      const ChannelSet ch = model::draw_channels(s, trial_seed(t));
      const gzfia::GzfDesign g = gzfia::design(ch, s);
      for (int m = 0; m < kCells; ++m) {
        double wf = 0.0, uni = 0.0;
        for (int k = 0; k < kK; ++k) {
          wf += mode_rate(g.sigma_hat[m][k], g.phi[m][k]);
          uni += mode_rate(g.sigma_hat[m][k], RVec::Constant(kLs, s.power[m] / (kK * kLs)));
        }
        if (wf < uni - 1e-12) ++below_uniform;
      }
    }
    // 4-d grid oracle with step P/50 on 20 draws.
    double worst_gap = 0.0;
    const int steps = 50;
    for (int t = 0; t < 20; ++t) {
      const Scenario s = scenario(10);
      const ChannelSet ch = model::draw_channels(s, trial_seed(5000 + t));
      const gzfia::GzfDesign g = gzfia::design(ch, s);
      RVec sig(4);
      sig << g.sigma_hat[0][0], g.sigma_hat[0][1];
      RVec phi(4);
      phi << g.phi[0][0], g.phi[0][1];
      const double wf = mode_rate(sig, phi);
      double best = 0.0;
      RVec a(4);
      for (int i = 0; i <= steps; ++i) {
        for (int j = 0; i + j <= steps; ++j) {
          for (int l = 0; i + j + l <= steps; ++l) {
            a << i, j, l, steps - i - j - l;
            best = std::max(best, mode_rate(sig, a * (s.power[0] / steps)));
          }
        }
      }
      worst_gap = std::max(worst_gap, std::abs(wf - best));
      if (wf < best - 1e-12) ++below_uniform;
    }
    d = fmt("%d cells below uniform or grid; max |water-fill - grid| = %.2e bits < %.0e",
            below_uniform, worst_gap, kGridTolBits);
    return below_uniform == 0 && worst_gap < kGridTolBits;
  });

  timed(4, "RZF-IA descent", [](std::string& d) {
    const int draws = 1000, I1 = 50;
    long violations = 0;
    double worst = 0.0;
    for (int t = 0; t < draws; ++t) {
      const Scenario s = scenario(kSnrGrid[t % kSnrGrid.size()]);
      const ChannelSet ch = model::draw_channels(s, trial_seed(t));
      const rzfia::RzfResult r = run_rzf(ch, s, gzfia::design(ch, s), I1);
      double prev = r.trace.initial_objective;
      for (const IterationRecord& rec : r.trace.iterations) {
        for (double v : {rec.objective_after_precoder, rec.objective}) {
          const double rise = (v - prev) / std::abs(prev);
          worst = std::max(worst, rise);
          if (rise > kDescentRelTol) ++violations;
          prev = v;
        }
      }
    }
    d = fmt("%ld half-steps rose by more than %.0e relative over %d draws x %d iterations "
            "(max relative rise %.2e)",
            violations, kDescentRelTol, draws, I1, worst);
    return violations == 0;
  });

  // Criteria 6-8 run before 5 and 12, which audit their traces.
  std::string c5_detail;

  timed(6, "small-I1 ordering", [](std::string& d) {
    const int trials = 500, I1 = 2;
    bool ok = true;
    for (double snr : {20.0, 30.0, 40.0}) {
      const Scenario s = scenario(snr);
      std::vector<double> gz(trials), rz(trials), ws(trials);
      for (int t = 0; t < trials; ++t) {
        const ChannelSet ch = model::draw_channels(s, trial_seed(t));
        const gzfia::GzfDesign g = gzfia::design(ch, s);
        gz[t] = model::sum_rate(ch, g.tx, 1.0);
        rz[t] = model::sum_rate(ch, run_rzf(ch, s, g, I1).tx, 1.0);
        ws[t] = model::sum_rate(ch, run_wsr(ch, s, trial_seed(t), I1).tx, 1.0);
      }
      const double z_ws = harness::paired_z(rz, ws);
      const double z_gz = harness::paired_z(rz, gz);
      const double m_rz = harness::summarize(rz).mean;
      const double m_ws = harness::summarize(ws).mean;
      const double m_gz = harness::summarize(gz).mean;
      ok = ok && m_rz > m_ws && m_rz > m_gz && z_ws > kZMin && z_gz > kZMin;
      d += fmt("%s%g dB: rzfia %.2f, maxwsr %.2f (z %.1f), gzfia %.2f (z %.1f)", d.empty() ? "" : "; ",
               snr, m_rz, m_ws, z_ws, m_gz, z_gz);
    }
    return ok;
  });

  timed(7, "large-I1 ordering", [](std::string& d) {
    const int trials = 300, I1 = 100;
    const Scenario s = scenario(10);
    std::vector<double> rz(trials), ws(trials);
    for (int t = 0; t < trials; ++t) {
      const ChannelSet ch = model::draw_channels(s, trial_seed(t));
      rz[t] = model::sum_rate(ch, run_rzf(ch, s, gzfia::design(ch, s), I1).tx, 1.0);
      ws[t] = model::sum_rate(ch, run_wsr(ch, s, trial_seed(t), I1).tx, 1.0);
    }
    const double z = harness::paired_z(ws, rz);
    const double m_rz = harness::summarize(rz).mean, m_ws = harness::summarize(ws).mean;
    d = fmt("10 dB, I1=100: maxwsr %.2f vs rzfia %.2f, paired z %.1f > %.0f", m_ws, m_rz, z, kZMin);
    return m_ws > m_rz && z > kZMin;
  });

  timed(8, "faster convergence", [](std::string& d) {
    const int draws = 300, I1 = 100;
    const Scenario s = scenario(20);
    double it_rz = 0.0, it_ws = 0.0;
    for (int t = 0; t < draws; ++t) {
      const ChannelSet ch = model::draw_channels(s, trial_seed(t));
      it_rz += iterations_to_reach(run_rzf(ch, s, gzfia::design(ch, s), I1).trace, kReachFrac);
      it_ws += iterations_to_reach(run_wsr(ch, s, trial_seed(t), I1).trace, kReachFrac);
    }
    it_rz /= draws;
    it_ws /= draws;
    d = fmt("mean iterations to 95%% of own I1=100 rate at 20 dB: rzfia %.2f <= maxwsr %.2f", it_rz,
            it_ws);
    return it_rz <= it_ws;
  });

  timed(5, "one-shot weights", [](std::string& d) {
    d = fmt("%ld designer runs from criteria 4, 6-8; %ld with a weight count other than "
            "1 (rzfia) or I1 (maxwsr)",
            weight_audit.runs, weight_audit.bad);
    return weight_audit.runs > 0 && weight_audit.bad == 0;
  });

  timed(9, "complexity ordering", [](std::string& d) {
    bool ok = true;
    int cases = 0;
    for (int K : {2, 3}) {
      for (int Ls : {1, 2, 3}) {
        const Scenario s = Scenario::unchecked(K * (Ls + 1), K, Ls);
        for (int I2 : {10, kI2}) {
          const metrics::CostBreakdown rz = metrics::count_rzfia(s, I2);
          const metrics::CostBreakdown ws = metrics::count_maxwsr(s, I2);
          ok = ok && rz.per_iteration() < ws.per_iteration();
          for (int I1 = 1; I1 < 30; ++I1) {
            ok = ok && metrics::count_rzfia(s, I1 + 1, I2) - metrics::count_rzfia(s, I1, I2) ==
                           rz.per_iteration();
            ok = ok && metrics::count_maxwsr(s, I1 + 1, I2) - metrics::count_maxwsr(s, I1, I2) ==
                           ws.per_iteration();
          }
          ++cases;
        }
      }
    }
    const Scenario s = Scenario::make(kM, kK, kLs, 1.0);
    d = fmt("%d grid cases; M=6 K=2 L_s=2 I2=10: rzfia %lld < maxwsr %lld per iteration", cases,
            static_cast<long long>(metrics::count_rzfia(s, 10).per_iteration()),
            static_cast<long long>(metrics::count_maxwsr(s, 10).per_iteration()));
    return ok;
  });

  timed(10, "exchange ordering", [](std::string& d) {
    bool ok = true;
    for (int K : {2, 3}) {
      for (int Ls : {1, 2, 3}) {
        const Scenario s = Scenario::unchecked(K * (Ls + 1), K, Ls);
        ok = ok && metrics::count_exchange(Scheme::kRzfia, s, 1).per_iteration <=
                       metrics::count_exchange(Scheme::kMaxwsr, s, 1).per_iteration;
      }
    }
    const Scenario s = Scenario::make(kM, kK, kLs, 1.0);
    d = fmt("M=6 K=2 L_s=2: rzfia %lld <= maxwsr %lld scalars per iteration",
            static_cast<long long>(metrics::count_exchange(Scheme::kRzfia, s, 1).per_iteration),
            static_cast<long long>(metrics::count_exchange(Scheme::kMaxwsr, s, 1).per_iteration));
    return ok;
  });

  timed(11, "other-cell independence", [](std::string& d) {
    double worst = 0.0;
    const int draws = 1000;
    for (int t = 0; t < draws; ++t) {
      const Scenario s = scenario(kSnrGrid[t % kSnrGrid.size()]);
      const ChannelSet ch = model::draw_channels(s, trial_seed(t));
      const gzfia::GzfDesign g = gzfia::design(ch, s);
      for (int m = 0; m < kCells; ++m) {
        Scenario scaled = s;
        scaled.power[other_cell(m)] *= 10.0;
        const gzfia::GzfDesign h = gzfia::design(ch, scaled);
        worst = std::max(worst, std::abs(model::cell_sum_rate(ch, g.tx, m, 1.0) -
                                         model::cell_sum_rate(ch, h.tx, m, 1.0)));
      }
    }
    d = fmt("max cell-rate change with the other budget x10 over %d draws = %.2e < %.0e", draws,
            worst, kIndepTol);
    return worst < kIndepTol;
  });

  timed(12, "bisection feasibility", [](std::string& d) {
    d = fmt("%ld per-cell precoder updates from criteria 4, 6-8: %ld above P(1+1e-9) "
            "(worst +%.2e), %ld with mu > 0 below 0.99 P (worst %.4f)",
            audit.updates, audit.over, audit.worst_over, audit.loose, audit.worst_loose);
    return audit.updates > 0 && audit.over == 0 && audit.loose == 0;
  });

  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
