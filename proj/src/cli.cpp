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

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ibc/gzfia.hpp"
#include "ibc/harness.hpp"
#include "ibc/metrics.hpp"
#include "ibc/rzfia.hpp"

namespace ibc::harness {

namespace {

struct CliOptions {
  int M = 6;
  int K = 2;
  int Ls = 2;
  std::string snr_db;  // empty: subcommand default
  std::string i1;
  std::string scheme = "all";
  int I2 = 30;
  int trials = 500;
  std::uint64_t seed = 1;
  std::string out;
  std::string p_mode = "deterministic";
  std::string wsr_init = "random";
  int threads = 0;
  bool debug_hash = false;
  long c_svd = 4;
  bool reuse_factorization = false;
};

std::string default_out(const std::string& name) {
  const char* dir = std::getenv("IBC_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0') return name + ".csv";
  return (std::filesystem::path(dir) / (name + ".csv")).string();
}

ExperimentConfig make_config(const CliOptions& o, const std::string& snr_default,
                             const std::string& i1_default) {
  ExperimentConfig c;
  c.M = o.M;
  c.K = o.K;
  c.Ls = o.Ls;
  c.snr_db = parse_real_list(o.snr_db.empty() ? snr_default : o.snr_db);
  c.i1_list = parse_int_list(o.i1.empty() ? i1_default : o.i1);
  c.I2 = o.I2;
  c.trials = o.trials;
  c.base_seed = o.seed;
  c.schemes = parse_scheme_list(o.scheme);
  c.p_mode = parse_p_mode(o.p_mode);
  if (o.wsr_init == "random") {
    c.wsr_init = maxwsr::Init::kRandom;
  } else if (o.wsr_init == "gzfia") {
    c.wsr_init = maxwsr::Init::kGzfia;
  } else {
    throw InvalidArgument("wsr-init must be random or gzfia");
  }
  c.threads = o.threads;
  c.debug_hash = o.debug_hash;
  c.validate();
  return c;
}

int run_sweep(const CliOptions& o, const std::string& name, const std::string& snr_default,
              const std::string& i1_default) {
  const ExperimentConfig c = make_config(o, snr_default, i1_default);
  const ExperimentResult r = run_experiment(c);
  const std::string path = o.out.empty() ? default_out(name) : o.out;
  emit_csv(r, path);
  for (const std::string& line : r.log) std::cerr << line << '\n';
  std::printf("%-7s %8s %4s %12s %10s\n", "scheme", "snr_db", "i1", "sum_rate", "std_err");
  for (const ResultRow& row : r.rows) {
    std::printf("%-7s %8g %4d %12.4f %10.4f\n", std::string(scheme_name(row.scheme)).c_str(),
                row.snr_db, row.i1, row.mean_sum_rate, row.std_err);
  }
  std::printf("wrote %s and %s.trace.csv\n", path.c_str(), path.c_str());
  return 0;
}

int run_cost(const CliOptions& o) {
  const Scenario s = Scenario::make(o.M, o.K, o.Ls, 1.0);
  const std::vector<int> i1s = parse_int_list(o.i1.empty() ? "1:30" : o.i1);
  if (o.I2 < 1) throw InvalidArgument("I2 must be >= 1");
  if (o.c_svd < 1) throw InvalidArgument("c-svd must be >= 1");
  metrics::CostModel cm;
  cm.c_svd = o.c_svd;
  cm.reuse_factorization = o.reuse_factorization;
  const metrics::CostBreakdown rz = metrics::count_rzfia(s, o.I2, cm);
  const metrics::CostBreakdown ws = metrics::count_maxwsr(s, o.I2, cm);
  const metrics::ExchangeReport ez = metrics::count_exchange(Scheme::kRzfia, s, 0);
  const metrics::ExchangeReport ew = metrics::count_exchange(Scheme::kMaxwsr, s, 0);

  const std::string path = o.out.empty() ? default_out("cost") : o.out;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << "i1,rzfia_mults,maxwsr_mults,rzfia_exchange,maxwsr_exchange\n";
  std::printf("# %s\n# %s\n", ez.header.c_str(), ew.header.c_str());
  std::printf("%4s %14s %14s %10s %10s\n", "i1", "rzfia_mults", "maxwsr_mults", "rzfia_exch",
              "maxwsr_exch");
  for (int i1 : i1s) {
    if (i1 < 0) throw InvalidArgument("I1 must be >= 0");
    f << i1 << ',' << rz.total(i1) << ',' << ws.total(i1) << ',' << ez.at(i1) << ','
      << ew.at(i1) << '\n';
    std::printf("%4d %14lld %14lld %10lld %10lld\n", i1, static_cast<long long>(rz.total(i1)),
                static_cast<long long>(ws.total(i1)), static_cast<long long>(ez.at(i1)),
                static_cast<long long>(ew.at(i1)));
  }
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
  std::printf("wrote %s\n", path.c_str());
  return 0;
}

// Invariant checks on a handful of seeded draws; prints one line per check.
int run_selftest(const CliOptions& o) {
  const int draws = std::min(o.trials, 20);
  const Scenario base = Scenario::from_snr_db(o.M, o.K, o.Ls, 20.0);
  const CMat P = numerics::spreading_matrix(base.M, base.Np, parse_p_mode(o.p_mode));
  constexpr int kIters = 10;

  struct Check {
    const char* name;
    bool ok = true;
    double worst = 0.0;
  };
  Check zf{"gzfia residual interference < 1e-12"};
  Check wf{"water-filling >= uniform allocation"};
  Check indep{"gzfia cell rate independent of other-cell power"};
  Check descent{"rzfia WMSE nonincreasing"};
  Check weights{"weight computations: rzfia 1, maxwsr I1"};
  Check power{"per-cell power within budget, tight when mu > 0"};

  auto check_power = [&](const IterationRecord& rec, const Scenario& s) {
    for (int m = 0; m < kCells; ++m) {
      const double p = rec.power[m];
      if (p > s.power[m] * (1.0 + 1e-9)) power.ok = false;
      if (rec.mu[m] > 0.0 && p < 0.99 * s.power[m]) power.ok = false;
    }
  };

  for (int t = 0; t < draws; ++t) {
    const std::uint64_t seed = o.seed ^ static_cast<std::uint64_t>(t);
    const ChannelSet ch = model::draw_channels(base, seed);
    const gzfia::GzfDesign g = gzfia::design(ch, base, P);

    const ResidualSummary rs = model::summarize_residuals(ch, g.tx);
    zf.worst = std::max(zf.worst, rs.max_total);
    if (!(rs.max_total < 1e-12)) zf.ok = false;

    for (int m = 0; m < kCells; ++m) {
      RVec gains(base.K * base.Ls);
      RVec phi(base.K * base.Ls);
      for (int k = 0; k < base.K; ++k) {
        gains.segment(k * base.Ls, base.Ls) = g.sigma_hat[m][k].array().square();
        phi.segment(k * base.Ls, base.Ls) = g.phi[m][k];
      }
      const RVec uniform = RVec::Constant(gains.size(), base.power[m] / gains.size());
      const double a = numerics::water_fill_objective(gains, phi, base.noise_var);
      const double b = numerics::water_fill_objective(gains, uniform, base.noise_var);
      if (a < b - 1e-12) wf.ok = false;
    }

    Scenario scaled = base;
    scaled.power[1] *= 10.0;
    const gzfia::GzfDesign g2 = gzfia::design(ch, scaled, P);
    const double d = std::abs(model::cell_sum_rate(ch, g.tx, 0, base.noise_var) -
                              model::cell_sum_rate(ch, g2.tx, 0, scaled.noise_var));
    indep.worst = std::max(indep.worst, d);
    if (!(d < 1e-8)) indep.ok = false;

    rzfia::RzfConfig rc;
    rc.I1 = kIters;
    rc.I2 = o.I2;
    const rzfia::RzfResult rz = rzfia::run(ch, base, g, rc);
    double prev = rz.trace.initial_objective;
    for (const IterationRecord& rec : rz.trace.iterations) {
      const double tol = 1e-9 * std::max(1.0, std::abs(prev));
      if (rec.objective_after_precoder > prev + tol || rec.objective > rec.objective_after_precoder + tol) {
        descent.ok = false;
      }
      prev = rec.objective;
      check_power(rec, base);
    }

    maxwsr::WsrConfig wc;
    wc.I1 = kIters;
    wc.I2 = o.I2;
    wc.init_seed = seed;
    const maxwsr::WsrResult ws = maxwsr::run(ch, base, wc);
    for (const IterationRecord& rec : ws.trace.iterations) check_power(rec, base);

    if (rz.trace.weight_updates != 1 || ws.trace.weight_updates != kIters) weights.ok = false;
  }

  int failures = 0;
  for (const Check* c : {&zf, &wf, &indep, &descent, &weights, &power}) {
    std::printf("%s  %s", c->ok ? "PASS" : "FAIL", c->name);
    if (c->worst > 0.0) std::printf(" (worst %.3g)", c->worst);
    std::printf("\n");
    if (!c->ok) ++failures;
  }
  std::printf("%d draws, %d failed checks\n", draws, failures);
  return failures == 0 ? 0 : 2;
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Transceiver design for the two-cell MIMO interfering broadcast channel"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags override its values");

  CliOptions o;
  app.add_option("--m", o.M, "transmit antennas per BS (N = M)")->capture_default_str();
  app.add_option("--k", o.K, "users per cell")->capture_default_str();
  app.add_option("--ls", o.Ls, "streams per user")->capture_default_str();
  // Lists arrive either as one token or, from a config file, split at commas.
  std::vector<std::string> snr_tokens, i1_tokens, scheme_tokens;
  app.add_option("--snr-db", snr_tokens, "SNR list: a:b:step or a,b,c")->delimiter(',');
  app.add_option("--i1", i1_tokens, "outer iteration list")->delimiter(',');
  app.add_option("--i2", o.I2, "bisection steps per precoder update")->capture_default_str();
  app.add_option("--trials", o.trials, "Monte Carlo trials per SNR")->capture_default_str();
  app.add_option("--seed", o.seed, "base seed")->capture_default_str();
  app.add_option("--scheme", scheme_tokens, "all or a comma list of gzfia,rzfia,maxwsr")
      ->delimiter(',');
  app.add_option("--out", o.out, "output CSV path (default $IBC_OUTPUT_DIR/<command>.csv)");
  app.add_option("--p-mode", o.p_mode, "spreading matrix: deterministic or seeded[:seed]")
      ->capture_default_str();
  app.add_option("--wsr-init", o.wsr_init, "max-WSR initialization: random or gzfia")
      ->capture_default_str();
  app.add_option("--threads", o.threads, "OpenMP threads (0: runtime default)")
      ->capture_default_str();
  app.add_flag("--debug-hash", o.debug_hash, "write per-trial channel hashes");
  app.add_option("--c-svd", o.c_svd, "SVD cost constant")->capture_default_str();
  app.add_flag("--reuse-factorization", o.reuse_factorization,
               "count one factorization per precoder update");

  CLI::App* sweep = app.add_subcommand("sweep", "sum rate vs SNR for each I1");
  CLI::App* converge = app.add_subcommand("converge", "sum rate vs iteration at fixed SNRs");
  CLI::App* cost = app.add_subcommand("cost", "multiplication and exchange counts vs I1");
  CLI::App* selftest = app.add_subcommand("selftest", "invariant checks on seeded draws");
  for (CLI::App* sub : {sweep, converge, cost, selftest}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  auto join = [](const std::vector<std::string>& parts) {
    std::string s;
    for (const std::string& p : parts) s += (s.empty() ? "" : ",") + p;
    return s;
  };
  o.snr_db = join(snr_tokens);
  o.i1 = join(i1_tokens);
  if (!scheme_tokens.empty()) o.scheme = join(scheme_tokens);

  try {
    if (sweep->parsed()) return run_sweep(o, "sweep", "0:50:10", "1,2");
    if (converge->parsed()) return run_sweep(o, "converge", "10,30", "100");
    if (cost->parsed()) return run_cost(o);
    if (selftest->parsed()) return run_selftest(o);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const DegenerateChannel& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace ibc::harness
