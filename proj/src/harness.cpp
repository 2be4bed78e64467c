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

#include "ibc/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>

#include "ibc/gzfia.hpp"
#include "ibc/rzfia.hpp"

namespace ibc::harness {

namespace {

constexpr int kMaxRedraws = 16;

struct SchemeOutcome {
  std::vector<double> rate;  // per iteration 1..max_i1
  std::vector<double> ici;
  std::vector<double> iui;
  std::vector<double> mu;
  std::uint64_t channel_hash = 0;
};

struct TrialOutcome {
  std::vector<SchemeOutcome> per_scheme;  // config.schemes order
  std::uint64_t seed = 0;
  int replacements = 0;
};

bool needs_gzf(const ExperimentConfig& c) {
  return std::any_of(c.schemes.begin(), c.schemes.end(), [](Scheme s) {
    return s == Scheme::kGzfia || s == Scheme::kRzfia;
  });
}

SchemeOutcome from_trace(const DesignTrace& trace) {
  SchemeOutcome o;
  for (const IterationRecord& rec : trace.iterations) {
    o.rate.push_back(rec.sum_rate);
    o.ici.push_back(rec.residual.mean_ici);
    o.iui.push_back(rec.residual.mean_iui);
    o.mu.push_back(0.5 * (rec.mu[0] + rec.mu[1]));
  }
  return o;
}

TrialOutcome run_trial(const ExperimentConfig& config, const Scenario& scenario, const CMat& P,
                       int trial) {
  TrialOutcome out;
  const int iters = config.max_i1();
  const std::uint64_t seed0 = config.base_seed ^ static_cast<std::uint64_t>(trial);

  ChannelSet ch;
  gzfia::GzfDesign gzf;
  for (int attempt = 0;; ++attempt) {
    out.seed = attempt == 0 ? seed0 : numerics::splitmix64(seed0 + 0x632be59bd9b4e019ULL * attempt);
    ch = model::draw_channels(scenario, out.seed);
    if (!needs_gzf(config)) break;
    try {
      gzf = gzfia::design(ch, scenario, P);
      break;
    } catch (const DegenerateChannel&) {
      if (attempt + 1 >= kMaxRedraws) throw;
      ++out.replacements;
    }
  }

  for (Scheme s : config.schemes) {
    SchemeOutcome o;
    switch (s) {
      case Scheme::kGzfia: {
        const double rate = model::sum_rate(ch, gzf.tx, scenario.noise_var);
        const ResidualSummary r = model::summarize_residuals(ch, gzf.tx);
        o.rate.assign(iters, rate);
        o.ici.assign(iters, r.mean_ici);
        o.iui.assign(iters, r.mean_iui);
        o.mu.assign(iters, 0.0);
        break;
      }
      case Scheme::kRzfia: {
        rzfia::RzfConfig rc;
        rc.I1 = iters;
        rc.I2 = config.I2;
        o = from_trace(rzfia::run(ch, scenario, gzf, rc).trace);
        break;
      }
      case Scheme::kMaxwsr: {
        maxwsr::WsrConfig wc;
        wc.I1 = iters;
        wc.I2 = config.I2;
        wc.init = config.wsr_init;
        wc.init_seed = out.seed;
        o = from_trace(maxwsr::run(ch, scenario, wc).trace);
        break;
      }
    }
    o.channel_hash = ch.hash();
    out.per_scheme.push_back(std::move(o));
  }
  return out;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double mean_of(const std::vector<double>& xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return xs.empty() ? 0.0 : acc / static_cast<double>(xs.size());
}

}  // namespace

void ExperimentConfig::validate() const {
  Scenario::make(M, K, Ls, 1.0).validate();
  if (trials < 1) throw InvalidArgument("experiment requires trials >= 1");
  if (snr_db.empty()) throw InvalidArgument("experiment requires a nonempty SNR list");
  if (schemes.empty()) throw InvalidArgument("experiment requires at least one scheme");
  if (i1_list.empty()) throw InvalidArgument("experiment requires a nonempty I1 list");
  for (int i1 : i1_list) {
    if (i1 < 1) throw InvalidArgument("experiment requires every I1 >= 1");
  }
  if (I2 < 1) throw InvalidArgument("experiment requires I2 >= 1");
  for (double s : snr_db) {
    if (!std::isfinite(s)) throw InvalidArgument("experiment requires finite SNR values");
  }
}

Scenario ExperimentConfig::scenario_at(double snr) const {
  return Scenario::from_snr_db(M, K, Ls, snr);
}

int ExperimentConfig::max_i1() const { return *std::max_element(i1_list.begin(), i1_list.end()); }

ExperimentResult run_experiment(const ExperimentConfig& config, Execution exec) {
  config.validate();
  const int n_snr = static_cast<int>(config.snr_db.size());
  const int trials = config.trials;
  const int total = n_snr * trials;
  const CMat P = numerics::spreading_matrix(config.M, config.K * config.Ls, config.p_mode);

  std::vector<Scenario> scenarios;
  for (double s : config.snr_db) scenarios.push_back(config.scenario_at(s));

  std::vector<TrialOutcome> outcomes(total);
  std::vector<std::exception_ptr> errors(total);
  auto body = [&](int idx) {
    try {
      outcomes[idx] = run_trial(config, scenarios[idx / trials], P, idx % trials);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  };

  if (exec == Execution::kSerial) {
    for (int idx = 0; idx < total; ++idx) body(idx);
  } else {
    const int nt = config.threads > 0 ? config.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (int idx = 0; idx < total; ++idx) body(idx);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Reduction in (snr, trial) order regardless of execution order.
  ExperimentResult res;
  for (int idx = 0; idx < total; ++idx) res.replaced_draws += outcomes[idx].replacements;
  res.log.push_back("replaced degenerate channel draws: " + std::to_string(res.replaced_draws));

  const int iters = config.max_i1();
  for (std::size_t si = 0; si < config.schemes.size(); ++si) {
    const Scheme scheme = config.schemes[si];
    for (int s = 0; s < n_snr; ++s) {
      const TrialOutcome* block = &outcomes[static_cast<std::size_t>(s) * trials];
      for (int i1 : config.i1_list) {
        ResultRow row;
        row.scheme = scheme;
        row.snr_db = config.snr_db[s];
        row.i1 = i1;
        row.trials = trials;
        std::vector<double> ici, iui, mu;
        for (int t = 0; t < trials; ++t) {
          const SchemeOutcome& o = block[t].per_scheme[si];
          row.per_trial.push_back(o.rate[i1 - 1]);
          ici.push_back(o.ici[i1 - 1]);
          iui.push_back(o.iui[i1 - 1]);
          mu.push_back(o.mu[i1 - 1]);
        }
        const MeanStdErr st = summarize(row.per_trial);
        row.mean_sum_rate = st.mean;
        row.std_err = st.std_err;
        row.mean_residual_ici = mean_of(ici);
        row.mean_residual_iui = mean_of(iui);
        row.mean_mu = mean_of(mu);
        res.rows.push_back(std::move(row));
      }
      for (int it = 1; it <= iters; ++it) {
        std::vector<double> rates;
        for (int t = 0; t < trials; ++t) rates.push_back(block[t].per_scheme[si].rate[it - 1]);
        res.trace.push_back({scheme, config.snr_db[s], it, mean_of(rates)});
      }
      if (config.debug_hash) {
        for (int t = 0; t < trials; ++t) {
          res.hashes.push_back({config.snr_db[s], t, block[t].seed, scheme,
                                block[t].per_scheme[si].channel_hash});
        }
      }
    }
  }
  return res;
}

MeanStdErr summarize(std::span<const double> xs) {
  MeanStdErr out;
  if (xs.empty()) return out;
  const double n = static_cast<double>(xs.size());
  double acc = 0.0;
  for (double x : xs) acc += x;
  out.mean = acc / n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std_err = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

void StreamingMoments::push(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

MeanStdErr StreamingMoments::result() const {
  MeanStdErr out;
  out.mean = mean_;
  if (n_ > 1) {
    const double n = static_cast<double>(n_);
    out.std_err = std::sqrt(m2_ / (n - 1.0) / n);
  }
  return out;
}

double paired_z(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw InvalidArgument("paired_z requires equal-length samples of size >= 2");
  }
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  const MeanStdErr st = summarize(d);
  if (st.std_err == 0.0) {
    return st.mean == 0.0 ? 0.0 : std::copysign(INFINITY, st.mean);
  }
  return st.mean / st.std_err;
}

void emit_csv(const ExperimentResult& result, const std::string& path) {
  if (result.rows.empty()) throw InvalidArgument("emit_csv: empty result");
  auto open = [](const std::string& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + p + "' for writing");
    return f;
  };
  {
    std::ofstream f = open(path);
    f << "scheme,snr_db,i1,trials,mean_sum_rate_bps_hz,std_err,mean_residual_ici,"
         "mean_residual_iui\n";
    for (const ResultRow& r : result.rows) {
      f << scheme_name(r.scheme) << ',' << fmt(r.snr_db) << ',' << r.i1 << ',' << r.trials << ','
        << fmt(r.mean_sum_rate) << ',' << fmt(r.std_err) << ',' << fmt(r.mean_residual_ici)
        << ',' << fmt(r.mean_residual_iui) << '\n';
    }
    if (!f) throw std::runtime_error("write failed for '" + path + "'");
  }
  {
    std::ofstream f = open(path + ".trace.csv");
    f << "scheme,snr_db,iter,mean_sum_rate\n";
    for (const TraceRow& r : result.trace) {
      f << scheme_name(r.scheme) << ',' << fmt(r.snr_db) << ',' << r.iter << ','
        << fmt(r.mean_sum_rate) << '\n';
    }
    if (!f) throw std::runtime_error("write failed for '" + path + ".trace.csv'");
  }
  if (!result.hashes.empty()) {
    std::ofstream f = open(path + ".hashes.csv");
    f << "scheme,snr_db,trial,seed,channel_hash\n";
    for (const TrialHash& h : result.hashes) {
      f << scheme_name(h.scheme) << ',' << fmt(h.snr_db) << ',' << h.trial << ',' << h.seed << ','
        << h.channel_hash << '\n';
    }
  }
}

std::vector<ResultRow> parse_result_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  std::getline(f, line);
  std::vector<ResultRow> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto p = split(line, ',');
    if (p.size() != 8) throw std::runtime_error("malformed result row: " + line);
    ResultRow r;
    r.scheme = parse_scheme(p[0]);
    r.snr_db = std::stod(p[1]);
    r.i1 = std::stoi(p[2]);
    r.trials = std::stoi(p[3]);
    r.mean_sum_rate = std::stod(p[4]);
    r.std_err = std::stod(p[5]);
    r.mean_residual_ici = std::stod(p[6]);
    r.mean_residual_iui = std::stod(p[7]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<TraceRow> parse_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::string line;
  std::getline(f, line);
  std::vector<TraceRow> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto p = split(line, ',');
    if (p.size() != 4) throw std::runtime_error("malformed trace row: " + line);
    rows.push_back({parse_scheme(p[0]), std::stod(p[1]), std::stoi(p[2]), std::stod(p[3])});
  }
  return rows;
}

std::vector<double> parse_real_list(const std::string& spec) {
  std::vector<double> out;
  auto to_d = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse number '" + s + "' in '" + spec + "'");
    }
    if (used != s.size()) throw InvalidArgument("cannot parse number '" + s + "' in '" + spec + "'");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    const auto p = split(spec, ':');
    if (p.size() < 2 || p.size() > 3) throw InvalidArgument("range must be a:b or a:b:step");
    const double a = to_d(p[0]);
    const double b = to_d(p[1]);
    const double step = p.size() == 3 ? to_d(p[2]) : 1.0;
    if (!(step > 0.0) || b < a) throw InvalidArgument("range '" + spec + "' is empty");
    const long n = static_cast<long>(std::floor((b - a) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(a + static_cast<double>(i) * step);
  } else {
    for (const std::string& s : split(spec, ',')) out.push_back(to_d(s));
  }
  if (out.empty()) throw InvalidArgument("empty list '" + spec + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& spec) {
  std::vector<int> out;
  for (double v : parse_real_list(spec)) {
    if (v != std::floor(v)) throw InvalidArgument("expected integers in '" + spec + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<Scheme> parse_scheme_list(const std::string& spec) {
  if (spec == "all") return {Scheme::kGzfia, Scheme::kRzfia, Scheme::kMaxwsr};
  std::vector<Scheme> out;
  for (const std::string& s : split(spec, ',')) out.push_back(parse_scheme(s));
  if (out.empty()) throw InvalidArgument("empty scheme list");
  return out;
}

numerics::SpreadMode parse_p_mode(const std::string& spec) {
  if (spec == "deterministic") return numerics::SpreadMode::deterministic();
  const std::string prefix = "seeded";
  if (spec.rfind(prefix, 0) == 0) {
    if (spec.size() == prefix.size()) return numerics::SpreadMode::seeded(0);
    if (spec[prefix.size()] != ':') throw InvalidArgument("p-mode must be deterministic or seeded[:seed]");
    try {
      return numerics::SpreadMode::seeded(std::stoull(spec.substr(prefix.size() + 1)));
    } catch (const std::exception&) {
      throw InvalidArgument("cannot parse p-mode seed in '" + spec + "'");
    }
  }
  throw InvalidArgument("p-mode must be deterministic or seeded[:seed]");
}

}  // namespace ibc::harness
