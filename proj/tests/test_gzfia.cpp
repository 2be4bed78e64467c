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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "ibc/gzfia.hpp"
#include "support.hpp"

using namespace ibc;
using ibc::test::gaussian;
using ibc::test::orth_error;

namespace {

ChannelSet identity_channels(int K, int M) {
  ChannelSet ch(K, M, M);
  for (int n = 0; n < kCells; ++n) {
    for (int m = 0; m < kCells; ++m) {
      for (int k = 0; k < K; ++k) ch.link(n, m, k) = CMat::Identity(M, M);
    }
  }
  return ch;
}

double mode_rate(const RVec& sigma, const RVec& phi, double noise) {
  double r = 0.0;
  for (Eigen::Index j = 0; j < sigma.size(); ++j) {
    r += std::log2(1.0 + sigma(j) * sigma(j) * phi(j) / noise);
  }
  return r;
}

}  // namespace

TEST_CASE("ICI null receive basis") {
  const CMat P = numerics::spreading_matrix(6, 4);
  const ChannelSet id = identity_channels(2, 6);
  const CMat U = gzfia::ici_null_receive_basis(id, P, 0, 0, 2);
  CMat expect = CMat::Zero(6, 2);
  expect(4, 0) = 1.0;
  expect(5, 1) = 1.0;
  CHECK(test::subspace_distance(U, expect) < 1e-12);

  const Scenario s = test::default_scenario();
  const ChannelSet ch = model::draw_channels(s, 5);
  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < s.K; ++k) {
      const CMat B = gzfia::ici_null_receive_basis(ch, P, m, k, s.Ls);
      CHECK((B.adjoint() * ch.link(other_cell(m), m, k) * P).norm() < 1e-10);
      CHECK(orth_error(B) < 1e-12);
    }
  }
}

TEST_CASE("block diagonalization basis") {
  const CMat omega = gaussian(2, 4, 9);
  const CMat V = gzfia::bd_precoder_basis(omega, 2);
  CHECK(V.rows() == 4);
  CHECK(V.cols() == 2);
  CHECK((omega * V).norm() < 1e-10);
  CHECK(orth_error(V) < 1e-12);

  CMat block = CMat::Zero(2, 4);
  block(0, 0) = 1.0;
  block(1, 1) = 1.0;
  CMat expect = CMat::Zero(4, 2);
  expect(2, 0) = 1.0;
  expect(3, 1) = 1.0;
  CHECK(test::subspace_distance(gzfia::bd_precoder_basis(block, 2), expect) < 1e-12);

  // A single-user cell has nothing to null.
  CHECK(gzfia::bd_precoder_basis(CMat(0, 2), 2) == CMat::Identity(2, 2));
}

TEST_CASE("omega stack holds the other users' rows") {
  const Scenario s = Scenario::from_snr_db(9, 3, 2, 10.0);
  const CMat P = numerics::spreading_matrix(s.M, s.Np);
  const ChannelSet ch = model::draw_channels(s, 4);
  PerUser<CMat> Ubar = make_per_user<CMat>(s.K);
  for (int m = 0; m < kCells; ++m) {
    for (int k = 0; k < s.K; ++k) Ubar[m][k] = gzfia::ici_null_receive_basis(ch, P, m, k, s.Ls);
  }
  const CMat omega = gzfia::omega_stack(ch, P, Ubar, 1, 0);
  CHECK(omega.rows() == (s.K - 1) * s.Ls);
  CHECK(omega.cols() == s.Np);
  CHECK((omega.topRows(2) - Ubar[1][1].adjoint() * ch.link(1, 1, 1) * P).norm() < 1e-13);
  CHECK((omega.bottomRows(2) - Ubar[1][2].adjoint() * ch.link(1, 1, 2) * P).norm() < 1e-13);
}

TEST_CASE("effective channel in an identity geometry") {
  const CMat P = numerics::spreading_matrix(6, 4);
  ChannelSet ch = identity_channels(2, 6);
  const CMat H = gaussian(6, 6, 3);
  ch.link(0, 0, 0) = H;
  CMat Ubar = CMat::Zero(6, 2), Vbar = CMat::Zero(4, 2);
  Ubar(4, 0) = Ubar(5, 1) = 1.0;
  Vbar(2, 0) = Vbar(3, 1) = 1.0;
  const CMat Heff = gzfia::effective_channel(ch, P, Ubar, Vbar, 0, 0);
  CHECK((Heff - H.block(4, 2, 2, 2)).norm() == 0.0);
}

TEST_CASE("effective channel diagonalization") {
  gzfia::Diagonalization d = gzfia::diagonalize_effective(CMat::Identity(2, 2));
  CHECK(d.sigma_hat(0) == doctest::Approx(1.0));
  CHECK(d.sigma_hat(1) == doctest::Approx(1.0));

  CMat D = CMat::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = 3.0;
  d = gzfia::diagonalize_effective(D);
  CHECK(d.sigma_hat(0) == doctest::Approx(3.0));
  CHECK(d.sigma_hat(1) == doctest::Approx(1.0));

  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const CMat H = gaussian(2, 2, seed);
    d = gzfia::diagonalize_effective(H);
    CHECK((d.Uhat * d.sigma_hat.asDiagonal() * d.Vhat.adjoint() - H).norm() < 1e-10);
    CHECK(orth_error(d.Uhat) < 1e-12);
    CHECK(orth_error(d.Vhat) < 1e-12);
    CHECK(d.sigma_hat(0) >= d.sigma_hat(1));
  }
}

TEST_CASE("pooled power allocation") {
  std::vector<RVec> equal(2, RVec::Constant(2, 1.5));
  std::vector<RVec> phi = gzfia::allocate_power(equal, 8.0, 1.0);
  for (const RVec& p : phi) {
    for (Eigen::Index j = 0; j < p.size(); ++j) CHECK(p(j) == doctest::Approx(2.0));
  }

  std::vector<RVec> dead{RVec::Constant(2, 1.0), RVec::Zero(2)};
  dead[1](0) = 0.7;
  phi = gzfia::allocate_power(dead, 3.0, 1.0);
  CHECK(phi[1](1) == 0.0);
  CHECK(phi[0].sum() + phi[1].sum() == doctest::Approx(3.0));

  CHECK_THROWS_AS(gzfia::allocate_power({RVec::Zero(2), RVec::Zero(2)}, 1.0, 1.0),
                  DegenerateChannel);
}

TEST_CASE("pooled power allocation against a 4-d grid search") {
  const Scenario s = test::default_scenario(10.0);
  const ChannelSet ch = model::draw_channels(s, 21);
  const gzfia::GzfDesign g = gzfia::design(ch, s);
  const double P = s.power[0];
  const double wf = mode_rate(g.sigma_hat[0][0], g.phi[0][0], 1.0) +
                    mode_rate(g.sigma_hat[0][1], g.phi[0][1], 1.0);

  RVec sig(4);
  sig << g.sigma_hat[0][0], g.sigma_hat[0][1];
  const int steps = 50;
  double best = 0.0;
  RVec a(4);
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      for (int l = 0; i + j + l <= steps; ++l) {
        a << i, j, l, steps - i - j - l;
        best = std::max(best, mode_rate(sig, a * (P / steps), 1.0));
      }
    }
  }
  CHECK(wf >= best - 1e-12);
  CHECK(wf - best < 1e-2);
}

TEST_CASE("design on a seeded draw") {
  const Scenario s = test::default_scenario(20.0);
  const ChannelSet ch = model::draw_channels(s, 2024);
  const gzfia::GzfDesign g = gzfia::design(ch, s);
  for (int m = 0; m < kCells; ++m) {
    double phi_sum = 0.0;
    for (int k = 0; k < s.K; ++k) {
      const ResidualInterference r = model::residual_interference(ch, g.tx, m, k);
      CHECK(r.ici_power + r.iui_power < 1e-14);
      CHECK(r.ici_power + r.iui_power < 1e-16 * r.signal_power);
      CHECK(orth_error(g.tx.U[m][k]) < 1e-10);
      CHECK(orth_error(g.Ubar[m][k]) < 1e-12);
      CHECK(orth_error(g.Vbar[m][k]) < 1e-12);
      CHECK(g.sigma_hat[m][k](0) >= g.sigma_hat[m][k](1));
      phi_sum += g.phi[m][k].sum();

      const RVec snr = g.sigma_hat[m][k].array().square() * g.phi[m][k].array() / s.noise_var;
      const double expect = (1.0 + snr.array()).log2().sum();
      CHECK(model::user_rate(ch, g.tx, m, k, s.noise_var) == doctest::Approx(expect).epsilon(1e-8));
    }
    CHECK(g.tx.cell_power(m) == doctest::Approx(s.power[m]).epsilon(1e-12));
    CHECK(phi_sum == doctest::Approx(s.power[m]).epsilon(1e-12));
    CHECK(g.tx.cell_power(m) <= s.power[m] + s.tol_power(m));
  }
}

TEST_CASE("zero forcing and full-rank effective channels over 1000 draws") {
  const Scenario s = test::default_scenario(20.0);
  const CMat P = numerics::spreading_matrix(s.M, s.Np);
  double worst = 0.0, min_sigma = 1e300;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const ChannelSet ch = model::draw_channels(s, seed);
    const gzfia::GzfDesign g = gzfia::design(ch, s, P);
    worst = std::max(worst, model::summarize_residuals(ch, g.tx).max_total);
    for (int m = 0; m < kCells; ++m) {
      for (int k = 0; k < s.K; ++k) {
        const CMat Heff = gzfia::effective_channel(ch, P, g.Ubar[m][k], g.Vbar[m][k], m, k);
        CHECK(numerics::all_finite(Heff));
        min_sigma = std::min(min_sigma, g.sigma_hat[m][k].minCoeff());
      }
    }
  }
  CHECK(worst < 1e-12);
  CHECK(min_sigma > 0.0);
}

TEST_CASE("cell rate does not depend on the other cell's budget") {
  const Scenario s = test::default_scenario(20.0);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ChannelSet ch = model::draw_channels(s, seed);
    const gzfia::GzfDesign g = gzfia::design(ch, s);
    for (int m = 0; m < kCells; ++m) {
      Scenario t = s;
      t.power[other_cell(m)] *= 10.0;
      const gzfia::GzfDesign h = gzfia::design(ch, t);
      CHECK(std::abs(model::cell_sum_rate(ch, g.tx, m, 1.0) - model::cell_sum_rate(ch, h.tx, m, 1.0)) <
            1e-8);
    }
  }
}

TEST_CASE("properties hold under a seeded spreading matrix") {
  const Scenario s = test::default_scenario(30.0);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ChannelSet ch = model::draw_channels(s, seed);
    const gzfia::GzfDesign g = gzfia::design(ch, s, numerics::SpreadMode::seeded(seed + 1));
    CHECK(model::summarize_residuals(ch, g.tx).max_total < 1e-12);
    for (int m = 0; m < kCells; ++m) CHECK(g.tx.cell_power(m) <= s.power[m] + s.tol_power(m));
  }
}

TEST_CASE("other valid shapes") {
  for (auto [M, K, Ls] : {std::tuple{2, 1, 1}, std::tuple{4, 2, 1}, std::tuple{9, 3, 2},
                          std::tuple{12, 3, 3}}) {
    const Scenario s = Scenario::from_snr_db(M, K, Ls, 20.0);
    const ChannelSet ch = model::draw_channels(s, 77);
    const gzfia::GzfDesign g = gzfia::design(ch, s);
    CHECK(model::summarize_residuals(ch, g.tx).max_total < 1e-12);
    CHECK(g.tx.T[0][0].rows() == M);
    CHECK(g.tx.T[0][0].cols() == Ls);
  }
}

TEST_CASE("high-SNR slope is 2 K L_s streams") {
  const Scenario lo = test::default_scenario(37.0);
  const Scenario hi = test::default_scenario(40.0);
  double diff = 0.0;
  const int draws = 200;
  for (int seed = 0; seed < draws; ++seed) {
    const ChannelSet ch = model::draw_channels(lo, seed);
    diff += model::sum_rate(ch, gzfia::design(ch, hi).tx, 1.0) -
            model::sum_rate(ch, gzfia::design(ch, lo).tx, 1.0);
  }
  const double expect = 2 * lo.K * lo.Ls * std::log2(std::pow(10.0, 0.3));
  CHECK(diff / draws == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("design rejects bad input") {
  const Scenario s = test::default_scenario();
  ChannelSet ch = model::draw_channels(s, 1);
  CHECK_THROWS_AS(gzfia::design(ch, s, CMat::Identity(6, 6)), InvalidArgument);
  const CMat P = numerics::spreading_matrix(6, 4);
  // A rank-deficient cross link leaves no well-defined ICI null space.
  ch.link(1, 0, 0).col(0) = ch.link(1, 0, 0).col(1);
  ch.link(1, 0, 0).col(2) = ch.link(1, 0, 0).col(1);
  CHECK_THROWS_AS(gzfia::design(ch, s, P), DegenerateChannel);
}
