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

#ifndef IBC_METRICS_HPP
#define IBC_METRICS_HPP

#include <cstdint>
#include <string>

#include "ibc/model.hpp"

// Symbolic cost accounting: complex multiplications per design and complex
// scalars of prerequisite information per BS exchange. Pure arithmetic.
namespace ibc::metrics {

using count_t = std::int64_t;

struct CostModel {
  count_t c_svd = 4;            // svd(m, n) -> c_svd * m * n * min(m, n)
  int inverse_exponent = 3;     // inverse(n) -> n^inverse_exponent
  bool reuse_factorization = false;  // one factorization per precoder update
                                     // instead of one inverse per bisection step

  count_t matmul(count_t m, count_t n, count_t p) const { return m * n * p; }
  count_t inverse(count_t n) const;
  count_t svd(count_t m, count_t n) const;
};

struct CostBreakdown {
  count_t one_time = 0;  // outside the iteration loop
  count_t precoder = 0;  // per iteration, including all bisection steps
  count_t receiver = 0;  // per iteration
  count_t weights = 0;   // per iteration (zero for RZF-IA)

  count_t per_iteration() const { return precoder + receiver + weights; }
  count_t total(int I1) const { return one_time + static_cast<count_t>(I1) * per_iteration(); }
};

CostBreakdown count_rzfia(const Scenario& s, int I2, const CostModel& model = {});
CostBreakdown count_maxwsr(const Scenario& s, int I2, const CostModel& model = {});
CostBreakdown count_gzfia(const Scenario& s, const CostModel& model = {});

inline count_t count_rzfia(const Scenario& s, int I1, int I2, const CostModel& model = {}) {
  return count_rzfia(s, I2, model).total(I1);
}
inline count_t count_maxwsr(const Scenario& s, int I1, int I2, const CostModel& model = {}) {
  return count_maxwsr(s, I2, model).total(I1);
}

struct ExchangeReport {
  Scheme scheme = Scheme::kRzfia;
  count_t one_time = 0;       // complex scalars, summed over both BSs
  count_t per_iteration = 0;  // complex scalars per iteration, both BSs
  count_t cumulative = 0;     // one_time + I1 * per_iteration
  std::string header;         // description of the counting model

  count_t at(int I1) const { return one_time + static_cast<count_t>(I1) * per_iteration; }
};

ExchangeReport count_exchange(Scheme scheme, const Scenario& s, int I1);

}  // namespace ibc::metrics

#endif  // IBC_METRICS_HPP
