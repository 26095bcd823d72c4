// Copyright 2026 The ctn-mbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ctnmbqc/oracle.hpp"

#include <cmath>
#include <map>

#include "doctest.h"

using namespace ctn;

TEST_CASE("cluster1d n=2 amplitudes are (1,1,1,-1)/2") {
  DenseState s = build_cluster1d_direct(2);
  Eigen::VectorXcd want(4);
  want << 0.5, 0.5, 0.5, -0.5;
  CHECK((s.amps - want).norm() < 1e-12);
}

TEST_CASE("Z measurement on |0> is deterministic") {
  DenseState s = make_dense_state({2}, ket0());
  Rng rng(1);
  auto r = measure(s, 0, basis_z(), rng);
  CHECK(r.outcome == 0);
  CHECK(std::abs(r.state.amps[0] - cplx(1, 0)) < 1e-12);
}

TEST_CASE("X measurement on |0> is unbiased") {
  DenseState s = make_dense_state({2}, ket0());
  int ones = 0;
  for (int i = 0; i < 10000; ++i) {
    Rng rng(100 + i);
    ones += measure(s, 0, basis_x(), rng).outcome;
  }
  CHECK(std::abs(ones / 10000.0 - 0.5) < 0.02);
}

TEST_CASE("sequential all-Z measurement of cluster1d n=3 is uniform over strings") {
  DenseState s = build_cluster1d_direct(3);
  std::map<int, int> counts;
  int shots = 10000;
  for (int i = 0; i < shots; ++i) {
    Rng rng(7000 + i);
    DenseState cur = s;
    int key = 0;
    for (std::size_t site = 0; site < 3; ++site) {
      auto r = measure(cur, site, basis_z(), rng);
      key = key * 2 + r.outcome;
      cur = r.state;
    }
    counts[key]++;
  }
  for (int k = 0; k < 8; ++k) {
    CHECK(std::abs(counts[k] / static_cast<double>(shots) - 0.125) < 0.03);
  }
}

TEST_CASE("measurement preserves norm and probabilities sum to one") {
  DenseState s = build_cluster2d_direct(2, 2);
  auto probs = measure_probabilities(s, 2, basis_y());
  double total = 0;
  for (double p : probs) total += p;
  CHECK(std::abs(total - 1.0) < 1e-12);
  Rng rng(3);
  auto r = measure(s, 2, basis_y(), rng);
  CHECK(std::abs(r.state.amps.norm() - 1.0) < 1e-12);
}

TEST_CASE("2-D cluster amplitudes have equal magnitude and pair signs") {
  DenseState s = build_cluster2d_direct(2, 2);
  // signs: (-1)^{# adjacent 1-pairs} over the 4 edges of the 2x2 grid
  for (int bits = 0; bits < 16; ++bits) {
    int q[4] = {(bits >> 3) & 1, (bits >> 2) & 1, (bits >> 1) & 1, bits & 1};
    int pairs = q[0] * q[1] + q[2] * q[3] + q[0] * q[2] + q[1] * q[3];
    cplx a = s.amps[bits];
    CHECK(std::abs(std::abs(a) - 0.25) < 1e-12);
    CHECK(std::abs(a - cplx(0.25 * std::pow(-1.0, pairs), 0)) < 1e-12);
  }
}

TEST_CASE("W state and diluted chain") {
  Eigen::VectorXcd w = w_state(3);
  CHECK(std::abs(w.norm() - 1.0) < 1e-12);
  CHECK(std::abs(w[4] - cplx(1 / std::sqrt(3.0), 0)) < 1e-12);  // |100>
  CHECK(std::abs(w[0]) < 1e-15);

  // 2-block diluted chain with k=2: p(first qubit of block 0 is 1) = 1/(2k).
  DenseState d = build_diluted_chain_direct(2, 2);
  auto marg = site_marginal(d, 0);
  CHECK(std::abs(marg[1] - 0.25) < 1e-12);
}

TEST_CASE("apply_unitary matches graph-state construction") {
  // Build a 3-qubit path graph state by explicit CZ application and compare.
  std::size_t n = 3;
  Eigen::VectorXcd plus = Eigen::VectorXcd::Constant(8, std::pow(0.5, 1.5));
  DenseState s = make_dense_state({2, 2, 2}, plus);
  s = apply_unitary(s, {0, 1}, mat_cz());
  s = apply_unitary(s, {1, 2}, mat_cz());
  DenseState want = build_graph_state(n, {{0, 1, kPi}, {1, 2, kPi}});
  CHECK((s.amps - want.amps).norm() < 1e-12);
}

TEST_CASE("impossible branches are reported distinctly") {
  DenseState s = make_dense_state({2}, ket0());
  auto [w, collapsed] = project(s, 0, ket1());
  CHECK(w < kImpossibleBranch);
}

TEST_CASE("amplitude cap is enforced") {
  CHECK_THROWS_AS(build_cluster1d_direct(25), std::invalid_argument);
}
