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

#include "ctnmbqc/groups.hpp"

#include <numeric>
#include <set>

#include "doctest.h"

using namespace ctn;

TEST_CASE("closure sizes of the catalog groups") {
  CHECK(group_pauli().size() == 4);
  CHECK(group_clifford1().size() == 24);
  CHECK(group_aklt8().size() == 8);
  for (int m = 2; m <= 6; ++m) {
    CHECK(group_dihedral(m).size() == static_cast<std::size_t>(2 * m));
  }
}

TEST_CASE("cap exceeded reports a mis-specified generating set") {
  // An irrational rotation never closes.
  Eigen::MatrixXcd g(2, 2);
  double theta = 1.0;  // radians, irrational multiple of pi
  g << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  CHECK_THROWS_AS(generate_closure({{"R", g}}, 64), std::runtime_error);
  CHECK_THROWS_AS(generate_closure({{"M", 2.0 * mat_id()}}), std::invalid_argument);
}

TEST_CASE("cayley table is a latin square with correct inverses") {
  for (const char* name : {"pauli", "aklt8", "clifford1", "dihedral:3"}) {
    auto g = group_by_name(name);
    std::size_t n = g.size();
    for (std::size_t a = 0; a < n; ++a) {
      std::set<int> row, col;
      for (std::size_t b = 0; b < n; ++b) {
        row.insert(g.multiply(static_cast<int>(a), static_cast<int>(b)));
        col.insert(g.multiply(static_cast<int>(b), static_cast<int>(a)));
      }
      CHECK(row.size() == n);
      CHECK(col.size() == n);
      CHECK(g.multiply(static_cast<int>(a), g.inverse(static_cast<int>(a))) == 0);
    }
  }
}

TEST_CASE("closure is generator-order independent") {
  auto a = generate_closure({{"H", mat_h()}, {"S", mat_s()}});
  auto b = generate_closure({{"S", mat_s()}, {"H", mat_h()}});
  CHECK(a.size() == b.size());
  for (const auto& m : a.elements()) {
    CHECK(b.find(m) >= 0);
  }
}

TEST_CASE("reduce_word applies right to left") {
  auto g = group_aklt8();
  CHECK(reduce_word(g, {}) == 0);
  CHECK(reduce_word(g, {"H", "H"}) == 0);
  // HX = ZH mod phase
  int hx = reduce_word(g, {"H", "X"});
  int zh = g.multiply(g.index_of(mat_z()), g.index_of_label("H"));
  CHECK(hx == zh);
  CHECK_THROWS_AS(reduce_word(g, {"Q"}), std::invalid_argument);
}

TEST_CASE("walk hits the identity quickly on the AKLT group") {
  auto g = group_aklt8();
  std::vector<double> uniform(3, 1.0 / 3.0);
  double total_steps = 0;
  int runs = 10000;
  for (int i = 0; i < runs; ++i) {
    auto w = walk_until(g, 0, uniform, 1000 + i, 100000);
    REQUIRE(w.hit);
    CHECK(w.steps >= 1);
    total_steps += static_cast<double>(w.steps);
    CHECK(reduce_word(g, w.path) == w.reached);
  }
  CHECK(total_steps / runs < 100.0);
}

TEST_CASE("singleton walk: target equal to the first reachable element") {
  auto g = generate_closure({{"Z", mat_z()}});
  auto w = walk_until(g, g.index_of(mat_z()), {1.0}, 7, 10);
  CHECK(w.hit);
  CHECK(w.steps == 1);
}

TEST_CASE("uniform H/S walk reaches all 24 Clifford elements") {
  auto g = group_clifford1();
  std::vector<double> uniform(2, 0.5);
  for (int run = 0; run < 100; ++run) {
    std::set<int> seen{0};
    // One long walk visits everything: track the running product.
    Rng rng(42 + run);
    int current = 0;
    const auto& gens = g.generator_indices();
    for (int step = 0; step < 10000 && seen.size() < g.size(); ++step) {
      current = g.multiply(gens[rng.pick(uniform)], current);
      seen.insert(current);
    }
    CHECK(seen.size() == g.size());
  }
}

TEST_CASE("hitting time tail is exponentially small") {
  auto g = group_aklt8();
  std::vector<double> uniform(3, 1.0 / 3.0);
  int runs = 10000;
  std::vector<double> steps(runs);
  double mean = 0;
  for (int i = 0; i < runs; ++i) {
    auto w = walk_until(g, g.index_of(mat_z()), uniform, 555000 + i, 100000);
    REQUIRE(w.hit);
    steps[i] = static_cast<double>(w.steps);
    mean += steps[i];
  }
  mean /= runs;
  int exceed = 0;
  for (double s : steps) {
    if (s > 5 * mean) ++exceed;
  }
  CHECK(static_cast<double>(exceed) / runs < 0.01);
}

TEST_CASE("walk rejects a non-positive distribution") {
  auto g = group_pauli();
  CHECK_THROWS_AS(walk_until(g, 0, {1.0, 0.0}, 3, 10), std::invalid_argument);
}
