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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctnmbqc/gates.hpp"

namespace ctn {

/// Finite group of unitaries taken modulo global phase. Element 0 is the
/// identity; every element is stored as its canonical representative (first
/// nonzero entry in row-major order made real-positive).
class ProjectiveGroup {
 public:
  const std::vector<Eigen::MatrixXcd>& elements() const { return elements_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<int>& generator_indices() const { return generators_; }

  int multiply(int a, int b) const { return cayley_[a][b]; }
  int inverse(int a) const { return inverse_[a]; }
  /// Index of the element projectively equal to m, or -1.
  int find(const Eigen::MatrixXcd& m, double tol = 1e-9) const;
  int index_of(const Eigen::MatrixXcd& m, double tol = 1e-9) const;  // throws if absent
  int index_of_label(const std::string& label) const;                // throws if absent

  const std::vector<std::vector<int>>& cayley() const { return cayley_; }

  friend ProjectiveGroup generate_closure(
      const std::vector<std::pair<std::string, Eigen::MatrixXcd>>& generators,
      std::size_t cap);

 private:
  std::vector<Eigen::MatrixXcd> elements_;
  std::vector<std::string> labels_;
  std::vector<int> generators_;
  std::vector<std::vector<int>> cayley_;
  std::vector<int> inverse_;
};

/// Canonical representative of m modulo global phase.
Eigen::MatrixXcd canonical_rep(const Eigen::MatrixXcd& m, double tol = 1e-9);

/// Enumerate the closure of the generating set. Throws if a generator is not
/// unitary (tol 1e-10) or the closure exceeds `cap` elements, which signals a
/// non-finite or mis-specified generating set.
ProjectiveGroup generate_closure(
    const std::vector<std::pair<std::string, Eigen::MatrixXcd>>& generators,
    std::size_t cap = 10000);

/// Product of the labeled elements, applied right to left (matching operator
/// composition); empty word yields the identity.
int reduce_word(const ProjectiveGroup& g, const std::vector<std::string>& labels);

struct WalkResult {
  bool hit = false;
  std::size_t steps = 0;
  std::vector<std::string> path;
  int reached = 0;
};

/// Simulate i.i.d. generator draws, left-multiplying the running product,
/// until it equals `target`. `gen_weights` (parallel to generator_indices)
/// must be strictly positive. Not hitting within max_steps is reported, not
/// thrown, so tests can bound their runtime.
WalkResult walk_until(const ProjectiveGroup& g, int target,
                      const std::vector<double>& gen_weights, std::uint64_t seed,
                      std::size_t max_steps);

// Catalog, addressable by the names used in the CLI.
ProjectiveGroup group_pauli();       // <X, Z>, 4 elements
ProjectiveGroup group_clifford1();   // <H, S>, 24 elements
ProjectiveGroup group_aklt8();       // <H, X, ZX>, 8 elements
ProjectiveGroup group_dihedral(int m);  // <Z, exp(i pi/m X)>, 2m elements
ProjectiveGroup group_by_name(const std::string& name);

}  // namespace ctn
