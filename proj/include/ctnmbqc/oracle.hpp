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

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "ctnmbqc/gates.hpp"
#include "ctnmbqc/mps.hpp"

namespace ctn {

/// Default cap on dense amplitudes (about 20 qubits). Covers every protocol
/// fragment in the catalog; the largest needed patch is the toric two-qubit
/// coupling at ~18 physical legs.
inline constexpr std::size_t kOracleAmpCap = std::size_t{1} << 20;

/// Post-selection weights below this are impossible branches, not noise.
inline constexpr double kImpossibleBranch = 1e-14;

/// Normalized dense state with per-site dimensions; amplitudes row-major
/// over sites (site 0 most significant). Values are immutable snapshots:
/// measurement returns a new state. The oracle deliberately has no stabilizer
/// fast path or sampling shortcut.
struct DenseState {
  std::vector<std::size_t> dims;
  Eigen::VectorXcd amps;

  std::size_t num_sites() const { return dims.size(); }
  void validate() const;  // norm 1 +- 1e-12, length = product of dims
};

DenseState make_dense_state(std::vector<std::size_t> dims, Eigen::VectorXcd amps);

/// n qubits in |+>^n entangled by P(phi) on the listed edges. phi = pi edges
/// give graph (cluster) states exactly.
struct PhasedEdge {
  int a, b;
  double phi;
};
DenseState build_graph_state(std::size_t n, const std::vector<PhasedEdge>& edges);

/// 1-D cluster via the CZ circuit on |+>^n.
DenseState build_cluster1d_direct(std::size_t n);

/// 2-D cluster on a w x h grid via CZ between nearest neighbors, site order
/// row-major.
DenseState build_cluster2d_direct(std::size_t w, std::size_t h);

/// Dense evaluation of a 1-D matrix product chain (normalized).
DenseState build_mps_direct(const MpsResource& res, std::size_t n);

/// 2-D AKLT-type resource: h horizontal MPS rows of width w coupled by
/// exp{i pi |2><2| x |2><2|} between vertically adjacent sites. Site order
/// row-major.
DenseState build_aklt2d_direct(const MpsResource& row_resource, std::size_t w, std::size_t h);

/// Diluted cluster: a 1-D cluster of `blocks` logical qubits, each encoded by
/// V = |0...0><0| + |W_k><1|.
DenseState build_diluted_chain_direct(std::size_t blocks, std::size_t k);

/// |W_k>: equal superposition of all weight-1 strings.
Eigen::VectorXcd w_state(std::size_t k);

/// Outcome probabilities of measuring `site` in `basis`.
std::vector<double> measure_probabilities(const DenseState& state, std::size_t site,
                                          const LocalBasis& basis);

struct MeasureResult {
  int outcome;
  DenseState state;  // collapsed and renormalized
};

/// Born-rule projective measurement; deterministic given the caller's RNG.
MeasureResult measure(const DenseState& state, std::size_t site, const LocalBasis& basis,
                      Rng& rng);

/// Collapse without sampling; returns the unnormalized branch weight.
std::pair<double, DenseState> project(const DenseState& state, std::size_t site,
                                      const Eigen::VectorXcd& phi);

/// Apply a k-site unitary (dims must match) to the listed sites.
DenseState apply_unitary(const DenseState& state, const std::vector<std::size_t>& sites,
                         const Eigen::MatrixXcd& u);

/// Reduced probability of each outcome of `site` in its computational basis.
std::vector<double> site_marginal(const DenseState& state, std::size_t site);

/// Expectation of a diagonal +-1 observable pattern (Z-type strings).
double z_string_expectation(const DenseState& state, const std::vector<std::size_t>& sites);

}  // namespace ctn
