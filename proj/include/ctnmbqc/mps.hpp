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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctnmbqc/gates.hpp"

namespace ctn {

/// Translation-invariant matrix product family: one matrix set for all
/// sites, amplitudes <R| A[s_n]...A[s_1] |L>, no normalization applied.
struct MpsResource {
  std::size_t phys_dim = 0;
  std::size_t bond_dim = 0;
  std::vector<Eigen::MatrixXcd> site_matrices;
  Eigen::VectorXcd boundary_left;
  Eigen::VectorXcd boundary_right;
  std::string name;

  /// Validates shapes and that the induced n-site state has nonzero norm for
  /// n <= 8.
  void validate() const;
};

enum class Mps1dKind { Cluster1d, AkltVariant, AkltOriginal, Dihedral };

/// Exact catalog tensors. The 1-D cluster uses |L> = |+>, |R> = |0>, which
/// reproduces amplitudes proportional to (-1)^p on every outcome string (the
/// listing |L>=|0>, |R>=|+> vanishes on half of them). The AKLT variant uses
/// A[0] = H, A[1] = sqrt2|0><1|, A[2] = sqrt2|1><0|: with this relative
/// weight the three A[phi] of the {|0>,|+>,|->} basis are exactly unitary
/// (H, X, iY), which is what makes the outcome probabilities uniform at 1/3
/// and the by-product machinery a group walk.
MpsResource build_1d_resource(Mps1dKind kind, int m = 0);

/// Same AKLT-variant state family with the relative weight 1/2 instead of
/// sqrt2. This is the normalization under which the parent-Hamiltonian pair
/// space of the analysis module annihilates the state exactly.
MpsResource build_aklt_variant_half();

/// <R| A[s_n]...A[s_1] |L>.
cplx amplitude(const MpsResource& res, std::span<const int> outcomes);

/// A[phi] = <phi|0> A[0] + <phi|1> A[1] + ...
Eigen::MatrixXcd project_site(const MpsResource& res, const Eigen::VectorXcd& phi);

/// Right environments E_i = sum_s A[s]^dag E_{i+1} A[s] with E_{n+1} =
/// |R><R|; env[i] is the environment seen by site i+1 (0-based: env[n] =
/// |R><R|, env[0] multiplies the full chain). Basis-independent, so exact
/// conditional probabilities for any adaptive measurement sequence follow.
std::vector<Eigen::MatrixXcd> right_environments(const MpsResource& res, std::size_t n);

struct CorrelationState {
  Eigen::VectorXcd column;
  std::vector<int> byproduct_ledger;  // group element indices, scheme-defined
};

struct ChainSample {
  std::vector<int> outcomes;
  CorrelationState state;
};

/// Sample every site of an n-site chain in the given bases, drawing each
/// outcome from its exact conditional probability (the remaining chain is
/// contracted through the right environments). Deterministic given the seed.
ChainSample sample_chain(const MpsResource& res, std::span<const LocalBasis> bases,
                         std::uint64_t seed);

/// Dense amplitude vector of the n-site chain, row-major over outcomes
/// (site 1 is the most significant digit). Unnormalized.
Eigen::VectorXcd mps_dense_amplitudes(const MpsResource& res, std::size_t n);

}  // namespace ctn
