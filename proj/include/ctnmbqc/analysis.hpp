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
#include <vector>

#include <Eigen/Dense>

#include "ctnmbqc/mps.hpp"

namespace ctn {

/// The completely positive map rho -> sum_s A[s] rho A[s]^dag in matrix form
/// (column-major vec convention), plus its Choi matrix for the PSD check.
/// Trace preservation is not assumed; these resources are not kept in a
/// normalized gauge.
struct TransferChannel {
  std::size_t bond_dim;
  Eigen::MatrixXcd phi;   // D^2 x D^2
  Eigen::MatrixXcd choi;  // D^2 x D^2
  double choi_min_eigenvalue;

  Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;
};

TransferChannel transfer_channel(const MpsResource& res);

struct CorrelationReport {
  int i = 0, k = 0, n = 0;
  double zz = 0;              // <Z_i Z_{i+k}> on the normalized chain
  double zi = 0, zik = 0;     // single-site expectations
  double connected = 0;       // zz - zi*zik
  double raw_unnormalized = 0;  // <Psi|Z_i Z_{i+k}|Psi> with the unnormalized
                                // |+> boundaries; reproduces the 2 xi^k algebra
};

/// Connected <Z_i Z_{i+k}> on the normalized finite chain of length n,
/// evaluated by transfer-channel contraction.
CorrelationReport zz_correlation(const MpsResource& res, int i, int k, int n);

/// Same quantity evaluated on the dense state; the referee for
/// zz_correlation at oracle-sized n.
double zz_correlation_dense(const MpsResource& res, int i, int k, int n);

struct ParentHamiltonianReport {
  int ring_size = 0;
  double ground_energy = 0;
  int ground_degeneracy = 0;
  double spectral_gap = 0;
  double ring_state_energy = 0;            // <H> of the MPS ring state
  std::vector<double> ring_term_energies;  // <tau_i(h)>
  int gamma2_rank = 0;
};

/// Parent Hamiltonian of the Hadamard AKLT variant: h projects onto the
/// span of {|11>, |22>, -(1/4)|00>+|12>+|21>, -(1/sqrt8)|00>+|02>+|20>,
/// -(1/sqrt8)|00>+|01>+|10>}, H = sum of translates on a ring of N sites.
/// The MPS ring state is built with the matching normalization
/// (build_aklt_variant_half), under which H annihilates it exactly.
/// Dense eigensolve for N <= 6, Lanczos above; 4 <= N <= 8.
ParentHamiltonianReport parent_hamiltonian(int ring_size);

/// The 9x9 two-site interaction term (orthogonal projector).
Eigen::MatrixXcd parent_hamiltonian_term();

/// rank of Gamma_2 : B -> sum tr(B A[i1] A[i2]) |i1,i2> (injectivity check).
int gamma2_rank(const MpsResource& res, double tol = 1e-8);

struct DilutedReport {
  int n = 0, k = 0;
  double p1 = 0;              // measured P(first physical qubit of a block = 1)
  double p1_closed_form = 0;  // 1/(2k)
  double site_entropy = 0;    // binary entropy of the site marginal
  double entropy_bound = 0;   // H_b(3/(4k+2))
  double p1_bound = 0;        // 1/k
  double p_block_bound = 0;   // 2/k
  double p_total_bound = 0;   // 2 n^2 / k
  bool p1_ok = false;         // p1 < 1/k
  bool entropy_ok = false;    // site_entropy <= entropy_bound
};

/// Diluted-cluster bounds, measured on a 2-block 1-D test chain; n enters
/// the reported bound formulas symbolically.
DilutedReport diluted_bounds(int n, int k);

double binary_entropy(double p);

}  // namespace ctn
