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

#include "ctnmbqc/analysis.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

#include "ctnmbqc/oracle.hpp"

namespace ctn {

namespace {

// vec(A rho B) = (B^T (x) A) vec(rho), column-major vec.
Eigen::MatrixXcd superop(const std::vector<Eigen::MatrixXcd>& kraus,
                         const std::vector<cplx>& weights) {
  std::size_t d = static_cast<std::size_t>(kraus.front().rows());
  Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (std::size_t s = 0; s < kraus.size(); ++s) {
    phi += weights[s] * kron(kraus[s].conjugate(), kraus[s]);
  }
  return phi;
}

Eigen::MatrixXcd vec_to_mat(const Eigen::VectorXcd& v, std::size_t d) {
  Eigen::MatrixXcd m(d, d);
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          v[static_cast<Eigen::Index>(c * d + r)];
    }
  }
  return m;
}

Eigen::VectorXcd mat_to_vec(const Eigen::MatrixXcd& m) {
  std::size_t d = static_cast<std::size_t>(m.rows());
  Eigen::VectorXcd v(static_cast<Eigen::Index>(d * d));
  for (std::size_t c = 0; c < d; ++c) {
    for (std::size_t r = 0; r < d; ++r) {
      v[static_cast<Eigen::Index>(c * d + r)] =
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return v;
}

double chain_expectation(const MpsResource& res, int n, const std::vector<int>& z_sites,
                         const Eigen::VectorXcd& left, const Eigen::VectorXcd& right,
                         bool normalized) {
  std::size_t d = res.bond_dim;
  std::vector<cplx> plain(res.phys_dim, cplx(1, 0));
  std::vector<cplx> zweights(res.phys_dim);
  for (std::size_t s = 0; s < res.phys_dim; ++s) {
    zweights[s] = (s == 1) ? cplx(-1, 0) : cplx(1, 0);  // qubit Z convention
  }
  Eigen::MatrixXcd t = superop(res.site_matrices, plain);
  Eigen::MatrixXcd tz = superop(res.site_matrices, zweights);

  Eigen::VectorXcd v = mat_to_vec(left * left.adjoint());
  for (int site = 1; site <= n; ++site) {
    bool z = std::find(z_sites.begin(), z_sites.end(), site) != z_sites.end();
    v = (z ? tz : t) * v;
  }
  Eigen::MatrixXcd rho = vec_to_mat(v, d);
  double value = std::real((right.adjoint() * rho * right)(0, 0));
  if (!normalized) return value;

  Eigen::VectorXcd vn = mat_to_vec(left * left.adjoint());
  for (int site = 1; site <= n; ++site) vn = t * vn;
  double norm = std::real((right.adjoint() * vec_to_mat(vn, d) * right)(0, 0));
  return value / norm;
}

}  // namespace

Eigen::MatrixXcd TransferChannel::apply(const Eigen::MatrixXcd& rho) const {
  return vec_to_mat(phi * mat_to_vec(rho), bond_dim);
}

TransferChannel transfer_channel(const MpsResource& res) {
  TransferChannel ch;
  ch.bond_dim = res.bond_dim;
  std::vector<cplx> plain(res.phys_dim, cplx(1, 0));
  ch.phi = superop(res.site_matrices, plain);
  std::size_t d = res.bond_dim;
  // Choi matrix as sum_s vec(A_s) vec(A_s)^dag.
  ch.choi = Eigen::MatrixXcd::Zero(d * d, d * d);
  for (const auto& a : res.site_matrices) {
    Eigen::VectorXcd v = mat_to_vec(a);
    ch.choi += v * v.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ch.choi);
  ch.choi_min_eigenvalue = es.eigenvalues().minCoeff();
  return ch;
}

CorrelationReport zz_correlation(const MpsResource& res, int i, int k, int n) {
  if (!(1 <= i && i + k <= n) || k < 1) throw std::invalid_argument("index out of range");
  if (res.phys_dim != 2) throw std::invalid_argument("ZZ correlator is defined for qubit chains");
  CorrelationReport rep;
  rep.i = i;
  rep.k = k;
  rep.n = n;
  rep.zz = chain_expectation(res, n, {i, i + k}, res.boundary_left, res.boundary_right, true);
  rep.zi = chain_expectation(res, n, {i}, res.boundary_left, res.boundary_right, true);
  rep.zik = chain_expectation(res, n, {i + k}, res.boundary_left, res.boundary_right, true);
  rep.connected = rep.zz - rep.zi * rep.zik;
  // The raw route uses the unnormalized |0>+|1> boundaries of the source
  // algebra and skips the normalization division.
  Eigen::VectorXcd plus_raw = ket0() + ket1();
  Eigen::VectorXcd left_raw = plus_raw, right_raw = plus_raw;
  if (res.name.rfind("dihedral", 0) == 0) {
    // |L> = G^dag (|0>+|1>): reuse the resource's own left boundary shape.
    left_raw = res.boundary_left * std::sqrt(2.0);
    right_raw = res.boundary_right * std::sqrt(2.0);
  }
  rep.raw_unnormalized = chain_expectation(res, n, {i, i + k}, left_raw, right_raw, false);
  return rep;
}

double zz_correlation_dense(const MpsResource& res, int i, int k, int n) {
  DenseState state = build_mps_direct(res, static_cast<std::size_t>(n));
  auto z = [&](std::vector<std::size_t> sites) { return z_string_expectation(state, sites); };
  double zz = z({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(i + k - 1)});
  double zi = z({static_cast<std::size_t>(i - 1)});
  double zik = z({static_cast<std::size_t>(i + k - 1)});
  return zz - zi * zik;
}

Eigen::MatrixXcd parent_hamiltonian_term() {
  auto basis_vec = [](int a, int b) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(9);
    v[a * 3 + b] = 1;
    return v;
  };
  std::vector<Eigen::VectorXcd> span;
  span.push_back(basis_vec(1, 1));
  span.push_back(basis_vec(2, 2));
  span.push_back(-0.25 * basis_vec(0, 0) + basis_vec(1, 2) + basis_vec(2, 1));
  span.push_back(-std::sqrt(0.125) * basis_vec(0, 0) + basis_vec(0, 2) + basis_vec(2, 0));
  span.push_back(-std::sqrt(0.125) * basis_vec(0, 0) + basis_vec(0, 1) + basis_vec(1, 0));

  // Orthonormalize and build the projector.
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(9, static_cast<Eigen::Index>(span.size()));
  int col = 0;
  for (auto v : span) {
    for (int j = 0; j < col; ++j) v -= (q.col(j).adjoint() * v)(0, 0) * q.col(j);
    q.col(col++) = v.normalized();
  }
  return q * q.adjoint();
}

namespace {

std::size_t pow3(int n) {
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) r *= 3;
  return r;
}

// Apply h on ring sites (i, i+1 mod N) to a dense 3^N vector.
Eigen::VectorXcd apply_term(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& v, int site,
                            int n) {
  std::size_t total = static_cast<std::size_t>(v.size());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  int j = (site + 1) % n;
  std::size_t si = pow3(n - 1 - site), sj = pow3(n - 1 - j);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t a = (idx / si) % 3, b = (idx / sj) % 3;
    std::size_t row = a * 3 + b;
    cplx acc(0, 0);
    for (std::size_t a2 = 0; a2 < 3; ++a2) {
      for (std::size_t b2 = 0; b2 < 3; ++b2) {
        cplx c = h(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(a2 * 3 + b2));
        if (c == cplx(0, 0)) continue;
        std::size_t src = idx + (a2 - a) * si + (b2 - b) * sj;
        acc += c * v[static_cast<Eigen::Index>(src)];
      }
    }
    out[static_cast<Eigen::Index>(idx)] += acc;
  }
  return out;
}

Eigen::VectorXcd apply_ring(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& v, int n) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (int i = 0; i < n; ++i) out += apply_term(h, v, i, n);
  return out;
}

Eigen::VectorXcd ring_state(const MpsResource& res, int n) {
  std::size_t total = pow3(n);
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(total));
  for (std::size_t idx = 0; idx < total; ++idx) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
    std::size_t rest = idx;
    std::vector<int> s(static_cast<std::size_t>(n));
    for (int i = n; i-- > 0;) {
      s[static_cast<std::size_t>(i)] = static_cast<int>(rest % 3);
      rest /= 3;
    }
    for (int i = 0; i < n; ++i) m = res.site_matrices[static_cast<std::size_t>(s[i])] * m;
    amps[static_cast<Eigen::Index>(idx)] = m.trace();
  }
  return amps / amps.norm();
}

// Lanczos with full reorthogonalization for the two lowest eigenvalues.
std::pair<double, double> lowest_two(const Eigen::MatrixXcd& h, int n) {
  std::size_t dim = pow3(n);
  Rng rng(12345);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
  v.normalize();
  std::vector<Eigen::VectorXcd> basis{v};
  std::vector<double> alpha, beta;
  int steps = std::min<int>(80, static_cast<int>(dim));
  Eigen::VectorXcd w;
  for (int it = 0; it < steps; ++it) {
    w = apply_ring(h, basis.back(), n);
    double a = std::real((basis.back().adjoint() * w)(0, 0));
    alpha.push_back(a);
    w -= a * basis.back();
    if (basis.size() > 1) w -= beta.back() * basis[basis.size() - 2];
    for (const auto& b : basis) w -= (b.adjoint() * w)(0, 0) * b;
    double nb = w.norm();
    if (nb < 1e-12) break;
    beta.push_back(nb);
    basis.push_back(w / nb);
  }
  std::size_t m = alpha.size();
  Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    tri(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = alpha[i];
    if (i + 1 < m) {
      tri(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i + 1)) = beta[i];
      tri(static_cast<Eigen::Index>(i + 1), static_cast<Eigen::Index>(i)) = beta[i];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
  return {es.eigenvalues()[0], es.eigenvalues()[1]};
}

}  // namespace

int gamma2_rank(const MpsResource& res, double tol) {
  // M[(i1 i2), b] = tr(B_b A[i1] A[i2]) over the matrix-unit basis B.
  std::size_t d = res.phys_dim, D = res.bond_dim;
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(D * D));
  for (std::size_t i1 = 0; i1 < d; ++i1) {
    for (std::size_t i2 = 0; i2 < d; ++i2) {
      Eigen::MatrixXcd prod = res.site_matrices[i1] * res.site_matrices[i2];
      for (std::size_t r = 0; r < D; ++r) {
        for (std::size_t c = 0; c < D; ++c) {
          // B = |r><c| => tr(B M) = <c| M |r>
          m(static_cast<Eigen::Index>(i1 * d + i2), static_cast<Eigen::Index>(r * D + c)) =
              prod(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r));
        }
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > tol) ++rank;
  }
  return rank;
}

ParentHamiltonianReport parent_hamiltonian(int ring_size) {
  if (ring_size < 4 || ring_size > 8) {
    throw std::invalid_argument("ring size must be between 4 and 8");
  }
  int n = ring_size;
  Eigen::MatrixXcd h = parent_hamiltonian_term();
  MpsResource res = build_aklt_variant_half();

  ParentHamiltonianReport rep;
  rep.ring_size = n;
  Eigen::VectorXcd psi = ring_state(res, n);
  rep.ring_term_energies.resize(static_cast<std::size_t>(n));
  rep.ring_state_energy = 0;
  for (int i = 0; i < n; ++i) {
    double e = std::real((psi.adjoint() * apply_term(h, psi, i, n))(0, 0));
    rep.ring_term_energies[static_cast<std::size_t>(i)] = e;
    rep.ring_state_energy += e;
  }
  rep.gamma2_rank = gamma2_rank(res);

  std::size_t dim = pow3(n);
  if (n <= 6) {
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                   static_cast<Eigen::Index>(dim));
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t c = 0; c < dim; ++c) {
      e.setZero();
      e[static_cast<Eigen::Index>(c)] = 1;
      full.col(static_cast<Eigen::Index>(c)) = apply_ring(h, e, n);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(full);
    rep.ground_energy = es.eigenvalues()[0];
    double gap_ref = es.eigenvalues()[0];
    rep.ground_degeneracy = 0;
    rep.spectral_gap = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()[i] - gap_ref < 1e-8) {
        ++rep.ground_degeneracy;
      } else {
        rep.spectral_gap = es.eigenvalues()[i] - gap_ref;
        break;
      }
    }
  } else {
    auto [e0, e1] = lowest_two(h, n);
    rep.ground_energy = e0;
    rep.ground_degeneracy = (e1 - e0 < 1e-8) ? 2 : 1;
    rep.spectral_gap = e1 - e0;
  }
  return rep;
}

double binary_entropy(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

DilutedReport diluted_bounds(int n, int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  DilutedReport rep;
  rep.n = n;
  rep.k = k;
  if (2 * k > 20) throw std::invalid_argument("oracle cap exceeded for the 2-block chain");
  DenseState chain = build_diluted_chain_direct(2, static_cast<std::size_t>(k));
  auto marg = site_marginal(chain, 0);
  rep.p1 = marg[1];
  rep.p1_closed_form = 1.0 / (2.0 * k);
  rep.site_entropy = binary_entropy(rep.p1);
  rep.entropy_bound = binary_entropy(3.0 / (4.0 * k + 2.0));
  rep.p1_bound = 1.0 / k;
  rep.p_block_bound = 2.0 / k;
  rep.p_total_bound = 2.0 * n * n / k;
  rep.p1_ok = rep.p1 < rep.p1_bound;
  rep.entropy_ok = rep.site_entropy <= rep.entropy_bound + 1e-12;
  return rep;
}

}  // namespace ctn
