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

#include "ctnmbqc/mps.hpp"

#include <stdexcept>

namespace ctn {

void MpsResource::validate() const {
  if (phys_dim < 2 || bond_dim < 1) throw std::invalid_argument("bad MPS dimensions");
  if (site_matrices.size() != phys_dim) {
    throw std::invalid_argument("expected one site matrix per outcome");
  }
  for (const auto& a : site_matrices) {
    if (a.rows() != static_cast<Eigen::Index>(bond_dim) ||
        a.cols() != static_cast<Eigen::Index>(bond_dim)) {
      throw std::invalid_argument("site matrix is not D x D");
    }
  }
  if (boundary_left.size() != static_cast<Eigen::Index>(bond_dim) ||
      boundary_right.size() != static_cast<Eigen::Index>(bond_dim)) {
    throw std::invalid_argument("boundary vector is not D-dimensional");
  }
  Eigen::MatrixXcd env = boundary_right * boundary_right.adjoint();
  for (int n = 1; n <= 8; ++n) {
    Eigen::MatrixXcd next = Eigen::MatrixXcd::Zero(bond_dim, bond_dim);
    for (const auto& a : site_matrices) next += a.adjoint() * env * a;
    env = next;
    double norm2 = std::real((boundary_left.adjoint() * env * boundary_left)(0, 0));
    if (!(norm2 > 1e-14)) {
      throw std::invalid_argument("resource '" + name + "' has zero norm at n=" +
                                  std::to_string(n));
    }
  }
}

namespace {

MpsResource make(std::string name, std::size_t d, std::size_t D,
                 std::vector<Eigen::MatrixXcd> mats, Eigen::VectorXcd l, Eigen::VectorXcd r) {
  MpsResource res;
  res.name = std::move(name);
  res.phys_dim = d;
  res.bond_dim = D;
  res.site_matrices = std::move(mats);
  res.boundary_left = std::move(l);
  res.boundary_right = std::move(r);
  res.validate();
  return res;
}

MpsResource make_aklt(const Eigen::MatrixXcd& a0, double offdiag_weight, std::string name) {
  Eigen::MatrixXcd a1 = offdiag_weight * ket0() * ket1().adjoint();
  Eigen::MatrixXcd a2 = offdiag_weight * ket1() * ket0().adjoint();
  return make(std::move(name), 3, 2, {a0, a1, a2}, ket0(), ket0());
}

}  // namespace

MpsResource build_1d_resource(Mps1dKind kind, int m) {
  switch (kind) {
    case Mps1dKind::Cluster1d: {
      Eigen::MatrixXcd a0 = ket_plus() * ket0().adjoint();
      Eigen::MatrixXcd a1 = ket_minus() * ket1().adjoint();
      return make("cluster1d", 2, 2, {a0, a1}, ket_plus(), ket0());
    }
    case Mps1dKind::AkltVariant:
      return make_aklt(mat_h(), std::sqrt(2.0), "aklt");
    case Mps1dKind::AkltOriginal:
      return make_aklt(mat_z(), std::sqrt(2.0), "aklt-orig");
    case Mps1dKind::Dihedral: {
      if (m < 2) throw std::invalid_argument("dihedral resource requires m >= 2");
      Eigen::MatrixXcd g = std::cos(kPi / m) * mat_id() + kI * std::sin(kPi / m) * mat_x();
      Eigen::MatrixXcd a0 = ket0() * ket0().adjoint() * g;
      Eigen::MatrixXcd a1 = ket1() * ket1().adjoint() * g;
      return make("dihedral:" + std::to_string(m), 2, 2, {a0, a1},
                  g.adjoint() * ket_plus(), ket_plus());
    }
  }
  throw std::invalid_argument("unknown 1-D resource kind");
}

MpsResource build_aklt_variant_half() { return make_aklt(mat_h(), 0.5, "aklt-appendix"); }

cplx amplitude(const MpsResource& res, std::span<const int> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("empty outcome list");
  Eigen::VectorXcd v = res.boundary_left;
  for (int s : outcomes) {
    if (s < 0 || s >= static_cast<int>(res.phys_dim)) {
      throw std::out_of_range("outcome index out of range");
    }
    v = res.site_matrices[s] * v;
  }
  return (res.boundary_right.adjoint() * v)(0, 0);
}

Eigen::MatrixXcd project_site(const MpsResource& res, const Eigen::VectorXcd& phi) {
  if (phi.size() != static_cast<Eigen::Index>(res.phys_dim)) {
    throw std::invalid_argument("projection vector has wrong dimension");
  }
  if (phi.norm() < 1e-14) throw std::invalid_argument("projection vector is zero");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(res.bond_dim, res.bond_dim);
  for (std::size_t s = 0; s < res.phys_dim; ++s) {
    m += std::conj(phi[static_cast<Eigen::Index>(s)]) * res.site_matrices[s];
  }
  return m;
}

std::vector<Eigen::MatrixXcd> right_environments(const MpsResource& res, std::size_t n) {
  std::vector<Eigen::MatrixXcd> env(n + 1);
  env[n] = res.boundary_right * res.boundary_right.adjoint();
  for (std::size_t i = n; i-- > 0;) {
    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(res.bond_dim, res.bond_dim);
    for (const auto& a : res.site_matrices) e += a.adjoint() * env[i + 1] * a;
    env[i] = e;
  }
  return env;
}

ChainSample sample_chain(const MpsResource& res, std::span<const LocalBasis> bases,
                         std::uint64_t seed) {
  std::size_t n = bases.size();
  if (n == 0) throw std::invalid_argument("empty basis list");
  auto env = right_environments(res, n);
  Rng rng(seed);

  ChainSample out;
  Eigen::VectorXcd psi = res.boundary_left;
  for (std::size_t i = 0; i < n; ++i) {
    const LocalBasis& basis = bases[i];
    basis.check_orthonormal();
    if (basis.vectors.size() != res.phys_dim) {
      throw std::invalid_argument("basis dimension does not match resource");
    }
    std::vector<double> weights(basis.vectors.size());
    std::vector<Eigen::VectorXcd> branches(basis.vectors.size());
    for (std::size_t k = 0; k < basis.vectors.size(); ++k) {
      branches[k] = project_site(res, basis.vectors[k]) * psi;
      weights[k] = std::real((branches[k].adjoint() * env[i + 1] * branches[k])(0, 0));
      if (weights[k] < 0) weights[k] = 0;
    }
    std::size_t pick = rng.pick(weights);
    out.outcomes.push_back(static_cast<int>(pick));
    psi = branches[pick];
    double norm = psi.norm();
    if (norm < 1e-280) throw std::runtime_error("correlation state collapsed to zero");
    psi /= norm;
  }
  out.state.column = psi;
  return out;
}

Eigen::VectorXcd mps_dense_amplitudes(const MpsResource& res, std::size_t n) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    total *= res.phys_dim;
    if (total > (1u << 21)) throw std::invalid_argument("chain too long for dense amplitudes");
  }
  std::vector<Eigen::VectorXcd> prefix{res.boundary_left};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Eigen::VectorXcd> next(prefix.size() * res.phys_dim);
    for (std::size_t p = 0; p < prefix.size(); ++p) {
      for (std::size_t s = 0; s < res.phys_dim; ++s) {
        next[p * res.phys_dim + s] = res.site_matrices[s] * prefix[p];
      }
    }
    prefix = std::move(next);
  }
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(total));
  for (std::size_t i = 0; i < total; ++i) {
    amps[static_cast<Eigen::Index>(i)] = (res.boundary_right.adjoint() * prefix[i])(0, 0);
  }
  return amps;
}

}  // namespace ctn
