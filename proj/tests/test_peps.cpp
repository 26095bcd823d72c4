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

#include "ctnmbqc/peps.hpp"

#include <cmath>

#include "doctest.h"

#include "ctnmbqc/mps.hpp"
#include "ctnmbqc/oracle.hpp"

using namespace ctn;

namespace {

bool proportional(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b, double tol = 1e-10) {
  return equal_mod_scalar(ComplexTensor::ket(a, "x"), ComplexTensor::ket(b, "x"), tol).equal;
}

FragmentSpec cluster_column_fragment(const PepsResource& res, int zu, int x, int zd) {
  FragmentSpec f;
  f.measured = {{res.site_id(0, 0), basis_z(), zu},
                {res.site_id(1, 0), basis_x(), x},
                {res.site_id(2, 0), basis_z(), zd}};
  f.through = {{res.site_id(1, 0), "r", true}, {res.site_id(1, 0), "l", false}};
  fill_fragment_defaults(res, f);
  return f;
}

}  // namespace

TEST_CASE("2-D cluster equals the CZ-built state exactly, up to one scalar") {
  for (auto [w, h] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}, {4, 4}}) {
    auto res = build_2d_resource(Peps2dKind::Cluster2d, w, h);
    Eigen::VectorXcd tn = contract_full(res);
    DenseState direct = build_cluster2d_direct(w, h);
    CHECK(proportional(tn, direct.amps));
  }
}

TEST_CASE("paper boundaries give an LU-equivalent but different state") {
  PepsOptions opt;
  opt.paper_boundaries = true;
  auto res = build_2d_resource(Peps2dKind::Cluster2d, 2, 2, opt);
  Eigen::VectorXcd tn = contract_full(res);
  DenseState direct = build_cluster2d_direct(2, 2);
  CHECK_FALSE(proportional(tn, direct.amps));
  // |1> boundaries inject Z on the right/top edge sites; undoing them
  // restores the CZ-built cluster (local-unitary equivalence).
  DenseState fixed = make_dense_state(direct.dims, tn);
  // sites row-major in a 2x2: right column = sites 1,3; top row = sites 0,1.
  fixed = apply_unitary(fixed, {1}, mat_z());
  fixed = apply_unitary(fixed, {3}, mat_z());
  fixed = apply_unitary(fixed, {0}, mat_z());
  fixed = apply_unitary(fixed, {1}, mat_z());
  CHECK(proportional(fixed.amps, direct.amps));
}

TEST_CASE("1xn cluster degenerates to the 1-D chain") {
  auto res = build_2d_resource(Peps2dKind::Cluster2d, 4, 1);
  Eigen::VectorXcd tn = contract_full(res);
  auto chain = build_1d_resource(Mps1dKind::Cluster1d);
  CHECK(proportional(tn, mps_dense_amplitudes(chain, 4)));
}

TEST_CASE("cluster column fragment equals H Z^{z_u+x+z_d} for all 8 outcomes") {
  auto res = build_2d_resource(Peps2dKind::Cluster2d, 1, 3);
  for (int zu = 0; zu < 2; ++zu) {
    for (int x = 0; x < 2; ++x) {
      for (int zd = 0; zd < 2; ++zd) {
        auto f = cluster_column_fragment(res, zu, x, zd);
        Eigen::MatrixXcd m = fragment_matrix(res, f);
        Eigen::MatrixXcd want = mat_h();
        if ((zu + x + zd) % 2) want = want * mat_z();
        auto pm = equal_mod_scalar(m, want, 1e-10);
        CHECK(pm.equal);
        // dense referee
        Eigen::MatrixXcd ref = induced_operator_dense(res, f);
        CHECK((ref - m).norm() < 1e-12);
      }
    }
  }
}

TEST_CASE("fragment composed along a row equals the product of columns") {
  auto res = build_2d_resource(Peps2dKind::Cluster2d, 3, 3);
  // whole 3-column wire fragment on row 1
  FragmentSpec whole;
  for (int c = 0; c < 3; ++c) {
    whole.measured.push_back({res.site_id(0, c), basis_z(), 0});
    whole.measured.push_back({res.site_id(1, c), basis_x(), c % 2});
    whole.measured.push_back({res.site_id(2, c), basis_z(), 1});
  }
  whole.through = {{res.site_id(1, 2), "r", true}, {res.site_id(1, 0), "l", false}};
  fill_fragment_defaults(res, whole);
  Eigen::MatrixXcd m_whole = fragment_matrix(res, whole);

  Eigen::MatrixXcd prod = mat_id();
  auto col = build_2d_resource(Peps2dKind::Cluster2d, 1, 3);
  for (int c = 0; c < 3; ++c) {
    auto f = cluster_column_fragment(col, 0, c % 2, 1);
    prod = fragment_matrix(col, f) * prod;
  }
  CHECK(equal_mod_scalar(m_whole, prod, 1e-10).equal);
}

TEST_CASE("aklt2d equals coupled MPS rows") {
  auto row = build_1d_resource(Mps1dKind::AkltVariant);
  for (auto [w, h] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}}) {
    auto res = build_2d_resource(Peps2dKind::Aklt2d, w, h);
    Eigen::VectorXcd tn = contract_full(res);
    DenseState direct = build_aklt2d_direct(row, w, h);
    CHECK(proportional(tn, direct.amps));
  }
}

TEST_CASE("aklt2d column (Z, s, Z) returns the 1-D matrix up to sign") {
  auto res = build_2d_resource(Peps2dKind::Aklt2d, 1, 3);
  auto chain = build_1d_resource(Mps1dKind::AkltVariant);
  for (int zu = 0; zu < 3; ++zu) {
    for (int s = 0; s < 3; ++s) {
      for (int zd = 0; zd < 3; ++zd) {
        FragmentSpec f;
        f.measured = {{res.site_id(0, 0), basis_aklt_z(), zu},
                      {res.site_id(1, 0), basis_aklt_z(), s},
                      {res.site_id(2, 0), basis_aklt_z(), zd}};
        f.through = {{res.site_id(1, 0), "r", true}, {res.site_id(1, 0), "l", false}};
        fill_fragment_defaults(res, f);
        Eigen::MatrixXcd m = fragment_matrix(res, f);
        auto pm = equal_mod_scalar(m, chain.site_matrices[s], 1e-10);
        CHECK(pm.equal);
        // the proportionality factor is a possible sign, nothing else
        CHECK(std::abs(std::imag(pm.phase)) < 1e-10 * std::abs(pm.phase));
      }
    }
  }
}

TEST_CASE("toric tensors contract the same dense state via both engines") {
  for (auto kind : {Peps2dKind::ToricPlain, Peps2dKind::ToricScheme1, Peps2dKind::ToricScheme2}) {
    auto res = build_2d_resource(kind, 3, 4);
    Eigen::VectorXcd a = contract_full(res);
    Eigen::VectorXcd b = assemble_dense(res);
    CHECK((a - b).norm() < 1e-10 * std::max(1.0, a.norm()));
  }
}

TEST_CASE("square and six-neighbor lattices agree between both engines") {
  for (auto kind : {Peps2dKind::Cluster2d, Peps2dKind::WeightedGraph, Peps2dKind::Rerouting}) {
    auto res = build_2d_resource(kind, 3, 3);
    Eigen::VectorXcd a = contract_full(res);
    Eigen::VectorXcd b = assemble_dense(res);
    CHECK((a - b).norm() < 1e-10 * std::max(1.0, a.norm()));
  }
}

TEST_CASE("K_H measured in the Y-Z plane gives ZZ(phi) on the through lines") {
  auto res = build_2d_resource(Peps2dKind::ToricPlain, 2, 4);
  // column 1 hosts the H-sublattice site on lines (1,2)
  int h_site = -1;
  for (const auto& s : res.sites) {
    if (s.subl == 'H') h_site = s.id;
  }
  REQUIRE(h_site >= 0);
  for (double phi : {0.0, kPi / 2, -kPi / 2, kPi, 0.7}) {
    FragmentSpec f;
    f.measured = {{h_site, basis_yz_plane(phi), 0}};
    f.through = {{h_site, "ru", true},
                 {h_site, "rd", true},
                 {h_site, "lu", false},
                 {h_site, "ld", false}};
    Eigen::MatrixXcd m = fragment_matrix(res, f);
    CHECK(equal_mod_scalar(m, mat_zz_phi(phi), 1e-10).equal);
    // outcome 1 gives ZZ(phi + pi)
    f.measured[0].outcome = 1;
    Eigen::MatrixXcd m1 = fragment_matrix(res, f);
    CHECK(equal_mod_scalar(m1, mat_zz_phi(phi + kPi), 1e-10).equal);
  }
  // computational-basis measurement transports with a correlated Z byproduct
  FragmentSpec f;
  f.measured = {{h_site, basis_z(), 1}};
  f.through = {{h_site, "ru", true},
               {h_site, "rd", true},
               {h_site, "lu", false},
               {h_site, "ld", false}};
  CHECK(equal_mod_scalar(fragment_matrix(res, f), kron(mat_z(), mat_z()), 1e-12).equal);
}

TEST_CASE("CNOT identity and scheme-1 hardwired gate") {
  // cnot = (1 x H)(sqrtZ x sqrtZ) ZZ(-pi/2) (1 x H)
  Eigen::MatrixXcd lhs = kron(mat_id(), mat_h()) * kron(mat_sqrt_z(), mat_sqrt_z()) *
                         mat_zz_phi(-kPi / 2) * kron(mat_id(), mat_h());
  CHECK(equal_mod_phase(lhs, mat_cnot(), 1e-12).equal);

  // K~_H[s] = (Z^s on upper) x (sqrtZ H Z^s on lower)
  auto res = build_2d_resource(Peps2dKind::ToricScheme1, 1, 2);
  const auto& site = res.sites[0];
  for (int s = 0; s < 2; ++s) {
    auto m = reshape_as_operator(site.tensors[s], {"lu", "ld"}, {"ru", "rd"}).as_matrix();
    Eigen::MatrixXcd zs = (s == 0) ? mat_id() : mat_z();
    CHECK((m - kron(zs, mat_sqrt_z() * mat_h() * zs)).norm() < 1e-12);
  }
}

TEST_CASE("K~_V factorization is exact and X-projection hits the even-parity subspace") {
  auto res = build_2d_resource(Peps2dKind::ToricScheme2, 1, 2);
  const auto& site = res.sites[0];
  auto cl = build_1d_resource(Mps1dKind::Cluster1d);
  for (int s = 0; s < 2; ++s) {
    auto m = reshape_as_operator(site.tensors[s], {"lu", "ld"}, {"ru", "rd"}).as_matrix();
    Eigen::MatrixXcd want = mat_copy() * cl.site_matrices[s] * mat_copy().adjoint();
    CHECK((m - want).norm() < 1e-12);
  }
  // sum over X-basis weights: the resulting two-in/two-out map is supported
  // on span{|00>,|11>} only.
  FragmentSpec f;
  f.measured = {{0, basis_x(), 0}};
  f.through = {{0, "ru", true}, {0, "rd", true}, {0, "lu", false}, {0, "ld", false}};
  Eigen::MatrixXcd m = fragment_matrix(res, f);
  for (int odd : {1, 2}) {
    CHECK(m.col(odd).norm() < 1e-12);
    CHECK(m.row(odd).norm() < 1e-12);
  }
}

TEST_CASE("weighted graph state equals the P(pi)/P(pi/2) edge circuit") {
  for (auto [w, h] : std::vector<std::pair<int, int>>{{2, 2}, {3, 3}}) {
    auto res = build_2d_resource(Peps2dKind::WeightedGraph, w, h);
    Eigen::VectorXcd tn = contract_full(res);
    std::vector<PhasedEdge> edges;
    auto id = [&](int r, int c) { return r * w + c; };
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (c + 1 < w) edges.push_back({id(r, c), id(r, c + 1), kPi});
        if (r + 1 < h && c + 1 < w) edges.push_back({id(r, c), id(r + 1, c + 1), kPi / 2});
        if (r + 1 < h && c > 0) edges.push_back({id(r, c), id(r + 1, c - 1), kPi / 2});
      }
    }
    DenseState direct = build_graph_state(static_cast<std::size_t>(w * h), edges);
    CHECK(proportional(tn, direct.amps));
  }
}

TEST_CASE("weighted wire identity H S^{2x+z} for all 32 outcome combinations") {
  auto res = build_2d_resource(Peps2dKind::WeightedGraph, 3, 3);
  for (int x = 0; x < 2; ++x) {
    for (int bits = 0; bits < 16; ++bits) {
      int zmu = (bits >> 3) & 1, zmd = (bits >> 2) & 1, zpu = (bits >> 1) & 1, zpd = bits & 1;
      FragmentSpec f;
      f.measured = {{res.site_id(1, 1), basis_x(), x},
                    {res.site_id(0, 0), basis_z(), zmu},
                    {res.site_id(2, 0), basis_z(), zmd},
                    {res.site_id(0, 2), basis_z(), zpu},
                    {res.site_id(2, 2), basis_z(), zpd}};
      f.through = {{res.site_id(1, 1), "r", true}, {res.site_id(1, 1), "l", false}};
      fill_fragment_defaults(res, f);
      Eigen::MatrixXcd m = fragment_matrix(res, f);
      int z = zmu + zmd + zpu + zpd;
      Eigen::MatrixXcd want = mat_h();
      for (int i = 0; i < (2 * x + z) % 4; ++i) want = want * mat_s();
      CHECK(equal_mod_scalar(m, want, 1e-10).equal);
      Eigen::MatrixXcd ref = induced_operator_dense(res, f);
      CHECK((ref - m).norm() < 1e-12);
    }
  }
}

TEST_CASE("rerouting state equals the alternating-phase edge circuit") {
  auto res = build_2d_resource(Peps2dKind::Rerouting, 3, 3);
  Eigen::VectorXcd tn = contract_full(res);
  std::vector<PhasedEdge> edges;
  int w = 3, h = 3;
  auto id = [&](int r, int c) { return r * w + c; };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (c + 1 < w) edges.push_back({id(r, c), id(r, c + 1), kPi});
      // vertical bond between rows r and r+1 carries the u-ket of the LOWER
      // site: B rows contribute P(pi/2), A rows P(pi).
      if (r + 1 < h) edges.push_back({id(r, c), id(r + 1, c), (r + 1) % 2 ? kPi / 2 : kPi});
    }
  }
  DenseState direct = build_graph_state(9, edges);
  CHECK(proportional(tn, direct.amps));
}

TEST_CASE("rerouting corner identities, all outcome combinations") {
  // (i) A above, B[X], A below -> H Z^{x+z_d} S^{z_u}
  {
    auto res = build_2d_resource(Peps2dKind::Rerouting, 1, 3);
    for (int zu = 0; zu < 2; ++zu) {
      for (int x = 0; x < 2; ++x) {
        for (int zd = 0; zd < 2; ++zd) {
          FragmentSpec f;
          f.measured = {{res.site_id(0, 0), basis_z(), zu},
                        {res.site_id(1, 0), basis_x(), x},
                        {res.site_id(2, 0), basis_z(), zd}};
          f.through = {{res.site_id(1, 0), "r", true}, {res.site_id(1, 0), "l", false}};
          fill_fragment_defaults(res, f);
          Eigen::MatrixXcd want = mat_h();
          for (int i = 0; i < (x + zd) % 2; ++i) want = want * mat_z();
          for (int i = 0; i < zu; ++i) want = want * mat_s();
          CHECK(equal_mod_scalar(fragment_matrix(res, f), want, 1e-10).equal);
        }
      }
    }
  }
  // (ii) B above, A[X], B below -> H Z^{x+z_u} S^{z_d}, rows 1..3 of a
  // 4-row lattice
  {
    auto res = build_2d_resource(Peps2dKind::Rerouting, 1, 4);
    for (int zu = 0; zu < 2; ++zu) {
      for (int x = 0; x < 2; ++x) {
        for (int zd = 0; zd < 2; ++zd) {
          FragmentSpec f;
          f.measured = {{res.site_id(1, 0), basis_z(), zu},
                        {res.site_id(2, 0), basis_x(), x},
                        {res.site_id(3, 0), basis_z(), zd}};
          f.through = {{res.site_id(2, 0), "r", true}, {res.site_id(2, 0), "l", false}};
          fill_fragment_defaults(res, f);
          Eigen::MatrixXcd want = mat_h();
          for (int i = 0; i < (x + zu) % 2; ++i) want = want * mat_z();
          for (int i = 0; i < zd; ++i) want = want * mat_s();
          CHECK(equal_mod_scalar(fragment_matrix(res, f), want, 1e-10).equal);
        }
      }
    }
  }
  // (iii) A[X] turning the wire upward, A[Z_r] right, B[Z_d] below.
  // The printed closed form references an outcome that does not exist in
  // the picture; the contraction gives H Z^{x+z_r} S^{z_d}.
  {
    auto res = build_2d_resource(Peps2dKind::Rerouting, 2, 2);
    for (int x = 0; x < 2; ++x) {
      for (int zr = 0; zr < 2; ++zr) {
        for (int zd = 0; zd < 2; ++zd) {
          FragmentSpec f;
          f.measured = {{res.site_id(0, 0), basis_x(), x},
                        {res.site_id(0, 1), basis_z(), zr},
                        {res.site_id(1, 0), basis_z(), zd}};
          f.through = {{res.site_id(0, 0), "u", true}, {res.site_id(0, 0), "l", false}};
          fill_fragment_defaults(res, f);
          Eigen::MatrixXcd want = mat_h();
          for (int i = 0; i < (x + zr) % 2; ++i) want = want * mat_z();
          for (int i = 0; i < zd; ++i) want = want * mat_s();
          CHECK(equal_mod_scalar(fragment_matrix(res, f), want, 1e-10).equal);
        }
      }
    }
  }
  // (iv) wire entering from above: A[Z_l], A[X] with output right, B[Z_d]
  // below -> (HSH)^{z_d} X^{z_l + x}
  {
    auto res = build_2d_resource(Peps2dKind::Rerouting, 2, 4);
    for (int zl = 0; zl < 2; ++zl) {
      for (int x = 0; x < 2; ++x) {
        for (int zd = 0; zd < 2; ++zd) {
          FragmentSpec f;
          f.measured = {{res.site_id(2, 0), basis_z(), zl},
                        {res.site_id(2, 1), basis_x(), x},
                        {res.site_id(3, 1), basis_z(), zd}};
          f.through = {{res.site_id(2, 1), "r", true}, {res.site_id(2, 1), "u", false}};
          fill_fragment_defaults(res, f);
          Eigen::MatrixXcd hsh = mat_h() * mat_s() * mat_h();
          Eigen::MatrixXcd want = mat_id();
          for (int i = 0; i < zd; ++i) want = want * hsh;
          for (int i = 0; i < (zl + x) % 2; ++i) want = want * mat_x();
          CHECK(equal_mod_scalar(fragment_matrix(res, f), want, 1e-10).equal);
        }
      }
    }
  }
  // (v) A[Z_u] above, B[X] sending the wire downward, B[Z_r] right
  // -> Z^{x+z_r} S^{z_u}
  {
    auto res = build_2d_resource(Peps2dKind::Rerouting, 2, 2);
    for (int zu = 0; zu < 2; ++zu) {
      for (int x = 0; x < 2; ++x) {
        for (int zr = 0; zr < 2; ++zr) {
          FragmentSpec f;
          f.measured = {{res.site_id(0, 0), basis_z(), zu},
                        {res.site_id(1, 0), basis_x(), x},
                        {res.site_id(1, 1), basis_z(), zr}};
          f.through = {{res.site_id(1, 0), "d", true}, {res.site_id(1, 0), "l", false}};
          fill_fragment_defaults(res, f);
          Eigen::MatrixXcd want = mat_id();
          for (int i = 0; i < (x + zr) % 2; ++i) want = want * mat_z();
          for (int i = 0; i < zu; ++i) want = want * mat_s();
          CHECK(equal_mod_scalar(fragment_matrix(res, f), want, 1e-10).equal);
        }
      }
    }
  }
  // (vi) wire entering from below: A[Z_u] above, B[Z_l] left, B[X] output
  // right -> H Z^{x+z_u+z_l} (SZ)^{z_u}
  {
    auto res = build_2d_resource(Peps2dKind::Rerouting, 2, 2);
    for (int zu = 0; zu < 2; ++zu) {
      for (int zl = 0; zl < 2; ++zl) {
        for (int x = 0; x < 2; ++x) {
          FragmentSpec f;
          f.measured = {{res.site_id(0, 1), basis_z(), zu},
                        {res.site_id(1, 0), basis_z(), zl},
                        {res.site_id(1, 1), basis_x(), x}};
          f.through = {{res.site_id(1, 1), "r", true}, {res.site_id(1, 1), "d", false}};
          fill_fragment_defaults(res, f);
          Eigen::MatrixXcd want = mat_h();
          for (int i = 0; i < (x + zu + zl) % 2; ++i) want = want * mat_z();
          for (int i = 0; i < zu; ++i) want = want * (mat_s() * mat_z());
          CHECK(equal_mod_scalar(fragment_matrix(res, f), want, 1e-10).equal);
        }
      }
    }
  }
}

TEST_CASE("rerouting junction imprints a controlled-S gate") {
  auto res = build_2d_resource(Peps2dKind::Rerouting, 1, 2);
  for (int xa = 0; xa < 2; ++xa) {
    for (int xb = 0; xb < 2; ++xb) {
      FragmentSpec f;
      f.measured = {{res.site_id(0, 0), basis_x(), xa}, {res.site_id(1, 0), basis_x(), xb}};
      f.through = {{res.site_id(0, 0), "r", true},
                   {res.site_id(1, 0), "r", true},
                   {res.site_id(0, 0), "l", false},
                   {res.site_id(1, 0), "l", false}};
      fill_fragment_defaults(res, f);
      Eigen::MatrixXcd m = fragment_matrix(res, f);
      Eigen::MatrixXcd za = (xa == 0) ? mat_id() : mat_z();
      Eigen::MatrixXcd zb = (xb == 0) ? mat_id() : mat_z();
      Eigen::MatrixXcd want = kron(mat_h() * za, mat_h() * zb) * mat_cs();
      CHECK(equal_mod_scalar(m, want, 1e-10).equal);
    }
  }
}

TEST_CASE("caps and open-leg errors") {
  auto res = build_2d_resource(Peps2dKind::Cluster2d, 3, 3);
  CHECK_THROWS_AS(contract_full(res, 64), std::invalid_argument);

  FragmentSpec f;
  f.measured = {{res.site_id(1, 1), basis_x(), 0}};
  f.through = {{res.site_id(1, 1), "r", true}, {res.site_id(1, 1), "l", false}};
  // u and d bond to unmeasured sites and no override is given
  CHECK_THROWS_AS(fragment_operator(res, f), std::invalid_argument);
}

TEST_CASE("width guard rejects lattices whose cut is too wide") {
  auto res = build_2d_resource(Peps2dKind::Cluster2d, 10, 2);
  CHECK_THROWS_AS(contract_full(res, std::size_t{1} << 30), std::invalid_argument);
}
