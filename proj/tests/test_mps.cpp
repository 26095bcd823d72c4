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

#include <array>
#include <cmath>
#include <functional>
#include <map>

#include "doctest.h"

#include "ctnmbqc/oracle.hpp"

using namespace ctn;

namespace {

std::vector<MpsResource> catalog_1d() {
  return {build_1d_resource(Mps1dKind::Cluster1d), build_1d_resource(Mps1dKind::AkltVariant),
          build_1d_resource(Mps1dKind::AkltOriginal), build_1d_resource(Mps1dKind::Dihedral, 2),
          build_1d_resource(Mps1dKind::Dihedral, 3), build_1d_resource(Mps1dKind::Dihedral, 5)};
}

}  // namespace

TEST_CASE("catalog dimensions") {
  auto cl = build_1d_resource(Mps1dKind::Cluster1d);
  CHECK(cl.phys_dim == 2);
  CHECK(cl.bond_dim == 2);
  auto ak = build_1d_resource(Mps1dKind::AkltVariant);
  CHECK(ak.phys_dim == 3);
  CHECK(ak.bond_dim == 2);
  CHECK_THROWS_AS(build_1d_resource(Mps1dKind::Dihedral, 1), std::invalid_argument);
}

TEST_CASE("dihedral(2): G = iX up to phase, A[0] = |0><0| iX") {
  auto res = build_1d_resource(Mps1dKind::Dihedral, 2);
  Eigen::MatrixXcd want = ket0() * ket0().adjoint() * (kI * mat_x());
  CHECK((res.site_matrices[0] - want).norm() < 1e-12);
}

TEST_CASE("cluster amplitudes carry the (-1)^p sign structure") {
  auto res = build_1d_resource(Mps1dKind::Cluster1d);
  std::array<int, 2> s00{0, 0}, s01{0, 1}, s10{1, 0}, s11{1, 1};
  cplx a00 = amplitude(res, s00), a01 = amplitude(res, s01), a10 = amplitude(res, s10),
       a11 = amplitude(res, s11);
  CHECK(a00.real() > 0);
  CHECK(std::abs(std::abs(a00) - std::abs(a11)) < 1e-12);
  CHECK(std::abs(std::abs(a01) - std::abs(a00)) < 1e-12);
  CHECK(std::abs(std::abs(a10) - std::abs(a00)) < 1e-12);
  CHECK(std::abs(a11 + a00) < 1e-12);  // sign -1 on 11
  CHECK(std::abs(a01 - a00) < 1e-12);
  CHECK(std::abs(a10 - a00) < 1e-12);

  // n=3: sign = (-1)^{#adjacent 11 pairs}
  for (int bits = 0; bits < 8; ++bits) {
    std::array<int, 3> s{(bits >> 2) & 1, (bits >> 1) & 1, bits & 1};
    int p = (s[0] & s[1]) + (s[1] & s[2]);
    cplx a = amplitude(res, s);
    CHECK(std::abs(a - std::pow(-1.0, p) * std::abs(a00) / std::sqrt(2.0)) < 1e-12);
  }
}

TEST_CASE("dihedral m=2 single-site amplitude equals 1/2") {
  auto res = build_1d_resource(Mps1dKind::Dihedral, 2);
  std::array<int, 1> s0{0};
  CHECK(std::abs(amplitude(res, s0) - cplx(0.5, 0)) < 1e-12);
}

TEST_CASE("sum of |amplitude|^2 over all strings equals the oracle norm") {
  for (const auto& res : catalog_1d()) {
    std::size_t n = 3;
    double sum = 0;
    std::vector<int> s(n, 0);
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= res.phys_dim;
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      for (std::size_t i = n; i-- > 0;) {
        s[i] = static_cast<int>(rest % res.phys_dim);
        rest /= res.phys_dim;
      }
      sum += std::norm(amplitude(res, s));
    }
    double oracle_norm2 = mps_dense_amplitudes(res, n).squaredNorm();
    CHECK(std::abs(sum - oracle_norm2) < 1e-10 * std::max(1.0, oracle_norm2));
  }
}

TEST_CASE("cluster amplitudes match the CZ-built oracle state exactly") {
  auto res = build_1d_resource(Mps1dKind::Cluster1d);
  for (std::size_t n = 2; n <= 6; ++n) {
    Eigen::VectorXcd tn = mps_dense_amplitudes(res, n).normalized();
    DenseState direct = build_cluster1d_direct(n);
    auto pm = equal_mod_phase(ComplexTensor::ket(tn, "a"),
                              ComplexTensor::ket(direct.amps, "a"), 1e-10);
    CHECK(pm.equal);
  }
}

TEST_CASE("project_site identities") {
  auto cl = build_1d_resource(Mps1dKind::Cluster1d);
  auto hp = equal_mod_scalar(project_site(cl, ket_plus()), mat_h(), 1e-12);
  CHECK(hp.equal);
  auto hm = equal_mod_scalar(project_site(cl, ket_minus()), mat_h() * mat_z(), 1e-12);
  CHECK(hm.equal);
  // same proportionality magnitude: both are H-type over sqrt2
  double m1 = project_site(cl, ket_plus()).norm();
  double m2 = project_site(cl, ket_minus()).norm();
  CHECK(std::abs(m1 - m2) < 1e-12);

  auto ak = build_1d_resource(Mps1dKind::AkltVariant);
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(3);
  e0[0] = 1;
  CHECK((project_site(ak, e0) - mat_h()).norm() < 1e-12);  // exactly H

  // The three AKLT X-basis outcomes act as the unitaries H, X, iY.
  auto basis = basis_aklt_x();
  CHECK(equal_mod_phase(project_site(ak, basis.vectors[0]), mat_h(), 1e-12).equal);
  CHECK(equal_mod_phase(project_site(ak, basis.vectors[1]), mat_x(), 1e-12).equal);
  CHECK(equal_mod_phase(project_site(ak, basis.vectors[2]), mat_z() * mat_x(), 1e-12).equal);
}

TEST_CASE("project_site is linear in phi") {
  auto res = build_1d_resource(Mps1dKind::AkltVariant);
  Rng rng(5);
  Eigen::VectorXcd a(3), b(3);
  for (int i = 0; i < 3; ++i) {
    a[i] = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
    b[i] = cplx(rng.uniform() - 0.5, rng.uniform() - 0.5);
  }
  cplx alpha(0.3, -1.1), beta(-0.2, 0.7);
  Eigen::MatrixXcd lhs = project_site(res, alpha * a + beta * b);
  // A[phi] is antilinear in phi through the <phi|s> coefficients.
  Eigen::MatrixXcd rhs = std::conj(alpha) * project_site(res, a) + std::conj(beta) * project_site(res, b);
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("amplitudes match the dense oracle entrywise after one global scalar") {
  for (const auto& res : catalog_1d()) {
    std::size_t n = 5;
    Eigen::VectorXcd dense = mps_dense_amplitudes(res, n);
    std::vector<int> s(n, 0);
    std::size_t total = static_cast<std::size_t>(dense.size());
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rest = flat;
      for (std::size_t i = n; i-- > 0;) {
        s[i] = static_cast<int>(rest % res.phys_dim);
        rest /= res.phys_dim;
      }
      CHECK(std::abs(amplitude(res, s) - dense[static_cast<Eigen::Index>(flat)]) < 1e-10);
    }
  }
}

TEST_CASE("all-Z sampling on the cluster: next outcome deterministic after |0> state") {
  auto res = build_1d_resource(Mps1dKind::Cluster1d);
  // Basis list: X then Z. After the X outcome the correlation state is
  // H Z^x |+> which is |0> (x=0) or |1> (x=1); the physical Z outcome at the
  // next site must reproduce it with certainty.
  std::vector<LocalBasis> bases{basis_x(), basis_z()};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto sample = sample_chain(res, bases, seed);
    CHECK(sample.outcomes[1] == sample.outcomes[0]);
  }
}

TEST_CASE("AKLT three-outcome statistics are uniform in the bulk") {
  auto res = build_1d_resource(Mps1dKind::AkltVariant);
  std::size_t n = 30;
  std::vector<LocalBasis> bases(n, basis_aklt_x());
  std::map<int, int> counts;
  int samples = 0;
  for (std::uint64_t seed = 0; seed < 1250; ++seed) {
    auto sample = sample_chain(res, bases, 90000 + seed);
    for (std::size_t i = 0; i < 8; ++i) {  // bulk sites, long tail to the right
      counts[sample.outcomes[i]]++;
      ++samples;
    }
  }
  for (int k = 0; k < 3; ++k) {
    double freq = static_cast<double>(counts[k]) / samples;
    CHECK(std::abs(freq - 1.0 / 3.0) < 0.02);
  }
}

TEST_CASE("sampling frequencies match oracle marginals in TV distance") {
  for (const auto& res : catalog_1d()) {
    std::size_t n = 4;
    std::vector<LocalBasis> bases;
    for (std::size_t i = 0; i < n; ++i) {
      if (res.phys_dim == 2) {
        bases.push_back(i % 2 ? basis_x() : basis_z());
      } else {
        bases.push_back(i % 2 ? basis_aklt_x() : basis_aklt_z());
      }
    }
    std::map<std::vector<int>, int> counts;
    int shots = 10000;
    for (int s = 0; s < shots; ++s) {
      counts[sample_chain(res, bases, 7000 + s).outcomes]++;
    }
    // oracle joint distribution by projecting the dense state
    DenseState state = build_mps_direct(res, n);
    double tv = 0;
    std::vector<int> outc(n, 0);
    std::function<void(std::size_t, const DenseState&, double)> rec =
        [&](std::size_t site, const DenseState& st, double weight) {
          if (weight < 1e-18) {
            return;
          }
          if (site == n) {
            double freq = counts.count(outc) ? static_cast<double>(counts[outc]) / shots : 0.0;
            tv += std::abs(freq - weight);
            return;
          }
          auto probs = measure_probabilities(st, site, bases[site]);
          for (std::size_t k = 0; k < probs.size(); ++k) {
            if (probs[k] < 1e-18) continue;
            auto [w, collapsed] = project(st, site, bases[site].vectors[k]);
            collapsed.amps /= std::sqrt(w);
            outc[site] = static_cast<int>(k);
            rec(site + 1, collapsed, weight * probs[k]);
          }
        };
    rec(0, state, 1.0);
    CHECK(tv / 2 < 0.05);
  }
}

TEST_CASE("dihedral X measurement gives the correlation operator Z^x G") {
  for (int m : {2, 3, 4}) {
    auto res = build_1d_resource(Mps1dKind::Dihedral, m);
    Eigen::MatrixXcd g = std::cos(kPi / m) * mat_id() + kI * std::sin(kPi / m) * mat_x();
    CHECK(equal_mod_scalar(project_site(res, ket_plus()), g, 1e-12).equal);
    CHECK(equal_mod_scalar(project_site(res, ket_minus()), mat_z() * g, 1e-12).equal);
  }
}

TEST_CASE("readout is a correlation-space Z measurement even for superpositions") {
  // Stronger reading of the readout argument, refereed against the oracle:
  // measure site 1 in an equatorial basis (making the correlation state a
  // superposition), then compare the conditional distribution of a physical
  // Z outcome at site 2 with |<z|psi_corr>|^2 weighted by the remaining
  // chain environment being proportional to the identity in the bulk.
  auto res = build_1d_resource(Mps1dKind::Cluster1d);
  std::size_t n = 8;
  std::vector<LocalBasis> bases(n, basis_x());
  bases[0] = basis_equatorial(0.77);
  bases[1] = basis_z();
  // exact conditionals from the dense state
  DenseState state = build_mps_direct(res, n);
  auto [w0, st1] = project(state, 0, bases[0].vectors[0]);
  st1.amps /= std::sqrt(w0);
  auto probs = measure_probabilities(st1, 1, basis_z());
  // correlation prediction
  Eigen::VectorXcd psi = project_site(res, bases[0].vectors[0]) * res.boundary_left;
  psi.normalize();
  CHECK(std::abs(probs[0] - std::norm(psi[0])) < 1e-9);
  CHECK(std::abs(probs[1] - std::norm(psi[1])) < 1e-9);
}

TEST_CASE("zero-norm resources are rejected") {
  MpsResource bad;
  bad.name = "bad";
  bad.phys_dim = 2;
  bad.bond_dim = 2;
  bad.site_matrices = {Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(2, 2)};
  bad.boundary_left = ket0();
  bad.boundary_right = ket0();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
