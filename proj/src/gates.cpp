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

#include "ctnmbqc/gates.hpp"

namespace ctn {

namespace {
const double kSqrtHalf = std::sqrt(0.5);
}

Eigen::VectorXcd ket0() {
  Eigen::VectorXcd v(2);
  v << 1, 0;
  return v;
}
Eigen::VectorXcd ket1() {
  Eigen::VectorXcd v(2);
  v << 0, 1;
  return v;
}
Eigen::VectorXcd ket_plus() {
  Eigen::VectorXcd v(2);
  v << kSqrtHalf, kSqrtHalf;
  return v;
}
Eigen::VectorXcd ket_minus() {
  Eigen::VectorXcd v(2);
  v << kSqrtHalf, -kSqrtHalf;
  return v;
}
Eigen::VectorXcd ket_i() {
  Eigen::VectorXcd v(2);
  v << kSqrtHalf, kI * kSqrtHalf;
  return v;
}
Eigen::VectorXcd ket_minus_i() {
  Eigen::VectorXcd v(2);
  v << kSqrtHalf, -kI * kSqrtHalf;
  return v;
}

Eigen::MatrixXcd mat_id(int d) { return Eigen::MatrixXcd::Identity(d, d); }
Eigen::MatrixXcd mat_x() {
  Eigen::MatrixXcd m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
Eigen::MatrixXcd mat_y() {
  Eigen::MatrixXcd m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}
Eigen::MatrixXcd mat_z() {
  Eigen::MatrixXcd m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
Eigen::MatrixXcd mat_h() {
  Eigen::MatrixXcd m(2, 2);
  m << kSqrtHalf, kSqrtHalf, kSqrtHalf, -kSqrtHalf;
  return m;
}
Eigen::MatrixXcd mat_s() { return mat_s_phi(kPi / 2); }
Eigen::MatrixXcd mat_sqrt_z() { return mat_s(); }
Eigen::MatrixXcd mat_s_phi(double phi) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2, 2);
  m(1, 1) = std::exp(kI * phi);
  return m;
}

Eigen::MatrixXcd mat_cz() { return mat_p_phi(kPi); }
Eigen::MatrixXcd mat_cnot() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1;
  return m;
}
Eigen::MatrixXcd mat_cs() { return mat_p_phi(kPi / 2); }
Eigen::MatrixXcd mat_zz_phi(double phi) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
  m(1, 1) = m(2, 2) = std::exp(kI * phi);
  return m;
}
Eigen::MatrixXcd mat_p_phi(double phi) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(4, 4);
  m(3, 3) = std::exp(kI * phi);
  return m;
}
Eigen::MatrixXcd mat_copy() {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 2);
  m(0, 0) = 1;
  m(3, 1) = 1;
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd m(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      m.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return m;
}

void LocalBasis::check_orthonormal(double tol) const {
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      cplx ip = vectors[i].adjoint() * vectors[j];
      cplx want = (i == j) ? cplx(1, 0) : cplx(0, 0);
      if (std::abs(ip - want) > tol) {
        throw std::invalid_argument("basis '" + label + "' is not orthonormal");
      }
    }
  }
}

LocalBasis basis_z() { return {"Z", {ket0(), ket1()}}; }
LocalBasis basis_x() { return {"X", {ket_plus(), ket_minus()}}; }
LocalBasis basis_y() { return {"Y", {ket_i(), ket_minus_i()}}; }

LocalBasis basis_equatorial(double phi) {
  Eigen::VectorXcd a(2), b(2);
  a << kSqrtHalf, std::exp(kI * phi) * kSqrtHalf;
  b << kSqrtHalf, -std::exp(kI * phi) * kSqrtHalf;
  return {"EQ(" + std::to_string(phi) + ")", {a, b}};
}

LocalBasis basis_yz_plane(double phi) {
  Eigen::VectorXcd a(2), b(2);
  a << std::cos(phi / 2), kI * std::sin(phi / 2);
  b << std::sin(phi / 2), -kI * std::cos(phi / 2);
  return {"YZ(" + std::to_string(phi) + ")", {a, b}};
}

LocalBasis basis_aklt_z() {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(3), b = Eigen::VectorXcd::Zero(3),
                   c = Eigen::VectorXcd::Zero(3);
  a[0] = 1;
  b[1] = 1;
  c[2] = 1;
  return {"Z3", {a, b, c}};
}

LocalBasis basis_aklt_equatorial(double phi) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(3), b = Eigen::VectorXcd::Zero(3),
                   c = Eigen::VectorXcd::Zero(3);
  a[0] = 1;
  b[1] = kSqrtHalf;
  b[2] = std::exp(kI * phi) * kSqrtHalf;
  c[1] = kSqrtHalf;
  c[2] = -std::exp(kI * phi) * kSqrtHalf;
  return {"EQ3(" + std::to_string(phi) + ")", {a, b, c}};
}

LocalBasis basis_aklt_x() {
  LocalBasis b = basis_aklt_equatorial(0);
  b.label = "X3";
  return b;
}

LocalBasis basis_aklt_y() {
  LocalBasis b = basis_aklt_equatorial(kPi / 2);
  b.label = "Y3";
  return b;
}

std::size_t Rng::pick(const std::vector<double>& weights) {
  double total = 0;
  for (double w : weights) total += w;
  if (!(total > 0)) throw std::runtime_error("zero-probability branch requested");
  double r = uniform() * total;
  double acc = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (r < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace ctn
