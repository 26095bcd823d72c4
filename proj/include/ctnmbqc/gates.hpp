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

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctnmbqc/tensor.hpp"

namespace ctn {

inline constexpr double kPi = std::numbers::pi;
inline const cplx kI{0.0, 1.0};

// Kets. |+>, |->, |i>, |-i> are normalized.
Eigen::VectorXcd ket0();
Eigen::VectorXcd ket1();
Eigen::VectorXcd ket_plus();
Eigen::VectorXcd ket_minus();
Eigen::VectorXcd ket_i();
Eigen::VectorXcd ket_minus_i();

// Single-qubit gates.
Eigen::MatrixXcd mat_id(int d = 2);
Eigen::MatrixXcd mat_x();
Eigen::MatrixXcd mat_y();
Eigen::MatrixXcd mat_z();
Eigen::MatrixXcd mat_h();
Eigen::MatrixXcd mat_s();        // diag(1, i)
Eigen::MatrixXcd mat_sqrt_z();   // same as S
Eigen::MatrixXcd mat_s_phi(double phi);  // diag(1, e^{i phi})

// Two-qubit gates, basis order |00>,|01>,|10>,|11>.
Eigen::MatrixXcd mat_cz();
Eigen::MatrixXcd mat_cnot();                 // control = first qubit
Eigen::MatrixXcd mat_cs();                   // controlled-S
Eigen::MatrixXcd mat_zz_phi(double phi);     // diag(1, e^{i phi}, e^{i phi}, 1)
Eigen::MatrixXcd mat_p_phi(double phi);      // controlled-phase P(phi)
Eigen::MatrixXcd mat_copy();                 // 4x2 isometry |00><0| + |11><1|
Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Orthonormal single-site measurement basis.
struct LocalBasis {
  std::string label;
  std::vector<Eigen::VectorXcd> vectors;
  void check_orthonormal(double tol = 1e-12) const;
};

LocalBasis basis_z();
LocalBasis basis_x();
LocalBasis basis_y();
/// Qubit basis {(|0> + e^{i phi}|1>)/sqrt2, (|0> - e^{i phi}|1>)/sqrt2}.
LocalBasis basis_equatorial(double phi);
/// Qubit basis in the Y-Z plane at angle phi from the Z axis:
/// {cos(phi/2)|0> + i sin(phi/2)|1>, sin(phi/2)|0> - i cos(phi/2)|1>}.
LocalBasis basis_yz_plane(double phi);
/// Spin-1 bases used by the AKLT schemes; |±> live in span{|1>,|2>}.
LocalBasis basis_aklt_z();                      // {|0>,|1>,|2>}
LocalBasis basis_aklt_x();                      // {|0>, (|1>±|2>)/sqrt2}
LocalBasis basis_aklt_y();                      // {|0>, (|1>±i|2>)/sqrt2}
LocalBasis basis_aklt_equatorial(double phi);   // {|0>, (|1>±e^{i phi}|2>)/sqrt2}

/// Deterministic, portable RNG: mt19937_64 outputs mapped to doubles
/// without going through implementation-defined distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }
  std::uint64_t raw() { return gen_(); }
  /// Index sampled proportionally to the (nonnegative) weights.
  std::size_t pick(const std::vector<double>& weights);

 private:
  std::mt19937_64 gen_;
};

}  // namespace ctn
