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

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace ctn {

using cplx = std::complex<double>;

/// Default absolute tolerance on amplitudes. All catalog tensors are built
/// from exact constants (0, ±2^{-1/2}, ±i·2^{-1/2}, ...), so nothing looser
/// is ever needed.
inline constexpr double kDefaultTol = 1e-10;

struct Leg {
  std::string name;
  std::size_t dim;
};

/// Dense complex tensor with named legs, stored row-major over the legs in
/// order. Immutable after construction apart from in-place builders used
/// before first publication; all module-level operations treat tensors as
/// values.
class ComplexTensor {
 public:
  ComplexTensor() = default;
  ComplexTensor(std::vector<Leg> legs, std::vector<cplx> data);

  static ComplexTensor zeros(std::vector<Leg> legs);
  static ComplexTensor scalar(cplx value);
  /// Rank-1 tensor from a vector (entries taken as ket components).
  static ComplexTensor ket(const Eigen::VectorXcd& v, const std::string& leg);
  /// Two-leg tensor from a matrix m(out, in); legs ordered [out, in].
  static ComplexTensor op(const Eigen::MatrixXcd& m, const std::string& out_leg,
                          const std::string& in_leg);

  const std::vector<Leg>& legs() const { return legs_; }
  std::size_t rank() const { return legs_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<cplx>& data() const { return data_; }
  std::vector<cplx>& mutable_data() { return data_; }

  bool has_leg(std::string_view name) const;
  std::size_t leg_index(std::string_view name) const;
  std::size_t dim(std::string_view name) const;

  cplx value(const std::vector<std::size_t>& index) const;
  cplx& at(const std::vector<std::size_t>& index);

  /// New tensor with legs renamed per the map (absent names untouched).
  ComplexTensor renamed(const std::map<std::string, std::string>& names) const;
  /// New tensor with legs permuted into the given order (all legs listed).
  ComplexTensor transposed(const std::vector<std::string>& order) const;

  /// Interpret a 2-leg tensor as an Eigen matrix (first leg = row).
  Eigen::MatrixXcd as_matrix() const;
  Eigen::VectorXcd as_vector() const;

  double max_abs() const;
  void check_finite() const;

 private:
  std::vector<Leg> legs_;
  std::vector<cplx> data_;
};

/// Contract paired legs of two tensors. The result carries all unpaired legs
/// of `a` followed by those of `b`, in order. An empty pair list yields the
/// outer product.
ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       const std::vector<std::pair<std::string, std::string>>& pairs);

/// Verdict of a phase-insensitive comparison. Every operator identity in the
/// catalog is checked projectively; `phase` is fitted from the
/// largest-magnitude entry.
struct PhaseMatch {
  bool equal = false;
  cplx phase{1.0, 0.0};
  double max_abs_deviation = 0.0;
};

PhaseMatch equal_mod_phase(const ComplexTensor& a, const ComplexTensor& b,
                           double tol = kDefaultTol);
PhaseMatch equal_mod_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                           double tol = kDefaultTol);

/// Proportionality check: fits an arbitrary nonzero complex scalar c with
/// a = c * b; `phase` carries the full fitted scalar. Used for the many
/// catalog identities that hold up to the contraction's 2^{-k/2} factors.
PhaseMatch equal_mod_scalar(const ComplexTensor& a, const ComplexTensor& b,
                            double tol = kDefaultTol);
PhaseMatch equal_mod_scalar(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b,
                            double tol = kDefaultTol);

/// Regroup a tensor into a 2-leg operator with legs ["out", "in"]; `in_legs`
/// and `out_legs` must partition the legs. Row-major grouping within each
/// side, so the round trip through reshape_from_operator is bitwise exact.
ComplexTensor reshape_as_operator(const ComplexTensor& t,
                                  const std::vector<std::string>& in_legs,
                                  const std::vector<std::string>& out_legs);

ComplexTensor reshape_from_operator(const ComplexTensor& m,
                                    const std::vector<Leg>& in_legs,
                                    const std::vector<Leg>& out_legs);

}  // namespace ctn
