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

#include "ctnmbqc/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace ctn {

namespace {

std::size_t checked_size(const std::vector<Leg>& legs) {
  std::size_t n = 1;
  for (const Leg& l : legs) {
    if (l.dim == 0) {
      throw std::invalid_argument("tensor leg '" + l.name + "' has dimension 0");
    }
    n *= l.dim;
  }
  return n;
}

void check_unique_names(const std::vector<Leg>& legs) {
  std::set<std::string> seen;
  for (const Leg& l : legs) {
    if (!seen.insert(l.name).second) {
      throw std::invalid_argument("duplicate leg name '" + l.name + "'");
    }
  }
}

std::vector<std::size_t> row_major_strides(const std::vector<Leg>& legs) {
  std::vector<std::size_t> s(legs.size(), 1);
  for (std::size_t i = legs.size(); i-- > 1;) {
    s[i - 1] = s[i] * legs[i].dim;
  }
  return s;
}

}  // namespace

ComplexTensor::ComplexTensor(std::vector<Leg> legs, std::vector<cplx> data)
    : legs_(std::move(legs)), data_(std::move(data)) {
  check_unique_names(legs_);
  if (checked_size(legs_) != data_.size()) {
    throw std::invalid_argument("tensor data length does not match leg dimensions");
  }
  check_finite();
}

ComplexTensor ComplexTensor::zeros(std::vector<Leg> legs) {
  std::size_t n = checked_size(legs);
  return ComplexTensor(std::move(legs), std::vector<cplx>(n, cplx(0, 0)));
}

ComplexTensor ComplexTensor::scalar(cplx value) {
  return ComplexTensor({}, {value});
}

ComplexTensor ComplexTensor::ket(const Eigen::VectorXcd& v, const std::string& leg) {
  std::vector<cplx> data(v.data(), v.data() + v.size());
  return ComplexTensor({{leg, static_cast<std::size_t>(v.size())}}, std::move(data));
}

ComplexTensor ComplexTensor::op(const Eigen::MatrixXcd& m, const std::string& out_leg,
                                const std::string& in_leg) {
  std::vector<cplx> data;
  data.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(m(r, c));
    }
  }
  return ComplexTensor({{out_leg, static_cast<std::size_t>(m.rows())},
                        {in_leg, static_cast<std::size_t>(m.cols())}},
                       std::move(data));
}

bool ComplexTensor::has_leg(std::string_view name) const {
  for (const Leg& l : legs_) {
    if (l.name == name) return true;
  }
  return false;
}

std::size_t ComplexTensor::leg_index(std::string_view name) const {
  for (std::size_t i = 0; i < legs_.size(); ++i) {
    if (legs_[i].name == name) return i;
  }
  throw std::invalid_argument("unknown leg name '" + std::string(name) + "'");
}

std::size_t ComplexTensor::dim(std::string_view name) const {
  return legs_[leg_index(name)].dim;
}

cplx ComplexTensor::value(const std::vector<std::size_t>& index) const {
  return const_cast<ComplexTensor*>(this)->at(index);
}

cplx& ComplexTensor::at(const std::vector<std::size_t>& index) {
  if (index.size() != legs_.size()) {
    throw std::invalid_argument("index rank mismatch");
  }
  std::size_t flat = 0;
  auto strides = row_major_strides(legs_);
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] >= legs_[i].dim) throw std::out_of_range("tensor index out of range");
    flat += index[i] * strides[i];
  }
  return data_[flat];
}

ComplexTensor ComplexTensor::renamed(const std::map<std::string, std::string>& names) const {
  std::vector<Leg> legs = legs_;
  for (Leg& l : legs) {
    auto it = names.find(l.name);
    if (it != names.end()) l.name = it->second;
  }
  return ComplexTensor(std::move(legs), data_);
}

ComplexTensor ComplexTensor::transposed(const std::vector<std::string>& order) const {
  if (order.size() != legs_.size()) {
    throw std::invalid_argument("transpose order must list every leg");
  }
  std::vector<std::size_t> perm(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    perm[i] = leg_index(order[i]);
  }
  std::vector<Leg> new_legs(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) new_legs[i] = legs_[perm[i]];

  auto old_strides = row_major_strides(legs_);
  auto new_dims = new_legs;
  std::vector<cplx> out(data_.size());
  std::vector<std::size_t> idx(order.size(), 0);
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t src = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) src += idx[i] * old_strides[perm[i]];
    out[flat] = data_[src];
    for (std::size_t i = idx.size(); i-- > 0;) {
      if (++idx[i] < new_dims[i].dim) break;
      idx[i] = 0;
    }
  }
  return ComplexTensor(std::move(new_legs), std::move(out));
}

Eigen::MatrixXcd ComplexTensor::as_matrix() const {
  if (rank() != 2) throw std::invalid_argument("as_matrix requires a 2-leg tensor");
  Eigen::MatrixXcd m(legs_[0].dim, legs_[1].dim);
  for (std::size_t r = 0; r < legs_[0].dim; ++r) {
    for (std::size_t c = 0; c < legs_[1].dim; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          data_[r * legs_[1].dim + c];
    }
  }
  return m;
}

Eigen::VectorXcd ComplexTensor::as_vector() const {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(data_.size()));
  for (std::size_t i = 0; i < data_.size(); ++i) v[static_cast<Eigen::Index>(i)] = data_[i];
  return v;
}

double ComplexTensor::max_abs() const {
  double m = 0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

void ComplexTensor::check_finite() const {
  for (const cplx& v : data_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw std::invalid_argument("tensor contains a non-finite amplitude");
    }
  }
}

ComplexTensor contract(const ComplexTensor& a, const ComplexTensor& b,
                       const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::set<std::string> a_paired, b_paired;
  for (const auto& [la, lb] : pairs) {
    if (!a_paired.insert(la).second) {
      throw std::invalid_argument("leg '" + la + "' paired twice");
    }
    if (!b_paired.insert(lb).second) {
      throw std::invalid_argument("leg '" + lb + "' paired twice");
    }
    if (a.dim(la) != b.dim(lb)) {
      throw std::invalid_argument("dimension mismatch contracting '" + la + "' with '" + lb + "'");
    }
  }

  std::vector<std::string> a_free, b_free;
  for (const Leg& l : a.legs()) {
    if (!a_paired.count(l.name)) a_free.push_back(l.name);
  }
  for (const Leg& l : b.legs()) {
    if (!b_paired.count(l.name)) b_free.push_back(l.name);
  }

  // Permute a to [free..., paired...] and b to [paired..., free...], then the
  // contraction is one matrix product.
  std::vector<std::string> a_order = a_free;
  for (const auto& p : pairs) a_order.push_back(p.first);
  std::vector<std::string> b_order;
  for (const auto& p : pairs) b_order.push_back(p.second);
  for (const auto& n : b_free) b_order.push_back(n);

  ComplexTensor ap = a.transposed(a_order);
  ComplexTensor bp = b.transposed(b_order);

  std::size_t k = 1;
  for (const auto& p : pairs) k *= a.dim(p.first);
  std::size_t rows = ap.size() / k;
  std::size_t cols = bp.size() / k;

  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::Map<const RowMat> ma(ap.data().data(), static_cast<Eigen::Index>(rows),
                              static_cast<Eigen::Index>(k));
  Eigen::Map<const RowMat> mb(bp.data().data(), static_cast<Eigen::Index>(k),
                              static_cast<Eigen::Index>(cols));
  RowMat mc = ma * mb;

  std::vector<Leg> out_legs;
  for (const auto& n : a_free) out_legs.push_back({n, a.dim(n)});
  for (const auto& n : b_free) out_legs.push_back({n, b.dim(n)});
  std::vector<cplx> out(mc.data(), mc.data() + rows * cols);
  return ComplexTensor(std::move(out_legs), std::move(out));
}

PhaseMatch equal_mod_phase(const ComplexTensor& a, const ComplexTensor& b, double tol) {
  if (a.rank() != b.rank()) throw std::invalid_argument("shape mismatch in equal_mod_phase");
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (a.legs()[i].name != b.legs()[i].name || a.legs()[i].dim != b.legs()[i].dim) {
      throw std::invalid_argument("shape mismatch in equal_mod_phase");
    }
  }
  PhaseMatch result;
  std::size_t best = 0;
  double best_mag = -1;
  for (std::size_t i = 0; i < b.size(); ++i) {
    double m = std::abs(b.data()[i]);
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  if (best_mag <= tol) {
    // b is (numerically) zero; equal iff a is too.
    result.max_abs_deviation = a.max_abs();
    result.equal = result.max_abs_deviation <= tol;
    result.phase = cplx(1, 0);
    return result;
  }
  cplx ratio = a.data()[best] / b.data()[best];
  double mag = std::abs(ratio);
  if (mag <= tol) {
    result.equal = false;
    result.max_abs_deviation = a.max_abs() + b.max_abs();
    return result;
  }
  result.phase = ratio / mag;
  double dev = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dev = std::max(dev, std::abs(a.data()[i] - result.phase * b.data()[i]));
  }
  result.max_abs_deviation = dev;
  result.equal = dev <= tol && std::abs(mag - 1.0) <= tol;
  return result;
}

PhaseMatch equal_mod_phase(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol) {
  return equal_mod_phase(ComplexTensor::op(a, "out", "in"), ComplexTensor::op(b, "out", "in"),
                         tol);
}

PhaseMatch equal_mod_scalar(const ComplexTensor& a, const ComplexTensor& b, double tol) {
  if (a.rank() != b.rank()) throw std::invalid_argument("shape mismatch in equal_mod_scalar");
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (a.legs()[i].name != b.legs()[i].name || a.legs()[i].dim != b.legs()[i].dim) {
      throw std::invalid_argument("shape mismatch in equal_mod_scalar");
    }
  }
  PhaseMatch result;
  std::size_t best = 0;
  double best_mag = -1;
  for (std::size_t i = 0; i < b.size(); ++i) {
    double m = std::abs(b.data()[i]);
    if (m > best_mag) {
      best_mag = m;
      best = i;
    }
  }
  if (best_mag <= tol) {
    result.max_abs_deviation = a.max_abs();
    result.equal = result.max_abs_deviation <= tol;
    return result;
  }
  cplx scale = a.data()[best] / b.data()[best];
  if (std::abs(scale) <= tol) {
    result.equal = a.max_abs() <= tol;
    result.max_abs_deviation = a.max_abs();
    return result;
  }
  result.phase = scale;
  double dev = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dev = std::max(dev, std::abs(a.data()[i] - scale * b.data()[i]));
  }
  // Deviation judged on the rescaled footing so huge scales do not mask it.
  double ref = std::max(1.0, std::abs(scale) * b.max_abs());
  result.max_abs_deviation = dev / ref;
  result.equal = result.max_abs_deviation <= tol;
  return result;
}

PhaseMatch equal_mod_scalar(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol) {
  return equal_mod_scalar(ComplexTensor::op(a, "out", "in"), ComplexTensor::op(b, "out", "in"),
                          tol);
}

ComplexTensor reshape_as_operator(const ComplexTensor& t,
                                  const std::vector<std::string>& in_legs,
                                  const std::vector<std::string>& out_legs) {
  if (in_legs.size() + out_legs.size() != t.rank()) {
    throw std::invalid_argument("in/out legs must partition the tensor legs");
  }
  std::set<std::string> all;
  for (const auto& n : in_legs) all.insert(n);
  for (const auto& n : out_legs) {
    if (!all.insert(n).second) {
      throw std::invalid_argument("leg '" + n + "' listed on both sides");
    }
  }
  for (const Leg& l : t.legs()) {
    if (!all.count(l.name)) {
      throw std::invalid_argument("leg '" + l.name + "' missing from partition");
    }
  }
  std::vector<std::string> order = out_legs;
  order.insert(order.end(), in_legs.begin(), in_legs.end());
  ComplexTensor p = t.transposed(order);
  std::size_t dout = 1, din = 1;
  for (const auto& n : out_legs) dout *= t.dim(n);
  for (const auto& n : in_legs) din *= t.dim(n);
  return ComplexTensor({{"out", dout}, {"in", din}}, p.data());
}

ComplexTensor reshape_from_operator(const ComplexTensor& m, const std::vector<Leg>& in_legs,
                                    const std::vector<Leg>& out_legs) {
  if (m.rank() != 2) throw std::invalid_argument("expected a 2-leg operator tensor");
  std::vector<Leg> legs = out_legs;
  legs.insert(legs.end(), in_legs.begin(), in_legs.end());
  return ComplexTensor(std::move(legs), m.data());
}

}  // namespace ctn
