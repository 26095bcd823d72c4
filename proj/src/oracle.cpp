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

#include "ctnmbqc/oracle.hpp"

#include <stdexcept>

namespace ctn {

namespace {

std::size_t product_capped(const std::vector<std::size_t>& dims) {
  std::size_t n = 1;
  for (std::size_t d : dims) {
    if (d == 0) throw std::invalid_argument("site dimension 0");
    if (n > kOracleAmpCap / d) throw std::invalid_argument("oracle amplitude cap exceeded");
    n *= d;
  }
  return n;
}

// Stride of `site` and the dimension-block decomposition index -> (outer,
// s, inner) with index = (outer * d + s) * stride + inner.
std::size_t site_stride(const std::vector<std::size_t>& dims, std::size_t site) {
  std::size_t stride = 1;
  for (std::size_t i = dims.size(); i-- > site + 1;) stride *= dims[i];
  return stride;
}

}  // namespace

void DenseState::validate() const {
  std::size_t n = product_capped(dims);
  if (amps.size() != static_cast<Eigen::Index>(n)) {
    throw std::invalid_argument("amplitude count does not match site dimensions");
  }
  if (std::abs(amps.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("dense state is not normalized");
  }
}

DenseState make_dense_state(std::vector<std::size_t> dims, Eigen::VectorXcd amps) {
  double norm = amps.norm();
  if (norm < 1e-280) throw std::invalid_argument("cannot normalize the zero state");
  DenseState s{std::move(dims), amps / norm};
  s.validate();
  return s;
}

DenseState build_graph_state(std::size_t n, const std::vector<PhasedEdge>& edges) {
  std::size_t total = product_capped(std::vector<std::size_t>(n, 2));
  Eigen::VectorXcd amps = Eigen::VectorXcd::Constant(total, cplx(1, 0));
  for (const PhasedEdge& e : edges) {
    if (e.a < 0 || e.b < 0 || e.a >= static_cast<int>(n) || e.b >= static_cast<int>(n) ||
        e.a == e.b) {
      throw std::invalid_argument("bad edge");
    }
    cplx phase = std::exp(kI * e.phi);
    std::size_t ma = std::size_t{1} << (n - 1 - e.a);
    std::size_t mb = std::size_t{1} << (n - 1 - e.b);
    for (std::size_t i = 0; i < total; ++i) {
      if ((i & ma) && (i & mb)) amps[static_cast<Eigen::Index>(i)] *= phase;
    }
  }
  return make_dense_state(std::vector<std::size_t>(n, 2), std::move(amps));
}

DenseState build_cluster1d_direct(std::size_t n) {
  std::vector<PhasedEdge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.push_back({static_cast<int>(i), static_cast<int>(i + 1), kPi});
  }
  return build_graph_state(n, edges);
}

DenseState build_cluster2d_direct(std::size_t w, std::size_t h) {
  auto id = [&](std::size_t r, std::size_t c) { return static_cast<int>(r * w + c); };
  std::vector<PhasedEdge> edges;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (c + 1 < w) edges.push_back({id(r, c), id(r, c + 1), kPi});
      if (r + 1 < h) edges.push_back({id(r, c), id(r + 1, c), kPi});
    }
  }
  return build_graph_state(w * h, edges);
}

DenseState build_mps_direct(const MpsResource& res, std::size_t n) {
  Eigen::VectorXcd amps = mps_dense_amplitudes(res, n);
  return make_dense_state(std::vector<std::size_t>(n, res.phys_dim), std::move(amps));
}

DenseState build_aklt2d_direct(const MpsResource& row_resource, std::size_t w, std::size_t h) {
  if (row_resource.phys_dim != 3) throw std::invalid_argument("expected a spin-1 row resource");
  std::vector<std::size_t> dims(w * h, 3);
  std::size_t total = product_capped(dims);

  Eigen::VectorXcd row = mps_dense_amplitudes(row_resource, w);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Constant(total, cplx(1, 0));
  std::size_t row_len = row.size();
  // Product of independent rows (site order row-major), then the coupling.
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    std::vector<std::size_t> row_idx(h, 0);
    for (std::size_t site = w * h; site-- > 0;) {
      std::size_t s = rest % 3;
      rest /= 3;
      std::size_t r = site / w;
      std::size_t c = site % w;
      std::size_t pw = 1;
      for (std::size_t j = 0; j + c + 1 < w; ++j) pw *= 3;
      row_idx[r] += s * pw;
    }
    cplx v(1, 0);
    for (std::size_t r = 0; r < h; ++r) {
      if (row_idx[r] >= row_len) throw std::logic_error("row index overflow");
      v *= row[static_cast<Eigen::Index>(row_idx[r])];
    }
    amps[static_cast<Eigen::Index>(i)] = v;
  }
  // exp{i pi |2><2| x |2><2|} between vertical neighbors: sign -1 when both
  // sites are |2>.
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    std::vector<int> s(w * h);
    for (std::size_t site = w * h; site-- > 0;) {
      s[site] = static_cast<int>(rest % 3);
      rest /= 3;
    }
    int count = 0;
    for (std::size_t r = 0; r + 1 < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        if (s[r * w + c] == 2 && s[(r + 1) * w + c] == 2) ++count;
      }
    }
    if (count % 2) amps[static_cast<Eigen::Index>(i)] = -amps[static_cast<Eigen::Index>(i)];
  }
  return make_dense_state(std::move(dims), std::move(amps));
}

Eigen::VectorXcd w_state(std::size_t k) {
  if (k == 0) throw std::invalid_argument("W state needs at least one qubit");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(std::size_t{1} << k));
  double a = 1.0 / std::sqrt(static_cast<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    v[static_cast<Eigen::Index>(std::size_t{1} << (k - 1 - i))] = a;
  }
  return v;
}

DenseState build_diluted_chain_direct(std::size_t blocks, std::size_t k) {
  DenseState logical = build_cluster1d_direct(blocks);
  std::size_t block_dim = std::size_t{1} << k;
  std::vector<std::size_t> dims(blocks * k, 2);
  std::size_t total = product_capped(dims);
  Eigen::VectorXcd zero_word = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(block_dim));
  zero_word[0] = 1;
  Eigen::VectorXcd one_word = w_state(k);

  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total));
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rest = i;
    std::vector<std::size_t> block_bits(blocks, 0);
    for (std::size_t site = blocks * k; site-- > 0;) {
      std::size_t bit = rest & 1;
      rest >>= 1;
      std::size_t b = site / k;
      std::size_t pos = site % k;
      block_bits[b] |= bit << (k - 1 - pos);
    }
    cplx acc(0, 0);
    for (std::size_t l = 0; l < (std::size_t{1} << blocks); ++l) {
      cplx term = logical.amps[static_cast<Eigen::Index>(l)];
      for (std::size_t b = 0; b < blocks && term != cplx(0, 0); ++b) {
        bool one = (l >> (blocks - 1 - b)) & 1;
        const Eigen::VectorXcd& word = one ? one_word : zero_word;
        term *= word[static_cast<Eigen::Index>(block_bits[b])];
      }
      acc += term;
    }
    amps[static_cast<Eigen::Index>(i)] = acc;
  }
  return make_dense_state(std::move(dims), std::move(amps));
}

std::vector<double> measure_probabilities(const DenseState& state, std::size_t site,
                                          const LocalBasis& basis) {
  if (site >= state.num_sites()) throw std::out_of_range("site out of range");
  basis.check_orthonormal();
  std::size_t d = state.dims[site];
  if (basis.vectors.size() != d) throw std::invalid_argument("basis does not match site dimension");
  std::vector<double> probs(d, 0.0);
  std::size_t stride = site_stride(state.dims, site);
  std::size_t total = static_cast<std::size_t>(state.amps.size());
  for (std::size_t k = 0; k < d; ++k) {
    double p = 0;
    for (std::size_t outer = 0; outer < total / (stride * d); ++outer) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        cplx acc(0, 0);
        for (std::size_t s = 0; s < d; ++s) {
          std::size_t idx = (outer * d + s) * stride + inner;
          acc += std::conj(basis.vectors[k][static_cast<Eigen::Index>(s)]) *
                 state.amps[static_cast<Eigen::Index>(idx)];
        }
        p += std::norm(acc);
      }
    }
    probs[k] = p;
  }
  return probs;
}

std::pair<double, DenseState> project(const DenseState& state, std::size_t site,
                                      const Eigen::VectorXcd& phi) {
  std::size_t d = state.dims[site];
  if (phi.size() != static_cast<Eigen::Index>(d)) {
    throw std::invalid_argument("projector does not match site dimension");
  }
  std::size_t stride = site_stride(state.dims, site);
  std::size_t total = static_cast<std::size_t>(state.amps.size());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(state.amps.size());
  double weight = 0;
  for (std::size_t outer = 0; outer < total / (stride * d); ++outer) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      cplx acc(0, 0);
      for (std::size_t s = 0; s < d; ++s) {
        std::size_t idx = (outer * d + s) * stride + inner;
        acc += std::conj(phi[static_cast<Eigen::Index>(s)]) *
               state.amps[static_cast<Eigen::Index>(idx)];
      }
      weight += std::norm(acc);
      for (std::size_t s = 0; s < d; ++s) {
        std::size_t idx = (outer * d + s) * stride + inner;
        out[static_cast<Eigen::Index>(idx)] = acc * phi[static_cast<Eigen::Index>(s)];
      }
    }
  }
  DenseState collapsed{state.dims, std::move(out)};
  return {weight, std::move(collapsed)};
}

MeasureResult measure(const DenseState& state, std::size_t site, const LocalBasis& basis,
                      Rng& rng) {
  std::vector<double> probs = measure_probabilities(state, site, basis);
  std::size_t k = rng.pick(probs);
  auto [weight, collapsed] = project(state, site, basis.vectors[k]);
  if (weight < kImpossibleBranch) throw std::runtime_error("sampled an impossible branch");
  collapsed.amps /= std::sqrt(weight);
  return {static_cast<int>(k), std::move(collapsed)};
}

DenseState apply_unitary(const DenseState& state, const std::vector<std::size_t>& sites,
                         const Eigen::MatrixXcd& u) {
  std::size_t block = 1;
  for (std::size_t s : sites) block *= state.dims[s];
  if (u.rows() != static_cast<Eigen::Index>(block) || u.cols() != u.rows()) {
    throw std::invalid_argument("unitary does not match the selected sites");
  }
  std::size_t total = static_cast<std::size_t>(state.amps.size());
  std::vector<std::size_t> strides(sites.size());
  for (std::size_t i = 0; i < sites.size(); ++i) strides[i] = site_stride(state.dims, sites[i]);

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(state.amps.size());
  std::vector<std::size_t> digits(sites.size());
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t row = 0;
    for (std::size_t i = 0; i < sites.size(); ++i) {
      digits[i] = (idx / strides[i]) % state.dims[sites[i]];
      row = row * state.dims[sites[i]] + digits[i];
    }
    cplx acc(0, 0);
    // column index enumerates the source digits.
    std::size_t combos = block;
    for (std::size_t col = 0; col < combos; ++col) {
      cplx c = u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
      if (c == cplx(0, 0)) continue;
      std::size_t src = idx;
      std::size_t rest = col;
      for (std::size_t i = sites.size(); i-- > 0;) {
        std::size_t digit = rest % state.dims[sites[i]];
        rest /= state.dims[sites[i]];
        src += (digit - digits[i]) * strides[i];
      }
      acc += c * state.amps[static_cast<Eigen::Index>(src)];
    }
    out[static_cast<Eigen::Index>(idx)] = acc;
  }
  return DenseState{state.dims, std::move(out)};
}

std::vector<double> site_marginal(const DenseState& state, std::size_t site) {
  std::size_t d = state.dims[site];
  std::vector<double> probs(d, 0.0);
  std::size_t stride = site_stride(state.dims, site);
  std::size_t total = static_cast<std::size_t>(state.amps.size());
  for (std::size_t i = 0; i < total; ++i) {
    probs[(i / stride) % d] += std::norm(state.amps[static_cast<Eigen::Index>(i)]);
  }
  return probs;
}

double z_string_expectation(const DenseState& state, const std::vector<std::size_t>& sites) {
  double acc = 0;
  std::size_t total = static_cast<std::size_t>(state.amps.size());
  for (std::size_t i = 0; i < total; ++i) {
    int sign = 1;
    for (std::size_t s : sites) {
      std::size_t stride = site_stride(state.dims, s);
      std::size_t v = (i / stride) % state.dims[s];
      if (v == 1) sign = -sign;
    }
    acc += sign * std::norm(state.amps[static_cast<Eigen::Index>(i)]);
  }
  return acc;
}

}  // namespace ctn
