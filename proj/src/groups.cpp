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

#include "ctnmbqc/groups.hpp"

#include <deque>
#include <stdexcept>

namespace ctn {

Eigen::MatrixXcd canonical_rep(const Eigen::MatrixXcd& m, double tol) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      double mag = std::abs(m(r, c));
      if (mag > tol) {
        return m * (std::conj(m(r, c)) / mag);
      }
    }
  }
  throw std::invalid_argument("cannot canonicalize the zero matrix");
}

namespace {

bool approx_equal(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

int find_in(const std::vector<Eigen::MatrixXcd>& elems, const Eigen::MatrixXcd& canon,
            double tol) {
  for (std::size_t i = 0; i < elems.size(); ++i) {
    if (approx_equal(elems[i], canon, tol)) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

int ProjectiveGroup::find(const Eigen::MatrixXcd& m, double tol) const {
  return find_in(elements_, canonical_rep(m, tol), tol);
}

int ProjectiveGroup::index_of(const Eigen::MatrixXcd& m, double tol) const {
  int i = find(m, tol);
  if (i < 0) throw std::invalid_argument("matrix is not an element of the group");
  return i;
}

int ProjectiveGroup::index_of_label(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  throw std::invalid_argument("unknown element label '" + label + "'");
}

ProjectiveGroup generate_closure(
    const std::vector<std::pair<std::string, Eigen::MatrixXcd>>& generators, std::size_t cap) {
  if (generators.empty()) throw std::invalid_argument("empty generating set");
  const double tol = 1e-9;
  Eigen::Index d = generators.front().second.rows();
  for (const auto& [label, g] : generators) {
    if (g.rows() != d || g.cols() != d) {
      throw std::invalid_argument("generators must share one square dimension");
    }
    Eigen::MatrixXcd gg = g.adjoint() * g;
    if (!approx_equal(gg, Eigen::MatrixXcd::Identity(d, d), 1e-10)) {
      throw std::invalid_argument("generator '" + label + "' is not unitary");
    }
  }

  ProjectiveGroup grp;
  grp.elements_.push_back(Eigen::MatrixXcd::Identity(d, d));
  grp.labels_.push_back("I");

  std::vector<Eigen::MatrixXcd> gen_canon;
  for (const auto& [label, g] : generators) {
    Eigen::MatrixXcd c = canonical_rep(g, tol);
    int idx = find_in(grp.elements_, c, tol);
    if (idx < 0) {
      grp.elements_.push_back(c);
      grp.labels_.push_back(label);
      idx = static_cast<int>(grp.elements_.size()) - 1;
    } else if (idx > 0 && grp.labels_[idx].find(label) == std::string::npos) {
      grp.labels_[idx] += "=" + label;
    }
    grp.generators_.push_back(idx);
    gen_canon.push_back(c);
  }

  // BFS closure under left multiplication by the generators.
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < grp.elements_.size(); ++i) queue.push_back(i);
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (std::size_t gi = 0; gi < gen_canon.size(); ++gi) {
      Eigen::MatrixXcd prod = canonical_rep(gen_canon[gi] * grp.elements_[i], tol);
      if (find_in(grp.elements_, prod, tol) < 0) {
        if (grp.elements_.size() >= cap) {
          throw std::runtime_error("group closure exceeded cap; generating set is non-finite or mis-specified");
        }
        grp.elements_.push_back(prod);
        grp.labels_.push_back(generators[gi].first + "." + grp.labels_[i]);
        queue.push_back(grp.elements_.size() - 1);
      }
    }
  }

  std::size_t n = grp.elements_.size();
  grp.cayley_.assign(n, std::vector<int>(n, -1));
  grp.inverse_.assign(n, -1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      Eigen::MatrixXcd prod = canonical_rep(grp.elements_[a] * grp.elements_[b], tol);
      int idx = find_in(grp.elements_, prod, tol);
      if (idx < 0) throw std::runtime_error("closure is not multiplicatively closed");
      grp.cayley_[a][b] = idx;
      if (idx == 0) {
        grp.inverse_[a] = static_cast<int>(b);
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (grp.inverse_[a] < 0) throw std::runtime_error("element without inverse in closure");
  }
  return grp;
}

int reduce_word(const ProjectiveGroup& g, const std::vector<std::string>& labels) {
  int acc = 0;
  // Right-to-left: the last label is applied first.
  for (auto it = labels.rbegin(); it != labels.rend(); ++it) {
    acc = g.multiply(g.index_of_label(*it), acc);
  }
  return acc;
}

WalkResult walk_until(const ProjectiveGroup& g, int target, const std::vector<double>& gen_weights,
                      std::uint64_t seed, std::size_t max_steps) {
  const auto& gens = g.generator_indices();
  if (gen_weights.size() != gens.size()) {
    throw std::invalid_argument("one weight per generator required");
  }
  for (double w : gen_weights) {
    if (!(w > 0)) throw std::invalid_argument("generator distribution must be strictly positive");
  }
  Rng rng(seed);
  WalkResult result;
  int current = 0;
  for (std::size_t step = 1; step <= max_steps; ++step) {
    std::size_t gi = rng.pick(gen_weights);
    current = g.multiply(gens[gi], current);
    result.path.push_back(g.labels()[gens[gi]]);
    if (current == target) {
      result.hit = true;
      result.steps = step;
      result.reached = current;
      return result;
    }
  }
  result.hit = false;
  result.steps = max_steps;
  result.reached = current;
  return result;
}

ProjectiveGroup group_pauli() {
  return generate_closure({{"X", mat_x()}, {"Z", mat_z()}});
}

ProjectiveGroup group_clifford1() {
  return generate_closure({{"H", mat_h()}, {"S", mat_s()}});
}

ProjectiveGroup group_aklt8() {
  return generate_closure({{"H", mat_h()}, {"X", mat_x()}, {"ZX", mat_z() * mat_x()}});
}

ProjectiveGroup group_dihedral(int m) {
  if (m < 2) throw std::invalid_argument("dihedral group requires m >= 2");
  // exp(i pi/m X) = cos(pi/m) I + i sin(pi/m) X.
  Eigen::MatrixXcd g = std::cos(kPi / m) * mat_id() + kI * std::sin(kPi / m) * mat_x();
  return generate_closure({{"Z", mat_z()}, {"G", g}});
}

ProjectiveGroup group_by_name(const std::string& name) {
  if (name == "pauli") return group_pauli();
  if (name == "clifford1") return group_clifford1();
  if (name == "aklt8") return group_aklt8();
  if (name.rfind("dihedral:", 0) == 0) {
    return group_dihedral(std::stoi(name.substr(9)));
  }
  throw std::invalid_argument("unknown group '" + name + "'");
}

}  // namespace ctn
