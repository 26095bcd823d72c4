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

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ctnmbqc/mps.hpp"

namespace ctn {

namespace {

constexpr std::size_t kFrontierLegCap = 9;

std::string bond_name(int a, const std::string& la, int b, const std::string& lb) {
  if (a < b) return "e" + std::to_string(a) + "." + la;
  return "e" + std::to_string(b) + "." + lb;
}

/// Stack the per-outcome tensors into one tensor with a leading physical leg.
ComplexTensor stacked_site(const PepsSite& site, const std::string& phys_name) {
  std::vector<Leg> legs{{phys_name, site.phys_dim}};
  const auto& base = site.tensors.at(0).legs();
  legs.insert(legs.end(), base.begin(), base.end());
  std::size_t block = site.tensors.at(0).size();
  std::vector<cplx> data(site.phys_dim * block);
  for (std::size_t s = 0; s < site.phys_dim; ++s) {
    const auto& t = site.tensors.at(s);
    if (t.legs().size() != base.size()) throw std::logic_error("site tensors disagree on legs");
    std::copy(t.data().begin(), t.data().end(), data.begin() + s * block);
  }
  return ComplexTensor(std::move(legs), std::move(data));
}

/// Project the site onto <phi| (the A[phi] = sum_s <phi|s> A[s] convention).
ComplexTensor projected_site(const PepsSite& site, const Eigen::VectorXcd& phi) {
  if (phi.size() != static_cast<Eigen::Index>(site.phys_dim)) {
    throw std::invalid_argument("projection vector does not match site dimension");
  }
  ComplexTensor acc = ComplexTensor::zeros(site.tensors.at(0).legs());
  for (std::size_t s = 0; s < site.phys_dim; ++s) {
    cplx c = std::conj(phi[static_cast<Eigen::Index>(s)]);
    const auto& src = site.tensors.at(s).data();
    for (std::size_t i = 0; i < src.size(); ++i) acc.mutable_data()[i] += c * src[i];
  }
  return acc;
}

ComplexTensor close_and_rename(const PepsResource& res, const PepsSite& site, ComplexTensor t,
                               const std::set<int>* fragment,
                               const FragmentSpec* frag) {
  for (const auto& port : site.ports) {
    bool is_through = false;
    std::string through_name;
    if (frag) {
      for (std::size_t k = 0; k < frag->through.size(); ++k) {
        if (frag->through[k].site == site.id && frag->through[k].leg == port.leg) {
          is_through = true;
          through_name = (frag->through[k].is_output ? "o" : "i") + std::to_string(k);
        }
      }
      if (is_through) {
        t = t.renamed({{port.leg, through_name}});
        continue;
      }
      auto ov = frag->boundary_override.find({site.id, port.leg});
      if (ov != frag->boundary_override.end()) {
        t = contract(t, ComplexTensor::ket(ov->second, "bnd"), {{port.leg, "bnd"}});
        continue;
      }
    }
    if (port.peer_site == PepsSite::kBoundary) {
      auto b = site.boundary.find(port.leg);
      if (b == site.boundary.end()) throw std::logic_error("boundary leg without vector");
      t = contract(t, ComplexTensor::ket(b->second, "bnd"), {{port.leg, "bnd"}});
    } else if (port.peer_site == PepsSite::kExternal) {
      if (fragment) throw std::invalid_argument("fragment leaves an external leg open");
      t = t.renamed({{port.leg, "x" + std::to_string(site.id) + "_" + port.leg}});
    } else if (fragment && !fragment->count(port.peer_site)) {
      throw std::invalid_argument("fragment leaves a bond leg open at site " +
                                  std::to_string(site.id) + " leg " + port.leg);
    } else {
      t = t.renamed({{port.leg, bond_name(site.id, port.leg, port.peer_site, port.peer_leg)}});
    }
  }
  (void)res;
  return t;
}

ComplexTensor merge(ComplexTensor acc, ComplexTensor t) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const Leg& l : acc.legs()) {
    if (t.has_leg(l.name)) pairs.push_back({l.name, l.name});
  }
  return contract(acc, t, pairs);
}

// ---------------------------------------------------------------------------
// Dense referee kernel, deliberately separate from the ComplexTensor engine:
// positional legs, nested-loop sums, no permutation machinery.

struct LittleTensor {
  std::vector<std::string> legs;
  std::vector<std::size_t> dims;
  std::vector<cplx> data;

  std::size_t size() const {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
  }
};

LittleTensor little_from(const ComplexTensor& t) {
  LittleTensor lt;
  for (const Leg& l : t.legs()) {
    lt.legs.push_back(l.name);
    lt.dims.push_back(l.dim);
  }
  lt.data = t.data();
  return lt;
}

LittleTensor little_contract(const LittleTensor& a, const LittleTensor& b) {
  // Contract every common leg name by plain summation.
  std::vector<int> b_match(b.legs.size(), -1);
  std::vector<std::size_t> a_free, b_free, a_common;
  for (std::size_t j = 0; j < b.legs.size(); ++j) {
    for (std::size_t i = 0; i < a.legs.size(); ++i) {
      if (a.legs[i] == b.legs[j]) b_match[j] = static_cast<int>(i);
    }
    if (b_match[j] < 0) b_free.push_back(j);
  }
  for (std::size_t i = 0; i < a.legs.size(); ++i) {
    bool common = false;
    for (std::size_t j = 0; j < b.legs.size(); ++j) {
      if (b_match[j] == static_cast<int>(i)) common = true;
    }
    (common ? a_common : a_free).push_back(i);
  }

  LittleTensor out;
  for (auto i : a_free) {
    out.legs.push_back(a.legs[i]);
    out.dims.push_back(a.dims[i]);
  }
  for (auto j : b_free) {
    out.legs.push_back(b.legs[j]);
    out.dims.push_back(b.dims[j]);
  }
  out.data.assign(out.size(), cplx(0, 0));

  std::vector<std::size_t> a_stride(a.legs.size(), 1), b_stride(b.legs.size(), 1);
  for (std::size_t i = a.legs.size(); i-- > 1;) a_stride[i - 1] = a_stride[i] * a.dims[i];
  for (std::size_t j = b.legs.size(); j-- > 1;) b_stride[j - 1] = b_stride[j] * b.dims[j];

  std::vector<std::size_t> free_idx(out.legs.size(), 0);
  std::vector<std::size_t> sum_idx(a_common.size(), 0);
  std::size_t total = out.size();
  std::size_t sum_total = 1;
  for (auto i : a_common) sum_total *= a.dims[i];

  for (std::size_t flat = 0; flat < total; ++flat) {
    cplx acc(0, 0);
    for (std::size_t s = 0; s < sum_total; ++s) {
      std::size_t rest = s;
      for (std::size_t k = a_common.size(); k-- > 0;) {
        sum_idx[k] = rest % a.dims[a_common[k]];
        rest /= a.dims[a_common[k]];
      }
      std::size_t ai = 0, bi = 0;
      for (std::size_t k = 0; k < a_free.size(); ++k) ai += free_idx[k] * a_stride[a_free[k]];
      for (std::size_t k = 0; k < a_common.size(); ++k) ai += sum_idx[k] * a_stride[a_common[k]];
      for (std::size_t k = 0; k < b_free.size(); ++k) {
        bi += free_idx[a_free.size() + k] * b_stride[b_free[k]];
      }
      for (std::size_t j = 0; j < b.legs.size(); ++j) {
        if (b_match[j] >= 0) {
          for (std::size_t k = 0; k < a_common.size(); ++k) {
            if (a_common[k] == static_cast<std::size_t>(b_match[j])) {
              bi += sum_idx[k] * b_stride[j];
            }
          }
        }
      }
      acc += a.data[ai] * b.data[bi];
    }
    out.data[flat] = acc;
    for (std::size_t k = out.legs.size(); k-- > 0;) {
      if (++free_idx[k] < out.dims[k]) break;
      free_idx[k] = 0;
    }
  }
  return out;
}

}  // namespace

const PepsSite& PepsResource::site_at(int row, int col) const {
  int id = site_id(row, col);
  if (id < 0) throw std::invalid_argument("no site at the given coordinates");
  return sites[static_cast<std::size_t>(id)];
}

int PepsResource::site_id(int row, int col) const {
  for (const auto& s : sites) {
    if (s.row == row && s.col == col) return s.id;
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Builders.

namespace {

Eigen::VectorXcd conj_vec(const Eigen::VectorXcd& v) { return v.conjugate(); }

ComplexTensor cluster_like_tensor(const Eigen::VectorXcd& rket, const Eigen::VectorXcd& uket,
                                  int s) {
  // entries [l, r, u, d] = rket[r] uket[u] delta(l,s) delta(d,s)
  ComplexTensor t = ComplexTensor::zeros({{"l", 2}, {"r", 2}, {"u", 2}, {"d", 2}});
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t u = 0; u < 2; ++u) {
      t.at({static_cast<std::size_t>(s), r, u, static_cast<std::size_t>(s)}) =
          rket[static_cast<Eigen::Index>(r)] * uket[static_cast<Eigen::Index>(u)];
    }
  }
  return t;
}

std::vector<ComplexTensor> cluster2d_tensors() {
  return {cluster_like_tensor(ket_plus(), ket_plus(), 0),
          cluster_like_tensor(ket_minus(), ket_minus(), 1)};
}

std::vector<ComplexTensor> rerouting_b_tensors() {
  return {cluster_like_tensor(ket_plus(), ket_plus(), 0),
          cluster_like_tensor(ket_minus(), ket_i(), 1)};
}

std::vector<ComplexTensor> aklt2d_tensors() {
  // A[0] = H_{l->r} (x) |+>_u <0|_d
  // A[1] = sqrt2 |0>_r <1|_l (x) |+>_u <0|_d
  // A[2] = sqrt2 |1>_r <0|_l (x) |->_u <1|_d
  // (same sqrt2 relative weight as the 1-D catalog resource).
  Eigen::MatrixXcd h = mat_h();
  double w = std::sqrt(2.0);
  auto make = [](const Eigen::MatrixXcd& horiz, const Eigen::VectorXcd& uket, int dlabel) {
    ComplexTensor t = ComplexTensor::zeros({{"l", 2}, {"r", 2}, {"u", 2}, {"d", 2}});
    for (std::size_t l = 0; l < 2; ++l) {
      for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t u = 0; u < 2; ++u) {
          t.at({l, r, u, static_cast<std::size_t>(dlabel)}) =
              horiz(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) *
              uket[static_cast<Eigen::Index>(u)];
        }
      }
    }
    return t;
  };
  Eigen::MatrixXcd a1 = w * ket0() * ket1().adjoint();
  Eigen::MatrixXcd a2 = w * ket1() * ket0().adjoint();
  return {make(h, ket_plus(), 0), make(a1, ket_plus(), 0), make(a2, ket_minus(), 1)};
}

std::vector<ComplexTensor> weighted_tensors() {
  auto make = [](const Eigen::VectorXcd& rket, const Eigen::VectorXcd& diagket, int s) {
    ComplexTensor t = ComplexTensor::zeros(
        {{"l", 2}, {"r", 2}, {"lu", 2}, {"ru", 2}, {"ld", 2}, {"rd", 2}});
    for (std::size_t r = 0; r < 2; ++r) {
      for (std::size_t lu = 0; lu < 2; ++lu) {
        for (std::size_t ru = 0; ru < 2; ++ru) {
          t.at({static_cast<std::size_t>(s), r, lu, ru, static_cast<std::size_t>(s),
                static_cast<std::size_t>(s)}) =
              rket[static_cast<Eigen::Index>(r)] * diagket[static_cast<Eigen::Index>(lu)] *
              diagket[static_cast<Eigen::Index>(ru)];
        }
      }
    }
    return t;
  };
  return {make(ket_plus(), ket_plus(), 0), make(ket_minus(), ket_i(), 1)};
}

ComplexTensor two_line_tensor(const Eigen::MatrixXcd& upper, const Eigen::MatrixXcd& lower,
                              bool vertical) {
  // vertical=false: entries [lu,ld,ru,rd] = upper(ru,lu) * lower(rd,ld)
  // vertical=true:  entries [lu,ld,ru,rd] = upper(lu,ld) * lower(ru,rd)
  ComplexTensor t = ComplexTensor::zeros({{"lu", 2}, {"ld", 2}, {"ru", 2}, {"rd", 2}});
  for (std::size_t lu = 0; lu < 2; ++lu) {
    for (std::size_t ld = 0; ld < 2; ++ld) {
      for (std::size_t ru = 0; ru < 2; ++ru) {
        for (std::size_t rd = 0; rd < 2; ++rd) {
          cplx v;
          if (!vertical) {
            v = upper(static_cast<Eigen::Index>(ru), static_cast<Eigen::Index>(lu)) *
                lower(static_cast<Eigen::Index>(rd), static_cast<Eigen::Index>(ld));
          } else {
            v = upper(static_cast<Eigen::Index>(lu), static_cast<Eigen::Index>(ld)) *
                lower(static_cast<Eigen::Index>(ru), static_cast<Eigen::Index>(rd));
          }
          t.at({lu, ld, ru, rd}) = v;
        }
      }
    }
  }
  return t;
}

std::vector<ComplexTensor> toric_tensors(Peps2dKind kind, char subl) {
  Eigen::MatrixXcd z = mat_z(), id = mat_id();
  std::vector<ComplexTensor> out;
  for (int s = 0; s < 2; ++s) {
    Eigen::MatrixXcd zs = (s == 0) ? id : z;
    switch (kind) {
      case Peps2dKind::ToricPlain:
        out.push_back(subl == 'V' ? two_line_tensor(zs, zs, true)
                                  : two_line_tensor(zs, zs, false));
        break;
      case Peps2dKind::ToricScheme1:
        // K~_H on both sublattices: upper line Z^s, lower line sqrtZ H Z^s.
        out.push_back(two_line_tensor(zs, mat_sqrt_z() * mat_h() * zs, false));
        break;
      case Peps2dKind::ToricScheme2: {
        if (subl == 'H') {
          out.push_back(two_line_tensor(zs, zs, false));
        } else {
          // K~_V = COPY A[s] COPY^dag with A the 1-D cluster matrix.
          Eigen::MatrixXcd a = (s == 0) ? Eigen::MatrixXcd(ket_plus() * ket0().adjoint())
                                        : Eigen::MatrixXcd(ket_minus() * ket1().adjoint());
          ComplexTensor t = ComplexTensor::zeros({{"lu", 2}, {"ld", 2}, {"ru", 2}, {"rd", 2}});
          for (std::size_t lu = 0; lu < 2; ++lu) {
            for (std::size_t ru = 0; ru < 2; ++ru) {
              t.at({lu, lu, ru, ru}) =
                  a(static_cast<Eigen::Index>(ru), static_cast<Eigen::Index>(lu));
            }
          }
          out.push_back(t);
        }
        break;
      }
      default:
        throw std::logic_error("not a toric kind");
    }
  }
  return out;
}

PepsResource build_square_like(Peps2dKind kind, int w, int h, const PepsOptions& opt) {
  PepsResource res;
  res.kind = kind;
  res.geom = (kind == Peps2dKind::WeightedGraph)
                 ? GeometryKind::SixNeighbor
                 : (kind == Peps2dKind::Rerouting ? GeometryKind::Period2Rows
                                                  : GeometryKind::Square);
  res.width = w;
  res.height = h;

  bool six = kind == Peps2dKind::WeightedGraph;
  Eigen::VectorXcd right_b = opt.paper_boundaries ? ket1() : ket0();

  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      PepsSite site;
      site.id = r * w + c;
      site.row = r;
      site.col = c;
      switch (kind) {
        case Peps2dKind::Cluster2d:
          site.tensors = cluster2d_tensors();
          site.phys_dim = 2;
          break;
        case Peps2dKind::Aklt2d:
          site.tensors = aklt2d_tensors();
          site.phys_dim = 3;
          break;
        case Peps2dKind::WeightedGraph:
          site.tensors = weighted_tensors();
          site.phys_dim = 2;
          break;
        case Peps2dKind::Rerouting:
          site.subl = (r % 2 == 0) ? 'A' : 'B';
          site.tensors = (r % 2 == 0) ? cluster2d_tensors() : rerouting_b_tensors();
          site.phys_dim = 2;
          break;
        default:
          throw std::logic_error("not a square-like kind");
      }

      auto add_port = [&](const std::string& leg, int pr, int pc, const std::string& peer_leg,
                          const Eigen::VectorXcd& bvec) {
        PepsSite::Port p;
        p.leg = leg;
        if (pr >= 0 && pr < h && pc >= 0 && pc < w) {
          p.peer_site = pr * w + pc;
          p.peer_leg = peer_leg;
        } else {
          p.peer_site = PepsSite::kBoundary;
          site.boundary[leg] = bvec;
        }
        site.ports.push_back(p);
      };

      Eigen::VectorXcd left_b = (kind == Peps2dKind::Aklt2d) ? ket0() : ket_plus();
      Eigen::VectorXcd down_b = ket_plus();
      add_port("l", r, c - 1, "r", left_b);
      add_port("r", r, c + 1, "l", conj_vec(right_b));
      if (!six) {
        add_port("u", r - 1, c, "d", conj_vec(right_b));
        add_port("d", r + 1, c, "u", down_b);
      } else {
        add_port("ru", r - 1, c + 1, "ld", conj_vec(ket0()));
        add_port("lu", r - 1, c - 1, "rd", conj_vec(ket0()));
        add_port("ld", r + 1, c - 1, "ru", ket_plus());
        add_port("rd", r + 1, c + 1, "lu", ket_plus());
      }
      res.sites.push_back(std::move(site));
    }
  }
  res.name = "2d";
  return res;
}

PepsResource build_centered_square(Peps2dKind kind, int cols, int lines, const PepsOptions& opt) {
  if (lines < 2 || lines % 2 != 0) {
    throw std::invalid_argument("centered-square lattice needs an even number of lines >= 2");
  }
  PepsResource res;
  res.kind = kind;
  res.geom = GeometryKind::CenteredSquare;
  res.width = cols;
  res.height = lines;

  struct Holder {
    int site = PepsSite::kBoundary;
    std::string leg;
  };
  std::vector<Holder> holder(lines);

  for (int col = 0; col < cols; ++col) {
    int first = (col % 2 == 0) ? 0 : 1;
    char subl = (col % 2 == 0) ? 'V' : 'H';
    for (int la = first; la + 1 < lines; la += 2) {
      PepsSite site;
      site.id = static_cast<int>(res.sites.size());
      site.row = la;  // upper line index
      site.col = col;
      site.subl = subl;
      site.phys_dim = 2;
      site.tensors = toric_tensors(kind, subl);

      auto in_port = [&](const std::string& leg, int line) {
        PepsSite::Port p;
        p.leg = leg;
        if (holder[line].site == PepsSite::kBoundary) {
          p.peer_site = PepsSite::kBoundary;
          auto ov = opt.line_left_boundary.find(line);
          site.boundary[leg] = (ov != opt.line_left_boundary.end()) ? ov->second : ket0();
        } else {
          p.peer_site = holder[line].site;
          p.peer_leg = holder[line].leg;
          // fix up the peer's port
          for (auto& pp : res.sites[holder[line].site].ports) {
            if (pp.leg == holder[line].leg) {
              pp.peer_site = site.id;
              pp.peer_leg = leg;
            }
          }
        }
        site.ports.push_back(p);
      };
      in_port("lu", la);
      in_port("ld", la + 1);
      site.ports.push_back({"ru", PepsSite::kBoundary, ""});
      site.ports.push_back({"rd", PepsSite::kBoundary, ""});
      holder[la] = {site.id, "ru"};
      holder[la + 1] = {site.id, "rd"};
      res.sites.push_back(std::move(site));
    }
  }
  // Close everything still open on the right.
  for (int line = 0; line < lines; ++line) {
    if (holder[line].site == PepsSite::kBoundary) continue;
    auto& site = res.sites[holder[line].site];
    site.boundary[holder[line].leg] = conj_vec(ket0());
  }
  res.name = "toric";
  return res;
}

}  // namespace

PepsResource build_2d_resource(Peps2dKind kind, int width, int height, const PepsOptions& opt) {
  if (width < 1 || height < 1) throw std::invalid_argument("lattice must be at least 1x1");
  PepsResource res;
  switch (kind) {
    case Peps2dKind::Cluster2d:
    case Peps2dKind::Aklt2d:
    case Peps2dKind::WeightedGraph:
    case Peps2dKind::Rerouting:
      res = build_square_like(kind, width, height, opt);
      break;
    case Peps2dKind::ToricPlain:
    case Peps2dKind::ToricScheme1:
    case Peps2dKind::ToricScheme2:
      res = build_centered_square(kind, width, height, opt);
      break;
  }
  switch (kind) {
    case Peps2dKind::Cluster2d: res.name = "cluster2d"; break;
    case Peps2dKind::Aklt2d: res.name = "aklt2d"; break;
    case Peps2dKind::ToricPlain: res.name = "toric-plain"; break;
    case Peps2dKind::ToricScheme1: res.name = "toric1"; break;
    case Peps2dKind::ToricScheme2: res.name = "toric2"; break;
    case Peps2dKind::WeightedGraph: res.name = "weighted-graph"; break;
    case Peps2dKind::Rerouting: res.name = "rerouting"; break;
  }
  return res;
}

Eigen::VectorXcd contract_full(const PepsResource& res, std::size_t amp_cap) {
  std::size_t total = 1;
  for (const auto& s : res.sites) {
    if (total > amp_cap / s.phys_dim) {
      throw std::invalid_argument("physical dimension exceeds the amplitude cap");
    }
    total *= s.phys_dim;
  }

  ComplexTensor acc = ComplexTensor::scalar(1);
  for (const auto& site : res.sites) {
    ComplexTensor t = stacked_site(site, "p" + std::to_string(site.id));
    t = close_and_rename(res, site, std::move(t), nullptr, nullptr);
    acc = merge(std::move(acc), std::move(t));
    std::size_t bond_legs = 0;
    for (const Leg& l : acc.legs()) {
      if (l.name[0] == 'e' || l.name[0] == 'x') ++bond_legs;
    }
    if (bond_legs > kFrontierLegCap) {
      throw std::invalid_argument("lattice cut too wide for exact contraction");
    }
  }
  for (const auto& bt : res.extra_boundaries) {
    acc = merge(std::move(acc), bt.tensor);
  }

  std::vector<std::string> order;
  for (const auto& site : res.sites) order.push_back("p" + std::to_string(site.id));
  return acc.transposed(order).as_vector();
}

ComplexTensor fragment_operator(const PepsResource& res, const FragmentSpec& frag) {
  std::set<int> members;
  for (const auto& a : frag.measured) members.insert(a.site);
  for (const auto& t : frag.through) {
    if (!members.count(t.site)) {
      throw std::invalid_argument("through leg on a site that is not measured/declared");
    }
  }
  ComplexTensor acc = ComplexTensor::scalar(1);
  for (const auto& a : frag.measured) {
    const PepsSite& site = res.sites.at(static_cast<std::size_t>(a.site));
    a.basis.check_orthonormal();
    ComplexTensor t = projected_site(site, a.basis.vectors.at(static_cast<std::size_t>(a.outcome)));
    t = close_and_rename(res, site, std::move(t), &members, &frag);
    acc = merge(std::move(acc), std::move(t));
  }
  for (const Leg& l : acc.legs()) {
    if (l.name[0] == 'e') throw std::invalid_argument("open legs remain in fragment");
  }
  std::vector<std::string> order;
  for (std::size_t k = 0; k < frag.through.size(); ++k) {
    if (frag.through[k].is_output) order.push_back("o" + std::to_string(k));
  }
  for (std::size_t k = 0; k < frag.through.size(); ++k) {
    if (!frag.through[k].is_output) order.push_back("i" + std::to_string(k));
  }
  return acc.transposed(order);
}

Eigen::MatrixXcd fragment_matrix(const PepsResource& res, const FragmentSpec& frag) {
  ComplexTensor t = fragment_operator(res, frag);
  std::vector<std::string> outs, ins;
  for (const Leg& l : t.legs()) {
    (l.name[0] == 'o' ? outs : ins).push_back(l.name);
  }
  return reshape_as_operator(t, ins, outs).as_matrix();
}

Eigen::VectorXcd default_leg_boundary(Peps2dKind kind, const std::string& leg) {
  switch (kind) {
    case Peps2dKind::Cluster2d:
    case Peps2dKind::Rerouting:
      if (leg == "l" || leg == "d") return ket_plus();
      return ket0();  // conj(|0>) = |0>
    case Peps2dKind::Aklt2d:
      if (leg == "l") return ket0();
      if (leg == "d") return ket_plus();
      return ket0();
    case Peps2dKind::WeightedGraph:
      if (leg == "l" || leg == "ld" || leg == "rd") return ket_plus();
      return ket0();
    case Peps2dKind::ToricPlain:
    case Peps2dKind::ToricScheme1:
    case Peps2dKind::ToricScheme2:
      return ket0();
  }
  throw std::invalid_argument("unknown kind");
}

void fill_fragment_defaults(const PepsResource& res, FragmentSpec& frag) {
  std::set<int> members;
  for (const auto& a : frag.measured) members.insert(a.site);
  std::set<std::pair<int, std::string>> throughs;
  for (const auto& t : frag.through) throughs.insert({t.site, t.leg});
  for (const auto& a : frag.measured) {
    const PepsSite& site = res.sites.at(static_cast<std::size_t>(a.site));
    for (const auto& port : site.ports) {
      if (throughs.count({site.id, port.leg})) continue;
      if (port.peer_site >= 0 && !members.count(port.peer_site) &&
          !frag.boundary_override.count({site.id, port.leg})) {
        frag.boundary_override[{site.id, port.leg}] = default_leg_boundary(res.kind, port.leg);
      }
    }
  }
}

void attach_boundary_tensor(PepsResource& res,
                            const std::vector<std::pair<int, std::string>>& legs,
                            ComplexTensor tensor) {
  for (const auto& [site_id, leg] : legs) {
    PepsSite& site = res.sites.at(static_cast<std::size_t>(site_id));
    bool found = false;
    for (auto& port : site.ports) {
      if (port.leg == leg) {
        if (port.peer_site != PepsSite::kBoundary) {
          throw std::invalid_argument("can only re-bind boundary ports");
        }
        port.peer_site = PepsSite::kExternal;
        site.boundary.erase(leg);
        found = true;
      }
    }
    if (!found) throw std::invalid_argument("no such leg");
  }
  res.extra_boundaries.push_back({legs, std::move(tensor)});
}

Eigen::VectorXcd assemble_dense(const PepsResource& res, std::size_t amp_cap) {
  std::size_t total = 1;
  for (const auto& s : res.sites) {
    if (total > amp_cap / s.phys_dim) {
      throw std::invalid_argument("physical dimension exceeds the amplitude cap");
    }
    total *= s.phys_dim;
  }
  Eigen::VectorXcd amps(static_cast<Eigen::Index>(total));
  std::vector<std::size_t> outcome(res.sites.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    for (std::size_t i = res.sites.size(); i-- > 0;) {
      outcome[i] = rest % res.sites[i].phys_dim;
      rest /= res.sites[i].phys_dim;
    }
    LittleTensor acc;
    acc.data = {cplx(1, 0)};
    for (const auto& site : res.sites) {
      ComplexTensor t = site.tensors.at(outcome[static_cast<std::size_t>(site.id)]);
      t = close_and_rename(res, site, std::move(t), nullptr, nullptr);
      acc = little_contract(acc, little_from(t));
    }
    for (const auto& bt : res.extra_boundaries) {
      acc = little_contract(acc, little_from(bt.tensor));
    }
    if (acc.legs.size() != 0) throw std::logic_error("dense assembly left open legs");
    amps[static_cast<Eigen::Index>(flat)] = acc.data.at(0);
  }
  return amps;
}

Eigen::MatrixXcd induced_operator_dense(const PepsResource& res, const FragmentSpec& frag) {
  std::set<int> members;
  for (const auto& a : frag.measured) members.insert(a.site);
  std::size_t dout = 1, din = 1;
  std::vector<std::size_t> out_dims, in_dims;
  for (const auto& th : frag.through) {
    const PepsSite& site = res.sites.at(static_cast<std::size_t>(th.site));
    std::size_t d = site.tensors.at(0).dim(th.leg);
    if (th.is_output) {
      dout *= d;
      out_dims.push_back(d);
    } else {
      din *= d;
      in_dims.push_back(d);
    }
  }

  Eigen::MatrixXcd m(static_cast<Eigen::Index>(dout), static_cast<Eigen::Index>(din));
  for (std::size_t row = 0; row < dout; ++row) {
    for (std::size_t col = 0; col < din; ++col) {
      LittleTensor acc;
      acc.data = {cplx(1, 0)};
      for (const auto& a : frag.measured) {
        const PepsSite& site = res.sites.at(static_cast<std::size_t>(a.site));
        ComplexTensor t =
            projected_site(site, a.basis.vectors.at(static_cast<std::size_t>(a.outcome)));
        t = close_and_rename(res, site, std::move(t), &members, &frag);
        acc = little_contract(acc, little_from(t));
      }
      // inject unit vectors on the through legs
      std::size_t rrest = row, crest = col, oi = 0, ii = 0;
      std::vector<std::size_t> rdig(out_dims.size()), cdig(in_dims.size());
      for (std::size_t k = out_dims.size(); k-- > 0;) {
        rdig[k] = rrest % out_dims[k];
        rrest /= out_dims[k];
      }
      for (std::size_t k = in_dims.size(); k-- > 0;) {
        cdig[k] = crest % in_dims[k];
        crest /= in_dims[k];
      }
      for (std::size_t k = 0; k < frag.through.size(); ++k) {
        const auto& th = frag.through[k];
        const PepsSite& site = res.sites.at(static_cast<std::size_t>(th.site));
        std::size_t d = site.tensors.at(0).dim(th.leg);
        std::size_t digit = th.is_output ? rdig[oi++] : cdig[ii++];
        LittleTensor unit;
        unit.legs = {(th.is_output ? "o" : "i") + std::to_string(k)};
        unit.dims = {d};
        unit.data.assign(d, cplx(0, 0));
        unit.data[digit] = 1;
        acc = little_contract(acc, unit);
      }
      if (!acc.legs.empty()) throw std::logic_error("induced operator left open legs");
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = acc.data.at(0);
    }
  }
  return m;
}

}  // namespace ctn
