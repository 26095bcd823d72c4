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

#include "ctnmbqc/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ctnmbqc/gates.hpp"

namespace ctn::perc {

bool BondLattice2D::edge_between(int a, int b) const {
  if (a > b) std::swap(a, b);
  int ra = a / n, ca = a % n, rb = b / n, cb = b % n;
  if (ra == rb && cb == ca + 1) return right_edge(ra, ca);
  if (ca == cb && rb == ra + 1) return down_edge(ra, ca);
  return false;
}

double BondLattice2D::edge_fraction() const {
  std::size_t present = 0;
  for (auto e : right) present += e;
  for (auto e : down) present += e;
  return static_cast<double>(present) / static_cast<double>(right.size() + down.size());
}

BondLattice2D sample_2d(int n, double p, std::uint64_t seed) {
  if (n < 2 || p < 0 || p > 1) throw std::invalid_argument("bad lattice parameters");
  BondLattice2D l;
  l.n = n;
  l.p = p;
  l.seed = seed;
  Rng rng(seed);
  l.right.resize(static_cast<std::size_t>(n * (n - 1)));
  l.down.resize(static_cast<std::size_t>((n - 1) * n));
  for (auto& e : l.right) e = rng.uniform() < p;
  for (auto& e : l.down) e = rng.uniform() < p;
  return l;
}

BondLattice3D sample_3d(int n, int t, double p, std::uint64_t seed) {
  if (n < 2 || t < 2 || p < 0 || p > 1) throw std::invalid_argument("bad lattice parameters");
  BondLattice3D l;
  l.n = n;
  l.t = t;
  l.p = p;
  l.seed = seed;
  Rng rng(seed);
  l.ex.resize(static_cast<std::size_t>((n - 1) * n * t));
  l.ey.resize(static_cast<std::size_t>(n * (n - 1) * t));
  l.ez.resize(static_cast<std::size_t>(n * n * (t - 1)));
  for (auto& e : l.ex) e = rng.uniform() < p;
  for (auto& e : l.ey) e = rng.uniform() < p;
  for (auto& e : l.ez) e = rng.uniform() < p;
  return l;
}

namespace {

/// Block-union BFS from `start` to `goal`; neighbors explored in
/// lexicographic order, first path returned. In strict mode every vertex in
/// `avoid` is blocked (goal exempt); in relaxed mode only `hard_avoid`
/// (the other centers) blocks.
std::optional<std::vector<int>> bfs_path(const BondLattice2D& l, int start, int goal,
                                         const std::vector<std::uint8_t>& in_region,
                                         const std::vector<std::uint8_t>& avoid,
                                         const std::vector<std::uint8_t>& hard_avoid,
                                         bool strict) {
  if (start == goal) return std::vector<int>{start};
  int n = l.n;
  std::vector<int> prev(static_cast<std::size_t>(n * n), -2);
  std::deque<int> queue{start};
  prev[static_cast<std::size_t>(start)] = -1;
  auto blocked = [&](int v) {
    if (v == goal) return false;
    return strict ? static_cast<bool>(avoid[static_cast<std::size_t>(v)])
                  : static_cast<bool>(hard_avoid[static_cast<std::size_t>(v)]);
  };
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    int r = v / n, c = v % n;
    const int nbr[4][2] = {{r - 1, c}, {r, c - 1}, {r, c + 1}, {r + 1, c}};
    for (const auto& rc : nbr) {
      if (rc[0] < 0 || rc[0] >= n || rc[1] < 0 || rc[1] >= n) continue;
      int w = rc[0] * n + rc[1];
      if (!in_region[static_cast<std::size_t>(w)] || prev[static_cast<std::size_t>(w)] != -2 ||
          blocked(w) || !l.edge_between(v, w)) {
        continue;
      }
      prev[static_cast<std::size_t>(w)] = v;
      if (w == goal) {
        std::vector<int> path{w};
        while (path.back() != start) path.push_back(prev[static_cast<std::size_t>(path.back())]);
        std::reverse(path.begin(), path.end());
        return path;
      }
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

// b x b squares anchored at absolute top-left corners (r1,c1) and (r2,c2).
std::vector<std::uint8_t> block_union_mask(int n, int b, int r1, int c1, int r2, int c2) {
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n * n), 0);
  auto fill = [&](int rr, int cc) {
    for (int r = rr; r < rr + b; ++r) {
      for (int c = cc; c < cc + b; ++c) mask[static_cast<std::size_t>(r * n + c)] = 1;
    }
  };
  fill(r1, c1);
  if (r2 >= 0) fill(r2, c2);
  return mask;
}

}  // namespace

namespace {

std::optional<SublatticeCertificate> try_grid(const BondLattice2D& l, int b, int m, int dr,
                                              int dc) {

  auto degree = [&](int v) {
    int r = v / l.n, c = v % l.n, deg = 0;
    if (c + 1 < l.n && l.right_edge(r, c)) ++deg;
    if (c > 0 && l.right_edge(r, c - 1)) ++deg;
    if (r + 1 < l.n && l.down_edge(r, c)) ++deg;
    if (r > 0 && l.down_edge(r - 1, c)) ++deg;
    return deg;
  };

  // Open components; centers are drawn from the largest one so the whole
  // sublattice lives on a single spanning cluster.
  std::vector<int> comp(static_cast<std::size_t>(l.n * l.n), -1);
  std::vector<int> comp_size;
  for (int v = 0; v < l.n * l.n; ++v) {
    if (comp[static_cast<std::size_t>(v)] >= 0) continue;
    int id = static_cast<int>(comp_size.size());
    int count = 0;
    std::deque<int> queue{v};
    comp[static_cast<std::size_t>(v)] = id;
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      ++count;
      int r = x / l.n, c = x % l.n;
      const int nbr[4][2] = {{r - 1, c}, {r, c - 1}, {r, c + 1}, {r + 1, c}};
      for (const auto& rc : nbr) {
        if (rc[0] < 0 || rc[0] >= l.n || rc[1] < 0 || rc[1] >= l.n) continue;
        int w = rc[0] * l.n + rc[1];
        if (comp[static_cast<std::size_t>(w)] >= 0 || !l.edge_between(x, w)) continue;
        comp[static_cast<std::size_t>(w)] = id;
        queue.push_back(w);
      }
    }
    comp_size.push_back(count);
  }
  int giant = static_cast<int>(
      std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());

  // Per block: candidate centers from the giant component, preferring high
  // degree, then distance from the block middle; ties by id.
  std::vector<std::vector<int>> block_cands(static_cast<std::size_t>(m * m));
  for (int bi = 0; bi < m; ++bi) {
    for (int bj = 0; bj < m; ++bj) {
      std::vector<int>& cands = block_cands[static_cast<std::size_t>(bi * m + bj)];
      double mid_r = dr + bi * b + (b - 1) / 2.0, mid_c = dc + bj * b + (b - 1) / 2.0;
      for (int r = dr + bi * b; r < dr + (bi + 1) * b; ++r) {
        for (int c = dc + bj * b; c < dc + (bj + 1) * b; ++c) {
          int v = r * l.n + c;
          if (comp[static_cast<std::size_t>(v)] == giant && degree(v) >= 1) cands.push_back(v);
        }
      }
      if (cands.empty()) return std::nullopt;
      auto dist = [&](int v) {
        double dr = v / l.n - mid_r, dc = v % l.n - mid_c;
        return dr * dr + dc * dc;
      };
      std::stable_sort(cands.begin(), cands.end(), [&](int a, int c2) {
        if (degree(a) != degree(c2)) return degree(a) > degree(c2);
        return dist(a) < dist(c2);
      });
    }
  }

  std::vector<std::size_t> chosen(static_cast<std::size_t>(m * m), 0);
  std::vector<std::uint8_t> everywhere(static_cast<std::size_t>(l.n * l.n), 1);

  // Route all pairs for a fixed center assignment; on failure report the
  // offending pair so its endpoint can be re-picked.
  struct RouteResult {
    bool ok = false;
    int fail_block = -1;
    int fail_goal = -1;
    std::vector<SublatticeCertificate::Path> paths;
    bool all_disjoint = true;
  };
  auto route_all = [&](const std::vector<int>& centers) {
    RouteResult res;
    std::vector<std::uint8_t> used(static_cast<std::size_t>(l.n * l.n), 0);
    std::vector<std::uint8_t> is_center(static_cast<std::size_t>(l.n * l.n), 0);
    for (int c : centers) {
      used[static_cast<std::size_t>(c)] = 1;
      is_center[static_cast<std::size_t>(c)] = 1;
    }
    for (int bi = 0; bi < m; ++bi) {
      for (int bj = 0; bj < m; ++bj) {
        int start = centers[static_cast<std::size_t>(bi * m + bj)];
        for (auto [ni, nj] : {std::pair<int, int>{bi, bj - 1}, {bi - 1, bj}}) {
          if (ni < 0 || nj < 0) continue;
          int goal = centers[static_cast<std::size_t>(ni * m + nj)];
          std::optional<std::vector<int>> path;
          // union of the two blocks first, then the whole lattice; strict
          // vertex-disjoint routing, then center-avoiding, then free routing
          // (overlaps drop the disjointness flag, never the certificate)
          std::vector<std::uint8_t> nothing(static_cast<std::size_t>(l.n * l.n), 0);
          for (int pass = 0; pass < 5 && !path; ++pass) {
            bool strict = pass == 0 || pass == 1;
            bool local = pass == 0 || pass == 2;
            auto mask = local ? block_union_mask(l.n, b, dr + bi * b, dc + bj * b, dr + ni * b, dc + nj * b) : everywhere;
            path = bfs_path(l, start, goal, mask, used, pass == 4 ? nothing : is_center, strict);
            if (path && !strict) res.all_disjoint = false;
          }
          if (!path) {
            res.fail_block = bi * m + bj;
            res.fail_goal = ni * m + nj;
            return res;
          }
          for (int v : *path) used[static_cast<std::size_t>(v)] = 1;
          res.paths.push_back({bi * m + bj, ni * m + nj, *path});
        }
      }
    }
    res.ok = true;
    return res;
  };

  for (int repair = 0; repair < 6 * m * m; ++repair) {
    std::vector<int> centers(static_cast<std::size_t>(m * m));
    for (std::size_t i = 0; i < centers.size(); ++i) {
      centers[i] = block_cands[i][chosen[i] % block_cands[i].size()];
    }
    RouteResult res = route_all(centers);
    if (res.ok) {
      SublatticeCertificate cert;
      cert.b = b;
      cert.m = m;
      cert.centers = centers;
      cert.paths = std::move(res.paths);
      cert.all_disjoint = res.all_disjoint;
      return cert;
    }
    // A failing pair is sealed by other centers sitting on the articulation
    // vertices of its corridors. A 0-1 BFS (crossing a center costs 1)
    // finds the route with the fewest sealers; those blocks get re-picked.
    std::size_t fb = static_cast<std::size_t>(res.fail_block);
    std::size_t fg = static_cast<std::size_t>(res.fail_goal);
    int start_v = centers[fb];
    int goal_v = centers[fg];
    std::vector<std::uint8_t> is_center(static_cast<std::size_t>(l.n * l.n), 0);
    for (int c : centers) is_center[static_cast<std::size_t>(c)] = 1;
    std::vector<int> dist(static_cast<std::size_t>(l.n * l.n), -1);
    std::vector<int> prev(static_cast<std::size_t>(l.n * l.n), -1);
    std::deque<int> dq{start_v};
    dist[static_cast<std::size_t>(start_v)] = 0;
    while (!dq.empty()) {
      int v = dq.front();
      dq.pop_front();
      if (v == goal_v) break;
      int r = v / l.n, c = v % l.n;
      const int nbr[4][2] = {{r - 1, c}, {r, c - 1}, {r, c + 1}, {r + 1, c}};
      for (const auto& rc : nbr) {
        if (rc[0] < 0 || rc[0] >= l.n || rc[1] < 0 || rc[1] >= l.n) continue;
        int w = rc[0] * l.n + rc[1];
        if (!l.edge_between(v, w)) continue;
        int cost = (w != goal_v && is_center[static_cast<std::size_t>(w)]) ? 1 : 0;
        int nd = dist[static_cast<std::size_t>(v)] + cost;
        if (dist[static_cast<std::size_t>(w)] >= 0 && dist[static_cast<std::size_t>(w)] <= nd) {
          continue;
        }
        dist[static_cast<std::size_t>(w)] = nd;
        prev[static_cast<std::size_t>(w)] = v;
        if (cost) {
          dq.push_back(w);
        } else {
          dq.push_front(w);
        }
      }
    }
    bool advanced = false;
    if (dist[static_cast<std::size_t>(goal_v)] > 0) {
      for (int v = prev[static_cast<std::size_t>(goal_v)]; v >= 0 && v != start_v;
           v = prev[static_cast<std::size_t>(v)]) {
        if (!is_center[static_cast<std::size_t>(v)]) continue;
        for (std::size_t k = 0; k < centers.size(); ++k) {
          if (centers[k] == v && chosen[k] + 1 < block_cands[k].size()) {
            ++chosen[k];
            advanced = true;
          }
        }
      }
    }
    if (!advanced) {
      bool fb_open = chosen[fb] + 1 < block_cands[fb].size();
      bool fg_open = chosen[fg] + 1 < block_cands[fg].size();
      if (!fb_open && !fg_open) return std::nullopt;
      if (fb_open && (!fg_open || repair % 2 == 0)) {
        ++chosen[fb];
      } else {
        ++chosen[fg];
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<SublatticeCertificate> renormalize(const BondLattice2D& l, int b) {
  if (b < 1) throw std::invalid_argument("block size must be positive");
  int m = l.n / b;
  if (m < 1) return std::nullopt;
  // Full grid first; if some block cannot join the spanning cluster, fall
  // back to an (m-1)-sized grid swept over all anchor offsets. The paper's
  // construction only asks for *some* m(n) x m(n) array, so trading one
  // block row for placement freedom is the faithful move.
  if (auto cert = try_grid(l, b, m, 0, 0)) return cert;
  if (m >= 3) {
    int span = l.n - (m - 1) * b;
    for (int dr = 0; dr <= span; ++dr) {
      for (int dc = 0; dc <= span; ++dc) {
        if (auto cert = try_grid(l, b, m - 1, dr, dc)) return cert;
      }
    }
  }
  return std::nullopt;
}

bool verify_certificate(const BondLattice2D& l, const SublatticeCertificate& cert) {
  if (cert.m * cert.b > l.n) return false;
  std::set<int> interior_seen;
  std::set<int> centers(cert.centers.begin(), cert.centers.end());
  if (centers.size() != cert.centers.size()) return false;
  bool disjoint = true;
  for (const auto& path : cert.paths) {
    if (path.vertices.empty()) return false;
    if (path.vertices.front() != cert.centers[static_cast<std::size_t>(path.from_block)]) {
      return false;
    }
    if (path.vertices.back() != cert.centers[static_cast<std::size_t>(path.to_block)]) {
      return false;
    }
    for (std::size_t i = 0; i + 1 < path.vertices.size(); ++i) {
      if (!l.edge_between(path.vertices[i], path.vertices[i + 1])) return false;
    }
    for (std::size_t i = 1; i + 1 < path.vertices.size(); ++i) {
      int v = path.vertices[i];
      // a path crossing a foreign center is an overlap, not an error
      if (centers.count(v)) disjoint = false;
      if (!interior_seen.insert(v).second) disjoint = false;
    }
  }
  // The disjointness claim must be honest: a certificate flagged disjoint
  // with overlapping paths fails verification.
  if (cert.all_disjoint && !disjoint) return false;
  return true;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

}  // namespace

bool spans_3d(const BondLattice3D& l) {
  int n = l.n, t = l.t;
  auto id = [&](int x, int y, int z) { return (z * n + y) * n + x; };
  UnionFind uf(static_cast<std::size_t>(n * n * t));
  std::size_t k = 0;
  for (int z = 0; z < t; ++z) {
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x + 1 < n; ++x, ++k) {
        if (l.ex[k]) uf.unite(id(x, y, z), id(x + 1, y, z));
      }
    }
  }
  k = 0;
  for (int z = 0; z < t; ++z) {
    for (int y = 0; y + 1 < n; ++y) {
      for (int x = 0; x < n; ++x, ++k) {
        if (l.ey[k]) uf.unite(id(x, y, z), id(x, y + 1, z));
      }
    }
  }
  k = 0;
  for (int z = 0; z + 1 < t; ++z) {
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x, ++k) {
        if (l.ez[k]) uf.unite(id(x, y, z), id(x, y, z + 1));
      }
    }
  }
  std::set<int> bottom;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) bottom.insert(uf.find(id(x, y, 0)));
  }
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      if (bottom.count(uf.find(id(x, y, t - 1)))) return true;
    }
  }
  return false;
}

void wilson_interval(int successes, int trials, double& lo, double& hi) {
  if (trials == 0) {
    lo = 0;
    hi = 1;
    return;
  }
  const double z = 1.959963984540054;  // 95%
  double n = trials, ph = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1 + z2 / n;
  double center = (ph + z2 / (2 * n)) / denom;
  double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
  lo = std::max(0.0, center - half);
  hi = std::min(1.0, center + half);
}

std::vector<CurvePoint> success_curve(int dim, int n, const std::vector<double>& p_list,
                                      int trials, std::uint64_t seed, int b) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (dim != 2 && dim != 3) throw std::invalid_argument("dim must be 2 or 3");
  std::vector<CurvePoint> curve;
  std::uint64_t stream = 0;
  for (double p : p_list) {
    CurvePoint pt;
    pt.p = p;
    pt.trials = trials;
    for (int trial = 0; trial < trials; ++trial, ++stream) {
      std::uint64_t s = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
      bool ok = false;
      if (dim == 2) {
        auto lat = sample_2d(n, p, s);
        auto cert = renormalize(lat, b);
        ok = cert.has_value() && verify_certificate(lat, *cert);
      } else {
        ok = spans_3d(sample_3d(n, n, p, s));
      }
      if (ok) ++pt.successes;
    }
    pt.fraction = static_cast<double>(pt.successes) / trials;
    wilson_interval(pt.successes, trials, pt.ci_low, pt.ci_high);
    curve.push_back(pt);
  }
  return curve;
}

}  // namespace ctn::perc
