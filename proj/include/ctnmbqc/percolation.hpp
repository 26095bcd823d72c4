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

#include <cstdint>
#include <optional>
#include <vector>

namespace ctn::perc {

/// Bond-percolated n x n square lattice: vertex (r, c) = r*n + c; right- and
/// down-edges present i.i.d. with probability p, reproducible from the seed.
struct BondLattice2D {
  int n = 0;
  double p = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> right;  // (r, c)-(r, c+1), n*(n-1) entries
  std::vector<std::uint8_t> down;   // (r, c)-(r+1, c), (n-1)*n entries

  bool right_edge(int r, int c) const { return right[static_cast<std::size_t>(r * (n - 1) + c)]; }
  bool down_edge(int r, int c) const { return down[static_cast<std::size_t>(r * n + c)]; }
  bool edge_between(int a, int b) const;  // adjacent vertex ids
  double edge_fraction() const;
};

/// n x n x t cubic slab with x/y/z edges.
struct BondLattice3D {
  int n = 0, t = 0;
  double p = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint8_t> ex, ey, ez;
};

BondLattice2D sample_2d(int n, double p, std::uint64_t seed);
BondLattice3D sample_3d(int n, int t, double p, std::uint64_t seed);

/// Renormalized perfect sublattice: one chosen central site per b x b block,
/// connected to the left and lower neighbors' centrals by open paths that
/// are vertex-disjoint outside the shared central endpoints.
struct SublatticeCertificate {
  int b = 0;
  int m = 0;                 // m x m block grid
  std::vector<int> centers;  // vertex id per block, row-major
  struct Path {
    int from_block, to_block;
    std::vector<int> vertices;  // from center to center, inclusive
  };
  std::vector<Path> paths;
  bool all_disjoint = false;
};

/// Greedy block search: block-local BFS (lexicographic neighbor order, first
/// path accepted), candidates tried nearest the block middle first; fails
/// (returns nullopt) when some block admits no center connected to both
/// neighbors without touching already-used vertices.
std::optional<SublatticeCertificate> renormalize(const BondLattice2D& lattice, int b);

/// Independent checker: re-walks every path, confirming edge presence,
/// endpoints, and vertex-disjointness outside shared centrals.
bool verify_certificate(const BondLattice2D& lattice, const SublatticeCertificate& cert);

/// Union-find spanning test between the z = 0 and z = t-1 faces.
bool spans_3d(const BondLattice3D& lattice);

struct CurvePoint {
  double p = 0;
  int trials = 0;
  int successes = 0;
  double fraction = 0;
  double ci_low = 0, ci_high = 0;  // Wilson 95%
};

/// dim 2: fraction of seeds with a renormalization certificate (block size b);
/// dim 3: fraction with a spanning cluster on an n x n x n cube.
std::vector<CurvePoint> success_curve(int dim, int n, const std::vector<double>& p_list,
                                      int trials, std::uint64_t seed, int b = 5);

void wilson_interval(int successes, int trials, double& lo, double& hi);

}  // namespace ctn::perc
