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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctnmbqc/gates.hpp"
#include "ctnmbqc/tensor.hpp"

namespace ctn {

enum class GeometryKind { Square, CenteredSquare, SixNeighbor, Period2Rows };

enum class Peps2dKind {
  Cluster2d,
  Aklt2d,
  ToricPlain,
  ToricScheme1,
  ToricScheme2,
  WeightedGraph,
  Rerouting,
};

/// One physical site of a 2-D tensor network. Each leg is either bonded to
/// exactly one peer leg of matching dimension or closed by a boundary vector
/// (already conjugated where the leg is a ket), or fed by a multi-leg
/// boundary tensor (peer == kExternal).
struct PepsSite {
  static constexpr int kBoundary = -1;
  static constexpr int kExternal = -2;

  struct Port {
    std::string leg;
    int peer_site = kBoundary;
    std::string peer_leg;
  };

  int id = 0;
  int row = 0, col = 0;
  char subl = 0;  // 'H'/'V' on the centered-square lattice, 'A'/'B' on period-2 rows
  std::size_t phys_dim = 0;
  std::vector<ComplexTensor> tensors;  // one per outcome, identical leg layout
  std::vector<Port> ports;
  std::map<std::string, Eigen::VectorXcd> boundary;
};

/// Boundary state entangled across several legs (used e.g. to start a pair
/// of toric correlation lines in a Bell-type state).
struct BoundaryTensor {
  std::vector<std::pair<int, std::string>> legs;  // (site, leg)
  ComplexTensor tensor;                           // legs named x{site}_{leg}
};

struct PepsResource {
  Peps2dKind kind{};
  GeometryKind geom{};
  int width = 0, height = 0;  // for CenteredSquare: width = columns, height = lines
  std::vector<PepsSite> sites;
  std::vector<BoundaryTensor> extra_boundaries;
  std::string name;

  const PepsSite& site_at(int row, int col) const;  // throws if absent
  int site_id(int row, int col) const;              // -1 if absent
};

struct PepsOptions {
  /// Cluster-type lattices: use the listed |R>=|U>=|1> boundaries instead of
  /// the |0> default that matches the CZ-built state exactly.
  bool paper_boundaries = false;
  /// CenteredSquare: per-line left boundary override (plain vectors).
  std::map<int, Eigen::VectorXcd> line_left_boundary;
};

/// Exact constant tensors for the whole 2-D catalog.
///
/// For the centered-square (toric) lattices, `height` counts correlation
/// lines (even) and `width` counts gate columns; the builder lays the
/// checkerboard out in the straightened two-line view: even columns carry
/// V-sublattice tensors on line pairs (0,1),(2,3),..., odd columns carry
/// H-sublattice tensors on pairs (1,2),(3,4),....
PepsResource build_2d_resource(Peps2dKind kind, int width, int height,
                               const PepsOptions& options = {});

/// Unnormalized amplitudes for every outcome string, ordered row-major over
/// sites in id order. Exact contraction, no truncation; throws when the
/// total physical dimension exceeds the cap or the sweep frontier grows past
/// the desk-scale guard.
Eigen::VectorXcd contract_full(const PepsResource& res, std::size_t amp_cap = std::size_t{1} << 20);

struct FragmentSpec {
  struct Assignment {
    int site;
    LocalBasis basis;
    int outcome;
  };
  struct Through {
    int site;
    std::string leg;
    bool is_output;
  };
  std::vector<Assignment> measured;
  std::vector<Through> through;  // result legs ordered outputs-then-inputs
  std::map<std::pair<int, std::string>, Eigen::VectorXcd> boundary_override;
};

/// Operator induced on the through correlation legs by measuring the
/// fragment's sites; every non-through leg must be closed by a bond inside
/// the fragment, a geometry boundary, or an override. Result legs are named
/// out0,out1,...,in0,in1,....
ComplexTensor fragment_operator(const PepsResource& res, const FragmentSpec& frag);

/// Same, grouped into a (prod out dims) x (prod in dims) matrix.
Eigen::MatrixXcd fragment_matrix(const PepsResource& res, const FragmentSpec& frag);

/// The vector the builder would assign to `leg` at a true lattice boundary.
/// Closing a fragment-edge bond with it is exactly what a surrounding
/// Z-measurement with outcome 0 injects, so protocol fragments can be tested
/// in isolation.
Eigen::VectorXcd default_leg_boundary(Peps2dKind kind, const std::string& leg);

/// Fill boundary_override for every fragment leg that bonds outside the
/// fragment, using default_leg_boundary. Explicit overrides are kept.
void fill_fragment_defaults(const PepsResource& res, FragmentSpec& frag);

/// Replace the listed boundary ports by one entangled boundary tensor whose
/// legs must be named x{site}_{leg}.
void attach_boundary_tensor(PepsResource& res,
                            const std::vector<std::pair<int, std::string>>& legs,
                            ComplexTensor tensor);

/// Dense-assembly route for the same network, written against the raw site
/// tensors with plain Kronecker index arithmetic. This is the referee used
/// by the oracle: same state, independent evaluation path.
Eigen::VectorXcd assemble_dense(const PepsResource& res, std::size_t amp_cap = std::size_t{1} << 20);

/// Referee for fragment_operator: evaluates the same fragment by dense
/// enumeration over through-leg basis states and per-site projector sums,
/// without the pairwise-contraction engine.
Eigen::MatrixXcd induced_operator_dense(const PepsResource& res, const FragmentSpec& frag);

}  // namespace ctn
