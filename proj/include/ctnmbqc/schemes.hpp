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

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ctnmbqc/groups.hpp"
#include "ctnmbqc/mps.hpp"
#include "ctnmbqc/peps.hpp"

namespace ctn {

// ---------------------------------------------------------------------------
// Logical circuits

enum class GateKind { PrepZ, H, SPhi, Rotation, CZ, CS, ZZPhi, MeasureZ };

struct LogicalGate {
  GateKind kind{};
  int q = 0;
  int q2 = -1;
  double phi = 0;
  char axis = 'z';
};

struct LogicalCircuit {
  int num_qubits = 0;
  std::vector<LogicalGate> gates;

  void validate() const;
  static LogicalCircuit from_json(const std::string& text);
  std::string to_json() const;
};

/// ZXZ factorization: u is proportional to S(alpha) H S(beta) H S(gamma),
/// angles in (-pi, pi].
std::array<double, 3> euler_zxz(const Eigen::Matrix2cd& u);
/// ZYZ factorization: u proportional to Rz(alpha) Ry(beta) Rz(gamma).
std::array<double, 3> euler_zyz(const Eigen::Matrix2cd& u);

// ---------------------------------------------------------------------------
// Scheme families

enum class FamilyKind {
  Cluster1d,
  Aklt,
  Dihedral,
  Cluster2d,
  Aklt2d,
  WeightedGraph,
  Rerouting,
  Toric1,
  Toric2,
};

/// How measurement randomness is compensated: Pauli (or Clifford) frames
/// commuted through the pattern, or the trial-until-success walk that waits
/// for the by-product group to return.
enum class LedgerPolicy { PauliFrame, WalkUntilInverse };

struct SchemeFamily {
  FamilyKind kind{};
  std::string name;
  std::string group_name;  // declared by-product group, CLI-addressable
  LedgerPolicy policy{};
  int dihedral_m = 3;

  ProjectiveGroup group() const { return group_by_name(group_name); }
  bool supports(const LogicalGate& g) const;
};

SchemeFamily make_family(FamilyKind kind, int dihedral_m = 3);
SchemeFamily family_by_name(const std::string& name);
std::vector<std::string> family_names();

// ---------------------------------------------------------------------------
// Compiled adaptive patterns

enum class Backend { CorrelationSpace, Oracle };

struct CompiledPattern {
  SchemeFamily family;
  LogicalCircuit circuit;
  int num_wires = 0;  // logical wires
};

CompiledPattern compile(const LogicalCircuit& circuit, const SchemeFamily& family);

struct TraceEvent {
  int shot;
  std::string site;
  std::string basis;
  int outcome;
  std::string ledger;
};

struct RunReport {
  std::string family;
  std::string backend;
  int shots = 0;
  std::uint64_t seed = 0;
  std::map<std::string, int> counts;  // readout bitstring -> count
  std::size_t max_sites_used = 0;
  std::vector<TraceEvent> trace;

  std::map<std::string, double> distribution() const;
};

struct ExecOptions {
  int shots = 1;
  std::uint64_t seed = 0;
  /// Bound on measured sites per shot; retry blocks exceeding it throw.
  std::size_t max_sites = 4000;
  bool record_trace = false;
  /// Extra initialization for the toric scheme-1 robustness study: the sign
  /// of the pair boundary (|00> + sign|11>)/sqrt2. 0 keeps the |0> default.
  int toric1_pair_sign = 0;
};

RunReport execute(const CompiledPattern& pattern, Backend backend, const ExecOptions& options);

/// Exact output distribution of the logical circuit (dense simulation);
/// the analytic referee for the random-circuit acceptance tests.
std::map<std::string, double> analytic_distribution(const LogicalCircuit& circuit);

double tv_distance(const std::map<std::string, double>& a, const std::map<std::string, double>& b);

// ---------------------------------------------------------------------------
// Gate fragments exposed for the soundness suites

/// A gate realization as a measurement fragment on a concrete lattice patch,
/// with its success predicate and the target operator to verify against.
struct GateFragment {
  std::string description;
  PepsResource resource;
  FragmentSpec spec;                 // bases filled in, outcomes to be set
  std::vector<int> branch_sites;     // sites whose outcomes enumerate branches
  /// Given the branch outcomes, is this a success branch?
  std::function<bool(const std::vector<int>&)> success;
  /// Target operator on the through wires for success branches (mod declared
  /// by-products and phase).
  Eigen::MatrixXcd target;
};

GateFragment realize_cluster2d_cz();
GateFragment realize_aklt2d_cz();
GateFragment realize_weighted_cz();

/// Fixed Clifford between a physical qubit pair and its (sign, parity)
/// encoding: |s>_s|l>_l <-> (|0,l> + (-1)^s |1, l xor 1... see the toric
/// scheme-1 readout. encode maps the encoded basis to the pair basis.
Eigen::Vector4cd parity_codec(bool encode, const Eigen::Vector4cd& state);

/// Toric scheme-1 sign-robustness study: random single-qubit circuits
/// executed on the straightened two-line lattice with the pair boundary
/// (|00> + sign|11>)/sqrt2; returns the readout distribution.
std::map<std::string, double> toric1_sign_run(int sign, const LogicalCircuit& circuit, int shots,
                                              std::uint64_t seed);

}  // namespace ctn
