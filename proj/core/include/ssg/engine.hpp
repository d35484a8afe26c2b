// Linear-algebra core: weighted graph Laplacians, traces (Schur
// complements), harmonic extension, effective resistance, and the
// delta-wye transform.
//
// The trace of a network onto a node subset B is the form induced by
// energy-minimizing extension,
//
//     E|_B(u, u) = min { E(v, v) : v agrees with u on B },
//
// realized as the Schur complement of the weighted Laplacian after
// eliminating the complement of B.  Traces compose (tracing in stages equals
// tracing once) and preserve effective resistances between retained nodes;
// the compatibility residuals below are built on exactly these identities.
#pragma once

#include <Eigen/Core>

#include <array>
#include <map>
#include <string>
#include <vector>

#include "ssg/matching.hpp"
#include "ssg/network.hpp"

namespace ssg {

// Residual thresholds shared by experiments and acceptance checks:
// `kStructuralTol` for matrix-against-matrix identities that pass through a
// factorization, `kScalarTol` for identities between individual numbers.
inline constexpr double kStructuralTol = 1e-9;
inline constexpr double kScalarTol = 1e-12;

// Dense weighted Laplacian of the network, rows in node-index order.
// Intended for desk-scale networks; large nets are handled internally by the
// partitioned solvers and never materialize this matrix.
Eigen::MatrixXd laplacian(const ResistorNetwork& net);

// A resistance form on an explicit node list: the full reduced Laplacian
// (symmetric, zero row sums, possibly a complete graph).  Row i corresponds
// to boundary()[i].
class TraceForm {
 public:
  TraceForm(std::vector<NodeId> boundary, Eigen::MatrixXd lap);

  const std::vector<NodeId>& boundary() const { return boundary_; }
  const Eigen::MatrixXd& matrix() const { return lap_; }
  int size() const { return static_cast<int>(boundary_.size()); }

  // Pairwise conductance between boundary nodes i and j (the negated
  // off-diagonal entry).
  double conductance(int i, int j) const;
  // Form value u^T L u for values aligned with boundary().
  double energy(const std::vector<double>& values) const;

  // Matrix as CSV: header row of node names, then one row per node with its
  // name in the first column.
  std::string to_csv() const;

 private:
  std::vector<NodeId> boundary_;
  Eigen::MatrixXd lap_;
};

// Schur complement of the Laplacian onto `boundary` (order defines the rows
// of the result).  With every node retained the Laplacian is returned
// unchanged.  Requires a connected network and distinct, present nodes.
TraceForm trace(const ResistorNetwork& net, const std::vector<NodeId>& boundary);

// Energy-minimizing extension of pinned boundary values: the unique function
// agreeing with `boundary` whose interior values solve the Laplacian system.
// Satisfies the maximum principle and energy(extension) = trace energy of
// the boundary data.
struct HarmonicExtension {
  std::vector<double> values;       // aligned with net.nodes()
  std::vector<int> boundary_index;  // node indices that were pinned
  double energy = 0.0;
};

HarmonicExtension harmonic_extend(const ResistorNetwork& net,
                                  const std::map<NodeId, double>& boundary);

// Effective resistance between two distinct nodes of a connected network.
double effective_resistance(const ResistorNetwork& net, const NodeId& p, const NodeId& q);

// Max effective resistance over all node pairs, computed from a single
// factorization.
double resistance_diameter(const ResistorNetwork& net);

// Delta-wye: arm resistances (R1, R2, R3) of the three-armed star that is
// electrically equivalent to the triangle with side resistances r12, r23,
// r31; R_i = r_ij * r_ki / (r12 + r23 + r31).
std::array<double, 3> delta_wye(double r12, double r23, double r31);

// Max-abs entry difference between the level-(m+1) network traced onto the
// level-m vertex set and the level-m network itself (both at subdivision 1).
// Zero, up to solver error, exactly when consecutive pairs match; arbitrary
// positive pairs are accepted so broken sequences can be measured.
double compatibility_residual(const std::vector<ScalePair>& pairs, int m);
double compatibility_residual(const MatchingSequence& seq, int m);

// Same consistency check along the gasket chain: build_sg(m+1) traced onto
// the level-m classes against build_sg(m).
double sg_chain_residual(int m);

}  // namespace ssg
