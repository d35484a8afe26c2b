// Finite resistor networks on the stretched gasket.
//
// The level-m network realizes
//   E_(R,m)(u) = (1/delta_m) Q_m^S(u) + sum_(k<=m) (1/gamma_k) D_k^I(u):
// each level-m cell carries a triangle of edges with conductance 1/delta_m,
// and each level-k bridge segment a path of n sub-edges with conductance
// n/gamma_k, so the network energy of the piecewise-linear interpolant is
// exact (no quadrature). The plain gasket network carries per-cell triangles
// of conductance (5/3)^m on the class vertices. Energies use the unordered
// edge convention E(u) = sum_e c_e (u_p - u_q)^2.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "ssg/matching.hpp"
#include "ssg/topology.hpp"

namespace ssg {

enum class NodeKind { vertex, interior };

// A network node: either a vertex address (canonical for SSG networks, a
// class representative for gasket networks) or an interior sample point of a
// subdivided segment, numbered 1..n-1 from the tail.
struct NodeId {
  NodeKind kind = NodeKind::vertex;
  Address addr;
  SegmentId seg;
  int sample = 0;

  static NodeId vertex(Address a);
  static NodeId interior(SegmentId s, int sample);

  // "w:c" for vertices, "w:ij@s" for interior samples.
  std::string str() const;

  bool operator==(const NodeId& o) const;
  bool operator<(const NodeId& o) const;
};

enum class EdgeKind { triangle, segment };

// Provenance of one edge: the cell triangle it belongs to, or the segment
// chain with its 0-based sub-edge index.
struct EdgeTag {
  EdgeKind kind = EdgeKind::triangle;
  int level = 0;
  Word cell;
  Bond bond{1, 2};
  int sub = 0;

  std::string str() const;
};

struct Edge {
  int a = 0;
  int b = 0;
  double conductance = 0.0;
  EdgeTag tag;
};

// An immutable-after-construction weighted graph. Nodes are registered in a
// fixed order (vertices first, then interior samples) and edges refer to
// node indices.
class ResistorNetwork {
 public:
  int node_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<NodeId>& nodes() const { return nodes_; }
  const NodeId& node(int idx) const { return nodes_.at(idx); }
  const std::vector<Edge>& edges() const { return edges_; }

  // Index of a node; throws Error(bad_address) if absent.
  int index_of(const NodeId& id) const;
  // Indices of the vertex-kind nodes, in node order.
  std::vector<int> vertex_indices() const;

  bool is_connected() const;

  // Builders; validation: distinct registered endpoints, conductance > 0.
  void add_node(NodeId id);
  void add_edge(const NodeId& a, const NodeId& b, double conductance, EdgeTag tag);

 private:
  std::vector<NodeId> nodes_;
  std::map<NodeId, int> index_;
  std::vector<Edge> edges_;
};

// Level-m SSG network with each segment subdivided into n sub-edges. The
// weights come from the first m scale pairs: delta_m = r_1..r_m and
// gamma_k = delta_(k-1) rho_k. Only positivity of the pairs is enforced, so
// deliberately broken (non-matching) networks can be built as negative
// controls. m = 0 yields the unit triangle.
ResistorNetwork build_ssg(const std::vector<ScalePair>& pairs, int m, int subdiv);
ResistorNetwork build_ssg(const MatchingSequence& seq, int m, int subdiv);

// Level-m gasket network on the class vertices, conductance (5/3)^m.
ResistorNetwork build_sg(int m);

// CSV export with columns u,v,conductance,tag (conductance to 10 significant
// digits).
std::string to_csv(const ResistorNetwork& net);

// A function discretized at level M with n-fold segment subdivision: values
// on the canonical vertices of V_M plus n-1 interior samples per bridge
// segment of level <= M. Profile endpoints are the vertex values themselves,
// so the piecewise-linear interpolant is well defined by construction.
class DiscretizedFunction {
 public:
  DiscretizedFunction(int level, int subdiv);

  int level() const { return level_; }
  int subdiv() const { return subdiv_; }

  const VertexSet& vertices() const { return verts_; }
  std::vector<double>& vertex_values() { return values_; }
  const std::vector<double>& vertex_values() const { return values_; }

  // Value at an address (canonicalized); throws Error(bad_address) past
  // level M.
  double at(const Address& a) const;
  double& at(const Address& a);

  // Interior samples of one segment, size n-1; throws Error(bad_function)
  // for segments past level M.
  const std::vector<double>& profile(const SegmentId& seg) const;
  std::vector<double>& profile(const SegmentId& seg);

  // Value at a network node; interior samples must match this function's
  // subdivision (Error(size_mismatch) otherwise).
  double node_value(const NodeId& id) const;

 private:
  int level_ = 0;
  int subdiv_ = 1;
  VertexSet verts_;
  std::vector<double> values_;
  std::map<SegmentId, std::vector<double>> profiles_;
};

// sum_e c_e (u_a - u_b)^2 for values aligned to the node order.
double energy(const ResistorNetwork& net, const std::vector<double>& values);
double energy(const ResistorNetwork& net, const DiscretizedFunction& f);

// The three ingredients of E_(R,m):
//   q_sigma    Q_m^S, the sum of squared corner differences over level-m cells
//   q_line[k]  Q_(k+1)^I, squared endpoint differences over level-(k+1) segments
//   d_line[k]  D_(k+1)^I, the Dirichlet energy of the segment profiles
//   total      q_sigma/delta_m + sum_k d_line[k]/gamma_(k+1)
// Always q_line[k] <= d_line[k], with equality iff the profiles are affine.
struct FormComponents {
  double q_sigma = 0.0;
  std::vector<double> q_line;
  std::vector<double> d_line;
  double total = 0.0;
};

FormComponents form_components(const std::vector<ScalePair>& pairs, int m,
                               const DiscretizedFunction& f);
FormComponents form_components(const MatchingSequence& seq, int m, const DiscretizedFunction& f);

}  // namespace ssg
