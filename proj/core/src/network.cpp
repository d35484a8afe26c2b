#include "ssg/network.hpp"

#include <cmath>
#include <cstdio>
#include <tuple>

namespace ssg {

NodeId NodeId::vertex(Address a) {
  NodeId id;
  id.kind = NodeKind::vertex;
  id.addr = std::move(a);
  return id;
}

NodeId NodeId::interior(SegmentId s, int sample) {
  if (sample < 1) throw Error(Errc::bad_config, "interior samples are numbered from 1");
  NodeId id;
  id.kind = NodeKind::interior;
  id.seg = std::move(s);
  id.sample = sample;
  return id;
}

std::string NodeId::str() const {
  if (kind == NodeKind::vertex) return addr.str();
  return seg.str() + "@" + std::to_string(sample);
}

bool NodeId::operator==(const NodeId& o) const {
  if (kind != o.kind) return false;
  if (kind == NodeKind::vertex) return addr == o.addr;
  return seg.cell == o.seg.cell && seg.bond.i == o.seg.bond.i && seg.bond.j == o.seg.bond.j &&
         sample == o.sample;
}

bool NodeId::operator<(const NodeId& o) const {
  auto key = [](const NodeId& n) {
    return std::make_tuple(n.kind == NodeKind::interior ? 1 : 0,
                           n.kind == NodeKind::vertex ? n.addr.word : n.seg.cell,
                           n.kind == NodeKind::vertex ? n.addr.corner : bond_index(n.seg.bond),
                           n.sample);
  };
  return key(*this) < key(o);
}

std::string EdgeTag::str() const {
  if (kind == EdgeKind::triangle) return "triangle:" + (cell.empty() ? std::string() : cell);
  return "segment:" + SegmentId{cell, bond}.str() + "@" + std::to_string(sub);
}

int ResistorNetwork::index_of(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw Error(Errc::bad_address, "node " + id.str() + " is not part of this network");
  }
  return it->second;
}

std::vector<int> ResistorNetwork::vertex_indices() const {
  std::vector<int> out;
  for (int i = 0; i < node_count(); ++i) {
    if (nodes_[i].kind == NodeKind::vertex) out.push_back(i);
  }
  return out;
}

bool ResistorNetwork::is_connected() const {
  if (nodes_.empty()) return true;
  std::vector<std::vector<int>> adj(nodes_.size());
  for (const Edge& e : edges_) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++visited;
    for (int w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return visited == node_count();
}

void ResistorNetwork::add_node(NodeId id) {
  if (index_.count(id)) {
    throw Error(Errc::bad_config, "node " + id.str() + " registered twice");
  }
  index_.emplace(id, node_count());
  nodes_.push_back(std::move(id));
}

void ResistorNetwork::add_edge(const NodeId& a, const NodeId& b, double conductance,
                               EdgeTag tag) {
  int ia = index_of(a);
  int ib = index_of(b);
  if (ia == ib) throw Error(Errc::bad_config, "self-loop at node " + a.str());
  if (!(conductance > 0.0)) {
    throw Error(Errc::bad_config, "conductance must be positive, got " +
                                      std::to_string(conductance) + " at edge " + a.str() + " - " +
                                      b.str());
  }
  edges_.push_back(Edge{ia, ib, conductance, std::move(tag)});
}

namespace {

void require_pairs(const std::vector<ScalePair>& pairs, int m) {
  if (static_cast<int>(pairs.size()) < m) {
    throw Error(Errc::size_mismatch, "need " + std::to_string(m) + " scale pairs, got " +
                                         std::to_string(pairs.size()));
  }
  for (int k = 0; k < m; ++k) {
    if (!(pairs[k].r > 0.0) || !(pairs[k].rho > 0.0)) {
      throw Error(Errc::bad_pair, "scale pair " + std::to_string(k + 1) + " must be positive");
    }
  }
}

void require_subdiv(int subdiv) {
  if (subdiv < 1) throw Error(Errc::bad_config, "subdivision must be at least 1");
}

// delta_k = r_1..r_k for k = 0..m (delta_0 = 1).
std::vector<double> deltas(const std::vector<ScalePair>& pairs, int m) {
  std::vector<double> d(m + 1, 1.0);
  for (int k = 1; k <= m; ++k) d[k] = d[k - 1] * pairs[k - 1].r;
  return d;
}

}  // namespace

ResistorNetwork build_ssg(const std::vector<ScalePair>& pairs, int m, int subdiv) {
  require_level(m);
  require_subdiv(subdiv);
  require_pairs(pairs, m);
  std::vector<double> delta = deltas(pairs, m);

  ResistorNetwork net;
  VertexSet verts = vertex_set(m);
  for (const Address& a : verts.addresses()) net.add_node(NodeId::vertex(a));
  std::vector<SegmentId> segs = segments(m);
  for (const SegmentId& seg : segs) {
    for (int s = 1; s < subdiv; ++s) net.add_node(NodeId::interior(seg, s));
  }

  double c_triangle = 1.0 / delta[m];
  for (const Word& w : cells(m)) {
    for (const Bond& b : kBonds) {
      net.add_edge(NodeId::vertex(canonicalize(Address{w, b.i})),
                   NodeId::vertex(canonicalize(Address{w, b.j})), c_triangle,
                   EdgeTag{EdgeKind::triangle, m, w, b, 0});
    }
  }
  for (const SegmentId& seg : segs) {
    int k = seg.level();
    double gamma_k = delta[k - 1] * pairs[k - 1].rho;
    double c_sub = static_cast<double>(subdiv) / gamma_k;
    NodeId prev = NodeId::vertex(seg.tail());
    for (int s = 1; s < subdiv; ++s) {
      NodeId cur = NodeId::interior(seg, s);
      net.add_edge(prev, cur, c_sub, EdgeTag{EdgeKind::segment, k, seg.cell, seg.bond, s - 1});
      prev = cur;
    }
    net.add_edge(prev, NodeId::vertex(seg.head()), c_sub,
                 EdgeTag{EdgeKind::segment, k, seg.cell, seg.bond, subdiv - 1});
  }
  return net;
}

ResistorNetwork build_ssg(const MatchingSequence& seq, int m, int subdiv) {
  return build_ssg(seq.scale_pairs(m), m, subdiv);
}

ResistorNetwork build_sg(int m) {
  require_level(m);
  ResistorNetwork net;
  for (const SgClass& cls : sg_vertices(m)) net.add_node(NodeId::vertex(cls.rep));
  double c = std::pow(5.0 / 3.0, m);
  for (const Word& w : cells(m)) {
    for (const Bond& b : kBonds) {
      net.add_edge(NodeId::vertex(sg_class(Address{w, b.i}, m).rep),
                   NodeId::vertex(sg_class(Address{w, b.j}, m).rep), c,
                   EdgeTag{EdgeKind::triangle, m, w, b, 0});
    }
  }
  return net;
}

std::string to_csv(const ResistorNetwork& net) {
  std::string out = "u,v,conductance,tag\n";
  char buf[64];
  for (const Edge& e : net.edges()) {
    std::snprintf(buf, sizeof(buf), "%.10g", e.conductance);
    out += net.node(e.a).str() + "," + net.node(e.b).str() + "," + buf + "," + e.tag.str() + "\n";
  }
  return out;
}

DiscretizedFunction::DiscretizedFunction(int level, int subdiv)
    : level_(level), subdiv_(subdiv) {
  require_level(level);
  require_subdiv(subdiv);
  verts_ = vertex_set(level);
  values_.assign(verts_.size(), 0.0);
  for (const SegmentId& seg : segments(level)) {
    profiles_.emplace(seg, std::vector<double>(subdiv - 1, 0.0));
  }
}

double DiscretizedFunction::at(const Address& a) const {
  return values_[verts_.index_of(canonicalize(a))];
}

double& DiscretizedFunction::at(const Address& a) {
  return values_[verts_.index_of(canonicalize(a))];
}

const std::vector<double>& DiscretizedFunction::profile(const SegmentId& seg) const {
  auto it = profiles_.find(seg);
  if (it == profiles_.end()) {
    throw Error(Errc::bad_function,
                "no profile for segment " + seg.str() + " at discretization level " +
                    std::to_string(level_));
  }
  return it->second;
}

std::vector<double>& DiscretizedFunction::profile(const SegmentId& seg) {
  return const_cast<std::vector<double>&>(
      static_cast<const DiscretizedFunction*>(this)->profile(seg));
}

double DiscretizedFunction::node_value(const NodeId& id) const {
  if (id.kind == NodeKind::vertex) return at(id.addr);
  const std::vector<double>& p = profile(id.seg);
  if (id.sample < 1 || id.sample > static_cast<int>(p.size())) {
    throw Error(Errc::size_mismatch,
                "sample " + std::to_string(id.sample) + " of segment " + id.seg.str() +
                    " does not exist at subdivision " + std::to_string(subdiv_));
  }
  return p[id.sample - 1];
}

double energy(const ResistorNetwork& net, const std::vector<double>& values) {
  if (static_cast<int>(values.size()) != net.node_count()) {
    throw Error(Errc::size_mismatch, "expected " + std::to_string(net.node_count()) +
                                         " node values, got " + std::to_string(values.size()));
  }
  double sum = 0.0;
  for (const Edge& e : net.edges()) {
    double d = values[e.a] - values[e.b];
    sum += e.conductance * d * d;
  }
  return sum;
}

double energy(const ResistorNetwork& net, const DiscretizedFunction& f) {
  // The interior samples only line up when the subdivisions agree; a network
  // with interiors numbered 1..n-1 was built with subdivision n.
  int max_sample = 0;
  for (const NodeId& id : net.nodes()) {
    if (id.kind == NodeKind::interior && id.sample > max_sample) max_sample = id.sample;
  }
  if (max_sample > 0 && max_sample + 1 != f.subdiv()) {
    throw Error(Errc::size_mismatch,
                "network subdivision " + std::to_string(max_sample + 1) +
                    " does not match function subdivision " + std::to_string(f.subdiv()));
  }
  std::vector<double> values;
  values.reserve(net.node_count());
  for (const NodeId& id : net.nodes()) values.push_back(f.node_value(id));
  return energy(net, values);
}

namespace {

// Dirichlet energy of one segment profile under the unit-parameter piecewise
// linear interpolant: n * sum of squared sample increments.
double segment_dirichlet(const DiscretizedFunction& f, const SegmentId& seg) {
  const std::vector<double>& p = f.profile(seg);
  double head = f.at(seg.head());
  double prev = f.at(seg.tail());
  double sum = 0.0;
  for (double x : p) {
    double d = x - prev;
    sum += d * d;
    prev = x;
  }
  double d = head - prev;
  sum += d * d;
  return static_cast<double>(f.subdiv()) * sum;
}

}  // namespace

FormComponents form_components(const std::vector<ScalePair>& pairs, int m,
                               const DiscretizedFunction& f) {
  require_level(m);
  require_pairs(pairs, m);
  if (f.level() < m) {
    throw Error(Errc::bad_function, "function at level " + std::to_string(f.level()) +
                                        " is too shallow for form level " + std::to_string(m));
  }
  std::vector<double> delta = deltas(pairs, m);

  FormComponents out;
  for (const Word& w : cells(m)) {
    for (const Bond& b : kBonds) {
      double d = f.at(Address{w, b.i}) - f.at(Address{w, b.j});
      out.q_sigma += d * d;
    }
  }
  out.q_line.assign(m, 0.0);
  out.d_line.assign(m, 0.0);
  for (const SegmentId& seg : segments(m)) {
    int k = seg.level();
    double d = f.at(seg.tail()) - f.at(seg.head());
    out.q_line[k - 1] += d * d;
    out.d_line[k - 1] += segment_dirichlet(f, seg);
  }
  out.total = out.q_sigma / delta[m];
  for (int k = 1; k <= m; ++k) {
    out.total += out.d_line[k - 1] / (delta[k - 1] * pairs[k - 1].rho);
  }
  return out;
}

FormComponents form_components(const MatchingSequence& seq, int m, const DiscretizedFunction& f) {
  return form_components(seq.scale_pairs(m), m, f);
}

}  // namespace ssg
