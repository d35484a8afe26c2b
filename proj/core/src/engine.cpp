#include "ssg/engine.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cstdio>
#include <utility>

namespace ssg {

namespace {

// Interior blocks of connected positive-conductance networks are positive
// definite; dense factorization is exact enough at desk scale and the sparse
// path keeps memory linear beyond this many unknowns.
constexpr int kDenseLimit = 3000;

class SpdSolver {
 public:
  explicit SpdSolver(const Eigen::SparseMatrix<double>& a)
      : use_dense_(a.rows() <= kDenseLimit) {
    bool ok = false;
    if (use_dense_) {
      dense_.compute(Eigen::MatrixXd(a));
      ok = dense_.info() == Eigen::Success;
    } else {
      sparse_.compute(a);
      ok = sparse_.info() == Eigen::Success;
    }
    if (!ok) {
      throw Error(Errc::bad_config, "internal fault: interior block is not positive definite");
    }
  }

  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const {
    if (use_dense_) return dense_.solve(b);
    return sparse_.solve(b);
  }

 private:
  bool use_dense_;
  Eigen::LDLT<Eigen::MatrixXd> dense_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> sparse_;
};

void require_connected(const ResistorNetwork& net, const char* what) {
  if (!net.is_connected()) {
    throw Error(Errc::disconnected, std::string(what) + " requires a connected network");
  }
}

// Laplacian with one node grounded (row and column removed); positive
// definite for connected networks.
Eigen::SparseMatrix<double> grounded_laplacian(const ResistorNetwork& net, int ground) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(net.edges().size() * 4);
  auto row = [ground](int idx) { return idx < ground ? idx : idx - 1; };
  for (const Edge& e : net.edges()) {
    if (e.a != ground) trips.emplace_back(row(e.a), row(e.a), e.conductance);
    if (e.b != ground) trips.emplace_back(row(e.b), row(e.b), e.conductance);
    if (e.a != ground && e.b != ground) {
      trips.emplace_back(row(e.a), row(e.b), -e.conductance);
      trips.emplace_back(row(e.b), row(e.a), -e.conductance);
    }
  }
  Eigen::SparseMatrix<double> l(net.node_count() - 1, net.node_count() - 1);
  l.setFromTriplets(trips.begin(), trips.end());
  return l;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

}  // namespace

Eigen::MatrixXd laplacian(const ResistorNetwork& net) {
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(net.node_count(), net.node_count());
  for (const Edge& e : net.edges()) {
    l(e.a, e.a) += e.conductance;
    l(e.b, e.b) += e.conductance;
    l(e.a, e.b) -= e.conductance;
    l(e.b, e.a) -= e.conductance;
  }
  return l;
}

TraceForm::TraceForm(std::vector<NodeId> boundary, Eigen::MatrixXd lap)
    : boundary_(std::move(boundary)), lap_(std::move(lap)) {
  if (lap_.rows() != lap_.cols() ||
      lap_.rows() != static_cast<Eigen::Index>(boundary_.size())) {
    throw Error(Errc::size_mismatch, "trace matrix must be square with one row per boundary node");
  }
}

double TraceForm::conductance(int i, int j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size() || i == j) {
    throw Error(Errc::bad_config, "conductance needs two distinct boundary indices");
  }
  return -lap_(i, j);
}

double TraceForm::energy(const std::vector<double>& values) const {
  if (static_cast<int>(values.size()) != size()) {
    throw Error(Errc::size_mismatch, "value vector must have one entry per boundary node");
  }
  Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  return v.dot(lap_ * v);
}

std::string TraceForm::to_csv() const {
  std::string out = "node";
  for (const NodeId& id : boundary_) out += "," + id.str();
  out += "\n";
  for (int i = 0; i < size(); ++i) {
    out += boundary_[i].str();
    for (int j = 0; j < size(); ++j) out += "," + fmt(lap_(i, j));
    out += "\n";
  }
  return out;
}

TraceForm trace(const ResistorNetwork& net, const std::vector<NodeId>& boundary) {
  if (boundary.empty()) throw Error(Errc::bad_config, "trace boundary must be nonempty");
  require_connected(net, "trace");

  int n = net.node_count();
  int k = static_cast<int>(boundary.size());
  std::vector<int> brow_of(n, -1);
  for (int i = 0; i < k; ++i) {
    int idx = net.index_of(boundary[i]);
    if (brow_of[idx] != -1) {
      throw Error(Errc::bad_config, "duplicate boundary node " + boundary[i].str());
    }
    brow_of[idx] = i;
  }
  std::vector<int> irow_of(n, -1);
  int ni = 0;
  for (int idx = 0; idx < n; ++idx) {
    if (brow_of[idx] == -1) irow_of[idx] = ni++;
  }

  Eigen::MatrixXd l_bb = Eigen::MatrixXd::Zero(k, k);
  Eigen::MatrixXd l_ib = Eigen::MatrixXd::Zero(ni, k);
  std::vector<Eigen::Triplet<double>> ii_trips;
  for (const Edge& e : net.edges()) {
    int ra = brow_of[e.a];
    int rb = brow_of[e.b];
    double c = e.conductance;
    if (ra >= 0 && rb >= 0) {
      l_bb(ra, ra) += c;
      l_bb(rb, rb) += c;
      l_bb(ra, rb) -= c;
      l_bb(rb, ra) -= c;
    } else if (ra < 0 && rb < 0) {
      int qa = irow_of[e.a];
      int qb = irow_of[e.b];
      ii_trips.emplace_back(qa, qa, c);
      ii_trips.emplace_back(qb, qb, c);
      ii_trips.emplace_back(qa, qb, -c);
      ii_trips.emplace_back(qb, qa, -c);
    } else {
      int br = ra >= 0 ? ra : rb;
      int qr = ra >= 0 ? irow_of[e.b] : irow_of[e.a];
      l_bb(br, br) += c;
      ii_trips.emplace_back(qr, qr, c);
      l_ib(qr, br) -= c;
    }
  }
  if (ni == 0) return TraceForm(boundary, std::move(l_bb));

  Eigen::SparseMatrix<double> l_ii(ni, ni);
  l_ii.setFromTriplets(ii_trips.begin(), ii_trips.end());
  SpdSolver solver(l_ii);
  Eigen::MatrixXd schur = l_bb - l_ib.transpose() * solver.solve(l_ib);
  schur = (0.5 * (schur + schur.transpose())).eval();
  return TraceForm(boundary, std::move(schur));
}

HarmonicExtension harmonic_extend(const ResistorNetwork& net,
                                  const std::map<NodeId, double>& boundary) {
  if (boundary.empty()) throw Error(Errc::bad_config, "boundary data must be nonempty");
  require_connected(net, "harmonic extension");

  int n = net.node_count();
  HarmonicExtension ext;
  ext.values.assign(n, 0.0);
  std::vector<bool> pinned(n, false);
  for (const auto& [id, value] : boundary) {
    int idx = net.index_of(id);
    pinned[idx] = true;
    ext.values[idx] = value;
    ext.boundary_index.push_back(idx);
  }

  std::vector<int> irow_of(n, -1);
  std::vector<int> inode;
  for (int idx = 0; idx < n; ++idx) {
    if (!pinned[idx]) {
      irow_of[idx] = static_cast<int>(inode.size());
      inode.push_back(idx);
    }
  }
  int ni = static_cast<int>(inode.size());
  if (ni > 0) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
    std::vector<Eigen::Triplet<double>> trips;
    for (const Edge& e : net.edges()) {
      double c = e.conductance;
      bool pa = pinned[e.a];
      bool pb = pinned[e.b];
      if (pa && pb) continue;
      if (!pa && !pb) {
        int qa = irow_of[e.a];
        int qb = irow_of[e.b];
        trips.emplace_back(qa, qa, c);
        trips.emplace_back(qb, qb, c);
        trips.emplace_back(qa, qb, -c);
        trips.emplace_back(qb, qa, -c);
      } else {
        int qr = pa ? irow_of[e.b] : irow_of[e.a];
        trips.emplace_back(qr, qr, c);
        rhs[qr] += c * ext.values[pa ? e.a : e.b];
      }
    }
    Eigen::SparseMatrix<double> l_ii(ni, ni);
    l_ii.setFromTriplets(trips.begin(), trips.end());
    SpdSolver solver(l_ii);
    Eigen::MatrixXd u = solver.solve(rhs);
    for (int q = 0; q < ni; ++q) ext.values[inode[q]] = u(q, 0);
  }
  ext.energy = energy(net, ext.values);
  return ext;
}

double effective_resistance(const ResistorNetwork& net, const NodeId& p, const NodeId& q) {
  int ip = net.index_of(p);
  int iq = net.index_of(q);
  if (ip == iq) throw Error(Errc::bad_config, "effective resistance needs two distinct nodes");
  if (!net.is_connected()) {
    throw Error(Errc::disconnected, "effective resistance is infinite on a disconnected network");
  }
  SpdSolver solver(grounded_laplacian(net, 0));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(net.node_count() - 1);
  if (ip != 0) b[ip - 1] += 1.0;
  if (iq != 0) b[iq - 1] -= 1.0;
  Eigen::MatrixXd x = solver.solve(b);
  return b.dot(x.col(0));
}

double resistance_diameter(const ResistorNetwork& net) {
  require_connected(net, "resistance diameter");
  int n = net.node_count();
  if (n < 2) return 0.0;
  SpdSolver solver(grounded_laplacian(net, 0));
  Eigen::MatrixXd g = solver.solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
  double best = 0.0;
  // R(ground, j) = g_jj; R(i, j) = g_ii + g_jj - 2 g_ij.
  for (int j = 0; j < n - 1; ++j) best = std::max(best, g(j, j));
  for (int i = 0; i < n - 1; ++i) {
    for (int j = i + 1; j < n - 1; ++j) {
      best = std::max(best, g(i, i) + g(j, j) - 2.0 * g(i, j));
    }
  }
  return best;
}

std::array<double, 3> delta_wye(double r12, double r23, double r31) {
  if (!(r12 > 0.0) || !(r23 > 0.0) || !(r31 > 0.0)) {
    throw Error(Errc::bad_config, "delta-wye requires positive resistances");
  }
  double s = r12 + r23 + r31;
  return {r12 * r31 / s, r23 * r12 / s, r31 * r23 / s};
}

double compatibility_residual(const std::vector<ScalePair>& pairs, int m) {
  require_level(m + 1);
  ResistorNetwork fine = build_ssg(pairs, m + 1, 1);
  ResistorNetwork coarse = build_ssg(pairs, m, 1);
  VertexSet verts = vertex_set(m);
  std::vector<NodeId> boundary;
  boundary.reserve(verts.size());
  for (const Address& a : verts.addresses()) boundary.push_back(NodeId::vertex(a));
  TraceForm traced = trace(fine, boundary);
  // With subdivision 1 the coarse network's nodes are exactly the boundary,
  // in the same order.
  return (traced.matrix() - laplacian(coarse)).cwiseAbs().maxCoeff();
}

double compatibility_residual(const MatchingSequence& seq, int m) {
  return compatibility_residual(seq.scale_pairs(m + 1), m);
}

double sg_chain_residual(int m) {
  require_level(m + 1);
  ResistorNetwork fine = build_sg(m + 1);
  ResistorNetwork coarse = build_sg(m);
  std::vector<NodeId> boundary;
  for (const SgClass& cls : sg_vertices(m)) {
    boundary.push_back(NodeId::vertex(sg_class(cls.rep, m + 1).rep));
  }
  TraceForm traced = trace(fine, boundary);
  return (traced.matrix() - laplacian(coarse)).cwiseAbs().maxCoeff();
}

}  // namespace ssg
