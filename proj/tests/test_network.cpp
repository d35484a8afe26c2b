// Network construction and form component tests. Edge counts and
// conductances are checked against hand-computed values; the network energy
// and the component formula are verified against each other on random
// functions, since they traverse different code paths (edge list vs direct
// cell/segment sums).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "ssg/network.hpp"

using namespace ssg;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

DiscretizedFunction random_function(std::mt19937_64& rng, int level, int subdiv) {
  DiscretizedFunction f(level, subdiv);
  for (double& v : f.vertex_values()) v = uniform(rng, -1.0, 1.0);
  for (const SegmentId& seg : segments(level)) {
    for (double& x : f.profile(seg)) x = uniform(rng, -1.0, 1.0);
  }
  return f;
}

// f composed with the isometry s: g(x) = f(s(x)). Profiles follow the
// segment images; when the image bond comes out reversed the sample order
// flips.
DiscretizedFunction compose(const DiscretizedFunction& f, const Symmetry& s) {
  DiscretizedFunction g(f.level(), f.subdiv());
  for (int i = 0; i < g.vertices().size(); ++i) {
    g.vertex_values()[i] = f.at(s.apply(g.vertices().at(i)));
  }
  for (const SegmentId& seg : segments(f.level())) {
    Word cell = s.apply(seg.cell);
    int si = s.apply(seg.bond.i);
    int sj = s.apply(seg.bond.j);
    bool forward = false;
    SegmentId image;
    for (const Bond& b : kBonds) {
      if (b.i == si && b.j == sj) {
        image = SegmentId{cell, b};
        forward = true;
      }
      if (b.i == sj && b.j == si) image = SegmentId{cell, b};
    }
    std::vector<double> p = f.profile(image);
    if (!forward) std::reverse(p.begin(), p.end());
    g.profile(seg) = p;
  }
  return g;
}

// f restricted to subtriangle i, one level down: g = f o G_i.
DiscretizedFunction restrict_cell(const DiscretizedFunction& f, int i) {
  DiscretizedFunction g(f.level() - 1, f.subdiv());
  char digit = static_cast<char>('0' + i);
  for (int k = 0; k < g.vertices().size(); ++k) {
    const Address& a = g.vertices().at(k);
    g.vertex_values()[k] = f.at(Address{digit + a.word, a.corner});
  }
  for (const SegmentId& seg : segments(g.level())) {
    g.profile(seg) = f.profile(SegmentId{digit + seg.cell, seg.bond});
  }
  return g;
}

int count_tag(const ResistorNetwork& net, EdgeKind kind) {
  int n = 0;
  for (const Edge& e : net.edges()) {
    if (e.tag.kind == kind) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("level 0 is the unit triangle") {
  ResistorNetwork net = build_ssg(MatchingSequence::constant(0.25), 0, 1);
  CHECK(net.node_count() == 3);
  CHECK(net.edges().size() == 3);
  for (const Edge& e : net.edges()) CHECK(e.conductance == 1.0);
  CHECK(net.is_connected());
  CHECK(energy(net, std::vector<double>{1.0, 0.0, 0.0}) == 2.0);
}

TEST_CASE("level 1 network for constant rho = 1/4") {
  ResistorNetwork net = build_ssg(MatchingSequence::constant(0.25), 1, 1);
  CHECK(net.node_count() == 9);
  CHECK(net.edges().size() == 12);
  CHECK(count_tag(net, EdgeKind::triangle) == 9);
  CHECK(count_tag(net, EdgeKind::segment) == 3);
  for (const Edge& e : net.edges()) {
    if (e.tag.kind == EdgeKind::triangle) {
      CHECK(e.conductance == doctest::Approx(1.0 / 0.45).epsilon(1e-15));
    } else {
      CHECK(e.conductance == 4.0);
    }
  }
  CHECK(net.is_connected());

  // Vertex nodes come first, aligned with vertex_set order.
  VertexSet verts = vertex_set(1);
  for (int i = 0; i < verts.size(); ++i) {
    CHECK(net.node(i).kind == NodeKind::vertex);
    CHECK(net.node(i).addr == verts.at(i));
  }
  CHECK(net.vertex_indices().size() == 9);
}

TEST_CASE("node and edge counts under subdivision") {
  ResistorNetwork m2n2 = build_ssg(MatchingSequence::geometric(0.5, 0.5), 2, 2);
  CHECK(m2n2.node_count() == 27 + 12);
  CHECK(m2n2.edges().size() == 27 + 24);
  CHECK(m2n2.is_connected());

  ResistorNetwork m1n4 = build_ssg(MatchingSequence::constant(0.25), 1, 4);
  CHECK(m1n4.node_count() == 9 + 9);
  CHECK(m1n4.edges().size() == 9 + 12);
  for (const Edge& e : m1n4.edges()) {
    if (e.tag.kind == EdgeKind::segment) CHECK(e.conductance == 16.0);
  }
  CHECK(m1n4.is_connected());
}

TEST_CASE("gasket networks") {
  ResistorNetwork g0 = build_sg(0);
  CHECK(g0.node_count() == 3);
  CHECK(g0.edges().size() == 3);
  for (const Edge& e : g0.edges()) CHECK(e.conductance == 1.0);

  ResistorNetwork g1 = build_sg(1);
  CHECK(g1.node_count() == 6);
  CHECK(g1.edges().size() == 9);
  for (const Edge& e : g1.edges()) {
    CHECK(e.conductance == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  }
  CHECK(g1.is_connected());

  ResistorNetwork g2 = build_sg(2);
  CHECK(g2.node_count() == 15);
  CHECK(g2.edges().size() == 27);
  CHECK(g2.is_connected());
}

TEST_CASE("cell indicator pays only the bridge crossings") {
  ResistorNetwork net = build_ssg(MatchingSequence::constant(0.25), 1, 1);
  DiscretizedFunction f(1, 1);
  f.at(Address{"1", 1}) = 1.0;  // canonicalizes to the corner (,1)
  f.at(Address{"1", 2}) = 1.0;
  f.at(Address{"1", 3}) = 1.0;
  CHECK(energy(net, f) == 8.0);  // two bridges leave the cell, conductance 4 each
}

TEST_CASE("vertex values are shared across canonical aliases") {
  DiscretizedFunction f(2, 1);
  f.at(Address{"11", 1}) = 0.75;
  CHECK(f.at(Address{"", 1}) == 0.75);
  CHECK(f.at(Address{"1", 1}) == 0.75);
}

TEST_CASE("network energy equals the component formula") {
  std::mt19937_64 rng(46692016ull);
  for (const MatchingSequence& seq :
       {MatchingSequence::constant(0.25), MatchingSequence::geometric(0.5, 0.5)}) {
    for (int trial = 0; trial < 10; ++trial) {
      DiscretizedFunction f = random_function(rng, 2, 3);
      ResistorNetwork net = build_ssg(seq, 2, 3);
      FormComponents fc = form_components(seq, 2, f);
      double direct = energy(net, f);
      CHECK(fc.total == doctest::Approx(direct).epsilon(1e-12));

      // total recombines from the parts with the derived scales.
      std::vector<DerivedScales> rows = derive_prefix(seq, 2);
      double rebuilt = fc.q_sigma / rows[1].delta + fc.d_line[0] / rows[0].gamma +
                       fc.d_line[1] / rows[1].gamma;
      CHECK(fc.total == doctest::Approx(rebuilt).epsilon(1e-13));
    }
  }
}

TEST_CASE("endpoint form never exceeds the segment Dirichlet form") {
  std::mt19937_64 rng(10403678ull);
  for (int trial = 0; trial < 50; ++trial) {
    DiscretizedFunction f = random_function(rng, 2, 4);
    FormComponents fc = form_components(MatchingSequence::constant(0.25), 2, f);
    REQUIRE(fc.q_line.size() == 2);
    for (int k = 0; k < 2; ++k) CHECK(fc.q_line[k] <= fc.d_line[k] * (1.0 + 1e-12));
  }

  // Affine profiles achieve equality.
  DiscretizedFunction f(1, 4);
  std::mt19937_64 rng2(77ull);
  for (double& v : f.vertex_values()) v = uniform(rng2, -1.0, 1.0);
  for (const SegmentId& seg : segments(1)) {
    double a = f.at(seg.tail());
    double b = f.at(seg.head());
    std::vector<double>& p = f.profile(seg);
    for (int s = 1; s <= static_cast<int>(p.size()); ++s) {
      p[s - 1] = a + (b - a) * s / f.subdiv();
    }
  }
  FormComponents fc = form_components(MatchingSequence::constant(0.25), 1, f);
  CHECK(fc.q_line[0] == doctest::Approx(fc.d_line[0]).epsilon(1e-13));
}

TEST_CASE("parabolic profile Dirichlet energy") {
  for (int n : {4, 7, 16}) {
    DiscretizedFunction f(1, n);
    SegmentId seg = segments(1)[0];
    f.at(seg.head()) = 1.0;
    std::vector<double>& p = f.profile(seg);
    for (int s = 1; s < n; ++s) p[s - 1] = static_cast<double>(s) * s / (n * n);
    FormComponents fc = form_components(MatchingSequence::constant(0.25), 1, f);
    double expect = 4.0 / 3.0 - 1.0 / (3.0 * n * n);
    CHECK(fc.d_line[0] == doctest::Approx(expect).epsilon(1e-14));
    CHECK(fc.q_line[0] == 1.0);
  }
}

TEST_CASE("tent profile has Dirichlet energy 4 and no endpoint drop") {
  for (int n : {2, 4, 8}) {
    DiscretizedFunction f(1, n);
    SegmentId seg = segments(1)[1];
    std::vector<double>& p = f.profile(seg);
    for (int s = 1; s < n; ++s) {
      double t = static_cast<double>(s) / n;
      p[s - 1] = 1.0 - 2.0 * std::abs(t - 0.5);
    }
    FormComponents fc = form_components(MatchingSequence::constant(0.25), 1, f);
    CHECK(fc.d_line[0] == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(fc.q_line[0] == 0.0);
  }
}

TEST_CASE("self-similar recursion across one level") {
  // E_(R,m)(f) = (1/r_1) sum_i E_(R shifted, m-1)(f o G_i) + (1/rho_1) D_1^I(f).
  std::mt19937_64 rng(86000111ull);
  for (const MatchingSequence& seq :
       {MatchingSequence::geometric(0.5, 0.5), MatchingSequence::constant(0.25)}) {
    MatchingPair first = seq.pair(1);
    MatchingSequence shifted = seq.shift(1);
    for (int m : {1, 2, 3}) {
      DiscretizedFunction f = random_function(rng, m, 2);
      FormComponents whole = form_components(seq, m, f);
      double sum = 0.0;
      for (int i = 1; i <= 3; ++i) {
        DiscretizedFunction part = restrict_cell(f, i);
        sum += form_components(shifted, m - 1, part).total;
      }
      double rhs = sum / first.r + whole.d_line[0] / first.rho;
      CHECK(whole.total == doctest::Approx(rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("energy is invariant under the six isometries") {
  std::mt19937_64 rng(59029581ull);
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  ResistorNetwork net = build_ssg(seq, 2, 3);
  for (int trial = 0; trial < 5; ++trial) {
    DiscretizedFunction f = random_function(rng, 2, 3);
    double base = energy(net, f);
    for (const Symmetry& s : Symmetry::all()) {
      DiscretizedFunction g = compose(f, s);
      CHECK(energy(net, g) == doctest::Approx(base).epsilon(1e-12));
    }
  }
}

TEST_CASE("form level monotonicity on random functions") {
  std::mt19937_64 rng(31415927ull);
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  for (int trial = 0; trial < 25; ++trial) {
    DiscretizedFunction f = random_function(rng, 3, 2);
    double e1 = form_components(seq, 1, f).total;
    double e2 = form_components(seq, 2, f).total;
    double e3 = form_components(seq, 3, f).total;
    CHECK(e1 <= e2 * (1.0 + 1e-12));
    CHECK(e2 <= e3 * (1.0 + 1e-12));
  }
}

TEST_CASE("csv export lists every edge") {
  ResistorNetwork net = build_ssg(MatchingSequence::constant(0.25), 1, 2);
  std::string csv = to_csv(net);
  size_t lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == net.edges().size() + 1);
  CHECK(csv.rfind("u,v,conductance,tag\n", 0) == 0);
  CHECK(csv.find("triangle:1") != std::string::npos);
  CHECK(csv.find("segment::12@0") != std::string::npos);
  CHECK(csv.find("@1") != std::string::npos);  // interior sample node
}

TEST_CASE("node ids serialize and order") {
  NodeId v = NodeId::vertex(Address{"12", 3});
  CHECK(v.str() == "12:3");
  NodeId in = NodeId::interior(SegmentId{"1", Bond{2, 3}}, 2);
  CHECK(in.str() == "1:23@2");
  CHECK(v < in);  // vertices sort before interiors
  CHECK_FALSE(in < in);
  CHECK(in == in);
  CHECK_THROWS_AS(NodeId::interior(SegmentId{"1", Bond{2, 3}}, 0), Error);
}

TEST_CASE("construction and evaluation validate their inputs") {
  MatchingSequence seq = MatchingSequence::constant(0.25);
  CHECK_THROWS_AS(build_ssg(seq, max_level() + 1, 1), Error);
  CHECK_THROWS_AS(build_ssg(seq, 1, 0), Error);
  CHECK_THROWS_AS(build_ssg(std::vector<ScalePair>{{0.0, 0.5}}, 1, 1), Error);
  CHECK_THROWS_AS(build_ssg(std::vector<ScalePair>{{0.45, 0.25}}, 2, 1), Error);

  ResistorNetwork net = build_ssg(seq, 2, 1);
  CHECK_THROWS_AS(energy(net, std::vector<double>(5, 0.0)), Error);

  DiscretizedFunction shallow(1, 1);
  CHECK_THROWS_AS(energy(net, shallow), Error);
  CHECK_THROWS_AS(form_components(seq, 2, shallow), Error);

  ResistorNetwork fine = build_ssg(seq, 1, 2);
  DiscretizedFunction wrong_subdiv(1, 3);
  CHECK_THROWS_AS(energy(fine, wrong_subdiv), Error);

  DiscretizedFunction f(1, 2);
  CHECK_THROWS_AS(f.profile(SegmentId{"12", Bond{1, 2}}), Error);
  CHECK_THROWS_AS(f.at(Address{"12", 3}), Error);

  ResistorNetwork manual;
  manual.add_node(NodeId::vertex(Address{"", 1}));
  manual.add_node(NodeId::vertex(Address{"", 2}));
  CHECK_FALSE(manual.is_connected());
  CHECK_THROWS_AS(manual.add_node(NodeId::vertex(Address{"", 1})), Error);
  CHECK_THROWS_AS(
      manual.add_edge(NodeId::vertex(Address{"", 1}), NodeId::vertex(Address{"", 1}), 1.0, {}),
      Error);
  CHECK_THROWS_AS(
      manual.add_edge(NodeId::vertex(Address{"", 1}), NodeId::vertex(Address{"", 2}), -1.0, {}),
      Error);
  CHECK_THROWS_AS(
      manual.add_edge(NodeId::vertex(Address{"", 1}), NodeId::vertex(Address{"", 3}), 1.0, {}),
      Error);
}
