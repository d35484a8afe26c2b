#include "ssg/function.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "ssg/engine.hpp"

namespace ssg {

SgFunction::SgFunction(int level) : level_(level), classes_(sg_vertices(level)) {
  values_.assign(classes_.size(), 0.0);
}

SgFunction::SgFunction(int level, std::vector<double> values)
    : level_(level), classes_(sg_vertices(level)), values_(std::move(values)) {
  if (values_.size() != classes_.size()) {
    throw Error(Errc::size_mismatch, "level " + std::to_string(level_) + " needs " +
                                         std::to_string(classes_.size()) + " class values, got " +
                                         std::to_string(values_.size()));
  }
}

namespace {

int class_index(const std::vector<SgClass>& classes, int level, const SgClass& c) {
  if (c.level != level) {
    throw Error(Errc::bad_address, "class " + c.str() + " has level " + std::to_string(c.level) +
                                       ", function has level " + std::to_string(level));
  }
  auto it = std::lower_bound(classes.begin(), classes.end(), c);
  if (it == classes.end() || !(*it == c)) {
    throw Error(Errc::bad_address, "no gasket class " + c.str());
  }
  return static_cast<int>(it - classes.begin());
}

}  // namespace

double SgFunction::at(const SgClass& c) const {
  return values_[class_index(classes_, level_, c)];
}

double& SgFunction::at(const SgClass& c) {
  return values_[class_index(classes_, level_, c)];
}

double SgFunction::at_point(const Address& a) const { return at(sg_class(a, level_)); }

SgFunction sg_harmonic(const std::array<double, 3>& boundary, int m) {
  require_level(m);
  if (m == 0) return SgFunction(0, {boundary[0], boundary[1], boundary[2]});
  ResistorNetwork net = build_sg(m);
  std::map<NodeId, double> pinned;
  for (int i = 1; i <= 3; ++i) {
    pinned[NodeId::vertex(sg_class(Address{"", i}, m).rep)] = boundary[i - 1];
  }
  HarmonicExtension h = harmonic_extend(net, pinned);
  SgFunction g(m);
  int idx = 0;
  for (const SgClass& cls : g.classes()) {
    g.values()[idx++] = h.values[net.index_of(NodeId::vertex(cls.rep))];
  }
  return g;
}

double sg_energy(const SgFunction& g) {
  double c = std::pow(5.0 / 3.0, g.level());
  double total = 0.0;
  for (const Word& w : cells(g.level())) {
    for (const Bond& b : kBonds) {
      double d = g.at_point(Address{w, b.i}) - g.at_point(Address{w, b.j});
      total += c * d * d;
    }
  }
  return total;
}

DiscretizedFunction pullback_sg(const SgFunction& g, int target_level, int subdiv) {
  require_level(target_level);
  if (target_level < g.level()) {
    throw Error(Errc::bad_config, "pullback target level " + std::to_string(target_level) +
                                      " is shallower than the function level " +
                                      std::to_string(g.level()));
  }
  const SgFunction* fine = &g;
  SgFunction prolonged(0);
  if (target_level > g.level()) {
    // Harmonic prolongation: pin every class of g at its deeper-level class
    // and extend; level-m harmonic functions stay harmonic, so the pullback
    // is exact for them.
    ResistorNetwork net = build_sg(target_level);
    std::map<NodeId, double> pinned;
    for (size_t i = 0; i < g.classes().size(); ++i) {
      pinned[NodeId::vertex(sg_class(g.classes()[i].rep, target_level).rep)] = g.values()[i];
    }
    HarmonicExtension h = harmonic_extend(net, pinned);
    prolonged = SgFunction(target_level);
    int idx = 0;
    for (const SgClass& cls : prolonged.classes()) {
      prolonged.values()[idx++] = h.values[net.index_of(NodeId::vertex(cls.rep))];
    }
    fine = &prolonged;
  }

  DiscretizedFunction f(target_level, subdiv);
  const VertexSet& verts = f.vertices();
  for (int i = 0; i < verts.size(); ++i) {
    f.vertex_values()[i] = fine->at(sg_class(verts.at(i), target_level));
  }
  for (const SegmentId& seg : segments(target_level)) {
    // Both endpoints collapse to one gasket class; the profile is that value.
    double value = fine->at(sg_class(seg.tail(), target_level));
    for (double& x : f.profile(seg)) x = value;
  }
  return f;
}

DiscretizedFunction tent_on_segment(const SegmentId& seg, int target_level, int subdiv) {
  if (subdiv < 2 || subdiv % 2 != 0) {
    throw Error(Errc::bad_config, "tent profiles need an even subdivision, got " +
                                      std::to_string(subdiv));
  }
  DiscretizedFunction f(target_level, subdiv);
  std::vector<double>& p = f.profile(seg);
  for (int s = 1; s < subdiv; ++s) {
    p[s - 1] = s <= subdiv / 2 ? 2.0 * s / subdiv : 2.0 * (subdiv - s) / subdiv;
  }
  return f;
}

DiscretizedFunction clamp(const DiscretizedFunction& f) {
  DiscretizedFunction g = f;
  for (double& v : g.vertex_values()) v = std::clamp(v, 0.0, 1.0);
  for (const SegmentId& seg : segments(g.level())) {
    for (double& x : g.profile(seg)) x = std::clamp(x, 0.0, 1.0);
  }
  return g;
}

DiscretizedFunction random_function(std::uint64_t seed, int level, int subdiv) {
  std::mt19937_64 rng(seed);
  // Raw-bit mapping instead of std::uniform_real_distribution: distribution
  // output is implementation-defined and reports promise reproducibility.
  auto draw = [&rng] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
  DiscretizedFunction f(level, subdiv);
  for (double& v : f.vertex_values()) v = draw();
  for (const SegmentId& seg : segments(level)) {
    for (double& x : f.profile(seg)) x = draw();
  }
  return f;
}

DiscretizedFunction sum(const DiscretizedFunction& a, const DiscretizedFunction& b) {
  if (a.level() != b.level() || a.subdiv() != b.subdiv()) {
    throw Error(Errc::size_mismatch, "summands must share level and subdivision");
  }
  DiscretizedFunction out = a;
  for (int i = 0; i < out.vertices().size(); ++i) out.vertex_values()[i] += b.vertex_values()[i];
  for (const SegmentId& seg : segments(out.level())) {
    const std::vector<double>& q = b.profile(seg);
    std::vector<double>& p = out.profile(seg);
    for (size_t s = 0; s < p.size(); ++s) p[s] += q[s];
  }
  return out;
}

DiscretizedFunction compose_symmetry(const DiscretizedFunction& f, const Symmetry& s) {
  DiscretizedFunction g(f.level(), f.subdiv());
  const VertexSet& verts = g.vertices();
  for (int i = 0; i < verts.size(); ++i) {
    g.vertex_values()[i] = f.at(s.apply(verts.at(i)));
  }
  for (const SegmentId& seg : segments(f.level())) {
    Word cell = s.apply(seg.cell);
    int si = s.apply(seg.bond.i);
    int sj = s.apply(seg.bond.j);
    SegmentId image;
    bool forward = false;
    for (const Bond& b : kBonds) {
      if (b.i == si && b.j == sj) {
        image = SegmentId{cell, b};
        forward = true;
      } else if (b.i == sj && b.j == si) {
        image = SegmentId{cell, b};
      }
    }
    std::vector<double> p = f.profile(image);
    if (!forward) std::reverse(p.begin(), p.end());
    g.profile(seg) = std::move(p);
  }
  return g;
}

DiscretizedFunction make_function(const nlohmann::json& spec, int level, int subdiv) {
  if (!spec.is_object() || !spec.contains("kind") || !spec.at("kind").is_string()) {
    throw Error(Errc::bad_config, "function spec must be an object with a \"kind\" key");
  }
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "pullback_harmonic") {
    if (!spec.contains("boundary") || !spec.at("boundary").is_array() ||
        spec.at("boundary").size() != 3) {
      throw Error(Errc::bad_config, "pullback spec needs a 3-entry \"boundary\" array");
    }
    std::array<double, 3> b{};
    for (int i = 0; i < 3; ++i) {
      const auto& x = spec.at("boundary").at(i);
      if (!x.is_number()) throw Error(Errc::bad_config, "\"boundary\" entries must be numbers");
      b[i] = x.get<double>();
    }
    return pullback_sg(sg_harmonic(b, level), level, subdiv);
  }
  if (kind == "tent") {
    if (!spec.contains("segment") || !spec.at("segment").is_string()) {
      throw Error(Errc::bad_config, "tent spec needs a \"segment\" string");
    }
    return tent_on_segment(SegmentId::parse(spec.at("segment").get<std::string>()), level, subdiv);
  }
  if (kind == "random") {
    if (!spec.contains("seed") || !spec.at("seed").is_number_integer()) {
      throw Error(Errc::bad_config, "random spec needs an integer \"seed\"");
    }
    std::int64_t seed = spec.at("seed").get<std::int64_t>();
    if (seed < 0) throw Error(Errc::bad_config, "\"seed\" must be non-negative");
    return random_function(static_cast<std::uint64_t>(seed), level, subdiv);
  }
  if (kind == "sum") {
    if (!spec.contains("parts") || !spec.at("parts").is_array() || spec.at("parts").empty()) {
      throw Error(Errc::bad_config, "sum spec needs a nonempty \"parts\" array");
    }
    DiscretizedFunction out = make_function(spec.at("parts").at(0), level, subdiv);
    for (size_t i = 1; i < spec.at("parts").size(); ++i) {
      out = sum(out, make_function(spec.at("parts").at(i), level, subdiv));
    }
    return out;
  }
  throw Error(Errc::bad_config, "unknown function kind \"" + kind + "\"");
}

DiscretizedFunction parse_function(const std::string& text, int level, int subdiv) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::bad_config, "function spec is not valid JSON");
  return make_function(j, level, subdiv);
}

}  // namespace ssg
