// Constructors for the functions the verification experiments quantify
// over: gasket-harmonic functions and their pullbacks (constant along every
// bridge segment, so they carry pure triangle energy), single-segment tents
// (zero triangle energy), unit-interval clamps, and reproducible random
// functions.
//
// The pullback realizes the collapse map between the stretched gasket and
// the classical one: a function on level-m gasket classes lifts to the
// stretched gasket by giving every vertex the value of its class and making
// every segment profile constant.  Deeper target levels are reached by first
// extending the class function harmonically on the gasket.
#pragma once

#include <array>
#include <cstdint>

#include <nlohmann/json.hpp>

#include "ssg/network.hpp"

namespace ssg {

// A function on the level-m gasket classes, one value per class in
// sg_vertices(m) order.
class SgFunction {
 public:
  explicit SgFunction(int level);
  SgFunction(int level, std::vector<double> values);

  int level() const { return level_; }
  const std::vector<SgClass>& classes() const { return classes_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  double at(const SgClass& c) const;
  double& at(const SgClass& c);
  // Value at the class of `a` in the level-`level()` gasket.
  double at_point(const Address& a) const;

 private:
  int level_;
  std::vector<SgClass> classes_;
  std::vector<double> values_;
};

// Energy-minimizing extension of corner values (u(p_1), u(p_2), u(p_3)) to
// the level-m gasket.
SgFunction sg_harmonic(const std::array<double, 3>& boundary, int m);

// Gasket energy of g at its own level: the sum over level-m cells of
// (5/3)^m times the squared corner differences.
double sg_energy(const SgFunction& g);

// Pullback of g to a level-`target_level` function with `subdiv` samples per
// segment: vertices take their class value, every profile is constant, so
// all segment Dirichlet terms vanish.  Levels deeper than g are filled by
// harmonic extension on the gasket first.
DiscretizedFunction pullback_sg(const SgFunction& g, int target_level, int subdiv);

// Zero everywhere except on one segment, whose profile is the symmetric tent
// with peak 1 at the midpoint sample.  Requires even subdiv.
DiscretizedFunction tent_on_segment(const SegmentId& seg, int target_level, int subdiv);

// Every vertex value and sample clipped to [0, 1].
DiscretizedFunction clamp(const DiscretizedFunction& f);

// Reproducible pseudo-random values in [-1, 1]: vertices in vertex-set
// order, then segment profiles in segment order, from one mt19937_64 stream.
DiscretizedFunction random_function(std::uint64_t seed, int level, int subdiv);

// Pointwise sum; levels and subdivisions must agree.
DiscretizedFunction sum(const DiscretizedFunction& a, const DiscretizedFunction& b);

// g(x) = f(s(x)); segment profiles follow the image segments, reversing
// sample order when the image bond is oriented against its canonical form.
DiscretizedFunction compose_symmetry(const DiscretizedFunction& f, const Symmetry& s);

// Function specs for configs:
//   {"kind": "pullback_harmonic", "boundary": [1, 0, 0]}
//   {"kind": "tent", "segment": "∅:12"}
//   {"kind": "random", "seed": 7}
//   {"kind": "sum", "parts": [spec, ...]}
// The harmonic pullback is taken at the target level itself.
DiscretizedFunction make_function(const nlohmann::json& spec, int level, int subdiv);
DiscretizedFunction parse_function(const std::string& text, int level, int subdiv);

}  // namespace ssg
