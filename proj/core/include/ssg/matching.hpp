// Matching pairs and matching sequences.
//
// A pair (r, rho) is matching when (5/3) r + rho = 1 with 0 < rho < 1. A
// sequence of matching pairs drives the whole construction: level m of the
// network carries triangle weight 1/delta_m with delta_m = r_1 ... r_m, and
// the level-k bridges carry weight 1/gamma_k with gamma_k = r_1 ... r_(k-1)
// rho_k. The matching condition is exactly what makes consecutive levels
// trace onto each other, and the products
//   P_m = prod_(i<=m) (1 - rho_i) = (5/3)^m delta_m
// decide the limit behavior: P_m decreases to R_* > 0 iff sum rho_m < inf.
#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssg/topology.hpp"

namespace ssg {

struct MatchingPair {
  double r = 0.0;
  double rho = 0.0;

  // The only blessed constructor: r = (3/5)(1 - rho). Throws Error(bad_pair)
  // unless 0 < rho < 1.
  static MatchingPair from_rho(double rho);

  // |(5/3) r + rho - 1|; at most 1e-15 for pairs built by from_rho.
  double residual() const;
};

// Scale weights for one refinement level without the matching constraint.
// Networks accept these directly so that deliberately broken pairs can be
// built as negative controls; only positivity is enforced.
struct ScalePair {
  double r = 0.0;
  double rho = 0.0;
};

enum class Family { constant, geometric, harmonic, explicit_list };

// An infinite (or explicitly finite) sequence of matching pairs, generated by
// one of four families:
//   constant   rho_m = rho
//   geometric  rho_m = c q^(m-1),  0 < q <= 1
//   harmonic   rho_m = c / m
//   explicit   a finite list, optionally continued by a tail family
// Explicit sequences may carry a declared limit product (the value of
// prod (1 - rho_m)); project() and unproject() stamp it on their outputs,
// where it is known exactly, so that round trips do not depend on the
// numeric divergence heuristic.
class MatchingSequence {
 public:
  static MatchingSequence constant(double rho);
  static MatchingSequence geometric(double c, double q);
  static MatchingSequence harmonic(double c);
  static MatchingSequence explicit_list(std::vector<double> rho,
                                        std::optional<MatchingSequence> tail = std::nullopt,
                                        std::optional<double> declared_r_star = std::nullopt);

  // rho_m for m >= 1. Finite explicit sequences throw
  // Error(sequence_exhausted) past their last term.
  double rho(int m) const;
  MatchingPair pair(int m) const;
  // Pairs 1..m, the data needed to build a level-m network.
  std::vector<MatchingPair> pairs(int m) const;
  std::vector<ScalePair> scale_pairs(int m) const;

  Family family() const { return family_; }
  bool finite() const { return family_ == Family::explicit_list && !tail_; }
  // Number of accessible terms; infinite families report INT_MAX.
  int available_terms() const;
  std::optional<double> declared_r_star() const { return declared_r_star_; }

  // Drops the first n pairs. Families shift structurally: a shifted geometric
  // is again geometric, a shifted harmonic keeps an index offset, an explicit
  // list loses its prefix (and its declared limit product is divided by the
  // dropped factors).
  MatchingSequence shift(int n) const;

  nlohmann::json to_json() const;
  static MatchingSequence from_json(const nlohmann::json& j);
  static MatchingSequence parse(const std::string& text);

 private:
  MatchingSequence() = default;

  Family family_ = Family::constant;
  double c_ = 0.0;
  double q_ = 0.0;
  int shift_ = 0;  // index offset for geometric / harmonic
  std::vector<double> list_;
  std::shared_ptr<const MatchingSequence> tail_;
  std::optional<double> declared_r_star_;
};

// Per-level derived quantities.
//   delta_m = r_1 ... r_m              gamma_m = delta_(m-1) rho_m
//   P_m     = prod_(i<=m) (1-rho_i)    kappa_m = -log(1-rho_m)
//   alpha_m = 1 - P_(m-1)              eta_m   = gamma_m / (1 - R_*)
struct DerivedScales {
  int m = 0;
  double rho = 0.0;
  double r = 0.0;
  double delta = 0.0;
  double gamma = 0.0;
  double big_p = 0.0;
  double eta = 0.0;
  double kappa = 0.0;
  double alpha = 0.0;
};

// Limit data: R_* = lim P_m, c_star = 1/R_* (infinity when R_* = 0) and
// rho0 = 1 - R_*. Divergence of sum rho_m is decided analytically for the
// built-in families; finite explicit sequences without a declared limit use
// a numeric heuristic (partial product below 1e-14 means divergent, last
// |log(1-rho)| below 1e-15 means converged) and otherwise raise
// Error(undetermined_divergence).
struct LimitConstants {
  double r_star = 0.0;
  double c_star = 0.0;
  double rho0 = 0.0;
  bool diverges = false;
};

LimitConstants limit_constants(const MatchingSequence& seq);

DerivedScales derive(const MatchingSequence& seq, int m);
std::vector<DerivedScales> derive_prefix(const MatchingSequence& seq, int m);

// | sum_(i<=m) (5/3)^(i-1) gamma_i + (5/3)^m delta_m - 1 |. Identically zero
// in exact arithmetic for every matching sequence.
double telescoping_residual(const MatchingSequence& seq, int m);

// The projection onto line-only sequences:
//   sigma_m = rho_m P_(m-1) / (P_(m-1) - R_*).
// Divergent input is a fixed point (R_* = 0) and is returned verbatim, which
// makes the projection exactly idempotent. The output is an explicit
// sequence with declared limit product 0; projected sequences always have
// divergent sigma sums. Convergent inputs lose precision once P_(m-1)
// approaches R_*; the term count is capped accordingly (a typed error, not
// garbage output).
MatchingSequence project(const MatchingSequence& seq, int terms);

// Inverse construction: given a line-only sequence sigma and a target
// rho0 in (0,1),
//   rho_m = rho0 A_(m-1) / (rho0 A_(m-1) + 1 - rho0) * sigma_m,
// with A_(m-1) = prod_(i<m) (1 - sigma_i). The output declares limit product
// 1 - rho0. project(unproject(sigma, rho0)) recovers sigma termwise.
MatchingSequence unproject(const MatchingSequence& seq, double rho0, int terms);

}  // namespace ssg
