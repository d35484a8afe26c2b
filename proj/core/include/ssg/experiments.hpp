// Theorem-level verification procedures. Each experiment builds networks
// and functions, evaluates one identity from the matching-pair calculus, and
// emits a deterministic report of (quantity, computed, predicted, residual)
// rows with an explicit pass tolerance. Negative controls (a broken pair, a
// corrupted edge weight) are included so all-zero residuals cannot be a
// vacuous pass.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ssg/engine.hpp"
#include "ssg/matching.hpp"

namespace ssg {

// How a row's residual is formed and judged:
//   abs     residual = |computed - predicted|, pass iff residual <= tol
//   rel     residual = |computed - predicted| / |predicted|, same test
//   upper   pass iff computed <= predicted; residual = overshoot
//   lower   pass iff computed >= predicted; residual = shortfall
//   marker  informational, always passes
enum class RowMode { abs, rel, upper, lower, marker };

const char* row_mode_name(RowMode mode);
RowMode parse_row_mode(const std::string& name);

struct ReportRow {
  std::string quantity;
  double computed = 0.0;
  double predicted = 0.0;
  double residual = 0.0;
  RowMode mode = RowMode::abs;
  bool pass = true;
  std::string note;

  friend bool operator==(const ReportRow& a, const ReportRow& b) = default;
};

class ExperimentReport {
 public:
  ExperimentReport(std::string name, nlohmann::json parameters, double tolerance);

  // Computes residual and pass from the mode and the report tolerance.
  void add(const std::string& quantity, double computed, double predicted, RowMode mode,
           const std::string& note = "");
  void add_marker(const std::string& quantity, const std::string& note);

  const std::string& name() const { return name_; }
  const nlohmann::json& parameters() const { return parameters_; }
  double tolerance() const { return tolerance_; }
  const std::vector<ReportRow>& rows() const { return rows_; }
  bool pass() const;

  // Header lines carry the name, parameters, and tolerance; rows are printed
  // with 10 significant digits. Output is bit-identical across reruns.
  std::string to_csv() const;
  nlohmann::json to_json() const;
  static ExperimentReport from_json(const nlohmann::json& j);

  friend bool operator==(const ExperimentReport& a, const ExperimentReport& b);

 private:
  std::string name_;
  nlohmann::json parameters_;
  double tolerance_;
  std::vector<ReportRow> rows_;
};

// Trace consistency along the refinement chain: one row per level. Matching
// sequences leave structural residuals only.
ExperimentReport exp_compat_chain(const MatchingSequence& seq, int m_max,
                                  double tol = kStructuralTol);

// SG part: the renormalized triangle energy of the pulled-back harmonic
// function against the scalar prediction Q_0(boundary) / P_m per level, plus
// the limit value Q_0 * C_* for convergent sequences; divergent sequences
// get a degeneration marker instead of a limit row.
ExperimentReport exp_sg_part(const MatchingSequence& seq, const std::array<double, 3>& boundary,
                             int m_max, double tol = 1e-10);

// Decomposition into SG part and line part on the composite test function
// pullback(harmonic) + tent (tent only in the divergent mode).
ExperimentReport exp_decomposition(const MatchingSequence& seq, int m,
                                   double tol = kStructuralTol);

// Projection calculus: idempotence, divergent fixed points, the two
// computational routes to rho_0, and the per-level scale identity
// gamma_m = rho_0 * gamma'_m relating a sequence to its projection.
ExperimentReport exp_projection(const MatchingSequence& seq, int terms,
                                double tol = kScalarTol);

// Resistance diameter bound and corner-to-corner invariance per level.
ExperimentReport exp_diameter(const MatchingSequence& seq, int m_max, double tol = 1e-10);

// Energy invariance under all six isometries for a random function, with a
// corrupted-weight negative control.
ExperimentReport exp_symmetry(const MatchingSequence& seq, int m, std::uint64_t seed,
                              double tol = kScalarTol);

}  // namespace ssg
