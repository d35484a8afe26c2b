#include "ssg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ssg/function.hpp"

namespace ssg {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

double triangle_energy(const std::array<double, 3>& b) {
  return (b[0] - b[1]) * (b[0] - b[1]) + (b[1] - b[2]) * (b[1] - b[2]) +
         (b[2] - b[0]) * (b[2] - b[0]);
}

// Relative where the prediction is nonzero, absolute otherwise.
RowMode against(double predicted) { return predicted != 0.0 ? RowMode::rel : RowMode::abs; }

ResistorNetwork with_scaled_edge(const ResistorNetwork& net, size_t edge, double factor) {
  ResistorNetwork out;
  for (const NodeId& id : net.nodes()) out.add_node(id);
  for (size_t i = 0; i < net.edges().size(); ++i) {
    const Edge& e = net.edges()[i];
    double c = i == edge ? e.conductance * factor : e.conductance;
    out.add_edge(net.node(e.a), net.node(e.b), c, e.tag);
  }
  return out;
}

}  // namespace

const char* row_mode_name(RowMode mode) {
  switch (mode) {
    case RowMode::abs:
      return "abs";
    case RowMode::rel:
      return "rel";
    case RowMode::upper:
      return "upper";
    case RowMode::lower:
      return "lower";
    case RowMode::marker:
      return "marker";
  }
  return "abs";
}

RowMode parse_row_mode(const std::string& name) {
  if (name == "abs") return RowMode::abs;
  if (name == "rel") return RowMode::rel;
  if (name == "upper") return RowMode::upper;
  if (name == "lower") return RowMode::lower;
  if (name == "marker") return RowMode::marker;
  throw Error(Errc::bad_config, "unknown row mode \"" + name + "\"");
}

ExperimentReport::ExperimentReport(std::string name, nlohmann::json parameters, double tolerance)
    : name_(std::move(name)), parameters_(std::move(parameters)), tolerance_(tolerance) {
  if (!(tolerance_ > 0.0)) throw Error(Errc::bad_config, "report tolerance must be positive");
}

void ExperimentReport::add(const std::string& quantity, double computed, double predicted,
                           RowMode mode, const std::string& note) {
  ReportRow row;
  row.quantity = quantity;
  row.computed = computed;
  row.predicted = predicted;
  row.mode = mode;
  row.note = note;
  switch (mode) {
    case RowMode::abs:
      row.residual = std::abs(computed - predicted);
      break;
    case RowMode::rel:
      row.residual = std::abs(computed - predicted) / std::abs(predicted);
      break;
    case RowMode::upper:
      row.residual = std::max(0.0, computed - predicted);
      break;
    case RowMode::lower:
      row.residual = std::max(0.0, predicted - computed);
      break;
    case RowMode::marker:
      row.residual = 0.0;
      break;
  }
  row.pass = row.residual <= tolerance_;
  rows_.push_back(std::move(row));
}

void ExperimentReport::add_marker(const std::string& quantity, const std::string& note) {
  ReportRow row;
  row.quantity = quantity;
  row.mode = RowMode::marker;
  row.note = note;
  rows_.push_back(std::move(row));
}

bool ExperimentReport::pass() const {
  return std::all_of(rows_.begin(), rows_.end(), [](const ReportRow& r) { return r.pass; });
}

std::string ExperimentReport::to_csv() const {
  std::string out;
  out += "# experiment=" + name_ + "\n";
  out += "# parameters=" + parameters_.dump() + "\n";
  out += "# tolerance=" + fmt(tolerance_) + "\n";
  out += std::string("# pass=") + (pass() ? "true" : "false") + "\n";
  out += "quantity,computed,predicted,residual,mode,pass,note\n";
  for (const ReportRow& r : rows_) {
    out += r.quantity + "," + fmt(r.computed) + "," + fmt(r.predicted) + "," + fmt(r.residual) +
           "," + row_mode_name(r.mode) + "," + (r.pass ? "true" : "false") + "," + r.note + "\n";
  }
  return out;
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& r : rows_) {
    rows.push_back({{"quantity", r.quantity},
                    {"computed", r.computed},
                    {"predicted", r.predicted},
                    {"residual", r.residual},
                    {"mode", row_mode_name(r.mode)},
                    {"pass", r.pass},
                    {"note", r.note}});
  }
  return {{"experiment", name_},
          {"parameters", parameters_},
          {"tolerance", tolerance_},
          {"pass", pass()},
          {"rows", rows}};
}

ExperimentReport ExperimentReport::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("experiment") || !j.contains("tolerance") ||
      !j.contains("rows") || !j.at("rows").is_array()) {
    throw Error(Errc::bad_config, "report must be an object with experiment, tolerance and rows");
  }
  ExperimentReport report(j.at("experiment").get<std::string>(),
                          j.value("parameters", nlohmann::json::object()),
                          j.at("tolerance").get<double>());
  for (const auto& rj : j.at("rows")) {
    ReportRow row;
    row.quantity = rj.at("quantity").get<std::string>();
    row.computed = rj.at("computed").get<double>();
    row.predicted = rj.at("predicted").get<double>();
    row.residual = rj.at("residual").get<double>();
    row.mode = parse_row_mode(rj.at("mode").get<std::string>());
    row.pass = rj.at("pass").get<bool>();
    row.note = rj.value("note", std::string());
    report.rows_.push_back(std::move(row));
  }
  return report;
}

bool operator==(const ExperimentReport& a, const ExperimentReport& b) {
  return a.name_ == b.name_ && a.parameters_ == b.parameters_ && a.tolerance_ == b.tolerance_ &&
         a.rows_ == b.rows_;
}

ExperimentReport exp_compat_chain(const MatchingSequence& seq, int m_max, double tol) {
  if (m_max < 1 || m_max > 5) {
    throw Error(Errc::bad_config, "compatibility chain runs for 1 <= m_max <= 5");
  }
  ExperimentReport report("compat_chain", {{"sequence", seq.to_json()}, {"m_max", m_max}}, tol);
  for (int m = 0; m < m_max; ++m) {
    report.add("trace_residual_m" + std::to_string(m), compatibility_residual(seq, m), 0.0,
               RowMode::abs);
  }
  return report;
}

ExperimentReport exp_sg_part(const MatchingSequence& seq, const std::array<double, 3>& boundary,
                             int m_max, double tol) {
  if (m_max < 1 || m_max > 6) throw Error(Errc::bad_config, "sg part runs for 1 <= m_max <= 6");
  ExperimentReport report(
      "sg_part",
      {{"sequence", seq.to_json()}, {"boundary", boundary}, {"m_max", m_max}}, tol);
  double q0 = triangle_energy(boundary);
  std::vector<DerivedScales> scales = derive_prefix(seq, m_max);
  for (int m = 0; m <= m_max; ++m) {
    double big_p = m == 0 ? 1.0 : scales[m - 1].big_p;
    DiscretizedFunction f = pullback_sg(sg_harmonic(boundary, m), m, 1);
    double computed = form_components(seq, m, f).total;
    double predicted = q0 / big_p;
    report.add("normalized_sg_energy_m" + std::to_string(m), computed, predicted,
               against(predicted));
  }
  LimitConstants lc = limit_constants(seq);
  if (lc.diverges) {
    report.add_marker("sg_limit", "SG part degenerates: sum rho_m diverges");
  } else {
    int terms = std::min(60, seq.available_terms());
    double big_p = derive_prefix(seq, terms).back().big_p;
    if (seq.declared_r_star()) {
      // The declared limit covers an unseen tail; the prefix only bounds it.
      report.add("sg_limit", q0 / big_p, q0 * lc.c_star, RowMode::upper,
                 "prefix product only bounds the declared limit");
    } else {
      report.add("sg_limit", q0 / big_p, q0 * lc.c_star, against(q0 * lc.c_star),
                 "partial product at " + std::to_string(terms) + " terms");
    }
  }
  return report;
}

ExperimentReport exp_decomposition(const MatchingSequence& seq, int m, double tol) {
  if (m < 1 || m > 6) throw Error(Errc::bad_config, "decomposition runs for 1 <= m <= 6");
  ExperimentReport report("decomposition", {{"sequence", seq.to_json()}, {"m", m}}, tol);
  LimitConstants lc = limit_constants(seq);
  std::vector<DerivedScales> scales = derive_prefix(seq, m);
  double gamma1 = scales[0].gamma;
  double eta1 = scales[0].eta;
  SegmentId seg{"", Bond{1, 2}};
  DiscretizedFunction tent = tent_on_segment(seg, m, 2);

  if (lc.diverges) {
    report.add_marker("sg_part", "SG part degenerates: sum rho_m diverges; testing the tent alone");
    double computed = form_components(seq, m, tent).total;
    report.add("line_energy_m" + std::to_string(m), computed, 4.0 / gamma1, RowMode::rel);
  } else {
    SgFunction h = sg_harmonic({1.0, 0.0, 0.0}, m);
    DiscretizedFunction u = sum(pullback_sg(h, m, 2), tent);
    FormComponents fc = form_components(seq, m, u);
    double big_p = scales[m - 1].big_p;
    report.add("energy_m" + std::to_string(m), fc.total, 2.0 / big_p + 4.0 / gamma1, RowMode::rel);
    report.add("sg_term", fc.q_sigma / scales[m - 1].delta, 2.0 / big_p, RowMode::rel);
    double line = 0.0;
    for (size_t k = 0; k < fc.d_line.size(); ++k) line += fc.d_line[k] / scales[k].gamma;
    report.add("line_term", line, 4.0 / gamma1, RowMode::rel);
    report.add("a_part", lc.c_star * sg_energy(h), 2.0 * lc.c_star, RowMode::rel,
               "a = 1/R_star times the gasket energy");
    int terms = std::min(40, seq.available_terms());
    double tail_p = derive_prefix(seq, terms).back().big_p;
    if (seq.declared_r_star()) {
      report.add("sg_limit", 2.0 / tail_p, 2.0 * lc.c_star, RowMode::upper,
                 "prefix product only bounds the declared limit");
    } else {
      report.add("sg_limit", 2.0 / tail_p, 2.0 * lc.c_star, RowMode::rel,
                 "partial product at " + std::to_string(terms) + " terms");
    }
  }
  // b * (1/eta_1) collapses to 1/gamma_1 for convergent and divergent alike.
  report.add("b_part", (1.0 / (1.0 - lc.r_star)) * (4.0 / eta1), 4.0 / gamma1, RowMode::rel,
             "b = 1/(1 - R_star) against the eta-weighted tent energy");
  return report;
}

ExperimentReport exp_projection(const MatchingSequence& seq, int terms, double tol) {
  if (terms < 1 || terms > 100) {
    throw Error(Errc::bad_config, "projection runs for 1 <= terms <= 100");
  }
  ExperimentReport report("projection", {{"sequence", seq.to_json()}, {"terms", terms}}, tol);
  LimitConstants lc = limit_constants(seq);
  MatchingSequence sigma = project(seq, terms);
  MatchingSequence sigma2 = project(sigma, terms);

  double idem = 0.0;
  for (int m = 1; m <= terms; ++m) idem = std::max(idem, std::abs(sigma2.rho(m) - sigma.rho(m)));
  report.add("idempotence", idem, 0.0, RowMode::abs);

  if (lc.diverges) {
    double fixed = 0.0;
    for (int m = 1; m <= terms; ++m) fixed = std::max(fixed, std::abs(sigma.rho(m) - seq.rho(m)));
    report.add("fixed_point", fixed, 0.0, RowMode::abs, "divergent sequences are fixed points");
  }

  int alpha_terms = std::min(60, seq.available_terms());
  std::vector<DerivedScales> deep = derive_prefix(seq, alpha_terms);
  double alpha_max = 0.0;
  double worst_drop = 0.0;
  for (int i = 0; i < alpha_terms; ++i) {
    alpha_max = std::max(alpha_max, deep[i].alpha);
    if (i + 1 < alpha_terms) worst_drop = std::max(worst_drop, deep[i].alpha - deep[i + 1].alpha);
  }
  report.add("alpha_below_rho0", alpha_max, lc.rho0, RowMode::upper);
  report.add("alpha_monotone", worst_drop, 0.0, RowMode::upper);

  if (seq.declared_r_star()) {
    // The declaration covers an unseen tail; the prefix product only bounds it.
    report.add("declared_limit_bound", lc.r_star, deep.back().big_p, RowMode::upper,
               "declared limit cannot exceed the prefix product");
  } else if (lc.diverges) {
    // Slowly divergent products need not reach 0 in any finite prefix; the
    // partial value can only bound rho_0 from below.
    double p = 1.0;
    for (int m = 1; m <= seq.available_terms() && m <= 10000; ++m) p *= 1.0 - seq.rho(m);
    report.add("rho0_bound", 1.0 - p, lc.rho0, RowMode::upper,
               "partial product lower-bounds rho0 on divergent input");
  } else {
    double p = 1.0;
    for (int m = 1; m <= seq.available_terms() && m <= 1000000; ++m) {
      double next = p * (1.0 - seq.rho(m));
      if (next == p) break;
      p = next;
    }
    report.add("rho0_two_routes", 1.0 - p, lc.rho0, against(lc.rho0),
               "direct product against the log-space limit");
  }

  std::vector<DerivedScales> original = derive_prefix(seq, terms);
  std::vector<DerivedScales> projected = derive_prefix(sigma, terms);
  for (int m = 1; m <= terms; ++m) {
    double predicted = lc.rho0 * projected[m - 1].gamma;
    report.add("gamma_identity_m" + std::to_string(m), original[m - 1].gamma, predicted,
               against(predicted));
  }
  return report;
}

ExperimentReport exp_diameter(const MatchingSequence& seq, int m_max, double tol) {
  if (m_max < 0 || m_max > 4) throw Error(Errc::bad_config, "diameter runs for 0 <= m_max <= 4");
  ExperimentReport report("diameter", {{"sequence", seq.to_json()}, {"m_max", m_max}}, tol);
  NodeId p1 = NodeId::vertex(Address{"", 1});
  NodeId p2 = NodeId::vertex(Address{"", 2});
  for (int m = 0; m <= m_max; ++m) {
    ResistorNetwork net = build_ssg(seq, m, 1);
    double diam = resistance_diameter(net);
    report.add("diameter_m" + std::to_string(m), diam, 4.0, RowMode::upper);
    if (m == 0) {
      report.add("triangle_diameter", diam, 2.0 / 3.0, RowMode::rel);
    }
    report.add("corner_resistance_m" + std::to_string(m), effective_resistance(net, p1, p2),
               2.0 / 3.0, RowMode::rel);
  }
  return report;
}

ExperimentReport exp_symmetry(const MatchingSequence& seq, int m, std::uint64_t seed, double tol) {
  if (m < 1 || m > 4) throw Error(Errc::bad_config, "symmetry runs for 1 <= m <= 4");
  const int subdiv = 2;
  ExperimentReport report(
      "symmetry",
      {{"sequence", seq.to_json()}, {"m", m}, {"seed", seed}, {"subdiv", subdiv}}, tol);
  ResistorNetwork net = build_ssg(seq, m, subdiv);
  DiscretizedFunction f = random_function(seed, m, subdiv);
  double base = energy(net, f);
  for (const Symmetry& s : Symmetry::all()) {
    report.add("energy_" + s.name(), energy(net, compose_symmetry(f, s)), base, against(base));
  }
  // Negative control: break one edge weight; the symmetries must notice.
  ResistorNetwork corrupted = with_scaled_edge(net, 0, 1.5);
  double worst = 0.0;
  double corrupted_base = energy(corrupted, f);
  for (const Symmetry& s : Symmetry::all()) {
    if (s == Symmetry::identity()) continue;
    worst = std::max(worst,
                     std::abs(energy(corrupted, compose_symmetry(f, s)) - corrupted_base));
  }
  report.add("corrupted_control", worst, 1e-6, RowMode::lower,
             "scaled one edge by 1.5; invariance must break");
  return report;
}

}  // namespace ssg
