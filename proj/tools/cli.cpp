#include "cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "ssg/engine.hpp"
#include "ssg/experiments.hpp"
#include "ssg/function.hpp"
#include "ssg/matching.hpp"
#include "ssg/network.hpp"

namespace ssg::cli {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

struct Options {
  std::string seq_json;
  int net_m = 2;
  int subdiv = 1;
  int mmax = 4;
  int derive_m = 8;
  int decomp_m = 6;
  int sym_m = 2;
  int terms = 30;
  std::uint64_t seed = 1;
  double tol = 0.0;
  std::string from = ":1";
  std::string to = ":2";
  std::string out;
  std::string format = "csv";
};

MatchingSequence sequence(const Options& o) { return MatchingSequence::parse(o.seq_json); }

// The only file the tool ever writes is the --out path.
void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw Error(Errc::bad_config, "cannot open --out path " + o.out);
  file << text;
}

std::string as_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

nlohmann::json network_json(const ResistorNetwork& net) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const NodeId& id : net.nodes()) nodes.push_back(id.str());
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : net.edges()) {
    edges.push_back({{"u", net.node(e.a).str()},
                     {"v", net.node(e.b).str()},
                     {"conductance", e.conductance},
                     {"tag", e.tag.str()}});
  }
  return {{"nodes", nodes}, {"edges", edges}};
}

nlohmann::json trace_json(const TraceForm& form) {
  nlohmann::json boundary = nlohmann::json::array();
  for (const NodeId& id : form.boundary()) boundary.push_back(id.str());
  nlohmann::json matrix = nlohmann::json::array();
  for (int i = 0; i < form.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < form.size(); ++j) row.push_back(form.matrix()(i, j));
    matrix.push_back(row);
  }
  return {{"boundary", boundary}, {"matrix", matrix}};
}

// A bare scalar in csv mode, a labeled object in json mode.
void emit_scalar(const Options& o, const std::string& label, double value,
                 nlohmann::json extra = nlohmann::json::object()) {
  if (o.format == "csv") {
    emit(o, fmt(value) + "\n");
    return;
  }
  extra[label] = value;
  emit(o, as_text(extra));
}

int emit_report(const Options& o, const ExperimentReport& report) {
  emit(o, o.format == "csv" ? report.to_csv() : as_text(report.to_json()));
  return report.pass() ? 0 : 1;
}

std::vector<NodeId> corner_boundary() {
  return {NodeId::vertex(Address{"", 1}), NodeId::vertex(Address{"", 2}),
          NodeId::vertex(Address{"", 3})};
}

void add_output_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out, "write the result to this path instead of stdout");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

CLI::Option* add_seq_flag(CLI::App* cmd, Options& o) {
  return cmd->add_option("--seq", o.seq_json, "matching sequence as JSON")->required();
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"resistance forms on the stretched Sierpinski gasket"};
  app.require_subcommand(1);
  Options o;
  int code = 0;

  CLI::App* net = app.add_subcommand("net", "build and analyze finite networks");
  net->require_subcommand(1);

  CLI::App* net_build = net->add_subcommand("build", "emit the level-m network edge list");
  add_seq_flag(net_build, o);
  net_build->add_option("--m", o.net_m, "level")->capture_default_str();
  net_build->add_option("--n", o.subdiv, "sub-edges per segment")->capture_default_str();
  add_output_flags(net_build, o);
  net_build->callback([&] {
    ResistorNetwork network = build_ssg(sequence(o), o.net_m, o.subdiv);
    emit(o, o.format == "csv" ? to_csv(network) : as_text(network_json(network)));
  });

  CLI::App* net_trace = net->add_subcommand("trace", "trace the network onto the three corners");
  add_seq_flag(net_trace, o);
  net_trace->add_option("--m", o.net_m, "level")->capture_default_str();
  net_trace->add_option("--n", o.subdiv, "sub-edges per segment")->capture_default_str();
  add_output_flags(net_trace, o);
  net_trace->callback([&] {
    TraceForm form = trace(build_ssg(sequence(o), o.net_m, o.subdiv), corner_boundary());
    emit(o, o.format == "csv" ? form.to_csv() : as_text(trace_json(form)));
  });

  CLI::App* net_res = net->add_subcommand("resistance", "effective resistance between two nodes");
  add_seq_flag(net_res, o);
  net_res->add_option("--m", o.net_m, "level")->capture_default_str();
  net_res->add_option("--n", o.subdiv, "sub-edges per segment")->capture_default_str();
  net_res->add_option("--from", o.from, "vertex address")->capture_default_str();
  net_res->add_option("--to", o.to, "vertex address")->capture_default_str();
  add_output_flags(net_res, o);
  net_res->callback([&] {
    ResistorNetwork network = build_ssg(sequence(o), o.net_m, o.subdiv);
    double value = effective_resistance(network, NodeId::vertex(Address::parse(o.from)),
                                        NodeId::vertex(Address::parse(o.to)));
    emit_scalar(o, "resistance", value, {{"from", o.from}, {"to", o.to}});
  });

  CLI::App* net_diam = net->add_subcommand("diameter", "resistance diameter of the network");
  add_seq_flag(net_diam, o);
  net_diam->add_option("--m", o.net_m, "level")->capture_default_str();
  net_diam->add_option("--n", o.subdiv, "sub-edges per segment")->capture_default_str();
  add_output_flags(net_diam, o);
  net_diam->callback([&] {
    double value = resistance_diameter(build_ssg(sequence(o), o.net_m, o.subdiv));
    emit_scalar(o, "diameter", value);
  });

  CLI::App* seq = app.add_subcommand("seq", "scalar matching-pair calculus");
  seq->require_subcommand(1);

  CLI::App* seq_derive = seq->add_subcommand("derive", "per-level derived scales");
  add_seq_flag(seq_derive, o);
  seq_derive->add_option("--m", o.derive_m, "number of levels")->capture_default_str();
  add_output_flags(seq_derive, o);
  seq_derive->callback([&] {
    std::vector<DerivedScales> scales = derive_prefix(sequence(o), o.derive_m);
    if (o.format == "csv") {
      std::string text = "m,r,rho,delta,gamma,P,eta\n";
      for (const DerivedScales& s : scales) {
        text += std::to_string(s.m) + "," + fmt(s.r) + "," + fmt(s.rho) + "," + fmt(s.delta) +
                "," + fmt(s.gamma) + "," + fmt(s.big_p) + "," + fmt(s.eta) + "\n";
      }
      emit(o, text);
      return;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const DerivedScales& s : scales) {
      rows.push_back({{"m", s.m},
                      {"r", s.r},
                      {"rho", s.rho},
                      {"delta", s.delta},
                      {"gamma", s.gamma},
                      {"P", s.big_p},
                      {"eta", s.eta}});
    }
    emit(o, as_text(rows));
  });

  CLI::App* seq_project = seq->add_subcommand("project", "project onto a line-only sequence");
  add_seq_flag(seq_project, o);
  seq_project->add_option("--m", o.terms, "number of terms")->capture_default_str();
  add_output_flags(seq_project, o);
  seq_project->callback([&] {
    MatchingSequence sigma = project(sequence(o), o.terms);
    if (o.format == "csv") {
      std::string text = "m,sigma\n";
      for (int m = 1; m <= o.terms; ++m) {
        text += std::to_string(m) + "," + fmt(sigma.rho(m)) + "\n";
      }
      emit(o, text);
      return;
    }
    emit(o, as_text(sigma.to_json()));
  });

  CLI::App* exp = app.add_subcommand("exp", "verification experiments");
  exp->require_subcommand(1);

  CLI::App* exp_compat = exp->add_subcommand("compat", "trace consistency down the chain");
  add_seq_flag(exp_compat, o);
  exp_compat->add_option("--mmax", o.mmax, "checks levels m = 0..mmax-1")->capture_default_str();
  CLI::Option* compat_tol = exp_compat->add_option("--tol", o.tol, "pass tolerance");
  add_output_flags(exp_compat, o);
  exp_compat->callback([&] {
    MatchingSequence s = sequence(o);
    code = emit_report(o, compat_tol->count() ? exp_compat_chain(s, o.mmax, o.tol)
                                              : exp_compat_chain(s, o.mmax));
  });

  CLI::App* exp_sgpart = exp->add_subcommand("sgpart", "renormalized gasket energy per level");
  add_seq_flag(exp_sgpart, o);
  exp_sgpart->add_option("--mmax", o.mmax, "levels m = 0..mmax")->capture_default_str();
  CLI::Option* sgpart_tol = exp_sgpart->add_option("--tol", o.tol, "pass tolerance");
  add_output_flags(exp_sgpart, o);
  exp_sgpart->callback([&] {
    MatchingSequence s = sequence(o);
    std::array<double, 3> boundary{1.0, 0.0, 0.0};
    code = emit_report(o, sgpart_tol->count() ? exp_sg_part(s, boundary, o.mmax, o.tol)
                                              : exp_sg_part(s, boundary, o.mmax));
  });

  CLI::App* exp_decomp = exp->add_subcommand("decomp", "sg-part plus line-part decomposition");
  add_seq_flag(exp_decomp, o);
  exp_decomp->add_option("--m", o.decomp_m, "level")->capture_default_str();
  CLI::Option* decomp_tol = exp_decomp->add_option("--tol", o.tol, "pass tolerance");
  add_output_flags(exp_decomp, o);
  exp_decomp->callback([&] {
    MatchingSequence s = sequence(o);
    code = emit_report(o, decomp_tol->count() ? exp_decomposition(s, o.decomp_m, o.tol)
                                              : exp_decomposition(s, o.decomp_m));
  });

  CLI::App* exp_proj = exp->add_subcommand("projection", "projection calculus identities");
  add_seq_flag(exp_proj, o);
  exp_proj->add_option("--m", o.terms, "number of terms")->capture_default_str();
  CLI::Option* proj_tol = exp_proj->add_option("--tol", o.tol, "pass tolerance");
  add_output_flags(exp_proj, o);
  exp_proj->callback([&] {
    MatchingSequence s = sequence(o);
    code = emit_report(o, proj_tol->count() ? exp_projection(s, o.terms, o.tol)
                                            : exp_projection(s, o.terms));
  });

  CLI::App* exp_diam = exp->add_subcommand("diameter", "diameter bound and corner invariance");
  add_seq_flag(exp_diam, o);
  exp_diam->add_option("--mmax", o.mmax, "levels m = 0..mmax")->capture_default_str();
  CLI::Option* diam_tol = exp_diam->add_option("--tol", o.tol, "pass tolerance");
  add_output_flags(exp_diam, o);
  exp_diam->callback([&] {
    MatchingSequence s = sequence(o);
    code = emit_report(o, diam_tol->count() ? exp_diameter(s, o.mmax, o.tol)
                                            : exp_diameter(s, o.mmax));
  });

  CLI::App* exp_sym = exp->add_subcommand("symmetry", "energy invariance under the six isometries");
  add_seq_flag(exp_sym, o);
  exp_sym->add_option("--m", o.sym_m, "level")->capture_default_str();
  exp_sym->add_option("--seed", o.seed, "random function seed")->capture_default_str();
  CLI::Option* sym_tol = exp_sym->add_option("--tol", o.tol, "pass tolerance");
  add_output_flags(exp_sym, o);
  exp_sym->callback([&] {
    MatchingSequence s = sequence(o);
    code = emit_report(o, sym_tol->count() ? exp_symmetry(s, o.sym_m, o.seed, o.tol)
                                           : exp_symmetry(s, o.sym_m, o.seed));
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return code;
}

int run(int argc, const char* const* argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace ssg::cli
