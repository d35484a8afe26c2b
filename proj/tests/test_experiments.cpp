// Experiment reports: residual modes, deterministic serialization, JSON
// round trips, and the six verification procedures. The load-bearing facts:
// reports are bit-identical across reruns, from_json(to_json(r)) == r with
// rows reconstructed verbatim, and every experiment passes on the built-in
// matching families while negative controls keep the residuals honest.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ssg/experiments.hpp"
#include "ssg/function.hpp"
#include "ssg/matching.hpp"

using namespace ssg;

namespace {

const ReportRow& find_row(const ExperimentReport& report, const std::string& quantity) {
  for (const ReportRow& r : report.rows()) {
    if (r.quantity == quantity) return r;
  }
  FAIL("missing row ", quantity);
  return report.rows().front();
}

bool has_row(const ExperimentReport& report, const std::string& quantity) {
  for (const ReportRow& r : report.rows()) {
    if (r.quantity == quantity) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("row mode names round-trip and reject junk") {
  for (RowMode mode : {RowMode::abs, RowMode::rel, RowMode::upper, RowMode::lower,
                       RowMode::marker}) {
    CHECK(parse_row_mode(row_mode_name(mode)) == mode);
  }
  CHECK_THROWS_AS(parse_row_mode("absolute"), Error);
  CHECK_THROWS_AS(parse_row_mode(""), Error);
}

TEST_CASE("report rows judge residuals per mode") {
  ExperimentReport report("demo", {{"k", 1}}, 0.5);
  report.add("abs_pass", 1.0, 1.25, RowMode::abs);
  report.add("abs_fail", 1.0, 2.0, RowMode::abs);
  report.add("rel_pass", 110.0, 100.0, RowMode::rel);
  report.add("upper_pass", 1.0, 4.0, RowMode::upper);
  report.add("upper_fail", 5.0, 4.0, RowMode::upper);
  report.add("lower_pass", 5.0, 4.0, RowMode::lower);
  report.add("lower_fail", 1.0, 4.0, RowMode::lower);
  report.add_marker("note_row", "informational");

  CHECK(find_row(report, "abs_pass").residual == 0.25);
  CHECK(find_row(report, "abs_pass").pass);
  CHECK(find_row(report, "abs_fail").residual == 1.0);
  CHECK_FALSE(find_row(report, "abs_fail").pass);
  CHECK(find_row(report, "rel_pass").residual == doctest::Approx(0.1));
  CHECK(find_row(report, "rel_pass").pass);
  CHECK(find_row(report, "upper_pass").residual == 0.0);
  CHECK(find_row(report, "upper_fail").residual == 1.0);
  CHECK_FALSE(find_row(report, "upper_fail").pass);
  CHECK(find_row(report, "lower_pass").residual == 0.0);
  CHECK(find_row(report, "lower_fail").residual == 3.0);
  CHECK_FALSE(find_row(report, "lower_fail").pass);
  CHECK(find_row(report, "note_row").pass);
  CHECK(find_row(report, "note_row").mode == RowMode::marker);
  CHECK_FALSE(report.pass());

  CHECK_THROWS_AS(ExperimentReport("bad", {}, 0.0), Error);
  CHECK_THROWS_AS(ExperimentReport("bad", {}, -1.0), Error);
}

TEST_CASE("csv layout is exact and stable") {
  ExperimentReport report("demo", {{"k", 1}}, 0.5);
  report.add("x", 1.0, 2.0, RowMode::abs, "note");
  report.add_marker("note_row", "hello");
  CHECK(report.to_csv() ==
        "# experiment=demo\n"
        "# parameters={\"k\":1}\n"
        "# tolerance=0.5\n"
        "# pass=false\n"
        "quantity,computed,predicted,residual,mode,pass,note\n"
        "x,1,2,1,abs,false,note\n"
        "note_row,0,0,0,marker,true,hello\n");
}

TEST_CASE("json round-trip reconstructs reports verbatim") {
  ExperimentReport report("demo", {{"k", 1}, {"label", "x"}}, 0.5);
  report.add("x", 1.0, 2.0, RowMode::abs, "note");
  report.add("y", 0.1, 0.1000000001, RowMode::rel);
  report.add_marker("note_row", "hello");
  ExperimentReport back = ExperimentReport::from_json(report.to_json());
  CHECK(back == report);
  CHECK(back.to_csv() == report.to_csv());

  // A failing report survives the trip with its verdict intact.
  ExperimentReport failing = exp_compat_chain(MatchingSequence::geometric(0.5, 0.5), 2, 1e-30);
  CHECK_FALSE(failing.pass());
  CHECK(ExperimentReport::from_json(failing.to_json()) == failing);

  CHECK_THROWS_AS(ExperimentReport::from_json(nlohmann::json::array()), Error);
  CHECK_THROWS_AS(ExperimentReport::from_json({{"experiment", "x"}}), Error);
  nlohmann::json bad_mode = report.to_json();
  bad_mode["rows"][0]["mode"] = "sideways";
  CHECK_THROWS_AS(ExperimentReport::from_json(bad_mode), Error);
}

TEST_CASE("compatibility chain passes for the built-in families") {
  for (const MatchingSequence& seq :
       {MatchingSequence::constant(0.25), MatchingSequence::geometric(0.5, 0.5),
        MatchingSequence::harmonic(0.5)}) {
    ExperimentReport report = exp_compat_chain(seq, 3);
    CHECK(report.pass());
    CHECK(report.rows().size() == 3);
    CHECK(report.rows()[0].quantity == "trace_residual_m0");
    for (const ReportRow& r : report.rows()) CHECK(r.residual < 1e-9);
  }
  CHECK_THROWS_AS(exp_compat_chain(MatchingSequence::constant(0.25), 0), Error);
  CHECK_THROWS_AS(exp_compat_chain(MatchingSequence::constant(0.25), 6), Error);
}

TEST_CASE("experiments are deterministic") {
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  CHECK(exp_compat_chain(seq, 2).to_csv() == exp_compat_chain(seq, 2).to_csv());
  CHECK(exp_symmetry(seq, 2, 99).to_csv() == exp_symmetry(seq, 2, 99).to_csv());
  CHECK(exp_projection(seq, 20).to_csv() == exp_projection(seq, 20).to_csv());
}

TEST_CASE("sg part matches the renormalized prediction level by level") {
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  ExperimentReport report = exp_sg_part(seq, {1.0, 0.0, 0.0}, 3);
  CHECK(report.pass());
  // P_3 = (1/2)(3/4)(7/8) = 21/64, so the level-3 value is 128/21.
  const ReportRow& m3 = find_row(report, "normalized_sg_energy_m3");
  CHECK(m3.predicted == doctest::Approx(128.0 / 21.0).epsilon(1e-14));
  CHECK(m3.computed == doctest::Approx(128.0 / 21.0).epsilon(1e-10));
  CHECK(find_row(report, "normalized_sg_energy_m0").predicted == 2.0);
  const ReportRow& limit = find_row(report, "sg_limit");
  CHECK(limit.mode == RowMode::rel);
  CHECK(limit.predicted == doctest::Approx(6.925493).epsilon(1e-6));
  CHECK(limit.pass);
}

TEST_CASE("sg part degenerates on divergent sequences") {
  ExperimentReport report = exp_sg_part(MatchingSequence::constant(0.25), {1.0, 0.0, 0.0}, 4);
  CHECK(report.pass());
  CHECK(find_row(report, "sg_limit").mode == RowMode::marker);
  // The normalized energy grows by 1/(1 - rho) = 4/3 per level.
  for (int m = 2; m <= 4; ++m) {
    double prev = find_row(report, "normalized_sg_energy_m" + std::to_string(m - 1)).computed;
    double cur = find_row(report, "normalized_sg_energy_m" + std::to_string(m)).computed;
    CHECK(cur / prev > 1.1);
  }
  CHECK_THROWS_AS(exp_sg_part(MatchingSequence::constant(0.25), {1.0, 0.0, 0.0}, 7), Error);
}

TEST_CASE("sg part bounds the declared limit instead of equating it") {
  MatchingSequence declared =
      MatchingSequence::explicit_list({0.5, 0.25}, std::nullopt, 0.3);
  ExperimentReport report = exp_sg_part(declared, {1.0, 0.0, 0.0}, 2);
  CHECK(report.pass());
  CHECK(find_row(report, "sg_limit").mode == RowMode::upper);
}

TEST_CASE("decomposition splits energy into sg and line terms") {
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  ExperimentReport report = exp_decomposition(seq, 5);
  CHECK(report.pass());
  double big_p5 = derive_prefix(seq, 5).back().big_p;
  CHECK(find_row(report, "energy_m5").predicted ==
        doctest::Approx(2.0 / big_p5 + 8.0).epsilon(1e-14));
  CHECK(find_row(report, "line_term").predicted == 8.0);
  CHECK(find_row(report, "sg_term").pass);
  CHECK(find_row(report, "a_part").pass);
  CHECK(find_row(report, "b_part").residual <= 1e-12);
  CHECK(find_row(report, "sg_limit").predicted == doctest::Approx(6.925493).epsilon(1e-6));
}

TEST_CASE("decomposition tests the tent alone when the sg part degenerates") {
  ExperimentReport report = exp_decomposition(MatchingSequence::constant(0.25), 3);
  CHECK(report.pass());
  CHECK(find_row(report, "sg_part").mode == RowMode::marker);
  // gamma_1 = rho_1 = 1/4, so the hat function carries energy 16.
  const ReportRow& line = find_row(report, "line_energy_m3");
  CHECK(line.predicted == 16.0);
  CHECK(line.computed == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(find_row(report, "b_part").residual <= 1e-12);
  CHECK_FALSE(has_row(report, "energy_m3"));
  CHECK_THROWS_AS(exp_decomposition(MatchingSequence::constant(0.25), 0), Error);
  CHECK_THROWS_AS(exp_decomposition(MatchingSequence::constant(0.25), 7), Error);
}

TEST_CASE("projection rows: idempotence, two routes, scale identity") {
  MatchingSequence seq = MatchingSequence::geometric(0.5, 0.5);
  ExperimentReport report = exp_projection(seq, 30);
  CHECK(report.pass());
  CHECK(find_row(report, "idempotence").residual == 0.0);
  CHECK_FALSE(has_row(report, "fixed_point"));
  CHECK(find_row(report, "alpha_below_rho0").pass);
  CHECK(find_row(report, "alpha_monotone").pass);
  CHECK(find_row(report, "rho0_two_routes").residual <= 1e-12);
  for (int m = 1; m <= 30; ++m) {
    CHECK(find_row(report, "gamma_identity_m" + std::to_string(m)).residual <= 1e-12);
  }
}

TEST_CASE("projection fixes divergent sequences exactly") {
  ExperimentReport report = exp_projection(MatchingSequence::constant(0.25), 20);
  CHECK(report.pass());
  CHECK(find_row(report, "fixed_point").residual == 0.0);
  CHECK(find_row(report, "rho0_bound").mode == RowMode::upper);
  // rho0 = 1, so the scale identity is bitwise.
  CHECK(find_row(report, "gamma_identity_m20").residual == 0.0);
  CHECK_THROWS_AS(exp_projection(MatchingSequence::constant(0.25), 0), Error);
  CHECK_THROWS_AS(exp_projection(MatchingSequence::constant(0.25), 101), Error);
}

TEST_CASE("projection respects a declared limit as a bound") {
  MatchingSequence declared =
      MatchingSequence::explicit_list({0.5, 0.25}, std::nullopt, 0.3);
  ExperimentReport report = exp_projection(declared, 2);
  CHECK(report.pass());
  CHECK(find_row(report, "declared_limit_bound").mode == RowMode::upper);
  CHECK(find_row(report, "gamma_identity_m2").pass);
}

TEST_CASE("diameter stays bounded and corner resistance is invariant") {
  ExperimentReport report = exp_diameter(MatchingSequence::geometric(0.5, 0.5), 2);
  CHECK(report.pass());
  CHECK(find_row(report, "triangle_diameter").computed == doctest::Approx(2.0 / 3.0));
  for (int m = 0; m <= 2; ++m) {
    CHECK(find_row(report, "diameter_m" + std::to_string(m)).computed <= 4.0);
    CHECK(find_row(report, "corner_resistance_m" + std::to_string(m)).residual <= 1e-10);
  }
  CHECK_THROWS_AS(exp_diameter(MatchingSequence::constant(0.25), 5), Error);
  CHECK_THROWS_AS(exp_diameter(MatchingSequence::constant(0.25), -1), Error);
}

TEST_CASE("symmetry invariance holds and the corrupted control breaks it") {
  MatchingSequence seq = MatchingSequence::harmonic(0.5);
  ExperimentReport report = exp_symmetry(seq, 2, 7);
  CHECK(report.pass());
  for (const Symmetry& s : Symmetry::all()) {
    CHECK(find_row(report, "energy_" + s.name()).pass);
  }
  const ReportRow& control = find_row(report, "corrupted_control");
  CHECK(control.mode == RowMode::lower);
  CHECK(control.computed > 1e-6);
  CHECK(control.pass);
  CHECK_THROWS_AS(exp_symmetry(seq, 0, 7), Error);
  CHECK_THROWS_AS(exp_symmetry(seq, 5, 7), Error);
}
