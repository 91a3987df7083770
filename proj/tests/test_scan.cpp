#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "dnoon/metrology.hpp"
#include "dnoon/scan.hpp"

using namespace dnoon;

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    if (first) {
      while (std::getline(cells, cell, ',')) t.header.push_back(cell);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    t.rows.push_back(std::move(row));
  }
  return t;
}

ScanSpec small_fig1() {
  ScanSpec s;
  s.mode = DampingMode::dephasing_only;
  s.n_values = {3};
  s.min = 0.0;
  s.max = 0.1;
  s.steps = 60;
  return s;
}

}  // namespace

TEST_SUITE("scan") {

TEST_CASE("figure1: header, undamped anchor row, column ordering") {
  ScanSpec spec;
  spec.n_values = {2, 3, 4};
  spec.steps = 40;
  const Table t = parse_csv(render_figure1(spec));
  REQUIRE(t.header.size() == 7);
  CHECK(t.header[0] == "gamma_t");
  CHECK(t.header[1] == "n");
  CHECK(t.header[2] == "res_phi_1");
  CHECK(t.header[3] == "res_phi_0.75");
  CHECK(t.header[4] == "res_phi_0.5");
  CHECK(t.header[5] == "res_phi_0.25");
  CHECK(t.header[6] == "res_distill");
  REQUIRE(t.rows.size() == 3 * 40);

  for (const auto& row : t.rows) {
    if (row[0] == 0.0) {
      // undamped: every resolution equals N
      for (size_t c = 2; c < row.size(); ++c) {
        CHECK(row[c] == doctest::Approx(row[1]).epsilon(1e-12));
      }
    }
    // resolution decreases as phi moves away from pi/(2N)
    CHECK(row[2] >= row[3] - 1e-12);
    CHECK(row[3] >= row[4] - 1e-12);
    CHECK(row[4] >= row[5] - 1e-12);
  }
}

TEST_CASE("figure1: distillation overtakes the far phase but not the magic phase") {
  ScanSpec spec;
  spec.n_values = {3};
  spec.steps = 200;
  const Table t = parse_csv(render_figure1(spec));
  bool found = false;
  for (const auto& row : t.rows) {
    const double res_phi_1 = row[2];
    const double res_phi_q = row[5];
    const double res_d = row[6];
    if (res_d > res_phi_q && res_phi_1 > res_d) {
      found = true;
      break;
    }
  }
  CHECK(found);
}

TEST_CASE("figure2: header, undamped anchor, bound ordering") {
  ScanSpec spec;
  spec.mode = DampingMode::amplitude_only;
  spec.n_values = {2, 3, 4};
  spec.min = 0.0;
  spec.max = 1.0;
  spec.steps = 50;
  const Table t = parse_csv(render_figure2(spec));
  REQUIRE(t.header.size() == 5);
  CHECK(t.header[0] == "Gamma_t");
  CHECK(t.header[2] == "res_best");
  CHECK(t.header[3] == "res_dl");
  CHECK(t.header[4] == "res_du");
  for (const auto& row : t.rows) {
    if (row[0] == 0.0) {
      CHECK(row[2] == doctest::Approx(row[1]).epsilon(1e-12));
      CHECK(row[3] == doctest::Approx(row[1]).epsilon(1e-12));
      CHECK(row[4] == doctest::Approx(row[1]).epsilon(1e-12));
    }
    // E_r >= I_c makes the E_r resolution the larger of the two bounds
    CHECK(row[3] >= row[4] - 1e-12);
  }
}

TEST_CASE("rendered values recompute from their row parameters") {
  const Table t = parse_csv(render_figure1(small_fig1()));
  for (size_t r = 0; r < t.rows.size(); r += 7) {
    const auto& row = t.rows[r];
    const double gbar_t = row[0];
    const int n = static_cast<int>(row[1]);
    const DampingParams p = DampingParams::from_products(n, 0, 0, gbar_t);
    const double res1 = 1.0 / phase_deviation(p, M_PI / (2.0 * n));
    CHECK(row[2] == doctest::Approx(res1).epsilon(5e-11));
    const double e_d = distillable_entanglement_dephasing(n, gbar_t);
    const double res_d = 1.0 / distillation_phase_deviation(n, e_d);
    CHECK(row[6] == doctest::Approx(res_d).epsilon(5e-11));
  }
}

TEST_CASE("rendering is deterministic") {
  const std::string a = render_figure1(small_fig1());
  const std::string b = render_figure1(small_fig1());
  CHECK(a == b);

  ReportParams rp;
  rp.n_photons = 2;
  rp.big_gamma1_t = 0.1;
  rp.big_gamma2_t = 0.3;
  rp.gamma_bar_t = 0.1;
  rp.starts = 12;
  rp.seed = 5;
  CHECK(render_report(rp) == render_report(rp));
}

TEST_CASE("json output carries the same numbers as csv") {
  ScanSpec spec = small_fig1();
  spec.steps = 5;
  spec.format = OutputFormat::json;
  const std::string json = render_figure1(spec);
  CHECK(json.find("\"gamma_t\": 0.00000000000e+00") != std::string::npos);
  CHECK(json.find("\"res_distill\": 3.00000000000e+00") != std::string::npos);
}

TEST_CASE("scan validation rejects malformed specs") {
  ScanSpec s = small_fig1();
  s.steps = 1;
  CHECK_THROWS_AS(render_figure1(s), std::invalid_argument);
  s = small_fig1();
  s.min = 0.5;
  s.max = 0.1;
  CHECK_THROWS_AS(render_figure1(s), std::invalid_argument);
  s = small_fig1();
  s.phi_fracs = {0.0};
  CHECK_THROWS_AS(render_figure1(s), std::invalid_argument);
  s = small_fig1();
  s.phi_fracs = {1.5};
  CHECK_THROWS_AS(render_figure1(s), std::invalid_argument);
  // wrong mode for the renderer
  s = small_fig1();
  CHECK_THROWS_AS(render_figure2(s), std::invalid_argument);
  ScanSpec amp;
  amp.mode = DampingMode::amplitude_only;
  CHECK_THROWS_AS(render_figure1(amp), std::invalid_argument);
  // unwritable output path
  ScanSpec io = small_fig1();
  io.steps = 2;
  io.out_path = "/nonexistent-dir/deep/file.csv";
  CHECK_THROWS_AS(run_figure1(io), IoError);
}

TEST_CASE("report: symmetric closed form vs asymmetric numeric route") {
  ReportParams sym;
  sym.n_photons = 2;
  const std::string undamped = render_report(sym);
  CHECK(undamped.find("\"e_r\": 1.00000000000e+00") != std::string::npos);
  CHECK(undamped.find("\"i_c\": 1.00000000000e+00") != std::string::npos);
  CHECK(undamped.find("\"ppt_min\": -5.00000000000e-01") != std::string::npos);
  CHECK(undamped.find("\"best_res\": 2.00000000000e+00") != std::string::npos);
  CHECK(undamped.find("\"numeric\": false") != std::string::npos);
  CHECK(undamped.find("\"e_d\": 1.00000000000e+00") != std::string::npos);

  ReportParams amp = sym;
  amp.big_gamma1_t = amp.big_gamma2_t = 0.1;
  const std::string damped = render_report(amp);
  CHECK(damped.find("\"e_r\": 7.64713907283e-01") != std::string::npos);
  CHECK(damped.find("\"e_d\"") == std::string::npos);

  ReportParams asym = sym;
  asym.big_gamma1_t = 0.1;
  asym.big_gamma2_t = 0.3;
  asym.starts = 16;
  const std::string numeric = render_report(asym);
  CHECK(numeric.find("\"numeric\": true") != std::string::npos);
  CHECK(numeric.find("\"certificate\"") != std::string::npos);
  CHECK(numeric.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("verify: pass, trivial pass, and the perturbed negative control") {
  VerifyParams vp;
  vp.n_photons = 2;
  vp.big_gamma1_t = vp.big_gamma2_t = 0.1;
  vp.starts = 32;
  const auto ok = run_verify(vp);
  CHECK(ok.certificate.passed);
  CHECK(ok.text.find("\"passed\": true") != std::string::npos);

  VerifyParams fresh;
  fresh.n_photons = 2;
  fresh.starts = 16;
  CHECK(run_verify(fresh).certificate.passed);

  VerifyParams bad = vp;
  bad.perturb_d_n0 = 0.05;
  const auto rejected = run_verify(bad);
  CHECK_FALSE(rejected.certificate.passed);
  CHECK(rejected.certificate.max_product_overlap > 1.0 + kCertSlack);
}

}  // TEST_SUITE
