#include "dnoon/scan.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "dnoon/metrology.hpp"

namespace dnoon {
namespace {

double grid_point(const ScanSpec& spec, int i) {
  return spec.min + (spec.max - spec.min) * i / (spec.steps - 1);
}

// Short label for a phi fraction: 0.75 -> "0.75", 1 -> "1".
std::string frac_label(double f) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", f);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed: " + path);
}

// Minimal JSON writer; doubles go through format_number so records are
// byte-stable across runs.
class JsonWriter {
 public:
  void open() { buf_ += "{\n"; depth_ = 1; first_ = true; }
  void close() { buf_ += "\n}\n"; }

  void key(const std::string& k) {
    if (!first_) buf_ += ",\n";
    first_ = false;
    buf_.append(static_cast<size_t>(2 * depth_), ' ');
    buf_ += "\"" + k + "\": ";
  }
  void value(double v) { buf_ += format_number(v); }
  void value(int v) { buf_ += std::to_string(v); }
  void value(bool v) { buf_ += v ? "true" : "false"; }
  void value(const std::string& s) { buf_ += "\"" + s + "\""; }
  void value(const std::vector<double>& xs) {
    buf_ += "[";
    for (size_t i = 0; i < xs.size(); ++i) {
      if (i) buf_ += ", ";
      buf_ += format_number(xs[i]);
    }
    buf_ += "]";
  }
  void open_object() { buf_ += "{\n"; ++depth_; first_ = true; }
  void close_object() {
    buf_ += "\n";
    --depth_;
    buf_.append(static_cast<size_t>(2 * depth_), ' ');
    buf_ += "}";
    first_ = false;
  }

  template <typename T>
  void field(const std::string& k, const T& v) {
    key(k);
    value(v);
  }

  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
  int depth_ = 0;
  bool first_ = true;
};

std::string csv_to_json(const std::vector<std::string>& header,
                        const std::vector<std::vector<std::string>>& rows) {
  std::string out = "[\n";
  for (size_t r = 0; r < rows.size(); ++r) {
    out += "  {";
    for (size_t c = 0; c < header.size(); ++c) {
      if (c) out += ", ";
      out += "\"" + header[c] + "\": " + rows[r][c];
    }
    out += r + 1 < rows.size() ? "},\n" : "}\n";
  }
  out += "]\n";
  return out;
}

std::string emit_table(const ScanSpec& spec,
                       const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
  if (spec.format == OutputFormat::json) return csv_to_json(header, rows);
  std::string out;
  for (size_t c = 0; c < header.size(); ++c) {
    if (c) out += ",";
    out += header[c];
  }
  out += "\n";
  for (const auto& row : rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      out += row[c];
    }
    out += "\n";
  }
  return out;
}

}  // namespace

void ScanSpec::validate() const {
  if (n_values.empty()) throw std::invalid_argument("no photon numbers given");
  for (int n : n_values) {
    if (n < 1 || n > kMaxPhotons) {
      throw std::invalid_argument("photon number out of range");
    }
  }
  if (!(min < max)) throw std::invalid_argument("scan needs min < max");
  if (min < 0) throw std::invalid_argument("scan variable must be >= 0");
  if (steps < 2) throw std::invalid_argument("scan needs at least 2 steps");
  if (phi_fracs.empty()) throw std::invalid_argument("no phi fractions given");
  for (double f : phi_fracs) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw std::invalid_argument("phi fractions must lie in (0, 1]");
    }
  }
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  return buf;
}

std::string render_figure1(const ScanSpec& spec) {
  spec.validate();
  if (spec.mode != DampingMode::dephasing_only) {
    throw std::invalid_argument("figure1 runs in dephasing-only mode");
  }
  std::vector<std::string> header = {"gamma_t", "n"};
  for (double f : spec.phi_fracs) header.push_back("res_phi_" + frac_label(f));
  header.push_back("res_distill");

  std::vector<std::vector<std::string>> rows;
  for (int n : spec.n_values) {
    for (int i = 0; i < spec.steps; ++i) {
      const double gbar_t = grid_point(spec, i);
      const DampingParams p = DampingParams::from_products(n, 0.0, 0.0, gbar_t);
      std::vector<std::string> row = {format_number(gbar_t), std::to_string(n)};
      for (double f : spec.phi_fracs) {
        const double phi = f * M_PI / (2.0 * n);
        row.push_back(format_number(1.0 / phase_deviation(p, phi)));
      }
      const double e_d = distillable_entanglement_dephasing(n, gbar_t);
      row.push_back(format_number(1.0 / distillation_phase_deviation(n, e_d)));
      rows.push_back(std::move(row));
    }
  }
  return emit_table(spec, header, rows);
}

std::string render_figure2(const ScanSpec& spec) {
  spec.validate();
  if (spec.mode != DampingMode::amplitude_only) {
    throw std::invalid_argument("figure2 runs in symmetric amplitude-only mode");
  }
  const std::vector<std::string> header = {"Gamma_t", "n", "res_best", "res_dl",
                                           "res_du"};
  std::vector<std::vector<std::string>> rows;
  for (int n : spec.n_values) {
    for (int i = 0; i < spec.steps; ++i) {
      const double big_gamma_t = grid_point(spec, i);
      const DampingParams p =
          DampingParams::from_products(n, big_gamma_t, big_gamma_t, 0.0);
      const StrategyComparison cmp = compare_strategies(p);
      rows.push_back({format_number(big_gamma_t), std::to_string(n),
                      format_number(1.0 / cmp.delta_phi_best),
                      format_number(1.0 / cmp.delta_phi_dl),
                      format_number(1.0 / cmp.delta_phi_du)});
    }
  }
  return emit_table(spec, header, rows);
}

void run_figure1(const ScanSpec& spec) { write_text(spec.out_path, render_figure1(spec)); }
void run_figure2(const ScanSpec& spec) { write_text(spec.out_path, render_figure2(spec)); }

namespace {

void append_certificate(JsonWriter& w, const ExtremalityCertificate& cert) {
  w.key("certificate");
  w.open_object();
  w.field("passed", cert.passed);
  w.field("max_product_overlap", cert.max_product_overlap);
  w.field("trace_B_sigma", cert.trace_b_sigma);
  w.field("n_starts", cert.n_starts);
  w.key("argmax");
  w.open_object();
  w.field("K1", cert.k1);
  w.field("K2", cert.k2);
  w.field("theta1", cert.theta1);
  w.field("theta2", cert.theta2);
  w.field("eta", cert.eta);
  w.close_object();
  w.close_object();
}

}  // namespace

std::string render_report(const ReportParams& params) {
  const DampingParams p = DampingParams::from_products(
      params.n_photons, params.big_gamma1_t, params.big_gamma2_t,
      params.gamma_bar_t);
  p.validate();
  const DampedNoonCoefficients c = evolve_coefficients(p);

  JsonWriter w;
  w.open();
  w.field("n", params.n_photons);
  w.field("Gamma1_t", params.big_gamma1_t);
  w.field("Gamma2_t", params.big_gamma2_t);
  w.field("gamma_t", params.gamma_bar_t);
  w.key("coefficients");
  w.open_object();
  w.field("c_00", c.c_00);
  w.field("c_m0", c.c_a);
  w.field("c_0m", c.c_b);
  w.field("c_off", c.c_off);
  w.close_object();

  const bool symmetric = c.symmetric();
  double e_r;
  double i_c = coherent_information(c);
  if (symmetric) {
    const EntanglementReport rep = entanglement_report(c);
    e_r = rep.e_r;
    w.field("e_r", rep.e_r);
    w.field("numeric", false);
    w.field("e_f_upper", rep.e_f_upper);
    w.field("i_c", rep.i_c);
    if (rep.e_d_exact) w.field("e_d", *rep.e_d_exact);
    w.field("c_plus", rep.c_plus);
    w.field("c_minus", rep.c_minus);
    w.field("d_plus", rep.d_plus);
    w.field("d_minus", rep.d_minus);
  } else {
    const MinimizeResult res =
        minimize_relative_entropy(c, params.starts, 1e-10, params.seed);
    e_r = res.e_r;
    w.field("e_r", res.e_r);
    w.field("numeric", true);
    w.field("e_f_upper", eof_upper_bound(c));
    w.field("i_c", i_c);
    const ExtremalityCertificate cert =
        verify_extremality(c, res.sigma_star, params.starts, params.seed);
    append_certificate(w, cert);
  }
  w.field("ppt_min", partial_transpose_min_eigenvalue(c));
  const double best = best_phase_deviation(p);
  w.field("delta_phi_best", best);
  w.field("best_res", 1.0 / best);
  const DeviationBounds bounds =
      deviation_bounds_from_measures(params.n_photons, e_r, i_c);
  w.field("delta_phi_dl", bounds.lower);
  w.field("delta_phi_du", bounds.upper);
  if (bounds.i_c_clamped) w.field("i_c_clamped", true);
  w.close();
  return w.str();
}

VerifyOutcome run_verify(const VerifyParams& params) {
  const DampingParams p = DampingParams::from_products(
      params.n_photons, params.big_gamma1_t, params.big_gamma2_t,
      params.gamma_bar_t);
  p.validate();
  const DampedNoonCoefficients c = evolve_coefficients(p);

  SeparableEdgeState sigma;
  bool numeric = false;
  if (c.symmetric()) {
    sigma = extremal_separable_state(c);
  } else {
    numeric = true;
    sigma = minimize_relative_entropy(c, params.starts, 1e-10, params.seed)
                .sigma_star;
  }
  if (params.perturb_d_n0 != 0.0) {
    sigma.d_a.back() += params.perturb_d_n0;
    double tr = sigma.d_00 + sigma.d_nn;
    for (double v : sigma.d_a) tr += v;
    for (double v : sigma.d_b) tr += v;
    sigma.d_00 /= tr;
    sigma.d_nn /= tr;
    sigma.d_off /= tr;
    for (double& v : sigma.d_a) v /= tr;
    for (double& v : sigma.d_b) v /= tr;
    // The edge condition survives the rescaling only approximately; restore
    // it exactly through the off-diagonal.
    sigma.d_off = std::sqrt(sigma.d_00 * sigma.d_nn);
  }

  VerifyOutcome out;
  out.certificate = verify_extremality(c, sigma, params.starts, params.seed);

  JsonWriter w;
  w.open();
  w.field("n", params.n_photons);
  w.field("Gamma1_t", params.big_gamma1_t);
  w.field("Gamma2_t", params.big_gamma2_t);
  w.field("gamma_t", params.gamma_bar_t);
  w.field("sigma_numeric", numeric);
  if (params.perturb_d_n0 != 0.0) w.field("perturb_d_N0", params.perturb_d_n0);
  append_certificate(w, out.certificate);
  w.close();
  out.text = w.str();
  return out;
}

}  // namespace dnoon
