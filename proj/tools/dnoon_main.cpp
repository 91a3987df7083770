#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "dnoon/scan.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCertificate = 2;
constexpr int kExitIo = 3;

struct DampingFlags {
  double big_gamma_t = -1.0;  // sets both modes when given
  double big_gamma1_t = 0.0;
  double big_gamma2_t = 0.0;
  double gamma_bar_t = 0.0;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--Gamma-t", big_gamma_t,
                    "symmetric amplitude-damping product Gamma*t (sets both modes)");
    cmd->add_option("--Gamma1-t", big_gamma1_t, "mode-a amplitude-damping product");
    cmd->add_option("--Gamma2-t", big_gamma2_t, "mode-b amplitude-damping product");
    cmd->add_option("--gamma-t", gamma_bar_t, "mean dephasing product gbar*t");
  }
  void resolve() {
    if (big_gamma_t >= 0.0) {
      big_gamma1_t = big_gamma_t;
      big_gamma2_t = big_gamma_t;
    }
  }
};

dnoon::OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return dnoon::OutputFormat::csv;
  if (name == "json") return dnoon::OutputFormat::json;
  throw CLI::ValidationError("--format", "must be csv or json");
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw dnoon::IoError("cannot open output file: " + path);
  const size_t written = std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
  if (written != text.size()) throw dnoon::IoError("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Damped optical NOON states: entanglement measures and the "
      "direct-vs-distill phase-measurement comparison"};
  app.require_subcommand(1);

  // figure1 ------------------------------------------------------------
  auto* fig1 = app.add_subcommand(
      "figure1", "dephasing-only resolution scan over gbar*t (CSV)");
  dnoon::ScanSpec spec1;
  std::string fmt1 = "csv";
  fig1->add_option("--n", spec1.n_values, "photon numbers (repeatable)");
  fig1->add_option("--min", spec1.min, "scan start");
  fig1->add_option("--max", spec1.max, "scan end");
  fig1->add_option("--steps", spec1.steps, "number of grid points");
  fig1->add_option("--phi-fracs", spec1.phi_fracs,
                   "phases as fractions of pi/(2N), in (0,1]");
  fig1->add_option("--out", spec1.out_path, "output path (default stdout)");
  fig1->add_option("--seed", spec1.seed, "random seed");
  fig1->add_option("--format", fmt1, "csv|json");

  // figure2 ------------------------------------------------------------
  auto* fig2 = app.add_subcommand(
      "figure2", "symmetric amplitude-only resolution scan over Gamma*t (CSV)");
  dnoon::ScanSpec spec2;
  spec2.mode = dnoon::DampingMode::amplitude_only;
  spec2.min = 0.0;
  spec2.max = 1.0;
  std::string fmt2 = "csv";
  fig2->add_option("--n", spec2.n_values, "photon numbers (repeatable)");
  fig2->add_option("--min", spec2.min, "scan start");
  fig2->add_option("--max", spec2.max, "scan end");
  fig2->add_option("--steps", spec2.steps, "number of grid points");
  fig2->add_option("--out", spec2.out_path, "output path (default stdout)");
  fig2->add_option("--seed", spec2.seed, "random seed");
  fig2->add_option("--format", fmt2, "csv|json");

  // report -------------------------------------------------------------
  auto* rep = app.add_subcommand(
      "report", "entanglement and metrology record at one parameter point");
  dnoon::ReportParams rp;
  DampingFlags rep_flags;
  std::string rep_out;
  rep->add_option("--n", rp.n_photons, "photon number")->required();
  rep_flags.add_to(rep);
  rep->add_option("--starts", rp.starts, "multi-start count for numeric paths");
  rep->add_option("--seed", rp.seed, "random seed");
  rep->add_option("--out", rep_out, "output path (default stdout)");

  // verify -------------------------------------------------------------
  auto* ver = app.add_subcommand(
      "verify", "extremality certificate for the separable edge state");
  dnoon::VerifyParams vp;
  DampingFlags ver_flags;
  std::string ver_out;
  ver->add_option("--n", vp.n_photons, "photon number")->required();
  ver_flags.add_to(ver);
  ver->add_option("--starts", vp.starts, "multi-start count");
  ver->add_option("--seed", vp.seed, "random seed");
  ver->add_option("--perturb", vp.perturb_d_n0,
                  "debug: shift d_N0 by this amount (negative control)");
  ver->add_option("--out", ver_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (fig1->parsed()) {
      spec1.format = parse_format(fmt1);
      dnoon::run_figure1(spec1);
      return kExitOk;
    }
    if (fig2->parsed()) {
      spec2.format = parse_format(fmt2);
      dnoon::run_figure2(spec2);
      return kExitOk;
    }
    if (rep->parsed()) {
      rep_flags.resolve();
      rp.big_gamma1_t = rep_flags.big_gamma1_t;
      rp.big_gamma2_t = rep_flags.big_gamma2_t;
      rp.gamma_bar_t = rep_flags.gamma_bar_t;
      write_or_print(rep_out, dnoon::render_report(rp));
      return kExitOk;
    }
    if (ver->parsed()) {
      ver_flags.resolve();
      vp.big_gamma1_t = ver_flags.big_gamma1_t;
      vp.big_gamma2_t = ver_flags.big_gamma2_t;
      vp.gamma_bar_t = ver_flags.gamma_bar_t;
      const dnoon::VerifyOutcome outcome = dnoon::run_verify(vp);
      write_or_print(ver_out, outcome.text);
      return outcome.certificate.passed ? kExitOk : kExitCertificate;
    }
  } catch (const dnoon::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid arguments: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
