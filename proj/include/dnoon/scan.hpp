#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dnoon/oracle.hpp"

namespace dnoon {

// File-system problems while writing scan output (maps to CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DampingMode { dephasing_only, amplitude_only, both };
enum class OutputFormat { csv, json };

/// One parameter sweep: the scan variable is gbar*t in dephasing mode and
/// Gamma*t in amplitude mode, swept over [min, max] in `steps` points for
/// every photon number in n_values.
struct ScanSpec {
  std::vector<int> n_values = {2, 3, 4};
  DampingMode mode = DampingMode::dephasing_only;
  double min = 0.0;
  double max = 0.6;
  int steps = 200;
  std::vector<double> phi_fracs = {1.0, 0.75, 0.5, 0.25};  // of pi/(2N)
  std::string out_path;  // empty writes to stdout
  std::uint64_t seed = 12345;
  OutputFormat format = OutputFormat::csv;

  void validate() const;
};

/// Serializes x with 12 significant digits, C locale, '.' separator.
std::string format_number(double x);

/// Dephasing-only resolution scan: columns gamma_t, n, one 1/Delta-phi
/// column per phi fraction, and the distill-then-measure resolution.
std::string render_figure1(const ScanSpec& spec);

/// Symmetric amplitude-only scan: Gamma_t, n, res_best, res_dl, res_du.
std::string render_figure2(const ScanSpec& spec);

/// Renders and writes to spec.out_path (or returns for stdout printing by
/// the caller when out_path is empty). Throws IoError on write failure.
void run_figure1(const ScanSpec& spec);
void run_figure2(const ScanSpec& spec);

struct ReportParams {
  int n_photons = 2;
  double big_gamma1_t = 0.0;
  double big_gamma2_t = 0.0;
  double gamma_bar_t = 0.0;
  int starts = 64;
  std::uint64_t seed = 12345;
};

/// Single-point record: coefficients, entanglement measures (closed form or
/// numeric for asymmetric damping), PPT eigenvalue, best deviation. JSON
/// text; `format` csv is rejected for reports.
std::string render_report(const ReportParams& params);

struct VerifyParams {
  int n_photons = 2;
  double big_gamma1_t = 0.0;
  double big_gamma2_t = 0.0;
  double gamma_bar_t = 0.0;
  int starts = 64;
  std::uint64_t seed = 12345;
  // Debug knob for the negative control: shifts d_N0 by this amount before
  // renormalizing, pushing sigma off the extremal point.
  double perturb_d_n0 = 0.0;
};

struct VerifyOutcome {
  ExtremalityCertificate certificate;
  std::string text;  // JSON record of the certificate
};

VerifyOutcome run_verify(const VerifyParams& params);

}  // namespace dnoon
