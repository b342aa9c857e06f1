#ifndef MSLAB_REPORT_HPP
#define MSLAB_REPORT_HPP

#include <map>
#include <string>
#include <vector>

namespace mslab {

// A measured trend over a decreasing parameter ladder. "little_o" trends must
// show a strictly decreasing normalized ratio value/target_rate(param);
// "big_o" trends must stay within bound_factor of the first rung.
struct ConvergenceReport {
  enum class Kind { LittleO, BigO };

  std::string name;                 // which check this ladder realizes
  Kind kind = Kind::LittleO;
  std::vector<double> params;       // strictly decreasing
  std::vector<double> values;       // measured norms, nonnegative
  std::vector<double> ratios;       // values normalized by the target rate
  double fitted_exponent = 0.0;     // least-squares slope on log-log data
  double target_exponent = 0.0;
  double bound_factor = 2.0;        // for BigO verdicts
  bool pass = false;

  // Evaluates ratios, fit, and verdict.  rate(param) is the normalization,
  // e.g. tau for an o(tau) claim.
  static ConvergenceReport make(std::string name, Kind kind, std::vector<double> params,
                                std::vector<double> values, double (*rate)(double),
                                double target_exponent, double bound_factor = 2.0);
  static ConvergenceReport make_little_o(std::string name, std::vector<double> params,
                                         std::vector<double> values,
                                         std::vector<double> normalized);
  static ConvergenceReport make_big_o(std::string name, std::vector<double> params,
                                      std::vector<double> values, std::vector<double> normalized,
                                      double bound_factor = 2.0);

  std::string csv() const;  // columns: param, norm, normalized_ratio
};

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Scalar ledger with deterministic iteration order, serialized to JSON.
using NormLedger = std::map<std::string, double>;

struct VerdictRecord {
  std::string check;  // what is being verified
  bool pass = false;
  std::map<std::string, double> details;
};

std::string verdicts_to_json(const std::vector<VerdictRecord>& records);
std::string ledger_to_json(const NormLedger& ledger);

void write_text_file(const std::string& path, const std::string& content);
std::string format_double(double v);

}  // namespace mslab

#endif
