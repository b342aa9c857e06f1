#include "mslab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mslab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0.0 || y[i] <= 0.0) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

static void check_ladder(const std::vector<double>& params, const std::vector<double>& values) {
  if (params.size() != values.size() || params.size() < 2)
    throw std::invalid_argument("convergence ladder needs matching params/values, >= 2 rungs");
  for (std::size_t i = 1; i < params.size(); ++i)
    if (!(params[i] < params[i - 1]))
      throw std::invalid_argument("ladder parameters must be strictly decreasing");
  for (double v : values)
    if (v < 0.0) throw std::invalid_argument("ladder norms must be nonnegative");
}

ConvergenceReport ConvergenceReport::make_little_o(std::string name, std::vector<double> params,
                                                   std::vector<double> values,
                                                   std::vector<double> normalized) {
  check_ladder(params, values);
  ConvergenceReport r;
  r.name = std::move(name);
  r.kind = Kind::LittleO;
  r.params = std::move(params);
  r.values = std::move(values);
  r.ratios = std::move(normalized);
  r.fitted_exponent = fit_loglog_slope(r.params, r.values);
  r.pass = true;
  // strictly decreasing; rungs that have hit the zero floor count as passed
  // (the trend cannot decrease below an exactly reproduced target)
  for (std::size_t i = 1; i < r.ratios.size(); ++i)
    if (!(r.ratios[i] < r.ratios[i - 1]) && !(r.ratios[i] <= 1e-14)) r.pass = false;
  return r;
}

ConvergenceReport ConvergenceReport::make_big_o(std::string name, std::vector<double> params,
                                                std::vector<double> values,
                                                std::vector<double> normalized,
                                                double bound_factor) {
  check_ladder(params, values);
  ConvergenceReport r;
  r.name = std::move(name);
  r.kind = Kind::BigO;
  r.params = std::move(params);
  r.values = std::move(values);
  r.ratios = std::move(normalized);
  r.bound_factor = bound_factor;
  r.fitted_exponent = fit_loglog_slope(r.params, r.values);
  r.pass = true;
  const double first = r.ratios.empty() ? 0.0 : r.ratios.front();
  for (double q : r.ratios)
    if (q > bound_factor * first) r.pass = false;
  return r;
}

std::string ConvergenceReport::csv() const {
  std::ostringstream os;
  os << "param,norm,normalized_ratio\n";
  for (std::size_t i = 0; i < params.size(); ++i)
    os << format_double(params[i]) << ',' << format_double(values[i]) << ','
       << format_double(i < ratios.size() ? ratios[i] : 0.0) << '\n';
  return os.str();
}

std::string verdicts_to_json(const std::vector<VerdictRecord>& records) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json e;
    e["check"] = r.check;
    e["pass"] = r.pass;
    for (const auto& [k, v] : r.details) e["details"][k] = v;
    j.push_back(e);
  }
  return j.dump(2) + "\n";
}

std::string ledger_to_json(const NormLedger& ledger) {
  nlohmann::ordered_json j;
  for (const auto& [k, v] : ledger) j[k] = v;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
}

}  // namespace mslab
