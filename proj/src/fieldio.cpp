#include "mslab/fieldio.hpp"

#include <sstream>

#include "mslab/report.hpp"

namespace mslab {
namespace fieldio {

std::string field_to_csv(const ScalarField& f) {
  const CylinderChart& c = *f.chart;
  std::ostringstream os;
  os << "i1,ir,itheta,re,im\n";
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        const Complex z = f(i, j, k);
        os << i << ',' << j << ',' << k << ',' << format_double(z.real()) << ','
           << format_double(z.imag()) << '\n';
      }
  return os.str();
}

ScalarField field_from_csv(const CylinderChart& c, const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw DomainError("field csv: empty input");
  ScalarField f(c);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    int i, j, k;
    double re, im;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%lf,%lf", &i, &j, &k, &re, &im) != 5)
      throw DomainError("field csv: malformed row: " + line);
    if (i < 0 || i >= c.n1() || j < 0 || j >= c.nr() || k < 0 || k >= c.nth())
      throw DomainError("field csv: index out of range");
    f(i, j, k) = Complex(re, im);
  }
  return f;
}

std::string matrix_to_csv(const Eigen::MatrixXcd& m) {
  std::ostringstream os;
  os << "row,col,re,im\n";
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      os << r << ',' << c << ',' << format_double(m(r, c).real()) << ','
         << format_double(m(r, c).imag()) << '\n';
  return os.str();
}

std::string probe_rows_csv(const std::vector<double>& lambdas, int b_count) {
  std::ostringstream os;
  os << "row,lambda,b_index\n";
  int row = 0;
  for (double lam : lambdas)
    for (int b = 0; b < b_count; ++b) os << row++ << ',' << format_double(lam) << ',' << b << '\n';
  return os.str();
}

}  // namespace fieldio
}  // namespace mslab
