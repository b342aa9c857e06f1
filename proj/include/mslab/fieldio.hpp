#ifndef MSLAB_FIELDIO_HPP
#define MSLAB_FIELDIO_HPP

#include <Eigen/Dense>
#include <string>

#include "mslab/grid.hpp"

namespace mslab {
namespace fieldio {

// columns: i1, ir, itheta, re, im
std::string field_to_csv(const ScalarField& f);
ScalarField field_from_csv(const CylinderChart& c, const std::string& text);

// columns: row, col, re, im
std::string matrix_to_csv(const Eigen::MatrixXcd& m);
// columns: row, lambda, b_index
std::string probe_rows_csv(const std::vector<double>& lambdas, int b_count);

}  // namespace fieldio
}  // namespace mslab

#endif
