#ifndef MSLAB_RECOVER_HPP
#define MSLAB_RECOVER_HPP

#include <Eigen/Dense>

#include "mslab/identity.hpp"

namespace mslab {
namespace recover {

// Rows are (lambda_i, b_j) probes of the electric identity; columns are grid
// nodes of the unknown.  Applying the matrix to sampled dq reproduces
// electric_data exactly.
struct DataOperator {
  const CylinderChart* chart = nullptr;
  std::vector<double> lambdas;
  std::vector<std::function<double(double)>> b_family;
  Eigen::MatrixXcd M;  // (n_lambda * n_b) x n_nodes

  int rows() const { return static_cast<int>(M.rows()); }
  int cols() const { return static_cast<int>(M.cols()); }
  Eigen::VectorXcd apply(const ScalarField& dq) const;
};

DataOperator assemble_data_operator(const CylinderChart& c, const std::vector<double>& lambdas,
                                    const std::vector<std::function<double(double)>>& b_family);

struct InjectivityReport {
  double sigma_min = 0.0;  // smallest of the min(rows, cols) singular values
  double sigma_max = 0.0;
  double condition = 0.0;
  int rank = 0;            // numerical rank at relative tolerance 1e-12
  std::vector<double> singular_values;
};

InjectivityReport injectivity_report(const DataOperator& op);

enum class Regularizer { Tikhonov, TruncatedSVD };

struct Recovery {
  ScalarField estimate;
  double residual_norm = 0.0;   // ||op dq - data|| on row-normalized system
  double solution_norm = 0.0;   // ||dq||
  double relative_error = -1.0; // vs truth when supplied (flat-measure L2)
};

// min ||op dq - data||^2 + reg^2 ||dq||^2 via SVD of the row-normalized
// system (rows and data are rescaled together).
Recovery recover_q(const DataOperator& op, const Eigen::VectorXcd& data, double reg,
                   const ScalarField* truth = nullptr,
                   Regularizer kind = Regularizer::Tikhonov);

// Projection of a field onto the span of right singular vectors with
// sigma >= rel_cut * sigma_max: the component the probe family can resolve.
ScalarField resolvable_component(const DataOperator& op, const ScalarField& f, double rel_cut);

struct ClosednessReport {
  double d_delta_sup = 0.0;       // sup norm of the exterior derivative of A1-A2
  double d_delta_relative = 0.0;  // sup defect over the derivative magnitude
  double max_probe_value = 0.0;   // max |magnetic limit functional| over probes
  double probe_scale = 0.0;       // ||delta|| * ||b|| * vol reference scale
};

ClosednessReport certify_closed(const identity::ScenarioPair& pair,
                                const std::vector<double>& lambdas,
                                const std::vector<std::function<double(double)>>& b_family,
                                const dbar::CauchyKernelGrid& ckernel);

// relative L2 (flat measure) distance between fields on the same chart
double relative_error_flat(const CylinderChart& c, const ScalarField& est,
                           const ScalarField& truth);

}  // namespace recover
}  // namespace mslab

#endif
