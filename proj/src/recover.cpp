#include "mslab/recover.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace mslab {
namespace recover {

Eigen::VectorXcd DataOperator::apply(const ScalarField& dq) const {
  Eigen::VectorXcd x(M.cols());
  for (std::size_t id = 0; id < dq.v.size(); ++id) x[static_cast<int>(id)] = dq.v[id];
  return M * x;
}

DataOperator assemble_data_operator(const CylinderChart& c, const std::vector<double>& lambdas,
                                    const std::vector<std::function<double(double)>>& b_family) {
  if (lambdas.empty() || b_family.empty())
    throw DomainError("assemble_data_operator: empty probe family");
  DataOperator op;
  op.chart = &c;
  op.lambdas = lambdas;
  op.b_family = b_family;
  const int rows = static_cast<int>(lambdas.size() * b_family.size());
  op.M.resize(rows, static_cast<int>(c.size()));
  const Complex I(0.0, 1.0);
  int row = 0;
  for (double lam : lambdas)
    for (const auto& b : b_family) {
      for (int i = 0; i < c.n1(); ++i)
        for (int j = 0; j < c.nr(); ++j)
          for (int k = 0; k < c.nth(); ++k) {
            const std::size_t id = c.idx(i, j, k);
            const double w = c.line_weight(0, i) * c.line_weight(1, j) * c.line_weight(2, k);
            op.M(row, static_cast<int>(id)) =
                w * c.warp(id) * std::exp(I * lam * Complex(c.x1(i), c.r(j))) * b(c.theta(k));
          }
      ++row;
    }
  return op;
}

namespace {

// rows scaled to unit norm so the lambda ladder's exponential dynamic range
// does not swamp the factorization; data must be scaled identically
struct RowScaled {
  Eigen::MatrixXcd M;
  Eigen::VectorXd scale;
};

RowScaled row_normalize(const Eigen::MatrixXcd& M) {
  RowScaled out;
  out.M = M;
  out.scale.resize(M.rows());
  for (int r = 0; r < M.rows(); ++r) {
    const double s = M.row(r).norm();
    out.scale[r] = s > 0.0 ? s : 1.0;
    out.M.row(r) /= out.scale[r];
  }
  return out;
}

}  // namespace

InjectivityReport injectivity_report(const DataOperator& op) {
  RowScaled rs = row_normalize(op.M);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(rs.M);
  InjectivityReport rep;
  const auto& s = svd.singularValues();
  rep.singular_values.assign(s.data(), s.data() + s.size());
  rep.sigma_max = s.size() ? s[0] : 0.0;
  rep.sigma_min = s.size() ? s[s.size() - 1] : 0.0;
  rep.condition = rep.sigma_min > 0.0 ? rep.sigma_max / rep.sigma_min
                                      : std::numeric_limits<double>::infinity();
  rep.rank = 0;
  for (double v : rep.singular_values)
    if (v > 1e-12 * rep.sigma_max) ++rep.rank;
  return rep;
}

double relative_error_flat(const CylinderChart& c, const ScalarField& est,
                           const ScalarField& truth) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        const std::size_t id = c.idx(i, j, k);
        const double w = c.line_weight(0, i) * c.line_weight(1, j) * c.line_weight(2, k);
        num += w * std::norm(est.v[id] - truth.v[id]);
        den += w * std::norm(truth.v[id]);
      }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

Recovery recover_q(const DataOperator& op, const Eigen::VectorXcd& data, double reg,
                   const ScalarField* truth, Regularizer kind) {
  if (reg < 0.0) throw DomainError("recover_q: regularization must be nonnegative");
  const CylinderChart& c = *op.chart;
  RowScaled rs = row_normalize(op.M);
  Eigen::VectorXcd d = data;
  for (int r = 0; r < d.size(); ++r) d[r] /= rs.scale[r];

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(rs.M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::VectorXcd beta = svd.matrixU().adjoint() * d;
  Eigen::VectorXcd filtered(beta.size());
  const double smax = s.size() ? s[0] : 0.0;
  for (int i = 0; i < beta.size(); ++i) {
    const double si = s[i];
    double f = 0.0;
    if (kind == Regularizer::Tikhonov)
      f = si / (si * si + reg * reg);
    else
      f = (si > reg * smax && si > 0.0) ? 1.0 / si : 0.0;  // truncation level = reg * sigma_max
    filtered[i] = f * beta[i];
  }
  Eigen::VectorXcd x = svd.matrixV() * filtered;

  Recovery out;
  out.estimate = ScalarField(c);
  for (std::size_t id = 0; id < c.size(); ++id) out.estimate.v[id] = x[static_cast<int>(id)];
  out.residual_norm = (rs.M * x - d).norm();
  out.solution_norm = x.norm();
  if (truth != nullptr) out.relative_error = relative_error_flat(c, out.estimate, *truth);
  return out;
}

ScalarField resolvable_component(const DataOperator& op, const ScalarField& f, double rel_cut) {
  const CylinderChart& c = *op.chart;
  RowScaled rs = row_normalize(op.M);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(rs.M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s[0] : 0.0;
  Eigen::VectorXcd x(op.M.cols());
  for (std::size_t id = 0; id < c.size(); ++id) x[static_cast<int>(id)] = f.v[id];
  Eigen::VectorXcd coef = svd.matrixV().adjoint() * x;
  for (int i = 0; i < coef.size(); ++i)
    if (!(s[i] >= rel_cut * smax)) coef[i] = 0.0;
  Eigen::VectorXcd proj = svd.matrixV() * coef;
  ScalarField out(c);
  for (std::size_t id = 0; id < c.size(); ++id) out.v[id] = proj[static_cast<int>(id)];
  return out;
}

ClosednessReport certify_closed(const identity::ScenarioPair& pair,
                                const std::vector<double>& lambdas,
                                const std::vector<std::function<double(double)>>& b_family,
                                const dbar::CauchyKernelGrid& ckernel) {
  const CylinderChart& c = *pair.chart;
  OneForm delta = pair.delta();
  ClosednessReport rep;
  const identity::ClosednessDefect defect = identity::exterior_derivative_defect(c, delta);
  rep.d_delta_sup = defect.absolute;
  rep.d_delta_relative = defect.relative;
  // Phi = Phi_1 + Phi_2 from the two potentials with opposite signs equals
  // the phase correction of delta by linearity
  ScalarField Phi1 = dbar::phase_correction(pair.A1, 1, ckernel);
  ScalarField Phi2 = dbar::phase_correction(pair.A2, -1, ckernel);
  ScalarField Phi(c);
  for (std::size_t id = 0; id < c.size(); ++id) Phi.v[id] = Phi1.v[id] + Phi2.v[id];

  double delta_sup = 0.0;
  for (int axis = 0; axis < 3; ++axis)
    for (const auto& z : delta.comp[axis]) delta_sup = std::max(delta_sup, std::abs(z));
  ScalarField ones(c);
  for (auto& z : ones.v) z = 1.0;
  const double vol = geometry::integrate_volume(c, ones).real();

  for (double lam : lambdas)
    for (const auto& b : b_family) {
      const Complex v = identity::magnetic_limit_functional(c, delta, Phi, lam, b);
      rep.max_probe_value = std::max(rep.max_probe_value, std::abs(v));
      double bsup = 0.0;
      for (int k = 0; k < c.nth(); ++k) bsup = std::max(bsup, std::abs(b(c.theta(k))));
      rep.probe_scale = std::max(rep.probe_scale, delta_sup * bsup * vol);
    }
  return rep;
}

}  // namespace recover
}  // namespace mslab
