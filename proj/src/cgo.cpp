#include "mslab/cgo.hpp"

#include <cmath>

#include "mslab/geometry.hpp"

namespace mslab {
namespace cgo {

namespace {

ScalarField sample_rho(const CylinderChart& c) {
  return sample_scalar(c, [](double x1, double r, double) { return Complex(x1, r); });
}

OneForm scale_form(const OneForm& A, double s) {
  OneForm out(*A.chart);
  for (int axis = 0; axis < 3; ++axis)
    for (std::size_t id = 0; id < A.comp[axis].size(); ++id)
      out.comp[axis][id] = s * A.comp[axis][id];
  return out;
}

}  // namespace

ScalarField CGOSolution::core() const {
  ScalarField out(*chart);
  for (std::size_t id = 0; id < chart->size(); ++id)
    out.v[id] = amplitude.v[id] + remainder.v[id];
  return out;
}

ScalarField CGOSolution::field() const {
  ScalarField out = core();
  const double s = sign;
  for (std::size_t id = 0; id < chart->size(); ++id)
    out.v[id] *= std::exp(s * rho.v[id] / h);
  return out;
}

AmplitudeParts build_amplitude(const CylinderChart& c, const OneForm& A, double h, int sign,
                               double lambda, const std::function<double(double)>& b,
                               const mollify::MollifierKernel& mkernel,
                               const dbar::CauchyKernelGrid& ckernel, double kappa) {
  if (!(h > 0.0 && h <= 0.5)) throw DomainError("build_amplitude: h must lie in (0, 1/2]");
  if (std::abs(b(c.theta_lo())) > 1e-12 || std::abs(b(c.theta_hi())) > 1e-12)
    throw DomainError("build_amplitude: b must vanish at the theta boundary");
  AmplitudeParts parts;
  parts.tau = kappa * std::sqrt(h);
  parts.A_tau = mollify::regularize_one_form(A, parts.tau, mkernel);
  parts.phase_correction = dbar::phase_correction(parts.A_tau, sign, ckernel);
  ScalarField a(c);
  const Complex I(0.0, 1.0);
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        const std::size_t id = c.idx(i, j, k);
        const Complex a0 = std::exp(I * lambda * Complex(c.x1(i), c.r(j)));
        a.v[id] = std::pow(c.sqrt_det_g(id), -0.5) * std::sqrt(c.warp(id)) *
                  std::exp(I * parts.phase_correction.v[id]) * a0 * b(c.theta(k));
      }
  parts.amplitude = std::move(a);
  return parts;
}

ScalarField transport_residual(const CylinderChart& c, const ScalarField& a,
                               const OneForm& B_tau) {
  // log(|g|/c^2) sampled, then dbar via the planar stencil per theta slice
  ScalarField logw(c);
  for (std::size_t id = 0; id < c.size(); ++id) {
    const double cw = c.warp(id);
    const double sg = c.sqrt_det_g(id);
    logw.v[id] = std::log(sg * sg / (cw * cw));
  }
  OneForm da = geometry::differential(c, a);
  OneForm dlogw = geometry::differential(c, logw);
  ScalarField out(c);
  const Complex I(0.0, 1.0);
  for (std::size_t id = 0; id < c.size(); ++id) {
    const Complex dbar_a = 0.5 * (da.comp[0][id] + I * da.comp[1][id]);
    const Complex dbar_logw = 0.5 * (dlogw.comp[0][id] + I * dlogw.comp[1][id]);
    out.v[id] = 4.0 * dbar_a + dbar_logw * a.v[id] +
                2.0 * I * (B_tau.comp[0][id] + I * B_tau.comp[1][id]) * a.v[id];
  }
  return out;
}

RemainderSource remainder_source(const CylinderChart& c, const OneForm& B, const OneForm& B_tau,
                                 const ScalarField& q, const ScalarField& a, double h, int sign) {
  if (B.chart == nullptr || !c.same_grid(*B.chart) || !c.same_grid(*B_tau.chart))
    throw DomainError("remainder_source: chart mismatch");
  RemainderSource out;
  const Complex I(0.0, 1.0);
  ScalarField lap = geometry::laplace_beltrami(c, a);
  OneForm da = geometry::differential(c, a);
  ScalarField b_da = geometry::inner(c, B, da);
  ScalarField dstar_b = geometry::codifferential(c, B);
  ScalarField b_b = geometry::inner(c, B, B);
  OneForm gap(c);
  for (int axis = 0; axis < 3; ++axis)
    for (std::size_t id = 0; id < c.size(); ++id)
      gap.comp[axis][id] = B.comp[axis][id] - B_tau.comp[axis][id];
  OneForm drho(c);
  for (std::size_t id = 0; id < c.size(); ++id) {
    drho.comp[0][id] = 1.0;
    drho.comp[1][id] = I;
  }
  ScalarField gap_rho = geometry::inner(c, gap, drho);

  ScalarField t_lap(c), t_grad(c), t_gap(c), t_dstar(c), t_sq(c), t_q(c);
  for (std::size_t id = 0; id < c.size(); ++id) {
    t_lap.v[id] = -h * h * lap.v[id];
    t_grad.v[id] = -2.0 * I * h * h * b_da.v[id];
    t_gap.v[id] = -2.0 * I * double(sign) * h * gap_rho.v[id] * a.v[id];
    t_dstar.v[id] = I * h * h * dstar_b.v[id] * a.v[id];
    t_sq.v[id] = h * h * b_b.v[id] * a.v[id];
    t_q.v[id] = h * h * q.v[id] * a.v[id];
  }
  out.v = ScalarField(c);
  for (std::size_t id = 0; id < c.size(); ++id)
    out.v.v[id] = -(t_lap.v[id] + t_grad.v[id] + t_gap.v[id] + t_dstar.v[id] + t_sq.v[id] +
                    t_q.v[id]);
  out.term_norms["laplacian_term_L2"] = geometry::norm_lp(c, t_lap, 2.0);
  out.term_norms["amplitude_gradient_term_L2"] = geometry::norm_lp(c, t_grad, 2.0);
  out.term_norms["mollify_gap_term_L2"] = geometry::norm_lp(c, t_gap, 2.0);
  out.term_norms["codifferential_term_L2"] = geometry::norm_lp(c, t_dstar, 2.0);
  out.term_norms["a_squared_term_L2"] = geometry::norm_lp(c, t_sq, 2.0);
  out.term_norms["potential_term_L2"] = geometry::norm_lp(c, t_q, 2.0);
  out.term_norms["source_L2"] = geometry::norm_lp(c, out.v, 2.0);
  return out;
}

RemainderSolve solve_remainder(const CylinderChart& c, const OneForm& B, const ScalarField& q,
                               double h, int sign, const ScalarField& v) {
  ops::WeightData w = ops::weight_cgo(c, sign);
  ops::ConjugatedOperator op = ops::ConjugatedOperator::make(c, B, q, w, h);
  ops::DirichletSolveResult res = ops::solve_dirichlet(op, v);
  RemainderSolve out;
  out.r = std::move(res.solution);
  out.h1_scl = geometry::h1_scl_norm(c, out.r, h);
  out.solver_residual = res.residual;
  out.method = res.method;
  return out;
}

CGOSolution build_cgo(const CylinderChart& c, const OneForm& A, const ScalarField& q, double h,
                      int sign, double lambda, const std::function<double(double)>& b,
                      const mollify::MollifierKernel& mkernel,
                      const dbar::CauchyKernelGrid& ckernel, double kappa) {
  if (sign != 1 && sign != -1) throw DomainError("build_cgo: sign must be +-1");
  CGOSolution sol;
  sol.chart = &c;
  sol.h = h;
  sol.sign = sign;
  sol.lambda = lambda;
  sol.rho = sample_rho(c);

  AmplitudeParts parts = build_amplitude(c, A, h, sign, lambda, b, mkernel, ckernel, kappa);
  sol.tau = parts.tau;
  sol.amplitude = parts.amplitude;
  sol.phase_correction = parts.phase_correction;
  sol.b_samples.resize(c.nth());
  for (int k = 0; k < c.nth(); ++k) sol.b_samples[k] = b(c.theta(k));

  // effective coefficient for this branch
  OneForm B = scale_form(A, sign);
  OneForm B_tau = scale_form(parts.A_tau, sign);
  RemainderSource src = remainder_source(c, B, B_tau, q, sol.amplitude, h, sign);
  RemainderSolve rem = solve_remainder(c, B, q, h, sign, src.v);
  sol.remainder = rem.r;

  const double n = c.dim();
  const double inf = std::numeric_limits<double>::infinity();
  ScalarField grad_a = geometry::grad_norm(c, sol.amplitude);
  ScalarField lap_a = geometry::laplace_beltrami(c, sol.amplitude);
  ScalarField phi_rough = dbar::phase_correction(A, sign, ckernel);
  ScalarField phase_gap(c);
  for (std::size_t id = 0; id < c.size(); ++id)
    phase_gap.v[id] = sol.phase_correction.v[id] - phi_rough.v[id];
  ScalarField transport = transport_residual(c, sol.amplitude, B_tau);

  NormLedger& L = sol.norm_ledger;
  L["amplitude_sup"] = geometry::norm_lp(c, sol.amplitude, inf);
  L["amplitude_gradient_sup"] = geometry::norm_lp(c, grad_a, inf);
  L["amplitude_laplacian_sup"] = geometry::norm_lp(c, lap_a, inf);
  L["amplitude_L2"] = geometry::norm_lp(c, sol.amplitude, 2.0);
  L["amplitude_gradient_L2"] = geometry::norm_lp(c, grad_a, 2.0);
  L["amplitude_laplacian_L2"] = geometry::norm_lp(c, lap_a, 2.0);
  L["phase_gap_Ln"] = geometry::norm_lp(c, phase_gap, n);
  L["remainder_H1_scl"] = rem.h1_scl;
  L["remainder_solver_residual"] = rem.solver_residual;
  L["transport_residual_L2"] = geometry::norm_lp(c, transport, 2.0);
  L["source_L2"] = src.term_norms.at("source_L2");
  L["tau"] = sol.tau;
  return sol;
}

CGOLadder cgo_ladder(const std::vector<std::pair<double, const CylinderChart*>>& rungs,
                     const std::function<OneForm(const CylinderChart&)>& A_of,
                     const std::function<ScalarField(const CylinderChart&)>& q_of, int sign,
                     double lambda, const std::function<double(double)>& b,
                     const mollify::MollifierKernel& mkernel, double kappa) {
  if (rungs.size() < 2) throw DomainError("cgo_ladder: need at least 2 rungs");
  CGOLadder out;
  std::vector<double> hs;
  for (const auto& [h, chart] : rungs) {
    dbar::CauchyKernelGrid ck = dbar::CauchyKernelGrid::make(*chart);
    OneForm A = A_of(*chart);
    ScalarField q = q_of(*chart);
    CGOSolution sol = build_cgo(*chart, A, q, h, sign, lambda, b, mkernel, ck, kappa);
    out.rungs.push_back({h, sol.norm_ledger});
    hs.push_back(h);
  }
  auto ledger_row = [&](const char* key) {
    std::vector<double> v;
    for (const auto& r : out.rungs) v.push_back(r.ledger.at(key));
    return v;
  };
  auto normalized = [&](const std::vector<double>& vals, double expo) {
    std::vector<double> r;
    for (std::size_t i = 0; i < vals.size(); ++i) r.push_back(vals[i] * std::pow(hs[i], expo));
    return r;
  };
  auto add_big_o = [&](const char* key, const char* name, double expo) {
    auto vals = ledger_row(key);
    out.reports.push_back(ConvergenceReport::make_big_o(name, hs, vals, normalized(vals, expo)));
  };
  auto add_little_o = [&](const char* key, const char* name, double expo) {
    auto vals = ledger_row(key);
    out.reports.push_back(
        ConvergenceReport::make_little_o(name, hs, vals, normalized(vals, expo)));
  };
  // norm display: O(1), O(h^-1/2), O(h^-1), O(1), O(1), o(h^-1/2), o(h^1/2), o(h^1/2)
  add_big_o("amplitude_sup", "amplitude sup O(1)", 0.0);
  add_big_o("amplitude_gradient_sup", "amplitude gradient sup O(h^-1/2)", 0.5);
  add_big_o("amplitude_laplacian_sup", "amplitude laplacian sup O(h^-1)", 1.0);
  add_big_o("amplitude_L2", "amplitude L2 O(1)", 0.0);
  add_big_o("amplitude_gradient_L2", "amplitude gradient L2 O(1)", 0.0);
  add_little_o("amplitude_laplacian_L2", "amplitude laplacian L2 o(h^-1/2)", 0.5);
  add_little_o("phase_gap_Ln", "phase gap Ln o(h^1/2)", -0.5);
  add_little_o("remainder_H1_scl", "remainder H1_scl o(h^1/2)", -0.5);
  return out;
}

}  // namespace cgo
}  // namespace mslab
