#include "mslab/carleman.hpp"

#include <cmath>
#include <random>

#include "mslab/geometry.hpp"

namespace mslab {
namespace carleman {

ConvexifiedWeight ConvexifiedWeight::make(const CylinderChart& c, int sign, double h, double eps,
                                          double separation) {
  if (!(h <= eps / separation && eps <= 0.25))
    throw ConfigError("convexified weight requires h <= eps/" +
                      format_double(separation) + " and eps <= 1/4");
  ConvexifiedWeight w;
  w.sign = sign;
  w.h = h;
  w.eps = eps;
  w.data = ops::weight_convexified(c, sign, h, eps);
  return w;
}

ScalarField conjugate_apply(const CylinderChart& c, const OneForm& A, const ScalarField& q,
                            const ops::WeightData& weight, double h, const ScalarField& u) {
  return ops::ConjugatedOperator::make(c, A, q, weight, h).apply(u);
}

namespace {

double collar_bump(double t) {
  // vanishes identically outside [0.15, 0.85]
  const double s = (t - 0.5) / 0.35;
  return s * s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0;
}

}  // namespace

std::vector<ScalarField> make_samples(const CylinderChart& c, const SampleFamily& fam, double h) {
  std::mt19937_64 rng(fam.seed);
  std::uniform_int_distribution<int> mode(1, 3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ScalarField> out;
  out.reserve(fam.count);
  const double pi = 3.14159265358979323846;
  const double ext[3] = {c.x1_hi() - c.x1_lo(), c.r_hi() - c.r_lo(),
                         c.theta_hi() - c.theta_lo()};
  for (int s = 0; s < fam.count; ++s) {
    const int k1 = mode(rng), k2 = mode(rng), k3 = mode(rng);
    const bool oscillate = fam.semiclassical && (unif(rng) < 0.5);
    const double kappa = 0.5 + unif(rng);          // |xi| scale
    const double alpha = 2.0 * pi * unif(rng);     // codirection angle in (x1, r)
    const double amp = 0.5 + unif(rng);
    ScalarField u(c);
    for (int i = 0; i < c.n1(); ++i)
      for (int j = 0; j < c.nr(); ++j)
        for (int k = 0; k < c.nth(); ++k) {
          const double t1 = (c.x1(i) - c.x1_lo()) / ext[0];
          const double t2 = (c.r(j) - c.r_lo()) / ext[1];
          const double t3 = (c.theta(k) - c.theta_lo()) / ext[2];
          double base;
          if (fam.compact_support)
            base = collar_bump(t1) * collar_bump(t2) * collar_bump(t3) *
                   std::sin(k1 * pi * t1) * std::sin(k2 * pi * t2) * std::sin(k3 * pi * t3);
          else
            base = std::sin(k1 * pi * t1) * std::sin(k2 * pi * t2) * std::sin(k3 * pi * t3);
          Complex val = amp * base;
          if (oscillate) {
            const double phase =
                kappa * (std::sin(alpha) * c.x1(i) + std::cos(alpha) * c.r(j)) / h;
            val *= Complex(std::cos(phase), std::sin(phase));
          }
          u(i, j, k) = val;
        }
    // keep the boundary layers exactly zero
    for (int i = 0; i < c.n1(); ++i)
      for (int j = 0; j < c.nr(); ++j)
        for (int k = 0; k < c.nth(); ++k)
          if (i == 0 || j == 0 || k == 0 || i == c.n1() - 1 || j == c.nr() - 1 ||
              k == c.nth() - 1)
            u(i, j, k) = 0.0;
    out.push_back(std::move(u));
  }
  return out;
}

CheckResult check_boundary(const CylinderChart& c, const OneForm& A, const ScalarField& q,
                           const std::vector<double>& h_list, double eps,
                           const SampleFamily& fam, double ratio_floor) {
  CheckResult out;
  std::vector<double> minr;
  BoundaryRegion region = geometry::boundary_split(c, 1);
  for (double h : h_list) {
    ConvexifiedWeight w = ConvexifiedWeight::make(c, 1, h, eps);
    ops::ConjugatedOperator op = ops::ConjugatedOperator::make(c, A, q, w.data, h);
    auto samples = make_samples(c, fam, h);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& u : samples) {
      ScalarField pu = op.apply(u);
      const double lhs = geometry::integrate_volume_abs2(c, pu);
      double bt = 0.0;
      for (const auto& bn : region.nodes) {
        const Complex dnu_u = geometry::normal_derivative(c, u, bn);
        const auto nu = geometry::unit_normal(c, bn);
        Complex dnu_psi = 0.0;
        for (int axis = 0; axis < 3; ++axis)
          dnu_psi += nu[axis] * w.data.dpsi.comp[axis][c.idx(bn.i, bn.j, bn.k)];
        bt += 2.0 * h * h * h * bn.area_weight * dnu_psi.real() * std::norm(dnu_u);
      }
      const double h1 = geometry::h1_scl_norm(c, u, h);
      const double denom = (h * h / eps) * h1 * h1;
      if (denom == 0.0) continue;  // zero sample rejected
      best = std::min(best, (lhs + bt) / denom);
    }
    minr.push_back(best);
  }
  out.ratios = minr;
  out.report = ConvergenceReport::make_big_o("boundary estimate min ratio", h_list, minr, minr,
                                             std::numeric_limits<double>::infinity());
  out.report.name = "boundary estimate min ratio";
  out.report.pass = true;
  for (double v : minr)
    if (!(v >= ratio_floor)) out.report.pass = false;
  return out;
}

CheckResult check_interior(const CylinderChart& c, const OneForm& A, const ScalarField& q,
                           const std::vector<double>& h_list, const SampleFamily& fam,
                           double bound_factor) {
  CheckResult out;
  std::vector<double> maxr;
  ops::WeightData w = ops::weight_linear(c, 1);
  for (double h : h_list) {
    ops::ConjugatedOperator op = ops::ConjugatedOperator::make(c, A, q, w, h);
    ops::Hminus1Solver dual_solver(c, h);
    SampleFamily f = fam;
    f.compact_support = true;
    auto samples = make_samples(c, f, h);
    double best = 0.0;
    for (const auto& u : samples) {
      ScalarField pu = op.apply(u);
      const double dual = dual_solver.norm(pu);
      if (dual == 0.0) continue;
      const double ratio = h * geometry::h1_scl_norm(c, u, h) / dual;
      best = std::max(best, ratio);
    }
    maxr.push_back(best);
  }
  out.ratios = maxr;
  out.report =
      ConvergenceReport::make_big_o("interior estimate max ratio", h_list, maxr, maxr,
                                    bound_factor);
  return out;
}

}  // namespace carleman
}  // namespace mslab
