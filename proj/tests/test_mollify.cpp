#include <cmath>

#include "doctest.h"
#include "mslab/geometry.hpp"
#include "mslab/mollify.hpp"

using namespace mslab;
using mollify::MollifierKernel;

namespace {

const double kPi = 3.14159265358979323846;

// chart refined along x1 only; the probes below vary in x1 alone
CylinderChart thin_chart(int n1 = 129) {
  return make_chart_preset("flat-cylinder", {n1, 9, 7});
}

// Brute-force oracle: continuum convolution (f * Psi_tau)(x) for f depending
// on x1 only, reduced to the 1d marginal m(t) = iint Psi(t, y2, y3) dy2 dy3
// evaluated by midpoint quadrature much finer than the grid.
double oracle_convolve_1d(const std::function<double(double)>& f, double x, double tau,
                          const MollifierKernel& kernel) {
  const int n = 4001;
  const double dt = 2.0 / (n - 1);
  double acc = 0.0, mass = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = -1.0 + i * dt;
    double m = 0.0;
    const int q = 161;
    const double dq = 2.0 / (q - 1);
    for (int a = 0; a < q; ++a)
      for (int b = 0; b < q; ++b) {
        const double y2 = -1.0 + a * dq, y3 = -1.0 + b * dq;
        m += kernel.radial(std::sqrt(t * t + y2 * y2 + y3 * y3)) * dq * dq;
      }
    acc += m * f(x - tau * t) * dt;
    mass += m * dt;
  }
  return acc / mass;  // unit-mass normalization, matching the discrete kernel
}

}  // namespace

TEST_CASE("kernel: positivity, cap, unit mass, radial symmetry") {
  MollifierKernel k = MollifierKernel::standard_bump();
  CHECK(k.mass() == doctest::Approx(1.0).epsilon(1e-12));
  double peak = 0.0;
  for (double t = 0.0; t <= 1.0; t += 1e-3) {
    CHECK(k.radial(t) >= 0.0);
    peak = std::max(peak, k.radial(t));
    CHECK(k.radial(t) == k.radial(std::abs(-t)));  // radial profile, hence even
  }
  CHECK(peak <= 1.0);
  CHECK(k.radial(1.0001) == 0.0);
}

TEST_CASE("mollify: constants and linear functions reproduced away from the faces") {
  CylinderChart c = thin_chart(65);
  MollifierKernel k = MollifierKernel::standard_bump();
  const double tau = 0.15;
  SUBCASE("constants") {
    ScalarField one(c);
    for (auto& z : one.v) z = Complex(2.0, -1.0);
    ScalarField out = mollify::mollify_field(one, tau, k);
    for (int i = 0; i < c.n1(); ++i) {
      if (c.x1(i) < tau || c.x1(i) > 1.0 - tau) continue;
      for (int j = 2; j < c.nr() - 2; ++j)
        for (int kk = 2; kk < c.nth() - 2; ++kk)
          CHECK(std::abs(out(i, j, kk) - Complex(2.0, -1.0)) < 1e-13);
    }
  }
  SUBCASE("f = x1 (odd kernel moments vanish)") {
    ScalarField f = sample_scalar(c, [](double x1, double, double) { return Complex(x1); });
    ScalarField out = mollify::mollify_field(f, tau, k);
    for (int i = 0; i < c.n1(); ++i) {
      if (c.x1(i) < tau || c.x1(i) > 1.0 - tau) continue;
      CHECK(std::abs(out(i, 4, 3) - Complex(c.x1(i))) < 1e-13);
    }
  }
}

TEST_CASE("mollify: kinked profile against the brute-force quadrature oracle") {
  // all three axes must resolve the kernel radius, or the lattice kernel
  // degenerates to its central slice and its x1-marginal is wrong
  CylinderChart c = make_chart_preset("flat-cylinder", {129, 65, 13});
  MollifierKernel k = MollifierKernel::standard_bump();
  const double tau = 0.12;
  auto f1 = [](double x) { return std::abs(x - 0.5); };
  ScalarField f = sample_scalar(c, [&](double x1, double, double) { return Complex(f1(x1)); });
  ScalarField out = mollify::mollify_field(f, tau, k);
  const double worst_spacing = std::max({c.dx(0), c.dx(1), c.dx(2)});
  for (int probe : {48, 56, 64, 72, 88}) {
    const double x = c.x1(probe);
    const double want = oracle_convolve_1d(f1, x, tau, k);
    const double got = out(probe, 32, 6).real();
    CHECK(std::abs(got - want) < std::max(1e-6, 2.0 * worst_spacing * worst_spacing));
  }
}

TEST_CASE("mollify: sup bound, linearity, translation covariance, parameter errors") {
  CylinderChart c = thin_chart(65);
  MollifierKernel k = MollifierKernel::standard_bump();
  ScalarField f = sample_scalar(c, [](double x1, double r, double th) {
    return Complex(std::sin(7.0 * x1) * std::cos(3.0 * r), std::cos(5.0 * th));
  });
  const double tau = 0.11;
  ScalarField out = mollify::mollify_field(f, tau, k);
  SUBCASE("probability kernel cannot increase the sup") {
    double fs = 0.0, os = 0.0;
    for (const auto& z : f.v) fs = std::max(fs, std::abs(z));
    for (const auto& z : out.v) os = std::max(os, std::abs(z));
    CHECK(os <= fs + 1e-13);
  }
  SUBCASE("linearity to machine precision") {
    ScalarField g = sample_scalar(c, [](double x1, double, double) {
      return Complex(std::cos(2.0 * x1));
    });
    ScalarField sum(c);
    for (std::size_t id = 0; id < c.size(); ++id)
      sum.v[id] = 2.0 * f.v[id] + Complex(0, 1.5) * g.v[id];
    ScalarField lhs = mollify::mollify_field(sum, tau, k);
    ScalarField fg = mollify::mollify_field(g, tau, k);
    for (std::size_t id = 0; id < c.size(); ++id)
      CHECK(std::abs(lhs.v[id] - (2.0 * out.v[id] + Complex(0, 1.5) * fg.v[id])) < 1e-12);
  }
  SUBCASE("translation by one grid cell commutes on interior nodes") {
    ScalarField shifted(c);
    for (int i = 1; i < c.n1(); ++i)
      for (int j = 0; j < c.nr(); ++j)
        for (int kk = 0; kk < c.nth(); ++kk) shifted(i, j, kk) = f(i - 1, j, kk);
    ScalarField mshift = mollify::mollify_field(shifted, tau, k);
    const int reach = static_cast<int>(std::ceil(tau / c.dx(0))) + 2;
    for (int i = reach + 1; i < c.n1() - reach; ++i)
      CHECK(std::abs(mshift(i, 4, 3) - out(i - 1, 4, 3)) < 1e-12);
  }
  SUBCASE("tau validation") {
    CHECK_THROWS_AS(mollify::mollify_field(f, 0.0, k), DomainError);
    CHECK_THROWS_AS(mollify::mollify_field(f, -0.1, k), DomainError);
    CHECK_THROWS_AS(mollify::mollify_field(f, 1.3, k), DomainError);  // > half max extent
  }
}

TEST_CASE("rate study: kinked corpus trends") {
  CylinderChart c = thin_chart(257);
  MollifierKernel k = MollifierKernel::standard_bump();
  const std::vector<double> taus{0.2, 0.1, 0.05, 0.025};
  ScalarField f = sample_scalar(c, [](double x1, double, double) {
    return Complex(std::abs(x1 - 0.5));
  });
  mollify::RateStudy s = mollify::rate_study_lp(f, 2.0, taus, k);
  CHECK(s.lp_gap.pass);
  CHECK(s.hess_lp.pass);
  CHECK(s.sup_k1.pass);
  CHECK(s.sup_k2.pass);
  // the kink contributes at rate tau^{3/2}, so the normalized gap decays ~ sqrt(tau)
  CHECK(s.lp_gap.fitted_exponent > 1.2);
  CHECK_THROWS_AS(mollify::rate_study_lp(f, 2.0, {0.1, 0.2}, k), DomainError);
}

TEST_CASE("rate study: plateau stays under the gradient Young bound") {
  CylinderChart c = make_chart_preset("flat-cylinder", {9, 129, 7});
  MollifierKernel k = MollifierKernel::standard_bump();
  ScalarField f = sample_scalar(c, [&](double, double r, double) {
    const double t = std::clamp(((r - 1.0) / 2.0 - 0.35) / 0.3, 0.0, 1.0);
    return Complex(t * t * (3.0 - 2.0 * t));
  });
  mollify::RateStudy s = mollify::rate_study_lp(f, 2.0, {0.2, 0.1, 0.05, 0.025}, k);
  CHECK(s.sup_k1.pass);
  CHECK(s.sup_k2.pass);
}

TEST_CASE("one-form regularization: rates on a Lipschitz kink") {
  CylinderChart c = make_chart_preset("flat-cylinder", {97, 81, 7});
  MollifierKernel k = MollifierKernel::standard_bump();
  OneForm A = sample_one_form(
      c, [](double, double, double) { return Complex(0.0); },
      [](double x1, double r, double) {
        return Complex(std::abs(x1 - 0.5) * std::sin(0.5 * kPi * (r - 1.0)));
      },
      [](double, double, double) { return Complex(0.0); });
  const std::vector<double> taus{0.2, 0.1, 0.05};
  mollify::OneFormRates rates = mollify::regularize_rates(A, taus, k);
  CHECK(rates.gap_ln.pass);
  CHECK(rates.hess_ln.pass);
  CHECK(rates.sup_k1.pass);
  CHECK(rates.sup_k2.pass);
  SUBCASE("zero form maps to zero") {
    OneForm z = mollify::regularize_one_form(OneForm(c), 0.1, k);
    for (int axis = 0; axis < 3; ++axis)
      for (const auto& v : z.comp[axis]) CHECK(std::abs(v) < 1e-15);
  }
}
