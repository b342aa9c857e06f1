#include <cmath>
#include <random>

#include "doctest.h"
#include "mslab/geometry.hpp"

using namespace mslab;
using geometry::differential;
using geometry::inner;
using geometry::integrate_volume;
using geometry::laplace_beltrami;

namespace {

const double kPi = 3.14159265358979323846;

CylinderChart flat_chart(std::array<int, 3> sizes = {21, 25, 9}) {
  return make_chart_preset("flat-cylinder", sizes);
}

CylinderChart warp_chart(std::array<int, 3> sizes = {21, 25, 9}) {
  return make_chart_preset("exp-warp", sizes);
}

double interior_sup_error(const CylinderChart& c, const ScalarField& got,
                          const std::function<Complex(double, double, double)>& want) {
  double worst = 0.0;
  for (int i = 1; i < c.n1() - 1; ++i)
    for (int j = 1; j < c.nr() - 1; ++j)
      for (int k = 1; k < c.nth() - 1; ++k)
        worst = std::max(worst, std::abs(got(i, j, k) - want(c.x1(i), c.r(j), c.theta(k))));
  return worst;
}

}  // namespace

TEST_CASE("laplace: constants are harmonic") {
  CylinderChart c = flat_chart();
  ScalarField u = sample_scalar(c, [](double, double, double) { return Complex(3.5, -1.0); });
  ScalarField lap = laplace_beltrami(c, u);
  for (const auto& z : lap.v) CHECK(std::abs(z) < 1e-11);
}

TEST_CASE("laplace: x1^2 on the flat chart") {
  CylinderChart c = flat_chart();
  ScalarField u = sample_scalar(c, [](double x1, double, double) { return Complex(x1 * x1); });
  ScalarField lap = laplace_beltrami(c, u);
  const double err =
      interior_sup_error(c, lap, [](double, double, double) { return Complex(2.0); });
  CHECK(err < 1e-9);  // quadratic: centered stencil is exact up to roundoff
}

TEST_CASE("laplace: exp-warp oracle for u = x1") {
  // |g|^{1/2} = e^{3 x1} r, g^{11} = e^{-2 x1}; hand evaluation gives
  // Lap_g x1 = e^{-3 x1} d_1(e^{x1}) = e^{-2 x1}; frozen probe at x1 = 0.5:
  const double oracle_at_half = 0.36787944117144233;
  double errs[2];
  int pass = 0;
  for (int n : {21, 41}) {
    CylinderChart c = warp_chart({n, 17, 7});
    ScalarField u = sample_scalar(c, [](double x1, double, double) { return Complex(x1); });
    ScalarField lap = laplace_beltrami(c, u);
    const int i = (n - 1) / 2;  // x1 = 0.5
    CHECK(c.x1(i) == doctest::Approx(0.5));
    errs[pass++] = std::abs(lap(i, 8, 3) - oracle_at_half);
  }
  CHECK(errs[0] < 5e-4);
  CHECK(errs[1] < errs[0] / 3.0);  // second order
}

TEST_CASE("codifferential: zero form, exact flat case, d*d = -laplace") {
  CylinderChart c = flat_chart();
  SUBCASE("zero") {
    ScalarField out = geometry::codifferential(c, OneForm(c));
    for (const auto& z : out.v) CHECK(z == Complex(0.0));
  }
  SUBCASE("alpha = x1 dx1 gives -1 inside") {
    OneForm a = sample_one_form(
        c, [](double x1, double, double) { return Complex(x1); },
        [](double, double, double) { return Complex(0.0); },
        [](double, double, double) { return Complex(0.0); });
    ScalarField out = geometry::codifferential(c, a);
    const double err =
        interior_sup_error(c, out, [](double, double, double) { return Complex(-1.0); });
    CHECK(err < 1e-10);
  }
  SUBCASE("d* d u matches -lap within combined truncation error") {
    std::vector<double> errs;
    for (int n : {21, 41}) {
      CylinderChart cc = flat_chart({n, n, 9});
      ScalarField u = sample_scalar(cc, [](double x1, double r, double th) {
        return Complex(std::sin(kPi * x1) * std::cos(r), 0.3 * std::cos(th));
      });
      ScalarField lhs = geometry::codifferential(cc, differential(cc, u));
      ScalarField lap = laplace_beltrami(cc, u);
      double err = 0.0;
      for (int i = 2; i < cc.n1() - 2; ++i)
        for (int j = 2; j < cc.nr() - 2; ++j)
          for (int k = 2; k < cc.nth() - 2; ++k)
            err = std::max(err, std::abs(lhs(i, j, k) + lap(i, j, k)));
      errs.push_back(err);
    }
    CHECK(errs[0] < 0.1);
    CHECK(errs[1] < errs[0] / 3.0);  // both ops are second order
  }
}

TEST_CASE("differential: trivial and bilinear cases are exact inside") {
  CylinderChart c = flat_chart();
  ScalarField u = sample_scalar(c, [](double x1, double r, double) { return Complex(x1 * r); });
  OneForm du = differential(c, u);
  for (int i = 1; i < c.n1() - 1; ++i)
    for (int j = 1; j < c.nr() - 1; ++j)
      for (int k = 1; k < c.nth() - 1; ++k) {
        const std::size_t id = c.idx(i, j, k);
        CHECK(std::abs(du.comp[0][id] - Complex(c.r(j))) < 1e-12);
        CHECK(std::abs(du.comp[1][id] - Complex(c.x1(i))) < 1e-12);
        CHECK(std::abs(du.comp[2][id]) < 1e-12);
      }
}

TEST_CASE("inner: metric pairings and the eikonal identity") {
  for (const char* preset : {"flat-cylinder", "exp-warp", "log-polar-image"}) {
    CylinderChart c = make_chart_preset(preset, {13, 15, 7});
    OneForm dx1(c), dr(c), drho(c);
    const Complex I(0.0, 1.0);
    for (std::size_t id = 0; id < c.size(); ++id) {
      dx1.comp[0][id] = 1.0;
      dr.comp[1][id] = 1.0;
      drho.comp[0][id] = 1.0;
      drho.comp[1][id] = I;
    }
    ScalarField p11 = inner(c, dx1, dx1);
    ScalarField prr = inner(c, dr, dr);
    ScalarField eik = inner(c, drho, drho);
    for (int i = 0; i < c.n1(); ++i)
      for (int j = 0; j < c.nr(); ++j)
        for (int k = 0; k < c.nth(); ++k) {
          const std::size_t id = c.idx(i, j, k);
          CHECK(std::abs(p11.v[id] - 1.0 / c.warp(id)) < 1e-14);
          CHECK(std::abs(prr.v[id] - 1.0 / c.warp(id)) < 1e-14);
          CHECK(std::abs(eik.v[id]) <= 1e-12);  // exact cancellation
        }
  }
}

TEST_CASE("sharp/flat: round trip and the warped lowering") {
  CylinderChart c = warp_chart({13, 15, 7});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  OneForm a(c);
  for (int axis = 0; axis < 3; ++axis)
    for (auto& z : a.comp[axis]) z = Complex(unif(rng), unif(rng));
  OneForm back = geometry::flat(c, geometry::sharp(c, a));
  for (int axis = 0; axis < 3; ++axis)
    for (std::size_t id = 0; id < c.size(); ++id)
      CHECK(std::abs(back.comp[axis][id] - a.comp[axis][id]) < 1e-13);

  VectorField e1(c);
  for (std::size_t id = 0; id < c.size(); ++id) e1.comp[0][id] = 1.0;
  OneForm e1_flat = geometry::flat(c, e1);
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k)
        CHECK(std::abs(e1_flat.comp[0][c.idx(i, j, k)] - std::exp(2.0 * c.x1(i))) < 1e-12);
}

TEST_CASE("magnetic operator: zero coefficients and the constant probe") {
  CylinderChart c = flat_chart();
  OneForm A = sample_one_form(
      c, [](double x1, double r, double) { return Complex(std::sin(x1) * r); },
      [](double x1, double, double) { return Complex(std::cos(x1)); },
      [](double, double r, double) { return Complex(0.2 * r); });
  ScalarField q = sample_scalar(c, [](double x1, double, double) { return Complex(x1, 0.3); });
  SUBCASE("A=0, q=0 reduces to -laplacian") {
    ScalarField u = sample_scalar(c, [](double x1, double r, double) {
      return Complex(std::sin(x1) * std::cos(r));
    });
    ScalarField out = geometry::magnetic_apply(c, OneForm(c), ScalarField(c), u);
    ScalarField lap = laplace_beltrami(c, u);
    for (std::size_t id = 0; id < c.size(); ++id)
      CHECK(std::abs(out.v[id] + lap.v[id]) < 1e-12);
  }
  SUBCASE("u = 1 isolates the zeroth-order block") {
    ScalarField one(c);
    for (auto& z : one.v) z = 1.0;
    ScalarField out = geometry::magnetic_apply(c, A, q, one);
    ScalarField dstarA = geometry::codifferential(c, A);
    ScalarField aa = inner(c, A, A);
    const Complex I(0.0, 1.0);
    for (std::size_t id = 0; id < c.size(); ++id)
      CHECK(std::abs(out.v[id] - (I * dstarA.v[id] + aa.v[id] + q.v[id])) < 1e-12);
  }
}

TEST_CASE("magnetic operator: plane-wave cancellation for A = dx1") {
  // (D + A)^2 e^{-i x1} = 0 while e^{+i x1} picks up the factor 4
  CylinderChart c = flat_chart({41, 17, 7});
  OneForm A(c);
  for (std::size_t id = 0; id < c.size(); ++id) A.comp[0][id] = 1.0;
  ScalarField um = sample_scalar(c, [](double x1, double, double) {
    return std::exp(Complex(0.0, -x1));
  });
  ScalarField up = sample_scalar(c, [](double x1, double, double) {
    return std::exp(Complex(0.0, x1));
  });
  ScalarField zm = geometry::magnetic_apply(c, A, ScalarField(c), um);
  ScalarField zp = geometry::magnetic_apply(c, A, ScalarField(c), up);
  double worst_m = 0.0, worst_p = 0.0;
  for (int i = 1; i < c.n1() - 1; ++i)
    for (int j = 1; j < c.nr() - 1; ++j)
      for (int k = 1; k < c.nth() - 1; ++k) {
        worst_m = std::max(worst_m, std::abs(zm(i, j, k)));
        worst_p = std::max(worst_p, std::abs(zp(i, j, k) - 4.0 * up(i, j, k)));
      }
  CHECK(worst_m < 5e-4);  // O(grid^2)
  CHECK(worst_p < 5e-4);
}

TEST_CASE("volume integration: flat volume, warped closed form, odd symmetry") {
  SUBCASE("flat chart unit function") {
    CylinderChart c = flat_chart({33, 41, 11});
    ScalarField one(c);
    for (auto& z : one.v) z = 1.0;
    // int 1 dV = (x1 extent) * int_1^3 r dr * (theta extent) = 1 * 4 * pi/3
    const double want = 4.0 * kPi / 3.0;
    CHECK(integrate_volume(c, one).real() == doctest::Approx(want).epsilon(1e-10));
  }
  SUBCASE("exp-warp against the antiderivative") {
    CylinderChart c = warp_chart({41, 41, 11});
    ScalarField one(c);
    for (auto& z : one.v) z = 1.0;
    // int e^{3 x1} dx1 * int r dr * theta extent; trapezoid error for e^{3x1}
    // at this spacing is 0.75 * dx^2 relative
    const double want = (std::exp(3.0) - 1.0) / 3.0 * 4.0 * (kPi / 3.0);
    CHECK(integrate_volume(c, one).real() == doctest::Approx(want).epsilon(1e-3));
  }
  SUBCASE("odd integrand on a symmetric chart") {
    CylinderChart c({-1.0, 1.0}, {1.0, 3.0}, {-kPi / 6, kPi / 6}, {21, 17, 7},
                    [](double x1, double, double) { return 1.0 + x1 * x1; },
                    [](double r, double) { return r; });
    ScalarField odd = sample_scalar(c, [](double x1, double, double) { return Complex(x1); });
    CHECK(std::abs(integrate_volume(c, odd)) < 1e-13);
  }
}

TEST_CASE("adjointness of d and d* on compactly supported fields") {
  auto bump = [](double s) { return s * s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; };
  std::vector<double> errs;
  for (int n : {17, 33}) {
    CylinderChart c = warp_chart({n, n, 9});
    auto tt = [&](double x, double lo, double hi) { return (2.0 * (x - lo) / (hi - lo)) - 1.0; };
    ScalarField u = sample_scalar(c, [&](double x1, double r, double th) {
      return Complex(bump(tt(x1, 0, 1) / 0.8) * bump(tt(r, 1, 3) / 0.8) *
                     bump(tt(th, -kPi / 6, kPi / 6) / 0.8));
    });
    OneForm alpha = sample_one_form(
        c,
        [&](double x1, double r, double th) {
          return Complex(bump(tt(x1, 0, 1) / 0.7) * bump(tt(r, 1, 3) / 0.7) *
                         bump(tt(th, -kPi / 6, kPi / 6) / 0.7));
        },
        [&](double x1, double r, double th) {
          return Complex(0.5 * bump(tt(x1, 0, 1) / 0.75) * bump(tt(r, 1, 3) / 0.75) *
                         bump(tt(th, -kPi / 6, kPi / 6) / 0.75));
        },
        [](double, double, double) { return Complex(0.0); });
    OneForm du = differential(c, u);
    ScalarField da = geometry::codifferential(c, alpha);
    ScalarField pair1 = inner(c, du, alpha);
    ScalarField pair2(c);
    for (std::size_t id = 0; id < c.size(); ++id) pair2.v[id] = u.v[id] * da.v[id];
    errs.push_back(std::abs(integrate_volume(c, pair1) - integrate_volume(c, pair2)));
  }
  // summation by parts telescopes exactly for compact supports
  CHECK(errs[0] < 1e-12);
  CHECK(errs[1] < 1e-12);
}

TEST_CASE("product rule d*(A u) = (d*A) u - <A, du>") {
  std::vector<double> errs;
  for (int n : {17, 33}) {
    CylinderChart c = warp_chart({n, n, 9});
    OneForm A = sample_one_form(
        c, [](double x1, double r, double) { return Complex(std::sin(x1 * r)); },
        [](double x1, double, double th) { return Complex(std::cos(x1) * th); },
        [](double, double r, double) { return Complex(0.1 * r * r); });
    ScalarField u = sample_scalar(c, [](double x1, double r, double th) {
      return Complex(std::cos(x1) * std::sin(r), 0.2 * std::sin(th));
    });
    OneForm Au(c);
    for (int axis = 0; axis < 3; ++axis)
      for (std::size_t id = 0; id < c.size(); ++id)
        Au.comp[axis][id] = A.comp[axis][id] * u.v[id];
    ScalarField lhs = geometry::codifferential(c, Au);
    ScalarField dstarA = geometry::codifferential(c, A);
    ScalarField a_du = inner(c, A, differential(c, u));
    double err = 0.0;
    for (int i = 1; i < c.n1() - 1; ++i)
      for (int j = 1; j < c.nr() - 1; ++j)
        for (int k = 1; k < c.nth() - 1; ++k) {
          const std::size_t id = c.idx(i, j, k);
          err = std::max(err, std::abs(lhs.v[id] - (dstarA.v[id] * u.v[id] - a_du.v[id])));
        }
    errs.push_back(err);
  }
  CHECK(errs[1] < errs[0] / 2.5);
}

TEST_CASE("imaginary part of the real-coefficient operator sits in the magnetic terms") {
  CylinderChart c = flat_chart();
  OneForm A = sample_one_form(
      c, [](double x1, double r, double) { return Complex(std::sin(x1) * r); },
      [](double x1, double, double) { return Complex(std::cos(x1)); },
      [](double, double, double) { return Complex(0.0); });
  ScalarField q = sample_scalar(c, [](double, double r, double) { return Complex(r); });
  ScalarField u = sample_scalar(c, [](double x1, double r, double) {
    return Complex(std::sin(x1) * std::cos(r));
  });
  // drop the two i-carrying terms: what is left must be real
  ScalarField lap = laplace_beltrami(c, u);
  ScalarField aa = inner(c, A, A);
  for (std::size_t id = 0; id < c.size(); ++id) {
    const Complex rest = -lap.v[id] + (aa.v[id] + q.v[id]) * u.v[id];
    CHECK(std::abs(rest.imag()) < 1e-12);
  }
}

TEST_CASE("boundary split: flags, sign flip, gamma majorizes the front face") {
  CylinderChart c = flat_chart();
  BoundaryRegion plus = geometry::boundary_split(c, 1);
  for (const auto& bn : plus.nodes) {
    if (bn.face == 0) CHECK(bn.flag == BoundaryFlag::Minus);
    if (bn.face >= 2) CHECK(bn.flag == BoundaryFlag::Minus);  // lateral: d_nu phi = 0
    if (bn.face == 1) CHECK(bn.flag != BoundaryFlag::Minus);
  }
  BoundaryRegion minus = geometry::boundary_split(c, -1);
  for (const auto& bn : minus.nodes) {
    if (bn.face == 1) CHECK(bn.flag == BoundaryFlag::Minus);
    if (bn.face == 0) CHECK(bn.flag != BoundaryFlag::Minus);
  }
  const double gamma_area = plus.area(BoundaryFlag::Minus) + plus.area(BoundaryFlag::GammaOnly);
  double front_area = 0.0;
  for (const auto& bn : plus.nodes)
    if (bn.flag == BoundaryFlag::Minus) front_area += bn.area_weight;
  CHECK(gamma_area >= front_area);
  CHECK(plus.area(BoundaryFlag::GammaOnly) > 0.0);
}

TEST_CASE("log-polar map: radius one, the e-point, and the origin error") {
  auto out = geometry::log_polar_map({{1.0, 0.0, 0.0}, {0.0, 0.0, std::exp(1.0)}});
  CHECK(out[0].y1 == doctest::Approx(0.0));
  CHECK(out[1].y1 == doctest::Approx(1.0));
  CHECK(out[1].warp == doctest::Approx(std::exp(2.0)));
  CHECK(out[1].r == doctest::Approx(0.0));
  CHECK_THROWS_AS(geometry::log_polar_map({{0.0, 0.0, 0.0}}), DomainError);
}

TEST_CASE("advection reduction: trivial, constant field, operator identity") {
  CylinderChart c = flat_chart({25, 33, 9});
  SUBCASE("zero field") {
    auto [A, q] = geometry::advection_to_magnetic(c, VectorField(c));
    for (int axis = 0; axis < 3; ++axis)
      for (const auto& z : A.comp[axis]) CHECK(z == Complex(0.0));
    for (const auto& z : q.v) CHECK(std::abs(z) < 1e-12);
  }
  SUBCASE("constant unit field in x1") {
    VectorField X(c);
    for (std::size_t id = 0; id < c.size(); ++id) X.comp[0][id] = 1.0;
    auto [A, q] = geometry::advection_to_magnetic(c, X);
    for (int i = 1; i < c.n1() - 1; ++i)
      for (int j = 1; j < c.nr() - 1; ++j)
        for (int k = 1; k < c.nth() - 1; ++k) {
          const std::size_t id = c.idx(i, j, k);
          CHECK(std::abs(A.comp[0][id] - Complex(0.0, 0.5)) < 1e-11);
          CHECK(std::abs(q.v[id] - 0.25) < 1e-11);
        }
  }
  SUBCASE("L_X u agrees with L_{A,q} u on a smooth probe") {
    VectorField X(c);
    for (int i = 0; i < c.n1(); ++i)
      for (int j = 0; j < c.nr(); ++j)
        for (int k = 0; k < c.nth(); ++k) {
          const std::size_t id = c.idx(i, j, k);
          X.comp[0][id] = std::sin(c.r(j));
          X.comp[1][id] = std::cos(c.x1(i));
          X.comp[2][id] = 0.3 * std::sin(c.x1(i));
        }
    auto [A, q] = geometry::advection_to_magnetic(c, X);
    ScalarField u = sample_scalar(c, [](double x1, double r, double th) {
      return Complex(std::sin(kPi * x1) * std::cos(r) * std::cos(th));
    });
    ScalarField lhs = geometry::advection_apply(c, X, u);
    ScalarField rhs = geometry::magnetic_apply(c, A, q, u);
    ScalarField diff(c);
    for (std::size_t id = 0; id < c.size(); ++id) diff.v[id] = lhs.v[id] - rhs.v[id];
    const double rel = geometry::norm_lp(c, diff, 2.0) / geometry::norm_lp(c, lhs, 2.0);
    CHECK(rel < 1e-3);
  }
  SUBCASE("complex field is rejected") {
    VectorField X(c);
    X.comp[0][0] = Complex(0.0, 1.0);
    CHECK_THROWS_AS(geometry::advection_to_magnetic(c, X), DomainError);
  }
}

TEST_CASE("chart invariants are enforced") {
  CHECK_THROWS_AS(make_chart_preset("no-such-chart", {9, 9, 9}), ConfigError);
  CHECK_THROWS_AS(CylinderChart({0, 1}, {1, 3}, {-0.5, 0.5}, {2, 9, 9},
                                [](double, double, double) { return 1.0; },
                                [](double r, double) { return r; }),
                  ConfigError);
  CHECK_THROWS_AS(CylinderChart({0, 1}, {-1, 3}, {-0.5, 0.5}, {9, 9, 9},
                                [](double, double, double) { return 1.0; },
                                [](double r, double) { return r; }),
                  ConfigError);
  CHECK_THROWS_AS(CylinderChart({0, 1}, {1, 3}, {-0.5, 0.5}, {9, 9, 9},
                                [](double x1, double, double) { return x1 - 0.5; },
                                [](double r, double) { return r; }),
                  ConfigError);
}
