#include "mslab/geometry.hpp"

#include <cmath>
#include <cstdlib>

namespace mslab {

CylinderChart::CylinderChart(std::array<double, 2> x1_range, std::array<double, 2> r_range,
                             std::array<double, 2> theta_range, std::array<int, 3> sizes,
                             std::function<double(double, double, double)> warp,
                             std::function<double(double, double)> density, int dimension)
    : n_(sizes), dim_(dimension) {
  for (int s : sizes)
    if (s < 3) throw ConfigError("chart grid too coarse: every axis needs >= 3 nodes");
  if (r_range[0] <= 0.0) throw ConfigError("chart requires r_min > 0");
  if (x1_range[1] <= x1_range[0] || r_range[1] <= r_range[0] || theta_range[1] <= theta_range[0])
    throw ConfigError("chart ranges must be increasing");
  x1_lo_ = x1_range[0];
  d1_ = (x1_range[1] - x1_range[0]) / (n_[0] - 1);
  r_lo_ = r_range[0];
  dr_ = (r_range[1] - r_range[0]) / (n_[1] - 1);
  th_lo_ = theta_range[0];
  dth_ = (theta_range[1] - theta_range[0]) / (n_[2] - 1);

  warp_.resize(size());
  dens_.resize(size());
  sqrtg_.resize(size());
  for (int i = 0; i < n_[0]; ++i)
    for (int j = 0; j < n_[1]; ++j)
      for (int k = 0; k < n_[2]; ++k) {
        const std::size_t id = idx(i, j, k);
        const double c = warp(x1(i), r(j), theta(k));
        const double d = density(r(j), theta(k));
        if (!(c > 0.0)) throw ConfigError("warp must be strictly positive on the chart");
        if (!(d > 0.0)) throw ConfigError("transversal density must be strictly positive");
        warp_[id] = c;
        dens_[id] = d;
        sqrtg_[id] = std::pow(c, 0.5 * dim_) * d;
        if (!(sqrtg_[id] > 0.0)) throw ConfigError("metric determinant must be positive");
      }
}

bool CylinderChart::same_grid(const CylinderChart& o) const {
  return n_ == o.n_ && x1_lo_ == o.x1_lo_ && d1_ == o.d1_ && r_lo_ == o.r_lo_ && dr_ == o.dr_ &&
         th_lo_ == o.th_lo_ && dth_ == o.dth_;
}

ScalarField sample_scalar(const CylinderChart& c,
                          const std::function<Complex(double, double, double)>& f) {
  ScalarField u(c);
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) u(i, j, k) = f(c.x1(i), c.r(j), c.theta(k));
  return u;
}

OneForm sample_one_form(const CylinderChart& c,
                        const std::function<Complex(double, double, double)>& f1,
                        const std::function<Complex(double, double, double)>& fr,
                        const std::function<Complex(double, double, double)>& fth) {
  OneForm a(c);
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        const std::size_t id = c.idx(i, j, k);
        a.comp[0][id] = f1(c.x1(i), c.r(j), c.theta(k));
        a.comp[1][id] = fr(c.x1(i), c.r(j), c.theta(k));
        a.comp[2][id] = fth(c.x1(i), c.r(j), c.theta(k));
      }
  return a;
}

double BoundaryRegion::area(BoundaryFlag f) const {
  double s = 0.0;
  for (const auto& bn : nodes)
    if (bn.flag == f) s += bn.area_weight;
  return s;
}

double BoundaryRegion::total_area() const {
  double s = 0.0;
  for (const auto& bn : nodes) s += bn.area_weight;
  return s;
}

namespace geometry {
namespace {

void require_same(const CylinderChart& c, const CylinderChart* other, const char* what) {
  if (other == nullptr || !c.same_grid(*other))
    throw DomainError(std::string("chart mismatch in ") + what);
}

// stride of one step along an axis in the flat index
std::size_t stride(const CylinderChart& c, int axis) {
  switch (axis) {
    case 0: return static_cast<std::size_t>(c.nr()) * c.nth();
    case 1: return static_cast<std::size_t>(c.nth());
    default: return 1;
  }
}

int axis_size(const CylinderChart& c, int axis) {
  return axis == 0 ? c.n1() : axis == 1 ? c.nr() : c.nth();
}

int axis_index(const CylinderChart& c, int axis, int i, int j, int k) {
  return axis == 0 ? i : axis == 1 ? j : k;
}

// d/dx along an axis: centered inside, one-sided at the ends. The end
// closures are third order (four points) when the axis allows it so the
// boundary layers of the adjointness defects stay below the interior
// second-order floor.
Complex deriv_axis(const std::vector<Complex>& v, std::size_t id, int pos, int n, std::size_t st,
                   double d) {
  if (pos > 0 && pos < n - 1) return (v[id + st] - v[id - st]) / (2.0 * d);
  if (pos == 0) {
    if (n >= 4)
      return (-11.0 * v[id] + 18.0 * v[id + st] - 9.0 * v[id + 2 * st] + 2.0 * v[id + 3 * st]) /
             (6.0 * d);
    return (-3.0 * v[id] + 4.0 * v[id + st] - v[id + 2 * st]) / (2.0 * d);
  }
  if (n >= 4)
    return (11.0 * v[id] - 18.0 * v[id - st] + 9.0 * v[id - 2 * st] - 2.0 * v[id - 3 * st]) /
           (6.0 * d);
  return (3.0 * v[id] - 4.0 * v[id - st] + v[id - 2 * st]) / (2.0 * d);
}

std::vector<Complex> deriv_field(const CylinderChart& c, const std::vector<Complex>& v, int axis) {
  std::vector<Complex> out(v.size());
  const std::size_t st = stride(c, axis);
  const int n = axis_size(c, axis);
  const double d = c.dx(axis);
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        const std::size_t id = c.idx(i, j, k);
        out[id] = deriv_axis(v, id, axis_index(c, axis, i, j, k), n, st, d);
      }
  return out;
}

}  // namespace

OneForm differential(const CylinderChart& c, const ScalarField& u) {
  require_same(c, u.chart, "differential");
  OneForm out(c);
  for (int axis = 0; axis < 3; ++axis) out.comp[axis] = deriv_field(c, u.v, axis);
  return out;
}

ScalarField codifferential(const CylinderChart& c, const OneForm& alpha) {
  require_same(c, alpha.chart, "codifferential");
  ScalarField out(c);
  // d* v = -|g|^{-1/2} d_j (|g|^{1/2} g^{jj} v_j), metric diagonal
  for (int axis = 0; axis < 3; ++axis) {
    std::vector<Complex> flux(c.size());
    for (std::size_t id = 0; id < c.size(); ++id)
      flux[id] = c.sqrt_det_g(id) * c.metric_inv(id)[axis] * alpha.comp[axis][id];
    std::vector<Complex> dflux = deriv_field(c, flux, axis);
    for (std::size_t id = 0; id < c.size(); ++id) out.v[id] -= dflux[id] / c.sqrt_det_g(id);
  }
  return out;
}

ScalarField laplace_beltrami(const CylinderChart& c, const ScalarField& u) {
  require_same(c, u.chart, "laplace_beltrami");
  ScalarField out(c);
  // interior: compact staggered divergence form per axis
  auto coef = [&](std::size_t id, int axis) { return c.sqrt_det_g(id) * c.metric_inv(id)[axis]; };
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        const std::size_t id = c.idx(i, j, k);
        const int pos[3] = {i, j, k};
        Complex acc = 0.0;
        bool interior_all = true;
        for (int axis = 0; axis < 3; ++axis)
          if (pos[axis] == 0 || pos[axis] == axis_size(c, axis) - 1) interior_all = false;
        if (interior_all) {
          for (int axis = 0; axis < 3; ++axis) {
            const std::size_t st = stride(c, axis);
            const double d = c.dx(axis);
            const double wp = 0.5 * (coef(id, axis) + coef(id + st, axis));
            const double wm = 0.5 * (coef(id, axis) + coef(id - st, axis));
            acc += (wp * (u.v[id + st] - u.v[id]) - wm * (u.v[id] - u.v[id - st])) / (d * d);
          }
          out.v[id] = acc / c.sqrt_det_g(id);
        }
      }
  // face nodes: one-sided composition of the flux form
  std::array<std::vector<Complex>, 3> dflux;
  {
    OneForm du = differential(c, u);
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<Complex> flux(c.size());
      for (std::size_t id = 0; id < c.size(); ++id)
        flux[id] = c.sqrt_det_g(id) * c.metric_inv(id)[axis] * du.comp[axis][id];
      dflux[axis] = deriv_field(c, flux, axis);
    }
  }
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        const int pos[3] = {i, j, k};
        bool interior_all = true;
        for (int axis = 0; axis < 3; ++axis)
          if (pos[axis] == 0 || pos[axis] == axis_size(c, axis) - 1) interior_all = false;
        if (!interior_all) {
          const std::size_t id = c.idx(i, j, k);
          out.v[id] = (dflux[0][id] + dflux[1][id] + dflux[2][id]) / c.sqrt_det_g(id);
        }
      }
  return out;
}

ScalarField inner(const CylinderChart& c, const OneForm& a, const OneForm& b) {
  require_same(c, a.chart, "inner");
  require_same(c, b.chart, "inner");
  ScalarField out(c);
  for (std::size_t id = 0; id < c.size(); ++id) {
    const auto gi = c.metric_inv(id);
    out.v[id] = gi[0] * a.comp[0][id] * b.comp[0][id] + gi[1] * a.comp[1][id] * b.comp[1][id] +
                gi[2] * a.comp[2][id] * b.comp[2][id];
  }
  return out;
}

VectorField sharp(const CylinderChart& c, const OneForm& a) {
  require_same(c, a.chart, "sharp");
  VectorField out(c);
  for (std::size_t id = 0; id < c.size(); ++id) {
    const auto gi = c.metric_inv(id);
    for (int axis = 0; axis < 3; ++axis) out.comp[axis][id] = gi[axis] * a.comp[axis][id];
  }
  return out;
}

OneForm flat(const CylinderChart& c, const VectorField& x) {
  require_same(c, x.chart, "flat");
  OneForm out(c);
  for (std::size_t id = 0; id < c.size(); ++id) {
    const auto gi = c.metric_inv(id);
    for (int axis = 0; axis < 3; ++axis) out.comp[axis][id] = x.comp[axis][id] / gi[axis];
  }
  return out;
}

ScalarField magnetic_apply(const CylinderChart& c, const OneForm& A, const ScalarField& q,
                           const ScalarField& u) {
  require_same(c, A.chart, "magnetic_apply");
  require_same(c, q.chart, "magnetic_apply");
  require_same(c, u.chart, "magnetic_apply");
  ScalarField lap = laplace_beltrami(c, u);
  ScalarField dstarA = codifferential(c, A);
  OneForm du = differential(c, u);
  ScalarField a_du = inner(c, A, du);
  ScalarField a_a = inner(c, A, A);
  ScalarField out(c);
  const Complex I(0.0, 1.0);
  for (std::size_t id = 0; id < c.size(); ++id)
    out.v[id] = -lap.v[id] + I * dstarA.v[id] * u.v[id] - 2.0 * I * a_du.v[id] +
                (a_a.v[id] + q.v[id]) * u.v[id];
  return out;
}

Complex integrate_volume(const CylinderChart& c, const ScalarField& f) {
  require_same(c, f.chart, "integrate_volume");
  Complex s = 0.0;
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        const std::size_t id = c.idx(i, j, k);
        const double w =
            c.line_weight(0, i) * c.line_weight(1, j) * c.line_weight(2, k) * c.sqrt_det_g(id);
        s += w * f.v[id];
      }
  return s;
}

double integrate_volume_abs2(const CylinderChart& c, const ScalarField& f) {
  double s = 0.0;
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        const std::size_t id = c.idx(i, j, k);
        const double w =
            c.line_weight(0, i) * c.line_weight(1, j) * c.line_weight(2, k) * c.sqrt_det_g(id);
        s += w * std::norm(f.v[id]);
      }
  return s;
}

double norm_lp(const CylinderChart& c, const ScalarField& f, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : f.v) m = std::max(m, std::abs(z));
    return m;
  }
  double s = 0.0;
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        const std::size_t id = c.idx(i, j, k);
        const double w =
            c.line_weight(0, i) * c.line_weight(1, j) * c.line_weight(2, k) * c.sqrt_det_g(id);
        s += w * std::pow(std::abs(f.v[id]), p);
      }
  return std::pow(s, 1.0 / p);
}

double norm_lp_interior(const CylinderChart& c, const ScalarField& f, double p, double collar) {
  auto inside = [&](int i, int j, int k) {
    return c.x1(i) - c.x1_lo() >= collar && c.x1_hi() - c.x1(i) >= collar &&
           c.r(j) - c.r_lo() >= collar && c.r_hi() - c.r(j) >= collar &&
           c.theta(k) - c.theta_lo() >= collar && c.theta_hi() - c.theta(k) >= collar;
  };
  if (std::isinf(p)) {
    double m = 0.0;
    for (int i = 0; i < c.n1(); ++i)
      for (int j = 0; j < c.nr(); ++j)
        for (int k = 0; k < c.nth(); ++k)
          if (inside(i, j, k)) m = std::max(m, std::abs(f(i, j, k)));
    return m;
  }
  double s = 0.0;
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        if (!inside(i, j, k)) continue;
        const std::size_t id = c.idx(i, j, k);
        const double w =
            c.line_weight(0, i) * c.line_weight(1, j) * c.line_weight(2, k) * c.sqrt_det_g(id);
        s += w * std::pow(std::abs(f.v[id]), p);
      }
  return std::pow(s, 1.0 / p);
}

ScalarField grad_norm(const CylinderChart& c, const ScalarField& f) {
  OneForm df = differential(c, f);
  ScalarField out(c);
  for (std::size_t id = 0; id < c.size(); ++id) {
    const auto gi = c.metric_inv(id);
    double s = 0.0;
    for (int axis = 0; axis < 3; ++axis) s += gi[axis] * std::norm(df.comp[axis][id]);
    out.v[id] = std::sqrt(s);
  }
  return out;
}

double h1_scl_norm(const CylinderChart& c, const ScalarField& u, double h) {
  ScalarField g = grad_norm(c, u);
  for (auto& z : g.v) z *= h;
  return norm_lp(c, g, 2.0) + norm_lp(c, u, 2.0);
}

BoundaryRegion boundary_split(const CylinderChart& c, int sign, double gamma_collar) {
  BoundaryRegion region;
  region.chart = &c;
  region.weight_sign = sign;
  auto face_weight = [&](int face, int i, int j, int k) {
    const std::size_t id = c.idx(i, j, k);
    const double cw = c.warp(id);
    const double dens = c.density(id);
    switch (face / 2) {
      case 0: return cw * dens * c.line_weight(1, j) * c.line_weight(2, k);   // x1 faces
      case 1: return cw * dens * c.line_weight(0, i) * c.line_weight(2, k);   // r faces
      default: return cw * c.line_weight(0, i) * c.line_weight(1, j);         // theta faces
    }
  };
  auto push = [&](int face, int i, int j, int k) {
    const std::size_t id = c.idx(i, j, k);
    double dnu_phi = 0.0;
    if (face == 0) dnu_phi = -sign / std::sqrt(c.warp(id));
    if (face == 1) dnu_phi = +sign / std::sqrt(c.warp(id));
    BoundaryFlag flag = (dnu_phi > 0.0) ? BoundaryFlag::Plus : BoundaryFlag::Minus;
    if (flag == BoundaryFlag::Plus) {
      // Gamma is F plus a collar on the edges of the plus face
      const bool near_edge = (c.r(j) - c.r_lo() < gamma_collar) ||
                             (c.r_hi() - c.r(j) < gamma_collar) ||
                             (c.theta(k) - c.theta_lo() < gamma_collar) ||
                             (c.theta_hi() - c.theta(k) < gamma_collar);
      if (near_edge) flag = BoundaryFlag::GammaOnly;
    }
    region.nodes.push_back({face, i, j, k, flag, face_weight(face, i, j, k), dnu_phi});
  };
  for (int j = 0; j < c.nr(); ++j)
    for (int k = 0; k < c.nth(); ++k) {
      push(0, 0, j, k);
      push(1, c.n1() - 1, j, k);
    }
  for (int i = 0; i < c.n1(); ++i)
    for (int k = 0; k < c.nth(); ++k) {
      push(2, i, 0, k);
      push(3, i, c.nr() - 1, k);
    }
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j) {
      push(4, i, j, 0);
      push(5, i, j, c.nth() - 1);
    }
  return region;
}

Complex integrate_boundary(const BoundaryRegion& region, const ScalarField& f) {
  return integrate_boundary_where(region, f, [](const BoundaryNode&) { return true; });
}

Complex integrate_boundary_where(const BoundaryRegion& region, const ScalarField& f,
                                 const std::function<bool(const BoundaryNode&)>& keep) {
  const CylinderChart& c = *region.chart;
  require_same(c, f.chart, "integrate_boundary");
  Complex s = 0.0;
  for (const auto& bn : region.nodes)
    if (keep(bn)) s += bn.area_weight * f.v[c.idx(bn.i, bn.j, bn.k)];
  return s;
}

Complex normal_derivative(const CylinderChart& c, const ScalarField& f, const BoundaryNode& bn) {
  const int axis = bn.face / 2;
  const bool lo = (bn.face % 2 == 0);
  const std::size_t st = stride(c, axis);
  const std::size_t id = c.idx(bn.i, bn.j, bn.k);
  const double d = c.dx(axis);
  const int n = axis_size(c, axis);
  Complex dcoord;
  if (lo)
    dcoord = n >= 4 ? (-11.0 * f.v[id] + 18.0 * f.v[id + st] - 9.0 * f.v[id + 2 * st] +
                       2.0 * f.v[id + 3 * st]) /
                          (6.0 * d)
                    : (-3.0 * f.v[id] + 4.0 * f.v[id + st] - f.v[id + 2 * st]) / (2.0 * d);
  else
    dcoord = n >= 4 ? (11.0 * f.v[id] - 18.0 * f.v[id - st] + 9.0 * f.v[id - 2 * st] -
                       2.0 * f.v[id - 3 * st]) /
                          (6.0 * d)
                    : (3.0 * f.v[id] - 4.0 * f.v[id - st] + f.v[id - 2 * st]) / (2.0 * d);
  // nu = +-(g^{aa})^{1/2} d_a; d_nu f = nu^a d_a f
  const double na = std::sqrt(c.metric_inv(id)[axis]);
  return (lo ? -na : na) * dcoord;
}

std::array<double, 3> unit_normal(const CylinderChart& c, const BoundaryNode& bn) {
  const int axis = bn.face / 2;
  const bool lo = (bn.face % 2 == 0);
  const std::size_t id = c.idx(bn.i, bn.j, bn.k);
  std::array<double, 3> nu{0.0, 0.0, 0.0};
  nu[axis] = (lo ? -1.0 : 1.0) * std::sqrt(c.metric_inv(id)[axis]);
  return nu;
}

std::vector<LogPolarPoint> log_polar_map(const std::vector<std::array<double, 3>>& points) {
  std::vector<LogPolarPoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    if (norm == 0.0) throw DomainError("log_polar_map: point at the origin");
    LogPolarPoint lp;
    lp.y1 = std::log(norm);
    lp.r = std::acos(std::clamp(p[2] / norm, -1.0, 1.0));
    lp.theta = std::atan2(p[1], p[0]);
    lp.warp = std::exp(2.0 * lp.y1);
    out.push_back(lp);
  }
  return out;
}

std::pair<OneForm, ScalarField> advection_to_magnetic(const CylinderChart& c,
                                                      const VectorField& X) {
  require_same(c, X.chart, "advection_to_magnetic");
  for (int axis = 0; axis < 3; ++axis)
    for (const auto& z : X.comp[axis])
      if (z.imag() != 0.0) throw DomainError("advection_to_magnetic: X must be real");
  OneForm xf = flat(c, X);
  OneForm A(c);
  const Complex I(0.0, 1.0);
  for (int axis = 0; axis < 3; ++axis)
    for (std::size_t id = 0; id < c.size(); ++id) A.comp[axis][id] = 0.5 * I * xf.comp[axis][id];
  ScalarField div = codifferential(c, xf);  // div_g X = -d*(X_flat)
  for (auto& z : div.v) z = -z;
  ScalarField xx = inner(c, xf, xf);
  ScalarField q(c);
  for (std::size_t id = 0; id < c.size(); ++id) q.v[id] = 0.25 * xx.v[id] - 0.5 * div.v[id];
  return {std::move(A), std::move(q)};
}

ScalarField advection_apply(const CylinderChart& c, const VectorField& X, const ScalarField& u) {
  require_same(c, X.chart, "advection_apply");
  require_same(c, u.chart, "advection_apply");
  ScalarField lap = laplace_beltrami(c, u);
  OneForm du = differential(c, u);
  ScalarField out(c);
  for (std::size_t id = 0; id < c.size(); ++id) {
    Complex adv = 0.0;
    for (int axis = 0; axis < 3; ++axis) adv += X.comp[axis][id] * du.comp[axis][id];
    out.v[id] = -lap.v[id] + adv;
  }
  return out;
}

}  // namespace geometry

CylinderChart make_chart_preset(const std::string& name, std::array<int, 3> sizes) {
  const double pi = 3.14159265358979323846;
  if (name == "flat-cylinder")
    return CylinderChart({0.0, 1.0}, {1.0, 3.0}, {-pi / 6.0, pi / 6.0}, sizes,
                         [](double, double, double) { return 1.0; },
                         [](double r, double) { return r; });
  if (name == "exp-warp")
    return CylinderChart({0.0, 1.0}, {1.0, 3.0}, {-pi / 6.0, pi / 6.0}, sizes,
                         [](double x1, double, double) { return std::exp(2.0 * x1); },
                         [](double r, double) { return r; });
  if (name == "log-polar-image")
    return CylinderChart({0.0, 1.0}, {0.3, 1.2}, {-pi / 6.0, pi / 6.0}, sizes,
                         [](double x1, double, double) { return std::exp(2.0 * x1); },
                         [](double r, double) { return std::sin(r); });
  throw ConfigError("unknown chart preset: " + name);
}

}  // namespace mslab
