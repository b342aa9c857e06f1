#ifndef MSLAB_GEOMETRY_HPP
#define MSLAB_GEOMETRY_HPP

#include <optional>

#include "mslab/grid.hpp"

namespace mslab {
namespace geometry {

// d u, centered differences inside, second-order one-sided at faces.
OneForm differential(const CylinderChart& c, const ScalarField& u);

// d* alpha = -|g|^{-1/2} d_j (|g|^{1/2} g^{jk} alpha_k)
ScalarField codifferential(const CylinderChart& c, const OneForm& alpha);

// Laplace-Beltrami in divergence form. Interior nodes use the compact
// staggered stencil (half-node averaged coefficients); face nodes fall back
// to one-sided evaluation of the expanded flux form.
ScalarField laplace_beltrami(const CylinderChart& c, const ScalarField& u);

// <alpha, beta>_g = g^{jk} alpha_j beta_k, bilinear (no conjugation).
ScalarField inner(const CylinderChart& c, const OneForm& a, const OneForm& b);

VectorField sharp(const CylinderChart& c, const OneForm& a);
OneForm flat(const CylinderChart& c, const VectorField& x);

// L_{A,q} u = -Lap_g u + i (d*A) u - 2i <A,du>_g + (<A,A>_g + q) u
ScalarField magnetic_apply(const CylinderChart& c, const OneForm& A, const ScalarField& q,
                           const ScalarField& u);

Complex integrate_volume(const CylinderChart& c, const ScalarField& f);
double integrate_volume_abs2(const CylinderChart& c, const ScalarField& f);

// Discrete L^p(M, dV_g) norm; p = infinity for the sup norm.
double norm_lp(const CylinderChart& c, const ScalarField& f, double p);
// Same norm restricted to nodes at coordinate distance >= collar from every
// face (used by the regularization rate studies to stay clear of the
// extension layer).
double norm_lp_interior(const CylinderChart& c, const ScalarField& f, double p, double collar);
// Pointwise |grad_g f| = sqrt(sum g^{jj} |d_j f|^2), returned as a field.
ScalarField grad_norm(const CylinderChart& c, const ScalarField& f);
// ||h grad u||_2 + ||u||_2
double h1_scl_norm(const CylinderChart& c, const ScalarField& u, double h);

// Boundary machinery. Unit outward normal on coordinate faces, dS_g weights.
BoundaryRegion boundary_split(const CylinderChart& c, int sign, double gamma_collar = 0.25);
Complex integrate_boundary(const BoundaryRegion& region, const ScalarField& f);
Complex integrate_boundary_where(const BoundaryRegion& region, const ScalarField& f,
                                 const std::function<bool(const BoundaryNode&)>& keep);
// One-sided normal derivative d_nu f at a boundary node.
Complex normal_derivative(const CylinderChart& c, const ScalarField& f, const BoundaryNode& bn);
// Contravariant components of the unit outward normal at a face node.
std::array<double, 3> unit_normal(const CylinderChart& c, const BoundaryNode& bn);

// Log-polar image of Euclidean points (y1 = log|x|, y' = x/|x| in polar
// normal coordinates about the north pole); warp c = exp(2 y1).
struct LogPolarPoint {
  double y1;
  double r;      // geodesic distance from the pole on S^2
  double theta;  // azimuth
  double warp;
};
std::vector<LogPolarPoint> log_polar_map(const std::vector<std::array<double, 3>>& points);

// (A, q) = (i X_flat / 2, <X,X>_g/4 - div_g(X)/2), div_g X = -d*(X_flat).
std::pair<OneForm, ScalarField> advection_to_magnetic(const CylinderChart& c,
                                                      const VectorField& X);

// Advection operator L_X u = -Lap_g u + X(u).
ScalarField advection_apply(const CylinderChart& c, const VectorField& X, const ScalarField& u);

}  // namespace geometry

// Named chart presets: "flat-cylinder", "exp-warp", "log-polar-image".
CylinderChart make_chart_preset(const std::string& name, std::array<int, 3> sizes);

}  // namespace mslab

#endif
