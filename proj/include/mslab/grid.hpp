#ifndef MSLAB_GRID_HPP
#define MSLAB_GRID_HPP

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mslab {

using Complex = std::complex<double>;

// Tensor-product chart on the cylinder R x M0 in coordinates (x1, r, theta).
// Metric g = c * diag(1, 1, density^2) with warp c > 0 and transversal
// density |g0|^{1/2}(r,theta) > 0 (density = r for the Euclidean disk in
// polar normal coordinates, sin r for a spherical cap).
class CylinderChart {
public:
  CylinderChart(std::array<double, 2> x1_range, std::array<double, 2> r_range,
                std::array<double, 2> theta_range, std::array<int, 3> sizes,
                std::function<double(double, double, double)> warp,
                std::function<double(double, double)> density, int dimension = 3);

  int n1() const { return n_[0]; }
  int nr() const { return n_[1]; }
  int nth() const { return n_[2]; }
  int dim() const { return dim_; }
  std::size_t size() const { return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2]; }

  double x1(int i) const { return x1_lo_ + i * d1_; }
  double r(int j) const { return r_lo_ + j * dr_; }
  double theta(int k) const { return th_lo_ + k * dth_; }
  double x1_lo() const { return x1_lo_; }
  double x1_hi() const { return x1_lo_ + (n_[0] - 1) * d1_; }
  double r_lo() const { return r_lo_; }
  double r_hi() const { return r_lo_ + (n_[1] - 1) * dr_; }
  double theta_lo() const { return th_lo_; }
  double theta_hi() const { return th_lo_ + (n_[2] - 1) * dth_; }
  double dx(int axis) const { return axis == 0 ? d1_ : axis == 1 ? dr_ : dth_; }

  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_[1] + j) * n_[2] + k;
  }

  double warp(std::size_t id) const { return warp_[id]; }
  double warp(int i, int j, int k) const { return warp_[idx(i, j, k)]; }
  // |g0|^{1/2} at the node
  double density(std::size_t id) const { return dens_[id]; }
  double density(int i, int j, int k) const { return dens_[idx(i, j, k)]; }
  // |g|^{1/2} = c^{n/2} * density
  double sqrt_det_g(std::size_t id) const { return sqrtg_[id]; }
  double sqrt_det_g(int i, int j, int k) const { return sqrtg_[idx(i, j, k)]; }
  // inverse metric diagonal (g^{11}, g^{rr}, g^{thth})
  std::array<double, 3> metric_inv(std::size_t id) const {
    const double ci = 1.0 / warp_[id];
    const double d = dens_[id];
    return {ci, ci, ci / (d * d)};
  }

  // trapezoid weight of the 1d rule along an axis (without the metric factor)
  double line_weight(int axis, int index) const {
    const int n = n_[axis];
    const double d = dx(axis);
    return (index == 0 || index == n - 1) ? 0.5 * d : d;
  }

  bool same_grid(const CylinderChart& o) const;

private:
  std::array<int, 3> n_;
  int dim_;
  double x1_lo_, d1_, r_lo_, dr_, th_lo_, dth_;
  std::vector<double> warp_, dens_, sqrtg_;
};

// Complex grid samples of a function on a chart.
struct ScalarField {
  const CylinderChart* chart = nullptr;
  std::vector<Complex> v;

  ScalarField() = default;
  explicit ScalarField(const CylinderChart& c) : chart(&c), v(c.size(), Complex(0.0)) {}

  Complex& operator()(int i, int j, int k) { return v[chart->idx(i, j, k)]; }
  Complex operator()(int i, int j, int k) const { return v[chart->idx(i, j, k)]; }
};

// One-form A = A_1 dx1 + A_r dr + A_th dtheta (covariant components).
struct OneForm {
  const CylinderChart* chart = nullptr;
  std::array<std::vector<Complex>, 3> comp;

  OneForm() = default;
  explicit OneForm(const CylinderChart& c) : chart(&c) {
    for (auto& a : comp) a.assign(c.size(), Complex(0.0));
  }
};

// Vector field with contravariant components.
struct VectorField {
  const CylinderChart* chart = nullptr;
  std::array<std::vector<Complex>, 3> comp;

  VectorField() = default;
  explicit VectorField(const CylinderChart& c) : chart(&c) {
    for (auto& a : comp) a.assign(c.size(), Complex(0.0));
  }
};

ScalarField sample_scalar(const CylinderChart& c,
                          const std::function<Complex(double, double, double)>& f);
OneForm sample_one_form(const CylinderChart& c,
                        const std::function<Complex(double, double, double)>& f1,
                        const std::function<Complex(double, double, double)>& fr,
                        const std::function<Complex(double, double, double)>& fth);

// Boundary face ids: 0/1 = x1 min/max, 2/3 = r min/max, 4/5 = theta min/max.
enum class BoundaryFlag : std::uint8_t { Plus, Minus, GammaOnly };

struct BoundaryNode {
  int face;
  int i, j, k;
  BoundaryFlag flag;
  double area_weight;  // dS_g quadrature weight
  double dnu_phi;      // normal derivative of the limiting weight at the node
};

struct BoundaryRegion {
  const CylinderChart* chart = nullptr;
  int weight_sign = 1;  // phi = sign * x1
  std::vector<BoundaryNode> nodes;

  double area(BoundaryFlag f) const;
  double total_area() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mslab

#endif
