#include "mslab/operators.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

#include "mslab/geometry.hpp"

namespace mslab {
namespace ops {

WeightData weight_zero(const CylinderChart& c) {
  WeightData w;
  w.psi = ScalarField(c);
  w.dpsi = OneForm(c);
  w.lap_psi = ScalarField(c);
  w.dpsi_sq = ScalarField(c);
  return w;
}

WeightData weight_linear(const CylinderChart& c, int sign) {
  WeightData w = weight_zero(c);
  w.psi = sample_scalar(c, [&](double x1, double, double) { return Complex(sign * x1); });
  for (std::size_t id = 0; id < c.size(); ++id) w.dpsi.comp[0][id] = sign;
  w.lap_psi = geometry::laplace_beltrami(c, w.psi);
  w.dpsi_sq = geometry::inner(c, w.dpsi, w.dpsi);
  return w;
}

WeightData weight_convexified(const CylinderChart& c, int sign, double h, double eps) {
  if (!(eps > 0.0) || !(h > 0.0)) throw DomainError("convexified weight needs h, eps > 0");
  WeightData w = weight_zero(c);
  w.psi = sample_scalar(c, [&](double x1, double, double) {
    return Complex(sign * x1 + 0.5 * (h / eps) * x1 * x1);
  });
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k)
        w.dpsi.comp[0][c.idx(i, j, k)] = sign + (h / eps) * c.x1(i);
  w.lap_psi = geometry::laplace_beltrami(c, w.psi);
  w.dpsi_sq = geometry::inner(c, w.dpsi, w.dpsi);
  return w;
}

WeightData weight_cgo(const CylinderChart& c, int branch_sign) {
  WeightData w = weight_zero(c);
  const Complex I(0.0, 1.0);
  const double s = branch_sign;
  w.psi = sample_scalar(c, [&](double x1, double r, double) { return -s * (x1 + I * r); });
  for (std::size_t id = 0; id < c.size(); ++id) {
    w.dpsi.comp[0][id] = -s;
    w.dpsi.comp[1][id] = -s * I;
  }
  w.lap_psi = geometry::laplace_beltrami(c, w.psi);
  // eikonal: <d rho, d rho>_g = (1 + i^2)/c = 0 exactly; keep it exact
  w.dpsi_sq = ScalarField(c);
  return w;
}

ConjugatedOperator ConjugatedOperator::make(const CylinderChart& c, const OneForm& A,
                                            const ScalarField& q, const WeightData& w, double h) {
  ConjugatedOperator op;
  op.chart = &c;
  op.h = h;
  op.weight = w;
  op.A = A;
  op.dstar_A = geometry::codifferential(c, A);
  ScalarField a_a = geometry::inner(c, A, A);
  ScalarField a_dpsi = geometry::inner(c, A, w.dpsi);
  op.zeroth = ScalarField(c);
  const Complex I(0.0, 1.0);
  for (std::size_t id = 0; id < c.size(); ++id)
    op.zeroth.v[id] = h * w.lap_psi.v[id] - w.dpsi_sq.v[id] + I * h * h * op.dstar_A.v[id] +
                      2.0 * I * h * a_dpsi.v[id] + h * h * (a_a.v[id] + q.v[id]);
  op.first_order = OneForm(c);
  for (int axis = 0; axis < 3; ++axis)
    for (std::size_t id = 0; id < c.size(); ++id) {
      const double gjj = c.metric_inv(id)[axis];
      op.first_order.comp[axis][id] =
          gjj * (2.0 * h * w.dpsi.comp[axis][id] - 2.0 * I * h * h * A.comp[axis][id]);
    }
  return op;
}

ScalarField ConjugatedOperator::apply(const ScalarField& u) const {
  const CylinderChart& c = *chart;
  ScalarField lap = geometry::laplace_beltrami(c, u);
  OneForm du = geometry::differential(c, u);
  ScalarField out(c);
  for (std::size_t id = 0; id < c.size(); ++id) {
    Complex first = 0.0;
    for (int axis = 0; axis < 3; ++axis) first += first_order.comp[axis][id] * du.comp[axis][id];
    out.v[id] = -h * h * lap.v[id] + first + zeroth.v[id] * u.v[id];
    if (!(std::abs(out.v[id]) < 1e300))
      throw DomainError("conjugated operator overflow: intermediate exceeded 1e300");
  }
  return out;
}

namespace {

using SpMat = Eigen::SparseMatrix<Complex>;
using CVec = Eigen::VectorXcd;

struct InteriorMap {
  const CylinderChart* chart;
  std::vector<std::ptrdiff_t> to_interior;  // -1 on the boundary
  std::vector<std::size_t> to_grid;

  explicit InteriorMap(const CylinderChart& c) : chart(&c) {
    to_interior.assign(c.size(), -1);
    for (int i = 1; i < c.n1() - 1; ++i)
      for (int j = 1; j < c.nr() - 1; ++j)
        for (int k = 1; k < c.nth() - 1; ++k) {
          to_interior[c.idx(i, j, k)] = static_cast<std::ptrdiff_t>(to_grid.size());
          to_grid.push_back(c.idx(i, j, k));
        }
  }
  std::size_t size() const { return to_grid.size(); }
};

// Interior stencil identical to the matrix-free apply: compact staggered
// second-order part plus centered first-order terms.
SpMat assemble(const ConjugatedOperator& op, const InteriorMap& map) {
  const CylinderChart& c = *op.chart;
  const double h = op.h;
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(map.size() * 7);
  const std::size_t strides[3] = {static_cast<std::size_t>(c.nr()) * c.nth(),
                                  static_cast<std::size_t>(c.nth()), 1};
  auto coef = [&](std::size_t id, int axis) {
    return c.sqrt_det_g(id) * c.metric_inv(id)[axis];
  };
  for (std::size_t row = 0; row < map.size(); ++row) {
    const std::size_t id = map.to_grid[row];
    Complex diag = op.zeroth.v[id];
    for (int axis = 0; axis < 3; ++axis) {
      const std::size_t st = strides[axis];
      const double d = c.dx(axis);
      const double wp = 0.5 * (coef(id, axis) + coef(id + st, axis));
      const double wm = 0.5 * (coef(id, axis) + coef(id - st, axis));
      const double inv = 1.0 / (c.sqrt_det_g(id) * d * d);
      // -h^2 * divergence-form second difference
      diag += h * h * (wp + wm) * inv;
      const Complex offp = -h * h * wp * inv + op.first_order.comp[axis][id] / (2.0 * d);
      const Complex offm = -h * h * wm * inv - op.first_order.comp[axis][id] / (2.0 * d);
      const std::ptrdiff_t cp = map.to_interior[id + st];
      const std::ptrdiff_t cm = map.to_interior[id - st];
      if (cp >= 0) trips.emplace_back(static_cast<int>(row), static_cast<int>(cp), offp);
      if (cm >= 0) trips.emplace_back(static_cast<int>(row), static_cast<int>(cm), offm);
    }
    trips.emplace_back(static_cast<int>(row), static_cast<int>(row), diag);
  }
  SpMat M(static_cast<int>(map.size()), static_cast<int>(map.size()));
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();
  return M;
}

}  // namespace

DirichletSolveResult solve_dirichlet(const ConjugatedOperator& op, const ScalarField& rhs) {
  const CylinderChart& c = *op.chart;
  if (rhs.chart == nullptr || !c.same_grid(*rhs.chart))
    throw DomainError("solve_dirichlet: rhs chart mismatch");
  InteriorMap map(c);
  SpMat M = assemble(op, map);
  CVec b(map.size());
  for (std::size_t row = 0; row < map.size(); ++row) b[row] = rhs.v[map.to_grid[row]];

  DirichletSolveResult out;
  out.solution = ScalarField(c);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.method = "trivial";
    return out;
  }
  CVec x;
  bool ok = false;
  if (map.size() <= 60000) {
    Eigen::SparseLU<SpMat> lu;
    lu.compute(M);
    if (lu.info() == Eigen::Success) {
      x = lu.solve(b);
      ok = (lu.info() == Eigen::Success);
      out.method = "sparse-lu";
    }
  }
  if (!ok) {
    Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<Complex>> it;
    it.preconditioner().setDroptol(1e-4);
    it.preconditioner().setFillfactor(20);
    it.setTolerance(1e-12);
    it.setMaxIterations(4000);
    it.compute(M);
    if (it.info() == Eigen::Success) {
      x = it.solve(b);
      out.iterations = static_cast<int>(it.iterations());
      ok = (it.info() == Eigen::Success && x.allFinite());
      out.method = "bicgstab-ilut";
    }
  }
  if (!ok) {
    // near-singular fallback
    Eigen::LeastSquaresConjugateGradient<SpMat> ls;
    ls.setTolerance(1e-12);
    ls.setMaxIterations(20000);
    ls.compute(M);
    x = ls.solve(b);
    out.iterations = static_cast<int>(ls.iterations());
    out.method = "least-squares";
    if (!x.allFinite()) throw DomainError("solve_dirichlet: discrete operator is singular");
  }
  out.residual = (M * x - b).norm() / bnorm;
  for (std::size_t row = 0; row < map.size(); ++row) out.solution.v[map.to_grid[row]] = x[row];
  return out;
}

struct Hminus1Solver::Impl {
  const CylinderChart* chart;
  InteriorMap map;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;

  Impl(const CylinderChart& c, double h) : chart(&c), map(c) {
    // (1 - h^2 Lap_g) symmetrized by the |g|^{1/2} row weight
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(map.size() * 7);
    const std::size_t strides[3] = {static_cast<std::size_t>(c.nr()) * c.nth(),
                                    static_cast<std::size_t>(c.nth()), 1};
    auto coef = [&](std::size_t id, int axis) {
      return c.sqrt_det_g(id) * c.metric_inv(id)[axis];
    };
    for (std::size_t row = 0; row < map.size(); ++row) {
      const std::size_t id = map.to_grid[row];
      double diag = c.sqrt_det_g(id);
      for (int axis = 0; axis < 3; ++axis) {
        const std::size_t st = strides[axis];
        const double d = c.dx(axis);
        const double wp = 0.5 * (coef(id, axis) + coef(id + st, axis));
        const double wm = 0.5 * (coef(id, axis) + coef(id - st, axis));
        diag += h * h * (wp + wm) / (d * d);
        const std::ptrdiff_t cp = map.to_interior[id + st];
        const std::ptrdiff_t cm = map.to_interior[id - st];
        if (cp >= 0)
          trips.emplace_back(static_cast<int>(row), static_cast<int>(cp), -h * h * wp / (d * d));
        if (cm >= 0)
          trips.emplace_back(static_cast<int>(row), static_cast<int>(cm), -h * h * wm / (d * d));
      }
      trips.emplace_back(static_cast<int>(row), static_cast<int>(row), diag);
    }
    Eigen::SparseMatrix<double> M(static_cast<int>(map.size()), static_cast<int>(map.size()));
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();
    ldlt.compute(M);
    if (ldlt.info() != Eigen::Success)
      throw DomainError("hminus1 solver: factorization of the Riesz system failed");
  }
};

Hminus1Solver::Hminus1Solver(const CylinderChart& c, double h)
    : impl_(std::make_unique<Impl>(c, h)) {}
Hminus1Solver::~Hminus1Solver() = default;
Hminus1Solver::Hminus1Solver(Hminus1Solver&&) noexcept = default;
Hminus1Solver& Hminus1Solver::operator=(Hminus1Solver&&) noexcept = default;

ScalarField Hminus1Solver::riesz(const ScalarField& v) const {
  const CylinderChart& c = *impl_->chart;
  if (v.chart == nullptr || !c.same_grid(*v.chart))
    throw DomainError("hminus1 solver: chart mismatch");
  const auto& map = impl_->map;
  Eigen::VectorXd re(map.size()), im(map.size());
  for (std::size_t row = 0; row < map.size(); ++row) {
    const std::size_t id = map.to_grid[row];
    re[row] = v.v[id].real() * c.sqrt_det_g(id);
    im[row] = v.v[id].imag() * c.sqrt_det_g(id);
  }
  Eigen::VectorXd xr = impl_->ldlt.solve(re);
  Eigen::VectorXd xi = impl_->ldlt.solve(im);
  ScalarField w(c);
  for (std::size_t row = 0; row < map.size(); ++row)
    w.v[map.to_grid[row]] = Complex(xr[row], xi[row]);
  return w;
}

double Hminus1Solver::norm(const ScalarField& v) const {
  const CylinderChart& c = *impl_->chart;
  ScalarField w = riesz(v);
  Complex s = 0.0;
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        const std::size_t id = c.idx(i, j, k);
        const double lw =
            c.line_weight(0, i) * c.line_weight(1, j) * c.line_weight(2, k) * c.sqrt_det_g(id);
        s += lw * v.v[id] * std::conj(w.v[id]);
      }
  return std::sqrt(std::max(0.0, s.real()));
}

double hminus1_scl_norm(const CylinderChart& c, const ScalarField& v, double h) {
  return Hminus1Solver(c, h).norm(v);
}

}  // namespace ops
}  // namespace mslab
