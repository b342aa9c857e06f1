#ifndef MSLAB_OPERATORS_HPP
#define MSLAB_OPERATORS_HPP

#include <memory>

#include "mslab/grid.hpp"

namespace mslab {
namespace ops {

// Conjugation weight psi for P = e^{psi/h} (h^2 L_{A,q}) e^{-psi/h}, carried
// with its differential data so exact cancellations (eikonal) survive.
struct WeightData {
  ScalarField psi;
  OneForm dpsi;
  ScalarField lap_psi;   // Lap_g psi
  ScalarField dpsi_sq;   // <dpsi, dpsi>_g (bilinear)
};

WeightData weight_zero(const CylinderChart& c);
// psi = sign * x1
WeightData weight_linear(const CylinderChart& c, int sign);
// psi = sign*x1 + (h/2eps) x1^2 (convexified)
WeightData weight_convexified(const CylinderChart& c, int sign, double h, double eps);
// psi = -s * rho with rho = x1 + i r; <dpsi,dpsi>_g = 0 identically
WeightData weight_cgo(const CylinderChart& c, int branch_sign);

// P u = -h^2 Lap_g u + 2h <dpsi, du>_g + h (Lap_g psi) u - <dpsi,dpsi>_g u
//       + i h^2 (d*A) u - 2i h^2 <A, du>_g + 2i h <A, dpsi>_g u
//       + h^2 (<A,A>_g + q) u
struct ConjugatedOperator {
  const CylinderChart* chart = nullptr;
  double h = 1.0;
  WeightData weight;
  OneForm A;
  ScalarField dstar_A;   // d*A
  ScalarField zeroth;    // h(Lap psi) - <dpsi,dpsi> + i h^2 d*A + 2i h <A,dpsi> + h^2(<A,A>+q)
  OneForm first_order;   // coefficient of d_j u: 2h g^{jj} dpsi_j - 2i h^2 g^{jj} A_j

  static ConjugatedOperator make(const CylinderChart& c, const OneForm& A, const ScalarField& q,
                                 const WeightData& w, double h);
  ScalarField apply(const ScalarField& u) const;
};

// Zero-boundary sparse realization on interior nodes.
struct DirichletSolveResult {
  ScalarField solution;       // zero on the boundary
  double residual = 0.0;      // ||P x - rhs||_2 / ||rhs||_2 (vector norms)
  std::string method;         // "sparse-lu", "bicgstab-ilut", "least-squares"
  int iterations = 0;
};

DirichletSolveResult solve_dirichlet(const ConjugatedOperator& op, const ScalarField& rhs);

// Solve (1 - h^2 Lap_g) w = v with zero boundary values (real SPD system
// applied to the real and imaginary parts separately), then return
// sqrt(Re <v, w>_{L^2(dV_g)}): the discrete dual H^{-1}_scl norm.
double hminus1_scl_norm(const CylinderChart& c, const ScalarField& v, double h);

// Same norm with the Riesz system factored once and reused across many
// right-hand sides.
class Hminus1Solver {
public:
  Hminus1Solver(const CylinderChart& c, double h);
  ~Hminus1Solver();
  Hminus1Solver(Hminus1Solver&&) noexcept;
  Hminus1Solver& operator=(Hminus1Solver&&) noexcept;
  double norm(const ScalarField& v) const;
  ScalarField riesz(const ScalarField& v) const;  // the representer w

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ops
}  // namespace mslab

#endif
