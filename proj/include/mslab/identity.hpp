#ifndef MSLAB_IDENTITY_HPP
#define MSLAB_IDENTITY_HPP

#include "mslab/cgo.hpp"
#include "mslab/geometry.hpp"

namespace mslab {
namespace identity {

enum class ScenarioKind { Gauge, Generic };

// Coefficient pair on a shared chart. Gauge scenarios satisfy
// A2 = A1 + d(phi), q2 = q1, phi = 0 on the boundary.
struct ScenarioPair {
  const CylinderChart* chart = nullptr;
  OneForm A1, A2;
  ScalarField q1, q2;
  ScenarioKind kind = ScenarioKind::Generic;
  ScalarField gauge_phi;  // only meaningful for Gauge

  OneForm delta() const;  // A1 - A2
};

// |(L_{A,q} u, v) - (u, L_{conj A, conj q} v) - boundary terms| of the
// magnetic Green formula, boundary dualities as plain quadrature pairings.
double green_residual(const CylinderChart& c, const OneForm& A, const ScalarField& q,
                      const ScalarField& u, const ScalarField& v);

struct GaugePotential {
  ScalarField phi;           // boundary mean removed
  double path_disagreement;  // two path orderings compared in sup norm
  double boundary_sup;       // max |phi| over the boundary
};

// d(delta) measured against the size of the derivative matrix itself, so
// sampled exact forms (pure truncation defect) separate cleanly from
// genuinely non-closed ones.
struct ClosednessDefect {
  double absolute = 0.0;          // sup of the antisymmetric combinations
  double derivative_scale = 0.0;  // sup over off-diagonal first derivatives
  double relative = 0.0;
};

ClosednessDefect exterior_derivative_defect(const CylinderChart& c, const OneForm& delta);

// Coordinate-path primitive of a closed one-form on the box chart.
GaugePotential gauge_potential(const CylinderChart& c, const OneForm& delta,
                               double closed_tol = 0.2);

// w2 = e^{-i phi} u1; throws if phi is not ~0 on the boundary.
ScalarField gauge_matched_solution(const ScalarField& u1, const ScalarField& phi,
                                   double boundary_tol = 1e-6);

// Volume side of the partial-data integral identity, evaluated through the
// (a + r)-representations so the opposite exponentials cancel analytically.
Complex integral_identity_lhs(const ScenarioPair& pair, const cgo::CGOSolution& u1,
                              const cgo::CGOSolution& u2);
// Reference evaluation with explicit exponentials (moderate 1/h only).
Complex integral_identity_lhs_naive(const ScenarioPair& pair, const cgo::CGOSolution& u1,
                                    const cgo::CGOSolution& u2);

struct BoundaryTerms {
  Complex J;  // int_{dM \ Gamma} d_nu(w2 - u1) u2 dS
  Complex K;  // int_{dM \ Gamma} <A1 - A2, nu> u1 u2 dS
};

// Gauge scenarios only: w2 = e^{-i phi} u1 is the matched solution.
BoundaryTerms boundary_terms(const ScenarioPair& pair, const cgo::CGOSolution& u1,
                             const cgo::CGOSolution& u2, const BoundaryRegion& region);

// Boundary side of the identity: -J + iK.
Complex integral_identity_rhs(const ScenarioPair& pair, const cgo::CGOSolution& u1,
                              const cgo::CGOSolution& u2, const BoundaryRegion& region);

// int_M <delta, d rho>_g |g|^{-1/2} c e^{i Phi} a0 b dV_g with
// a0 = e^{i lambda (x1 + i r)}.
Complex magnetic_limit_functional(const CylinderChart& c, const OneForm& delta,
                                  const ScalarField& Phi, double lambda,
                                  const std::function<double(double)>& b);

// int_M dq c b(theta) e^{i lambda (x1 + i r)} dx1 dr dtheta (flat measure).
Complex electric_data(const CylinderChart& c, const ScalarField& dq, double lambda,
                      const std::function<double(double)>& b);

}  // namespace identity
}  // namespace mslab

#endif
