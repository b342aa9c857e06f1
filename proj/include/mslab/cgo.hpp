#ifndef MSLAB_CGO_HPP
#define MSLAB_CGO_HPP

#include "mslab/dbar.hpp"
#include "mslab/mollify.hpp"
#include "mslab/operators.hpp"
#include "mslab/report.hpp"

namespace mslab {
namespace cgo {

// Probe u = e^{s rho / h} (a + r) with rho = x1 + i r.  For sign s the probe
// solves L_{sA, q} u = 0: the plus branch carries the coefficient pair as
// given, the minus branch carries its negative, matching how opposite-sign
// probes pair up in the integral identities.
struct CGOSolution {
  const CylinderChart* chart = nullptr;
  double h = 0.0;
  double tau = 0.0;
  int sign = 1;
  double lambda = 0.0;
  ScalarField rho;                // x1 + i r
  ScalarField amplitude;          // a
  ScalarField phase_correction;   // Phi_tau
  ScalarField remainder;          // r (zero boundary values)
  std::vector<double> b_samples;  // b(theta_k)
  NormLedger norm_ledger;

  // a + r
  ScalarField core() const;
  // e^{s rho / h} (a + r); safe at desk-scale h
  ScalarField field() const;
};

struct AmplitudeParts {
  ScalarField amplitude;
  ScalarField phase_correction;
  OneForm A_tau;  // mollified coefficient as passed (before the sign pairing)
  double tau = 0.0;
};

// a = |g|^{-1/4} c^{1/2} e^{i Phi_tau} e^{i lambda (x1 + i r)} b(theta) with
// tau = kappa sqrt(h) and Phi_tau from the dbar solve for the coefficient
// s*A_tau.  b must vanish on the theta boundary.
AmplitudeParts build_amplitude(const CylinderChart& c, const OneForm& A, double h, int sign,
                               double lambda, const std::function<double(double)>& b,
                               const mollify::MollifierKernel& mkernel,
                               const dbar::CauchyKernelGrid& ckernel, double kappa = 1.0);

// Residual of the transport equation
//   4 dbar a + (dbar log(|g|/c^2)) a + 2 i ((B_tau)_1 + i (B_tau)_r) a
// for the effective coefficient B_tau the amplitude was built with.
ScalarField transport_residual(const CylinderChart& c, const ScalarField& a,
                               const OneForm& B_tau);

struct RemainderSource {
  ScalarField v;
  NormLedger term_norms;  // L2 norms of the individual terms
};

// v = -( -h^2 Lap a - 2i h^2 <B, da> - 2i s h <B - B_tau, d rho> a
//        + i h^2 (d*B) a + h^2 (<B,B> + q) a ),  B = effective coefficient
RemainderSource remainder_source(const CylinderChart& c, const OneForm& B, const OneForm& B_tau,
                                 const ScalarField& q, const ScalarField& a, double h, int sign);

struct RemainderSolve {
  ScalarField r;
  double h1_scl = 0.0;
  double solver_residual = 0.0;
  std::string method;
};

// Solves e^{-s rho/h} (h^2 L_{B,q}) e^{s rho/h} r = v with zero boundary
// values; the conjugation uses the full complex phase.
RemainderSolve solve_remainder(const CylinderChart& c, const OneForm& B, const ScalarField& q,
                               double h, int sign, const ScalarField& v);

CGOSolution build_cgo(const CylinderChart& c, const OneForm& A, const ScalarField& q, double h,
                      int sign, double lambda, const std::function<double(double)>& b,
                      const mollify::MollifierKernel& mkernel,
                      const dbar::CauchyKernelGrid& ckernel, double kappa = 1.0);

struct LadderEntry {
  double h;
  NormLedger ledger;
};

struct CGOLadder {
  std::vector<LadderEntry> rungs;
  std::vector<ConvergenceReport> reports;  // one per tracked quantity
  bool pass() const {
    for (const auto& r : reports)
      if (!r.pass) return false;
    return true;
  }
};

// Measures the norm display across an h-ladder; one chart per rung (spacing
// should resolve h at the finest rung).
CGOLadder cgo_ladder(const std::vector<std::pair<double, const CylinderChart*>>& rungs,
                     const std::function<OneForm(const CylinderChart&)>& A_of,
                     const std::function<ScalarField(const CylinderChart&)>& q_of, int sign,
                     double lambda, const std::function<double(double)>& b,
                     const mollify::MollifierKernel& mkernel, double kappa = 1.0);

}  // namespace cgo
}  // namespace mslab

#endif
