#ifndef MSLAB_MOLLIFY_HPP
#define MSLAB_MOLLIFY_HPP

#include "mslab/grid.hpp"
#include "mslab/report.hpp"

namespace mslab {
namespace mollify {

// Radial probability kernel: Psi(x) = normalization * profile(|x|), support
// |x| <= 1, scaled to Psi_tau(x) = tau^{-n} Psi(x/tau).
struct MollifierKernel {
  std::vector<double> profile;   // samples of the unnormalized radial profile on [0,1]
  double support_radius = 1.0;
  double normalization = 1.0;    // makes the R^3 integral of Psi equal 1

  double radial(double t) const;  // normalized Psi at radius t (0 outside support)
  // continuum mass 4*pi*int t^2 Psi(t) dt of the normalized kernel
  double mass() const;

  static MollifierKernel standard_bump(int samples = 2048);
};

// f * Psi_tau on the chart. The field is extended outside the chart by even
// reflection across each face followed by a smooth cutoff of width
// min(2*tau, axis extent); the discrete kernel is renormalized to unit mass
// so constants are reproduced exactly away from the extension zone.
ScalarField mollify_field(const ScalarField& f, double tau, const MollifierKernel& kernel);
OneForm mollify_form(const OneForm& A, double tau, const MollifierKernel& kernel);

// sum_{|alpha|=k} of coordinate partials, k = 1 or 2
ScalarField nabla_k_sum(const CylinderChart& c, const ScalarField& f, int k);

struct RateStudy {
  ConvergenceReport lp_gap;         // ||f_tau - f||_p / tau, must decrease
  ConvergenceReport hess_lp;        // tau * ||nabla^2 f_tau||_p, must decrease
  ConvergenceReport sup_k1;         // tau   * ||nabla f_tau||_inf, bounded
  ConvergenceReport sup_k2;         // tau^2 * ||nabla^2 f_tau||_inf, bounded
  bool pass() const { return lp_gap.pass && hess_lp.pass && sup_k1.pass && sup_k2.pass; }
};

RateStudy rate_study_lp(const ScalarField& f, double p, const std::vector<double>& taus,
                        const MollifierKernel& kernel);

OneForm regularize_one_form(const OneForm& A, double tau, const MollifierKernel& kernel);

struct OneFormRates {
  ConvergenceReport gap_ln;    // ||A - A_tau||_n / tau
  ConvergenceReport hess_ln;   // tau * ||cov^2 A_tau^sharp||_n
  ConvergenceReport sup_k1;    // tau * ||cov A_tau^sharp||_inf
  ConvergenceReport sup_k2;    // tau^2 * ||cov^2 A_tau^sharp||_inf
  bool pass() const { return gap_ln.pass && hess_ln.pass && sup_k1.pass && sup_k2.pass; }
};

OneFormRates regularize_rates(const OneForm& A, const std::vector<double>& taus,
                              const MollifierKernel& kernel);

// Frobenius-norm fields of the first/second covariant derivative of a vector
// field (coordinate derivatives plus Christoffel corrections of the chart
// metric).
ScalarField covariant_deriv_norm(const CylinderChart& c, const VectorField& X);
ScalarField covariant_deriv2_norm(const CylinderChart& c, const VectorField& X);

}  // namespace mollify
}  // namespace mslab

#endif
