#ifndef MSLAB_DBAR_HPP
#define MSLAB_DBAR_HPP

#include "mslab/grid.hpp"
#include "mslab/mollify.hpp"
#include "mslab/report.hpp"

namespace mslab {
namespace dbar {

struct PlanarGrid {
  int n1 = 0, nr = 0;
  double x1_lo = 0.0, r_lo = 0.0, d1 = 0.0, dr = 0.0;

  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * nr + j; }
  double x1(int i) const { return x1_lo + i * d1; }
  double r(int j) const { return r_lo + j * dr; }
  std::size_t size() const { return static_cast<std::size_t>(n1) * nr; }
};

struct PlanarField {
  PlanarGrid grid;
  std::vector<Complex> v;

  explicit PlanarField(const PlanarGrid& g = {}) : grid(g), v(g.size(), Complex(0.0)) {}
  Complex& operator()(int i, int j) { return v[grid.idx(i, j)]; }
  Complex operator()(int i, int j) const { return v[grid.idx(i, j)]; }
};

// Window around the chart's (x1, r) rectangle with the Cauchy kernel
// 1/(pi z) tabulated on the offset lattice. The singular cell carries its
// exact cell average, which vanishes by parity for a centered rectangle.
struct CauchyKernelGrid {
  PlanarGrid window;
  int pad1 = 0, padr = 0;  // chart rectangle occupies [pad1, pad1+n1) x [padr, padr+nr)
  int chart_n1 = 0, chart_nr = 0;
  std::vector<Complex> kernel;  // (2*n1-1) x (2*nr-1) offset table

  Complex at_offset(int di, int dj) const {
    return kernel[static_cast<std::size_t>(di + window.n1 - 1) * (2 * window.nr - 1) +
                  (dj + window.nr - 1)];
  }

  static CauchyKernelGrid make(const CylinderChart& chart, double pad_fraction = 0.25);
  static CauchyKernelGrid make_window(const PlanarGrid& window);
};

// Phi = K * rhs over the window (direct summation). rhs must vanish on the
// two cells nearest each window edge.
PlanarField cauchy_transform(const PlanarField& rhs, const CauchyKernelGrid& kernel);

// dbar = (d_x1 + i d_r)/2, centered inside and one-sided at edges.
PlanarField dbar_apply(const PlanarField& f);

// Per-theta-slice phase correction: Phi solves
//   dbar Phi = -sign/2 * (A_1 + i A_r)
// on the (x1, r) window; theta enters as a parameter. The slice is extended
// into the window by even reflection with a smooth cutoff.
ScalarField phase_correction(const OneForm& A, int sign, const CauchyKernelGrid& kernel);

struct PhaseEstimates {
  ConvergenceReport sup_phi;      // ||Phi_tau||_inf = O(1)
  ConvergenceReport sup_grad;     // ||grad_g Phi_tau||_inf = O(1/tau)
  ConvergenceReport sup_lap;      // ||Lap_g Phi_tau||_inf = O(1/tau^2)
  ConvergenceReport ln_lap;       // ||Lap_g Phi_tau||_n = o(1/tau)
  ConvergenceReport ln_gap;       // ||Phi_tau - Phi||_n = o(tau)
  bool pass() const {
    return sup_phi.pass && sup_grad.pass && sup_lap.pass && ln_lap.pass && ln_gap.pass;
  }
};

PhaseEstimates phase_estimates(const OneForm& A, int sign, const std::vector<double>& taus,
                               const mollify::MollifierKernel& mkernel,
                               const CauchyKernelGrid& ckernel);

}  // namespace dbar
}  // namespace mslab

#endif
