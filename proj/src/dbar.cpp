#include "mslab/dbar.hpp"

#include <cmath>

#include "mslab/geometry.hpp"

namespace mslab {
namespace dbar {

namespace {
const double kPi = 3.14159265358979323846;

int reflect_index(int i, int n) {
  const int period = 2 * (n - 1);
  int m = std::abs(i) % period;
  return m < n ? m : period - m;
}

double cutoff(double s, double w) {
  if (s <= 0.0) return 1.0;
  if (s >= w) return 0.0;
  const double t = s / w;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}
}  // namespace

CauchyKernelGrid CauchyKernelGrid::make_window(const PlanarGrid& window) {
  CauchyKernelGrid k;
  k.window = window;
  k.kernel.assign(static_cast<std::size_t>(2 * window.n1 - 1) * (2 * window.nr - 1),
                  Complex(0.0));
  for (int di = -(window.n1 - 1); di <= window.n1 - 1; ++di)
    for (int dj = -(window.nr - 1); dj <= window.nr - 1; ++dj) {
      Complex val(0.0);
      if (di != 0 || dj != 0) {
        const Complex z(di * window.d1, dj * window.dr);
        val = 1.0 / (kPi * z);
      }
      // di == dj == 0: the cell average of 1/(pi z) over a rectangle centered
      // at the origin is 0 (the integrand is odd in each variable).
      k.kernel[static_cast<std::size_t>(di + window.n1 - 1) * (2 * window.nr - 1) +
               (dj + window.nr - 1)] = val;
    }
  return k;
}

CauchyKernelGrid CauchyKernelGrid::make(const CylinderChart& chart, double pad_fraction) {
  const int n1 = chart.n1(), nr = chart.nr();
  const int pad1 = std::max(3, static_cast<int>(std::ceil(pad_fraction * (n1 - 1))) + 2);
  const int padr = std::max(3, static_cast<int>(std::ceil(pad_fraction * (nr - 1))) + 2);
  PlanarGrid w;
  w.n1 = n1 + 2 * pad1;
  w.nr = nr + 2 * padr;
  w.d1 = chart.dx(0);
  w.dr = chart.dx(1);
  w.x1_lo = chart.x1_lo() - pad1 * w.d1;
  w.r_lo = chart.r_lo() - padr * w.dr;
  CauchyKernelGrid k = make_window(w);
  k.pad1 = pad1;
  k.padr = padr;
  k.chart_n1 = n1;
  k.chart_nr = nr;
  return k;
}

PlanarField cauchy_transform(const PlanarField& rhs, const CauchyKernelGrid& kernel) {
  const PlanarGrid& g = kernel.window;
  if (rhs.grid.n1 != g.n1 || rhs.grid.nr != g.nr)
    throw DomainError("cauchy_transform: rhs grid does not match the kernel window");
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.nr; ++j)
      if ((i < 2 || i >= g.n1 - 2 || j < 2 || j >= g.nr - 2) && rhs(i, j) != Complex(0.0))
        throw DomainError("cauchy_transform: rhs support touches the window edge");

  PlanarField out(g);
  const double dA = g.d1 * g.dr;
  const int stride = 2 * g.nr - 1;
  // gather nonzero sources once; rhs is compactly supported
  std::vector<int> si, sj;
  std::vector<Complex> sv;
  for (int p = 0; p < g.n1; ++p)
    for (int q = 0; q < g.nr; ++q)
      if (rhs(p, q) != Complex(0.0)) {
        si.push_back(p);
        sj.push_back(q);
        sv.push_back(rhs(p, q) * dA);
      }
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.nr; ++j) {
      Complex acc = 0.0;
      const std::size_t base = static_cast<std::size_t>(i + g.n1 - 1) * stride + (j + g.nr - 1);
      for (std::size_t s = 0; s < sv.size(); ++s)
        acc += kernel.kernel[base - static_cast<std::size_t>(si[s]) * stride - sj[s]] * sv[s];
      out(i, j) = acc;
    }
  return out;
}

PlanarField dbar_apply(const PlanarField& f) {
  const PlanarGrid& g = f.grid;
  PlanarField out(g);
  auto d1 = [&](int i, int j) {
    if (i > 0 && i < g.n1 - 1) return (f(i + 1, j) - f(i - 1, j)) / (2.0 * g.d1);
    if (i == 0) return (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) / (2.0 * g.d1);
    return (3.0 * f(i, j) - 4.0 * f(i - 1, j) + f(i - 2, j)) / (2.0 * g.d1);
  };
  auto dr = [&](int i, int j) {
    if (j > 0 && j < g.nr - 1) return (f(i, j + 1) - f(i, j - 1)) / (2.0 * g.dr);
    if (j == 0) return (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * g.dr);
    return (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2)) / (2.0 * g.dr);
  };
  const Complex I(0.0, 1.0);
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.nr; ++j) out(i, j) = 0.5 * (d1(i, j) + I * dr(i, j));
  return out;
}

namespace {

// extend a chart (x1, r)-slice into the window by even reflection with a
// smooth cutoff that dies two cells before the window edge
PlanarField extend_slice(const CylinderChart& c, const std::vector<Complex>& slice,
                         const CauchyKernelGrid& k) {
  PlanarField out(k.window);
  const double w1 = (k.pad1 - 2) * k.window.d1;
  const double wr = (k.padr - 2) * k.window.dr;
  for (int wi = 0; wi < k.window.n1; ++wi)
    for (int wj = 0; wj < k.window.nr; ++wj) {
      const int i = wi - k.pad1, j = wj - k.padr;
      const int over1 = i < 0 ? -i : i - (k.chart_n1 - 1);
      const int overr = j < 0 ? -j : j - (k.chart_nr - 1);
      double chi = 1.0;
      if (over1 > 0) chi *= cutoff(over1 * k.window.d1, w1);
      if (overr > 0) chi *= cutoff(overr * k.window.dr, wr);
      if (chi == 0.0) continue;
      const int ii = reflect_index(i, k.chart_n1);
      const int jj = reflect_index(j, k.chart_nr);
      out(wi, wj) = chi * slice[static_cast<std::size_t>(ii) * k.chart_nr + jj];
    }
  return out;
}

}  // namespace

ScalarField phase_correction(const OneForm& A, int sign, const CauchyKernelGrid& kernel) {
  const CylinderChart& c = *A.chart;
  if (c.n1() != kernel.chart_n1 || c.nr() != kernel.chart_nr)
    throw DomainError("phase_correction: kernel window was built for another chart");
  if (sign != 1 && sign != -1) throw DomainError("phase_correction: sign must be +-1");
  ScalarField phi(c);
  const Complex I(0.0, 1.0);
  const double coef = sign > 0 ? -0.5 : 0.5;
  std::vector<Complex> slice(static_cast<std::size_t>(c.n1()) * c.nr());
  for (int k = 0; k < c.nth(); ++k) {
    for (int i = 0; i < c.n1(); ++i)
      for (int j = 0; j < c.nr(); ++j) {
        const std::size_t id = c.idx(i, j, k);
        slice[static_cast<std::size_t>(i) * c.nr() + j] =
            coef * (A.comp[0][id] + I * A.comp[1][id]);
      }
    PlanarField rhs = extend_slice(c, slice, kernel);
    PlanarField sol = cauchy_transform(rhs, kernel);
    for (int i = 0; i < c.n1(); ++i)
      for (int j = 0; j < c.nr(); ++j)
        phi(i, j, k) = sol(i + kernel.pad1, j + kernel.padr);
  }
  return phi;
}

PhaseEstimates phase_estimates(const OneForm& A, int sign, const std::vector<double>& taus,
                               const mollify::MollifierKernel& mkernel,
                               const CauchyKernelGrid& ckernel) {
  if (taus.size() < 2) throw DomainError("phase_estimates: need at least 2 rungs");
  const CylinderChart& c = *A.chart;
  const double n = c.dim();
  const double inf = std::numeric_limits<double>::infinity();
  ScalarField phi_rough = phase_correction(A, sign, ckernel);
  std::vector<double> sphi, sgrad, slap, llap, lgap;
  std::vector<double> sphi_n, sgrad_n, slap_n, llap_n, lgap_n;
  for (double tau : taus) {
    OneForm At = mollify::regularize_one_form(A, tau, mkernel);
    ScalarField pt = phase_correction(At, sign, ckernel);
    ScalarField gap(c);
    for (std::size_t id = 0; id < c.size(); ++id) gap.v[id] = pt.v[id] - phi_rough.v[id];
    ScalarField gn = geometry::grad_norm(c, pt);
    ScalarField lap = geometry::laplace_beltrami(c, pt);
    const double a = geometry::norm_lp(c, pt, inf);
    const double b = geometry::norm_lp(c, gn, inf);
    const double d = geometry::norm_lp(c, lap, inf);
    const double e = geometry::norm_lp(c, lap, n);
    const double f = geometry::norm_lp(c, gap, n);
    sphi.push_back(a);
    sgrad.push_back(b);
    slap.push_back(d);
    llap.push_back(e);
    lgap.push_back(f);
    sphi_n.push_back(a);
    sgrad_n.push_back(tau * b);
    slap_n.push_back(tau * tau * d);
    llap_n.push_back(tau * e);
    lgap_n.push_back(f / tau);
  }
  PhaseEstimates out;
  out.sup_phi = ConvergenceReport::make_big_o("phase sup O(1)", taus, sphi, sphi_n);
  out.sup_grad = ConvergenceReport::make_big_o("phase sup gradient O(1/tau)", taus, sgrad, sgrad_n);
  out.sup_lap =
      ConvergenceReport::make_big_o("phase sup laplacian O(1/tau^2)", taus, slap, slap_n);
  out.ln_lap = ConvergenceReport::make_little_o("phase Ln laplacian o(1/tau)", taus, llap, llap_n);
  out.ln_gap = ConvergenceReport::make_little_o("phase Ln gap o(tau)", taus, lgap, lgap_n);
  return out;
}

}  // namespace dbar
}  // namespace mslab
