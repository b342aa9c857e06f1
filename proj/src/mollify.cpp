#include "mslab/mollify.hpp"

#include <algorithm>
#include <cmath>

#include "mslab/geometry.hpp"

namespace mslab {
namespace mollify {

namespace {

double bump_profile(double t) {
  const double t2 = t * t;
  return t2 < 1.0 ? std::exp(-1.0 / (1.0 - t2)) : 0.0;
}

// smooth cutoff: 1 at s=0, 0 at s>=w
double cutoff(double s, double w) {
  if (s <= 0.0) return 1.0;
  if (s >= w) return 0.0;
  const double t = s / w;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

// fold an out-of-range index back into [0, n-1] by repeated even reflection
int reflect_index(int i, int n) {
  const int period = 2 * (n - 1);
  int m = std::abs(i) % period;
  return m < n ? m : period - m;
}

}  // namespace

double MollifierKernel::radial(double t) const {
  const double scaled = t / support_radius;
  if (scaled >= 1.0 || profile.empty()) return 0.0;
  const double pos = scaled * (profile.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, profile.size() - 1);
  const double frac = pos - lo;
  return normalization * ((1.0 - frac) * profile[lo] + frac * profile[hi]);
}

double MollifierKernel::mass() const {
  // exact integral of the piecewise-linear profile against 4*pi*t^2 dt
  const std::size_t m = profile.size();
  if (m < 2) return 0.0;
  const double dt = support_radius / (m - 1);
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double t0 = i * dt, t1 = (i + 1) * dt;
    const double p0 = profile[i], p1 = profile[i + 1];
    // int_{t0}^{t1} t^2 (p0 + (p1-p0)(t-t0)/dt) dt
    const double a = (p1 - p0) / dt;
    const double b = p0 - a * t0;
    auto F = [&](double t) { return a * t * t * t * t / 4.0 + b * t * t * t / 3.0; };
    s += F(t1) - F(t0);
  }
  const double pi = 3.14159265358979323846;
  return 4.0 * pi * s * normalization;
}

MollifierKernel MollifierKernel::standard_bump(int samples) {
  MollifierKernel k;
  k.profile.resize(samples);
  for (int i = 0; i < samples; ++i) k.profile[i] = bump_profile(double(i) / (samples - 1));
  k.normalization = 1.0;
  k.normalization = 1.0 / k.mass();
  return k;
}

namespace {

// padded extension by even reflection with smooth cutoff; pad counts per axis
struct Extension {
  std::array<int, 3> pad;
  std::array<int, 3> n;
  std::vector<Complex> values;

  std::size_t idx(int i, int j, int k) const {
    return (static_cast<std::size_t>(i + pad[0]) * (n[1] + 2 * pad[1]) + (j + pad[1])) *
               (n[2] + 2 * pad[2]) +
           (k + pad[2]);
  }
};

Extension extend_reflect_cutoff(const CylinderChart& c, const std::vector<Complex>& v,
                                std::array<int, 3> pad, double tau) {
  Extension e;
  e.pad = pad;
  e.n = {c.n1(), c.nr(), c.nth()};
  e.values.assign(static_cast<std::size_t>(e.n[0] + 2 * pad[0]) * (e.n[1] + 2 * pad[1]) *
                      (e.n[2] + 2 * pad[2]),
                  Complex(0.0));
  const double ext[3] = {c.x1_hi() - c.x1_lo(), c.r_hi() - c.r_lo(),
                         c.theta_hi() - c.theta_lo()};
  for (int i = -pad[0]; i < e.n[0] + pad[0]; ++i)
    for (int j = -pad[1]; j < e.n[1] + pad[1]; ++j)
      for (int k = -pad[2]; k < e.n[2] + pad[2]; ++k) {
        const int ii = reflect_index(i, e.n[0]);
        const int jj = reflect_index(j, e.n[1]);
        const int kk = reflect_index(k, e.n[2]);
        double chi = 1.0;
        const int over[3] = {i < 0 ? -i : i - (e.n[0] - 1), j < 0 ? -j : j - (e.n[1] - 1),
                             k < 0 ? -k : k - (e.n[2] - 1)};
        for (int axis = 0; axis < 3; ++axis)
          if (over[axis] > 0)
            chi *= cutoff(over[axis] * c.dx(axis), std::min(2.0 * tau, ext[axis]));
        e.values[e.idx(i, j, k)] = chi * v[c.idx(ii, jj, kk)];
      }
  return e;
}

std::vector<Complex> convolve(const CylinderChart& c, const std::vector<Complex>& v, double tau,
                              const MollifierKernel& kernel) {
  const double d[3] = {c.dx(0), c.dx(1), c.dx(2)};
  std::array<int, 3> reach;
  for (int axis = 0; axis < 3; ++axis)
    reach[axis] = static_cast<int>(std::ceil(tau / d[axis]));
  // discrete kernel on the offset lattice, renormalized to unit mass
  const int R0 = reach[0], R1 = reach[1], R2 = reach[2];
  std::vector<double> w(static_cast<std::size_t>(2 * R0 + 1) * (2 * R1 + 1) * (2 * R2 + 1), 0.0);
  double total = 0.0;
  std::size_t pos = 0;
  for (int a = -R0; a <= R0; ++a)
    for (int b = -R1; b <= R1; ++b)
      for (int cc = -R2; cc <= R2; ++cc, ++pos) {
        const double rr = std::sqrt(a * d[0] * a * d[0] + b * d[1] * b * d[1] +
                                    cc * d[2] * cc * d[2]);
        const double val = kernel.radial(rr / tau);
        w[pos] = val;
        total += val;
      }
  if (total <= 0.0) throw DomainError("mollify: kernel support below grid resolution");
  for (auto& x : w) x /= total;

  Extension e = extend_reflect_cutoff(c, v, reach, tau);
  std::vector<Complex> out(c.size(), Complex(0.0));
  for (int i = 0; i < c.n1(); ++i)
    for (int j = 0; j < c.nr(); ++j)
      for (int k = 0; k < c.nth(); ++k) {
        Complex acc = 0.0;
        std::size_t p = 0;
        for (int a = -R0; a <= R0; ++a)
          for (int b = -R1; b <= R1; ++b)
            for (int cc = -R2; cc <= R2; ++cc, ++p)
              if (w[p] != 0.0) acc += w[p] * e.values[e.idx(i - a, j - b, k - cc)];
        out[c.idx(i, j, k)] = acc;
      }
  return out;
}

void check_tau(const CylinderChart& c, double tau) {
  const double ext = std::max({c.x1_hi() - c.x1_lo(), c.r_hi() - c.r_lo(),
                               c.theta_hi() - c.theta_lo()});
  if (!(tau > 0.0)) throw DomainError("mollify: tau must be positive");
  if (tau > 0.5 * ext) throw DomainError("mollify: tau exceeds half the domain extent");
}

}  // namespace

ScalarField mollify_field(const ScalarField& f, double tau, const MollifierKernel& kernel) {
  const CylinderChart& c = *f.chart;
  check_tau(c, tau);
  ScalarField out(c);
  out.v = convolve(c, f.v, tau, kernel);
  return out;
}

OneForm mollify_form(const OneForm& A, double tau, const MollifierKernel& kernel) {
  const CylinderChart& c = *A.chart;
  check_tau(c, tau);
  OneForm out(c);
  for (int axis = 0; axis < 3; ++axis) out.comp[axis] = convolve(c, A.comp[axis], tau, kernel);
  return out;
}

ScalarField nabla_k_sum(const CylinderChart& c, const ScalarField& f, int k) {
  ScalarField out(c);
  if (k == 1) {
    OneForm df = geometry::differential(c, f);
    for (std::size_t id = 0; id < c.size(); ++id)
      out.v[id] = df.comp[0][id] + df.comp[1][id] + df.comp[2][id];
    return out;
  }
  if (k == 2) {
    OneForm df = geometry::differential(c, f);
    for (int a = 0; a < 3; ++a) {
      ScalarField da(c);
      da.v = df.comp[a];
      OneForm dda = geometry::differential(c, da);
      for (int b = a; b < 3; ++b)
        for (std::size_t id = 0; id < c.size(); ++id) out.v[id] += dda.comp[b][id];
    }
    return out;
  }
  throw DomainError("nabla_k_sum: k must be 1 or 2");
}

namespace {

void check_taus(const std::vector<double>& taus) {
  if (taus.size() < 2) throw DomainError("rate study needs at least 2 rungs");
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (!(taus[i] < taus[i - 1]))
      throw DomainError("rate study: tau ladder must be strictly decreasing");
}

}  // namespace

RateStudy rate_study_lp(const ScalarField& f, double p, const std::vector<double>& taus,
                        const MollifierKernel& kernel) {
  check_taus(taus);
  const CylinderChart& c = *f.chart;
  std::vector<double> gap, hess, s1, s2, gap_n, hess_n, s1_n, s2_n;
  const double inf = std::numeric_limits<double>::infinity();
  // measure away from the reflection layer: the rates belong to the interior
  const double collar =
      taus.front() + std::max({c.dx(0), c.dx(1), c.dx(2)});
  for (double tau : taus) {
    ScalarField ft = mollify_field(f, tau, kernel);
    ScalarField diff(c);
    for (std::size_t id = 0; id < c.size(); ++id) diff.v[id] = ft.v[id] - f.v[id];
    ScalarField n1 = nabla_k_sum(c, ft, 1);
    ScalarField n2 = nabla_k_sum(c, ft, 2);
    const double dg = geometry::norm_lp_interior(c, diff, p, collar);
    const double dh = geometry::norm_lp_interior(c, n2, p, collar);
    const double m1 = geometry::norm_lp_interior(c, n1, inf, collar);
    const double m2 = geometry::norm_lp_interior(c, n2, inf, collar);
    gap.push_back(dg);
    hess.push_back(dh);
    s1.push_back(m1);
    s2.push_back(m2);
    gap_n.push_back(dg / tau);
    hess_n.push_back(tau * dh);
    s1_n.push_back(tau * m1);
    s2_n.push_back(tau * tau * m2);
  }
  RateStudy out;
  out.lp_gap = ConvergenceReport::make_little_o("mollifier Lp gap o(tau)", taus, gap, gap_n);
  out.hess_lp =
      ConvergenceReport::make_little_o("mollifier second derivative o(1/tau)", taus, hess, hess_n);
  out.sup_k1 = ConvergenceReport::make_big_o("mollifier sup gradient O(1/tau)", taus, s1, s1_n);
  out.sup_k2 =
      ConvergenceReport::make_big_o("mollifier sup second derivative O(1/tau^2)", taus, s2, s2_n);
  return out;
}

OneForm regularize_one_form(const OneForm& A, double tau, const MollifierKernel& kernel) {
  return mollify_form(A, tau, kernel);
}

namespace {

// Christoffel symbols of the diagonal metric g = diag(c, c, c*rho^2), by
// centered differences of the sampled metric coefficients.
struct Christoffel {
  // gamma[k][j][l] = Gamma^k_{jl}
  std::array<std::array<std::array<std::vector<double>, 3>, 3>, 3> gamma;
};

Christoffel christoffel(const CylinderChart& c) {
  std::array<std::vector<double>, 3> gdiag;  // metric diagonal entries
  for (int axis = 0; axis < 3; ++axis) gdiag[axis].resize(c.size());
  for (std::size_t id = 0; id < c.size(); ++id) {
    const auto gi = c.metric_inv(id);
    for (int axis = 0; axis < 3; ++axis) gdiag[axis][id] = 1.0 / gi[axis];
  }
  // partials of the metric entries
  std::array<std::array<std::vector<Complex>, 3>, 3> dg;  // dg[m][axis] = d_axis g_mm
  for (int m = 0; m < 3; ++m) {
    ScalarField gm(c);
    for (std::size_t id = 0; id < c.size(); ++id) gm.v[id] = gdiag[m][id];
    OneForm d = geometry::differential(c, gm);
    for (int axis = 0; axis < 3; ++axis) dg[m][axis] = d.comp[axis];
  }
  Christoffel ch;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) ch.gamma[k][j][l].assign(c.size(), 0.0);
  for (std::size_t id = 0; id < c.size(); ++id) {
    const auto gi = c.metric_inv(id);
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) {
          // diagonal metric: Gamma^k_{jl} = (g^{kk}/2)(d_j g_{kk} delta_{kl}
          //                  + d_l g_{kk} delta_{kj} - d_k g_{jl} delta_{jl})
          double v = 0.0;
          if (l == k) v += dg[k][j][id].real();
          if (j == k) v += dg[k][l][id].real();
          if (j == l) v -= dg[j][k][id].real();
          ch.gamma[k][j][l][id] = 0.5 * gi[k] * v;
        }
  }
  return ch;
}

// covariant derivative T^k_j = d_j X^k + Gamma^k_{jm} X^m
std::array<std::array<std::vector<Complex>, 3>, 3> covariant_deriv(const CylinderChart& c,
                                                                   const VectorField& X,
                                                                   const Christoffel& ch) {
  std::array<std::array<std::vector<Complex>, 3>, 3> T;
  for (int k = 0; k < 3; ++k) {
    ScalarField xk(c);
    xk.v = X.comp[k];
    OneForm d = geometry::differential(c, xk);
    for (int j = 0; j < 3; ++j) {
      T[k][j] = d.comp[j];
      for (int m = 0; m < 3; ++m)
        for (std::size_t id = 0; id < c.size(); ++id)
          T[k][j][id] += ch.gamma[k][j][m][id] * X.comp[m][id];
    }
  }
  return T;
}

}  // namespace

ScalarField covariant_deriv_norm(const CylinderChart& c, const VectorField& X) {
  Christoffel ch = christoffel(c);
  auto T = covariant_deriv(c, X, ch);
  ScalarField out(c);
  for (std::size_t id = 0; id < c.size(); ++id) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) s += std::norm(T[k][j][id]);
    out.v[id] = std::sqrt(s);
  }
  return out;
}

ScalarField covariant_deriv2_norm(const CylinderChart& c, const VectorField& X) {
  Christoffel ch = christoffel(c);
  auto T = covariant_deriv(c, X, ch);
  ScalarField out(c);
  // (cov^2 X)^k_{jl} = d_l T^k_j + Gamma^k_{lm} T^m_j - Gamma^m_{lj} T^k_m
  std::array<std::array<std::array<std::vector<Complex>, 3>, 3>, 3> dT;
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) {
      ScalarField t(c);
      t.v = T[k][j];
      OneForm d = geometry::differential(c, t);
      for (int l = 0; l < 3; ++l) dT[k][j][l] = d.comp[l];
    }
  for (std::size_t id = 0; id < c.size(); ++id) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) {
          Complex v = dT[k][j][l][id];
          for (int m = 0; m < 3; ++m) {
            v += ch.gamma[k][l][m][id] * T[m][j][id];
            v -= ch.gamma[m][l][j][id] * T[k][m][id];
          }
          s += std::norm(v);
        }
    out.v[id] = std::sqrt(s);
  }
  return out;
}

OneFormRates regularize_rates(const OneForm& A, const std::vector<double>& taus,
                              const MollifierKernel& kernel) {
  check_taus(taus);
  const CylinderChart& c = *A.chart;
  const double n = c.dim();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> gap, hess, s1, s2, gap_n, hess_n, s1_n, s2_n;
  const double collar =
      taus.front() + std::max({c.dx(0), c.dx(1), c.dx(2)});
  for (double tau : taus) {
    OneForm At = mollify_form(A, tau, kernel);
    OneForm diff(c);
    for (int axis = 0; axis < 3; ++axis)
      for (std::size_t id = 0; id < c.size(); ++id)
        diff.comp[axis][id] = A.comp[axis][id] - At.comp[axis][id];
    // |A - A_tau|_g as a scalar field (Hermitian magnitude)
    ScalarField gmag(c);
    for (std::size_t id = 0; id < c.size(); ++id) {
      const auto gi = c.metric_inv(id);
      double s = 0.0;
      for (int axis = 0; axis < 3; ++axis) s += gi[axis] * std::norm(diff.comp[axis][id]);
      gmag.v[id] = std::sqrt(s);
    }
    VectorField Xs = geometry::sharp(c, At);
    ScalarField c1 = covariant_deriv_norm(c, Xs);
    ScalarField c2 = covariant_deriv2_norm(c, Xs);
    const double dg = geometry::norm_lp_interior(c, gmag, n, collar);
    const double dh = geometry::norm_lp_interior(c, c2, n, collar);
    const double m1 = geometry::norm_lp_interior(c, c1, inf, collar);
    const double m2 = geometry::norm_lp_interior(c, c2, inf, collar);
    gap.push_back(dg);
    hess.push_back(dh);
    s1.push_back(m1);
    s2.push_back(m2);
    gap_n.push_back(dg / tau);
    hess_n.push_back(tau * dh);
    s1_n.push_back(tau * m1);
    s2_n.push_back(tau * tau * m2);
  }
  OneFormRates out;
  out.gap_ln = ConvergenceReport::make_little_o("one-form Ln gap o(tau)", taus, gap, gap_n);
  out.hess_ln = ConvergenceReport::make_little_o("one-form covariant Hessian o(1/tau)", taus, hess,
                                                 hess_n);
  out.sup_k1 = ConvergenceReport::make_big_o("one-form sup covariant gradient O(1/tau)", taus, s1,
                                             s1_n);
  out.sup_k2 = ConvergenceReport::make_big_o("one-form sup covariant Hessian O(1/tau^2)", taus, s2,
                                             s2_n);
  return out;
}

}  // namespace mollify
}  // namespace mslab
