#include "mslab/presets.hpp"

#include <cmath>

namespace mslab {
namespace presets {

namespace {

const double kPi = 3.14159265358979323846;

double bump(double s) { return s * s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }
double dbump(double s) {
  if (s * s >= 1.0) return 0.0;
  const double d = 1.0 - s * s;
  return bump(s) * (-2.0 * s / (d * d));
}

struct Frame {
  double lo[3], ext[3];
  explicit Frame(const CylinderChart& c) {
    lo[0] = c.x1_lo();
    lo[1] = c.r_lo();
    lo[2] = c.theta_lo();
    ext[0] = c.x1_hi() - c.x1_lo();
    ext[1] = c.r_hi() - c.r_lo();
    ext[2] = c.theta_hi() - c.theta_lo();
  }
  double t(int axis, double x) const { return (x - lo[axis]) / ext[axis]; }
};

}  // namespace

OneForm make_A(const CylinderChart& c, const std::string& name) {
  Frame f(c);
  if (name == "zero") return OneForm(c);
  if (name == "smooth")
    return sample_one_form(
        c,
        [&](double x1, double r, double th) {
          return Complex(0.7 * std::sin(kPi * f.t(0, x1)) * std::cos(0.5 * kPi * f.t(1, r)) *
                         std::cos(0.5 * kPi * f.t(2, th)));
        },
        [&](double x1, double r, double th) {
          return Complex(0.5 * std::cos(kPi * f.t(1, r)) * std::sin(kPi * f.t(0, x1)) *
                         std::cos(0.4 * kPi * f.t(2, th)));
        },
        [&](double x1, double r, double th) {
          return Complex(0.3 * std::sin(kPi * f.t(2, th)) * std::cos(0.6 * kPi * f.t(0, x1)) *
                         std::cos(0.3 * kPi * f.t(1, r)));
        });
  if (name == "rough-kink")
    // Lipschitz kinks across two interior planes; W^{1,inf} but not C^1
    return sample_one_form(
        c,
        [&](double x1, double r, double th) {
          return Complex(0.6 * std::abs(f.t(1, r) - 0.5) * std::sin(kPi * f.t(0, x1)) *
                         std::cos(0.5 * kPi * f.t(2, th)));
        },
        [&](double x1, double r, double th) {
          return Complex(0.8 * std::abs(f.t(0, x1) - 0.5) * std::sin(kPi * f.t(1, r)) *
                         std::cos(0.4 * kPi * f.t(2, th)));
        },
        [&](double x1, double r, double th) {
          return Complex(0.3 * std::abs(f.t(1, r) - 0.4) * std::sin(kPi * f.t(0, x1)) *
                         std::sin(kPi * f.t(2, th)));
        });
  if (name == "theta-form")
    // f(x1, r) dtheta with nonconstant f: not closed
    return sample_one_form(
        c, [](double, double, double) { return Complex(0.0); },
        [](double, double, double) { return Complex(0.0); },
        [&](double x1, double r, double) {
          return Complex(std::sin(kPi * f.t(0, x1)) * (0.5 + f.t(1, r)));
        });
  if (name == "nonexact-xr")
    // g(r) dx1 with nonconstant g: not closed, and visible to the complex
    // phase pairing (a pure dtheta form is not)
    return sample_one_form(
        c,
        [&](double, double r, double) { return Complex(std::sin(kPi * f.t(1, r)) + 0.3); },
        [](double, double, double) { return Complex(0.0); },
        [](double, double, double) { return Complex(0.0); });
  if (name == "gauge-dphi") return make_gauge_dphi(c, "bump");
  throw ConfigError("unknown A preset: " + name);
}

ScalarField make_q(const CylinderChart& c, const std::string& name) {
  Frame f(c);
  if (name == "zero") return ScalarField(c);
  if (name == "bump")
    return sample_scalar(c, [&](double x1, double r, double th) {
      return Complex(1.2 * bump((f.t(0, x1) - 0.5) / 0.4) * bump((f.t(1, r) - 0.5) / 0.4) *
                     bump((f.t(2, th) - 0.5) / 0.45));
    });
  if (name == "rough")
    // kink in r; merely L^n-integrable regularity is allowed
    return sample_scalar(c, [&](double x1, double r, double th) {
      return Complex(0.9 * std::abs(f.t(1, r) - 0.5) * std::sin(kPi * f.t(0, x1)) *
                     std::cos(0.5 * kPi * f.t(2, th)));
    });
  throw ConfigError("unknown q preset: " + name);
}

VectorField make_X(const CylinderChart& c, const std::string& name) {
  if (name == "zero") return VectorField(c);
  if (name == "constant-x1") {
    VectorField X(c);
    for (std::size_t id = 0; id < c.size(); ++id) X.comp[0][id] = 1.0;
    return X;
  }
  if (name == "swirl") {
    Frame f(c);
    VectorField X(c);
    for (int i = 0; i < c.n1(); ++i)
      for (int j = 0; j < c.nr(); ++j)
        for (int k = 0; k < c.nth(); ++k) {
          const std::size_t id = c.idx(i, j, k);
          X.comp[0][id] = 0.8 * std::sin(kPi * f.t(1, c.r(j))) * std::cos(0.5 * kPi * f.t(0, c.x1(i)));
          X.comp[1][id] = 0.6 * std::cos(kPi * f.t(0, c.x1(i))) * std::sin(0.7 * kPi * f.t(1, c.r(j)));
          X.comp[2][id] = 0.4 * std::sin(kPi * f.t(0, c.x1(i))) * std::sin(kPi * f.t(2, c.theta(k)));
        }
    return X;
  }
  throw ConfigError("unknown X preset: " + name);
}

namespace {

struct BumpSpec {
  double center[2], width[2], amp;
};

// Gauge functions: compactly supported exp-bumps in (x1, r) so the zero
// extension is exact for the phase construction, times a gentle sin^2 window
// in theta (vanishing on the theta faces) that coarse arcs can resolve.
BumpSpec phi_spec(const std::string& name) {
  if (name == "bump") return {{0.5, 0.5}, {0.34, 0.34}, 0.8};
  if (name == "bump-offset") return {{0.42, 0.58}, {0.32, 0.32}, 0.6};
  if (name == "bump-wide") return {{0.5, 0.5}, {0.44, 0.44}, 0.5};
  if (name == "zero") return {{0.5, 0.5}, {0.3, 0.3}, 0.0};
  throw ConfigError("unknown gauge phi preset: " + name);
}

double theta_window(double t) {
  const double s = std::sin(kPi * t);
  return s * s;
}
double dtheta_window(double t) { return kPi * std::sin(2.0 * kPi * t); }

}  // namespace

ScalarField make_gauge_phi(const CylinderChart& c, const std::string& name) {
  Frame f(c);
  BumpSpec s = phi_spec(name);
  return sample_scalar(c, [&](double x1, double r, double th) {
    return Complex(s.amp * bump((f.t(0, x1) - s.center[0]) / s.width[0]) *
                   bump((f.t(1, r) - s.center[1]) / s.width[1]) * theta_window(f.t(2, th)));
  });
}

OneForm make_gauge_dphi(const CylinderChart& c, const std::string& name) {
  Frame f(c);
  BumpSpec s = phi_spec(name);
  auto b0 = [&](int axis, double x) { return bump((f.t(axis, x) - s.center[axis]) / s.width[axis]); };
  auto b1 = [&](int axis, double x) {
    return dbump((f.t(axis, x) - s.center[axis]) / s.width[axis]) / (s.width[axis] * f.ext[axis]);
  };
  return sample_one_form(
      c,
      [&](double x1, double r, double th) {
        return Complex(s.amp * b1(0, x1) * b0(1, r) * theta_window(f.t(2, th)));
      },
      [&](double x1, double r, double th) {
        return Complex(s.amp * b0(0, x1) * b1(1, r) * theta_window(f.t(2, th)));
      },
      [&](double x1, double r, double th) {
        return Complex(s.amp * b0(0, x1) * b0(1, r) * dtheta_window(f.t(2, th)) / f.ext[2]);
      });
}

identity::ScenarioPair make_scenario(const CylinderChart& c, const std::string& A_name,
                                     const std::string& q_name, const std::string& kind,
                                     const std::string& phi_name) {
  identity::ScenarioPair pair;
  pair.chart = &c;
  pair.A1 = make_A(c, A_name);
  pair.q1 = make_q(c, q_name);
  if (kind == "gauge") {
    pair.kind = identity::ScenarioKind::Gauge;
    pair.gauge_phi = make_gauge_phi(c, phi_name);
    OneForm dphi = make_gauge_dphi(c, phi_name);
    pair.A2 = OneForm(c);
    for (int axis = 0; axis < 3; ++axis)
      for (std::size_t id = 0; id < c.size(); ++id)
        pair.A2.comp[axis][id] = pair.A1.comp[axis][id] + dphi.comp[axis][id];
    pair.q2 = pair.q1;
  } else if (kind == "generic") {
    pair.kind = identity::ScenarioKind::Generic;
    pair.A2 = make_A(c, "theta-form");
    pair.q2 = make_q(c, "zero");
    pair.gauge_phi = ScalarField(c);
  } else {
    throw ConfigError("unknown scenario kind: " + kind);
  }
  return pair;
}

std::vector<std::function<double(double)>> theta_bumps(const CylinderChart& c, int count) {
  if (count < 1) throw ConfigError("theta_bumps: count must be positive");
  const double lo = c.theta_lo(), hi = c.theta_hi();
  const double ext = hi - lo;
  const double width = ext / 4.0;
  std::vector<std::function<double(double)>> out;
  for (int j = 0; j < count; ++j) {
    const double center = lo + ext * (j + 1.0) / (count + 1.0);
    out.push_back([center, width](double th) { return bump((th - center) / width); });
  }
  return out;
}

std::function<double(double)> default_b(const CylinderChart& c) {
  const double lo = c.theta_lo(), hi = c.theta_hi();
  const double mid = 0.5 * (lo + hi), width = 0.35 * (hi - lo);
  return [mid, width](double th) { return bump((th - mid) / width); };
}

ScalarField make_dq(const CylinderChart& c, const std::string& name) {
  Frame f(c);
  if (name == "zero") return ScalarField(c);
  if (name == "bump")
    return sample_scalar(c, [&](double x1, double r, double th) {
      return Complex(bump((f.t(0, x1) - 0.5) / 0.4) * bump((f.t(1, r) - 0.5) / 0.4) *
                     bump((f.t(2, th) - 0.5) / 0.5));
    });
  if (name == "broad")
    return sample_scalar(c, [&](double x1, double r, double th) {
      return Complex((1.0 + 0.4 * std::cos(kPi * f.t(0, x1))) *
                     (1.0 + 0.3 * std::sin(0.5 * kPi * f.t(1, r))) *
                     (0.8 + 0.2 * std::cos(kPi * f.t(2, th))));
    });
  throw ConfigError("unknown dq preset: " + name);
}

std::vector<double> integer_lambdas(double lo, double hi) {
  std::vector<double> out;
  for (double v = lo; v <= hi + 1e-12; v += 1.0) out.push_back(v);
  return out;
}

std::vector<double> spaced_lambdas(double lo, double hi, int count) {
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(lo + (hi - lo) * i / (count - 1.0));
  return out;
}

}  // namespace presets
}  // namespace mslab
