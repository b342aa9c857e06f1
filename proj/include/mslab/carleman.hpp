#ifndef MSLAB_CARLEMAN_HPP
#define MSLAB_CARLEMAN_HPP

#include <cstdint>

#include "mslab/operators.hpp"
#include "mslab/report.hpp"

namespace mslab {
namespace carleman {

// phi = sign * x1, convexified to phi + (h/2eps) phi^2.
struct ConvexifiedWeight {
  int sign = 1;
  double h = 0.0;
  double eps = 0.1;
  ops::WeightData data;

  // "h much smaller than eps much smaller than 1" encoded as
  // h <= eps/separation and eps <= 1/4; the factor is configurable so the
  // h = eps/2 ladder of the small-h checks remains admissible
  static ConvexifiedWeight make(const CylinderChart& c, int sign, double h, double eps,
                                double separation = 2.0);
};

// e^{psi/h} (h^2 L_{A,q}) e^{-psi/h} u via the expanded identity (no
// exponential is ever formed).
ScalarField conjugate_apply(const CylinderChart& c, const OneForm& A, const ScalarField& q,
                            const ops::WeightData& weight, double h, const ScalarField& u);

// Seeded family of smooth zero-boundary samples: tensor sine/bump products,
// optionally modulated by a semiclassical plane wave at frequency ~1/h near
// the characteristic codirections of the weight.
struct SampleFamily {
  std::uint64_t seed = 1;
  int count = 100;
  bool compact_support = false;  // zero in a collar near the boundary
  bool semiclassical = true;     // include 1/h-frequency modulations
};

std::vector<ScalarField> make_samples(const CylinderChart& c, const SampleFamily& fam, double h);

struct CheckResult {
  ConvergenceReport report;      // per-h extremal ratio
  std::vector<double> ratios;    // same as report.values
};

// Boundary estimate: for each h reports
//   min over samples of (||P u||^2 + 2h^3 int (d_nu psi)|d_nu u|^2) /
//                       ((h^2/eps) ||u||_{H1scl}^2)
// which must stay above a positive floor.
CheckResult check_boundary(const CylinderChart& c, const OneForm& A, const ScalarField& q,
                           const std::vector<double>& h_list, double eps,
                           const SampleFamily& fam, double ratio_floor = 0.01);

// Interior estimate: max over samples of h ||u||_{H1scl} / ||P u||_{H-1scl},
// bounded within bound_factor of its first rung.
CheckResult check_interior(const CylinderChart& c, const OneForm& A, const ScalarField& q,
                           const std::vector<double>& h_list, const SampleFamily& fam,
                           double bound_factor = 2.0);

}  // namespace carleman
}  // namespace mslab

#endif
