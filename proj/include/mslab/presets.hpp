#ifndef MSLAB_PRESETS_HPP
#define MSLAB_PRESETS_HPP

#include "mslab/identity.hpp"

namespace mslab {
namespace presets {

// Coefficient catalogue. All presets are expressed in coordinates normalized
// to the chart ranges so they make sense on every chart preset.
OneForm make_A(const CylinderChart& c, const std::string& name);
ScalarField make_q(const CylinderChart& c, const std::string& name);
VectorField make_X(const CylinderChart& c, const std::string& name);

// Compactly supported gauge functions with analytic differentials.
ScalarField make_gauge_phi(const CylinderChart& c, const std::string& name);
OneForm make_gauge_dphi(const CylinderChart& c, const std::string& name);

identity::ScenarioPair make_scenario(const CylinderChart& c, const std::string& A_name,
                                     const std::string& q_name, const std::string& kind,
                                     const std::string& phi_name);

// Theta profiles vanishing at the arc ends.
std::vector<std::function<double(double)>> theta_bumps(const CylinderChart& c, int count);
std::function<double(double)> default_b(const CylinderChart& c);

// Synthetic unknowns for the recovery pipeline.
ScalarField make_dq(const CylinderChart& c, const std::string& name);

std::vector<double> integer_lambdas(double lo, double hi);
std::vector<double> spaced_lambdas(double lo, double hi, int count);

}  // namespace presets
}  // namespace mslab

#endif
