#include <cmath>
#include <random>

#include "doctest.h"
#include "mslab/presets.hpp"
#include "mslab/recover.hpp"

using namespace mslab;

TEST_CASE("data operator is consistent with the electric pairing") {
  CylinderChart c = make_chart_preset("flat-cylinder", {10, 10, 6});
  auto lambdas = presets::spaced_lambdas(-4.0, 4.0, 8);
  auto bfam = presets::theta_bumps(c, 3);
  recover::DataOperator op = recover::assemble_data_operator(c, lambdas, bfam);
  CHECK(op.rows() == 24);
  CHECK(op.cols() == static_cast<int>(c.size()));

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    ScalarField dq(c);
    for (auto& z : dq.v) z = Complex(unif(rng), unif(rng));
    Eigen::VectorXcd applied = op.apply(dq);
    int row = 0;
    for (double lam : lambdas)
      for (const auto& b : bfam) {
        const Complex want = identity::electric_data(c, dq, lam, b);
        CHECK(std::abs(applied[row] - want) < 1e-12 * std::max(1.0, std::abs(want)));
        ++row;
      }
  }
  SUBCASE("lambda = 0 with a constant profile row sums to the warped flat volume") {
    auto one_b = std::vector<std::function<double(double)>>{[](double) { return 1.0; }};
    recover::DataOperator op0 = recover::assemble_data_operator(c, {0.0}, one_b);
    ScalarField ones(c);
    for (auto& z : ones.v) z = 1.0;
    const Complex want = identity::electric_data(c, ones, 0.0, one_b[0]);
    CHECK(std::abs(op0.M.row(0).sum() - want) < 1e-13);
  }
  SUBCASE("empty families are rejected") {
    CHECK_THROWS_AS(recover::assemble_data_operator(c, {}, bfam), DomainError);
  }
}

TEST_CASE("injectivity report: positivity, duplicated rows, theta-only collapse") {
  CylinderChart c = make_chart_preset("flat-cylinder", {8, 8, 4});
  auto lambdas = presets::spaced_lambdas(-4.0, 4.0, 16);
  auto bfam = presets::theta_bumps(c, 4);
  recover::DataOperator op = recover::assemble_data_operator(c, lambdas, bfam);
  recover::InjectivityReport rep = recover::injectivity_report(op);
  CHECK(rep.sigma_min > 0.0);
  CHECK(rep.sigma_max >= rep.sigma_min);
  SUBCASE("duplicated probe rows leave the rank unchanged") {
    auto twice = lambdas;
    twice.insert(twice.end(), lambdas.begin(), lambdas.end());
    // duplicated lambdas are non-decreasing; the assembler does not care
    recover::DataOperator op2 = recover::assemble_data_operator(c, twice, bfam);
    recover::InjectivityReport rep2 = recover::injectivity_report(op2);
    CHECK(rep2.rank == rep.rank);
  }
  SUBCASE("theta-only probing collapses the rank") {
    recover::DataOperator op0 = recover::assemble_data_operator(c, {0.0}, bfam);
    recover::InjectivityReport rep0 = recover::injectivity_report(op0);
    CHECK(rep0.rank <= 4);
    CHECK(rep0.rank < rep.rank);
  }
}

TEST_CASE("tikhonov recovery on resolvable synthetic truth") {
  CylinderChart c = make_chart_preset("flat-cylinder", {12, 12, 6});
  auto lambdas = presets::spaced_lambdas(-8.0, 8.0, 24);
  auto bfam = presets::theta_bumps(c, 6);
  recover::DataOperator op = recover::assemble_data_operator(c, lambdas, bfam);
  SUBCASE("zero truth recovers zero") {
    Eigen::VectorXcd data = Eigen::VectorXcd::Zero(op.rows());
    recover::Recovery rec = recover::recover_q(op, data, 1e-6);
    CHECK(rec.solution_norm < 1e-12);
  }
  ScalarField nominal = presets::make_dq(c, "bump");
  ScalarField truth = recover::resolvable_component(op, nominal, 1e-3);
  Eigen::VectorXcd data = op.apply(truth);
  SUBCASE("noise-free recovery is accurate") {
    recover::Recovery rec = recover::recover_q(op, data, 1e-6, &truth);
    CHECK(rec.relative_error < 0.01);
  }
  SUBCASE("truncated SVD variant also recovers") {
    recover::Recovery rec =
        recover::recover_q(op, data, 1e-6, &truth, recover::Regularizer::TruncatedSVD);
    CHECK(rec.relative_error < 0.05);
  }
  SUBCASE("negative regularization is rejected") {
    CHECK_THROWS_AS(recover::recover_q(op, data, -1.0), DomainError);
  }
  SUBCASE("error decreases as nested probe families grow") {
    std::vector<double> errors;
    for (int count : {8, 16, 24}) {
      std::vector<double> sub(lambdas.begin(), lambdas.begin() + count);
      std::sort(sub.begin(), sub.end());
      recover::DataOperator sop = recover::assemble_data_operator(c, sub, bfam);
      Eigen::VectorXcd sdata = sop.apply(truth);
      recover::Recovery rec = recover::recover_q(sop, sdata, 1e-6, &truth);
      errors.push_back(rec.relative_error);
    }
    CHECK(errors[1] <= errors[0] + 1e-9);
    CHECK(errors[2] <= errors[1] + 1e-9);
  }
}

TEST_CASE("closedness certificate separates gauge pairs from theta-form pairs") {
  CylinderChart c = make_chart_preset("flat-cylinder", {25, 49, 13});
  dbar::CauchyKernelGrid ck = dbar::CauchyKernelGrid::make(c);
  auto bfam = presets::theta_bumps(c, 3);
  const std::vector<double> lambdas{0.0, 1.0, 2.0};
  SUBCASE("gauge pair: both numbers are tiny") {
    identity::ScenarioPair pair = presets::make_scenario(c, "smooth", "bump", "gauge", "bump");
    recover::ClosednessReport rep = recover::certify_closed(pair, lambdas, bfam, ck);
    // the exterior-derivative defect of the sampled exact form is pure finite
    // difference truncation, far below the O(1) defect of a non-closed form
    CHECK(rep.d_delta_relative < 0.1);
    CHECK(rep.max_probe_value < 1e-3 * rep.probe_scale);
  }
  SUBCASE("zero pair is exactly closed") {
    identity::ScenarioPair pair;
    pair.chart = &c;
    pair.A1 = OneForm(c);
    pair.A2 = OneForm(c);
    pair.q1 = ScalarField(c);
    pair.q2 = ScalarField(c);
    pair.kind = identity::ScenarioKind::Gauge;
    pair.gauge_phi = ScalarField(c);
    recover::ClosednessReport rep = recover::certify_closed(pair, lambdas, bfam, ck);
    CHECK(rep.d_delta_sup == 0.0);
    CHECK(rep.max_probe_value == 0.0);
  }
  SUBCASE("theta-form pair has a visible exterior derivative") {
    // a pure dtheta difference is invisible to the complex-phase pairing
    // (d rho has no theta component), so only the d(delta) check lights up
    identity::ScenarioPair pair = presets::make_scenario(c, "zero", "zero", "generic", "zero");
    recover::ClosednessReport rep = recover::certify_closed(pair, lambdas, bfam, ck);
    CHECK(rep.d_delta_relative > 0.5);
    CHECK(rep.max_probe_value < 1e-12);
  }
  SUBCASE("non-exact (x1, r)-form lights up the probe functional") {
    identity::ScenarioPair pair;
    pair.chart = &c;
    pair.A1 = presets::make_A(c, "nonexact-xr");
    pair.A2 = OneForm(c);
    pair.q1 = ScalarField(c);
    pair.q2 = ScalarField(c);
    pair.kind = identity::ScenarioKind::Generic;
    pair.gauge_phi = ScalarField(c);
    recover::ClosednessReport rep = recover::certify_closed(pair, lambdas, bfam, ck);
    CHECK(rep.d_delta_relative > 0.5);
    CHECK(rep.max_probe_value > 1e-3 * rep.probe_scale);
  }
}
