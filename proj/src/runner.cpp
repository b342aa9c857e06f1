#include "mslab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "mslab/carleman.hpp"
#include "mslab/cgo.hpp"
#include "mslab/dbar.hpp"
#include "mslab/fieldio.hpp"
#include "mslab/geometry.hpp"
#include "mslab/identity.hpp"
#include "mslab/mollify.hpp"
#include "mslab/presets.hpp"
#include "mslab/recover.hpp"

namespace mslab {

namespace {

namespace fs = std::filesystem;

struct Sink {
  fs::path dir;
  std::vector<std::string>* artifacts;

  void write(const std::string& name, const std::string& content) const {
    fs::create_directories(dir);
    const fs::path p = dir / name;
    write_text_file(p.string(), content);
    artifacts->push_back(p.string());
  }
};

VerdictRecord verdict(const std::string& check, bool pass,
                      std::map<std::string, double> details = {}) {
  VerdictRecord v;
  v.check = check;
  v.pass = pass;
  v.details = std::move(details);
  return v;
}

void add_report(std::vector<VerdictRecord>& out, const ConvergenceReport& r) {
  out.push_back(verdict(r.name, r.pass, {{"fitted_exponent", r.fitted_exponent}}));
}

// per-rung chart sizes resolving spacing <= h / points_per_h
std::array<int, 3> rung_sizes(const std::string& preset, double h, int points_per_h,
                              int ntheta, double grid_scale) {
  CylinderChart probe = make_chart_preset(preset, {3, 3, 3});
  const double ext1 = probe.x1_hi() - probe.x1_lo();
  const double extr = probe.r_hi() - probe.r_lo();
  auto nodes = [&](double ext) {
    int n = static_cast<int>(std::ceil(ext * points_per_h / h)) + 1;
    n = static_cast<int>(std::lround((n - 1) * grid_scale)) + 1;
    return std::clamp(n, 5, 241);
  };
  return {nodes(ext1), nodes(extr), std::max(5, ntheta)};
}

ScalarField smooth_probe_u(const CylinderChart& c) {
  const double pi = 3.14159265358979323846;
  return sample_scalar(c, [&](double x1, double r, double th) {
    const double t1 = (x1 - c.x1_lo()) / (c.x1_hi() - c.x1_lo());
    const double t2 = (r - c.r_lo()) / (c.r_hi() - c.r_lo());
    const double t3 = (th - c.theta_lo()) / (c.theta_hi() - c.theta_lo());
    return Complex(std::sin(pi * t1) * std::cos(0.5 * pi * t2),
                   0.3 * std::cos(pi * t2) * std::sin(pi * t3));
  });
}

ScalarField smooth_probe_v(const CylinderChart& c) {
  const double pi = 3.14159265358979323846;
  return sample_scalar(c, [&](double x1, double r, double th) {
    const double t1 = (x1 - c.x1_lo()) / (c.x1_hi() - c.x1_lo());
    const double t2 = (r - c.r_lo()) / (c.r_hi() - c.r_lo());
    const double t3 = (th - c.theta_lo()) / (c.theta_hi() - c.theta_lo());
    return Complex(std::cos(0.7 * pi * t1) * std::sin(pi * t3),
                   0.5 * std::sin(pi * t2) * std::cos(0.4 * pi * t1));
  });
}

// ---------------------------------------------------------------- mollify

RunResult run_mollify(const ExperimentConfig& cfg, Sink sink) {
  RunResult res;
  CylinderChart chart = make_chart_preset(cfg.chart_preset, cfg.scaled_grid());
  mollify::MollifierKernel kernel = mollify::MollifierKernel::standard_bump();
  struct Entry {
    const char* name;
    ScalarField f;
  };
  std::vector<Entry> corpus;
  corpus.push_back({"smooth", sample_scalar(chart, [&](double x1, double, double) {
                      return Complex(x1);
                    })});
  corpus.push_back({"kink", sample_scalar(chart, [&](double x1, double, double) {
                      const double t = (x1 - chart.x1_lo()) / (chart.x1_hi() - chart.x1_lo());
                      return Complex(std::abs(t - 0.5));
                    })});
  corpus.push_back({"plateau", sample_scalar(chart, [&](double x1, double, double) {
                      const double t = (x1 - chart.x1_lo()) / (chart.x1_hi() - chart.x1_lo());
                      const double s = std::clamp((t - 0.35) / 0.3, 0.0, 1.0);
                      return Complex(s * s * (3.0 - 2.0 * s));
                    })});
  for (const auto& e : corpus) {
    mollify::RateStudy study = mollify::rate_study_lp(e.f, 2.0, cfg.tau_ladder, kernel);
    sink.write(std::string("rates_") + e.name + "_gap.csv", study.lp_gap.csv());
    sink.write(std::string("rates_") + e.name + "_hess.csv", study.hess_lp.csv());
    sink.write(std::string("rates_") + e.name + "_sup1.csv", study.sup_k1.csv());
    sink.write(std::string("rates_") + e.name + "_sup2.csv", study.sup_k2.csv());
    auto tag = [&](const ConvergenceReport& r) {
      ConvergenceReport t = r;
      t.name = std::string(e.name) + ": " + r.name;
      return t;
    };
    add_report(res.verdicts, tag(study.lp_gap));
    add_report(res.verdicts, tag(study.hess_lp));
    add_report(res.verdicts, tag(study.sup_k1));
    add_report(res.verdicts, tag(study.sup_k2));
  }
  return res;
}

// ---------------------------------------------------------------- dbar

RunResult run_dbar(const ExperimentConfig& cfg, Sink sink) {
  RunResult res;
  (void)cfg;
  struct Manufactured {
    const char* name;
    Complex z0;
    double R;
    Complex amp;
  };
  const std::vector<Manufactured> corpus = {
      {"bump-center", Complex(1.0, 1.0), 0.55, Complex(1.0, 0.5)},
      {"bump-offset", Complex(0.8, 1.2), 0.45, Complex(0.7, -0.3)},
  };
  const std::vector<int> sizes = {17, 33, 65, 129};
  std::ostringstream table;
  table << "case,n,sup_error,residual_l2\n";
  bool sup_ok = true, resid_ok = true;
  for (const auto& m : corpus) {
    std::vector<double> sup_errors, residuals;
    for (int n : sizes) {
      dbar::PlanarGrid g;
      g.n1 = n;
      g.nr = n;
      g.d1 = 2.0 / (n - 1);
      g.dr = 2.0 / (n - 1);
      g.x1_lo = 0.0;
      g.r_lo = 0.0;
      dbar::CauchyKernelGrid kernel = dbar::CauchyKernelGrid::make_window(g);
      dbar::PlanarField rhs(g), exact(g);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Complex w = Complex(g.x1(i), g.r(j)) - m.z0;
          const double rho2 = std::norm(w) / (m.R * m.R);
          if (rho2 < 1.0) {
            const double B = std::exp(-1.0 / (1.0 - rho2));
            exact(i, j) = m.amp * B;
            rhs(i, j) = m.amp * (-B / ((1.0 - rho2) * (1.0 - rho2))) * w / (m.R * m.R);
          }
        }
      dbar::PlanarField sol = dbar::cauchy_transform(rhs, kernel);
      double sup = 0.0;
      for (std::size_t id = 0; id < sol.v.size(); ++id)
        sup = std::max(sup, std::abs(sol.v[id] - exact.v[id]));
      dbar::PlanarField back = dbar_apply(sol);
      double r2 = 0.0;
      for (std::size_t id = 0; id < back.v.size(); ++id)
        r2 += std::norm(back.v[id] - rhs.v[id]) * g.d1 * g.dr;
      const double resid = std::sqrt(r2);
      sup_errors.push_back(sup);
      residuals.push_back(resid);
      table << m.name << ',' << n << ',' << format_double(sup) << ',' << format_double(resid)
            << '\n';
    }
    for (std::size_t i = 1; i < sup_errors.size(); ++i) {
      const double ratio = sup_errors[i - 1] / sup_errors[i];
      if (!(ratio >= 1.7 && ratio <= 2.3)) sup_ok = false;
    }
    for (std::size_t i = 1; i < residuals.size(); ++i)
      if (!(residuals[i] < residuals[i - 1])) resid_ok = false;
  }
  sink.write("refinement.csv", table.str());
  res.verdicts.push_back(verdict("dbar sup-error halves under grid halving", sup_ok));
  res.verdicts.push_back(verdict("dbar residual decreases under refinement", resid_ok));
  return res;
}

// ---------------------------------------------------------------- cgo

RunResult run_cgo(const ExperimentConfig& cfg, Sink sink) {
  RunResult res;
  std::vector<CylinderChart> charts;
  charts.reserve(cfg.h_ladder.size());
  for (double h : cfg.h_ladder)
    charts.push_back(make_chart_preset(
        cfg.chart_preset,
        rung_sizes(cfg.chart_preset, h, cfg.cgo_points_per_h, cfg.grid[2], cfg.grid_scale)));
  std::vector<std::pair<double, const CylinderChart*>> rungs;
  for (std::size_t i = 0; i < charts.size(); ++i) rungs.push_back({cfg.h_ladder[i], &charts[i]});

  mollify::MollifierKernel kernel = mollify::MollifierKernel::standard_bump();
  CylinderChart probe = make_chart_preset(cfg.chart_preset, {5, 5, 5});
  auto b = presets::default_b(probe);
  cgo::CGOLadder ladder = cgo::cgo_ladder(
      rungs, [&](const CylinderChart& c) { return presets::make_A(c, cfg.A_preset); },
      [&](const CylinderChart& c) { return presets::make_q(c, cfg.q_preset); }, cfg.sign,
      cfg.lambda, b, kernel, cfg.kappa);

  for (std::size_t i = 0; i < ladder.rungs.size(); ++i) {
    NormLedger led = ladder.rungs[i].ledger;
    led["h"] = ladder.rungs[i].h;
    sink.write("ledger_rung" + std::to_string(i) + ".json", ledger_to_json(led));
  }
  std::ostringstream all;
  all << "h";
  std::vector<std::string> keys;
  for (const auto& [k, v] : ladder.rungs.front().ledger) {
    keys.push_back(k);
    all << ',' << k;
  }
  all << '\n';
  for (const auto& r : ladder.rungs) {
    all << format_double(r.h);
    for (const auto& k : keys) all << ',' << format_double(r.ledger.at(k));
    all << '\n';
  }
  sink.write("ladder.csv", all.str());
  for (const auto& rep : ladder.reports) {
    sink.write("report_" + std::to_string(&rep - ladder.reports.data()) + ".csv", rep.csv());
    add_report(res.verdicts, rep);
  }
  return res;
}

// ---------------------------------------------------------------- carleman

RunResult run_carleman(const ExperimentConfig& cfg, Sink sink) {
  RunResult res;
  carleman::SampleFamily fam;
  fam.seed = cfg.seed;
  fam.count = cfg.samples;

  // boundary estimate at the small-h pair, for the zero and rough presets
  std::ostringstream btab;
  btab << "preset,h,eps,min_ratio,n_samples,n1,nr,ntheta\n";
  for (const std::string preset : {std::string("zero"), cfg.A_preset}) {
    const double hmin = cfg.carleman_h.back();
    const auto sizes = rung_sizes(cfg.chart_preset, hmin, 4, cfg.grid[2], cfg.grid_scale);
    CylinderChart chart = make_chart_preset(cfg.chart_preset, sizes);
    OneForm A = presets::make_A(chart, preset);
    ScalarField q = presets::make_q(chart, preset == "zero" ? "zero" : cfg.q_preset);
    carleman::CheckResult check =
        carleman::check_boundary(chart, A, q, cfg.carleman_h, cfg.eps, fam, cfg.ratio_floor);
    for (std::size_t i = 0; i < cfg.carleman_h.size(); ++i)
      btab << preset << ',' << format_double(cfg.carleman_h[i]) << ',' << format_double(cfg.eps)
           << ',' << format_double(check.ratios[i]) << ',' << fam.count << ',' << sizes[0] << ','
           << sizes[1] << ',' << sizes[2] << '\n';
    res.verdicts.push_back(verdict("boundary estimate positive ratio (" + preset + ")",
                                   check.report.pass,
                                   {{"min_ratio", *std::min_element(check.ratios.begin(),
                                                                    check.ratios.end())}}));
  }
  sink.write("boundary.csv", btab.str());

  // interior estimate across the h ladder
  const double hmin = cfg.h_ladder.back();
  const auto sizes = rung_sizes(cfg.chart_preset, hmin, 4, cfg.grid[2], cfg.grid_scale);
  CylinderChart chart = make_chart_preset(cfg.chart_preset, sizes);
  OneForm A = presets::make_A(chart, cfg.A_preset);
  ScalarField q = presets::make_q(chart, cfg.q_preset);
  carleman::CheckResult inter =
      carleman::check_interior(chart, A, q, cfg.h_ladder, fam, cfg.bound_factor);
  std::ostringstream itab;
  itab << "h,max_ratio,n_samples,n1,nr,ntheta\n";
  for (std::size_t i = 0; i < cfg.h_ladder.size(); ++i)
    itab << format_double(cfg.h_ladder[i]) << ',' << format_double(inter.ratios[i]) << ','
         << fam.count << ',' << sizes[0] << ',' << sizes[1] << ',' << sizes[2] << '\n';
  sink.write("interior.csv", itab.str());
  res.verdicts.push_back(verdict("interior estimate ratio bounded", inter.report.pass,
                                 {{"max_ratio", *std::max_element(inter.ratios.begin(),
                                                                  inter.ratios.end())}}));
  return res;
}

// ---------------------------------------------------------------- identity

RunResult run_identity(const ExperimentConfig& cfg, Sink sink) {
  RunResult res;
  mollify::MollifierKernel kernel = mollify::MollifierKernel::standard_bump();

  // Green formula refinement
  {
    std::vector<double> grids, residuals;
    for (int scale : {1, 2, 4}) {
      std::array<int, 3> sz;
      for (int a = 0; a < 3; ++a) sz[a] = (cfg.grid[a] - 1) * scale / 2 + 1;
      sz = {std::max(sz[0], 9), std::max(sz[1], 9), std::max(sz[2], 7)};
      CylinderChart chart = make_chart_preset(cfg.chart_preset, sz);
      OneForm A = presets::make_A(chart, "smooth");
      ScalarField q = presets::make_q(chart, "bump");
      const double r = identity::green_residual(chart, A, q, smooth_probe_u(chart),
                                                smooth_probe_v(chart));
      grids.push_back(chart.dx(0));
      residuals.push_back(r);
    }
    const double order = fit_loglog_slope(grids, residuals);
    std::ostringstream t;
    t << "dx,residual\n";
    for (std::size_t i = 0; i < grids.size(); ++i)
      t << format_double(grids[i]) << ',' << format_double(residuals[i]) << '\n';
    sink.write("green_refinement.csv", t.str());
    res.verdicts.push_back(verdict("green formula residual order >= 1.8", order >= 1.8,
                                   {{"order", order}}));
  }

  // gauge suite on three presets
  const std::vector<std::pair<std::string, std::string>> gauge_presets = {
      {"bump", "flat-cylinder"}, {"bump-offset", "exp-warp"}, {"bump-wide", "flat-cylinder"}};
  std::ostringstream ladders;
  ladders << "preset,h,hJ,hK\n";
  std::ostringstream probes;
  probes << "preset,lambda,b_index,abs_value,rel_value\n";
  int preset_idx = 0;
  for (const auto& [phi_name, chart_name] : gauge_presets) {
    ++preset_idx;
    const auto sizes = rung_sizes(chart_name, 0.2, 4, cfg.grid[2], cfg.grid_scale);
    CylinderChart chart = make_chart_preset(chart_name, sizes);
    identity::ScenarioPair pair =
        presets::make_scenario(chart, cfg.A_preset, cfg.q_preset, "gauge", phi_name);
    dbar::CauchyKernelGrid ck = dbar::CauchyKernelGrid::make(chart);
    auto b = presets::default_b(chart);
    BoundaryRegion region = geometry::boundary_split(chart, 1);

    // (a) identity match at a fixed moderate h
    {
      const double h = 0.1;
      cgo::CGOSolution u1 =
          cgo::build_cgo(chart, pair.A1, pair.q1, h, +1, 1.0, b, kernel, ck, cfg.kappa);
      cgo::CGOSolution u2 =
          cgo::build_cgo(chart, pair.A2, pair.q2, h, -1, 1.0, b, kernel, ck, cfg.kappa);
      const Complex lhs = identity::integral_identity_lhs(pair, u1, u2);
      const Complex rhs = identity::integral_identity_rhs(pair, u1, u2, region);
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
      const double rel = std::abs(lhs - rhs) / scale;
      res.verdicts.push_back(verdict("gauge identity volume vs boundary (" + phi_name + ")",
                                     rel <= cfg.gauge_rel_tol, {{"rel_mismatch", rel}}));
    }

    // (b) boundary-term ladders
    {
      bool decreasing = true;
      double prevJ = 0.0, prevK = 0.0;
      for (std::size_t i = 0; i < cfg.h_ladder.size(); ++i) {
        const double h = cfg.h_ladder[i];
        cgo::CGOSolution u1 =
            cgo::build_cgo(chart, pair.A1, pair.q1, h, +1, 0.0, b, kernel, ck, cfg.kappa);
        cgo::CGOSolution u2 =
            cgo::build_cgo(chart, pair.A2, pair.q2, h, -1, 0.0, b, kernel, ck, cfg.kappa);
        identity::BoundaryTerms bt = identity::boundary_terms(pair, u1, u2, region);
        const double hJ = h * std::abs(bt.J), hK = h * std::abs(bt.K);
        ladders << phi_name << ',' << format_double(h) << ',' << format_double(hJ) << ','
                << format_double(hK) << '\n';
        if (i > 0 && !(hJ < prevJ && hK <= prevK + 1e-30)) decreasing = false;
        prevJ = hJ;
        prevK = hK;
      }
      res.verdicts.push_back(
          verdict("boundary terms h|J_h|, h|K_h| decreasing (" + phi_name + ")", decreasing));
    }

    // (c) limit functional over the probe family
    {
      OneForm delta = pair.delta();
      ScalarField Phi = dbar::phase_correction(delta, 1, ck);
      double delta_sup = 0.0;
      for (int axis = 0; axis < 3; ++axis)
        for (const auto& z : delta.comp[axis]) delta_sup = std::max(delta_sup, std::abs(z));
      ScalarField ones(chart);
      for (auto& z : ones.v) z = 1.0;
      const double vol = geometry::integrate_volume(chart, ones).real();
      auto bfam = presets::theta_bumps(chart, cfg.functional_b_count);
      bool ok = true;
      double worst = 0.0;
      for (double lam : cfg.functional_lambdas)
        for (std::size_t bi = 0; bi < bfam.size(); ++bi) {
          const Complex val =
              identity::magnetic_limit_functional(chart, delta, Phi, lam, bfam[bi]);
          double bsup = 0.0;
          for (int k = 0; k < chart.nth(); ++k)
            bsup = std::max(bsup, std::abs(bfam[bi](chart.theta(k))));
          const double rel = std::abs(val) / (delta_sup * bsup * vol);
          probes << phi_name << ',' << format_double(lam) << ',' << bi << ','
                 << format_double(std::abs(val)) << ',' << format_double(rel) << '\n';
          worst = std::max(worst, rel);
          if (!(rel <= cfg.gauge_rel_tol)) ok = false;
        }
      res.verdicts.push_back(verdict("limit functional vanishes on gauge pair (" + phi_name + ")",
                                     ok, {{"max_rel", worst}}));
    }
    (void)preset_idx;
  }
  sink.write("boundary_ladders.csv", ladders.str());
  sink.write("limit_functional.csv", probes.str());
  return res;
}

// ---------------------------------------------------------------- recover

RunResult run_recover(const ExperimentConfig& cfg, Sink sink) {
  RunResult res;
  CylinderChart chart = make_chart_preset(cfg.chart_preset, cfg.scaled_grid());
  auto lambdas = presets::spaced_lambdas(-cfg.lambda_max, cfg.lambda_max, cfg.lambda_count);
  auto bfam = presets::theta_bumps(chart, cfg.b_count);
  recover::DataOperator op = recover::assemble_data_operator(chart, lambdas, bfam);
  sink.write("operator_rows.csv", fieldio::probe_rows_csv(lambdas, cfg.b_count));
  sink.write("operator_matrix.csv", fieldio::matrix_to_csv(op.M));
  {
    NormLedger meta;
    meta["rows"] = op.rows();
    meta["cols"] = op.cols();
    meta["lambda_count"] = static_cast<double>(lambdas.size());
    meta["b_count"] = cfg.b_count;
    sink.write("operator_meta.json", ledger_to_json(meta));
  }

  recover::InjectivityReport inj = recover::injectivity_report(op);
  {
    std::ostringstream t;
    t << "index,sigma\n";
    for (std::size_t i = 0; i < inj.singular_values.size(); ++i)
      t << i << ',' << format_double(inj.singular_values[i]) << '\n';
    sink.write("singular_values.csv", t.str());
  }
  res.verdicts.push_back(verdict("data operator sigma_min positive", inj.sigma_min > 0.0,
                                 {{"sigma_min", inj.sigma_min},
                                  {"condition", inj.condition},
                                  {"rank", static_cast<double>(inj.rank)}}));

  // truth: the component of the bump preset the probe family can resolve
  ScalarField nominal = presets::make_dq(chart, cfg.dq_preset);
  ScalarField truth = recover::resolvable_component(op, nominal, cfg.resolvable_cut);
  sink.write("dq_nominal.csv", fieldio::field_to_csv(nominal));
  sink.write("dq_truth.csv", fieldio::field_to_csv(truth));
  Eigen::VectorXcd data = op.apply(truth);
  recover::Recovery rec = recover::recover_q(op, data, cfg.reg, &truth);
  sink.write("dq_estimate.csv", fieldio::field_to_csv(rec.estimate));
  const double nominal_err = recover::relative_error_flat(chart, rec.estimate, nominal);
  res.verdicts.push_back(verdict("recovery error within tolerance",
                                 rec.relative_error <= cfg.recover_rel_tol,
                                 {{"relative_error", rec.relative_error},
                                  {"nominal_bump_error", nominal_err}}));

  // noisy sweep: L-curve over the regularization ladder
  {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd noisy = data;
    const double scale = data.norm() / std::sqrt(static_cast<double>(data.size()));
    for (int i = 0; i < noisy.size(); ++i)
      noisy[i] += cfg.noise_level * scale * Complex(gauss(rng), gauss(rng));
    std::ostringstream t;
    t << "reg,residual_norm,solution_norm,relative_error\n";
    // reg_sweep is decreasing: the residual must not grow and the solution
    // norm must not shrink along the sweep
    bool res_monotone = true, sol_monotone = true;
    double prev_res = std::numeric_limits<double>::infinity(), prev_sol = -1.0;
    for (double reg : cfg.reg_sweep) {
      recover::Recovery r = recover::recover_q(op, noisy, reg, &truth);
      t << format_double(reg) << ',' << format_double(r.residual_norm) << ','
        << format_double(r.solution_norm) << ',' << format_double(r.relative_error) << '\n';
      if (r.residual_norm > prev_res * (1.0 + 1e-9)) res_monotone = false;
      if (prev_sol >= 0.0 && r.solution_norm < prev_sol * (1.0 - 1e-9)) sol_monotone = false;
      prev_res = r.residual_norm;
      prev_sol = r.solution_norm;
    }
    sink.write("lcurve.csv", t.str());
    res.verdicts.push_back(verdict("noisy sweep produces a monotone L-curve",
                                   res_monotone && sol_monotone));
  }
  return res;
}

// ---------------------------------------------------------------- euclid-map

RunResult run_euclid(const ExperimentConfig& cfg, Sink sink) {
  RunResult res;
  // the axis point realizes y1 = 1, c = e^2 exactly; the laplacian table
  // needs off-axis points (the polar chart degenerates at r = 0)
  const std::vector<std::array<double, 3>> points = {{0.1, 0.2, 1.1},
                                                     {-0.3, 0.1, 1.4},
                                                     {0.25, -0.2, 2.0},
                                                     {0.2, -0.35, 1.6},
                                                     {0.4, 0.3, 1.8}};
  auto mapped = geometry::log_polar_map(points);
  {
    auto axis_pt = geometry::log_polar_map({{0.0, 0.0, std::exp(1.0)}});
    std::ostringstream t;
    t << "y1,warp\n"
      << format_double(axis_pt[0].y1) << ',' << format_double(axis_pt[0].warp) << '\n';
    sink.write("axis_point.csv", t.str());
    res.verdicts.push_back(verdict(
        "axis probe maps to y1 = 1 with warp e^2",
        std::abs(axis_pt[0].y1 - 1.0) < 1e-14 &&
            std::abs(axis_pt[0].warp - std::exp(2.0)) < 1e-13 * std::exp(2.0)));
  }

  // closed-form test functions with Euclidean laplacians 0, 6, 0
  struct TestFn {
    const char* name;
    // pullback value and partials in (y1, r, theta)
    std::function<double(double, double, double)> u, du1, dur, duth;
    std::function<double(const std::array<double, 3>&)> lap_euclid;
  };
  const std::vector<TestFn> fns = {
      {"x3", [](double y1, double r, double) { return std::exp(y1) * std::cos(r); },
       [](double y1, double r, double) { return std::exp(y1) * std::cos(r); },
       [](double y1, double r, double) { return -std::exp(y1) * std::sin(r); },
       [](double, double, double) { return 0.0; },
       [](const std::array<double, 3>&) { return 0.0; }},
      {"abs2", [](double y1, double, double) { return std::exp(2.0 * y1); },
       [](double y1, double, double) { return 2.0 * std::exp(2.0 * y1); },
       [](double, double, double) { return 0.0; },
       [](double, double, double) { return 0.0; },
       [](const std::array<double, 3>&) { return 6.0; }},
      {"x1", [](double y1, double r, double th) { return std::exp(y1) * std::sin(r) * std::cos(th); },
       [](double y1, double r, double th) { return std::exp(y1) * std::sin(r) * std::cos(th); },
       [](double y1, double r, double th) { return std::exp(y1) * std::cos(r) * std::cos(th); },
       [](double y1, double r, double th) { return -std::exp(y1) * std::sin(r) * std::sin(th); },
       [](const std::array<double, 3>&) { return 0.0; }},
  };

  std::ostringstream t;
  t << "point,fn,warp_expected,warp_mapped,lap_euclid,lap_warped,difference\n";
  bool ok = true;
  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto& lp = mapped[p];
    const double warp_expected =
        points[p][0] * points[p][0] + points[p][1] * points[p][1] + points[p][2] * points[p][2];
    if (std::abs(lp.warp - warp_expected) > 1e-12 * warp_expected) ok = false;
    for (const auto& fn : fns) {
      // laplacian of the pullback under g = e^{2 y1}(dy1^2 + dr^2 + sin^2 r dth^2)
      // via central differences of the flux form, spacing small enough that
      // the truncation sits well under the 1e-6 gate
      const double d = 2e-4;
      auto flux_lap = [&](double y1, double r, double th) {
        auto W1 = [&](double a, double b, double cth) {
          return std::exp(a) * std::sin(b) * fn.du1(a, b, cth);
        };
        auto Wr = [&](double a, double b, double cth) {
          return std::exp(a) * std::sin(b) * fn.dur(a, b, cth);
        };
        auto Wth = [&](double a, double b, double cth) {
          return std::exp(a) / std::sin(b) * fn.duth(a, b, cth);
        };
        const double div = (W1(y1 + d, r, th) - W1(y1 - d, r, th)) / (2 * d) +
                           (Wr(y1, r + d, th) - Wr(y1, r - d, th)) / (2 * d) +
                           (Wth(y1, r, th + d) - Wth(y1, r, th - d)) / (2 * d);
        return div / (std::exp(3.0 * y1) * std::sin(r));
      };
      const double lw = flux_lap(lp.y1, lp.r, lp.theta);
      const double le = fn.lap_euclid(points[p]);
      const double diff = std::abs(lw - le);
      if (diff > cfg.coord_change_tol) ok = false;
      t << p << ',' << fn.name << ',' << format_double(warp_expected) << ','
        << format_double(lp.warp) << ',' << format_double(le) << ',' << format_double(lw) << ','
        << format_double(diff) << '\n';
    }
  }
  sink.write("coordinate_change.csv", t.str());
  res.verdicts.push_back(verdict("log-polar laplacian matches the euclidean one", ok));
  return res;
}

// ---------------------------------------------------------------- advect

RunResult run_advect(const ExperimentConfig& cfg, Sink sink) {
  RunResult res;
  CylinderChart chart = make_chart_preset(cfg.chart_preset, cfg.scaled_grid());
  VectorField X1 = presets::make_X(chart, cfg.X_preset);

  // operator identity L_X u = L_{A,q} u on a smooth probe
  {
    auto [A, q] = geometry::advection_to_magnetic(chart, X1);
    ScalarField u = smooth_probe_u(chart);
    ScalarField lhs = geometry::advection_apply(chart, X1, u);
    ScalarField rhs = geometry::magnetic_apply(chart, A, q, u);
    ScalarField diff(chart);
    for (std::size_t id = 0; id < chart.size(); ++id) diff.v[id] = lhs.v[id] - rhs.v[id];
    const double rel =
        geometry::norm_lp(chart, diff, 2.0) / std::max(geometry::norm_lp(chart, lhs, 2.0), 1e-30);
    res.verdicts.push_back(verdict("advection reduction matches the magnetic operator",
                                   rel <= cfg.advect_rel_tol, {{"relative_difference", rel}}));
  }

  // pipeline on the equal-data scenario (X2 = X1) plus a nonzero demo
  auto pipeline = [&](const std::string& phi_name, bool gate) {
    ScalarField phi0 = presets::make_gauge_phi(chart, phi_name);
    OneForm dphi = presets::make_gauge_dphi(chart, phi_name);
    VectorField X2 = X1;
    {
      VectorField grad = geometry::sharp(chart, dphi);
      for (int axis = 0; axis < 3; ++axis)
        for (std::size_t id = 0; id < chart.size(); ++id)
          X2.comp[axis][id] += grad.comp[axis][id];
    }
    auto [A1, q1] = geometry::advection_to_magnetic(chart, X1);
    auto [A2, q2] = geometry::advection_to_magnetic(chart, X2);
    ScalarField dq(chart);
    for (std::size_t id = 0; id < chart.size(); ++id) dq.v[id] = q1.v[id] - q2.v[id];

    // recover the q-difference from electric data
    auto lambdas = presets::spaced_lambdas(-cfg.lambda_max, cfg.lambda_max, cfg.lambda_count);
    auto bfam = presets::theta_bumps(chart, cfg.b_count);
    recover::DataOperator op = recover::assemble_data_operator(chart, lambdas, bfam);
    Eigen::VectorXcd data(op.rows());
    {
      int row = 0;
      for (double lam : lambdas)
        for (const auto& b : bfam) data[row++] = identity::electric_data(chart, dq, lam, b);
    }
    recover::Recovery rec = recover::recover_q(op, data, cfg.reg, &dq);
    const double dq_norm = geometry::norm_lp(chart, dq, 2.0);

    // gauge certificate: primitive of (X1 - X2)^flat, then the linearized
    // Dirichlet solve driven by the measured q-difference
    VectorField diffX(chart);
    for (int axis = 0; axis < 3; ++axis)
      for (std::size_t id = 0; id < chart.size(); ++id)
        diffX.comp[axis][id] = X1.comp[axis][id] - X2.comp[axis][id];
    OneForm delta_flat = geometry::flat(chart, diffX);
    identity::GaugePotential gp = identity::gauge_potential(chart, delta_flat, 1e-4);

    // -Lap psi + X2(psi) + <grad phi, grad psi>/2 = 2 dq with zero boundary
    // values; d phi = -delta_flat since X2 = X1 + grad phi.  The first-order
    // part rides on the conjugation slot: 2 <dpsi_w, d psi>_g = V(psi) with
    // dpsi_w = (X2_flat - delta_flat/2) / 2.
    ops::WeightData w = ops::weight_zero(chart);
    OneForm x2_flat = geometry::flat(chart, X2);
    for (int axis = 0; axis < 3; ++axis)
      for (std::size_t id = 0; id < chart.size(); ++id)
        w.dpsi.comp[axis][id] =
            0.5 * (x2_flat.comp[axis][id] - 0.5 * delta_flat.comp[axis][id]);
    ops::ConjugatedOperator P = ops::ConjugatedOperator::make(chart, OneForm(chart),
                                                              ScalarField(chart), w, 1.0);
    ScalarField rhs(chart);
    for (std::size_t id = 0; id < chart.size(); ++id) rhs.v[id] = 2.0 * dq.v[id];
    ops::DirichletSolveResult sol = ops::solve_dirichlet(P, rhs);
    double cert = 0.0;
    for (const auto& z : sol.solution.v) cert = std::max(cert, std::abs(z));
    double phi_rec_err = -1.0;
    if (dq_norm > 1e-14) {
      ScalarField d(chart);
      for (std::size_t id = 0; id < chart.size(); ++id)
        d.v[id] = sol.solution.v[id] - phi0.v[id];
      phi_rec_err =
          geometry::norm_lp(chart, d, 2.0) / std::max(geometry::norm_lp(chart, phi0, 2.0), 1e-30);
    }
    NormLedger led;
    led["dq_L2"] = dq_norm;
    led["recovered_dq_relative_error"] = rec.relative_error;
    led["gauge_path_disagreement"] = gp.path_disagreement;
    led["gauge_boundary_sup"] = gp.boundary_sup;
    led["certificate_sup"] = cert;
    led["phi_recovery_relative_error"] = phi_rec_err;
    sink.write("pipeline_" + phi_name + ".json", ledger_to_json(led));
    if (gate)
      res.verdicts.push_back(verdict("equal-field scenario yields a zero certificate",
                                     cert <= cfg.advect_rel_tol, {{"certificate_sup", cert}}));
  };
  pipeline("zero", true);
  pipeline("bump", false);
  return res;
}

}  // namespace

std::vector<std::string> subcommand_names() {
  return {"mollify-rates", "dbar-check",  "cgo-build", "carleman-check",
          "identity",      "recover-q",   "euclid-map", "advect"};
}

RunResult run_subcommand(const std::string& name, const ExperimentConfig& cfg) {
  Sink sink;
  RunResult res;
  sink.artifacts = &res.artifacts;
  sink.dir = fs::path(cfg.out_dir) / name;

  if (name == "mollify-rates") res = run_mollify(cfg, {sink.dir, &res.artifacts});
  else if (name == "dbar-check") res = run_dbar(cfg, {sink.dir, &res.artifacts});
  else if (name == "cgo-build") res = run_cgo(cfg, {sink.dir, &res.artifacts});
  else if (name == "carleman-check") res = run_carleman(cfg, {sink.dir, &res.artifacts});
  else if (name == "identity") res = run_identity(cfg, {sink.dir, &res.artifacts});
  else if (name == "recover-q") res = run_recover(cfg, {sink.dir, &res.artifacts});
  else if (name == "euclid-map") res = run_euclid(cfg, {sink.dir, &res.artifacts});
  else if (name == "advect") res = run_advect(cfg, {sink.dir, &res.artifacts});
  else {
    res.exit_code = 2;
    res.log = "unknown subcommand: " + name;
    return res;
  }

  fs::create_directories(sink.dir);
  const fs::path vp = sink.dir / "verdicts.json";
  write_text_file(vp.string(), verdicts_to_json(res.verdicts));
  res.artifacts.push_back(vp.string());
  std::ostringstream log;
  bool all = true;
  for (const auto& v : res.verdicts) {
    log << (v.pass ? "[PASS] " : "[FAIL] ") << v.check << '\n';
    all = all && v.pass;
  }
  res.log = log.str();
  res.exit_code = all ? 0 : 1;
  return res;
}

}  // namespace mslab
