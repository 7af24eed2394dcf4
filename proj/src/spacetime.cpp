// dwarp - doubly warped space-times

#include "dwarp/spacetime.hpp"

#include <cmath>

namespace dwarp {

namespace {

DoublyWarpedProduct build_lorentzian_product(std::string name, Chart base, const ScalarExpr& f,
                                             const ScalarExpr& sigma,
                                             const std::string& t_coord) {
  Chart time_line = Chart::line("time_" + t_coord, t_coord, -1.0);
  return DoublyWarpedProduct(std::move(name), std::move(time_line), std::move(base), sigma, f);
}

}  // namespace

DoublyWarpedSpacetime::DoublyWarpedSpacetime(std::string name, Chart base, ScalarExpr f,
                                             ScalarExpr sigma, std::string t_coord,
                                             std::pair<double, double> t_interval)
    : f_(std::move(f)),
      sigma_(std::move(sigma)),
      t_coord_(std::move(t_coord)),
      t_interval_(t_interval),
      product_(build_lorentzian_product(std::move(name), std::move(base), f_, sigma_, t_coord_)) {}

SamplePlan DoublyWarpedSpacetime::with_time_box(SamplePlan plan) const {
  if (plan.box.find(t_coord_) == plan.box.end()) plan.box[t_coord_] = t_interval_;
  return plan;
}

namespace spacetime {

namespace {

struct StData {
  Point pt;      // time factor point
  Point pb;      // base point
  double t;
  double f, sigma, sigma_dot, sigma_ddot;
};

StData st_data(const DoublyWarpedSpacetime& st, const Point& p) {
  StData d;
  std::tie(d.pt, d.pb) = st.product().split_point(p);
  d.t = d.pt.at(st.t_coord());
  d.f = eval(st.f(), d.pb.values);
  d.sigma = eval(st.sigma(), d.pt.values);
  ScalarExpr sdot = diff(st.sigma(), st.t_coord());
  d.sigma_dot = eval(sdot, d.pt.values);
  d.sigma_ddot = eval(diff(sdot, st.t_coord()), d.pt.values);
  if (d.f <= 0.0 || d.sigma <= 0.0)
    throw PreconditionError("warping function non-positive at sample of '" + st.name() + "'");
  return d;
}

double eval_h(const ScalarExpr& h, const StData& d) { return eval(h, d.pt.values); }

double eval_hdot(const DoublyWarpedSpacetime& st, const ScalarExpr& h, const StData& d) {
  return eval(diff(h, st.t_coord()), d.pt.values);
}

}  // namespace

VectorField lift(const DoublyWarpedSpacetime& st, const SpacetimeField& zeta) {
  VectorField out;
  out.chart = st.spacetime_chart().name();
  out.components[st.t_coord()] = zeta.h;
  for (const auto& [coord, comp] : zeta.spatial.components) out.components[coord] = comp;
  return out;
}

double lie_spacetime(const DoublyWarpedSpacetime& st, const SpacetimeField& zeta,
                     const SpacetimeField& X, const SpacetimeField& Y, const Point& p) {
  StData d = st_data(st, p);
  const Chart& base = st.base();

  double x = eval_h(X.h, d), y = eval_h(Y.h, d);
  double h = eval_h(zeta.h, d), hdot = eval_hdot(st, zeta.h, d);
  double zlnf = warped::field_applied(base, zeta.spatial, st.f(), d.pb) / d.f;

  Eigen::MatrixXd g = geom::metric_at(base, d.pb);
  Eigen::MatrixXd L = geom::lie_derivative_metric(base, zeta.spatial, d.pb);
  Eigen::VectorXd Xv = X.spatial.value_at(base, d.pb);
  Eigen::VectorXd Yv = Y.spatial.value_at(base, d.pb);

  return -2.0 * x * y * d.f * d.f * (hdot + zlnf) + d.sigma * d.sigma * Xv.dot(L * Yv) +
         2.0 * h * d.sigma * d.sigma_dot * Xv.dot(g * Yv);
}

ClassificationReport timelike_conformal_check(const DoublyWarpedSpacetime& st,
                                              const ScalarExpr& h, const SamplePlan& plan_in) {
  ClassificationReport report;
  report.check = "timelike_conformal_check";
  SamplePlan plan = st.with_time_box(plan_in);
  const Chart& chart = st.spacetime_chart();
  auto points = sample_points(chart, plan, {st.f(), st.sigma()});

  SpacetimeField field{h, VectorField{st.base().name(), {}}};
  VectorField lifted = lift(st, field);

  std::vector<double> a_values;
  a_values.reserve(points.size());
  double worst_demand_gap = 0.0, worst_factor_gap = 0.0, rho_scale = 0.0;
  for (const auto& p : points) {
    StData d = st_data(st, p);
    double hv = eval_h(h, d), hdot = eval_hdot(st, h, d);
    double a = hv / d.sigma;
    a_values.push_back(a);

    double rho_time = 2.0 * hdot;
    double rho_space = 2.0 * hv * d.sigma_dot / d.sigma;
    auto est = geom::conformal_factor_estimate(chart, lifted, p);

    SampleRow row;
    row.point = p;
    row.residual = est.residual;
    row.values["a"] = a;
    row.values["rho_demand_time"] = rho_time;
    row.values["rho_demand_space"] = rho_space;
    row.values["rho_measured"] = est.rho;
    report.add_row(std::move(row));

    worst_demand_gap = std::max(worst_demand_gap, std::abs(rho_time - rho_space));
    worst_factor_gap = std::max(worst_factor_gap, std::abs(est.rho - rho_time));
    rho_scale = std::max(rho_scale, std::abs(rho_time));
  }

  const int n = static_cast<int>(points.size());
  double a_mean = 0.0;
  for (double a : a_values) a_mean += a;
  a_mean /= n;
  // Two-pass variance; the naive sum-of-squares form cancels catastrophically
  // when a is constant to machine precision.
  double var = 0.0;
  for (double a : a_values) var += (a - a_mean) * (a - a_mean);
  double a_sd = std::sqrt(var / n);

  report.derived["a_mean"] = a_mean;
  report.derived["a_stddev"] = a_sd;
  report.derived["worst_demand_gap"] = worst_demand_gap;
  report.derived["factor_crosscheck_gap"] = worst_factor_gap;

  bool proportional = a_sd <= plan.tol * (1.0 + std::abs(a_mean));
  bool nonnegative = a_mean >= -plan.tol;
  bool direct = report.worst_residual <= plan.tol * (1.0 + rho_scale);
  if (proportional && nonnegative) {
    bool factor_ok = worst_factor_gap <= plan.tol * 10.0 * (1.0 + rho_scale);
    report.pass = direct && factor_ok;
    report.verdict = std::abs(a_mean) <= plan.tol ? "killing" : "conformal";
    if (!factor_ok) report.notes.push_back("measured factor deviates from 2h'");
  } else {
    report.pass = !direct;  // fit verdict and direct measurement must agree
    report.verdict = "not_conformal";
    report.notes.push_back("h is not a nonnegative constant multiple of sigma; factor demands 2h' and 2h sigma'/sigma are incompatible");
  }
  return report;
}

ClassificationReport killing_decomposition_check(const DoublyWarpedSpacetime& st,
                                                 const SpacetimeField& zeta,
                                                 const SamplePlan& plan_in) {
  ClassificationReport report;
  report.check = "killing_decomposition_check";
  SamplePlan plan = st.with_time_box(plan_in);
  const Chart& chart = st.spacetime_chart();
  const Chart& base = st.base();
  VectorField lifted = lift(st, zeta);
  auto points = sample_points(chart, plan, {st.f(), st.sigma()});
  auto probes = probe_directions(chart.dim(), plan.seed);

  bool ok_i = true, ok_ii = true, ok_iii = true;
  for (const auto& p : points) {
    StData d = st_data(st, p);
    double h = eval_h(zeta.h, d), hdot = eval_hdot(st, zeta.h, d);
    double zlnf = warped::field_applied(base, zeta.spatial, st.f(), d.pb) / d.f;

    double track_i = std::abs(hdot + zlnf);

    double rho2 = -2.0 * h * d.sigma_dot / d.sigma;
    Eigen::MatrixXd L = geom::lie_derivative_metric(base, zeta.spatial, d.pb);
    Eigen::MatrixXd g = geom::metric_at(base, d.pb);
    double track_ii = (L - rho2 * g).cwiseAbs().maxCoeff();

    Eigen::MatrixXd gbar = geom::metric_at(chart, p);
    double track_iii = 0.0, scale = 0.0;
    for (const auto& X : probes) {
      Eigen::VectorXd Dz = geom::covariant_derivative_dir(chart, X, lifted, p);
      track_iii = std::max(track_iii, std::abs(X.dot(gbar * Dz)));
      scale = std::max(scale, Dz.cwiseAbs().maxCoeff() * gbar.cwiseAbs().maxCoeff());
    }

    double tol_i = plan.tol * (1.0 + std::abs(hdot) + std::abs(zlnf));
    double tol_ii = plan.tol * (1.0 + std::abs(rho2));
    double tol_iii = plan.tol * (1.0 + scale);
    ok_i = ok_i && track_i <= tol_i;
    ok_ii = ok_ii && track_ii <= tol_ii;
    ok_iii = ok_iii && track_iii <= tol_iii;

    SampleRow row;
    row.point = p;
    row.residual = track_iii;
    row.values["track_hdot_plus_zeta_lnf"] = track_i;
    row.values["track_base_factor"] = track_ii;
    row.values["track_direct_killing"] = track_iii;
    row.values["rho2_demand"] = rho2;
    report.add_row(std::move(row));
  }

  report.derived["hdot_condition_holds"] = ok_i ? 1.0 : 0.0;
  report.derived["base_factor_condition_holds"] = ok_ii ? 1.0 : 0.0;
  report.derived["direct_killing"] = ok_iii ? 1.0 : 0.0;
  report.verdict = ok_iii ? "killing" : "not_killing";
  // Two-sided consistency at sample resolution: direct verdict must coincide
  // with the conjunction of the two decomposition conditions.
  report.pass = ok_iii == (ok_i && ok_ii);
  if (!report.pass)
    report.notes.push_back("decomposition conditions and direct measurement disagree");
  return report;
}

double conformal_factor_along_curve_st(const DoublyWarpedSpacetime& st,
                                       const SpacetimeField& zeta, const SpacetimeField& V,
                                       const Point& p, double normalization) {
  StData d = st_data(st, p);
  const Chart& chart = st.spacetime_chart();
  const Chart& base = st.base();

  VectorField liftedV = lift(st, V);
  Eigen::VectorXd vbar = liftedV.value_at(chart, p);
  double norm = vbar.dot(geom::metric_at(chart, p) * vbar);
  if (std::abs(norm - normalization) > 1e-9)
    throw PreconditionError("conformal_factor_along_curve_st: gbar(V,V)=" + std::to_string(norm) +
                            ", expected " + std::to_string(normalization));

  double h = eval_h(zeta.h, d), hdot = eval_hdot(st, zeta.h, d);
  Eigen::MatrixXd g = geom::metric_at(base, d.pb);
  Eigen::VectorXd Vb = V.spatial.value_at(base, d.pb);
  Eigen::VectorXd bracket = geom::lie_bracket(base, zeta.spatial, V.spatial, d.pb);
  double gVV = Vb.dot(g * Vb);
  double s2 = d.sigma * d.sigma;

  return 2.0 * hdot + (2.0 * s2 * bracket.dot(g * Vb) +
                       2.0 * (h * d.sigma * d.sigma_dot - hdot * s2) * gVV) / normalization;
}

ClassificationReport concurrent_check_st(const DoublyWarpedSpacetime& st,
                                         const SpacetimeField& zeta, const SamplePlan& plan_in) {
  ClassificationReport report;
  report.check = "concurrent_check_st";
  SamplePlan plan = st.with_time_box(plan_in);
  const Chart& chart = st.spacetime_chart();
  const Chart& base = st.base();
  VectorField lifted = lift(st, zeta);
  auto points = sample_points(chart, plan, {st.f(), st.sigma()});
  auto probes = probe_directions(chart.dim(), plan.seed);
  auto base_probes = probe_directions(base.dim(), plan.seed + 1);

  bool concurrent = true;
  double max_hdot_resid = 0.0, max_base_resid = 0.0, max_gradf = 0.0, max_sigma_dot = 0.0;
  double max_h = 0.0, max_h_sigma_dot = 0.0, max_triple = 0.0;
  double max_hffp = 0.0, max_kssd = 0.0;
  for (const auto& p : points) {
    StData d = st_data(st, p);
    double resid = 0.0, scale = 0.0;
    for (const auto& X : probes) {
      Eigen::VectorXd Dz = geom::covariant_derivative_dir(chart, X, lifted, p);
      resid = std::max(resid, (Dz - X).cwiseAbs().maxCoeff());
      scale = std::max(scale, Dz.cwiseAbs().maxCoeff());
    }
    concurrent = concurrent && resid <= plan.tol * (1.0 + scale);

    double h = eval_h(zeta.h, d), hdot = eval_hdot(st, zeta.h, d);
    double base_resid = 0.0;
    for (const auto& X : base_probes) {
      Eigen::VectorXd Dz = geom::covariant_derivative_dir(base, X, zeta.spatial, d.pb);
      base_resid = std::max(base_resid, (Dz - X).cwiseAbs().maxCoeff());
    }
    Eigen::VectorXd gradf = geom::gradient(base, st.f(), d.pb);
    double gradf_norm =
        std::sqrt(std::abs(gradf.dot(geom::metric_at(base, d.pb) * gradf)));

    max_hdot_resid = std::max(max_hdot_resid, std::abs(hdot - 1.0));
    max_base_resid = std::max(max_base_resid, base_resid);
    max_gradf = std::max(max_gradf, gradf_norm);
    max_sigma_dot = std::max(max_sigma_dot, std::abs(d.sigma_dot));
    max_h = std::max(max_h, std::abs(h));
    max_h_sigma_dot = std::max(max_h_sigma_dot, std::abs(h * d.sigma_dot));
    max_triple = std::max(max_triple, std::abs(h * d.sigma_dot * gradf_norm));

    SampleRow row;
    row.point = p;
    row.residual = resid;
    row.values["hdot_minus_one"] = std::abs(hdot - 1.0);
    row.values["base_concurrency_residual"] = base_resid;
    row.values["grad_f_norm"] = gradf_norm;
    row.values["sigma_dot"] = d.sigma_dot;

    if (base.dim() == 1) {
      // Appendix-style diagnostics on the 2-D space-time.
      double fprime = eval(diff(st.f(), base.coords()[0]), d.pb.values);
      double k = eval(zeta.spatial.component(base.coords()[0]), d.pb.values);
      double hffp = h * d.f * fprime;
      double kssd = k * d.sigma * d.sigma_dot;
      row.values["h_f_fprime"] = hffp;
      row.values["k_sigma_sigmadot"] = kssd;
      max_hffp = std::max(max_hffp, std::abs(hffp));
      max_kssd = std::max(max_kssd, std::abs(kssd));
    }
    report.add_row(std::move(row));
  }

  report.derived["hdot_residual"] = max_hdot_resid;
  report.derived["base_concurrency_residual"] = max_base_resid;
  report.derived["grad_f_norm"] = max_gradf;
  report.derived["sigma_dot_max"] = max_sigma_dot;
  report.derived["h_max"] = max_h;
  report.derived["h_sigma_dot_max"] = max_h_sigma_dot;
  report.derived["h_sigmadot_gradf_max"] = max_triple;
  if (st.base().dim() == 1) {
    report.derived["h_f_fprime_max"] = max_hffp;
    report.derived["k_sigma_sigmadot_max"] = max_kssd;
  }
  report.pass = concurrent;
  report.verdict = concurrent ? "concurrent" : "not_concurrent";
  return report;
}

std::vector<ConcurrentFamily2D> solve_concurrent_2d() {
  // Solution families of h'f + kf' = f, hff' + k sigma sigma' = 0,
  // h sigma' + k' sigma = sigma for zeta = h(t) d_t + k(x) d_x.
  return {
      {"h=0, sigma'=0", "(x+a) d_x", "constant", "r*(x+a)"},
      {"k=0, f'=0", "(t+a) d_t", "r*(t+a)", "constant"},
      {"f'=0, sigma'=0", "(t+a) d_t + (x+b) d_x", "constant", "constant"},
  };
}

ConcurrentInstance2D instantiate_concurrent_2d(int family, double a, double b, double r,
                                               double c0, const std::string& t_coord,
                                               const std::string& x_coord) {
  Chart base = Chart::euclidean("line_" + x_coord, {x_coord});
  ScalarExpr x = ScalarExpr::variable(x_coord);
  ScalarExpr t = ScalarExpr::variable(t_coord);
  ScalarExpr ca = ScalarExpr::constant(a);
  ScalarExpr cb = ScalarExpr::constant(b);
  ScalarExpr cr = ScalarExpr::constant(r);

  ScalarExpr f, sigma, h;
  VectorField spatial{base.name(), {}};
  switch (family) {
    case 0:  // h = 0, sigma constant, f = r (x+a), zeta = (x+a) d_x
      f = cr * (x + ca);
      sigma = ScalarExpr::constant(c0);
      h = ScalarExpr::constant(0.0);
      spatial.components[x_coord] = x + ca;
      break;
    case 1:  // k = 0, f constant, sigma = r (t+a), zeta = (t+a) d_t
      f = ScalarExpr::constant(c0);
      sigma = cr * (t + ca);
      h = t + ca;
      break;
    case 2:  // both constant, zeta = (t+a) d_t + (x+b) d_x
      f = ScalarExpr::constant(c0);
      sigma = ScalarExpr::constant(r);
      h = t + ca;
      spatial.components[x_coord] = x + cb;
      break;
    default:
      throw std::invalid_argument("instantiate_concurrent_2d: family must be 0, 1 or 2");
  }
  // Keep t+a and x+a positive on the default boxes.
  DoublyWarpedSpacetime st("concurrent2d", base, f, sigma, t_coord,
                           {0.1, 2.0});
  return {std::move(st), SpacetimeField{h, std::move(spatial)}};
}

}  // namespace spacetime
}  // namespace dwarp
