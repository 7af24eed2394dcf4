// dwarp - doubly warped products and their closed-form geometry

#include "dwarp/warped.hpp"

#include <cmath>

namespace dwarp {

namespace {

Chart assemble_product(const std::string& name, const Chart& m1, const Chart& m2,
                       const ScalarExpr& f1, const ScalarExpr& f2) {
  std::vector<std::string> coords = m1.coords();
  for (const auto& c2 : m2.coords()) {
    if (m1.coord_index(c2) >= 0)
      throw ChartError("product '" + name + "': coordinate '" + c2 +
                       "' appears in both factors");
    coords.push_back(c2);
  }
  const int n1 = m1.dim(), n = n1 + m2.dim();
  ScalarExpr f1sq = f1 * f1;
  ScalarExpr f2sq = f2 * f2;
  std::vector<ScalarExpr> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      if (i < n1 && j < n1) upper.push_back(f2sq * m1.metric(i, j));
      else if (i >= n1 && j >= n1) upper.push_back(f1sq * m2.metric(i - n1, j - n1));
      else upper.push_back(ScalarExpr::constant(0.0));
    }
  std::vector<int> signature = m1.signature();
  if (!signature.empty() && !m2.signature().empty())
    signature.insert(signature.end(), m2.signature().begin(), m2.signature().end());
  else
    signature.clear();
  return Chart(name, std::move(coords), std::move(upper), std::move(signature));
}

void require_vars_within(const ScalarExpr& f, const Chart& c, const std::string& what) {
  for (const auto& v : free_variables(f))
    if (c.coord_index(v) < 0)
      throw ChartError(what + " depends on '" + v + "', which is not a coordinate of chart '" +
                       c.name() + "'");
}

}  // namespace

DoublyWarpedProduct::DoublyWarpedProduct(std::string name, Chart m1, Chart m2, ScalarExpr f1,
                                         ScalarExpr f2)
    : name_(std::move(name)),
      m1_(std::move(m1)),
      m2_(std::move(m2)),
      f1_(std::move(f1)),
      f2_(std::move(f2)),
      product_(assemble_product(name_, m1_, m2_, f1_, f2_)) {
  require_vars_within(f1_, m1_, "warping function f1 of '" + name_ + "'");
  require_vars_within(f2_, m2_, "warping function f2 of '" + name_ + "'");
}

std::pair<Point, Point> DoublyWarpedProduct::split_point(const Point& p) const {
  Point p1, p2;
  p1.chart = m1_.name();
  p2.chart = m2_.name();
  for (const auto& c : m1_.coords()) p1.values[c] = p.at(c);
  for (const auto& c : m2_.coords()) p2.values[c] = p.at(c);
  return {std::move(p1), std::move(p2)};
}

Point DoublyWarpedProduct::join_point(const Point& p1, const Point& p2) const {
  Point p;
  p.chart = product_.name();
  for (const auto& c : m1_.coords()) p.values[c] = p1.at(c);
  for (const auto& c : m2_.coords()) p.values[c] = p2.at(c);
  return p;
}

namespace warped {

VectorField lift(const DoublyWarpedProduct& w, const SplitVectorField& zeta) {
  VectorField out;
  out.chart = w.product_chart().name();
  for (const auto& [coord, comp] : zeta.part1.components) out.components[coord] = comp;
  for (const auto& [coord, comp] : zeta.part2.components) out.components[coord] = comp;
  return out;
}

double field_applied(const Chart& c, const VectorField& X, const ScalarExpr& f, const Point& p) {
  double sum = 0.0;
  for (int i = 0; i < c.dim(); ++i) {
    ScalarExpr comp = X.component(c.coords()[i]);
    if (comp.is_constant(0.0)) continue;
    sum += eval(comp, p.values) * eval(diff(f, c.coords()[i]), p.values);
  }
  return sum;
}

namespace {

struct FactorData {
  Point p1, p2;
  double f1, f2;  // warping values
};

FactorData factor_data(const DoublyWarpedProduct& w, const Point& p) {
  FactorData d;
  std::tie(d.p1, d.p2) = w.split_point(p);
  d.f1 = eval(w.f1(), d.p1.values);
  d.f2 = eval(w.f2(), d.p2.values);
  if (d.f1 <= 0.0 || d.f2 <= 0.0)
    throw PreconditionError("warping function non-positive at sample of '" + w.name() + "'");
  return d;
}

// zeta_i(ln f_i) computed as zeta_i(f_i)/f_i; ln is never formed symbolically.
double log_derivative(const Chart& c, const VectorField& zeta, const ScalarExpr& f,
                      const Point& p, double fval) {
  return field_applied(c, zeta, f, p) / fval;
}

Eigen::VectorXd grad_at(const Chart& c, const ScalarExpr& f, const Point& p) {
  return geom::gradient(c, f, p);
}

}  // namespace

Eigen::VectorXd connection_closed_form(const DoublyWarpedProduct& w, const SplitVectorField& X,
                                       const SplitVectorField& Y, const Point& p) {
  const Chart& m1 = w.m1();
  const Chart& m2 = w.m2();
  FactorData d = factor_data(w, p);
  const int n1 = w.n1(), n2 = w.n2();

  Eigen::VectorXd X1 = X.part1.value_at(m1, d.p1), Y1 = Y.part1.value_at(m1, d.p1);
  Eigen::VectorXd X2 = X.part2.value_at(m2, d.p2), Y2 = Y.part2.value_at(m2, d.p2);
  Eigen::MatrixXd g1 = geom::metric_at(m1, d.p1);
  Eigen::MatrixXd g2 = geom::metric_at(m2, d.p2);

  Eigen::VectorXd out1 = Eigen::VectorXd::Zero(n1);
  Eigen::VectorXd out2 = Eigen::VectorXd::Zero(n2);

  // Same-factor case: D_{X_i} Y_i = D^i_{X_i} Y_i - (f_j/f_i^2) g_i(X_i,Y_i) grad_j f_j.
  out1 += geom::covariant_derivative(m1, X.part1, Y.part1, d.p1);
  out2 += -(d.f2 / (d.f1 * d.f1)) * X1.dot(g1 * Y1) * grad_at(m2, w.f2(), d.p2);

  out2 += geom::covariant_derivative(m2, X.part2, Y.part2, d.p2);
  out1 += -(d.f1 / (d.f2 * d.f2)) * X2.dot(g2 * Y2) * grad_at(m1, w.f1(), d.p1);

  // Cross case: D_{X_i} X_j = X_i(ln f_i) X_j + X_j(ln f_j) X_i.
  double X1lnf1 = log_derivative(m1, X.part1, w.f1(), d.p1, d.f1);
  double X2lnf2 = log_derivative(m2, X.part2, w.f2(), d.p2, d.f2);
  double Y1lnf1 = log_derivative(m1, Y.part1, w.f1(), d.p1, d.f1);
  double Y2lnf2 = log_derivative(m2, Y.part2, w.f2(), d.p2, d.f2);

  out2 += X1lnf1 * Y2;  // D_{X_1} Y_2
  out1 += Y2lnf2 * X1;
  out1 += X2lnf2 * Y1;  // D_{X_2} Y_1
  out2 += Y1lnf1 * X2;

  Eigen::VectorXd out(n1 + n2);
  out << out1, out2;
  return out;
}

double f_diamond(const DoublyWarpedProduct& w, int which, const Point& factor_point) {
  if (which != 1 && which != 2) throw std::invalid_argument("f_diamond: which must be 1 or 2");
  const Chart& c = which == 1 ? w.m1() : w.m2();
  const ScalarExpr& f = which == 1 ? w.f1() : w.f2();
  const int n_other = which == 1 ? w.n2() : w.n1();
  double fval = eval(f, factor_point.values);
  double lap = geom::laplacian(c, f, factor_point);
  Eigen::VectorXd grad = geom::gradient(c, f, factor_point);
  double grad_sq = grad.dot(geom::metric_at(c, factor_point) * grad);
  return fval * lap + (n_other - 1) * grad_sq;
}

Eigen::MatrixXd ricci_closed_form(const DoublyWarpedProduct& w, const Point& p) {
  const Chart& m1 = w.m1();
  const Chart& m2 = w.m2();
  FactorData d = factor_data(w, p);
  const int n1 = w.n1(), n2 = w.n2(), n = n1 + n2;

  Eigen::MatrixXd ric1 = geom::ricci(m1, d.p1);
  Eigen::MatrixXd ric2 = geom::ricci(m2, d.p2);
  Eigen::MatrixXd H1 = geom::hessian(m1, w.f1(), d.p1);
  Eigen::MatrixXd H2 = geom::hessian(m2, w.f2(), d.p2);
  Eigen::MatrixXd g1 = geom::metric_at(m1, d.p1);
  Eigen::MatrixXd g2 = geom::metric_at(m2, d.p2);
  double dia1 = f_diamond(w, 1, d.p1);
  double dia2 = f_diamond(w, 2, d.p2);

  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  ric.topLeftCorner(n1, n1) = ric1 - (n2 / d.f1) * H1 - (dia2 / (d.f1 * d.f1)) * g1;
  ric.bottomRightCorner(n2, n2) = ric2 - (n1 / d.f2) * H2 - (dia1 / (d.f2 * d.f2)) * g2;

  // Mixed block: (n-2) X_i(ln f_i) Y_j(ln f_j) on frame pairs.
  Eigen::VectorXd dlnf1(n1), dlnf2(n2);
  for (int a = 0; a < n1; ++a)
    dlnf1[a] = eval(diff(w.f1(), m1.coords()[a]), d.p1.values) / d.f1;
  for (int b = 0; b < n2; ++b)
    dlnf2[b] = eval(diff(w.f2(), m2.coords()[b]), d.p2.values) / d.f2;
  ric.topRightCorner(n1, n2) = (n - 2) * dlnf1 * dlnf2.transpose();
  ric.bottomLeftCorner(n2, n1) = ric.topRightCorner(n1, n2).transpose();
  return ric;
}

double lie_split(const DoublyWarpedProduct& w, const SplitVectorField& zeta,
                 const SplitVectorField& X, const SplitVectorField& Y, const Point& p) {
  const Chart& m1 = w.m1();
  const Chart& m2 = w.m2();
  FactorData d = factor_data(w, p);

  Eigen::VectorXd X1 = X.part1.value_at(m1, d.p1), Y1 = Y.part1.value_at(m1, d.p1);
  Eigen::VectorXd X2 = X.part2.value_at(m2, d.p2), Y2 = Y.part2.value_at(m2, d.p2);
  Eigen::MatrixXd g1 = geom::metric_at(m1, d.p1);
  Eigen::MatrixXd g2 = geom::metric_at(m2, d.p2);
  Eigen::MatrixXd L1 = geom::lie_derivative_metric(m1, zeta.part1, d.p1);
  Eigen::MatrixXd L2 = geom::lie_derivative_metric(m2, zeta.part2, d.p2);

  double z1f1 = field_applied(m1, zeta.part1, w.f1(), d.p1);
  double z2f2 = field_applied(m2, zeta.part2, w.f2(), d.p2);

  return d.f2 * d.f2 * X1.dot(L1 * Y1) + d.f1 * d.f1 * X2.dot(L2 * Y2) +
         2.0 * d.f1 * z1f1 * X2.dot(g2 * Y2) + 2.0 * d.f2 * z2f2 * X1.dot(g1 * Y1);
}

ClassificationReport classify_conformal_product(const DoublyWarpedProduct& w,
                                                const SplitVectorField& zeta,
                                                const SamplePlan& plan) {
  ClassificationReport report;
  report.check = "classify_conformal_product";
  const Chart& prod = w.product_chart();
  VectorField lifted = lift(w, zeta);
  auto points = sample_points(prod, plan, {w.f1(), w.f2()});

  bool factors_conformal = true, condition_holds = true, product_conformal = true;
  bool consistent = true;
  double rho_min = 0.0, rho_max = 0.0, killing_scale = 0.0;
  bool first = true;

  for (const auto& p : points) {
    FactorData d = factor_data(w, p);
    auto est1 = geom::conformal_factor_estimate(w.m1(), zeta.part1, d.p1);
    auto est2 = geom::conformal_factor_estimate(w.m2(), zeta.part2, d.p2);
    auto estp = geom::conformal_factor_estimate(prod, lifted, p);

    double z1lnf1 = log_derivative(w.m1(), zeta.part1, w.f1(), d.p1, d.f1);
    double z2lnf2 = log_derivative(w.m2(), zeta.part2, w.f2(), d.p2, d.f2);
    double cond_resid = std::abs((est1.rho - est2.rho) - 2.0 * (z1lnf1 - z2lnf2));
    double predicted = est1.rho + 2.0 * z2lnf2;

    bool ok1 = est1.residual <= plan.tol * (1.0 + std::abs(est1.rho));
    bool ok2 = est2.residual <= plan.tol * (1.0 + std::abs(est2.rho));
    bool okp = estp.residual <= plan.tol * (1.0 + std::abs(estp.rho));
    bool okc = cond_resid <= plan.tol * (1.0 + std::abs(est1.rho) + std::abs(est2.rho));
    factors_conformal = factors_conformal && ok1 && ok2;
    condition_holds = condition_holds && okc;
    product_conformal = product_conformal && okp;
    // Sufficiency direction of the conformal theorem: factor verdicts plus
    // the compatibility condition must force the measured product factor.
    if (ok1 && ok2 && okc)
      consistent = consistent && okp &&
                   std::abs(estp.rho - predicted) <= plan.tol * (1.0 + std::abs(predicted));

    if (first) { rho_min = rho_max = estp.rho; first = false; }
    rho_min = std::min(rho_min, estp.rho);
    rho_max = std::max(rho_max, estp.rho);
    killing_scale = std::max(killing_scale, std::abs(estp.rho));

    SampleRow row;
    row.point = p;
    row.residual = estp.residual;
    row.values["rho1"] = est1.rho;
    row.values["rho2"] = est2.rho;
    row.values["factor1_residual"] = est1.residual;
    row.values["factor2_residual"] = est2.residual;
    row.values["condition_residual"] = cond_resid;
    row.values["rho_product"] = estp.rho;
    row.values["rho_predicted"] = predicted;
    report.add_row(std::move(row));
  }

  double rho_spread = rho_max - rho_min;
  report.derived["rho_mean"] = 0.5 * (rho_min + rho_max);
  report.derived["rho_spread"] = rho_spread;
  report.derived["factors_conformal"] = factors_conformal ? 1.0 : 0.0;
  report.derived["condition_holds"] = condition_holds ? 1.0 : 0.0;
  report.derived["consistency"] = consistent ? 1.0 : 0.0;

  if (!product_conformal) {
    report.verdict = "not_conformal";
    report.pass = false;
  } else if (killing_scale <= plan.tol * 10.0) {
    report.verdict = "killing";
    report.pass = consistent;
  } else {
    report.verdict = "conformal";
    report.pass = consistent;
    if (rho_spread > plan.tol * (1.0 + killing_scale))
      report.notes.push_back("conformal, non-homothetic: fitted factor varies across samples");
  }
  return report;
}

ClassificationReport killing_projection(const DoublyWarpedProduct& w,
                                        const SplitVectorField& zeta, const SamplePlan& plan) {
  ClassificationReport report;
  report.check = "killing_projection";
  const Chart& prod = w.product_chart();
  VectorField lifted = lift(w, zeta);

  ClassificationReport direct = geom::killing_check(prod, lifted, plan);
  if (!direct.pass) {
    report.verdict = "precondition_failed";
    report.pass = false;
    report.worst_residual = direct.worst_residual;
    report.witness = direct.witness;
    report.notes.push_back("zeta is not a Killing field on the product (direct residual " +
                           std::to_string(direct.worst_residual) + "); projection skipped");
    return report;
  }

  auto points = sample_points(prod, plan, {w.f1(), w.f2()});
  bool ok = true;
  for (const auto& p : points) {
    FactorData d = factor_data(w, p);
    Eigen::MatrixXd L1 = geom::lie_derivative_metric(w.m1(), zeta.part1, d.p1);
    Eigen::MatrixXd L2 = geom::lie_derivative_metric(w.m2(), zeta.part2, d.p2);
    Eigen::MatrixXd g1 = geom::metric_at(w.m1(), d.p1);
    Eigen::MatrixXd g2 = geom::metric_at(w.m2(), d.p2);
    double z1lnf1 = log_derivative(w.m1(), zeta.part1, w.f1(), d.p1, d.f1);
    double z2lnf2 = log_derivative(w.m2(), zeta.part2, w.f2(), d.p2, d.f2);

    // Theorem statement: rho_i = -2 zeta_j(ln f_j), a function of the other
    // factor, compared on the product sample.
    double rho1_stmt = -2.0 * z2lnf2;
    double rho2_stmt = -2.0 * z1lnf1;
    double resid1 = (L1 - rho1_stmt * g1).cwiseAbs().maxCoeff();
    double resid2 = (L2 - rho2_stmt * g2).cwiseAbs().maxCoeff();

    // Proof-text variant: rho_2 = rho f_1^2 - 2 zeta_1(ln f_1) with rho the
    // measured product factor (zero here, so the two must coincide).
    double rho_prod = geom::conformal_factor_estimate(prod, lifted, p).rho;
    double rho1_proof = rho_prod * d.f2 * d.f2 - 2.0 * z2lnf2;
    double rho2_proof = rho_prod * d.f1 * d.f1 - 2.0 * z1lnf1;
    double resid1_proof = (L1 - rho1_proof * g1).cwiseAbs().maxCoeff();
    double resid2_proof = (L2 - rho2_proof * g2).cwiseAbs().maxCoeff();

    double scale = 1.0 + std::abs(rho1_stmt) + std::abs(rho2_stmt);
    ok = ok && resid1 <= plan.tol * scale && resid2 <= plan.tol * scale;

    SampleRow row;
    row.point = p;
    row.residual = std::max(resid1, resid2);
    row.values["rho1_stated"] = rho1_stmt;
    row.values["rho2_stated"] = rho2_stmt;
    row.values["residual_factor1"] = resid1;
    row.values["residual_factor2"] = resid2;
    row.values["residual_factor1_proof_variant"] = resid1_proof;
    row.values["residual_factor2_proof_variant"] = resid2_proof;
    report.add_row(std::move(row));
  }
  report.pass = ok;
  report.verdict = ok ? "pass" : "fail";
  return report;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> geodesic_residual(const DoublyWarpedProduct& w,
                                                              const CurveState& state) {
  const Chart& m1 = w.m1();
  const Chart& m2 = w.m2();
  const Point& p = state.position;
  FactorData d = factor_data(w, p);
  const int n1 = w.n1(), n2 = w.n2();

  Eigen::VectorXd z = state.velocity_vector(w.product_chart());
  Eigen::VectorXd z1 = z.head(n1), z2 = z.tail(n2);
  Eigen::MatrixXd g1 = geom::metric_at(m1, d.p1);
  Eigen::MatrixXd g2 = geom::metric_at(m2, d.p2);
  auto G1 = geom::christoffel(m1, d.p1);
  auto G2 = geom::christoffel(m2, d.p2);

  double z1lnf1 = 0.0, z2lnf2 = 0.0;
  for (int a = 0; a < n1; ++a)
    z1lnf1 += z1[a] * eval(diff(w.f1(), m1.coords()[a]), d.p1.values) / d.f1;
  for (int b = 0; b < n2; ++b)
    z2lnf2 += z2[b] * eval(diff(w.f2(), m2.coords()[b]), d.p2.values) / d.f2;

  double norm1 = z1.dot(g1 * z1), norm2 = z2.dot(g2 * z2);

  Eigen::VectorXd r1(n1), r2(n2);
  for (int k = 0; k < n1; ++k) r1[k] = z1.dot(G1[k] * z1);
  for (int k = 0; k < n2; ++k) r2[k] = z2.dot(G2[k] * z2);
  r1 += 2.0 * z2lnf2 * z1 -
        (d.f1 * d.f1) / (d.f2 * d.f2) * norm2 * (grad_at(m1, w.f1(), d.p1) / d.f1);
  r2 += 2.0 * z1lnf1 * z2 -
        (d.f2 * d.f2) / (d.f1 * d.f1) * norm1 * (grad_at(m2, w.f2(), d.p2) / d.f2);
  return {r1, r2};
}

ClassificationReport constant_length_report(const DoublyWarpedProduct& w,
                                            const SplitVectorField& zeta,
                                            const SplitVectorField& X, const SamplePlan& plan) {
  ClassificationReport report;
  report.check = "constant_length_report";
  const Chart& prod = w.product_chart();
  VectorField lifted_zeta = lift(w, zeta);
  VectorField lifted_X = lift(w, X);
  auto points = sample_points(prod, plan, {w.f1(), w.f2()});

  bool agree = true, cond1 = true, cond2 = true, derivative_zero = true;
  for (const auto& p : points) {
    FactorData d = factor_data(w, p);
    Eigen::MatrixXd g = geom::metric_at(prod, p);
    Eigen::VectorXd zl = lifted_zeta.value_at(prod, p);
    Eigen::VectorXd Dz = geom::covariant_derivative(prod, lifted_X, lifted_zeta, p);
    double lhs = Dz.dot(g * zl);

    Eigen::MatrixXd g1 = geom::metric_at(w.m1(), d.p1);
    Eigen::MatrixXd g2 = geom::metric_at(w.m2(), d.p2);
    Eigen::VectorXd z1 = zeta.part1.value_at(w.m1(), d.p1);
    Eigen::VectorXd z2 = zeta.part2.value_at(w.m2(), d.p2);
    Eigen::VectorXd D1 = geom::covariant_derivative(w.m1(), X.part1, zeta.part1, d.p1);
    Eigen::VectorXd D2 = geom::covariant_derivative(w.m2(), X.part2, zeta.part2, d.p2);
    double X1f1 = field_applied(w.m1(), X.part1, w.f1(), d.p1);
    double X2f2 = field_applied(w.m2(), X.part2, w.f2(), d.p2);
    double rhs = d.f2 * d.f2 * D1.dot(g1 * z1) + d.f1 * d.f1 * D2.dot(g2 * z2) +
                 d.f1 * X1f1 * z2.dot(g2 * z2) + d.f2 * X2f2 * z1.dot(g1 * z1);

    double agree_resid = std::abs(lhs - rhs);
    double scale = 1.0 + std::abs(lhs) + std::abs(rhs);
    agree = agree && agree_resid <= plan.tol * scale;

    double parallel1 = D1.cwiseAbs().maxCoeff();
    double parallel2 = D2.cwiseAbs().maxCoeff();
    double len_deriv1 = 2.0 * D1.dot(g1 * z1);
    double len_deriv2 = 2.0 * D2.dot(g2 * z2);
    double xf = std::abs(X1f1) + std::abs(X2f2);

    cond1 = cond1 && xf <= plan.tol && std::max(parallel1, parallel2) <= plan.tol;
    cond2 = cond2 && xf <= plan.tol &&
            std::max(std::abs(len_deriv1), std::abs(len_deriv2)) <= plan.tol;
    derivative_zero = derivative_zero && std::abs(lhs) <= plan.tol * scale;

    SampleRow row;
    row.point = p;
    row.residual = agree_resid;
    row.values["g_DXzeta_zeta"] = lhs;
    row.values["split_identity_value"] = rhs;
    row.values["X1_f1"] = X1f1;
    row.values["X2_f2"] = X2f2;
    row.values["parallel_defect"] = std::max(parallel1, parallel2);
    row.values["length_derivative"] = std::max(std::abs(len_deriv1), std::abs(len_deriv2));
    report.add_row(std::move(row));
  }
  report.derived["condition1_parallel"] = cond1 ? 1.0 : 0.0;
  report.derived["condition2_constant_factor_length"] = cond2 ? 1.0 : 0.0;
  report.derived["constant_length"] = derivative_zero ? 1.0 : 0.0;
  report.pass = agree;
  report.verdict = agree ? (derivative_zero ? "constant_length" : "identity_holds") : "fail";
  return report;
}

double conformal_factor_along_curve(const DoublyWarpedProduct& w, const SplitVectorField& zeta,
                                    const SplitVectorField& V, const Point& p) {
  const Chart& prod = w.product_chart();
  FactorData d = factor_data(w, p);
  VectorField lifted_V = lift(w, V);
  Eigen::VectorXd vv = lifted_V.value_at(prod, p);
  double norm = vv.dot(geom::metric_at(prod, p) * vv);
  if (std::abs(norm - 1.0) > 1e-9)
    throw PreconditionError("conformal_factor_along_curve: tangent is not unit (g(V,V)=" +
                            std::to_string(norm) + ")");

  Eigen::MatrixXd g1 = geom::metric_at(w.m1(), d.p1);
  Eigen::MatrixXd g2 = geom::metric_at(w.m2(), d.p2);
  Eigen::VectorXd V1 = V.part1.value_at(w.m1(), d.p1);
  Eigen::VectorXd V2 = V.part2.value_at(w.m2(), d.p2);
  Eigen::VectorXd D1 = geom::covariant_derivative(w.m1(), V.part1, zeta.part1, d.p1);
  Eigen::VectorXd D2 = geom::covariant_derivative(w.m2(), V.part2, zeta.part2, d.p2);
  double z1f1 = field_applied(w.m1(), zeta.part1, w.f1(), d.p1);
  double z2f2 = field_applied(w.m2(), zeta.part2, w.f2(), d.p2);

  return 2.0 * (d.f2 * d.f2 * D1.dot(g1 * V1) + d.f1 * d.f1 * D2.dot(g2 * V2) +
                d.f2 * z2f2 * V1.dot(g1 * V1) + d.f1 * z1f1 * V2.dot(g2 * V2));
}

}  // namespace warped
}  // namespace dwarp
