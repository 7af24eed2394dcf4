// dwarp - chart-level tensor calculus from raw metric components

#include "dwarp/geometry.hpp"

#include <cmath>

namespace dwarp {

void ClassificationReport::add_row(SampleRow row) {
  if (rows.empty() || row.residual > worst_residual) {
    worst_residual = row.residual;
    witness = row.point;
  }
  rows.push_back(std::move(row));
}

void SolitonCertificate::add_row(SampleRow row) {
  if (rows.empty() || row.residual > worst_residual) {
    worst_residual = row.residual;
    witness = row.point;
  }
  rows.push_back(std::move(row));
}

void SolitonCertificate::finalize() {
  pass = worst_residual <= tol;
  if (verdict.empty()) verdict = pass ? "pass" : "fail";
}

namespace geom {

Eigen::MatrixXd metric_at(const Chart& c, const Point& p) {
  const int n = c.dim();
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g(i, j) = g(j, i) = eval(c.metric(i, j), p.values);
  return g;
}

Eigen::MatrixXd inverse_metric_at(const Chart& c, const Point& p) {
  Eigen::MatrixXd g = metric_at(c, p);
  double det = g.determinant();
  if (std::abs(det) <= 1e-12)
    throw SingularMetricError("metric on chart '" + c.name() + "' is singular at sample (det=" +
                              std::to_string(det) + ")");
  return g.inverse();
}

std::vector<Eigen::MatrixXd> metric_d1_at(const Chart& c, const Point& p) {
  const int n = c.dim();
  std::vector<Eigen::MatrixXd> d(n, Eigen::MatrixXd(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        d[k](i, j) = d[k](j, i) = eval(c.d1_metric(k, i, j), p.values);
  return d;
}

std::vector<Eigen::MatrixXd> christoffel(const Chart& c, const Point& p) {
  const int n = c.dim();
  Eigen::MatrixXd ginv = inverse_metric_at(c, p);
  auto d = metric_d1_at(c, p);
  std::vector<Eigen::MatrixXd> G(n, Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l)
          sum += ginv(k, l) * (d[i](j, l) + d[j](i, l) - d[l](i, j));
        G[k](i, j) = G[k](j, i) = 0.5 * sum;
      }
  return G;
}

namespace {

// dG[m][k](i,j) = d_m Gamma^k_ij, assembled from exact first and second
// metric derivatives; d_m g^{kl} = -g^{ka} (d_m g_ab) g^{bl}.
std::vector<std::vector<Eigen::MatrixXd>> christoffel_d1(const Chart& c, const Point& p) {
  const int n = c.dim();
  Eigen::MatrixXd ginv = inverse_metric_at(c, p);
  auto d1 = metric_d1_at(c, p);

  std::vector<Eigen::MatrixXd> dginv(n);
  for (int m = 0; m < n; ++m) dginv[m] = -ginv * d1[m] * ginv;

  // second derivatives d2[m][k](i,j) = d_m d_k g_ij
  std::vector<std::vector<Eigen::MatrixXd>> d2(n, std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd(n, n)));
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          d2[m][k](i, j) = d2[m][k](j, i) = eval(c.d2_metric(m, k, i, j), p.values);

  std::vector<std::vector<Eigen::MatrixXd>> dG(n, std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n)));
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double sum = 0.0;
          for (int l = 0; l < n; ++l) {
            sum += dginv[m](k, l) * (d1[i](j, l) + d1[j](i, l) - d1[l](i, j));
            sum += ginv(k, l) * (d2[m][i](j, l) + d2[m][j](i, l) - d2[m][l](i, j));
          }
          dG[m][k](i, j) = dG[m][k](j, i) = 0.5 * sum;
        }
  return dG;
}

}  // namespace

Riemann riemann(const Chart& c, const Point& p) {
  const int n = c.dim();
  auto G = christoffel(c, p);
  auto dG = christoffel_d1(c, p);
  Riemann R(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double v = dG[j][l](k, i) - dG[k][l](j, i);
          for (int m = 0; m < n; ++m)
            v += G[l](j, m) * G[m](k, i) - G[l](k, m) * G[m](j, i);
          R(l, i, j, k) = v;
        }
  return R;
}

Eigen::MatrixXd ricci(const Chart& c, const Point& p) {
  const int n = c.dim();
  Riemann R = riemann(c, p);
  Eigen::MatrixXd ric(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double sum = 0.0;
      for (int l = 0; l < n; ++l) sum += R(l, i, l, j);
      ric(i, j) = sum;
    }
  return ric;
}

Eigen::VectorXd gradient(const Chart& c, const ScalarExpr& phi, const Point& p) {
  const int n = c.dim();
  Eigen::VectorXd dphi(n);
  for (int i = 0; i < n; ++i) dphi[i] = eval(diff(phi, c.coords()[i]), p.values);
  return inverse_metric_at(c, p) * dphi;
}

Eigen::MatrixXd hessian(const Chart& c, const ScalarExpr& phi, const Point& p) {
  const int n = c.dim();
  auto G = christoffel(c, p);
  Eigen::VectorXd dphi(n);
  std::vector<ScalarExpr> d(n);
  for (int i = 0; i < n; ++i) {
    d[i] = diff(phi, c.coords()[i]);
    dphi[i] = eval(d[i], p.values);
  }
  Eigen::MatrixXd H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = eval(diff(d[i], c.coords()[j]), p.values);
      for (int k = 0; k < n; ++k) v -= G[k](i, j) * dphi[k];
      H(i, j) = H(j, i) = v;
    }
  return H;
}

double laplacian(const Chart& c, const ScalarExpr& phi, const Point& p) {
  return (inverse_metric_at(c, p) * hessian(c, phi, p)).trace();
}

Eigen::VectorXd covariant_derivative_dir(const Chart& c, const Eigen::VectorXd& Xdir,
                                         const VectorField& zeta, const Point& p) {
  const int n = c.dim();
  auto G = christoffel(c, p);
  Eigen::VectorXd z = zeta.value_at(c, p);
  Eigen::MatrixXd J = zeta.jacobian_at(c, p);  // J(i,k) = d_i zeta^k
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) out[k] += Xdir[i] * (J(i, k) + G[k].row(i).dot(z));
  return out;
}

Eigen::VectorXd covariant_derivative(const Chart& c, const VectorField& X,
                                     const VectorField& zeta, const Point& p) {
  return covariant_derivative_dir(c, X.value_at(c, p), zeta, p);
}

Eigen::VectorXd lie_bracket(const Chart& c, const VectorField& zeta,
                            const VectorField& V, const Point& p) {
  Eigen::VectorXd z = zeta.value_at(c, p);
  Eigen::VectorXd v = V.value_at(c, p);
  Eigen::MatrixXd Jz = zeta.jacobian_at(c, p);
  Eigen::MatrixXd Jv = V.jacobian_at(c, p);
  const int n = c.dim();
  Eigen::VectorXd out(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += z[i] * Jv(i, k) - v[i] * Jz(i, k);
    out[k] = s;
  }
  return out;
}

Eigen::MatrixXd lie_derivative_metric(const Chart& c, const VectorField& zeta, const Point& p) {
  const int n = c.dim();
  Eigen::MatrixXd g = metric_at(c, p);
  auto dg = metric_d1_at(c, p);
  Eigen::VectorXd z = zeta.value_at(c, p);
  Eigen::MatrixXd J = zeta.jacobian_at(c, p);
  Eigen::MatrixXd L(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = 0.0;
      for (int k = 0; k < n; ++k)
        v += z[k] * dg[k](i, j) + g(k, j) * J(i, k) + g(i, k) * J(j, k);
      L(i, j) = L(j, i) = v;
    }
  return L;
}

Eigen::MatrixXd lie_derivative_metric_covariant(const Chart& c, const VectorField& zeta,
                                                const Point& p) {
  const int n = c.dim();
  Eigen::MatrixXd g = metric_at(c, p);
  auto G = christoffel(c, p);
  Eigen::VectorXd z = zeta.value_at(c, p);
  Eigen::MatrixXd J = zeta.jacobian_at(c, p);
  // Dz(i,k) = (D_i zeta)^k
  Eigen::MatrixXd Dz(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) Dz(i, k) = J(i, k) + G[k].row(i).dot(z);
  Eigen::MatrixXd L(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int k = 0; k < n; ++k) v += g(k, j) * Dz(i, k) + g(i, k) * Dz(j, k);
      L(i, j) = v;
    }
  return L;
}

ConformalEstimate conformal_factor_estimate(const Chart& c, const VectorField& zeta,
                                            const Point& p) {
  Eigen::MatrixXd g = metric_at(c, p);
  Eigen::MatrixXd ginv = inverse_metric_at(c, p);
  Eigen::MatrixXd L = lie_derivative_metric(c, zeta, p);
  ConformalEstimate est;
  est.rho = (ginv * L).trace() / c.dim();
  est.residual = (L - est.rho * g).cwiseAbs().maxCoeff();
  return est;
}

ClassificationReport killing_check(const Chart& c, const VectorField& zeta,
                                   const SamplePlan& plan) {
  ClassificationReport report;
  report.check = "killing_check";
  auto points = sample_points(c, plan);
  auto probes = probe_directions(c.dim(), plan.seed);
  bool killing = true;
  for (const auto& p : points) {
    Eigen::MatrixXd g = metric_at(c, p);
    SampleRow row;
    row.point = p;
    for (const auto& X : probes) {
      Eigen::VectorXd Dz = covariant_derivative_dir(c, X, zeta, p);
      double value = X.dot(g * Dz);
      double scale = 0.0;
      for (int k = 0; k < c.dim(); ++k)
        for (int j = 0; j < c.dim(); ++j) scale += std::abs(g(k, j) * Dz[k] * X[j]);
      double resid = std::abs(value);
      row.residual = std::max(row.residual, resid);
      if (resid > plan.tol + plan.tol * scale) killing = false;
    }
    report.add_row(std::move(row));
  }
  report.pass = killing;
  report.verdict = killing ? "killing" : "not_killing";
  return report;
}

CurveState geodesic_step(const Chart& c, const CurveState& s, double dt) {
  const int n = c.dim();
  Eigen::VectorXd x = s.position.coord_vector(c);
  Eigen::VectorXd v = s.velocity_vector(c);

  auto accel = [&](const Eigen::VectorXd& xs, const Eigen::VectorXd& vs) {
    auto G = christoffel(c, Point::from_vector(c, xs));
    Eigen::VectorXd a(n);
    for (int k = 0; k < n; ++k) a[k] = -vs.dot(G[k] * vs);
    return a;
  };

  Eigen::VectorXd k1x = v, k1v = accel(x, v);
  Eigen::VectorXd k2x = v + 0.5 * dt * k1v, k2v = accel(x + 0.5 * dt * k1x, k2x);
  Eigen::VectorXd k3x = v + 0.5 * dt * k2v, k3v = accel(x + 0.5 * dt * k2x, k3x);
  Eigen::VectorXd k4x = v + dt * k3v, k4v = accel(x + dt * k3x, k4x);

  Eigen::VectorXd xn = x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
  Eigen::VectorXd vn = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

  CurveState out;
  out.position = Point::from_vector(c, xn);
  for (int i = 0; i < n; ++i) out.velocity[c.coords()[i]] = vn[i];
  return out;
}

double speed_squared(const Chart& c, const CurveState& s) {
  Eigen::VectorXd v = s.velocity_vector(c);
  return v.dot(metric_at(c, s.position) * v);
}

}  // namespace geom
}  // namespace dwarp
