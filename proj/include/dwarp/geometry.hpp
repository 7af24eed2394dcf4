// dwarp - chart-level tensor calculus from raw metric components.
//
// Everything here is brute force: Christoffel symbols from the Levi-Civita
// formula, curvature from Christoffel derivatives, Lie derivatives from
// coordinate and covariant forms. No warped-product structure is assumed;
// these routines are the oracle the closed forms are certified against.
// Metrics only need to be nondegenerate, not positive definite.

#ifndef DWARP_GEOMETRY_HPP_
#define DWARP_GEOMETRY_HPP_

#include <Eigen/Dense>

#include "dwarp/chart.hpp"
#include "dwarp/report.hpp"

namespace dwarp {
namespace geom {

Eigen::MatrixXd metric_at(const Chart& c, const Point& p);
// Throws SingularMetricError when |det g| <= 1e-12.
Eigen::MatrixXd inverse_metric_at(const Chart& c, const Point& p);

// d[k](i,j) = d_k g_ij evaluated at p.
std::vector<Eigen::MatrixXd> metric_d1_at(const Chart& c, const Point& p);

// Gamma[k](i,j) = Gamma^k_ij (symmetric in i,j).
std::vector<Eigen::MatrixXd> christoffel(const Chart& c, const Point& p);

// Rank-4 curvature values R^l_ijk with the convention
//   R^l_ijk = d_j Gamma^l_ki - d_k Gamma^l_ji
//           + Gamma^l_jm Gamma^m_ki - Gamma^l_km Gamma^m_ji,
// under which the unit round sphere gives Ric = g.
class Riemann {
 public:
  Riemann(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}
  double& operator()(int l, int i, int j, int k) {
    return data_[((static_cast<std::size_t>(l) * n_ + i) * n_ + j) * n_ + k];
  }
  double operator()(int l, int i, int j, int k) const {
    return data_[((static_cast<std::size_t>(l) * n_ + i) * n_ + j) * n_ + k];
  }
  int dim() const { return n_; }

 private:
  int n_;
  std::vector<double> data_;
};

Riemann riemann(const Chart& c, const Point& p);

// Ric_ij = R^l_ilj (contraction over the first/third slots above).
Eigen::MatrixXd ricci(const Chart& c, const Point& p);

// grad^i = g^ij d_j phi ; H_ij = d_i d_j phi - Gamma^k_ij d_k phi ;
// laplacian = g^ij H_ij.
Eigen::VectorXd gradient(const Chart& c, const ScalarExpr& phi, const Point& p);
Eigen::MatrixXd hessian(const Chart& c, const ScalarExpr& phi, const Point& p);
double laplacian(const Chart& c, const ScalarExpr& phi, const Point& p);

// (D_X zeta)^k = X^i (d_i zeta^k + Gamma^k_ij zeta^j).
Eigen::VectorXd covariant_derivative(const Chart& c, const VectorField& X,
                                     const VectorField& zeta, const Point& p);
// Same with a constant-coefficient direction vector.
Eigen::VectorXd covariant_derivative_dir(const Chart& c, const Eigen::VectorXd& Xdir,
                                         const VectorField& zeta, const Point& p);

// [zeta, V]^k = zeta^i d_i V^k - V^i d_i zeta^k.
Eigen::VectorXd lie_bracket(const Chart& c, const VectorField& zeta,
                            const VectorField& V, const Point& p);

// Coordinate form: (L_zeta g)_ij = zeta^k d_k g_ij + g_kj d_i zeta^k + g_ik d_j zeta^k.
Eigen::MatrixXd lie_derivative_metric(const Chart& c, const VectorField& zeta, const Point& p);
// Covariant form: (L_zeta g)(e_i, e_j) = g(D_i zeta, e_j) + g(e_i, D_j zeta).
// Must agree with the coordinate form to 1e-9; property tests pin this.
Eigen::MatrixXd lie_derivative_metric_covariant(const Chart& c, const VectorField& zeta,
                                                const Point& p);

struct ConformalEstimate {
  double rho = 0.0;       // (1/n) tr(g^{-1} L_zeta g)
  double residual = 0.0;  // max-norm of L_zeta g - rho g
};

ConformalEstimate conformal_factor_estimate(const Chart& c, const VectorField& zeta,
                                            const Point& p);

// Verdict "killing" iff |g(D_X zeta, X)| stays below tol (absolute + relative
// against the magnitudes entering the contraction) for the coordinate frame
// plus 8 seeded probe directions at every sampled point.
ClassificationReport killing_check(const Chart& c, const VectorField& zeta,
                                   const SamplePlan& plan);

// One fixed-step RK4 step of x'' + Gamma(x', x') = 0.
CurveState geodesic_step(const Chart& c, const CurveState& s, double dt);

// g(v, v) at the state's position.
double speed_squared(const Chart& c, const CurveState& s);

}  // namespace geom
}  // namespace dwarp

#endif  // DWARP_GEOMETRY_HPP_
