// dwarp - doubly warped space-times: the Lorentzian product of a time
// interval I (metric -dt^2, scaled by f^2 with f a function on the spatial
// base M) and a Riemannian base (scaled by sigma(t)^2).

#ifndef DWARP_SPACETIME_HPP_
#define DWARP_SPACETIME_HPP_

#include "dwarp/warped.hpp"

namespace dwarp {

// _f I x_sigma M with metric -f^2 dt^2 (+) sigma^2 g. The Lorentzian sign
// lives only in the assembled metric block; the factor machinery is shared
// with the Riemannian products.
class DoublyWarpedSpacetime {
 public:
  DoublyWarpedSpacetime(std::string name, Chart base, ScalarExpr f, ScalarExpr sigma,
                        std::string t_coord = "t",
                        std::pair<double, double> t_interval = {-1.0, 1.0});

  const std::string& name() const { return product_.name(); }
  const Chart& base() const { return product_.m2(); }
  const ScalarExpr& f() const { return f_; }
  const ScalarExpr& sigma() const { return sigma_; }
  const std::string& t_coord() const { return t_coord_; }
  std::pair<double, double> t_interval() const { return t_interval_; }
  int base_dim() const { return product_.n2(); }

  // Underlying doubly warped product (m1 = the time line, f1 = sigma,
  // m2 = the base, f2 = f).
  const DoublyWarpedProduct& product() const { return product_; }
  const Chart& spacetime_chart() const { return product_.product_chart(); }

  // Structural flags, derived from the warping expressions.
  bool is_generalized_robertson_walker() const { return free_variables(f_).empty(); }
  bool is_standard_static() const { return free_variables(sigma_).empty(); }

  // Adds the t interval to a plan that lacks it.
  SamplePlan with_time_box(SamplePlan plan) const;

 private:
  ScalarExpr f_, sigma_;
  std::string t_coord_;
  std::pair<double, double> t_interval_;
  DoublyWarpedProduct product_;
};

// h(t) d_t plus a spatial field on the base.
struct SpacetimeField {
  ScalarExpr h;
  VectorField spatial;
};

namespace spacetime {

VectorField lift(const DoublyWarpedSpacetime& st, const SpacetimeField& zeta);

// Split Lie-derivative identity on the space-time:
//   (L zeta gbar)(X,Y) = -2 x y f^2 [h' + zeta(ln f)]
//                      + sigma^2 (L_zeta g)(X,Y) + 2 h sigma sigma' g(X,Y).
double lie_spacetime(const DoublyWarpedSpacetime& st, const SpacetimeField& zeta,
                     const SpacetimeField& X, const SpacetimeField& Y, const Point& p);

// h d_t is conformal iff h = a sigma for a constant a >= 0, with factor
// 2 h'. Fits a = h/sigma across samples; on failure reports the two
// incompatible factor demands 2h' and 2 h sigma'/sigma.
ClassificationReport timelike_conformal_check(const DoublyWarpedSpacetime& st,
                                              const ScalarExpr& h, const SamplePlan& plan);

// Killing decomposition: h' = -zeta(ln f) and zeta conformal on the base
// with factor -2 h sigma'/sigma, checked against the direct product-level
// Killing residual in both directions.
ClassificationReport killing_decomposition_check(const DoublyWarpedSpacetime& st,
                                                 const SpacetimeField& zeta,
                                                 const SamplePlan& plan);

// Conformal factor along a curve with unit tangent V = v d_t + V_M:
//   rho = 2 h' + [2 sigma^2 g([zeta,V],V)
//                 + 2 (h sigma sigma' - h' sigma^2) g(V,V)] / normalization.
// The tangent must satisfy gbar(V,V) = normalization to 1e-9.
double conformal_factor_along_curve_st(const DoublyWarpedSpacetime& st,
                                       const SpacetimeField& zeta, const SpacetimeField& V,
                                       const Point& p, double normalization = 1.0);

// Measures D_X zeta - X for frame plus seeded probes at each sample and
// evaluates the sufficient-condition checklist (h'-1, base concurrency,
// grad f, sigma') together with the h*sigma' projection diagnostics.
ClassificationReport concurrent_check_st(const DoublyWarpedSpacetime& st,
                                         const SpacetimeField& zeta, const SamplePlan& plan);

// One symbolic family of 2-D concurrent fields on -f^2 dt^2 (+) sigma^2 dx^2.
struct ConcurrentFamily2D {
  std::string case_name;     // constraint pair, e.g. "h=0, sigma'=0"
  std::string zeta_family;   // e.g. "(x+a) d_x"
  std::string sigma_family;  // e.g. "constant"
  std::string f_family;      // e.g. "r*(x+a)"
};

struct ConcurrentInstance2D {
  DoublyWarpedSpacetime st;
  SpacetimeField zeta;
};

// The three solution families of the 2-D concurrent system
//   h' f + k f' = f,  h f f' + k sigma sigma' = 0,  h sigma' + k' sigma = sigma.
std::vector<ConcurrentFamily2D> solve_concurrent_2d();

// Instantiates family index 0..2 with parameters (a, b, scale r, constant
// level c0) on coordinates (t_coord, x_coord).
ConcurrentInstance2D instantiate_concurrent_2d(int family, double a, double b, double r,
                                               double c0, const std::string& t_coord = "t",
                                               const std::string& x_coord = "x");

}  // namespace spacetime
}  // namespace dwarp

#endif  // DWARP_SPACETIME_HPP_
