// dwarp - coordinate charts, points, vector fields, sampling

#ifndef DWARP_CHART_HPP_
#define DWARP_CHART_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dwarp/expr.hpp"

namespace dwarp {

class ChartError : public std::runtime_error {
 public:
  explicit ChartError(const std::string& what) : std::runtime_error(what) {}
};

class SingularMetricError : public std::runtime_error {
 public:
  explicit SingularMetricError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an operation's stated precondition fails hard (e.g. a tangent
// vector that is not unit). Checks that can report instead of throwing do so.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// A coordinate patch: ordered coordinate names and a symmetric metric given
// by ScalarExpr components. Only the upper triangle is stored; first and
// second coordinate derivatives of every component are differentiated once at
// construction and cached. Charts are immutable.
class Chart {
 public:
  Chart() = default;
  // `metric_upper` lists g_ij for i <= j in row-major upper-triangle order.
  // `signature` is an optional per-diagonal sign hint (+1/-1), documentation
  // only; it never enters any computation.
  Chart(std::string name, std::vector<std::string> coords,
        std::vector<ScalarExpr> metric_upper, std::vector<int> signature = {});

  static Chart diagonal(std::string name, std::vector<std::string> coords,
                        std::vector<ScalarExpr> diag_entries);
  // 1-D chart with metric sign*dx^2.
  static Chart line(std::string name, const std::string& coord, double sign = 1.0);
  static Chart euclidean(std::string name, std::vector<std::string> coords);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  int coord_index(const std::string& coord) const;  // -1 if absent
  const std::vector<int>& signature() const { return signature_; }

  const ScalarExpr& metric(int i, int j) const;
  // d1_metric(k,i,j) = d g_ij / d coord_k ; d2_metric adds a second index.
  const ScalarExpr& d1_metric(int k, int i, int j) const;
  const ScalarExpr& d2_metric(int l, int k, int i, int j) const;

 private:
  int upper_index(int i, int j) const;

  std::string name_;
  std::vector<std::string> coords_;
  std::vector<int> signature_;
  struct Cache;
  std::shared_ptr<const Cache> cache_;
};

// A position on a chart; must supply a value for every chart coordinate.
struct Point {
  std::string chart;
  Env values;

  double at(const std::string& coord) const;
  Eigen::VectorXd coord_vector(const Chart& c) const;
  static Point from_vector(const Chart& c, const Eigen::VectorXd& x);
};

// Component expressions keyed by coordinate name; absent components are zero.
struct VectorField {
  std::string chart;
  std::map<std::string, ScalarExpr> components;

  ScalarExpr component(const std::string& coord) const;
  Eigen::VectorXd value_at(const Chart& c, const Point& p) const;
  // J(i,k) = d zeta^k / d coord_i.
  Eigen::MatrixXd jacobian_at(const Chart& c, const Point& p) const;
};

// Position and velocity of a curve at one parameter value.
struct CurveState {
  Point position;
  Env velocity;

  Eigen::VectorXd velocity_vector(const Chart& c) const;
};

// Deterministic sampling recipe: an axis-aligned box, sample count, RNG seed
// and residual tolerance.
struct SamplePlan {
  std::map<std::string, std::pair<double, double>> box;
  int count = 20;
  std::uint64_t seed = 0x5eedULL;
  double tol = 1e-8;
};

// Counter-free 64-bit generator (splitmix64); identical streams on every
// platform, which keeps reports byte-reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)

 private:
  std::uint64_t state_;
};

// Draws `plan.count` points from the box. Points where |det g| <= 1e-12 or
// where any guard expression is <= 1e-9 are rejected and redrawn, at most 100
// times each before a ChartError.
std::vector<Point> sample_points(const Chart& c, const SamplePlan& plan,
                                 const std::vector<ScalarExpr>& positivity_guards = {});

// Unit-coordinate-norm probe directions: the frame vectors followed by
// `extra` seeded random directions.
std::vector<Eigen::VectorXd> probe_directions(int dim, std::uint64_t seed, int extra = 8);

}  // namespace dwarp

#endif  // DWARP_CHART_HPP_
