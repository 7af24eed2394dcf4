// dwarp - coordinate charts, points, vector fields, sampling

#include "dwarp/chart.hpp"

#include <algorithm>
#include <cmath>

namespace dwarp {

struct Chart::Cache {
  std::vector<ScalarExpr> metric;  // upper triangle
  std::vector<ScalarExpr> d1;      // [k][upper(i,j)]
  std::vector<ScalarExpr> d2;      // [l][k][upper(i,j)]
};

Chart::Chart(std::string name, std::vector<std::string> coords,
             std::vector<ScalarExpr> metric_upper, std::vector<int> signature)
    : name_(std::move(name)), coords_(std::move(coords)), signature_(std::move(signature)) {
  const int n = dim();
  const std::size_t upper = static_cast<std::size_t>(n) * (n + 1) / 2;
  if (metric_upper.size() != upper)
    throw ChartError("chart '" + name_ + "': expected " + std::to_string(upper) +
                     " upper-triangle metric entries, got " + std::to_string(metric_upper.size()));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coords_[i] == coords_[j])
        throw ChartError("chart '" + name_ + "': duplicate coordinate '" + coords_[i] + "'");

  auto cache = std::make_shared<Cache>();
  cache->metric = std::move(metric_upper);
  cache->d1.resize(static_cast<std::size_t>(n) * upper);
  cache->d2.resize(static_cast<std::size_t>(n) * n * upper);
  for (int k = 0; k < n; ++k)
    for (std::size_t m = 0; m < upper; ++m)
      cache->d1[k * upper + m] = diff(cache->metric[m], coords_[k]);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (std::size_t m = 0; m < upper; ++m)
        cache->d2[(l * n + k) * upper + m] = diff(cache->d1[k * upper + m], coords_[l]);
  cache_ = std::move(cache);
}

Chart Chart::diagonal(std::string name, std::vector<std::string> coords,
                      std::vector<ScalarExpr> diag_entries) {
  const int n = static_cast<int>(coords.size());
  if (diag_entries.size() != coords.size())
    throw ChartError("diagonal chart: coordinate/entry count mismatch");
  std::vector<ScalarExpr> upper;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      upper.push_back(i == j ? diag_entries[i] : ScalarExpr::constant(0.0));
  return Chart(std::move(name), std::move(coords), std::move(upper));
}

Chart Chart::line(std::string name, const std::string& coord, double sign) {
  return diagonal(std::move(name), {coord}, {ScalarExpr::constant(sign)});
}

Chart Chart::euclidean(std::string name, std::vector<std::string> coords) {
  std::vector<ScalarExpr> ones(coords.size(), ScalarExpr::constant(1.0));
  return diagonal(std::move(name), std::move(coords), std::move(ones));
}

int Chart::coord_index(const std::string& coord) const {
  auto it = std::find(coords_.begin(), coords_.end(), coord);
  return it == coords_.end() ? -1 : static_cast<int>(it - coords_.begin());
}

int Chart::upper_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // row-major upper triangle: row i starts at i*n - i(i-1)/2.
  return i * dim() - i * (i - 1) / 2 + (j - i);
}

const ScalarExpr& Chart::metric(int i, int j) const {
  return cache_->metric[upper_index(i, j)];
}

const ScalarExpr& Chart::d1_metric(int k, int i, int j) const {
  const std::size_t upper = cache_->metric.size();
  return cache_->d1[k * upper + upper_index(i, j)];
}

const ScalarExpr& Chart::d2_metric(int l, int k, int i, int j) const {
  const std::size_t upper = cache_->metric.size();
  return cache_->d2[(l * dim() + k) * upper + upper_index(i, j)];
}

double Point::at(const std::string& coord) const {
  auto it = values.find(coord);
  if (it == values.end())
    throw ChartError("point on '" + chart + "' lacks coordinate '" + coord + "'");
  return it->second;
}

Eigen::VectorXd Point::coord_vector(const Chart& c) const {
  Eigen::VectorXd x(c.dim());
  for (int i = 0; i < c.dim(); ++i) x[i] = at(c.coords()[i]);
  return x;
}

Point Point::from_vector(const Chart& c, const Eigen::VectorXd& x) {
  Point p;
  p.chart = c.name();
  for (int i = 0; i < c.dim(); ++i) p.values[c.coords()[i]] = x[i];
  return p;
}

ScalarExpr VectorField::component(const std::string& coord) const {
  auto it = components.find(coord);
  return it == components.end() ? ScalarExpr::constant(0.0) : it->second;
}

Eigen::VectorXd VectorField::value_at(const Chart& c, const Point& p) const {
  Eigen::VectorXd v(c.dim());
  for (int i = 0; i < c.dim(); ++i) v[i] = eval(component(c.coords()[i]), p.values);
  return v;
}

Eigen::MatrixXd VectorField::jacobian_at(const Chart& c, const Point& p) const {
  const int n = c.dim();
  Eigen::MatrixXd J(n, n);
  for (int k = 0; k < n; ++k) {
    ScalarExpr comp = component(c.coords()[k]);
    for (int i = 0; i < n; ++i) J(i, k) = eval(diff(comp, c.coords()[i]), p.values);
  }
  return J;
}

Eigen::VectorXd CurveState::velocity_vector(const Chart& c) const {
  Eigen::VectorXd v(c.dim());
  for (int i = 0; i < c.dim(); ++i) {
    auto it = velocity.find(c.coords()[i]);
    v[i] = it == velocity.end() ? 0.0 : it->second;
  }
  return v;
}

std::uint64_t SplitMix64::next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::vector<Point> sample_points(const Chart& c, const SamplePlan& plan,
                                 const std::vector<ScalarExpr>& positivity_guards) {
  if (plan.count < 1) throw ChartError("sample plan needs count >= 1");
  if (!(plan.tol > 0.0)) throw ChartError("sample plan needs tol > 0");
  SplitMix64 rng(plan.seed);
  std::vector<Point> points;
  points.reserve(plan.count);
  for (int s = 0; s < plan.count; ++s) {
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      Point p;
      p.chart = c.name();
      for (const auto& coord : c.coords()) {
        auto it = plan.box.find(coord);
        if (it == plan.box.end())
          throw ChartError("sample plan lacks a box interval for coordinate '" + coord + "'");
        p.values[coord] = rng.uniform(it->second.first, it->second.second);
      }
      Eigen::MatrixXd g(c.dim(), c.dim());
      for (int i = 0; i < c.dim(); ++i)
        for (int j = i; j < c.dim(); ++j) g(i, j) = g(j, i) = eval(c.metric(i, j), p.values);
      if (std::abs(g.determinant()) <= 1e-12) continue;
      bool guard_ok = true;
      for (const auto& guard : positivity_guards)
        if (eval(guard, p.values) <= 1e-9) { guard_ok = false; break; }
      if (!guard_ok) continue;
      points.push_back(std::move(p));
      ok = true;
    }
    if (!ok)
      throw ChartError("sampling on chart '" + c.name() +
                       "' exhausted 100 redraws (degenerate metric or guard region)");
  }
  return points;
}

std::vector<Eigen::VectorXd> probe_directions(int dim, std::uint64_t seed, int extra) {
  std::vector<Eigen::VectorXd> probes;
  for (int i = 0; i < dim; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e[i] = 1.0;
    probes.push_back(e);
  }
  SplitMix64 rng(seed ^ 0xabcdef12345ULL);
  for (int k = 0; k < extra; ++k) {
    Eigen::VectorXd v(dim);
    double norm2 = 0.0;
    do {
      for (int i = 0; i < dim; ++i) v[i] = 2.0 * rng.uniform() - 1.0;
      norm2 = v.squaredNorm();
    } while (norm2 < 1e-4);
    probes.push_back(v / std::sqrt(norm2));
  }
  return probes;
}

}  // namespace dwarp
