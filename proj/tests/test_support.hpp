// dwarp - shared chart fixtures and helpers for the test suites

#ifndef DWARP_TESTS_TEST_SUPPORT_HPP_
#define DWARP_TESTS_TEST_SUPPORT_HPP_

#include <cmath>

#include "dwarp/soliton.hpp"

namespace dwarp_tests {

using namespace dwarp;

inline Chart flat1(const std::string& coord = "x") {
  return Chart::euclidean("flat1_" + coord, {coord});
}

inline Chart flat2(const std::string& a = "x", const std::string& b = "y") {
  return Chart::euclidean("flat2_" + a + b, {a, b});
}

// Round sphere patch: d theta^2 + sin(theta)^2 d phi^2.
inline Chart sphere_chart() {
  return Chart("sphere", {"th", "ph"},
               {ScalarExpr::constant(1.0), ScalarExpr::constant(0.0), parse("sin(th)^2")});
}

// Hyperbolic plane as dt^2 + e^{2t} dx^2.
inline Chart hyperbolic_chart() {
  return Chart("hyperbolic", {"t", "x"},
               {ScalarExpr::constant(1.0), ScalarExpr::constant(0.0), parse("exp(2*t)")});
}

inline SamplePlan make_plan(std::map<std::string, std::pair<double, double>> box, int count = 20,
                            std::uint64_t seed = 42, double tol = 1e-8) {
  SamplePlan plan;
  plan.box = std::move(box);
  plan.count = count;
  plan.seed = seed;
  plan.tol = tol;
  return plan;
}

inline VectorField make_field(const Chart& c,
                              std::map<std::string, std::string> comps) {
  VectorField f;
  f.chart = c.name();
  for (auto& [coord, text] : comps) f.components[coord] = parse(text);
  return f;
}

// Constant-coefficient field with exact double components.
inline VectorField const_field(const Chart& c, std::map<std::string, double> comps) {
  VectorField f;
  f.chart = c.name();
  for (auto& [coord, value] : comps) f.components[coord] = ScalarExpr::constant(value);
  return f;
}

inline Point make_point(const Chart& c, Env values) {
  Point p;
  p.chart = c.name();
  p.values = std::move(values);
  return p;
}

// The five warped-product fixtures the equivalence criteria run on.
struct WarpedFixtures {
  // Direct product of flat lines.
  static DoublyWarpedProduct direct() {
    return DoublyWarpedProduct("direct", flat1("u"), flat1("v"), ScalarExpr::constant(1.0),
                               ScalarExpr::constant(1.0));
  }
  // I x_{e^t} R: assembles to dt^2 + e^{2t} dx^2.
  static DoublyWarpedProduct hyperbolic() {
    return DoublyWarpedProduct("hyperbolic_prod", flat1("t"), flat1("x"), parse("exp(t)"),
                               ScalarExpr::constant(1.0));
  }
  // (0,pi) x_{sin th} S^1: the round sphere.
  static DoublyWarpedProduct sphere() {
    return DoublyWarpedProduct("sphere_prod", flat1("th"), flat1("ph"), parse("sin(th)"),
                               ScalarExpr::constant(1.0));
  }
  // Genuinely doubly warped, both factors 1-D.
  static DoublyWarpedProduct doubly() {
    return DoublyWarpedProduct("doubly", flat1("u"), flat1("v"), parse("exp(u)"),
                               parse("1 + v^2"));
  }
  // 1+2 dimensional case with a nonzero mixed Ricci block.
  static DoublyWarpedProduct onetwo() {
    return DoublyWarpedProduct("onetwo", flat1("w"), flat2("p", "q"), parse("exp(w)"),
                               parse("1 + p^2"));
  }

  static std::vector<DoublyWarpedProduct> all() {
    return {direct(), hyperbolic(), sphere(), doubly(), onetwo()};
  }

  // Boxes that keep warpings positive and the sphere away from its poles.
  static SamplePlan plan_for(const DoublyWarpedProduct& w, int count = 20,
                             std::uint64_t seed = 42, double tol = 1e-8) {
    std::map<std::string, std::pair<double, double>> box;
    for (const auto& coord : w.product_chart().coords()) {
      if (coord == "th") box[coord] = {0.4, 2.7};
      else box[coord] = {-0.9, 0.9};
    }
    return make_plan(std::move(box), count, seed, tol);
  }
};

}  // namespace dwarp_tests

#endif  // DWARP_TESTS_TEST_SUPPORT_HPP_
