// dwarp - scenario files: declarative charts, products, space-times, vector
// fields and checks. See README for the format.

#ifndef DWARP_SCENARIO_HPP_
#define DWARP_SCENARIO_HPP_

#include <optional>

#include "dwarp/soliton.hpp"

namespace dwarp {

// Load/validation failure; message carries "<source>:<line>".
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

struct CheckSpec {
  std::string name;
  std::string kind;
  int line = 0;
  std::map<std::string, std::string> params;  // raw key -> value text
  std::string box;                            // box id (may be empty)
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::string expect;  // expected verdict (empty: unconstrained)
};

struct Scenario {
  std::string name;
  std::string source;
  Env constants;
  std::map<std::string, Chart> charts;
  std::map<std::string, DoublyWarpedProduct> products;
  std::map<std::string, DoublyWarpedSpacetime> spacetimes;
  std::map<std::string, VectorField> fields;           // on plain charts
  std::map<std::string, SplitVectorField> splitfields; // on products
  std::map<std::string, SpacetimeField> stfields;      // on spacetimes
  std::map<std::string, std::map<std::string, std::pair<double, double>>> boxes;
  std::vector<CheckSpec> checks;

  const Chart& chart(const std::string& id, int line) const;
  const DoublyWarpedProduct& product(const std::string& id, int line) const;
  const DoublyWarpedSpacetime& spacetime(const std::string& id, int line) const;
};

Scenario parse_scenario(const std::string& text, const std::string& source_name);
Scenario load_scenario(const std::string& path);

}  // namespace dwarp

#endif  // DWARP_SCENARIO_HPP_
