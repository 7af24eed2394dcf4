// dwarp - scenario file parsing and validation

#include "dwarp/scenario.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace dwarp {

namespace {

struct RawEntry {
  std::vector<std::string> key;
  std::string value;
  int line = 0;
};

struct RawBlock {
  std::vector<std::string> header;
  std::vector<RawEntry> entries;
  int line = 0;
};

[[noreturn]] void fail(const std::string& source, int line, const std::string& msg) {
  throw ScenarioError(source + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

std::string strip_comment(const std::string& line) {
  auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& source, int line, const std::string& text) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size())
    fail(source, line, "expected a number, got '" + text + "'");
  return v;
}

// One scenario file: top-level statements plus flat blocks of `key = value`
// entries. No block kind needs nesting.
struct RawScenario {
  std::string name;
  std::vector<RawEntry> top;
  std::vector<RawBlock> blocks;
};

// Splits one physical line into segments at '{' and '}' so that block
// braces may share a line with their header or entries.
std::vector<std::string> split_segments(const std::string& body) {
  std::vector<std::string> segments;
  std::string current;
  for (char c : body) {
    if (c == '{') {
      segments.push_back(trim(current) + " {");
      current.clear();
    } else if (c == '}') {
      if (!trim(current).empty()) segments.push_back(trim(current));
      segments.push_back("}");
      current.clear();
    } else {
      current += c;
    }
  }
  if (!trim(current).empty()) segments.push_back(trim(current));
  return segments;
}

RawScenario tokenize(const std::string& text, const std::string& source) {
  RawScenario raw;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool in_block = false;
  while (std::getline(is, line)) {
    ++lineno;
    std::string stripped = trim(strip_comment(line));
    if (stripped.empty()) continue;
    for (const std::string& body : split_segments(stripped)) {
      if (body == "}") {
        if (!in_block) fail(source, lineno, "unmatched '}'");
        in_block = false;
        continue;
      }
      if (body.back() == '{') {
        if (in_block) fail(source, lineno, "nested blocks are not supported");
        RawBlock block;
        block.header = split_words(trim(body.substr(0, body.size() - 1)));
        if (block.header.empty()) fail(source, lineno, "block needs a kind");
        block.line = lineno;
        raw.blocks.push_back(std::move(block));
        in_block = true;
        continue;
      }
      auto eq = body.find('=');
      if (eq == std::string::npos) {
        auto words = split_words(body);
        if (!in_block && words.size() == 2 && words[0] == "scenario") {
          raw.name = words[1];
          continue;
        }
        fail(source, lineno, "expected 'key = value' or a block");
      }
      RawEntry entry;
      entry.key = split_words(trim(body.substr(0, eq)));
      entry.value = trim(body.substr(eq + 1));
      entry.line = lineno;
      if (entry.key.empty()) fail(source, lineno, "missing key before '='");
      if (in_block) raw.blocks.back().entries.push_back(std::move(entry));
      else raw.top.push_back(std::move(entry));
    }
  }
  if (in_block) fail(source, raw.blocks.back().line, "unterminated block");
  return raw;
}

class Builder {
 public:
  Builder(const RawScenario& raw, std::string source) : raw_(raw), source_(std::move(source)) {}

  Scenario build() {
    scenario_.name = raw_.name.empty() ? "scenario" : raw_.name;
    scenario_.source = source_;
    for (const auto& entry : raw_.top) add_top(entry);
    for (const auto& b : raw_.blocks)
      if (b.header[0] == "const" || b.header[0] == "constants") add_constants(b);
    for (const auto& b : raw_.blocks)
      if (b.header[0] == "chart") add_chart(b);
    for (const auto& b : raw_.blocks)
      if (b.header[0] == "product") add_product(b);
    for (const auto& b : raw_.blocks)
      if (b.header[0] == "spacetime") add_spacetime(b);
    for (const auto& b : raw_.blocks)
      if (b.header[0] == "field") add_field(b);
    for (const auto& b : raw_.blocks)
      if (b.header[0] == "splitfield") add_splitfield(b);
    for (const auto& b : raw_.blocks)
      if (b.header[0] == "stfield") add_stfield(b);
    for (const auto& b : raw_.blocks)
      if (b.header[0] == "box") add_box(b);
    for (const auto& b : raw_.blocks)
      if (b.header[0] == "check") add_check(b);
    static const std::set<std::string> kinds = {"const",      "constants", "chart",
                                                "product",    "spacetime", "field",
                                                "splitfield", "stfield",   "box",
                                                "check"};
    for (const auto& b : raw_.blocks)
      if (!kinds.count(b.header[0]))
        fail(source_, b.line, "unknown block kind '" + b.header[0] + "'");
    return std::move(scenario_);
  }

 private:
  ScalarExpr expr(const std::string& text, int line) const {
    try {
      return substitute(parse(text), scenario_.constants);
    } catch (const ParseError& err) {
      fail(source_, line, std::string("bad expression '") + text + "': " + err.what());
    }
  }

  void add_top(const RawEntry& entry) {
    if (entry.key.size() == 2 && entry.key[0] == "const") {
      scenario_.constants[entry.key[1]] = parse_number(source_, entry.line, entry.value);
      return;
    }
    fail(source_, entry.line, "unexpected top-level entry");
  }

  void add_constants(const RawBlock& b) {
    for (const auto& e : b.entries) {
      if (e.key.size() != 1) fail(source_, e.line, "constant entries are 'name = number'");
      scenario_.constants[e.key[0]] = parse_number(source_, e.line, e.value);
    }
  }

  void add_chart(const RawBlock& b) {
    if (b.header.size() != 2) fail(source_, b.line, "usage: chart <name> { ... }");
    const std::string& id = b.header[1];
    std::vector<std::string> coords;
    std::map<std::pair<int, int>, ScalarExpr> entries;
    std::vector<int> signature;
    for (const auto& e : b.entries) {
      if (e.key.size() == 1 && e.key[0] == "coords") {
        coords = split_words(e.value);
      } else if (e.key.size() == 1 && e.key[0] == "signature") {
        for (const auto& w : split_words(e.value))
          signature.push_back(static_cast<int>(parse_number(source_, e.line, w)));
      } else if (e.key.size() == 3 && e.key[0] == "g") {
        if (coords.empty()) fail(source_, e.line, "declare coords before metric entries");
        int i = index_of(coords, e.key[1], e.line);
        int j = index_of(coords, e.key[2], e.line);
        if (i > j) std::swap(i, j);
        entries[{i, j}] = expr(e.value, e.line);
      } else {
        fail(source_, e.line, "unknown chart entry");
      }
    }
    if (coords.empty()) fail(source_, b.line, "chart '" + id + "' declares no coords");
    const int n = static_cast<int>(coords.size());
    std::vector<ScalarExpr> upper;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        auto it = entries.find({i, j});
        upper.push_back(it == entries.end() ? ScalarExpr::constant(0.0) : it->second);
      }
    try {
      scenario_.charts.insert_or_assign(id, Chart(id, coords, std::move(upper), signature));
    } catch (const ChartError& err) {
      fail(source_, b.line, err.what());
    }
    const Chart& chart = scenario_.charts.at(id);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        for (const auto& v : free_variables(chart.metric(i, j)))
          if (chart.coord_index(v) < 0)
            fail(source_, b.line, "metric of '" + id + "' references unknown symbol '" + v +
                                      "' (declare it as a const?)");
  }

  void add_product(const RawBlock& b) {
    if (b.header.size() != 2) fail(source_, b.line, "usage: product <name> { ... }");
    const std::string& id = b.header[1];
    std::string m1, m2;
    std::optional<ScalarExpr> f1, f2;
    for (const auto& e : b.entries) {
      const std::string key = join_key(e.key);
      if (key == "m1") m1 = e.value;
      else if (key == "m2") m2 = e.value;
      else if (key == "f1") f1 = expr(e.value, e.line);
      else if (key == "f2") f2 = expr(e.value, e.line);
      else fail(source_, e.line, "unknown product entry '" + key + "'");
    }
    if (m1.empty() || m2.empty() || !f1 || !f2)
      fail(source_, b.line, "product '" + id + "' needs m1, m2, f1, f2");
    try {
      scenario_.products.emplace(
          id, DoublyWarpedProduct(id, scenario_.chart(m1, b.line), scenario_.chart(m2, b.line),
                                  *f1, *f2));
    } catch (const ChartError& err) {
      fail(source_, b.line, err.what());
    }
  }

  void add_spacetime(const RawBlock& b) {
    if (b.header.size() != 2) fail(source_, b.line, "usage: spacetime <name> { ... }");
    const std::string& id = b.header[1];
    std::string base, t_coord = "t";
    std::optional<ScalarExpr> f, sigma;
    std::pair<double, double> t_range{-1.0, 1.0};
    for (const auto& e : b.entries) {
      const std::string key = join_key(e.key);
      if (key == "base") base = e.value;
      else if (key == "f") f = expr(e.value, e.line);
      else if (key == "sigma") sigma = expr(e.value, e.line);
      else if (key == "t") t_coord = e.value;
      else if (key == "t_range") {
        auto words = split_words(e.value);
        if (words.size() != 2) fail(source_, e.line, "t_range = <lo> <hi>");
        t_range = {parse_number(source_, e.line, words[0]),
                   parse_number(source_, e.line, words[1])};
      } else {
        fail(source_, e.line, "unknown spacetime entry '" + key + "'");
      }
    }
    if (base.empty() || !f || !sigma)
      fail(source_, b.line, "spacetime '" + id + "' needs base, f, sigma");
    try {
      scenario_.spacetimes.emplace(
          id, DoublyWarpedSpacetime(id, scenario_.chart(base, b.line), *f, *sigma, t_coord,
                                    t_range));
    } catch (const ChartError& err) {
      fail(source_, b.line, err.what());
    }
    const auto& st = scenario_.spacetimes.at(id);
    for (const auto& v : free_variables(st.f()))
      if (st.base().coord_index(v) < 0)
        fail(source_, b.line, "f of '" + id + "' references unknown symbol '" + v + "'");
    for (const auto& v : free_variables(st.sigma()))
      if (v != t_coord)
        fail(source_, b.line, "sigma of '" + id + "' must depend on '" + t_coord + "' only");
  }

  void add_field(const RawBlock& b) {
    if (b.header.size() != 4 || b.header[2] != "on")
      fail(source_, b.line, "usage: field <name> on <chart> { coord = expr ... }");
    const std::string& id = b.header[1];
    const Chart& chart = scenario_.chart(b.header[3], b.line);
    VectorField field;
    field.chart = chart.name();
    for (const auto& e : b.entries) {
      if (e.key.size() != 1) fail(source_, e.line, "field entries are '<coord> = <expr>'");
      if (chart.coord_index(e.key[0]) < 0)
        fail(source_, e.line,
             "'" + e.key[0] + "' is not a coordinate of chart '" + chart.name() + "'");
      field.components[e.key[0]] = expr(e.value, e.line);
    }
    for (const auto& [coord, comp] : field.components)
      for (const auto& v : free_variables(comp))
        if (chart.coord_index(v) < 0)
          fail(source_, b.line, "component '" + coord + "' of field '" + id +
                                    "' references unknown symbol '" + v + "'");
    scenario_.fields.insert_or_assign(id, std::move(field));
  }

  void add_splitfield(const RawBlock& b) {
    if (b.header.size() != 4 || b.header[2] != "on")
      fail(source_, b.line, "usage: splitfield <name> on <product> { part1 = <field> ... }");
    const std::string& id = b.header[1];
    const DoublyWarpedProduct& w = scenario_.product(b.header[3], b.line);
    SplitVectorField sf;
    sf.part1.chart = w.m1().name();
    sf.part2.chart = w.m2().name();
    for (const auto& e : b.entries) {
      const std::string key = join_key(e.key);
      if (key != "part1" && key != "part2")
        fail(source_, e.line, "splitfield entries are part1/part2 = <field id>");
      const VectorField& src = field_ref(e.value, e.line);
      const Chart& expected = key == "part1" ? w.m1() : w.m2();
      if (src.chart != expected.name())
        fail(source_, e.line, "field '" + e.value + "' lives on chart '" + src.chart +
                                  "', expected '" + expected.name() + "'");
      (key == "part1" ? sf.part1 : sf.part2) = src;
    }
    scenario_.splitfields.insert_or_assign(id, std::move(sf));
  }

  void add_stfield(const RawBlock& b) {
    if (b.header.size() != 4 || b.header[2] != "on")
      fail(source_, b.line, "usage: stfield <name> on <spacetime> { h = <expr> ... }");
    const std::string& id = b.header[1];
    const DoublyWarpedSpacetime& st = scenario_.spacetime(b.header[3], b.line);
    SpacetimeField field;
    field.h = ScalarExpr::constant(0.0);
    field.spatial.chart = st.base().name();
    for (const auto& e : b.entries) {
      const std::string key = join_key(e.key);
      if (key == "h") {
        field.h = expr(e.value, e.line);
        for (const auto& v : free_variables(field.h))
          if (v != st.t_coord())
            fail(source_, e.line, "h must depend on '" + st.t_coord() + "' only");
      } else if (key == "spatial") {
        const VectorField& src = field_ref(e.value, e.line);
        if (src.chart != st.base().name())
          fail(source_, e.line, "spatial field '" + e.value + "' is not on base chart '" +
                                    st.base().name() + "'");
        field.spatial = src;
      } else {
        fail(source_, e.line, "unknown stfield entry '" + key + "'");
      }
    }
    scenario_.stfields.insert_or_assign(id, std::move(field));
  }

  void add_box(const RawBlock& b) {
    if (b.header.size() != 2) fail(source_, b.line, "usage: box <name> { coord = lo hi ... }");
    std::map<std::string, std::pair<double, double>> box;
    for (const auto& e : b.entries) {
      if (e.key.size() != 1) fail(source_, e.line, "box entries are '<coord> = <lo> <hi>'");
      auto words = split_words(e.value);
      if (words.size() != 2) fail(source_, e.line, "box entries are '<coord> = <lo> <hi>'");
      double lo = parse_number(source_, e.line, words[0]);
      double hi = parse_number(source_, e.line, words[1]);
      if (!(lo < hi)) fail(source_, e.line, "empty interval for '" + e.key[0] + "'");
      box[e.key[0]] = {lo, hi};
    }
    scenario_.boxes.insert_or_assign(b.header[1], std::move(box));
  }

  void add_check(const RawBlock& b) {
    if (b.header.size() < 2 || b.header.size() > 3)
      fail(source_, b.line, "usage: check <kind> [<name>] { ... }");
    CheckSpec spec;
    spec.kind = b.header[1];
    spec.name = b.header.size() == 3 ? b.header[2]
                                     : spec.kind + "_" + std::to_string(++anon_checks_);
    spec.line = b.line;
    for (const auto& e : b.entries) {
      const std::string key = join_key(e.key);
      if (key == "box") {
        if (!scenario_.boxes.count(e.value))
          fail(source_, e.line, "unknown box '" + e.value + "'");
        spec.box = e.value;
      } else if (key == "samples") {
        spec.samples = static_cast<int>(parse_number(source_, e.line, e.value));
      } else if (key == "seed") {
        spec.seed = static_cast<std::uint64_t>(parse_number(source_, e.line, e.value));
      } else if (key == "tol") {
        spec.tol = parse_number(source_, e.line, e.value);
      } else if (key == "expect") {
        spec.expect = e.value;
      } else {
        spec.params[key] = e.value;
      }
    }
    scenario_.checks.push_back(std::move(spec));
  }

  static std::string join_key(const std::vector<std::string>& words) {
    std::string out;
    for (const auto& w : words) {
      if (!out.empty()) out += ' ';
      out += w;
    }
    return out;
  }

  int index_of(const std::vector<std::string>& coords, const std::string& c, int line) const {
    for (std::size_t i = 0; i < coords.size(); ++i)
      if (coords[i] == c) return static_cast<int>(i);
    fail(source_, line, "'" + c + "' is not a declared coordinate");
  }

  const VectorField& field_ref(const std::string& id, int line) const {
    auto it = scenario_.fields.find(id);
    if (it == scenario_.fields.end()) fail(source_, line, "unknown field '" + id + "'");
    return it->second;
  }

  const RawScenario& raw_;
  std::string source_;
  Scenario scenario_;
  int anon_checks_ = 0;
};

}  // namespace

const Chart& Scenario::chart(const std::string& id, int line) const {
  auto it = charts.find(id);
  if (it == charts.end()) fail(source, line, "unknown chart '" + id + "'");
  return it->second;
}

const DoublyWarpedProduct& Scenario::product(const std::string& id, int line) const {
  auto it = products.find(id);
  if (it == products.end()) fail(source, line, "unknown product '" + id + "'");
  return it->second;
}

const DoublyWarpedSpacetime& Scenario::spacetime(const std::string& id, int line) const {
  auto it = spacetimes.find(id);
  if (it == spacetimes.end()) fail(source, line, "unknown spacetime '" + id + "'");
  return it->second;
}

Scenario parse_scenario(const std::string& text, const std::string& source_name) {
  RawScenario raw = tokenize(text, source_name);
  return Builder(raw, source_name).build();
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

}  // namespace dwarp
