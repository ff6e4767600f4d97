#include "binoloc/map_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace binoloc {

namespace {

struct BuiltinMap {
  std::string_view name;
  std::vector<Vec2> vertices;
};

// Replicas of the two evaluation fields: irregular polygons with circumferences
// of 40 m and 53.23 m. The unit square is a test fixture.
const std::vector<BuiltinMap>& builtins()
{
  static const std::vector<BuiltinMap> maps{
      {"square", {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}},
      {"map1", {{0.0, 0.0}, {4.6344, -0.5793}, {8.1102, 0.5793}, {10.4274, 3.4758}, {9.2688, 6.3723},
                {11.0067, 9.2688}, {7.5309, 11.0067}, {4.6344, 8.6895}, {1.7379, 9.8481}, {-0.5793, 5.793},
                {0.5793, 2.8965}}},
      {"map2", {{0.0, 0.0}, {5.5831, -1.0272}, {10.0587, -0.2642}, {13.3092, 2.0726}, {13.8599, 4.7997},
                {11.2765, 6.3524}, {13.2206, 11.3606}, {9.3463, 13.7549}, {6.3746, 11.2178}, {2.9342, 13.2717},
                {0.9805, 11.1191}, {1.9169, 6.8352}, {-0.087, 5.8443}}},
  };
  return maps;
}

PolygonMap parse_json(std::string_view text, std::string name)
{
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("map document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc["vertices"].is_array())
    throw std::invalid_argument("map document needs a \"vertices\" array");
  std::vector<Vec2> pts;
  for (const auto& v : doc["vertices"]) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw std::invalid_argument("map vertex must be an [x, y] pair of numbers");
    pts.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  if (name.empty() && doc.contains("name") && doc["name"].is_string()) name = doc["name"].get<std::string>();
  return PolygonMap(std::move(pts), std::move(name));
}

}  // namespace

PolygonMap parse_map(std::string_view text, std::string name)
{
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') return parse_json(text, std::move(name));

  std::vector<Vec2> pts;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    Vec2 p;
    std::string extra;
    if (!(fields >> p.x >> p.y) || (fields >> extra))
      throw std::invalid_argument("map line " + std::to_string(line_no) + ": expected \"x y\", got \"" + line + "\"");
    pts.push_back(p);
  }
  return PolygonMap(std::move(pts), std::move(name));
}

PolygonMap load_map(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read map file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  auto stem = path.substr(path.find_last_of('/') + 1);
  stem = stem.substr(0, stem.find('.'));
  return parse_map(buf.str(), stem);
}

std::vector<std::string> builtin_map_names()
{
  std::vector<std::string> out;
  for (const auto& m : builtins()) out.emplace_back(m.name);
  return out;
}

bool is_builtin_map(std::string_view name)
{
  const auto& maps = builtins();
  return std::any_of(maps.begin(), maps.end(), [&](const BuiltinMap& m) { return m.name == name; });
}

PolygonMap builtin_map(std::string_view name)
{
  for (const auto& m : builtins())
    if (m.name == name) return PolygonMap(m.vertices, std::string(name));
  throw std::invalid_argument("unknown built-in map: " + std::string(name));
}

PolygonMap resolve_map(const std::string& name_or_path)
{
  if (is_builtin_map(name_or_path)) return builtin_map(name_or_path);
  return load_map(name_or_path);
}

std::string format_map(const PolygonMap& map)
{
  std::string out = "# " + (map.name().empty() ? std::string("map") : map.name()) + ", circumference " +
                    std::to_string(map.circumference()) + " m\n";
  char buf[64];
  for (const Vec2& v : map.vertices()) {
    std::snprintf(buf, sizeof buf, "%.10g %.10g\n", v.x, v.y);
    out += buf;
  }
  return out;
}

}  // namespace binoloc
