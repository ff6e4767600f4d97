#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "binoloc/geometry.hpp"

namespace binoloc {

/// Parses a map document. Two forms are accepted:
///   - plain text, one "x y" pair per line, '#' starts a comment;
///   - a JSON object with a "vertices" array of [x, y] pairs.
/// Throws std::invalid_argument with the offending line on malformed input.
PolygonMap parse_map(std::string_view text, std::string name = {});

/// Reads and parses a map file. Throws std::runtime_error if unreadable.
PolygonMap load_map(const std::string& path);

/// Names of the maps compiled into the library ("square", "map1", "map2").
std::vector<std::string> builtin_map_names();
bool is_builtin_map(std::string_view name);
PolygonMap builtin_map(std::string_view name);

/// A built-in name or a file path.
PolygonMap resolve_map(const std::string& name_or_path);

/// Plain-text form accepted by parse_map.
std::string format_map(const PolygonMap& map);

}  // namespace binoloc
