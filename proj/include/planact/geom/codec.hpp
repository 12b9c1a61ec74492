#pragma once

#include <json.hpp>

#include "planact/geom/geometry.hpp"

namespace planact::geom {

/// {"type": "conf", "x": .., "y": .., "theta": ..} and friends.
nlohmann::ordered_json to_json(const GeomValue& v);
/// Throws SchemaError on unknown or malformed values.
GeomValue geom_from_json(const nlohmann::json& j);

}  // namespace planact::geom
