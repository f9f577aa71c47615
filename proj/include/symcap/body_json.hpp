#pragma once

#include <optional>

#include <json.hpp>

#include "symcap/bodies.hpp"

namespace symcap {

/// Builds a body from {"kind": ..., "dim": ..., parameters...}. Matrices are
/// row-major flat arrays ("matrix"); point lists are arrays of arrays.
/// `dim` fills in a missing "dim" field, which lets one description act as
/// a family over dimensions. Throws ConfigError naming the offending field.
ConvexBody body_from_json(const nlohmann::json& j, std::optional<int> dim = std::nullopt);

nlohmann::json body_to_json(const ConvexBody& body);

nlohmann::json matrix_to_json(const Mat& m);  // row-major flat
Mat matrix_from_json(const nlohmann::json& j, int rows, int cols, const std::string& field);

/// Display name of a body description: "kind" plus distinguishing parameters.
std::string family_name(const nlohmann::json& j);

}  // namespace symcap
