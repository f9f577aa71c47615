#pragma once

#include <json.hpp>

#include "symcap/capacity.hpp"
#include "symcap/positions.hpp"
#include "symcap/symplect.hpp"
#include "symcap/widths.hpp"

namespace symcap {

nlohmann::json to_json(const Vec& v);
nlohmann::json to_json(const WidthEstimate& w);
nlohmann::json to_json(const VolumeResult& v);
nlohmann::json to_json(const CertifiedRadius& r);
nlohmann::json to_json(const CapacityBound& b);
nlohmann::json to_json(const PlaneSearchResult& r);
nlohmann::json to_json(const WdsDecomposition& w);
nlohmann::json to_json(const WilliamsonForm& w);
nlohmann::json to_json(const PositionSearchResult& p);
nlohmann::json to_json(const PlaneChoice& p);
nlohmann::json to_json(const PipelineReport& r);

/// Inverse of to_json(CapacityBound), enough to recertify a stored bound.
CapacityBound bound_from_json(const nlohmann::json& j);

}  // namespace symcap
