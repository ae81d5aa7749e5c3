#pragma once

#include "jointorbit/diagnostics.hpp"
#include "jointorbit/independence.hpp"
#include "jointorbit/stabilization.hpp"

#include "json.hpp"

namespace jointorbit {

// JSON forms of the module reports. Exact rationals appear as "p/q" strings,
// floats as numbers (nlohmann emits shortest round-trip decimals), and an
// infinite gap ratio as the string "inf".

nlohmann::json to_json(const Region& region);
nlohmann::json to_json(const PointTuple& tuple);
nlohmann::json to_json(const RankReport& rep);
nlohmann::json to_json(const ScanOutcome& scan);
nlohmann::json to_json(const GenericRankResult& res);
nlohmann::json to_json(const StabilizationReport& rep);
nlohmann::json to_json(const EffectivenessReport& rep);
nlohmann::json to_json(const InvarianceReport& rep);
nlohmann::json to_json(const LieDeterminant& det);
nlohmann::json to_json(const DetInvarianceReport& rep);
nlohmann::json to_json(const FreenessReport& rep);
nlohmann::json to_json(const IndependenceReport& rep);

} // namespace jointorbit
