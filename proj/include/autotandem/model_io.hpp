#pragma once

#include <filesystem>
#include <nlohmann/json_fwd.hpp>

#include "autotandem/tandem.hpp"
#include "autotandem/uncertainty.hpp"

namespace autotandem {

// Versioned JSON model documents: {"format":"autotandem-model","version":1,
// "kind":...}. Network weights are stored per layer (input→output order) as
// flat row-major arrays; loss histories are training artifacts and are not
// persisted.

inline constexpr int kModelFormatVersion = 1;

nlohmann::json mlp_to_json(const MlpModel& m);
MlpModel mlp_from_json(const nlohmann::json& j);

nlohmann::json tandem_to_json(const TandemModel& t);
TandemModel tandem_from_json(const nlohmann::json& j);

nlohmann::json uncertainty_to_json(const UncertaintyModel& m);
UncertaintyModel uncertainty_from_json(const nlohmann::json& j);

void save_tandem(const TandemModel& t, const std::filesystem::path& path);
TandemModel load_tandem(const std::filesystem::path& path);

void save_uncertainty(const UncertaintyModel& m, const std::filesystem::path& path);
UncertaintyModel load_uncertainty(const std::filesystem::path& path);

}  // namespace autotandem
