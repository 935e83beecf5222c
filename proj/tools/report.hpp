#pragma once

// Text and JSON renderings of evaluation, grid-search and ablation results.

#include <span>
#include <string>

#include "jnr/evaluation.hpp"
#include "jnr/tuning.hpp"
#include "json.hpp"

namespace jnr::cli {

nlohmann::ordered_json EvalReportJson(const EvalReport& report);
std::string EvalReportText(const EvalReport& report);

nlohmann::ordered_json GridSearchJson(const GridSearchResult& result);
std::string GridSearchText(const GridSearchResult& result);

nlohmann::ordered_json AblationJson(std::span<const AblationRow> rows);
std::string AblationText(std::span<const AblationRow> rows);

}  // namespace jnr::cli
