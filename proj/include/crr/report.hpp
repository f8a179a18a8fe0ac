#pragma once

// Stable-order JSON and CSV renderings. Floats carry nine significant digits.

#include <string>
#include <vector>

#include <json.hpp>

#include "crr/binary.hpp"
#include "crr/candidates.hpp"
#include "crr/classify.hpp"
#include "crr/frontier.hpp"
#include "crr/gacs_korner.hpp"
#include "crr/pruning.hpp"

namespace crr {

using ojson = nlohmann::ordered_json;

inline constexpr const char *kFrontierCsvHeader =
    "D,corner_index,r_uv_min,sum_rate_min";

/// One row per corner of every frontier, in order.
std::string frontier_csv(const std::vector<RegionFrontier> &frontiers);

ojson corner_json(const RateCorner &c);
ojson frontier_json(const RegionFrontier &f);
ojson gk_json(const GKPartition &part);
ojson case_report_json(const CaseReport &r);
ojson demo_report_json(const DemoReport &r);
std::string demo_csv(const DemoReport &r);
ojson prune_report_json(const PruneReport &r);
ojson triple_json(const TripleEvaluation &ev);

} // namespace crr
