#pragma once

#include <string>

#include <json.hpp>

#include "shortlist/types.hpp"
#include "shortlist/utility.hpp"

namespace shortlist {

/// {"candidates": [name...], "votes": [{"order": [name...], "count": n}...]}
Election parse_election(const nlohmann::json& doc);
nlohmann::json serialize_election(const Election& election);

/// {"manipulators": [{"id": name, "utilities": {candidate: value...}}...]}
/// Candidate names resolve against the election's candidate list.
UtilityProfile parse_utilities(const nlohmann::json& doc, const Election& election);
nlohmann::json serialize_utilities(const UtilityProfile& profile,
                                   const Election& election);

nlohmann::json load_json_file(const std::string& path);

}  // namespace shortlist
