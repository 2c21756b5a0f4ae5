#pragma once
// JSON configuration files. Field names: b, c, lambda, r (or timeout_mean),
// mu, D, N, k, stopping, segments, plus an optional "sim" block.

#include <filesystem>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "diffsearch/model.hpp"
#include "diffsearch/sim.hpp"

namespace diffsearch::config {

using json = nlohmann::json;

struct RunConfig {
    RawSearchParams params;
    RaceSpec race;
    std::optional<SegmentProfile> profile;  ///< present when "segments" is given
    sim::SimConfig sim;
};

/// Parses and validates race/segment/sim fields. Search parameters stay raw
/// so that the caller decides when a missing field is an error.
RunConfig parse(const json& doc);
RunConfig load(const std::filesystem::path& path);

/// Applies `key=value` onto a JSON document; numeric values become numbers,
/// `inf` becomes an unbounded size, everything else a string.
void apply_override(json& doc, std::string_view assignment);

json to_json(const SearchParams& params);
SearchParams params_from_json(const json& doc);

json to_json(const SegmentProfile& profile);
json to_json(const RaceSpec& race);
json to_json(const sim::SimConfig& config);

std::string_view to_string(Stopping stopping) noexcept;

}  // namespace diffsearch::config
