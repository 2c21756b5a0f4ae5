#pragma once
// Plot-ready CSV tables and run manifests.
// CSV: header row, '.' decimal separator, shortest round-trip numbers, NA for
// infinite or failed values.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "diffsearch/sim.hpp"

namespace diffsearch::report {

std::string format_number(double value);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> cells);
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Writes through a temporary sibling file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

CsvTable samples_table(const sim::RaceResult& result);
nlohmann::json summary_json(const sim::RaceResult& result);

struct RunManifest {
    std::string command;
    nlohmann::json config_echo;
    std::uint64_t seed = 0;
    std::vector<std::string> artifacts;
    std::vector<std::string> partial_artifacts;  ///< files containing failed points
    double wall_time_seconds = 0.0;

    nlohmann::json to_json() const;
};

std::string_view tool_version() noexcept;

}  // namespace diffsearch::report
