#include "diffsearch/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "diffsearch/config.hpp"

namespace diffsearch::report {

std::string format_number(double value) {
    if (!std::isfinite(value)) return "NA";
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw SearchError(ErrorKind::InvalidArgument, "CSV row width does not match header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
    std::ostringstream out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    line(header_);
    for (const auto& row : rows_) line(row);
    return out.str();
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw SearchError(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw SearchError(ErrorKind::InvalidArgument, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

CsvTable samples_table(const sim::RaceResult& result) {
    CsvTable table({"replication", "t_k", "j_minus", "j_plus", "interruptions", "censored"});
    for (std::size_t i = 0; i < result.samples.size(); ++i) {
        const sim::RaceSample& s = result.samples[i];
        table.add_row({std::to_string(i), format_number(s.t_k), format_number(s.j_minus), format_number(s.j_plus),
                       std::to_string(s.interruptions), s.censored ? "1" : "0"});
    }
    return table;
}

namespace {

nlohmann::json estimate_json(const SimEstimate& e) {
    return {{"mean", e.mean}, {"variance", e.variance}, {"samples", e.samples}, {"ci_half_width", e.ci_half_width}};
}

}  // namespace

nlohmann::json summary_json(const sim::RaceResult& result) {
    return {{"t_k", estimate_json(result.t_k)},
            {"j_minus", estimate_json(result.j_minus)},
            {"j_plus", estimate_json(result.j_plus)},
            {"censored", result.censored},
            {"censored_fraction", result.censored_fraction},
            {"valid", result.valid},
            {"max_virtual_time", result.max_virtual_time},
            {"race", config::to_json(result.race)}};
}

nlohmann::json RunManifest::to_json() const {
    return {{"command", command},
            {"config", config_echo},
            {"seed", seed},
            {"artifacts", artifacts},
            {"partial_artifacts", partial_artifacts},
            {"tool_version", tool_version()},
            {"wall_time_seconds", wall_time_seconds}};
}

std::string_view tool_version() noexcept { return "0.1.0"; }

}  // namespace diffsearch::report
