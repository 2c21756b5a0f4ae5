#include "diffsearch/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

namespace diffsearch::config {

namespace {

std::optional<double> number_field(const json& doc, const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) throw SearchError(ErrorKind::InvalidArgument, std::string("field `") + key + "` must be a number");
    return it->get<double>();
}

int integer_field(const json& doc, const char* key, int fallback) {
    const auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return fallback;
    if (!it->is_number_integer())
        throw SearchError(ErrorKind::InvalidArgument, std::string("field `") + key + "` must be an integer");
    return it->get<int>();
}

double size_field(const json& seg, std::size_t index) {
    const auto it = seg.find("size");
    if (it == seg.end() || it->is_null()) return kInfinity;
    if (it->is_string() && (it->get<std::string>() == "inf" || it->get<std::string>() == "Infinite")) return kInfinity;
    if (!it->is_number())
        throw SearchError(ErrorKind::InvalidArgument, "field `segments[" + std::to_string(index) + "].size` must be a number");
    return it->get<double>();
}

Stopping parse_stopping(const json& doc) {
    const auto it = doc.find("stopping");
    if (it == doc.end() || it->is_null()) return Stopping::StopAll;
    const std::string value = it->is_string() ? it->get<std::string>() : "";
    if (value == "StopAll") return Stopping::StopAll;
    if (value == "NoStop") return Stopping::NoStop;
    throw SearchError(ErrorKind::InvalidArgument, "field `stopping` must be \"StopAll\" or \"NoStop\"");
}

sim::SimConfig parse_sim(const json& doc) {
    sim::SimConfig cfg;
    const auto it = doc.find("sim");
    if (it == doc.end()) return cfg;
    const json& s = *it;
    if (auto v = number_field(s, "dt")) cfg.dt = *v;
    if (auto v = number_field(s, "replications")) cfg.replications = static_cast<std::size_t>(*v);
    if (s.contains("seed")) cfg.seed = s.at("seed").get<std::uint64_t>();
    if (auto v = number_field(s, "max_virtual_time")) cfg.max_virtual_time = *v;
    if (s.contains("antithetic")) cfg.antithetic = s.at("antithetic").get<bool>();
    if (s.contains("method")) {
        const std::string m = s.at("method").get<std::string>();
        if (m == "exact") cfg.method = sim::Method::Exact;
        else if (m == "euler") cfg.method = sim::Method::EulerMaruyama;
        else throw SearchError(ErrorKind::InvalidArgument, "field `sim.method` must be \"exact\" or \"euler\"");
    }
    if (auto v = number_field(s, "workers")) cfg.workers = static_cast<unsigned>(*v);
    sim::validate(cfg);
    return cfg;
}

}  // namespace

RunConfig parse(const json& doc) {
    if (!doc.is_object()) throw SearchError(ErrorKind::InvalidArgument, "configuration must be a JSON object");
    RunConfig cfg;
    RawSearchParams& p = cfg.params;
    p.b = number_field(doc, "b");
    p.c = number_field(doc, "c");
    p.lambda = number_field(doc, "lambda");
    p.r = number_field(doc, "r");
    p.timeout_mean = number_field(doc, "timeout_mean");
    p.mu = number_field(doc, "mu");
    p.D = number_field(doc, "D");

    cfg.race.n_searchers = integer_field(doc, "N", 1);
    cfg.race.k_required = integer_field(doc, "k", 1);
    cfg.race.stopping = parse_stopping(doc);
    validate(cfg.race);

    if (const auto it = doc.find("segments"); it != doc.end() && !it->is_null()) {
        if (!it->is_array()) throw SearchError(ErrorKind::InvalidArgument, "field `segments` must be an array");
        SegmentProfile profile;
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& s = (*it)[i];
            const std::string where = "segments[" + std::to_string(i) + "].";
            Segment seg;
            seg.size = size_field(s, i);
            auto required = [&](const char* key) {
                const auto v = number_field(s, key);
                if (!v) throw SearchError(ErrorKind::MissingField, "missing field `" + where + key + "`");
                return *v;
            };
            seg.drift_b = required("b");
            seg.diff_c = required("c");
            seg.loss_lambda = required("lambda");
            profile.segments.push_back(seg);
        }
        if (p.r && p.timeout_mean)
            throw SearchError(ErrorKind::InvalidArgument, "give either `r` or `timeout_mean`, not both");
        if (p.timeout_mean) p.r = 1.0 / *p.timeout_mean;
        if (!p.r) throw SearchError(ErrorKind::MissingField, "missing field `r`");
        if (!p.mu) throw SearchError(ErrorKind::MissingField, "missing field `mu`");
        if (!p.D) throw SearchError(ErrorKind::MissingField, "missing field `D`");
        profile.timeout_r = *p.r;
        profile.relaunch_mu = *p.mu;
        profile.distance_D = *p.D;
        validate(profile);
        cfg.profile = std::move(profile);
    }
    cfg.sim = parse_sim(doc);
    return cfg;
}

RunConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SearchError(ErrorKind::InvalidArgument, "cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SearchError(ErrorKind::InvalidArgument, std::string("malformed JSON: ") + e.what());
    }
    return parse(doc);
}

void apply_override(json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw SearchError(ErrorKind::InvalidArgument, "override must look like key=value: " + std::string(assignment));
    const std::string key(assignment.substr(0, eq));
    const std::string value(assignment.substr(eq + 1));

    // Dotted keys address nested objects, e.g. sim.seed=7.
    json* target = &doc;
    std::string leaf = key;
    for (auto dot = leaf.find('.'); dot != std::string::npos; dot = leaf.find('.')) {
        target = &(*target)[leaf.substr(0, dot)];
        leaf = leaf.substr(dot + 1);
    }

    double number = 0.0;
    const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), number);
    const bool numeric = ec == std::errc() && end == value.data() + value.size();
    if (numeric && value.find_first_of(".eE") == std::string::npos) {
        (*target)[leaf] = std::stoll(value);
    } else if (numeric) {
        (*target)[leaf] = number;
    } else if (value == "true" || value == "false") {
        (*target)[leaf] = value == "true";
    } else {
        (*target)[leaf] = value;
    }
    // An explicit rate replaces a mean time-out and vice versa.
    if (target == &doc && leaf == "r") doc.erase("timeout_mean");
    if (target == &doc && leaf == "timeout_mean") doc.erase("r");
}

json to_json(const SearchParams& p) {
    return json{{"b", p.drift_b}, {"c", p.diff_c}, {"lambda", p.loss_lambda},
                {"r", p.timeout_r}, {"mu", p.relaunch_mu}, {"D", p.distance_D}};
}

SearchParams params_from_json(const json& doc) { return validate(parse(doc).params); }

json to_json(const SegmentProfile& profile) {
    json segs = json::array();
    for (const Segment& s : profile.segments) {
        json entry{{"b", s.drift_b}, {"c", s.diff_c}, {"lambda", s.loss_lambda}};
        entry["size"] = std::isinf(s.size) ? json("inf") : json(s.size);
        segs.push_back(entry);
    }
    return json{{"segments", segs}, {"r", profile.timeout_r}, {"mu", profile.relaunch_mu}, {"D", profile.distance_D}};
}

std::string_view to_string(Stopping stopping) noexcept {
    return stopping == Stopping::StopAll ? "StopAll" : "NoStop";
}

json to_json(const RaceSpec& race) {
    return json{{"N", race.n_searchers}, {"k", race.k_required}, {"stopping", to_string(race.stopping)}};
}

json to_json(const sim::SimConfig& c) {
    return json{{"dt", c.dt},
                {"replications", c.replications},
                {"seed", c.seed},
                {"max_virtual_time", c.max_virtual_time},
                {"antithetic", c.antithetic},
                {"method", c.method == sim::Method::Exact ? "exact" : "euler"}};
}

}  // namespace diffsearch::config
