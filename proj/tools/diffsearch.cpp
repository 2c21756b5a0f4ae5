// diffsearch: evaluate, simulate and regenerate figure data for the
// diffusion search model.
//
// Exit codes: 0 success, 1 numeric failure, 2 configuration failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "diffsearch/analytic.hpp"
#include "diffsearch/config.hpp"
#include "diffsearch/fpt.hpp"
#include "diffsearch/optimize.hpp"
#include "diffsearch/report.hpp"
#include "diffsearch/segments.hpp"
#include "diffsearch/sim.hpp"

namespace ds = diffsearch;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replications;
    std::optional<double> dt;
    std::optional<double> r;
    std::optional<double> timeout_mean;
    std::optional<unsigned> workers;
    std::vector<std::string> overrides;
    bool json_output = false;
};

json read_json(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw ds::SearchError(ds::ErrorKind::InvalidArgument, "cannot open config file " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ds::SearchError(ds::ErrorKind::InvalidArgument, std::string("malformed JSON: ") + e.what());
    }
}

/// Config document with command-line flags folded in, in increasing priority:
/// file, --override, dedicated flags.
json resolve_document(json doc, const CommonOptions& opt) {
    for (const auto& o : opt.overrides) ds::config::apply_override(doc, o);
    if (opt.r) ds::config::apply_override(doc, "r=" + std::to_string(*opt.r));
    if (opt.timeout_mean) ds::config::apply_override(doc, "timeout_mean=" + std::to_string(*opt.timeout_mean));
    if (opt.seed) doc["sim"]["seed"] = *opt.seed;
    if (opt.replications) doc["sim"]["replications"] = *opt.replications;
    if (opt.dt) doc["sim"]["dt"] = *opt.dt;
    if (opt.workers) doc["sim"]["workers"] = *opt.workers;
    return doc;
}

std::string verdict_name(ds::analytic::Verdict v) { return v == ds::analytic::Verdict::Finite ? "Finite" : "Infinite"; }

std::string reason_name(ds::analytic::FinitenessReason r) {
    switch (r) {
        case ds::analytic::FinitenessReason::DeterministicTowardObject: return "DeterministicTowardObject";
        case ds::analytic::FinitenessReason::DeterministicAwayOrZeroDrift: return "DeterministicAwayOrZeroDrift";
        case ds::analytic::FinitenessReason::RandomisedWithCurtailment: return "RandomisedWithCurtailment";
        case ds::analytic::FinitenessReason::NoCurtailment: return "NoCurtailment";
    }
    return "Unknown";
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json resolved_echo(const ds::config::RunConfig& cfg, const std::optional<ds::SearchParams>& params) {
    json echo;
    if (params) echo["params"] = ds::config::to_json(*params);
    if (cfg.profile) echo["profile"] = ds::config::to_json(*cfg.profile);
    echo["race"] = ds::config::to_json(cfg.race);
    echo["sim"] = ds::config::to_json(cfg.sim);
    return echo;
}

void write_manifest(const fs::path& out, ds::report::RunManifest manifest,
                    std::chrono::steady_clock::time_point started) {
    manifest.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    ds::report::write_atomic(out / "manifest.json", manifest.to_json().dump(2) + "\n");
}

// ---------------------------------------------------------------- eval

int cmd_eval(const CommonOptions& opt) {
    const json doc = resolve_document(read_json(opt.config_path), opt);
    const ds::config::RunConfig cfg = ds::config::parse(doc);
    json result;

    if (cfg.profile) {
        if (cfg.race.n_searchers != 1 || cfg.race.k_required != 1)
            throw ds::SearchError(ds::ErrorKind::InvalidArgument,
                                  "segmented media have no analytic result for N > 1; use `simulate`");
        const ds::segments::AttemptMoments m = ds::segments::attempt_moments(*cfg.profile);
        const double t = ds::segments::mean_time_segmented(*cfg.profile);
        result = {{"mean_time", number_or_null(t)},
                  {"attempt_success", m.success},
                  {"attempt_mean_duration", m.mean_duration},
                  {"attempt_loss_probability", m.loss_probability},
                  {"verdict", std::isfinite(t) ? "Finite" : "Infinite"}};
        if (!opt.json_output) {
            std::cout << "segmented medium, " << cfg.profile->segments.size() << " segments\n"
                      << "  E[T]            " << ds::report::format_number(t) << "\n"
                      << "  attempt success " << ds::report::format_number(m.success) << "\n";
        }
    } else {
        const ds::SearchParams p = ds::validate(cfg.params);
        const int n = cfg.race.n_searchers;
        const ds::analytic::Finiteness fin = ds::analytic::classify_finiteness(p, n);
        const ds::RaceFixedPoint fp = ds::analytic::mean_time_fixed_point(p, n);
        const double energy = ds::analytic::mean_energy_first_success(p, n, fp.attraction_a);
        const double q = ds::fpt::attempt_success_probability(p);
        result = {{"attraction_a", fp.attraction_a},
                  {"mean_time", number_or_null(fp.mean_time)},
                  {"mean_energy_minus", number_or_null(energy)},
                  {"attempt_success", q},
                  {"fixed_point_iterations", fp.iterations},
                  {"fixed_point_residual", fp.residual},
                  {"verdict", verdict_name(fin.verdict)},
                  {"reason", reason_name(fin.reason)},
                  {"params", ds::config::to_json(p)},
                  {"race", ds::config::to_json(cfg.race)}};
        if (cfg.race.k_required > 1 && p.curtailment() > 0.0) {
            const double median = ds::fpt::quantile(p, 0.5);
            result["single_searcher_median"] = median;
        }
        if (!opt.json_output) {
            std::cout << "N=" << n << " k=" << cfg.race.k_required << "\n"
                      << "  a               " << ds::report::format_number(fp.attraction_a) << "\n"
                      << "  E[T]            " << ds::report::format_number(fp.mean_time) << "\n"
                      << "  E[J-]           " << ds::report::format_number(energy) << "\n"
                      << "  q               " << ds::report::format_number(q) << "\n"
                      << "  finiteness      " << verdict_name(fin.verdict) << " (" << reason_name(fin.reason) << ")\n";
        }
    }
    if (opt.json_output) std::cout << result.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const CommonOptions& opt) {
    const auto started = std::chrono::steady_clock::now();
    const json doc = resolve_document(read_json(opt.config_path), opt);
    const ds::config::RunConfig cfg = ds::config::parse(doc);
    const fs::path out(opt.out_dir);

    std::optional<ds::SearchParams> params;
    ds::sim::RaceResult result;
    if (cfg.profile) {
        result = ds::sim::simulate_segmented_race(*cfg.profile, cfg.race, cfg.sim);
    } else {
        params = ds::validate(cfg.params);
        result = ds::sim::simulate_race(*params, cfg.race, cfg.sim);
    }

    json summary = ds::report::summary_json(result);
    summary["config"] = resolved_echo(cfg, params);
    if (params && cfg.race.k_required == 1) {
        const ds::RaceFixedPoint fp = ds::analytic::mean_time_fixed_point(*params, cfg.race.n_searchers);
        summary["analytic"] = {
            {"mean_time", number_or_null(fp.mean_time)},
            {"mean_energy_minus",
             number_or_null(ds::analytic::mean_energy_first_success(*params, cfg.race.n_searchers, fp.attraction_a))}};
    }

    ds::report::write_atomic(out / "samples.csv", ds::report::samples_table(result).str());
    ds::report::write_atomic(out / "summary.json", summary.dump(2) + "\n");

    ds::report::RunManifest manifest;
    manifest.command = "simulate";
    manifest.config_echo = resolved_echo(cfg, params);
    manifest.seed = cfg.sim.seed;
    manifest.artifacts = {"samples.csv", "summary.json"};
    if (!result.valid) manifest.partial_artifacts = {"samples.csv", "summary.json"};
    write_manifest(out, manifest, started);

    auto line = [](const char* name, const ds::SimEstimate& e) {
        std::cout << "  " << name << ds::report::format_number(e.mean) << " +- "
                  << ds::report::format_number(e.ci_half_width) << "\n";
    };
    std::cout << "replications " << result.samples.size() << ", censored " << result.censored << "\n";
    line("E[T_k]  ", result.t_k);
    line("E[J-]   ", result.j_minus);
    line("E[J+]   ", result.j_plus);
    if (!result.valid) {
        std::cerr << "censored fraction " << result.censored_fraction << " exceeds 0.1%; estimates are biased\n";
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------- figure

/// Reads a list setting that may be a number, a JSON array, or a
/// comma-separated string (as produced by --override N=1,2,4).
template <class T>
std::vector<T> list_setting(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    std::vector<T> out;
    if (v.is_array()) {
        for (const auto& e : v) out.push_back(e.get<T>());
    } else if (v.is_number()) {
        out.push_back(v.get<T>());
    } else if (v.is_string()) {
        std::stringstream ss(v.get<std::string>());
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                const double x = std::stod(item, &used);
                if (used != item.size()) throw std::invalid_argument(item);
                out.push_back(static_cast<T>(x));
            } catch (const std::exception&) {
                throw ds::SearchError(ds::ErrorKind::InvalidArgument, "bad list entry `" + item + "` in `" + key + "`");
            }
        }
    } else {
        throw ds::SearchError(ds::ErrorKind::InvalidArgument, "field `" + key + "` must be a list");
    }
    if (out.empty()) throw ds::SearchError(ds::ErrorKind::InvalidArgument, "field `" + key + "` is empty");
    return out;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i)
        g[i] = points == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    return g;
}

ds::SearchParams figure_params(const json& doc) {
    ds::RawSearchParams raw;
    raw.b = doc.at("b").get<double>();
    raw.c = doc.at("c").get<double>();
    raw.lambda = doc.at("lambda").get<double>();
    raw.mu = doc.at("mu").get<double>();
    raw.D = doc.at("D").get<double>();
    if (doc.contains("r")) raw.r = doc.at("r").get<double>();
    if (doc.contains("timeout_mean")) raw.timeout_mean = doc.at("timeout_mean").get<double>();
    if (!raw.r && !raw.timeout_mean) raw.r = 0.0;
    return ds::validate(raw);
}

ds::sim::SimConfig figure_sim(const json& doc) {
    ds::sim::SimConfig sim;
    const json& s = doc.at("sim");
    sim.seed = s.at("seed").get<std::uint64_t>();
    sim.replications = s.at("replications").get<std::size_t>();
    sim.dt = s.at("dt").get<double>();
    if (s.contains("workers")) sim.workers = s.at("workers").get<unsigned>();
    ds::sim::validate(sim);
    return sim;
}

json figure_defaults(const std::string& id) {
    if (id == "fig2") {
        return {{"panels", {{{"name", "a"}, {"b", 0.2}, {"lambda", 0.01}}, {{"name", "b"}, {"b", 0.0}, {"lambda", 0.15}}}},
                {"c", 1.0}, {"mu", 0.05}, {"D", 10.0}, {"N", {1, 2, 5, 10}},
                {"timeout_min", 1.0}, {"timeout_max", 1000.0}, {"points", 61}};
    }
    if (id == "fig3") {
        return {{"b", 0.15}, {"c", 1.25}, {"lambda", 0.001}, {"mu", 0.1}, {"D", 10.0}, {"k", 1}, {"N", {1, 2, 4, 8}},
                {"timeout_min", 5.0}, {"timeout_max", 500.0}, {"points", 9},
                {"sim", {{"seed", 1}, {"replications", 4000}, {"dt", 1e-2}}}};
    }
    if (id == "fig4") {
        return {{"b", 0.0}, {"c", 1.0}, {"lambda", 0.0025}, {"mu", 0.1}, {"D", 10.0}, {"k", 3}, {"N", {4, 8, 16}},
                {"timeout_min", 10.0}, {"timeout_max", 1000.0},
                {"sim", {{"seed", 1}, {"replications", 2000}, {"dt", 1e-2}}}};
    }
    if (id == "fig5") {
        return {{"b", 0.0}, {"c", 1.0}, {"lambda", 0.0025}, {"timeout_mean", 78.0}, {"mu", 0.1}, {"D", 10.0}, {"k", 3},
                {"B_min", 100.0}, {"B_max", 1000.0}, {"B_step", 50.0}};
    }
    if (id == "fig7") {
        return {{"c", 1.0}, {"D", 10.0}, {"r", 0.05}, {"mu", 0.025}, {"segment_size", 1.0}, {"m", 20},
                {"epsilon", {0.0, 0.25, 0.5, 1.0}}, {"rho_min", 0.02}, {"rho_max", 100.0}, {"points", 41}};
    }
    throw ds::SearchError(ds::ErrorKind::InvalidArgument, "unknown figure `" + id + "`");
}

struct FigureOutput {
    std::string file;
    ds::report::CsvTable table;
    bool partial = false;
};

FigureOutput figure2(const json& doc) {
    ds::report::CsvTable t({"panel", "N", "timeout_mean", "mean_time", "mean_energy_minus", "status"});
    bool partial = false;
    const auto timeouts = log_grid(doc.at("timeout_min"), doc.at("timeout_max"), doc.at("points"));
    std::vector<double> r_grid;
    for (auto it = timeouts.rbegin(); it != timeouts.rend(); ++it) r_grid.push_back(1.0 / *it);
    for (const json& panel : doc.at("panels")) {
        json pdoc = doc;
        pdoc["b"] = panel.at("b");
        pdoc["lambda"] = panel.at("lambda");
        pdoc["r"] = r_grid.front();
        const ds::SearchParams base = figure_params(pdoc);
        for (int n : list_setting<int>(doc, "N")) {
            for (const auto& pt : ds::optimize::tradeoff_locus(base, n, r_grid)) {
                partial |= pt.status != "ok";
                t.add_row({panel.at("name").get<std::string>(), std::to_string(n),
                           ds::report::format_number(pt.timeout_mean), ds::report::format_number(pt.mean_time),
                           ds::report::format_number(pt.mean_energy_minus), pt.status});
            }
        }
    }
    return {"fig2.csv", t, partial};
}

FigureOutput figure3(const json& doc) {
    ds::report::CsvTable t({"N", "timeout_mean", "j_minus", "j_minus_ci", "j_plus", "j_plus_ci", "censored_fraction"});
    json pdoc = doc;
    pdoc["r"] = 1.0;
    const ds::SearchParams base = figure_params(pdoc);
    const auto timeouts = log_grid(doc.at("timeout_min"), doc.at("timeout_max"), doc.at("points"));
    const auto curve = ds::optimize::energy_vs_timeout(base, doc.at("k").get<int>(), list_setting<int>(doc, "N"),
                                                       timeouts, figure_sim(doc));
    bool partial = false;
    for (const auto& p : curve) {
        partial |= p.censored_fraction > 1e-3;
        t.add_row({std::to_string(p.n_searchers), ds::report::format_number(p.timeout_mean),
                   ds::report::format_number(p.energy_minus.mean), ds::report::format_number(p.energy_minus.ci_half_width),
                   ds::report::format_number(p.energy_plus.mean), ds::report::format_number(p.energy_plus.ci_half_width),
                   ds::report::format_number(p.censored_fraction)});
    }
    return {"fig3.csv", t, partial};
}

FigureOutput figure4(const json& doc) {
    ds::report::CsvTable t({"N", "k", "min_mean_time", "timeout_mean_time", "min_energy_minus",
                            "timeout_energy_minus", "min_energy_plus", "timeout_energy_plus"});
    json pdoc = doc;
    pdoc["r"] = 1.0;
    const ds::SearchParams base = figure_params(pdoc);
    ds::optimize::OptimizeOptions options;
    options.sim = figure_sim(doc);
    const int k = doc.at("k").get<int>();
    const double r_low = 1.0 / doc.at("timeout_max").get<double>();
    const double r_high = 1.0 / doc.at("timeout_min").get<double>();
    const auto rows = ds::optimize::min_curves_vs_N(base, k, list_setting<int>(doc, "N"), r_low, r_high, options);
    bool partial = false;
    auto inv = [](double r) { return ds::report::format_number(1.0 / r); };
    for (const auto& row : rows) {
        partial |= !std::isfinite(row.time.value) || !std::isfinite(row.energy_minus.value) ||
                   !std::isfinite(row.energy_plus.value);
        t.add_row({std::to_string(row.n_searchers), std::to_string(k), ds::report::format_number(row.time.value),
                   inv(row.time.r_star), ds::report::format_number(row.energy_minus.value), inv(row.energy_minus.r_star),
                   ds::report::format_number(row.energy_plus.value), inv(row.energy_plus.r_star)});
    }
    return {"fig4.csv", t, partial};
}

FigureOutput figure5(const json& doc) {
    ds::report::CsvTable t({"B", "k", "N_exact", "N_asymptotic"});
    const ds::SearchParams p = figure_params(doc);
    std::vector<double> budgets;
    const double step = doc.at("B_step");
    if (!(step > 0.0)) throw ds::SearchError(ds::ErrorKind::InvalidArgument, "field `B_step` must be positive");
    for (double b = doc.at("B_min"); b <= doc.at("B_max").get<double>() + 1e-9; b += step) budgets.push_back(b);
    bool partial = false;
    const int k = doc.at("k").get<int>();
    for (double b : budgets) {
        std::string exact = "NA", asym = "NA";
        try {
            exact = std::to_string(ds::fpt::searchers_needed_exact(p, b, k));
            asym = std::to_string(ds::fpt::searchers_needed(p, b, k));
        } catch (const ds::SearchError&) {
            partial = true;
        }
        t.add_row({ds::report::format_number(b), std::to_string(k), exact, asym});
    }
    return {"fig5.csv", t, partial};
}

FigureOutput figure7(const json& doc) {
    ds::report::CsvTable t({"rho", "epsilon", "mean_time", "status"});
    ds::segments::PhaseSweepSpec spec;
    spec.rho_grid = log_grid(doc.at("rho_min"), doc.at("rho_max"), doc.at("points"));
    spec.epsilon_list = list_setting<double>(doc, "epsilon");
    spec.m = doc.at("m");
    spec.segment_size = doc.at("segment_size");
    spec.diff_c = doc.at("c");
    spec.timeout_r = doc.contains("timeout_mean") ? 1.0 / doc.at("timeout_mean").get<double>() : doc.at("r").get<double>();
    spec.relaunch_mu = doc.at("mu");
    spec.distance_D = doc.at("D");
    bool partial = false;
    for (const auto& p : ds::segments::phase_sweep(spec)) {
        partial |= p.status != "ok" && p.status != "Infinite";
        t.add_row({ds::report::format_number(p.rho), ds::report::format_number(p.epsilon),
                   ds::report::format_number(p.mean_time), p.status});
    }
    return {"fig7.csv", t, partial};
}

int cmd_figure(const std::string& id, const CommonOptions& opt) {
    const auto started = std::chrono::steady_clock::now();
    json doc = figure_defaults(id);
    if (!opt.config_path.empty()) doc.update(read_json(opt.config_path));
    doc = resolve_document(doc, opt);

    FigureOutput output = [&] {
        try {
            if (id == "fig2") return figure2(doc);
            if (id == "fig3") return figure3(doc);
            if (id == "fig4") return figure4(doc);
            if (id == "fig5") return figure5(doc);
            return figure7(doc);
        } catch (const json::exception& e) {
            throw ds::SearchError(ds::ErrorKind::InvalidArgument, std::string("bad figure setting: ") + e.what());
        }
    }();

    const fs::path out(opt.out_dir);
    ds::report::write_atomic(out / output.file, output.table.str());
    ds::report::RunManifest manifest;
    manifest.command = "figure " + id;
    manifest.config_echo = doc;
    manifest.seed = doc.contains("sim") ? doc["sim"].value("seed", std::uint64_t{0}) : 0;
    manifest.artifacts = {output.file};
    if (output.partial) manifest.partial_artifacts = {output.file};
    write_manifest(out, manifest, started);
    std::cout << (out / output.file).string() << ": " << output.table.rows() << " rows"
              << (output.partial ? " (some points failed)" : "") << "\n";
    return 0;
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_out) {
    cmd->add_option("--config", opt.config_path, "JSON configuration file");
    if (with_out) cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--replications", opt.replications, "Monte Carlo replications");
    cmd->add_option("--dt", opt.dt, "Euler-Maruyama step");
    cmd->add_option("--workers", opt.workers, "worker threads (results do not depend on this)");
    auto* r = cmd->add_option("--r", opt.r, "time-out rate");
    auto* tm = cmd->add_option("--timeout-mean", opt.timeout_mean, "mean time-out 1/r");
    r->excludes(tm);
    cmd->add_option("--override", opt.overrides, "key=value, repeatable")->take_all();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Diffusion search with losses, time-outs and relaunches"};
    app.set_version_flag("--version", std::string(ds::report::tool_version()));
    app.require_subcommand(1);

    CommonOptions opt;
    auto* eval = app.add_subcommand("eval", "analytic mean time, energy and finiteness");
    add_common(eval, opt, false);
    eval->add_flag("--json", opt.json_output, "print JSON");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo race; writes samples.csv and summary.json");
    add_common(simulate, opt, true);

    std::string figure_id;
    auto* figure = app.add_subcommand("figure", "regenerate figure data as CSV");
    figure->add_option("id", figure_id, "fig2, fig3, fig4, fig5 or fig7")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5", "fig7"}));
    add_common(figure, opt, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*eval) return cmd_eval(opt);
        if (*simulate) return cmd_simulate(opt);
        return cmd_figure(figure_id, opt);
    } catch (const ds::SearchError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ds::is_config_error(e.kind()) ? 2 : 1;
    } catch (const json::exception& e) {
        std::cerr << "error: bad configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
