#include "degrd/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>
#include <stdexcept>

#include "degrd/config.hpp"
#include "degrd/run_io.hpp"

namespace fs = std::filesystem;

namespace degrd {

namespace {

AuditEntry from_check(const InequalityCheck& c) {
    AuditEntry e;
    e.invariant_id = c.id;
    e.reference = c.description;
    e.margin = c.margin;
    e.tolerance = c.tolerance;
    e.pass = c.pass;
    return e;
}

AuditEntry failed_entry(const std::string& id, const std::string& ref, const std::string& detail) {
    AuditEntry e;
    e.invariant_id = id;
    e.reference = ref;
    e.margin = ExtReal::from_double(-1.0);
    e.detail = detail;
    return e;
}

void write_json(const fs::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return nlohmann::json::parse(in);
}

nlohmann::json config_json(const SimConfig& c) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& k : config_keys()) j[k] = get_config_value(c, k);
    return j;
}

// Replaces dir by the fully written staging directory.
void commit_directory(const fs::path& staging, const fs::path& dir) {
    if (fs::exists(dir)) {
        if (!fs::is_directory(dir) || (!fs::is_empty(dir) && !fs::exists(dir / "summary.json")))
            throw std::runtime_error(dir.string() + " exists and is not a run directory");
        fs::remove_all(dir);
    }
    fs::rename(staging, dir);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

Evaluation evaluate_run(RunOutput& run) {
    Evaluation ev;
    try {
        ev.ledger = compute_ledger(ledger_inputs(run.config));
    } catch (const std::exception& e) {
        ev.ledger_error = e.what();
    }
    const auto& y = run.series.channel("l2_dist").values;
    if (!y.empty() && y[0] > 0) {
        try {
            ev.fit_window = default_fit_window(run.series, "l2_dist");
            ev.fit = fit_decay_rate(run.series, "l2_dist", ev.fit_window);
        } catch (const std::exception& e) {
            ev.fit_error = e.what();
        }
    } else {
        ev.fit_error = "zero initial distance to equilibrium";
    }

    const ConstantLedger* L = ev.ledger ? &*ev.ledger : nullptr;
    ev.report = audit(run.series, facts_of(run), L);

    if (L && run.failure.empty() && run.config.log_convexity && !run.snapshots.empty()) {
        try {
            auto trace = frequency_trace(run, resolved_weight(run.config, *L), L->C0, L->C1);
            if (!run.series.has("N_t")) add_frequency_channels(run, trace);
            audit_log_convexity(ev.report, run, trace, *L);
        } catch (const std::exception& e) {
            ev.report.entries.push_back(failed_entry("tilted_trace", "tilted quantities along the run", e.what()));
        }
    }
    if (L && run.failure.empty() && run.series.size() >= 8) {
        const auto& t = run.series.times;
        const std::size_t n = t.size();
        try {
            auto obs = observation_estimate_check(run, *L, {t[n / 4], t[n / 2], t[n - 1]}, {{t[n / 4], t[n - 1]}});
            for (const auto& c : obs.checks) ev.report.entries.push_back(from_check(c));
        } catch (const std::exception& e) {
            ev.report.entries.push_back(failed_entry("observation_hypotheses", "data bounds of the observation estimate",
                                                     e.what()));
        }
    }
    if (!run.failure.empty()) ev.exit_code = kExitNumerical;
    else if (!ev.report.pass()) ev.exit_code = kExitInvariant;
    return ev;
}

nlohmann::json summary_json(const RunOutput& run, const Evaluation& ev) {
    nlohmann::json j;
    j["format_version"] = kFormatVersion;
    j["tool_version"] = kToolVersion;
    j["config"] = config_json(run.config);
    j["grid"] = run.grid ? run.grid->summary() : nlohmann::json();
    j["dt"] = run.dt;
    j["steps"] = run.steps;
    j["samples"] = run.series.size();
    j["B0"] = run.B0;
    j["initial_scale"] = run.initial_scale;
    j["stability_violated"] = run.stability_violated;
    j["failure"] = run.failure;
    j["warnings"] = run.warnings;
    if (ev.fit) {
        j["decay_fit"] = {{"channel", "l2_dist"},
                          {"rate", ev.fit->rate},
                          {"intercept", ev.fit->intercept},
                          {"r_squared", ev.fit->r_squared},
                          {"samples", ev.fit->samples},
                          {"window", {ev.fit_window.t_begin, ev.fit_window.t_end}}};
    } else {
        j["decay_fit"] = {{"error", ev.fit_error}};
    }
    if (ev.ledger) {
        j["ledger"] = {{"theta", ext_to_json(ev.ledger->log_abs_log_theta)},
                       {"theta_encoding", "exp(-exp(value))"},
                       {"log_beta", ext_to_json(ev.ledger->log_beta)},
                       {"beta1", ev.ledger->beta1}};
    } else {
        j["ledger"] = {{"error", ev.ledger_error}};
    }
    j["invariants_pass"] = ev.report.pass();
    j["failed_invariants"] = ev.report.failed();
    j["exit_code"] = ev.exit_code;
    return j;
}

nlohmann::json verification_json(const Evaluation& ev) {
    nlohmann::json j = ev.report.to_json();
    j["format_version"] = kFormatVersion;
    j["tool_version"] = kToolVersion;
    if (!ev.ledger) j["ledger_error"] = ev.ledger_error;
    return j;
}

int simulate_to_directory(const SimConfig& config, const fs::path& dir, nlohmann::json* summary) {
    RunOutput out = run(config);
    Evaluation ev = evaluate_run(out);

    fs::path staging = dir;
    staging += ".partial";
    fs::remove_all(staging);
    fs::create_directories(staging);
    try {
        {
            std::ofstream cfg(staging / "config.ini");
            cfg << to_ini(config);
        }
        write_traces_csv(out.series, staging / "traces.csv");
        if (config.keep_snapshots) {
            fs::create_directories(staging / "snapshots");
            for (std::size_t i = 0; i < out.snapshots.size(); ++i)
                write_snapshot(staging / "snapshots" / snapshot_name(i), *out.grid, out.snapshots[i]);
        }
        auto s = summary_json(out, ev);
        write_json(staging / "summary.json", s);
        write_json(staging / "verification.json", verification_json(ev));
        commit_directory(staging, dir);
        if (summary) *summary = std::move(s);
    } catch (...) {
        fs::remove_all(staging);
        throw;
    }
    return ev.exit_code;
}

RunOutput load_run_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw std::runtime_error(dir.string() + " is not a directory");
    RunOutput run;
    run.config = load_config((dir / "config.ini").string());
    run.grid = build_grid(Domain::unit_ball(run.config.dim), run.config.resolution);
    run.series = read_traces_csv(dir / "traces.csv");
    auto s = read_json(dir / "summary.json");
    if (s.value("format_version", 0) != kFormatVersion) throw std::runtime_error("unsupported summary format_version");
    run.B0 = s.at("B0").get<double>();
    run.initial_scale = s.at("initial_scale").get<double>();
    run.dt = s.at("dt").get<double>();
    run.steps = s.at("steps").get<int>();
    run.stability_violated = s.at("stability_violated").get<bool>();
    run.failure = s.at("failure").get<std::string>();
    run.warnings = s.at("warnings").get<std::vector<std::string>>();
    const fs::path snaps = dir / "snapshots";
    if (fs::is_directory(snaps)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(snaps))
            if (e.path().extension() == ".bin") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) run.snapshots.push_back(read_snapshot(f, run.grid));
    }
    return run;
}

int verify_directory(const fs::path& dir, nlohmann::json* report) {
    RunOutput run = load_run_directory(dir);
    Evaluation ev = evaluate_run(run);
    auto j = verification_json(ev);
    write_json(dir / "verification.json", j);
    if (report) *report = std::move(j);
    return ev.exit_code;
}

LembpReport lembp_from_csv(const fs::path& csv, double C0, double C1, double h, double T, double t1, double t2,
                           double t3) {
    TraceSeries s = read_traces_csv(csv);
    auto pick = [&](const char* a, const char* b) -> const std::vector<double>& {
        if (s.has(a)) return s.channel(a).values;
        if (s.has(b)) return s.channel(b).values;
        throw std::runtime_error(csv.string() + ": needs a '" + a + "' or '" + b + "' column");
    };
    const auto& y = pick("y", "tilted_norm2");
    const auto& N = pick("N", "N_t");
    LembpInput in;
    // Tilted channels stop at the weight horizon.
    for (std::size_t i = 0; i < s.size() && s.times[i] <= T + 1e-12; ++i) {
        in.times.push_back(s.times[i]);
        in.y.push_back(y[i]);
        in.N.push_back(N[i]);
        in.F1.push_back(s.has("F1") ? s.channel("F1").values[i] : C1 / h);
        in.F2.push_back(s.has("F2") ? s.channel("F2").values[i] : 2.0 * C1 / (h * h));
    }
    in.C0 = C0;
    in.C1 = C1;
    in.h = h;
    in.T = T;
    in.t1 = t1;
    in.t2 = t2;
    in.t3 = t3;
    return lembp_check(in);
}

nlohmann::json lembp_json(const LembpReport& r) {
    return {{"format_version", kFormatVersion},
            {"M", r.M},
            {"D", r.D},
            {"log_lhs", r.log_lhs},
            {"log_rhs", r.log_rhs},
            {"margin", r.margin},
            {"fd_error", r.fd_error},
            {"samples_checked", r.samples_checked},
            {"hypothesis_one_violations", r.hyp1_violations},
            {"hypothesis_two_violations", r.hyp2_violations},
            {"hypotheses_hold", r.hypotheses_hold()},
            {"pass", r.hypotheses_hold() && r.margin >= -r.fd_error}};
}

std::vector<SweepRow> sweep(const SimConfig& base, const std::vector<SweepAxis>& axes, const fs::path& out_dir,
                            int jobs) {
    std::vector<SimConfig> configs{base};
    for (const auto& axis : axes) {
        if (axis.values.empty()) throw std::invalid_argument("sweep axis " + axis.key + " has no values");
        std::vector<SimConfig> next;
        for (const auto& c : configs)
            for (const auto& v : axis.values) {
                SimConfig d = c;
                set_config_value(d, axis.key, v);
                next.push_back(d);
            }
        configs = std::move(next);
    }
    // Fail on a bad combination before anything is written.
    for (const auto& c : configs) c.validate();

    fs::create_directories(out_dir);
    std::vector<SweepRow> rows(configs.size());
    auto one = [&](std::size_t i) {
        char name[32];
        std::snprintf(name, sizeof name, "run_%03zu", i);
        SweepRow row;
        const auto& c = configs[i];
        row.run = name;
        row.d1 = c.d1;
        row.d2 = c.d2;
        row.k0 = c.catalyst.k0;
        row.x0 = c.catalyst.x0;
        row.r = c.catalyst.r;
        row.support = c.catalyst.kind == CatalystKind::constant ? "domain" : "ball";
        nlohmann::json summary;
        row.exit_code = simulate_to_directory(c, out_dir / name, &summary);
        const auto& fit = summary["decay_fit"];
        if (fit.contains("rate")) {
            row.fit_ok = true;
            row.beta_obs = fit["rate"].get<double>();
            row.r_squared = fit["r_squared"].get<double>();
        }
        return row;
    };
    const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
    for (std::size_t start = 0; start < configs.size(); start += width) {
        std::vector<std::future<SweepRow>> batch;
        for (std::size_t i = start; i < std::min(configs.size(), start + width); ++i)
            batch.push_back(std::async(std::launch::async, one, i));
        for (std::size_t k = 0; k < batch.size(); ++k) rows[start + k] = batch[k].get();
    }

    std::ofstream csv(out_dir / "comparison.csv");
    if (!csv) throw std::runtime_error("cannot write " + (out_dir / "comparison.csv").string());
    csv << "# format_version: " << kFormatVersion << '\n';
    csv << "run,d1,d2,k0,x0,r,support,beta_obs,r_squared,exit_code\n";
    for (const auto& r : rows)
        csv << r.run << ',' << fmt(r.d1) << ',' << fmt(r.d2) << ',' << fmt(r.k0) << ',' << fmt(r.x0) << ','
            << fmt(r.r) << ',' << r.support << ',' << (r.fit_ok ? fmt(r.beta_obs) : "") << ','
            << (r.fit_ok ? fmt(r.r_squared) : "") << ',' << r.exit_code << '\n';
    return rows;
}

}  // namespace degrd
