#include "degrd/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace degrd {

const Tolerances& tolerances() {
    static const Tolerances t;
    return t;
}

bool AuditReport::pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const AuditEntry& e) { return e.pass; });
}

std::vector<std::string> AuditReport::failed() const {
    std::vector<std::string> ids;
    for (const auto& e : entries)
        if (!e.pass) ids.push_back(e.invariant_id);
    return ids;
}

nlohmann::json AuditReport::to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : entries) {
        nlohmann::json j;
        j["invariant_id"] = e.invariant_id;
        j["reference"] = e.reference;
        j["pass"] = e.pass;
        j["margin"] = ext_to_json(e.margin);
        j["tolerance"] = e.tolerance;
        if (!e.detail.empty()) j["detail"] = e.detail;
        arr.push_back(std::move(j));
    }
    return {{"pass", pass()}, {"entries", std::move(arr)}};
}

RunFacts facts_of(const RunOutput& run) {
    RunFacts f;
    f.B0 = run.B0;
    f.dt = run.dt;
    f.spacing = run.grid ? run.grid->spacing : 0.0;
    f.t_end = run.config.t_end;
    f.stability_violated = run.stability_violated;
    f.failure = run.failure;
    return f;
}

namespace {

AuditEntry entry(std::string id, std::string ref, ExtReal margin, double tol, std::string detail = "") {
    AuditEntry e;
    e.invariant_id = std::move(id);
    e.reference = std::move(ref);
    e.margin = margin;
    e.tolerance = tol;
    e.pass = margin >= ExtReal::from_double(-tol);
    e.detail = std::move(detail);
    return e;
}

AuditEntry entry(std::string id, std::string ref, double margin, double tol, std::string detail = "") {
    if (std::isnan(margin)) {
        auto e = entry(std::move(id), std::move(ref), ExtReal::zero(), tol, std::move(detail));
        e.pass = false;
        e.detail += e.detail.empty() ? "margin is not a number" : "; margin is not a number";
        return e;
    }
    return entry(std::move(id), std::move(ref), ExtReal::from_double(margin), tol, std::move(detail));
}

std::string at_time(const char* what, double t) {
    std::ostringstream os;
    os.precision(6);
    os << what << " at t = " << t;
    return os.str();
}

// Index of the sample at time t, or -1.
long sample_at(const std::vector<double>& times, double t) {
    auto it = std::lower_bound(times.begin(), times.end(), t - 1e-9);
    if (it == times.end() || std::fabs(*it - t) > 1e-9) return -1;
    return it - times.begin();
}

std::string count_detail(const std::vector<double>& times) {
    if (times.empty()) return "";
    std::ostringstream os;
    os << times.size() << " violation(s), first at t = " << times.front();
    return os.str();
}

}  // namespace

AuditReport audit(const TraceSeries& series, const RunFacts& facts, const ConstantLedger* ledger) {
    const Tolerances& tol = tolerances();
    AuditReport rep;
    auto& out = rep.entries;

    out.push_back(entry("run_completed", "run reached t_end", facts.failure.empty() ? 0.0 : -1.0, 0.0, facts.failure));
    out.push_back(entry("stability_bound", "dt within the reaction step bound", facts.stability_violated ? -1.0 : 0.0,
                        0.0, facts.stability_violated ? "dt exceeds the reaction stability bound" : ""));
    const bool lost = facts.failure.rfind("positivity lost", 0) == 0;
    out.push_back(entry("positivity", "a and b stay nonnegative", lost ? -1.0 : 0.0, 0.0, lost ? facts.failure : ""));

    const auto n = series.size();
    if (n == 0) {
        out.push_back(entry("series_nonempty", "run recorded samples", -1.0, 0.0));
        return rep;
    }
    const auto& t = series.times;
    const auto& mass = series.channel("mass").values;
    const auto& y = series.channel("l2_dist").values;
    const auto& l3 = series.channel("l3_sum").values;
    const auto& minab = series.channel("min_ab").values;
    const auto& res = series.channel("energy_residual").values;
    const auto& shift = series.channel("mean_shift").values;

    {
        double worst = 0;
        std::size_t at = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (!(std::fabs(mass[i] - 2.0) <= worst)) worst = std::fabs(mass[i] - 2.0), at = i;
        out.push_back(entry("mass", "integral of a + b stays 2", -worst, tol.mass, at_time("largest deviation", t[at])));
    }
    {
        double margin = 0, lowest = y[0];
        std::size_t at = 0;
        for (std::size_t i = 1; i < n; ++i) {
            double m = lowest - y[i];
            if (i == 1 || !(m >= margin)) margin = m, at = i;
            lowest = std::min(lowest, y[i]);
        }
        out.push_back(entry("l2_monotone", "L2 distance nonincreasing", n > 1 ? margin : 0.0, tol.l2_monotone,
                            n > 1 ? at_time("smallest decrease", t[at]) : ""));
    }
    {
        double peak = *std::max_element(l3.begin(), l3.end());
        bool nan = std::any_of(l3.begin(), l3.end(), [](double v) { return std::isnan(v); });
        out.push_back(entry("l3_bound", "integral of a^3 + b^3 stays below its initial value",
                            nan ? std::nan("") : l3[0] - peak, tol.l3_monotone));
    }
    {
        double low = std::numeric_limits<double>::infinity();
        std::size_t at = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (!(minab[i] >= low)) low = minab[i], at = i;
        out.push_back(entry("minimum_principle", "min(a, b) >= B0", low - facts.B0, tol.minimum_principle,
                            at_time("lowest minimum", t[at])));
    }
    {
        double worst = 0;
        for (double r : res)
            if (!(std::fabs(r) <= worst)) worst = std::fabs(r);
        const double scale = facts.dt * facts.dt + facts.spacing * facts.spacing;
        std::ostringstream os;
        os << "largest per-step residual " << worst << ", dt^2 + dx^2 = " << scale;
        out.push_back(entry("energy_residual", "discrete energy identity", -worst, tol.energy_residual_coeff * scale,
                            os.str()));
    }
    {
        double worst = 0;
        for (double s : shift)
            if (!(std::fabs(s) <= worst)) worst = std::fabs(s);
        out.push_back(entry("mean_shift", "integral of u1 + u2 stays zero", -worst, tol.mean_shift));
    }

    if (!ledger) return rep;
    const ConstantLedger& L = *ledger;
    const ExtReal abs_log_theta = L.abs_log_theta();

    // y(t) <= gamma e^{-beta t} y(0) with ln gamma = |ln theta|, beta = |ln theta| / 2.
    {
        ExtReal margin = ExtReal::zero();
        std::string detail;
        bool first = true;
        if (y[0] > 0) {
            for (std::size_t i = 0; i < n; ++i) {
                ExtReal m = ExtReal::from_double(std::log(y[0]) - std::log(y[i])) +
                            abs_log_theta * ExtReal::from_double(1.0 - t[i] / 2.0);
                if (first || m < margin) margin = m, detail = at_time("smallest log margin", t[i]), first = false;
            }
        }
        out.push_back(entry("decay_certificate", "exponential decay with the ledger rate", margin, tol.decay_log, detail));
    }
    // y(2m + 2) <= theta y(2m).
    {
        ExtReal margin = ExtReal::zero();
        std::string detail;
        int steps = 0;
        for (int m = 0; 2.0 * (m + 1) <= t.back() + 1e-9; ++m) {
            long i0 = sample_at(t, 2.0 * m), i1 = sample_at(t, 2.0 * (m + 1));
            if (i0 < 0 || i1 < 0) continue;
            ++steps;
            if (y[i0] == 0 && y[i1] == 0) continue;
            ExtReal mm = ExtReal::from_double(std::log(y[i0]) - std::log(y[i1])) - abs_log_theta;
            if (steps == 1 || mm < margin) margin = mm, detail = at_time("tightest step", 2.0 * m);
        }
        if (steps == 0) detail = "run shorter than one contraction step";
        out.push_back(entry("theta_contraction", "two-step contraction by theta", margin, tol.decay_log, detail));
    }
    // Fitted rate against the ledger rate; needs a decaying l2 channel.
    {
        // theta < 1 strictly and beta > 0: both logs must be actual numbers.
        const bool theta_ok = !std::isnan(L.log_abs_log_theta.log_abs()) && !std::isnan(L.log_beta.log_abs());
        if (y[0] > 0) {
            try {
                DecayFit fit = fit_decay_rate(series, "l2_dist");
                ExtReal margin = fit.rate > 0 ? ExtReal::from_double(std::log(fit.rate)) - L.log_beta
                                              : ExtReal::from_double(-1.0);
                std::ostringstream os;
                os << "beta_obs = " << fit.rate << ", ledger beta = " << L.beta().str(4);
                auto e = entry("beta_obs_vs_ledger", "fitted rate dominates the ledger rate", margin, 0.0, os.str());
                e.pass = e.pass && theta_ok && fit.rate > 0;
                out.push_back(e);
            } catch (const std::exception& ex) {
                auto e = entry("beta_obs_vs_ledger", "fitted rate dominates the ledger rate", -1.0, 0.0, ex.what());
                out.push_back(e);
            }
        } else {
            out.push_back(entry("beta_obs_vs_ledger", "fitted rate dominates the ledger rate", 0.0, 0.0,
                                "zero initial distance"));
        }
    }
    // 2 |u|^2 on the ball <= 4 beta1 (dissipation of the energy identity).
    {
        const auto& ball = series.channel("l2_ball").values;
        const auto& ga = series.channel("dissipation_grad_a").values;
        const auto& gb = series.channel("dissipation_grad_b").values;
        const auto& dr = series.channel("dissipation_reaction").values;
        double margin = 0;
        std::string detail;
        for (std::size_t i = 0; i < n; ++i) {
            const double rhs = 4.0 * L.beta1 * (ga[i] + gb[i] + dr[i]);
            const double lhs = 2.0 * ball[i];
            if (rhs == 0 && lhs == 0) continue;
            const double m = (rhs - lhs) / std::max(rhs, lhs);
            if (detail.empty() || !(m >= margin)) margin = m, detail = at_time("tightest relative margin", t[i]);
        }
        out.push_back(entry("beta1_chain", "ball norm controlled by the dissipation", margin, tol.beta1_chain, detail));
    }
    return rep;
}

void audit_log_convexity(AuditReport& report, const RunOutput& run, const FrequencyTrace& trace,
                         const ConstantLedger& ledger) {
    const Tolerances& tol = tolerances();
    auto& out = report.entries;
    auto violations = [&](const char* id, const char* ref, const std::vector<double>& v) {
        out.push_back(entry(id, ref, -static_cast<double>(v.size()), 0.0, count_detail(v)));
    };
    violations("tilted_nonnegative_form", "tilted dissipation form is nonnegative", trace.negative_Sff);
    violations("tilted_source_bound", "source norm bounded by C1 (norm + form)", trace.prop2_violations);
    violations("tilted_two_sided_bound", "two-sided bound on the tilted energy balance", trace.two_sided_violations);
    violations("frequency_growth", "differential inequality for the frequency", trace.growth_violations);

    double energy = 0, agreement = 0;
    double energy_t = 0, agreement_t = 0;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const double r = trace.energy_residual[i];
        // One-sided stencils near the ends have no usable error estimate.
        const bool interior = i >= 2 && i + 2 < trace.times.size();
        if (interior && std::isfinite(r) && std::isfinite(trace.dnorm2.error[i])) {
            const double scale = std::fabs(trace.Sff[i]) + std::fabs(trace.F_dot_f[i]);
            const double allowed = 0.5 * trace.dnorm2.error[i] + tol.tilted_energy * scale;
            const double m = scale > 0 ? (allowed - std::fabs(r)) / scale : 0.0;
            if (m < energy) energy = m, energy_t = trace.times[i];
        }
        const double size = std::fabs(trace.Sff[i]) + trace.norm2[i];
        if (size > kNormFloor) {
            const double m = tol.sff_agreement - std::fabs(trace.Sff[i] - trace.Sff_direct[i]) / size;
            if (m < agreement) agreement = m, agreement_t = trace.times[i];
        }
    }
    out.push_back(entry("tilted_energy_identity", "tilted energy balance within differencing error", energy, 0.0,
                        energy < 0 ? at_time("worst sample", energy_t) : ""));
    out.push_back(entry("tilted_form_agreement", "two assemblies of the tilted form agree", agreement, 0.0,
                        agreement < 0 ? at_time("worst sample", agreement_t) : ""));

    // Needs snapshots at 0, T, T - ell h and T - 2 ell h.
    try {
        auto step = interpolation_step_check(run, ledger);
        for (const auto& c : step.checks) {
            AuditEntry e = entry(c.id, c.description, c.margin, c.tolerance);
            e.pass = c.pass;
            out.push_back(e);
        }
    } catch (const std::exception& ex) {
        out.push_back(entry("interpolation_step", "final interpolation step", -1.0, 0.0, ex.what()));
    }
}

}  // namespace degrd
