#include "degrd/trace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace degrd {

std::size_t TraceSeries::add_channel(std::string name, std::string definition, std::string reference) {
    if (has(name)) throw std::invalid_argument("duplicate channel " + name);
    channels.push_back({std::move(name), std::move(definition), std::move(reference), {}});
    return channels.size() - 1;
}

bool TraceSeries::has(const std::string& name) const {
    return std::any_of(channels.begin(), channels.end(), [&](const Channel& c) { return c.name == name; });
}

const Channel& TraceSeries::channel(const std::string& name) const {
    for (const auto& c : channels)
        if (c.name == name) return c;
    throw std::out_of_range("no channel named " + name);
}

Channel& TraceSeries::channel(const std::string& name) {
    return const_cast<Channel&>(static_cast<const TraceSeries&>(*this).channel(name));
}

void TraceSeries::check() const {
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw std::logic_error("trace times must increase strictly");
    for (const auto& c : channels)
        if (c.values.size() != times.size()) throw std::logic_error("channel " + c.name + " has the wrong length");
}

FitWindow default_fit_window(const TraceSeries& series, const std::string& name) {
    const auto& v = series.channel(name).values;
    if (series.times.empty()) throw std::invalid_argument("empty trace");
    const double t0 = series.times.front(), t1 = series.times.back();
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, x);
    double end = t1;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (series.times[i] <= t0 + 0.1 * (t1 - t0)) continue;
        if (!(v[i] > 1e-20 * peak)) {
            end = series.times[i - 1];
            break;
        }
    }
    return {t0 + 0.1 * (t1 - t0), end};
}

DecayFit fit_decay_rate(const TraceSeries& series, const std::string& name, std::optional<FitWindow> window) {
    const auto& v = series.channel(name).values;
    FitWindow w = window ? *window : default_fit_window(series, name);
    std::vector<double> ts, ls;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double t = series.times[i];
        if (t < w.t_begin - 1e-12 || t > w.t_end + 1e-12) continue;
        if (!(v[i] > 0)) throw std::domain_error("fit_decay_rate: channel " + name + " is not positive on the window");
        ts.push_back(t);
        ls.push_back(std::log(v[i]));
    }
    if (ts.size() < 10) throw std::invalid_argument("fit_decay_rate: fewer than 10 samples in the window");
    const double n = static_cast<double>(ts.size());
    double mt = 0, ml = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        mt += ts[i];
        ml += ls[i];
    }
    mt /= n;
    ml /= n;
    double stt = 0, stl = 0, sll = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        stt += (ts[i] - mt) * (ts[i] - mt);
        stl += (ts[i] - mt) * (ls[i] - ml);
        sll += (ls[i] - ml) * (ls[i] - ml);
    }
    DecayFit fit;
    double slope = stl / stt;
    fit.rate = -slope;
    fit.intercept = ml - slope * mt;
    fit.samples = static_cast<int>(ts.size());
    // A flat line is fitted exactly.
    fit.r_squared = sll > 1e-24 * n * (1.0 + ml * ml) ? stl * stl / (stt * sll) : 1.0;
    return fit;
}

}  // namespace degrd
