#pragma once

#include <optional>
#include <string>
#include <vector>

namespace degrd {

struct Channel {
    std::string name;
    std::string definition;
    std::string reference;
    std::vector<double> values;
};

// Scalar diagnostics sampled at strictly increasing times.
class TraceSeries {
public:
    std::vector<double> times;
    std::vector<Channel> channels;

    // Returns the channel index.
    std::size_t add_channel(std::string name, std::string definition, std::string reference = "");
    bool has(const std::string& name) const;
    const Channel& channel(const std::string& name) const;
    Channel& channel(const std::string& name);
    std::size_t size() const { return times.size(); }
    // Throws if times are not increasing or a channel length differs.
    void check() const;
};

struct FitWindow {
    double t_begin;
    double t_end;
};

struct DecayFit {
    double rate = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
    int samples = 0;
};

// Skips the first 10% of the run and stops once the channel drops below 1e-20 of its peak
// (round-off floor of fully decayed runs).
FitWindow default_fit_window(const TraceSeries& series, const std::string& channel);

// Least squares of log(channel) against t; rate is the negated slope.
DecayFit fit_decay_rate(const TraceSeries& series, const std::string& channel,
                        std::optional<FitWindow> window = std::nullopt);

}  // namespace degrd
