#include "degrd/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace degrd {

ConfigError::ConfigError(const std::string& origin, int line_, std::string key_, const std::string& message)
    : std::runtime_error(origin + (line_ > 0 ? ":" + std::to_string(line_) : std::string()) +
                         (key_.empty() ? std::string() : " [" + key_ + "]") + ": " + message),
      line(line_),
      key(std::move(key_)) {}

namespace {

struct BadValue : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_num(const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size()) throw BadValue("expected a number, got '" + raw + "'");
    return v;
}

int to_int(const std::string& raw) {
    const std::string s = trim(raw);
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size()) throw BadValue("expected an integer, got '" + raw + "'");
    return v;
}

unsigned long long to_u64(const std::string& raw) {
    const std::string s = trim(raw);
    unsigned long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        throw BadValue("expected a nonnegative integer, got '" + raw + "'");
    return v;
}

bool to_bool(const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw BadValue("expected true or false, got '" + raw + "'");
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct ConfigField {
    const char* key;
    std::function<void(SimConfig&, const std::string&)> set;
    std::function<std::string(const SimConfig&)> get;
};

#define DEGRD_NUM(name, member) \
    ConfigField{name, [](SimConfig& c, const std::string& v) { c.member = to_num(v); }, [](const SimConfig& c) { return num(c.member); }}
#define DEGRD_INT(name, member) \
    ConfigField{name, [](SimConfig& c, const std::string& v) { c.member = to_int(v); }, [](const SimConfig& c) { return std::to_string(c.member); }}
#define DEGRD_BOOL(name, member)                                                  \
    ConfigField{name, [](SimConfig& c, const std::string& v) { c.member = to_bool(v); }, \
          [](const SimConfig& c) { return std::string(c.member ? "true" : "false"); }}

ConfigField profile_kind(const char* name, ProfileSpec SimConfig::*member) {
    return ConfigField{name,
                 [member](SimConfig& c, const std::string& v) {
                     try {
                         (c.*member).kind = parse_profile_kind(trim(v));
                     } catch (const std::invalid_argument& e) {
                         throw BadValue(e.what());
                     }
                 },
                 [member](const SimConfig& c) { return to_string((c.*member).kind); }};
}

const std::vector<ConfigField>& fields() {
    static const std::vector<ConfigField> f = {
        ConfigField{"domain.dim",
              [](SimConfig& c, const std::string& v) {
                  c.dim = to_int(v);
                  c.weight.dim = c.dim;
              },
              [](const SimConfig& c) { return std::to_string(c.dim); }},
        DEGRD_INT("grid.resolution", resolution),
        DEGRD_NUM("physics.d1", d1),
        DEGRD_NUM("physics.d2", d2),
        ConfigField{"catalyst.kind",
              [](SimConfig& c, const std::string& v) {
                  try {
                      c.catalyst.kind = parse_catalyst_kind(trim(v));
                  } catch (const std::invalid_argument& e) {
                      throw BadValue(e.what());
                  }
              },
              [](const SimConfig& c) { return to_string(c.catalyst.kind); }},
        DEGRD_NUM("catalyst.k0", catalyst.k0),
        DEGRD_NUM("catalyst.k_max", catalyst.k_max),
        DEGRD_NUM("catalyst.x0", catalyst.x0),
        DEGRD_NUM("catalyst.r", catalyst.r),
        DEGRD_NUM("catalyst.smoothness", catalyst.smoothness),
        DEGRD_NUM("catalyst.outer_radius", catalyst.outer_radius),
        DEGRD_NUM("catalyst.period", catalyst.period),
        profile_kind("initial.a_kind", &SimConfig::a0),
        DEGRD_NUM("initial.a_base", a0.base),
        DEGRD_NUM("initial.a_amplitude", a0.amplitude),
        DEGRD_INT("initial.a_mode", a0.mode),
        DEGRD_NUM("initial.a_center", a0.center),
        DEGRD_NUM("initial.a_width", a0.width),
        profile_kind("initial.b_kind", &SimConfig::b0),
        DEGRD_NUM("initial.b_base", b0.base),
        DEGRD_NUM("initial.b_amplitude", b0.amplitude),
        DEGRD_INT("initial.b_mode", b0.mode),
        DEGRD_NUM("initial.b_center", b0.center),
        DEGRD_NUM("initial.b_width", b0.width),
        DEGRD_NUM("stepper.dt", dt),
        DEGRD_NUM("stepper.t_end", t_end),
        DEGRD_NUM("stepper.snapshot_every", snapshot_every),
        DEGRD_BOOL("weight.log_convexity", log_convexity),
        DEGRD_NUM("weight.s", weight.s),
        DEGRD_NUM("weight.h", weight.h),
        DEGRD_NUM("weight.T", weight.T),
        DEGRD_NUM("weight.x0_norm", weight.x0_norm),
        DEGRD_NUM("weight.r", weight.r),
        DEGRD_BOOL("output.keep_snapshots", keep_snapshots),
        ConfigField{"output.seed", [](SimConfig& c, const std::string& v) { c.seed = to_u64(v); },
              [](const SimConfig& c) { return std::to_string(c.seed); }},
    };
    return f;
}

#undef DEGRD_NUM
#undef DEGRD_INT
#undef DEGRD_BOOL

const ConfigField* lookup(const std::string& key) {
    for (const auto& f : fields())
        if (key == f.key) return &f;
    return nullptr;
}

// Line of "section.key" (or of "[section]" when key is empty) in the source text, 0 if absent.
int line_of(const std::string& text, const std::string& section, const std::string& key) {
    std::istringstream in(text);
    std::string line, current;
    for (int n = 1; std::getline(in, line); ++n) {
        std::string t = trim(line);
        if (t.empty() || t[0] == ';' || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            current = trim(t.substr(1, t.size() - 2));
            if (key.empty() && current == section) return n;
            continue;
        }
        auto eq = t.find('=');
        if (!key.empty() && current == section && eq != std::string::npos && trim(t.substr(0, eq)) == key) return n;
    }
    return 0;
}

}  // namespace

void set_config_value(SimConfig& config, const std::string& key, const std::string& value) {
    const ConfigField* f = lookup(key);
    if (!f) throw ConfigError("<override>", 0, key, "unknown key");
    try {
        f->set(config, value);
    } catch (const BadValue& e) {
        throw ConfigError("<override>", 0, key, e.what());
    }
}

std::string get_config_value(const SimConfig& config, const std::string& key) {
    const ConfigField* f = lookup(key);
    if (!f) throw ConfigError("<query>", 0, key, "unknown key");
    return f->get(config);
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& f : fields()) keys.emplace_back(f.key);
    return keys;
}

SimConfig parse_config(const std::string& text, const std::string& origin) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(origin, static_cast<int>(e.line()), "", e.message());
    }

    static const std::set<std::string> sections = {"domain",  "grid",    "physics", "catalyst",
                                                   "initial", "stepper", "weight",  "output"};
    SimConfig c;
    bool weight_x0 = false, weight_r = false;
    for (const auto& [section, body] : tree) {
        if (!sections.count(section)) {
            throw ConfigError(origin, line_of(text, section, ""), section, "unknown section");
        }
        if (!body.data().empty()) throw ConfigError(origin, line_of(text, section, ""), section, "key outside a section");
        for (const auto& [key, leaf] : body) {
            const std::string dotted = section + "." + key;
            const int line = line_of(text, section, key);
            const ConfigField* f = lookup(dotted);
            if (!f) throw ConfigError(origin, line, dotted, "unknown key");
            try {
                f->set(c, leaf.data());
            } catch (const BadValue& e) {
                throw ConfigError(origin, line, dotted, e.what());
            }
            weight_x0 |= dotted == "weight.x0_norm";
            weight_r |= dotted == "weight.r";
        }
    }
    // The observation ball follows the catalyst bump unless given separately.
    if (!weight_x0) c.weight.x0_norm = c.catalyst.x0;
    if (!weight_r) c.weight.r = c.catalyst.r;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(origin, 0, "", std::string("invalid configuration: ") + e.what());
    }
    return c;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "", "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string to_ini(const SimConfig& config) {
    std::ostringstream os;
    std::string section;
    for (const auto& f : fields()) {
        std::string key = f.key;
        auto dot = key.find('.');
        std::string s = key.substr(0, dot);
        if (s != section) {
            if (!section.empty()) os << '\n';
            os << '[' << s << "]\n";
            section = s;
        }
        os << key.substr(dot + 1) << " = " << f.get(config) << '\n';
    }
    return os.str();
}

}  // namespace degrd
