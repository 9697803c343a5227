#include "bcpnn/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "bcpnn/errors.hpp"

namespace bcpnn {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char shorter[40];
        std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
        if (std::strtod(shorter, nullptr) == v) return shorter;
    }
    return buf;
}

double parse_double(const std::string& s, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        throw ConfigError("bad numeric value '" + s + "' for key '" + key + "'");
    return v;
}

uint64_t parse_uint(const std::string& s, const std::string& key, uint64_t max) {
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0' || errno == ERANGE || v > max)
        throw ConfigError("bad integer value '" + s + "' for key '" + key + "'");
    return v;
}

struct Key {
    const char* name;
    std::function<std::string(const TrainConfig&)> get;
    std::function<void(TrainConfig&, const std::string&)> set;
};

#define DOUBLE_KEY(field)                                                      \
    Key{#field, [](const TrainConfig& c) { return format_double(c.field); },   \
        [](TrainConfig& c, const std::string& v) { c.field = parse_double(v, #field); }}
#define U32_KEY(field)                                                         \
    Key{#field, [](const TrainConfig& c) { return std::to_string(c.field); },  \
        [](TrainConfig& c, const std::string& v) {                             \
            c.field = uint32_t(parse_uint(v, #field, 0xffffffffu));            \
        }}

const std::vector<Key>& key_table() {
    static const std::vector<Key> keys = {
        DOUBLE_KEY(dt),
        DOUBLE_KEY(gamma),
        DOUBLE_KEY(k_half),
        DOUBLE_KEY(tau_p_mult),
        DOUBLE_KEY(tau_k_mult),
        DOUBLE_KEY(p_mask),
        DOUBLE_KEY(eps_prob),
        U32_KEY(n_train),
        U32_KEY(n_val),
        U32_KEY(n_epochs_unsup),
        U32_KEY(n_epochs_sup),
        U32_KEY(hidden_hcs),
        U32_KEY(hidden_mcs),
        U32_KEY(n_flips),
        U32_KEY(flip_interval),
        Key{"seed", [](const TrainConfig& c) { return std::to_string(c.seed); },
            [](TrainConfig& c, const std::string& v) {
                c.seed = parse_uint(v, "seed", ~uint64_t{0});
            }},
        Key{"classifier_mode", [](const TrainConfig& c) { return to_string(c.classifier_mode); },
            [](TrainConfig& c, const std::string& v) {
                c.classifier_mode = classifier_mode_from_string(v);
            }},
    };
    return keys;
}

#undef DOUBLE_KEY
#undef U32_KEY

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void assign(TrainConfig& cfg, const std::string& key, const std::string& value,
            const std::string& where) {
    for (const Key& k : key_table()) {
        if (key == k.name) {
            k.set(cfg, value);
            return;
        }
    }
    throw ConfigError(where + ": unknown config key '" + key + "'");
}

} // namespace

TrainConfig parse_config_text(const std::string& text, const std::string& origin) {
    TrainConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        assign(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
               origin + ":" + std::to_string(lineno));
    }
    return cfg;
}

TrainConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void apply_override(TrainConfig& cfg, const std::string& assignment) {
    size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("--set expects key=value, got '" + assignment + "'");
    assign(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), "--set");
}

void validate(const TrainConfig& cfg) {
    if (cfg.dt <= 0) throw ConfigError("dt must be > 0");
    if (cfg.gamma < 0) throw ConfigError("gamma must be >= 0");
    if (cfg.eps_prob <= 0) throw ConfigError("eps_prob must be > 0");
    if (cfg.p_mask <= 0 || cfg.p_mask > 1) throw ConfigError("p_mask must be in (0, 1]");
    if (cfg.hidden_hcs < 1) throw ConfigError("hidden_hcs must be >= 1");
    if (cfg.hidden_mcs < 2) throw ConfigError("hidden_mcs must be >= 2");
    if (cfg.flip_interval < 1) throw ConfigError("flip_interval must be >= 1");
    if (cfg.n_train < 1) throw ConfigError("n_train must be >= 1");

    // Euler stability: k_p dt / tau_p <= 1 and dt / tau_k <= 1 with k_p = 1.
    if (cfg.n_epochs_unsup > 0) {
        if (cfg.dt / cfg.tau_p_unsup() > 1.0)
            throw ConfigError("unstable trace step: dt/tau_p = " +
                              std::to_string(cfg.dt / cfg.tau_p_unsup()) + " > 1");
        if (cfg.dt / cfg.tau_k_unsup() > 1.0)
            throw ConfigError("unstable bias gain step: dt/tau_k = " +
                              std::to_string(cfg.dt / cfg.tau_k_unsup()) + " > 1");
    }
    if (cfg.n_epochs_sup > 0 && cfg.dt / cfg.tau_p_sup() > 1.0)
        throw ConfigError("unstable classifier trace step: dt/tau_p = " +
                          std::to_string(cfg.dt / cfg.tau_p_sup()) + " > 1");
}

std::string serialize(const TrainConfig& cfg) {
    std::string out;
    for (const Key& k : key_table()) {
        out += k.name;
        out += " = ";
        out += k.get(cfg);
        out += "\n";
    }
    return out;
}

std::vector<std::string> deviations_from_defaults(const TrainConfig& cfg) {
    const TrainConfig defaults;
    std::vector<std::string> out;
    for (const Key& k : key_table()) {
        std::string have = k.get(cfg), want = k.get(defaults);
        if (have != want && std::string(k.name) != "seed")
            out.push_back(std::string(k.name) + "=" + have + " (default " + want + ")");
    }
    return out;
}

} // namespace bcpnn
