#include "shelab/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace shelab {

namespace {
std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}
} // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config c;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": key outside of any [section]");
        const std::string full = section + "." + key;
        if (c.kv_.count(full))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key " + full);
        c.kv_[full] = value;
    }
    return c;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

std::string Config::get_str(const std::string& key) const {
    const auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
}

std::string Config::get_str(const std::string& key, const std::string& fallback) const {
    const auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

double Config::get_num(const std::string& key) const {
    const std::string raw = get_str(key);
    char* end = nullptr;
    const double v = std::strtod(raw.c_str(), &end);
    if (end == raw.c_str() || *end != '\0')
        throw ConfigError("config key " + key + " is not a number: '" + raw + "'");
    return v;
}

double Config::get_num(const std::string& key, double fallback) const {
    return has(key) ? get_num(key) : fallback;
}

long long Config::get_int(const std::string& key) const {
    const std::string raw = get_str(key);
    char* end = nullptr;
    const long long v = std::strtoll(raw.c_str(), &end, 10);
    if (end == raw.c_str() || *end != '\0')
        throw ConfigError("config key " + key + " is not an integer: '" + raw + "'");
    return v;
}

long long Config::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string raw = get_str(key);
    if (raw == "true" || raw == "1" || raw == "yes") return true;
    if (raw == "false" || raw == "0" || raw == "no") return false;
    throw ConfigError("config key " + key + " is not a boolean: '" + raw + "'");
}

std::vector<double> Config::get_num_list(const std::string& key,
                                         const std::vector<double>& fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    std::istringstream in(get_str(key));
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw ConfigError("config key " + key + " has a non-numeric list item: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("config key " + key + " is an empty list");
    return out;
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [k, v] : kv_) {
        out += k;
        out += " = ";
        out += v;
        out += "\n";
    }
    return out;
}

std::string Config::hash() const { return hex64(fnv1a64(canonical())); }

void Config::validate_keys(const std::vector<std::string>& known) const {
    for (const auto& [k, v] : kv_) {
        if (std::find(known.begin(), known.end(), k) == known.end())
            throw ConfigError("unknown config key: " + k);
    }
}

const std::vector<ConfigKeyDoc>& config_schema() {
    static const std::vector<ConfigKeyDoc> schema = {
        {"scenario.name", "string", "scenario label recorded in outputs"},
        {"grid.dim", "int", "spatial dimension, 1 or 2"},
        {"grid.half_width", "number", "domain half width L; box is [-L, L]^dim"},
        {"grid.points", "int", "odd node count per axis"},
        {"time.steps", "int", "uniform time steps on [0,1]"},
        {"time.checkpoints", "int", "number of uniform checkpoints (including endpoints)"},
        {"solver.theta", "number", "implicitness of the Laplacian, default 0.5"},
        {"initial.kind", "string", "initial datum family: gaussian | zero"},
        {"initial.beta", "number", "gaussian width: u0 = exp(-|x|^2/beta^2)"},
        {"initial.amp", "number", "initial datum amplitude, default 1"},
        {"coefficients.potential", "string", "zero | cos | bump"},
        {"coefficients.potential_amp", "number", "potential amplitude"},
        {"coefficients.potential_width", "number", "bump support radius"},
        {"coefficients.noise", "string", "zero | decay | time_linear"},
        {"coefficients.noise_amp", "number", "noise amplitude"},
        {"coefficients.noise_eps", "number", "decay exponent of the noise family"},
        {"coefficients.noise_fade_lo", "number", "cutoff fade start radius"},
        {"coefficients.noise_fade_hi", "number", "cutoff fade end radius"},
        {"ensemble.paths", "int", "Monte Carlo path count"},
        {"ensemble.master_seed", "int", "seed ladder master"},
        {"ensemble.threads", "int", "worker threads, 0 = hardware"},
        {"weights.gamma", "number", "quadratic weight level for the checks"},
        {"weights.assumption_eps", "number", "epsilon used by the assumption checks"},
        {"weights.allow_boundary_mass", "bool",
         "skip the boundary-integrand guard at config load"},
        {"checks.tolerance_scale", "number", "global multiplier on verdict tolerances"},
        {"energy.tolerance", "number", "relative slack for the exact-weight energy verdict"},
        {"appell.gamma", "number", "gamma of the conformal change (beta = 1 + 4 gamma)"},
        {"appell.identity_times", "list", "y-side times for the norm identity check"},
        {"appell.bookkeeping_delta", "number", "delta of the endpoint bookkeeping check"},
        {"appell.bookkeeping_sigma", "number", "gaussian width of the synthetic endpoint data"},
        {"translated.mu", "number", "moving-weight strength, 1/(2(1-eps)) < mu < gamma"},
        {"translated.eps", "number", "localization parameter of the moving-weight argument"},
        {"translated.R", "list", "translation scales for the convexity defect check"},
        {"sweep.R", "list", "translation scales for the uniqueness sweep"},
        {"interior.a", "number", "mollifier exponent parameter"},
        {"interior.eps", "number", "interior time cut"},
        {"interior.mesh", "int", "radial mesh size of the mollified weight"},
        {"hardy.beta", "list", "gaussian widths of the hardy lattice"},
        {"hardy.delta", "list", "weight levels of the hardy lattice"},
        {"hardy.L", "number", "base half width of the hardy truncation"},
        {"hardy.points", "int", "points per axis of the hardy grids"},
        {"run.checks", "list-string", "check ids executed by the report subcommand"},
    };
    return schema;
}

std::vector<std::string> config_known_keys() {
    std::vector<std::string> keys;
    for (const auto& d : config_schema()) keys.push_back(d.key);
    return keys;
}

} // namespace shelab
