#include "kac/experiments.hpp"

#include "kac/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace kac {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for '" + key + "': " + v);
    }
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
    std::int64_t x = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("config: bad integer for '" + key + "': " + v);
    return x;
}

std::vector<std::int64_t> parse_int_list(const std::string& key, const std::string& v) {
    std::vector<std::int64_t> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_int(key, item));
    }
    if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
    return out;
}

RescalingMode parse_mode(const std::string& v) {
    if (v == "none") return RescalingMode::NoRescale;
    if (v == "alpha") return RescalingMode::AlphaExact;
    if (v == "beta") return RescalingMode::BetaMeanField;
    throw ConfigError("config: mode must be none|alpha|beta, got '" + v + "'");
}

} // namespace

void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "lambda") cfg.params.lambda = parse_double(key, value);
    else if (key == "mu") cfg.params.mu = parse_double(key, value);
    else if (key == "E") cfg.params.E = parse_double(key, value);
    else if (key == "T") cfg.params.T = parse_double(key, value);
    else if (key == "mode") cfg.mode = parse_mode(value);
    else if (key == "N_list") cfg.N_list = parse_int_list(key, value);
    else if (key == "M_list") cfg.M_list = parse_int_list(key, value);
    else if (key == "horizon") cfg.horizon = parse_double(key, value);
    else if (key == "t_min") cfg.t_min = parse_double(key, value);
    else if (key == "replicas") cfg.replicas = static_cast<int>(parse_int(key, value));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "checkpoints") cfg.checkpoints = static_cast<int>(parse_int(key, value));
    else if (key == "grid_cells") cfg.grid_cells = static_cast<int>(parse_int(key, value));
    else if (key == "m_samples") cfg.m_samples = static_cast<int>(parse_int(key, value));
    else if (key == "events_target") cfg.events_target = parse_double(key, value);
    else if (key == "f0_variance_factor") cfg.f0_variance_factor = parse_double(key, value);
    else if (key == "m2_start_factor") cfg.m2_start_factor = parse_double(key, value);
    else if (key == "xi_max") cfg.xi_max = parse_double(key, value);
    else if (key == "n_xi") cfg.n_xi = static_cast<int>(parse_int(key, value));
    else if (key == "n_theta") cfg.n_theta = static_cast<int>(parse_int(key, value));
    else if (key == "n_steps") cfg.n_steps = static_cast<int>(parse_int(key, value));
    else if (key == "v_max") cfg.v_max = parse_double(key, value);
    else if (key == "n_v") cfg.n_v = static_cast<int>(parse_int(key, value));
    else if (key == "threshold") cfg.threshold = parse_double(key, value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "format") {
        if (value != "csv" && value != "json")
            throw ConfigError("config: format must be csv|json");
        cfg.format = value;
    } else {
        throw ConfigError("config: unknown key '" + key + "'");
    }
}

ExperimentConfig parse_config_file(const std::string& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at " + path + ":" +
                              std::to_string(lineno));
        apply_config_line(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    try {
        base.params.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (base.replicas < 1) throw ConfigError("config: replicas must be >= 1");
    if (base.horizon < 0.0) throw ConfigError("config: horizon must be >= 0");
    for (auto n : base.N_list)
        if (n < 2) throw ConfigError("config: every N must be >= 2");
    return base;
}

std::string config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["lambda"] = c.params.lambda;
    j["mu"] = c.params.mu;
    j["E"] = c.params.E;
    j["T"] = c.params.T;
    j["mode"] = to_string(c.mode);
    j["N_list"] = c.N_list;
    j["M_list"] = c.M_list;
    j["horizon"] = c.horizon;
    j["t_min"] = c.t_min;
    j["replicas"] = c.replicas;
    j["seed"] = c.seed;
    j["checkpoints"] = c.checkpoints;
    j["grid_cells"] = c.grid_cells;
    j["m_samples"] = c.m_samples;
    j["events_target"] = c.events_target;
    j["f0_variance_factor"] = c.f0_variance_factor;
    j["m2_start_factor"] = c.m2_start_factor;
    j["xi_max"] = c.xi_max;
    j["n_xi"] = c.n_xi;
    j["n_theta"] = c.n_theta;
    j["n_steps"] = c.n_steps;
    j["v_max"] = c.v_max;
    j["n_v"] = c.n_v;
    j["threshold"] = c.threshold;
    j["out"] = c.out_dir;
    j["format"] = c.format;
    return j.dump();
}

} // namespace kac
