#include "pmstab/config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "pmstab/errors.hpp"

namespace pmstab {

const char* to_string(Experiment e) {
    switch (e) {
    case Experiment::spectrum: return "spectrum";
    case Experiment::resolvent: return "resolvent";
    case Experiment::evolve: return "evolve";
    case Experiment::decay_probe: return "decay-probe";
    case Experiment::symbol_scan: return "symbol-scan";
    case Experiment::ls_check: return "ls-check";
    case Experiment::gc_scan: return "gc-scan";
    case Experiment::all: return "all";
    }
    return "all";
}

Experiment experiment_from_string(const std::string& s) {
    for (Experiment e : {Experiment::spectrum, Experiment::resolvent, Experiment::evolve,
                         Experiment::decay_probe, Experiment::symbol_scan,
                         Experiment::ls_check, Experiment::gc_scan, Experiment::all})
        if (s == to_string(e)) return e;
    throw ConfigError("experiment", "unknown experiment '" + s + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "not a number: '" + value + "'");
    }
}

long long parse_integer(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "not an integer: '" + value + "'");
    }
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void RunConfig::validate() const {
    params.validate();
    geom.validate();
    if (n_annulus < 8) throw ConfigError("n_annulus", "need at least 8 radial nodes");
    if (n_disk < 8) throw ConfigError("n_disk", "need at least 8 radial nodes");
    if (k_max < 0) throw ConfigError("k_max", "must be nonnegative");
    if (!(lambda_min > 0.0)) throw ConfigError("lambda_min", "must be positive");
    if (!(lambda_max > lambda_min))
        throw ConfigError("lambda_max", "must exceed lambda_min");
    if (lambda_per_decade < 1) throw ConfigError("lambda_per_decade", "must be >= 1");
    if (scan_k_step < 1) throw ConfigError("scan_k_step", "must be >= 1");
    if (!(t_final > 0.0)) throw ConfigError("t_final", "must be positive");
    if (!(dt > 0.0)) throw ConfigError("dt", "must be positive");
    if (dt > t_final) throw ConfigError("dt", "must not exceed t_final");
    if (preset != "plate_bump" && preset != "membrane_bump" && preset != "thermal_spot" &&
        preset != "mixed")
        throw ConfigError("preset", "unknown preset '" + preset + "'");
    if (system != "full" && system != "membrane_dirichlet")
        throw ConfigError("system", "must be 'full' or 'membrane_dirichlet'");
    if (modes.empty()) throw ConfigError("modes", "need at least one mode");
    for (int k : modes)
        if (k < 0 || k > k_max)
            throw ConfigError("modes", "mode " + std::to_string(k) +
                                           " outside 0..k_max");
    if (symbol_density < 8) throw ConfigError("symbol_density", "must be >= 8");
    if (ls_grid < 2) throw ConfigError("ls_grid", "must be >= 2");
    if (out_dir.empty()) throw ConfigError("out_dir", "must not be empty");
}

std::string RunConfig::serialize() const {
    std::ostringstream os;
    os << "alpha = " << format_number(params.alpha) << "\n";
    os << "beta = " << format_number(params.beta) << "\n";
    os << "beta1 = " << format_number(params.beta1) << "\n";
    os << "beta2 = " << format_number(params.beta2) << "\n";
    os << "rho0 = " << format_number(params.rho0) << "\n";
    os << "rho1 = " << format_number(params.rho1) << "\n";
    os << "rho2 = " << format_number(params.rho2) << "\n";
    os << "sigma = " << format_number(params.sigma) << "\n";
    os << "m = " << format_number(params.m) << "\n";
    os << "kappa = " << format_number(params.kappa) << "\n";
    os << "mu = " << format_number(params.mu) << "\n";
    os << "r_in = " << format_number(geom.r_in) << "\n";
    os << "r_out = " << format_number(geom.r_out) << "\n";
    os << "n_annulus = " << n_annulus << "\n";
    os << "n_disk = " << n_disk << "\n";
    os << "k_max = " << k_max << "\n";
    os << "experiment = " << to_string(experiment) << "\n";
    os << "lambda_min = " << format_number(lambda_min) << "\n";
    os << "lambda_max = " << format_number(lambda_max) << "\n";
    os << "lambda_per_decade = " << lambda_per_decade << "\n";
    os << "scan_k_step = " << scan_k_step << "\n";
    os << "t_final = " << format_number(t_final) << "\n";
    os << "dt = " << format_number(dt) << "\n";
    os << "preset = " << preset << "\n";
    os << "modes = ";
    for (size_t i = 0; i < modes.size(); ++i) os << (i ? "," : "") << modes[i];
    os << "\n";
    os << "system = " << system << "\n";
    os << "symbol_density = " << symbol_density << "\n";
    os << "ls_grid = " << ls_grid << "\n";
    os << "gc_x0_x = " << format_number(gc_x0_x) << "\n";
    os << "gc_x0_y = " << format_number(gc_x0_y) << "\n";
    os << "out_dir = " << out_dir << "\n";
    os << "seed = " << seed << "\n";
    return os.str();
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, std::function<void(const std::string&)>> setters;
    auto num = [&](const char* key, double* target) {
        setters[key] = [key, target](const std::string& v) {
            *target = parse_number(key, v);
        };
    };
    auto integer = [&](const char* key, int* target) {
        setters[key] = [key, target](const std::string& v) {
            *target = static_cast<int>(parse_integer(key, v));
        };
    };
    num("alpha", &cfg.params.alpha);
    num("beta", &cfg.params.beta);
    num("beta1", &cfg.params.beta1);
    num("beta2", &cfg.params.beta2);
    num("rho0", &cfg.params.rho0);
    num("rho1", &cfg.params.rho1);
    num("rho2", &cfg.params.rho2);
    num("sigma", &cfg.params.sigma);
    num("m", &cfg.params.m);
    num("kappa", &cfg.params.kappa);
    num("mu", &cfg.params.mu);
    num("r_in", &cfg.geom.r_in);
    num("r_out", &cfg.geom.r_out);
    integer("n_annulus", &cfg.n_annulus);
    integer("n_disk", &cfg.n_disk);
    integer("k_max", &cfg.k_max);
    setters["experiment"] = [&cfg](const std::string& v) {
        cfg.experiment = experiment_from_string(v);
    };
    num("lambda_min", &cfg.lambda_min);
    num("lambda_max", &cfg.lambda_max);
    integer("lambda_per_decade", &cfg.lambda_per_decade);
    integer("scan_k_step", &cfg.scan_k_step);
    num("t_final", &cfg.t_final);
    num("dt", &cfg.dt);
    setters["preset"] = [&cfg](const std::string& v) { cfg.preset = v; };
    setters["modes"] = [&cfg](const std::string& v) {
        cfg.modes.clear();
        std::stringstream ss(v);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (!item.empty())
                cfg.modes.push_back(static_cast<int>(parse_integer("modes", item)));
        }
        if (cfg.modes.empty()) throw ConfigError("modes", "empty mode list");
    };
    setters["system"] = [&cfg](const std::string& v) { cfg.system = v; };
    integer("symbol_density", &cfg.symbol_density);
    integer("ls_grid", &cfg.ls_grid);
    num("gc_x0_x", &cfg.gc_x0_x);
    num("gc_x0_y", &cfg.gc_x0_y);
    setters["out_dir"] = [&cfg](const std::string& v) { cfg.out_dir = v; };
    setters["seed"] = [&cfg](const std::string& v) {
        try {
            cfg.seed = std::stoull(v);
        } catch (const std::exception&) {
            throw ConfigError("seed", "not an unsigned integer: '" + v + "'");
        }
    };

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno),
                              "expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ConfigError(key, "unknown key (line " + std::to_string(lineno) + ")");
        it->second(value);
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace pmstab
