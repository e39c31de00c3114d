#include "fracschrod/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fracschrod {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

template <class T, class F>
std::vector<T> parse_list(const std::string& key, const std::string& v, F&& one) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(one(key, item));
    }
    if (out.empty()) throw ConfigError("config: empty list for '" + key + "'");
    return out;
}

}  // namespace

std::string to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::example1: return "example1";
        case ProblemKind::example2: return "example2";
        case ProblemKind::custom: return "custom";
    }
    return "?";
}

ProblemKind problem_kind_from_string(const std::string& s) {
    if (s == "example1") return ProblemKind::example1;
    if (s == "example2") return ProblemKind::example2;
    if (s == "custom") return ProblemKind::custom;
    throw ConfigError("config: unknown problem kind '" + s + "'");
}

GridSpec RunConfig::grid() const {
    GridSpec g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.y_min = y_min;
    g.y_max = y_max;
    g.mx = mx;
    g.my = my;
    g.alpha = alpha;
    g.tau = tau;
    g.t_final = t_final;
    return g;
}

void RunConfig::validate() const {
    if (problem == ProblemKind::example1 && !(x_min == 0.0 && x_max == 2.0 && y_min == 0.0 && y_max == 2.0)) {
        throw ConfigError("config: example1 fixes the domain to [0,2]x[0,2]");
    }
    if (problem == ProblemKind::example2 &&
        !(x_min == -5.0 && x_max == 5.0 && y_min == -5.0 && y_max == 5.0)) {
        throw ConfigError("config: example2 fixes the domain to [-5,5]x[-5,5]");
    }
    if (mx != 0 || my != 0) {
        try {
            grid().validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config: ") + e.what());
        }
    }
    if (!(solver.tol > 0.0)) throw ConfigError("config: solver tol must be positive");
    if (solver.max_iter < 1) throw ConfigError("config: solver max_iter must be >= 1");
    if (diag_stride < 1) throw ConfigError("config: diag_stride must be >= 1");
    if (threads < 1) throw ConfigError("config: threads must be >= 1");
    for (int level : levels) {
        if (level < 2) throw ConfigError("config: convergence levels must be >= 2");
    }
    for (double a : alphas) {
        if (!(a > 1.0) || !(a > 1.0 && a <= 2.0)) {
            throw ConfigError("config: alphas must lie in (1, 2]");
        }
    }
    if (!(order_band_lo < order_band_hi)) {
        throw ConfigError("config: order band must satisfy lo < hi");
    }
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());

    RunConfig cfg;
    bool domain_set = false;
    std::string section;
    std::string raw;
    int lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config: malformed section at line " + std::to_string(lineno));
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section != "problem" && section != "grid" && section != "solver" &&
                section != "output" && section != "run") {
                throw ConfigError("config: unknown section '" + section + "'");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: expected key=value at line " + std::to_string(lineno));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string qual = section + "." + key;

        if (qual == "problem.kind") {
            cfg.problem = problem_kind_from_string(value);
        } else if (qual == "problem.alpha") {
            cfg.alpha = parse_double(qual, value);
        } else if (qual == "problem.x_min" || qual == "problem.x_max" || qual == "problem.y_min" ||
                   qual == "problem.y_max") {
            domain_set = true;
            const double d = parse_double(qual, value);
            if (key == "x_min") cfg.x_min = d;
            else if (key == "x_max") cfg.x_max = d;
            else if (key == "y_min") cfg.y_min = d;
            else cfg.y_max = d;
        } else if (qual == "grid.mx") {
            cfg.mx = static_cast<int>(parse_int(qual, value));
        } else if (qual == "grid.my") {
            cfg.my = static_cast<int>(parse_int(qual, value));
        } else if (qual == "grid.tau") {
            cfg.tau = parse_double(qual, value);
        } else if (qual == "grid.t_final") {
            cfg.t_final = parse_double(qual, value);
        } else if (qual == "solver.tol") {
            cfg.solver.tol = parse_double(qual, value);
        } else if (qual == "solver.max_iter") {
            cfg.solver.max_iter = static_cast<int>(parse_int(qual, value));
        } else if (qual == "solver.precond") {
            cfg.solver.use_preconditioner = parse_bool(qual, value);
        } else if (qual == "solver.dense_cap") {
            cfg.solver.dense_cap = static_cast<std::size_t>(parse_int(qual, value));
        } else if (qual == "output.dir") {
            cfg.out_dir = value;
        } else if (qual == "output.snapshot_times") {
            cfg.snapshot_times = parse_list<double>(qual, value, parse_double);
        } else if (qual == "output.diag_stride") {
            cfg.diag_stride = static_cast<int>(parse_int(qual, value));
        } else if (qual == "run.seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_int(qual, value));
        } else if (qual == "run.threads") {
            cfg.threads = static_cast<int>(parse_int(qual, value));
        } else if (qual == "run.levels") {
            cfg.levels = parse_list<int>(qual, value, [](const std::string& k, const std::string& v) {
                return static_cast<int>(parse_int(k, v));
            });
        } else if (qual == "run.alphas") {
            cfg.alphas = parse_list<double>(qual, value, parse_double);
        } else if (qual == "run.energy_drift_tol") {
            cfg.energy_drift_tol = parse_double(qual, value);
        } else if (qual == "run.order_band") {
            const auto band = parse_list<double>(qual, value, parse_double);
            if (band.size() != 2) throw ConfigError("config: order_band wants two values");
            cfg.order_band_lo = band[0];
            cfg.order_band_hi = band[1];
        } else {
            throw ConfigError("config: unknown key '" + qual + "' at line " + std::to_string(lineno));
        }
    }

    // Non-custom problems pin their own domain; explicit bounds are only
    // meaningful (and allowed) for kind = custom.
    if (cfg.problem == ProblemKind::example1) {
        if (domain_set) throw ConfigError("config: example1 does not accept domain bounds");
        cfg.x_min = cfg.y_min = 0.0;
        cfg.x_max = cfg.y_max = 2.0;
    } else if (cfg.problem == ProblemKind::example2) {
        if (domain_set) throw ConfigError("config: example2 does not accept domain bounds");
        cfg.x_min = cfg.y_min = -5.0;
        cfg.x_max = cfg.y_max = 5.0;
    }

    apply_env_overrides(cfg);
    cfg.validate();
    return cfg;
}

void apply_env_overrides(RunConfig& config) {
    if (const char* env = std::getenv("FRACSCHROD_DENSE_CAP")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) config.solver.dense_cap = static_cast<std::size_t>(v);
    }
}

nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["problem"] = to_string(c.problem);
    j["alpha"] = c.alpha;
    j["domain"] = {c.x_min, c.x_max, c.y_min, c.y_max};
    j["mx"] = c.mx;
    j["my"] = c.my;
    j["tau"] = c.tau;
    j["t_final"] = c.t_final;
    j["solver"] = {{"tol", c.solver.tol},
                   {"max_iter", c.solver.max_iter},
                   {"precond", c.solver.use_preconditioner},
                   {"dense_cap", c.solver.dense_cap}};
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    j["levels"] = c.levels;
    j["alphas"] = c.alphas;
    return j;
}

}  // namespace fracschrod
