#include "bosedyn/run_config.hpp"

#include <algorithm>
#include <fstream>

namespace bosedyn {

namespace {

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1, 0));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[a.size()][b.size()];
}

std::string nearest_key(const std::string& key, const nlohmann::json& schema) {
    std::string best;
    int best_d = 1 << 20;
    for (auto it = schema.begin(); it != schema.end(); ++it) {
        const int dd = edit_distance(key, it.key());
        if (dd < best_d) {
            best_d = dd;
            best = it.key();
        }
    }
    return best_d <= 3 ? best : std::string();
}

// strict merge of user values over defaults; rejects unknown keys
void merge_strict(nlohmann::json& base, const nlohmann::json& user, const std::string& path) {
    if (!user.is_object())
        throw std::invalid_argument("config: expected an object at '" + path + "'");
    for (auto it = user.begin(); it != user.end(); ++it) {
        if (!base.contains(it.key())) {
            const std::string hint = nearest_key(it.key(), base);
            throw std::invalid_argument("config: unknown key '" + path + it.key() + "'" +
                                        (hint.empty() ? "" : " (did you mean '" + hint + "'?)"));
        }
        nlohmann::json& slot = base[it.key()];
        if (slot.is_object() && it.value().is_object())
            merge_strict(slot, it.value(), path + it.key() + ".");
        else
            slot = it.value();
    }
}

void apply_override(nlohmann::json& base, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("config: override '" + spec + "' must be key=value");
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos <= path.size()) {
        const auto dot = path.find('.', pos);
        parts.push_back(path.substr(pos, dot == std::string::npos ? dot : dot - pos));
        if (dot == std::string::npos) break;
        pos = dot + 1;
    }
    nlohmann::json* slot = &base;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!slot->contains(parts[i])) {
            const std::string hint = nearest_key(parts[i], *slot);
            throw std::invalid_argument("config: unknown key '" + path + "'" +
                                        (hint.empty() ? "" : " (did you mean '" + hint + "'?)"));
        }
        slot = &(*slot)[parts[i]];
    }
    nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
    if (parsed.is_discarded()) parsed = value;  // plain string
    *slot = parsed;
}

nlohmann::json grid_defaults(int d) {
    return {{"d", d}, {"points", d == 2 ? 64 : 256}, {"box_length", 16.0}};
}

nlohmann::json potential_defaults() {
    return {{"name", "gaussian"}, {"amplitude", 0.5}, {"width", 0.8}};
}

nlohmann::json evolution_defaults() {
    return {{"t_final", 1.0}, {"dt", 1e-3}, {"sample_cadence", 0.01}, {"snapshot_cadence", 0.01}};
}

nlohmann::json initial_defaults() {
    return {{"width", 1.1}, {"phi0", "vacuum"}, {"squeeze", 0.2}};
}

}  // namespace

Command command_from_string(const std::string& s) {
    if (s == "hartree") return Command::hartree;
    if (s == "nls") return Command::nls;
    if (s == "bogoliubov") return Command::bogoliubov;
    if (s == "exact") return Command::exact;
    if (s == "sweep") return Command::sweep;
    if (s == "gn-constant") return Command::gn_constant;
    if (s == "check") return Command::check;
    throw std::invalid_argument("unknown command '" + s + "'");
}

std::string command_to_string(Command c) {
    switch (c) {
        case Command::hartree: return "hartree";
        case Command::nls: return "nls";
        case Command::bogoliubov: return "bogoliubov";
        case Command::exact: return "exact";
        case Command::sweep: return "sweep";
        case Command::gn_constant: return "gn-constant";
        case Command::check: return "check";
    }
    return "?";
}

nlohmann::json default_parameters(Command command) {
    nlohmann::json p;
    switch (command) {
        case Command::hartree:
        case Command::nls:
            p["grid"] = grid_defaults(1);
            p["potential"] = potential_defaults();
            p["evolution"] = evolution_defaults();
            p["initial"] = initial_defaults();
            p["scaling"] = {{"N", 16}, {"beta", 1.0}};
            break;
        case Command::bogoliubov:
            p["grid"] = grid_defaults(1);
            p["potential"] = potential_defaults();
            p["evolution"] = evolution_defaults();
            p["initial"] = initial_defaults();
            p["scaling"] = {{"N", 16}, {"beta", 1.0}};
            p["bogoliubov"] = {{"modes", 6}};
            break;
        case Command::exact:
            p["grid"] = {{"d", 1}, {"points", 8}, {"box_length", 2.0 * M_PI}};
            p["potential"] = potential_defaults();
            p["evolution"] = {{"t_final", 0.3}, {"dt", 1e-3}, {"sample_cadence", 0.01},
                              {"snapshot_cadence", 0.01}};
            p["initial"] = initial_defaults();
            p["scaling"] = {{"N", 6}, {"beta", 1.0}};
            p["exact"] = {{"m_trunc", -1}};
            break;
        case Command::sweep:
            p["grid"] = {{"d", 1}, {"points", 8}, {"box_length", 2.0 * M_PI}};
            p["potential"] = {{"name", "gaussian"}, {"amplitude", 0.3}, {"width", 0.8}};
            p["initial"] = initial_defaults();
            p["sweep"] = {{"kind", "norm_error"},
                          {"N_list", nlohmann::json::array({4, 6, 8, 10, 12})},
                          {"beta", 1.0},
                          {"m_rule", "pow_two_beta_plus_one_third"},
                          {"m_fixed", 0},
                          {"delta", 0.5},
                          {"t_final", 0.3},
                          {"dt", 1e-3},
                          {"m_trunc", -1},
                          {"tail_target", 1e-8},
                          {"support_tol", 1e-4},
                          {"freeze_time", 0.1},
                          {"alpha_probe", 0.0}};
            break;
        case Command::gn_constant:
            p["grid"] = {{"d", 2}, {"points", 128}, {"box_length", 16.0}};
            break;
        case Command::check:
            p["fast"] = true;
            break;
    }
    return p;
}

RunConfig load_config(Command command, const std::string& config_path,
                      const std::vector<std::string>& overrides, const std::string& out_dir) {
    RunConfig cfg;
    cfg.command = command;
    cfg.parameters = default_parameters(command);
    cfg.output_dir = out_dir;

    nlohmann::json user;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("config: cannot open '" + config_path + "'");
        try {
            in >> user;
        } catch (const nlohmann::json::parse_error& e) {
            throw std::invalid_argument("config: parse error in '" + config_path +
                                        "': " + e.what());
        }
        if (user.contains("command")) {
            const auto file_cmd = command_from_string(user.at("command").get<std::string>());
            if (file_cmd != command)
                throw std::invalid_argument("config: file command does not match CLI subcommand");
            user.erase("command");
        }
        if (user.contains("seed")) {
            cfg.seed = user.at("seed").get<std::uint64_t>();
            user.erase("seed");
        }
        merge_strict(cfg.parameters, user, "");
    }
    for (const auto& o : overrides) {
        if (o.rfind("seed=", 0) == 0) {
            cfg.seed = std::stoull(o.substr(5));
            continue;
        }
        apply_override(cfg.parameters, o);
    }

    // physical validation, before any compute
    if (cfg.parameters.contains("grid")) {
        const int d = cfg.parameters["grid"]["d"].get<int>();
        if (d != 1 && d != 2) throw std::invalid_argument("config: grid.d must be 1 or 2");
        const int n = cfg.parameters["grid"]["points"].get<int>();
        if (n < 2 || (n & (n - 1)) != 0)
            throw std::invalid_argument("config: grid.points must be a power of two");
    }
    if (cfg.parameters.contains("scaling") && cfg.parameters.contains("grid")) {
        const double beta = cfg.parameters["scaling"]["beta"].get<double>();
        const int d = cfg.parameters["grid"]["d"].get<int>();
        if (!(beta > 0.0)) throw std::invalid_argument("config: scaling.beta must be positive");
        if (d == 2 && !(beta < 1.0))
            throw std::invalid_argument(
                "config: for d=2 the norm approximation requires 0 < beta < 1");
    }
    if (command == Command::sweep) cfg.sweep().validate();
    return cfg;
}

SweepConfig RunConfig::sweep() const {
    SweepConfig s;
    const auto& g = parameters.at("grid");
    const auto& w = parameters.at("potential");
    const auto& in = parameters.at("initial");
    const auto& sw = parameters.at("sweep");
    s.d = g.at("d").get<int>();
    s.grid_points = g.at("points").get<int>();
    s.box_length = g.at("box_length").get<double>();
    s.potential_name = w.at("name").get<std::string>();
    s.potential_amplitude = w.at("amplitude").get<double>();
    s.potential_width = w.at("width").get<double>();
    s.initial_width = in.at("width").get<double>();
    s.phi0 = in.at("phi0").get<std::string>();
    s.squeeze = in.at("squeeze").get<double>();
    s.beta = sw.at("beta").get<double>();
    s.N_list = sw.at("N_list").get<std::vector<int>>();
    const std::string rule = sw.at("m_rule").get<std::string>();
    if (rule == "fixed")
        s.m_rule = MRule::fixed;
    else if (rule == "pow_two_beta_plus_one_third")
        s.m_rule = MRule::pow_two_beta_plus_one_third;
    else if (rule == "pow_one_minus_delta")
        s.m_rule = MRule::pow_one_minus_delta;
    else
        throw std::invalid_argument("config: unknown sweep.m_rule '" + rule + "'");
    s.m_fixed = sw.at("m_fixed").get<int>();
    s.delta = sw.at("delta").get<double>();
    s.t_final = sw.at("t_final").get<double>();
    s.dt = sw.at("dt").get<double>();
    s.m_trunc = sw.at("m_trunc").get<int>();
    s.tail_target = sw.at("tail_target").get<double>();
    s.support_tol = sw.at("support_tol").get<double>();
    s.freeze_time = sw.at("freeze_time").get<double>();
    s.alpha_probe = sw.at("alpha_probe").get<double>();
    s.seed = seed;
    return s;
}

std::string RunConfig::run_id() const {
    nlohmann::json doc;
    doc["command"] = command_to_string(command);
    doc["parameters"] = parameters;
    doc["seed"] = seed;
    const std::string canon = doc.dump();
    // FNV-1a, 64 bit
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : canon) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace bosedyn
