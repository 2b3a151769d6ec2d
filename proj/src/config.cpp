#include "vmcs/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "vmcs/io.hpp"

namespace vmcs {

namespace {

using nlohmann::json;

/// Tracks which keys of one JSON object were consumed and reports
/// unknown or missing ones with their full path.
class Section {
  public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    template <class T>
    T require(const std::string& key) {
        mark(key);
        if (!j_.contains(key)) throw ConfigError(path_ + "." + key + ": missing required field");
        return get<T>(key);
    }

    template <class T>
    T optional_or(const std::string& key, T fallback) {
        mark(key);
        if (!j_.contains(key) || j_.at(key).is_null()) return fallback;
        return get<T>(key);
    }

    bool has(const std::string& key) {
        mark(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    const json& raw(const std::string& key) {
        mark(key);
        return j_.at(key);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw ConfigError(path_ + "." + it.key() + ": unknown field");
            }
        }
    }

  private:
    template <class T>
    T get(const std::string& key) {
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(path_ + "." + key + ": wrong type");
        }
    }
    void mark(const std::string& key) { seen_.insert(key); }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void require_finite(double v, const std::string& path) {
    if (!std::isfinite(v)) throw ConfigError(path + ": must be finite");
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }

    // Manifests embed the config they were produced from.
    if (j.is_object() && j.contains("config") && j.contains("schema")) {
        j = j.at("config");
    }

    RunConfig cfg;
    Section root(j, "config");

    {
        Section lat(root.raw("lattice"), "config.lattice");
        cfg.lx = lat.require<int>("Lx");
        cfg.ly = lat.require<int>("Ly");
        cfg.periodic = lat.optional_or<bool>("periodic", true);
        lat.finish();
        if (cfg.lx < 1 || cfg.ly < 1) throw ConfigError("config.lattice: Lx and Ly must be >= 1");
    }
    {
        Section model(root.raw("model"), "config.model");
        cfg.g = model.require<double>("g");
        cfg.V = model.require<double>("V");
        cfg.gamma = model.require<double>("gamma");
        if (model.has("v_eff_override")) {
            cfg.v_eff_override = model.optional_or<double>("v_eff_override", 0.0);
        }
        model.finish();
        require_finite(cfg.g, "config.model.g");
        require_finite(cfg.V, "config.model.V");
        require_finite(cfg.gamma, "config.model.gamma");
        if (cfg.gamma < 0) throw ConfigError("config.model.gamma: must be nonnegative");
    }
    {
        Section ans(root.raw("ansatz"), "config.ansatz");
        cfg.n_comp = ans.require<int>("N_c");
        cfg.perturbation = ans.optional_or<double>("perturbation", 1e-2);
        cfg.seed = ans.optional_or<std::uint64_t>("seed", 0);
        cfg.symmetrize = ans.optional_or<bool>("symmetrize", true);
        cfg.point_group = ans.optional_or<bool>("point_group", false);
        if (ans.has("direction")) {
            const auto dir = ans.optional_or<std::vector<double>>("direction", {1, 0, 0});
            if (dir.size() != 3) throw ConfigError("config.ansatz.direction: expected 3 numbers");
            cfg.direction = Vec3{dir[0], dir[1], dir[2]};
            const double len = norm(cfg.direction);
            if (len < 1e-12) throw ConfigError("config.ansatz.direction: must be nonzero");
            cfg.direction = (1.0 / len) * cfg.direction;
        }
        if (ans.has("initial_state_file")) {
            cfg.initial_state_file = ans.optional_or<std::string>("initial_state_file", "");
        }
        ans.finish();
        if (cfg.n_comp < 1) throw ConfigError("config.ansatz.N_c: must be >= 1");
        if (cfg.perturbation < 0 || cfg.perturbation >= 0.5) {
            throw ConfigError("config.ansatz.perturbation: must lie in [0, 0.5)");
        }
    }
    {
        Section integ(root.raw("integration"), "config.integration");
        cfg.t_final = integ.require<double>("t_final");
        cfg.dt = integ.optional_or<double>("dt", 1e-2);
        cfg.record_every = integ.optional_or<int>("record_every", 10);
        cfg.tail_fraction = integ.optional_or<double>("tail_fraction", 0.2);
        integ.finish();
        if (!(cfg.t_final > 0)) throw ConfigError("config.integration.t_final: must be > 0");
        if (!(cfg.dt > 0)) throw ConfigError("config.integration.dt: must be > 0");
        if (cfg.record_every < 1) throw ConfigError("config.integration.record_every: must be >= 1");
        if (!(cfg.tail_fraction > 0) || cfg.tail_fraction > 0.5) {
            throw ConfigError("config.integration.tail_fraction: must lie in (0, 0.5]");
        }
    }
    if (root.has("eom")) {
        Section eom(root.raw("eom"), "config.eom");
        cfg.eom.epsilon = eom.optional_or<double>("epsilon", 1e-10);
        cfg.eom.conserve_trace = eom.optional_or<bool>("conserve_trace", true);
        const std::string mode = eom.optional_or<std::string>("gradient_mode", "closed_form");
        if (mode == "closed_form") {
            cfg.eom.gradient_mode = GradientMode::closed_form;
        } else if (mode == "forward_mode") {
            cfg.eom.gradient_mode = GradientMode::forward_mode;
        } else {
            throw ConfigError("config.eom.gradient_mode: expected closed_form or forward_mode");
        }
        eom.finish();
        try {
            cfg.eom.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config.eom.epsilon: ") + e.what());
        }
    }
    if (root.has("output")) {
        Section out(root.raw("output"), "config.output");
        cfg.directory = out.optional_or<std::string>("directory", "out");
        cfg.format = out.optional_or<std::string>("format", "csv");
        cfg.site_resolved = out.optional_or<bool>("site_resolved", false);
        out.finish();
        if (cfg.format != "csv") throw ConfigError("config.output.format: only csv is supported");
    }
    root.finish();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return parse_run_config(read_text_file(path));
}

std::string run_config_to_json(const RunConfig& cfg) {
    json j;
    j["lattice"] = {{"Lx", cfg.lx}, {"Ly", cfg.ly}, {"periodic", cfg.periodic}};
    j["model"] = {{"g", cfg.g}, {"V", cfg.V}, {"gamma", cfg.gamma}};
    if (cfg.v_eff_override) j["model"]["v_eff_override"] = *cfg.v_eff_override;
    j["ansatz"] = {{"N_c", cfg.n_comp},
                   {"perturbation", cfg.perturbation},
                   {"seed", cfg.seed},
                   {"symmetrize", cfg.symmetrize},
                   {"point_group", cfg.point_group},
                   {"direction", {cfg.direction.x, cfg.direction.y, cfg.direction.z}}};
    if (cfg.initial_state_file) j["ansatz"]["initial_state_file"] = *cfg.initial_state_file;
    j["integration"] = {{"t_final", cfg.t_final},
                        {"dt", cfg.dt},
                        {"record_every", cfg.record_every},
                        {"tail_fraction", cfg.tail_fraction}};
    j["eom"] = {{"epsilon", cfg.eom.epsilon},
                {"conserve_trace", cfg.eom.conserve_trace},
                {"gradient_mode", cfg.eom.gradient_mode == GradientMode::closed_form
                                      ? "closed_form"
                                      : "forward_mode"}};
    j["output"] = {{"directory", cfg.directory},
                   {"format", cfg.format},
                   {"site_resolved", cfg.site_resolved}};
    return j.dump(2);
}

}  // namespace vmcs
