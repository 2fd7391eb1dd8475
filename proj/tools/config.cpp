#include "config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>

#include "bathforge/errors.hpp"

namespace bathforge::cli {
namespace {

using nlohmann::json;

constexpr double kBoltzmann = 1.380649e-23;        // J / K
constexpr double kHbar = 1.054571817e-34;          // J s

json from_toml(const toml::node& node) {
    if (const auto* t = node.as_table()) {
        json out = json::object();
        for (const auto& [key, value] : *t) out[std::string(key.str())] = from_toml(value);
        return out;
    }
    if (const auto* a = node.as_array()) {
        json out = json::array();
        for (const auto& value : *a) out.push_back(from_toml(value));
        return out;
    }
    if (const auto* v = node.as_integer()) return v->get();
    if (const auto* v = node.as_floating_point()) return v->get();
    if (const auto* v = node.as_boolean()) return v->get();
    if (const auto* v = node.as_string()) return v->get();
    throw ParseError("config: unsupported TOML value type (dates are not accepted)");
}

class Section {
public:
    Section(const json& root, std::string name, std::set<std::string> allowed) : name_(std::move(name)) {
        if (!root.contains(name_)) return;
        node_ = &root.at(name_);
        if (!node_->is_object()) throw ValidationError(name_ + ": expected a table");
        for (const auto& [key, value] : node_->items()) {
            if (!allowed.count(key)) throw ValidationError(name_ + "." + key + ": unknown field");
        }
    }

    bool has(const std::string& key) const { return node_ && node_->contains(key); }

    double number(const std::string& key, double fallback) const {
        if (!has(key)) return fallback;
        const auto& v = node_->at(key);
        if (!v.is_number()) throw ValidationError(path(key) + ": expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ValidationError(path(key) + ": must be finite");
        return d;
    }

    long long integer(const std::string& key, long long fallback) const {
        if (!has(key)) return fallback;
        const auto& v = node_->at(key);
        if (!v.is_number_integer()) throw ValidationError(path(key) + ": expected an integer");
        return v.get<long long>();
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        if (!has(key)) return fallback;
        const auto& v = node_->at(key);
        if (!v.is_string()) throw ValidationError(path(key) + ": expected a string");
        return v.get<std::string>();
    }

    std::string path(const std::string& key) const { return name_ + "." + key; }

private:
    std::string name_;
    const json* node_ = nullptr;
};

void require(bool ok, const std::string& field, const std::string& message) {
    if (!ok) throw ValidationError(field + ": " + message);
}

RunConfig from_json(const json& root) {
    if (!root.is_object()) throw ValidationError("config: expected a table at the top level");
    const std::set<std::string> sections{"bath", "resonator", "probe", "grids", "output"};
    for (const auto& [key, value] : root.items()) {
        if (!sections.count(key)) throw ValidationError(key + ": unknown section");
    }
    RunConfig c = default_config();

    const Section bath(root, "bath", {"k", "omega_r_hz", "j_res", "q_target"});
    c.k = bath.number("k", c.k);
    c.omega_r_hz = bath.number("omega_r_hz", c.omega_r_hz);
    const bool has_j = bath.has("j_res");
    const bool has_q = bath.has("q_target");
    require(has_j != has_q, "bath.j_res", "exactly one of bath.j_res and bath.q_target must be given");
    c.j_res_given = has_j;
    if (has_j) c.j_res = bath.number("j_res", 0.0);
    if (has_q) c.q_target = bath.number("q_target", 0.0);
    require(c.k < 1.5, bath.path("k"), "must be < 1.5");
    require(c.omega_r_hz > 0.0, bath.path("omega_r_hz"), "must be positive");
    if (has_j) require(c.j_res > 0.0, bath.path("j_res"), "must be positive");
    if (has_q) require(c.q_target > 0.0, bath.path("q_target"), "must be positive");

    const Section res(root, "resonator", {"mass", "temperature_kelvin", "mode", "omega_0"});
    c.mass = res.number("mass", c.mass);
    c.temperature_kelvin = res.number("temperature_kelvin", c.temperature_kelvin);
    const std::string mode = res.text("mode", "anchored");
    require(c.mass > 0.0, res.path("mass"), "must be positive");
    require(c.temperature_kelvin >= 0.0, res.path("temperature_kelvin"), "must be >= 0");
    if (mode == "anchored") {
        c.mode = ResonatorMode::Anchored;
        require(!res.has("omega_0"), res.path("omega_0"), "only used in forward mode");
    } else if (mode == "forward") {
        c.mode = ResonatorMode::Forward;
        require(res.has("omega_0"), res.path("omega_0"), "required in forward mode (units of Omega_R)");
        c.omega_0 = res.number("omega_0", 0.0);
        require(c.omega_0 > 0.0, res.path("omega_0"), "must be positive");
    } else {
        throw ValidationError(res.path("mode") + ": expected \"anchored\" or \"forward\"");
    }
    c.temperature = reduced_temperature(c.temperature_kelvin, c.omega_r_hz);

    const Section probe(root, "probe", {"kappa_hz", "delta_hz", "g_hz", "theta", "s_imp", "noise", "seed"});
    auto& p = c.probe;
    p.probe.kappa = probe.number("kappa_hz", p.probe.kappa * c.omega_r_hz) / c.omega_r_hz;
    p.probe.delta = probe.number("delta_hz", p.probe.delta * c.omega_r_hz) / c.omega_r_hz;
    const double g_default = 1e-3 * p.probe.kappa;
    p.probe.g = probe.number("g_hz", g_default * c.omega_r_hz) / c.omega_r_hz;
    require(p.probe.kappa > 0.0, probe.path("kappa_hz"), "must be positive");
    require(p.probe.g >= 0.0, probe.path("g_hz"), "must be >= 0");
    p.theta_given = probe.has("theta");
    p.probe.theta = p.theta_given ? probe.number("theta", 0.0) : optimal_homodyne_angle(p.probe, 1.0);
    p.s_imp = probe.number("s_imp", p.s_imp);
    p.noise = probe.number("noise", p.noise);
    const long long seed = probe.integer("seed", static_cast<long long>(p.seed));
    require(p.s_imp >= 0.0, probe.path("s_imp"), "must be >= 0");
    require(p.noise >= 0.0, probe.path("noise"), "must be >= 0");
    require(seed >= 0, probe.path("seed"), "must be >= 0");
    p.seed = static_cast<std::uint64_t>(seed);

    const Section grids(root, "grids", {"omega_min", "omega_max", "n_points", "t_max", "n_times"});
    auto& g = c.grids;
    g.omega_min = grids.number("omega_min", g.omega_min);
    g.omega_max = grids.number("omega_max", g.omega_max);
    const long long n_points = grids.integer("n_points", g.n_points);
    g.t_max = grids.number("t_max", g.t_max);
    const long long n_times = grids.integer("n_times", g.n_times);
    require(g.omega_min > 0.0, grids.path("omega_min"), "must be positive");
    require(g.omega_max > g.omega_min, grids.path("omega_max"), "must exceed grids.omega_min");
    require(n_points >= 2 && n_points <= 10000000, grids.path("n_points"), "must be >= 2");
    require(g.t_max > 0.0, grids.path("t_max"), "must be positive");
    require(n_times >= 2 && n_times <= 10000000, grids.path("n_times"), "must be >= 2");
    g.n_points = static_cast<int>(n_points);
    g.n_times = static_cast<int>(n_times);

    const Section out(root, "output", {"dir", "format"});
    c.output_dir = out.text("dir", c.output_dir.string());
    c.format = out.text("format", c.format);
    require(c.format == "csv" || c.format == "json", out.path("format"), "expected \"csv\" or \"json\"");
    return c;
}

}  // namespace

double reduced_temperature(double kelvin, double omega_r_hz) {
    return kBoltzmann * kelvin / (kHbar * 2.0 * std::numbers::pi * omega_r_hz);
}

RunConfig default_config() {
    RunConfig c;
    c.temperature = reduced_temperature(c.temperature_kelvin, c.omega_r_hz);
    c.probe.probe = default_probe(1.0);
    return c;
}

io::Header RunConfig::header() const {
    io::Header h;
    h.emplace_back("bath.k", io::format_real(k));
    h.emplace_back("bath.omega_r_hz", io::format_real(omega_r_hz));
    if (j_res_given) {
        h.emplace_back("bath.j_res", io::format_real(j_res));
    } else {
        h.emplace_back("bath.q_target", io::format_real(q_target));
    }
    h.emplace_back("resonator.mass", io::format_real(mass));
    h.emplace_back("resonator.temperature_kelvin", io::format_real(temperature_kelvin));
    h.emplace_back("resonator.temperature_reduced", io::format_real(temperature));
    h.emplace_back("resonator.mode", mode == ResonatorMode::Anchored ? "anchored" : "forward");
    if (mode == ResonatorMode::Forward) h.emplace_back("resonator.omega_0", io::format_real(omega_0));
    h.emplace_back("probe.kappa", io::format_real(probe.probe.kappa));
    h.emplace_back("probe.delta", io::format_real(probe.probe.delta));
    h.emplace_back("probe.g", io::format_real(probe.probe.g));
    h.emplace_back("probe.theta", io::format_real(probe.probe.theta));
    h.emplace_back("probe.s_imp", io::format_real(probe.s_imp));
    h.emplace_back("probe.noise", io::format_real(probe.noise));
    h.emplace_back("probe.seed", std::to_string(probe.seed));
    h.emplace_back("grids.omega_min", io::format_real(grids.omega_min));
    h.emplace_back("grids.omega_max", io::format_real(grids.omega_max));
    h.emplace_back("grids.n_points", std::to_string(grids.n_points));
    h.emplace_back("grids.t_max", io::format_real(grids.t_max));
    h.emplace_back("grids.n_times", std::to_string(grids.n_times));
    h.emplace_back("output.format", format);
    h.emplace_back("units", "omega in Omega_R, t in 1/Omega_R, M = 1, hbar = k_B = 1");
    return h;
}

RunConfig parse_config(const std::string& text, const std::string& format) {
    json root;
    if (format == "json") {
        try {
            root = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("config: ") + e.what());
        }
    } else if (format == "toml") {
        try {
            root = from_toml(toml::parse(text));
        } catch (const toml::parse_error& e) {
            std::ostringstream os;
            os << "config: " << e.description() << " (line " << e.source().begin.line << ")";
            throw ParseError(os.str());
        }
    } else {
        throw ParseError("config: unsupported format '" + format + "' (expected .toml or .json)");
    }
    return from_json(root);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("config: cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string ext = path.extension().string();
    if (!ext.empty()) ext.erase(0, 1);
    return parse_config(buffer.str(), ext);
}

}  // namespace bathforge::cli
