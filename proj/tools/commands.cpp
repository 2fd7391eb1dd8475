#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bathforge/bath.hpp"
#include "bathforge/correlations.hpp"
#include "bathforge/errors.hpp"
#include "bathforge/figures.hpp"
#include "bathforge/io.hpp"
#include "bathforge/memory.hpp"
#include "bathforge/renorm.hpp"
#include "bathforge/response.hpp"
#include "bathforge/spectroscopy.hpp"
#include "bathforge/version.hpp"
#include "cli.hpp"
#include "config.hpp"

namespace bathforge::cli {
namespace {

struct Model {
    BathSpec spec;
    Resonator res;
};

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return out;
}

Model build_model(const RunConfig& c) {
    Model m;
    m.spec = c.j_res_given ? calibrate(c.k, 1.0, c.j_res) : calibrate_to_quality(c.k, 1.0, c.q_target, c.mass).spec;
    if (c.mode == ResonatorMode::Anchored) {
        m.res = anchored_resonator(m.spec, c.mass, c.temperature);
    } else {
        m.res = forward_resonator(m.spec, c.mass, c.omega_0, c.temperature);
    }
    return m;
}

class Emitter {
public:
    Emitter(const RunConfig& c, std::string command, std::ostream& out)
        : config_(c), command_(std::move(command)), out_(out) {}

    void emit(const std::string& name, const io::Table& table, const io::Header& extra = {}) const {
        std::filesystem::create_directories(config_.output_dir);
        const auto path = config_.output_dir / (name + "." + config_.format);
        std::ofstream file(path, std::ios::binary);
        if (!file) throw Error("IOError", "cannot write " + path.string());
        io::Header header{{"command", command_}};
        for (const auto& kv : config_.header()) header.push_back(kv);
        for (const auto& kv : extra) header.push_back(kv);
        if (config_.format == "json") {
            io::write_json(file, table, header);
        } else {
            io::write_csv(file, table, header);
        }
        file.close();
        if (!file) throw Error("IOError", "failed writing " + path.string());
        out_ << "wrote " << path.string() << '\n';
    }

private:
    const RunConfig& config_;
    std::string command_;
    std::ostream& out_;
};

io::Header model_header(const Model& m) {
    return {{"model.j_res", io::format_real(m.spec.j_res)},
            {"model.omega_r", io::format_real(m.res.omega_r)},
            {"model.omega_0", io::format_real(m.res.omega_0)}};
}

void cmd_spectral(const RunConfig& c, const Emitter& e) {
    const BathSpec spec = c.j_res_given ? calibrate(c.k, 1.0, c.j_res)
                                        : calibrate_to_quality(c.k, 1.0, c.q_target, c.mass).spec;
    io::Table t;
    t.columns = {"omega", "j", "j_normalized", "log_slope"};
    for (double w : linspace(c.grids.omega_min, c.grids.omega_max, c.grids.n_points)) {
        const double j = spectral_density(spec, w);
        t.rows.push_back({w, j, j / spec.a_k, log_slope(spec, w)});
    }
    const auto pk = peaks(spec);
    e.emit("spectral", t,
           {{"model.j_res", io::format_real(spec.j_res)}, {"model.a_k", io::format_real(spec.a_k)},
            {"model.omega_j_max", io::format_real(pk.omega_j_max)}});
}

void cmd_kernel(const RunConfig& c, const Emitter& e, const std::string& method) {
    const Model m = build_model(c);
    KernelMethod km = KernelMethod::Bessel;
    if (method == "quadrature") km = KernelMethod::Quadrature;
    if (method == "asymptote") km = KernelMethod::Asymptote;
    const double t0 = km == KernelMethod::Asymptote ? 5.0 : 0.0;
    if (!(c.grids.t_max > t0)) throw ValidationError("grids.t_max: must exceed 5 for the asymptote method");
    const auto trace = kernel_trace(m.spec, linspace(t0, c.grids.t_max, c.grids.n_times), km);
    io::Header extra = model_header(m);
    extra.emplace_back("model.kernel_scale", io::format_real(kernel_scale(m.spec)));
    try {
        extra.emplace_back("model.t_star", io::format_real(kernel_sign_change(m.spec)));
    } catch (const NotFound&) {
        extra.emplace_back("model.t_star", "none below 50");
    }
    e.emit("kernel", io::kernel_table(trace), extra);
}

void cmd_renorm(const RunConfig& c, const Emitter& e) {
    const Model m = build_model(c);
    const auto r = renormalize(m.spec, c.mass);
    const auto s = linewidth(m.spec, m.res);
    io::Table t;
    t.columns = {"quantity", "value"};
    auto row = [&](const char* name, double v) { t.rows.push_back({std::string(name), v}); };
    row("k", m.spec.k);
    row("j_res", m.spec.j_res);
    row("a_k", m.spec.a_k);
    row("delta_k", r.delta_k);
    row("delta_m", r.delta_m);
    row("m_r", s.m_r);
    row("omega_0", m.res.omega_0);
    row("omega_r", s.omega_r);
    row("gamma", s.gamma);
    row("q_factor", s.q_factor);
    e.emit("renorm", t, {{"renorm.method", io::to_string(r.method)}});
}

void cmd_response(const RunConfig& c, const Emitter& e) {
    const Model m = build_model(c);
    const auto samples = response_sweep(m.spec, m.res, linspace(c.grids.omega_min, c.grids.omega_max, c.grids.n_points));
    e.emit("response", io::response_table(samples), model_header(m));
}

void cmd_correlations(const RunConfig& c, const Emitter& e, const std::string& method) {
    const Model m = build_model(c);
    CorrelationMethod cm = CorrelationMethod::FullQuantum;
    if (method == "high_t") cm = CorrelationMethod::HighT;
    if (method == "pole") cm = CorrelationMethod::Pole;
    if (method == "memory_tail") cm = CorrelationMethod::MemoryTail;
    const double t0 = cm == CorrelationMethod::MemoryTail ? 5.0 / m.res.omega_r : 0.0;
    if (!(c.grids.t_max > t0)) throw ValidationError("grids.t_max: must exceed 5 for the memory-tail method");
    const auto trace = correlation_trace(m.spec, m.res, linspace(t0, c.grids.t_max, c.grids.n_times), cm);
    e.emit("correlations", io::correlation_table(trace, m.spec.omega_r), model_header(m));
}

void cmd_spectroscopy(const RunConfig& c, const Emitter& e) {
    const Model m = build_model(c);
    const auto& p = c.probe;
    const auto omegas = linspace(c.grids.omega_min, c.grids.omega_max, c.grids.n_points);
    const auto records = synthesize_records(m.spec, m.res, p.probe, omegas, 1.0, p.s_imp, p.noise, p.seed);
    io::Header extra = model_header(m);
    if (!p.probe.weak_probe()) extra.emplace_back("warning", "g / kappa >= 0.01, backaction not negligible");
    e.emit("spectroscopy", io::spectroscopy_table(records), extra);

    const BareParameters bare{c.mass, m.res.omega_0, stiffness_shift(m.spec)};
    const auto rec = reconstruct(p.probe, records, bare);
    io::Header rec_extra = model_header(m);
    rec_extra.emplace_back("reconstruction.dropped", std::to_string(rec.dropped.size()));
    try {
        rec_extra.emplace_back("reconstruction.log_slope_at_omega_r",
                               io::format_real(reconstructed_log_slope(rec, m.res.omega_r)));
    } catch (const DomainError&) {
        rec_extra.emplace_back("reconstruction.log_slope_at_omega_r", "outside grid");
    }
    e.emit("reconstruction", io::reconstruction_table(rec, m.spec), rec_extra);
}

void cmd_figures(const Emitter& e, int which) {
    if (which == 2) {
        e.emit("figure2", figure2_table(kFigureSlopes));
    } else {
        e.emit("figure3", figure3_table(kFigureSlopes));
    }
}

int exit_code_for(const Error& e) {
    const auto& code = e.code();
    if (code == "ParseError" || code == "ValidationError") return kExitConfig;
    if (code == "NonConvergence" || code == "NoSignChange" || code == "NotFound" || code == "DerivativeUnstable") {
        return kExitNumerical;
    }
    return kExitFailure;
}

void report(std::ostream& err, int exit_code, const std::string& code, const std::string& what) {
    err << "ERROR " << exit_code << ": " << code << ": " << what << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"bathforge: structured-bath resonator toolkit", "bathforge"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    app.add_option("-c,--config", config_path, "TOML or JSON config file")->check(CLI::ExistingFile);
    app.add_option("-o,--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("-f,--format", format, "output format")->check(CLI::IsMember({"csv", "json"}));

    std::string kernel_method = "bessel";
    std::string corr_method = "full_quantum";
    int which = 2;

    auto* spectral = app.add_subcommand("spectral", "J(omega) and its local log-slope on the frequency grid");
    auto* kernel = app.add_subcommand("kernel", "dissipation kernel mu(t) on the time grid");
    kernel->add_option("--method", kernel_method)->check(CLI::IsMember({"bessel", "quadrature", "asymptote"}));
    auto* renorm = app.add_subcommand("renorm", "renormalisations, bare frequency and linewidth");
    auto* response = app.add_subcommand("response", "susceptibility and self-energy sweep");
    auto* correlations = app.add_subcommand("correlations", "position and momentum correlations");
    correlations->add_option("--method", corr_method)
        ->check(CLI::IsMember({"full_quantum", "high_t", "pole", "memory_tail"}));
    auto* spectroscopy = app.add_subcommand("spectroscopy", "synthetic homodyne records and reconstruction");
    auto* figures = app.add_subcommand("figures", "normalised spectral density (2) or kernel (3) curves");
    figures->add_option("--which", which)->required()->check(CLI::IsMember({2, 3}));
    auto* self = app.add_subcommand("selftest", "oracle self-checks");

    try {
        std::vector<std::string> args;
        for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        report(err, kExitConfig, "UsageError", e.what());
        return kExitConfig;
    }

    try {
        if (self->parsed()) {
            const int failures = selftest(out);
            return failures == 0 ? kExitOk : kExitFailure;
        }
        RunConfig config = config_path ? load_config(*config_path) : default_config();
        if (out_dir) config.output_dir = *out_dir;
        if (format) config.format = *format;

        const auto* sub = app.get_subcommands().front();
        const Emitter emitter(config, sub->get_name(), out);
        if (sub == spectral) cmd_spectral(config, emitter);
        if (sub == kernel) cmd_kernel(config, emitter, kernel_method);
        if (sub == renorm) cmd_renorm(config, emitter);
        if (sub == response) cmd_response(config, emitter);
        if (sub == correlations) cmd_correlations(config, emitter, corr_method);
        if (sub == spectroscopy) cmd_spectroscopy(config, emitter);
        if (sub == figures) cmd_figures(emitter, which);
        return kExitOk;
    } catch (const NonConvergence& e) {
        std::ostringstream os;
        os << e.what() << " (best estimate " << e.best_estimate() << ", error estimate " << e.error_estimate() << ")";
        report(err, kExitNumerical, e.code(), os.str());
        return kExitNumerical;
    } catch (const Error& e) {
        const int code = exit_code_for(e);
        report(err, code, e.code(), e.what());
        return code;
    } catch (const std::filesystem::filesystem_error& e) {
        report(err, kExitFailure, "IOError", e.what());
        return kExitFailure;
    } catch (const std::exception& e) {
        report(err, kExitFailure, "InternalError", e.what());
        return kExitFailure;
    }
}

}  // namespace bathforge::cli
