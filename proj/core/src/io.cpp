#include "bathforge/io.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "bathforge/errors.hpp"
#include "bathforge/version.hpp"

namespace bathforge::io {
namespace {

using nlohmann::ordered_json;

std::string cell_text(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_real(*d);
    return std::get<std::string>(cell);
}

ordered_json cell_json(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        if (std::isfinite(*d)) return *d;
        return format_real(*d);
    }
    return std::get<std::string>(cell);
}

double required_number(const ordered_json& j, const char* field) {
    if (!j.contains(field)) throw ValidationError(std::string("bath.") + field + ": missing");
    if (!j.at(field).is_number()) throw ValidationError(std::string("bath.") + field + ": expected a number");
    return j.at(field).get<double>();
}

}  // namespace

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

void write_csv(std::ostream& os, const Table& table, const Header& header) {
    os << "# bathforge " << kVersion << '\n';
    for (const auto& [key, value] : header) os << "# " << key << " = " << value << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << cell_text(row[c]);
        os << '\n';
    }
}

void write_json(std::ostream& os, const Table& table, const Header& header) {
    ordered_json doc;
    doc["version"] = kVersion;
    ordered_json h = ordered_json::object();
    for (const auto& [key, value] : header) h[key] = value;
    doc["header"] = h;
    doc["columns"] = table.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : table.rows) {
        ordered_json r = ordered_json::array();
        for (const auto& cell : row) r.push_back(cell_json(cell));
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
}

const char* to_string(KernelMethod method) {
    switch (method) {
        case KernelMethod::Bessel: return "bessel";
        case KernelMethod::Quadrature: return "quadrature";
        case KernelMethod::Asymptote: return "asymptote";
    }
    return "unknown";
}

const char* to_string(CorrelationMethod method) {
    switch (method) {
        case CorrelationMethod::FullQuantum: return "full_quantum";
        case CorrelationMethod::HighT: return "high_t";
        case CorrelationMethod::Pole: return "pole";
        case CorrelationMethod::MemoryTail: return "memory_tail";
    }
    return "unknown";
}

const char* to_string(RenormMethod method) {
    return method == RenormMethod::ClosedForm ? "closed_form" : "quadrature";
}

Table kernel_table(const KernelTrace& trace) {
    Table t;
    t.columns = {"t_omega_r", "mu_normalized", "method"};
    const double scale = kernel_scale(trace.spec);
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        t.rows.push_back({trace.times[i] * trace.spec.omega_r, trace.values[i] / scale,
                          std::string(to_string(trace.method))});
    }
    return t;
}

Table response_table(const std::vector<ResponseSample>& samples) {
    Table t;
    t.columns = {"omega", "re_chi", "im_chi", "re_sigma", "im_sigma"};
    for (const auto& s : samples) {
        t.rows.push_back({s.omega, s.chi.real(), s.chi.imag(), s.sigma.re, s.sigma.im});
    }
    return t;
}

Table correlation_table(const CorrelationTrace& trace, double omega_r) {
    Table t;
    t.columns = {"t_omega_r", "cqq", "cpp", "method"};
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        Cell cpp = trace.cpp.empty() ? Cell(std::string()) : Cell(trace.cpp[i]);
        t.rows.push_back({trace.times[i] * omega_r, trace.cqq[i], cpp, std::string(to_string(trace.method))});
    }
    return t;
}

Table spectroscopy_table(const std::vector<SpectroscopyRecord>& records) {
    Table t;
    t.columns = {"omega", "re_lambda", "im_lambda", "s_xx", "re_xcoh", "im_xcoh"};
    for (const auto& r : records) {
        t.rows.push_back({r.omega, r.lambda_theta.real(), r.lambda_theta.imag(), r.s_xx, r.x_coh.real(),
                          r.x_coh.imag()});
    }
    return t;
}

Table reconstruction_table(const Reconstruction& rec, const BathSpec& spec) {
    Table t;
    t.columns = {"omega", "re_chi", "im_chi", "re_sigma", "j_recovered", "j_true", "rel_err"};
    for (const auto& p : rec.points) {
        const double truth = spectral_density(spec, p.omega);
        t.rows.push_back({p.omega, p.chi.real(), p.chi.imag(), p.re_sigma, p.j, truth, (p.j - truth) / truth});
    }
    return t;
}

std::string bath_spec_to_json(const BathSpec& spec) {
    ordered_json j;
    j["k"] = spec.k;
    j["omega_r_hz"] = spec.omega_r / (2.0 * std::numbers::pi);
    j["j_res"] = spec.j_res;
    return j.dump();
}

BathSpec bath_spec_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const ordered_json::parse_error& e) {
        throw ParseError(std::string("bath spec JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("bath: expected a JSON object");
    const double k = required_number(j, "k");
    const double hz = required_number(j, "omega_r_hz");
    const double j_res = required_number(j, "j_res");
    try {
        return calibrate(k, 2.0 * std::numbers::pi * hz, j_res);
    } catch (const DomainError& e) {
        throw ValidationError(std::string("bath: ") + e.what());
    }
}

std::string renorm_to_json(const RenormResult& result) {
    ordered_json j;
    j["delta_k"] = result.delta_k;
    j["delta_m"] = result.delta_m;
    j["m_r"] = result.m_r;
    j["omega_0"] = result.omega_0;
    j["method"] = to_string(result.method);
    return j.dump();
}

}  // namespace bathforge::io
