#pragma once

// Tabular and JSON serialisation. Floats are written with 17 significant
// digits so identical inputs give identical bytes.

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bathforge/bath.hpp"
#include "bathforge/correlations.hpp"
#include "bathforge/memory.hpp"
#include "bathforge/renorm.hpp"
#include "bathforge/response.hpp"
#include "bathforge/spectroscopy.hpp"

namespace bathforge::io {

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

/// Ordered key/value pairs written as the file header.
using Header = std::vector<std::pair<std::string, std::string>>;

std::string format_real(double value);

/// '#'-prefixed header lines (the tool version first), a column line, rows.
void write_csv(std::ostream& os, const Table& table, const Header& header);

/// {"header": {...}, "columns": [...], "rows": [[...], ...]}.
void write_json(std::ostream& os, const Table& table, const Header& header);

const char* to_string(KernelMethod method);
const char* to_string(CorrelationMethod method);
const char* to_string(RenormMethod method);

Table kernel_table(const KernelTrace& trace);
Table response_table(const std::vector<ResponseSample>& samples);
Table correlation_table(const CorrelationTrace& trace, double omega_r);
Table spectroscopy_table(const std::vector<SpectroscopyRecord>& records);
Table reconstruction_table(const Reconstruction& rec, const BathSpec& spec);

/// {"k", "omega_r_hz", "j_res"}; omega_r is converted from rad/s.
std::string bath_spec_to_json(const BathSpec& spec);
/// Inverse of bath_spec_to_json. ParseError on malformed JSON,
/// ValidationError naming the offending field.
BathSpec bath_spec_from_json(const std::string& text);

std::string renorm_to_json(const RenormResult& result);

}  // namespace bathforge::io
