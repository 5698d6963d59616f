#pragma once

// JSON files for matrices and triples, and the complex literal grammar used on
// the command line.
//
// Matrix file: {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
// Triple file: {"S1": matrix, "S2": matrix, "P": matrix, "metadata": {...}}.
// Doubles are written with round-trip precision, so parse(serialize(M)) == M bit for bit.
//
// Complex literals: "a", "bi", "a+bi", "a-bi", "i", "-i", with a and b any
// decimal floating-point numbers (exponents allowed); "j" is accepted for "i".

#include "gamma3/operator_core.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace gamma3 {

using Json = nlohmann::json;

/// Throws Error(ParseError).
Complex parse_complex(std::string_view text);
std::vector<Complex> parse_complex_list(std::string_view text, char sep = ',');
std::string format_complex(Complex z);

Json matrix_to_json(const ComplexMatrix& M);
ComplexMatrix matrix_from_json(const Json& j);

struct TripleFile {
    ComplexMatrix S1, S2, P;
    Json metadata = Json::object();
};

Json triple_to_json(const TripleFile& t);
TripleFile triple_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace gamma3
