#include "gamma3/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace gamma3 {

namespace {

[[noreturn]] void parse_error(std::string_view text, const std::string& why) {
    throw Error(ErrorCode::ParseError, "'" + std::string(text) + "': " + why);
}

// A signed real number, or a bare sign when `allow_unit` (as in "i" or "-i").
double parse_real(std::string_view text, std::string_view whole, bool allow_unit) {
    if (allow_unit && (text.empty() || text == "+" || text == "-")) return text == "-" ? -1.0 : 1.0;
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) parse_error(whole, "not a number");
    return v;
}

}  // namespace

Complex parse_complex(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) parse_error(text, "empty literal");
    const std::string_view v(s);
    const bool imaginary = v.back() == 'i' || v.back() == 'j';
    if (!imaginary) return {parse_real(v, text, false), 0.0};
    const std::string_view body = v.substr(0, v.size() - 1);
    // Split at the last sign that is not the leading one and not part of an exponent.
    size_t split = std::string_view::npos;
    for (size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) return {0.0, parse_real(body, text, true)};
    return {parse_real(body.substr(0, split), text, false), parse_real(body.substr(split), text, true)};
}

std::vector<Complex> parse_complex_list(std::string_view text, char sep) {
    std::vector<Complex> out;
    size_t start = 0;
    while (true) {
        const size_t end = text.find(sep, start);
        out.push_back(parse_complex(text.substr(start, end == std::string_view::npos ? text.npos : end - start)));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

std::string format_complex(Complex z) {
    std::ostringstream os;
    os.precision(17);
    os << z.real() << (std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

Json matrix_to_json(const ComplexMatrix& M) {
    Json data = Json::array();
    for (Index r = 0; r < M.rows(); ++r)
        for (Index c = 0; c < M.cols(); ++c) data.push_back({M(r, c).real(), M(r, c).imag()});
    return {{"rows", M.rows()}, {"cols", M.cols()}, {"data", data}};
}

ComplexMatrix matrix_from_json(const Json& j) {
    try {
        const Index rows = j.at("rows").get<Index>(), cols = j.at("cols").get<Index>();
        const auto& data = j.at("data");
        if (rows < 0 || cols < 0 || !data.is_array() || static_cast<Index>(data.size()) != rows * cols)
            throw Error(ErrorCode::ParseError, "matrix: data length does not match rows * cols");
        ComplexMatrix M(rows, cols);
        for (Index r = 0; r < rows; ++r)
            for (Index c = 0; c < cols; ++c) {
                const auto& e = data[static_cast<size_t>(r * cols + c)];
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                    throw Error(ErrorCode::ParseError, "matrix: entries must be [re, im] number pairs");
                M(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
            }
        require_finite(M, "matrix");
        return M;
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("matrix: ") + e.what());
    }
}

Json triple_to_json(const TripleFile& t) {
    Json j = {{"S1", matrix_to_json(t.S1)}, {"S2", matrix_to_json(t.S2)}, {"P", matrix_to_json(t.P)}};
    if (!t.metadata.empty()) j["metadata"] = t.metadata;
    return j;
}

TripleFile triple_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("S1") || !j.contains("S2") || !j.contains("P"))
        throw Error(ErrorCode::ParseError, "triple: expected an object with S1, S2, P");
    TripleFile t{matrix_from_json(j["S1"]), matrix_from_json(j["S2"]), matrix_from_json(j["P"]), Json::object()};
    if (j.contains("metadata")) t.metadata = j["metadata"];
    const Index n = t.P.rows();
    for (const ComplexMatrix* m : {&t.S1, &t.S2, &t.P})
        if (m->rows() != n || m->cols() != n)
            throw Error(ErrorCode::DimensionMismatch, "triple: S1, S2, P must be square of equal size");
    return t;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace gamma3
