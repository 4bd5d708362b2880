#include "lipext/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "lipext/error.hpp"

namespace lipext::io {

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double x = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, x);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw ValidationError("cannot parse number '" + std::string(text) + "'");
    return x;
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (double v : m.row(i)) r.push_back(v);
        rows.push_back(std::move(r));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array()) throw ValidationError("matrix must be a JSON array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array()) throw ValidationError("matrix row " + std::to_string(i) + " is not an array");
        std::vector<double> r;
        for (const auto& v : j[i]) {
            if (!v.is_number()) throw ValidationError("matrix row " + std::to_string(i) + " has a non-numeric entry");
            r.push_back(v.get<double>());
        }
        rows.push_back(std::move(r));
    }
    return Matrix::from_rows(rows);
}

json space_to_json(const QuasiMetricSpace& space) {
    return json{{"n", space.size()}, {"dist", matrix_to_json(space.distances())}};
}

QuasiMetricSpace space_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dist")) throw ValidationError("space JSON needs a \"dist\" field");
    Matrix d = matrix_from_json(j.at("dist"));
    if (j.contains("n")) {
        if (!j.at("n").is_number_integer()) throw ValidationError("space field \"n\" must be an integer");
        const auto n = j.at("n").get<long long>();
        if (n < 0 || static_cast<std::size_t>(n) != d.rows())
            throw ValidationError("space declares n=" + std::to_string(n) + " but dist has " +
                                  std::to_string(d.rows()) + " rows");
    }
    return make_quasi_metric(std::move(d));
}

std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

Matrix matrix_from_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            const auto field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
            try {
                row.push_back(parse_double(field));
            } catch (const ValidationError& e) {
                throw ValidationError("CSV line " + std::to_string(line_no) + ": " + e.what());
            }
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        rows.push_back(std::move(row));
    }
    return Matrix::from_rows(rows);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json_file(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("malformed JSON in '" + path + "': " + e.what());
    }
}

} // namespace lipext::io
