#include "taildep/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "taildep/error.hpp"

namespace taildep {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Matrix read_csv_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open " + path);

    std::vector<double> values;
    std::size_t cols = 0, rows = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::size_t row_cols = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (true) {
            const char* field_end = p;
            while (field_end != end && *field_end != ',') ++field_end;
            double v = 0.0;
            const auto res = std::from_chars(p, field_end, v);
            if (res.ec != std::errc{} || res.ptr != field_end)
                throw io_error(path + ": row " + std::to_string(line_no) +
                               ": cannot parse field '" + std::string(p, field_end) + "'");
            values.push_back(v);
            ++row_cols;
            if (field_end == end) break;
            p = field_end + 1;
        }
        if (rows == 0) {
            cols = row_cols;
        } else if (row_cols != cols) {
            throw io_error(path + ": row " + std::to_string(line_no) + " has " +
                           std::to_string(row_cols) + " fields, expected " + std::to_string(cols));
        }
        ++rows;
    }
    if (rows == 0) throw io_error(path + ": empty file");
    return Matrix(rows, cols, std::move(values));
}

void write_csv_matrix(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open " + path + " for writing");
    std::ostringstream buf;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) buf << ',';
            buf << format_double(m(r, c));
        }
        buf << '\n';
    }
    out << buf.str();
    if (!out) throw io_error("write failed for " + path);
}

}  // namespace taildep
