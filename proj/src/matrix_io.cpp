#include "pcss/matrix_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace pcss {

namespace {

constexpr char kMagic[5] = {'P', 'M', 'A', 'T', '1'};

void write_u64_le(std::ostream& out, std::uint64_t v) {
    std::array<unsigned char, 8> bytes;
    for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = (v >> (8 * i)) & 0xff;
    out.write(reinterpret_cast<const char*>(bytes.data()), 8);
}

std::uint64_t read_u64_le(std::istream& in, const std::string& context) {
    std::array<unsigned char, 8> bytes;
    if (!in.read(reinterpret_cast<char*>(bytes.data()), 8)) {
        throw ParseError(context + ": truncated header");
    }
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
    return v;
}

void write_f64_le(std::ostream& out, double d) {
    write_u64_le(out, std::bit_cast<std::uint64_t>(d));
}

double read_f64_le(std::istream& in, const std::string& context) {
    return std::bit_cast<double>(read_u64_le(in, context));
}

} // namespace

Matrix load_matrix_csv(std::istream& in, const std::string& context) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        const char* cursor = line.data();
        const char* end = line.data() + line.size();
        while (cursor < end) {
            while (cursor < end && (*cursor == ' ' || *cursor == '\t')) ++cursor;
            double value;
            const auto [next, ec] = std::from_chars(cursor, end, value);
            if (ec != std::errc()) {
                std::ostringstream msg;
                msg << context << ": line " << line_no << ", offset "
                    << (cursor - line.data()) << ": expected a number";
                throw ParseError(msg.str());
            }
            row.push_back(value);
            cursor = next;
            while (cursor < end && (*cursor == ' ' || *cursor == '\t')) ++cursor;
            if (cursor < end) {
                if (*cursor != ',') {
                    std::ostringstream msg;
                    msg << context << ": line " << line_no << ", offset "
                        << (cursor - line.data()) << ": expected ','";
                    throw ParseError(msg.str());
                }
                ++cursor;
            }
        }
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size()) {
            std::ostringstream msg;
            msg << context << ": line " << line_no << ": got " << row.size()
                << " values, expected " << rows.front().size();
            throw ParseError(msg.str());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError(context + ": no data");
    }
    Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    require_finite(a, context);
    return a;
}

Matrix load_matrix_pmat(std::istream& in, const std::string& context) {
    char magic[5];
    if (!in.read(magic, 5) || std::memcmp(magic, kMagic, 5) != 0) {
        throw ParseError(context + ": missing PMAT1 magic");
    }
    const std::uint64_t rows = read_u64_le(in, context);
    const std::uint64_t cols = read_u64_le(in, context);
    if (rows == 0 || cols == 0) {
        throw ParseError(context + ": zero dimension in header");
    }
    constexpr std::uint64_t kSaneLimit = 1ull << 32;
    if (rows * cols > kSaneLimit) {
        throw ParseError(context + ": header describes an implausibly large matrix");
    }
    Matrix a(static_cast<Index>(rows), static_cast<Index>(cols));
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            a(i, j) = read_f64_le(in, context);
        }
    }
    require_finite(a, context);
    return a;
}

Matrix load_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError(path + ": cannot open for reading");
    }
    char magic[5];
    in.read(magic, 5);
    const bool binary = in.gcount() == 5 && std::memcmp(magic, kMagic, 5) == 0;
    in.clear();
    in.seekg(0);
    return binary ? load_matrix_pmat(in, path) : load_matrix_csv(in, path);
}

void save_matrix_csv(std::ostream& out, const Matrix& a) {
    out << std::setprecision(17);
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            if (j > 0) out << ',';
            out << a(i, j);
        }
        out << '\n';
    }
}

void save_matrix_pmat(std::ostream& out, const Matrix& a) {
    out.write(kMagic, 5);
    write_u64_le(out, static_cast<std::uint64_t>(a.rows()));
    write_u64_le(out, static_cast<std::uint64_t>(a.cols()));
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            write_f64_le(out, a(i, j));
        }
    }
}

void save_matrix(const std::string& path, const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw ParameterError("save_matrix: refusing to write an empty matrix");
    }
    require_finite(a, path);
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ParseError(path + ": cannot open for writing");
    }
    const bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    if (csv) {
        save_matrix_csv(out, a);
    } else {
        save_matrix_pmat(out, a);
    }
    if (!out) {
        throw ParseError(path + ": write failed");
    }
}

} // namespace pcss
