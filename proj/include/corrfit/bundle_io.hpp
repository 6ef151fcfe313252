#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "corrfit/types.hpp"

namespace corrfit {

// BUNDLE text format: matrices as blocks of decimal rows, one row per
// line, entries separated by whitespace and/or commas; blocks separated by
// one or more blank lines; '#' at the start of a line begins a comment.

namespace detail {

struct Block {
    std::vector<std::vector<double>> rows;
    long first_line = 0;
};

inline std::vector<Block> parse_blocks(std::istream& in) {
    std::vector<Block> blocks;
    Block current;
    std::string line;
    long line_no = 0;
    auto flush = [&] {
        if (!current.rows.empty()) {
            blocks.push_back(std::move(current));
            current = Block{};
        }
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) { // blank: block separator
            flush();
            continue;
        }
        if (line[pos] == '#')
            continue;

        std::vector<double> row;
        while (pos < line.size()) {
            std::size_t end = pos;
            while (end < line.size() && line[end] != ' ' && line[end] != '\t' &&
                   line[end] != ',' && line[end] != '\r')
                ++end;
            if (end > pos) {
                double v = 0.0;
                const char* first = line.data() + pos;
                const char* last = line.data() + end;
                auto [ptr, ec] = std::from_chars(first, last, v);
                if (ec != std::errc() || ptr != last)
                    throw ParseError("non-numeric token '" + line.substr(pos, end - pos) + "'",
                                     line_no);
                row.push_back(v);
            }
            pos = end;
            while (pos < line.size() &&
                   (line[pos] == ' ' || line[pos] == '\t' || line[pos] == ',' || line[pos] == '\r'))
                ++pos;
        }
        if (row.empty())
            continue;
        if (current.rows.empty())
            current.first_line = line_no;
        else if (row.size() != current.rows.front().size())
            throw ParseError("row has " + std::to_string(row.size()) + " entries, block has " +
                                 std::to_string(current.rows.front().size()) + " per row",
                             line_no);
        current.rows.push_back(std::move(row));
    }
    flush();
    return blocks;
}

inline Matrix block_to_matrix(const Block& b) {
    Matrix m(static_cast<Index>(b.rows.size()), static_cast<Index>(b.rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            m(i, j) = b.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

inline std::vector<Block> parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::vector<Block> blocks = parse_blocks(in);
    if (blocks.empty())
        throw EmptyFile("no matrix data in " + path.string());
    return blocks;
}

inline void format_value(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16g", v);
    out += buf;
}

} // namespace detail

/// Read a bundle of one or more square matrices of one dimension.
inline std::vector<Matrix> read_bundle(const std::filesystem::path& path) {
    const auto blocks = detail::parse_file(path);
    std::vector<Matrix> out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) {
        if (b.rows.size() != b.rows.front().size())
            throw ParseError("matrix block is " + std::to_string(b.rows.size()) + "x" +
                                 std::to_string(b.rows.front().size()) + ", expected square",
                             b.first_line);
        if (!out.empty() && static_cast<Index>(b.rows.size()) != out.front().rows())
            throw ParseError("matrix block dimension differs from the first block", b.first_line);
        out.push_back(detail::block_to_matrix(b));
    }
    return out;
}

/// Read a single (possibly rectangular) matrix block, e.g. starting angles.
inline Matrix read_matrix(const std::filesystem::path& path) {
    const auto blocks = detail::parse_file(path);
    if (blocks.size() != 1)
        throw ParseError("expected a single matrix block, found " +
                             std::to_string(blocks.size()),
                         blocks[1].first_line);
    return detail::block_to_matrix(blocks.front());
}

/// Write one matrix as a BUNDLE block with 16 significant digits.
inline void write_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::string text;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j > 0) text += ' ';
            detail::format_value(text, m(i, j));
        }
        text += '\n';
    }
    std::ofstream out(path);
    if (!out || !(out << text))
        throw IoError("cannot write " + path.string());
}

/// Write a convergence trace as CSV. `step` and `backtracks` are empty on
/// the t = 0 row.
inline void write_trace_csv(const std::filesystem::path& path,
                            const std::vector<TraceRecord>& trace) {
    std::string text = "t,F,grad_norm,rel_residual,step,backtracks\n";
    for (const TraceRecord& rec : trace) {
        text += std::to_string(rec.t);
        text += ',';
        detail::format_value(text, rec.f);
        text += ',';
        detail::format_value(text, rec.grad_norm);
        text += ',';
        detail::format_value(text, rec.rel_residual);
        text += ',';
        if (rec.t > 0) {
            detail::format_value(text, rec.step);
            text += ',';
            text += std::to_string(rec.backtracks);
        } else {
            text += ',';
        }
        text += '\n';
    }
    std::ofstream out(path);
    if (!out || !(out << text))
        throw IoError("cannot write " + path.string());
}

/// Write a solve's outputs: the solution matrix and the iteration trace.
inline void write_solution(const SolveReport& report, const std::filesystem::path& matrix_path,
                           const std::filesystem::path& trace_path) {
    write_matrix(matrix_path, report.final_corr.entries());
    write_trace_csv(trace_path, report.trace);
}

} // namespace corrfit
