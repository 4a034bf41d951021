#pragma once

// Plain-text output helpers: shortest round-trip float formatting and
// temp-file-plus-rename writes.

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace sedsphere::output {

/// Shortest decimal string that reads back to the same double (at most 17
/// significant digits).
inline std::string format_double(double x) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (res.ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return {buf.data(), res.ptr};
}

/// Comma-separated table with a header row and LF line endings.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::span<const double> row) {
        if (row.size() != columns_.size()) {
            throw std::invalid_argument("CsvTable: row width does not match header");
        }
        rows_.emplace_back(row.begin(), row.end());
    }

    void add_row(std::initializer_list<double> row) { add_row(std::span<const double>(row.begin(), row.size())); }

    void write(std::ostream& os) const {
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            os << (i ? "," : "") << columns_[i];
        }
        os << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                os << (i ? "," : "") << format_double(row[i]);
            }
            os << '\n';
        }
    }

    [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
    [[nodiscard]] const std::vector<std::vector<double>>& rows() const noexcept { return rows_; }

    [[nodiscard]] std::string str() const {
        std::ostringstream os;
        write(os);
        return os.str();
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

/// Writes `contents` to `path` through a sibling temporary file and a rename,
/// so readers never observe a partially written file.
inline void write_atomically(const std::filesystem::path& path, std::string_view contents) {
    namespace fs = std::filesystem;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw fs::filesystem_error("cannot open for writing", tmp, std::make_error_code(std::errc::io_error));
        }
        os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!os) {
            throw fs::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
        }
    }
    fs::rename(tmp, path);
}

} // namespace sedsphere::output
