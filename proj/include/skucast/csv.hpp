#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "skucast/errors.hpp"

namespace skucast {

/// Minimal strict CSV reader for the flat, unquoted files this project
/// exchanges. Reports the source name and 1-based line number on any error.
class CsvReader {
public:
    CsvReader(std::istream& in, std::string source_name)
        : in_(in), source_(std::move(source_name)) {}

    /// Reads the next row; returns false at end of input. Blank trailing
    /// lines are skipped.
    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            fields.clear();
            std::size_t start = 0;
            while (true) {
                std::size_t comma = line.find(',', start);
                if (comma == std::string::npos) {
                    fields.emplace_back(line.substr(start));
                    break;
                }
                fields.emplace_back(line.substr(start, comma - start));
                start = comma + 1;
            }
            return true;
        }
        return false;
    }

    std::size_t line_number() const { return line_no_; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw data_error(source_ + ":" + std::to_string(line_no_) + ": " + msg);
    }

private:
    std::istream& in_;
    std::string source_;
    std::size_t line_no_ = 0;
};

inline long long parse_int(const CsvReader& r, std::string_view field,
                           const std::string& what) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        r.fail("expected integer for " + what + ", got '" + std::string(field) + "'");
    return value;
}

inline double parse_double(const CsvReader& r, std::string_view field,
                           const std::string& what) {
    try {
        std::size_t pos = 0;
        double value = std::stod(std::string(field), &pos);
        if (pos != field.size()) throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        r.fail("expected number for " + what + ", got '" + std::string(field) + "'");
    }
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open " + path);
    return in;
}

} // namespace skucast
