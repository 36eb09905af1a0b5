#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace tarmac::csv {

// Minimal reader for the comma-separated files this project emits: no
// quoting, one record per line, first line is the header.
class Reader {
public:
    // Throws IoError if the stream is bad, SchemaError if it has no header.
    explicit Reader(std::istream& in);

    const std::vector<std::string>& header() const { return header_; }

    // Index of a header column; throws SchemaError naming the column if absent.
    std::size_t column(std::string_view name) const;
    std::optional<std::size_t> find_column(std::string_view name) const;

    // Reads the next non-empty record into `fields`. Returns false at EOF.
    bool next(std::vector<std::string_view>& fields);

    // 1-based line number of the record last returned by next().
    std::size_t line_number() const { return line_no_; }

private:
    std::istream& in_;
    std::vector<std::string> header_;
    std::string line_;
    std::size_t line_no_ = 0;
};

void split(std::string_view line, std::vector<std::string_view>& out);

// Strict numeric parses; nullopt on any trailing garbage or empty input.
std::optional<double> to_double(std::string_view s);
std::optional<std::int64_t> to_int(std::string_view s);

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    Writer& field(std::string_view s);
    Writer& field(double v);
    Writer& field(std::int64_t v);
    Writer& field(int v) { return field(static_cast<std::int64_t>(v)); }
    Writer& field(std::size_t v) { return field(static_cast<std::int64_t>(v)); }
    void end_row();

    void row(const std::vector<std::string>& cells);

private:
    std::ostream& out_;
    bool first_ = true;
};

}  // namespace tarmac::csv
