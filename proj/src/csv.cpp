#include "tarmac/csv.hpp"

#include <charconv>

#include "tarmac/error.hpp"

namespace tarmac::csv {

void split(std::string_view line, std::vector<std::string_view>& out) {
    out.clear();
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

Reader::Reader(std::istream& in) : in_(in) {
    if (!in_) throw IoError("unreadable CSV stream");
    if (!std::getline(in_, line_)) throw SchemaError("CSV stream has no header line");
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    std::vector<std::string_view> parts;
    split(line_, parts);
    for (auto p : parts) header_.emplace_back(p);
}

std::optional<std::size_t> Reader::find_column(std::string_view name) const {
    for (std::size_t i = 0; i < header_.size(); ++i)
        if (header_[i] == name) return i;
    return std::nullopt;
}

std::size_t Reader::column(std::string_view name) const {
    if (auto idx = find_column(name)) return *idx;
    throw SchemaError("missing required column '" + std::string(name) + "'");
}

bool Reader::next(std::vector<std::string_view>& fields) {
    while (std::getline(in_, line_)) {
        ++line_no_;
        if (!line_.empty() && line_.back() == '\r') line_.pop_back();
        if (line_.empty()) continue;
        split(line_, fields);
        return true;
    }
    if (in_.bad()) throw IoError("I/O error while reading CSV");
    return false;
}

std::optional<double> to_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<std::int64_t> to_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

Writer& Writer::field(std::string_view s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
    return *this;
}

Writer& Writer::field(double v) { return field(std::string_view(format_double(v))); }

Writer& Writer::field(std::int64_t v) { return field(std::string_view(std::to_string(v))); }

void Writer::end_row() {
    out_ << '\n';
    first_ = true;
}

void Writer::row(const std::vector<std::string>& cells) {
    for (const auto& c : cells) field(std::string_view(c));
    end_row();
}

}  // namespace tarmac::csv
