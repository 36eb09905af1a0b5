#include "tarmac/time.hpp"

#include <charconv>
#include <cstdio>

#include "tarmac/error.hpp"

namespace tarmac {

namespace {

int parse_int(std::string_view text, std::size_t pos, std::size_t len) {
    if (pos + len > text.size()) throw SchemaError("truncated timestamp: " + std::string(text));
    int value = 0;
    auto first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc() || ptr != first + len)
        throw SchemaError("bad timestamp: " + std::string(text));
    return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
    if (pos >= text.size() || text[pos] != c) throw SchemaError("bad timestamp: " + std::string(text));
}

}  // namespace

Timestamp parse_iso8601(std::string_view text) {
    using namespace std::chrono;
    const int y = parse_int(text, 0, 4);
    expect(text, 4, '-');
    const int mo = parse_int(text, 5, 2);
    expect(text, 7, '-');
    const int d = parse_int(text, 8, 2);
    if (text.size() < 11 || (text[10] != 'T' && text[10] != ' '))
        throw SchemaError("bad timestamp: " + std::string(text));
    const int hh = parse_int(text, 11, 2);
    expect(text, 13, ':');
    const int mm = parse_int(text, 14, 2);
    expect(text, 16, ':');
    const int ss = parse_int(text, 17, 2);

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60)
        throw SchemaError("timestamp out of range: " + std::string(text));

    Timestamp t = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
    std::size_t pos = 19;
    if (pos == text.size()) return t;
    if (text[pos] == 'Z' && pos + 1 == text.size()) return t;
    if ((text[pos] == '+' || text[pos] == '-') && text.size() == pos + 6) {
        const int oh = parse_int(text, pos + 1, 2);
        expect(text, pos + 3, ':');
        const int om = parse_int(text, pos + 4, 2);
        const auto offset = hours{oh} + minutes{om};
        return text[pos] == '+' ? t - offset : t + offset;
    }
    throw SchemaError("bad timestamp suffix: " + std::string(text));
}

std::string format_iso8601(Timestamp t) {
    using namespace std::chrono;
    const auto day_start = floor<days>(t);
    const year_month_day ymd{day_start};
    const hh_mm_ss hms{t - day_start};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

std::int64_t epoch_seconds(Timestamp t) { return t.time_since_epoch().count(); }

Timestamp from_epoch_seconds(std::int64_t s) { return Timestamp{Seconds{s}}; }

std::int64_t utc_day(Timestamp t) {
    return std::chrono::floor<std::chrono::days>(t).time_since_epoch().count();
}

double minutes_since_midnight(Timestamp t) {
    const auto day_start = std::chrono::floor<std::chrono::days>(t);
    return static_cast<double>((t - day_start).count()) / 60.0;
}

int day_of_week(Timestamp t) {
    const std::chrono::weekday wd{std::chrono::floor<std::chrono::days>(t)};
    return static_cast<int>(wd.iso_encoding()) - 1;
}

}  // namespace tarmac
