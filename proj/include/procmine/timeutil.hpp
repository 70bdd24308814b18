#pragma once

#include <cstdint>
#include <cstdio>
#include <compare>
#include <string>
#include <string_view>

#include "procmine/errors.hpp"

namespace procmine {

// UTC instant with millisecond precision. Offsets in the source text are
// applied during parsing; formatting always emits UTC.
struct Timestamp {
    std::int64_t millis = 0;

    auto operator<=>(const Timestamp&) const = default;
};

namespace detail {

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
// days_from_civil).
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    std::int64_t year;
    unsigned month;
    unsigned day;
};

inline CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {y + (m <= 2), m, d};
}

inline bool is_leap(std::int64_t y) {
    return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

inline unsigned days_in_month(std::int64_t y, unsigned m) {
    static const unsigned lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[m - 1];
}

inline bool parse_fixed_digits(std::string_view s, std::size_t& pos, int width, std::int64_t& out) {
    if (pos + width > s.size()) return false;
    std::int64_t v = 0;
    for (int i = 0; i < width; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    pos += width;
    out = v;
    return true;
}

}  // namespace detail

// Parses ISO 8601 extended date-times: YYYY-MM-DD['T'|' ']hh:mm:ss[.fff][Z|(+|-)hh[:]mm].
// Fractional seconds beyond milliseconds are truncated. A missing zone
// designator means UTC. `line` only seeds error messages.
inline Timestamp parse_iso8601(std::string_view text, std::size_t line = 0) {
    using namespace detail;
    std::size_t pos = 0;
    auto fail = [&](const char* what) -> Timestamp {
        throw ParseError("bad timestamp '" + std::string(text) + "': " + what, line);
    };
    bool negative_year = false;
    if (pos < text.size() && text[pos] == '-') {
        negative_year = true;
        ++pos;
    }
    std::int64_t year, month, day, hour, minute, second;
    if (!parse_fixed_digits(text, pos, 4, year)) return fail("expected 4-digit year");
    if (negative_year) year = -year;
    if (pos >= text.size() || text[pos] != '-') return fail("expected '-' after year");
    ++pos;
    if (!parse_fixed_digits(text, pos, 2, month)) return fail("expected 2-digit month");
    if (pos >= text.size() || text[pos] != '-') return fail("expected '-' after month");
    ++pos;
    if (!parse_fixed_digits(text, pos, 2, day)) return fail("expected 2-digit day");
    if (month < 1 || month > 12) return fail("month out of range");
    if (day < 1 || day > days_in_month(year, static_cast<unsigned>(month)))
        return fail("day out of range");
    if (pos >= text.size() || (text[pos] != 'T' && text[pos] != 't' && text[pos] != ' '))
        return fail("expected 'T' between date and time");
    ++pos;
    if (!parse_fixed_digits(text, pos, 2, hour)) return fail("expected 2-digit hour");
    if (pos >= text.size() || text[pos] != ':') return fail("expected ':' after hour");
    ++pos;
    if (!parse_fixed_digits(text, pos, 2, minute)) return fail("expected 2-digit minute");
    if (pos >= text.size() || text[pos] != ':') return fail("expected ':' after minute");
    ++pos;
    if (!parse_fixed_digits(text, pos, 2, second)) return fail("expected 2-digit second");
    if (hour > 23 || minute > 59 || second > 60) return fail("time out of range");
    if (second == 60) second = 59;  // leap second, clamp

    std::int64_t millis_frac = 0;
    if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
        ++pos;
        std::size_t digits = 0;
        std::int64_t frac = 0;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            if (digits < 3) frac = frac * 10 + (text[pos] - '0');
            ++digits;
            ++pos;
        }
        if (digits == 0) return fail("expected digits after '.'");
        while (digits < 3) {
            frac *= 10;
            ++digits;
        }
        millis_frac = frac;
    }

    std::int64_t offset_minutes = 0;
    if (pos < text.size()) {
        char c = text[pos];
        if (c == 'Z' || c == 'z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            int sign = c == '+' ? 1 : -1;
            ++pos;
            std::int64_t oh, om = 0;
            if (!parse_fixed_digits(text, pos, 2, oh)) return fail("expected offset hours");
            if (pos < text.size() && text[pos] == ':') ++pos;
            if (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
                if (!parse_fixed_digits(text, pos, 2, om)) return fail("expected offset minutes");
            }
            if (oh > 18 || om > 59) return fail("offset out of range");
            offset_minutes = sign * (oh * 60 + om);
        } else {
            return fail("unexpected trailing characters");
        }
    }
    if (pos != text.size()) return fail("unexpected trailing characters");

    std::int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    std::int64_t total =
        ((days * 24 + hour) * 60 + minute - offset_minutes) * 60 + second;
    return Timestamp{total * 1000 + millis_frac};
}

// Formats as YYYY-MM-DDThh:mm:ss.fff+00:00 (always UTC, always milliseconds).
inline std::string format_iso8601(Timestamp t) {
    using namespace detail;
    std::int64_t ms = t.millis;
    std::int64_t days = ms / 86400000;
    std::int64_t rem = ms % 86400000;
    if (rem < 0) {
        rem += 86400000;
        --days;
    }
    CivilDate date = civil_from_days(days);
    int millis = static_cast<int>(rem % 1000);
    rem /= 1000;
    int second = static_cast<int>(rem % 60);
    rem /= 60;
    int minute = static_cast<int>(rem % 60);
    int hour = static_cast<int>(rem / 60);
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02d:%02d:%02d.%03d+00:00",
                  static_cast<long long>(date.year), date.month, date.day, hour, minute,
                  second, millis);
    return buf;
}

// strptime-flavored parser for CSV timestamp columns. Supported directives:
// %Y %m %d %H %M %S %f (fractional seconds) %z (offset or Z); any other
// character must match literally. Missing %z means UTC.
inline Timestamp parse_timestamp(std::string_view text, std::string_view format,
                                 std::size_t line = 0) {
    using namespace detail;
    if (format.empty()) return parse_iso8601(text, line);
    std::size_t pos = 0;
    auto fail = [&](const std::string& what) -> Timestamp {
        throw ParseError("bad timestamp '" + std::string(text) + "' for format '" +
                             std::string(format) + "': " + what,
                         line);
    };
    std::int64_t year = 1970, month = 1, day = 1, hour = 0, minute = 0, second = 0;
    std::int64_t millis_frac = 0, offset_minutes = 0;
    for (std::size_t f = 0; f < format.size(); ++f) {
        char fc = format[f];
        if (fc != '%') {
            if (pos >= text.size() || text[pos] != fc)
                return fail(std::string("expected '") + fc + "'");
            ++pos;
            continue;
        }
        ++f;
        if (f >= format.size()) return fail("dangling '%' in format");
        switch (format[f]) {
            case 'Y':
                if (!parse_fixed_digits(text, pos, 4, year)) return fail("expected %Y");
                break;
            case 'm':
                if (!parse_fixed_digits(text, pos, 2, month)) return fail("expected %m");
                break;
            case 'd':
                if (!parse_fixed_digits(text, pos, 2, day)) return fail("expected %d");
                break;
            case 'H':
                if (!parse_fixed_digits(text, pos, 2, hour)) return fail("expected %H");
                break;
            case 'M':
                if (!parse_fixed_digits(text, pos, 2, minute)) return fail("expected %M");
                break;
            case 'S':
                if (!parse_fixed_digits(text, pos, 2, second)) return fail("expected %S");
                break;
            case 'f': {
                std::size_t digits = 0;
                std::int64_t frac = 0;
                while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
                    if (digits < 3) frac = frac * 10 + (text[pos] - '0');
                    ++digits;
                    ++pos;
                }
                if (digits == 0) return fail("expected %f digits");
                while (digits < 3) {
                    frac *= 10;
                    ++digits;
                }
                millis_frac = frac;
                break;
            }
            case 'z': {
                if (pos >= text.size()) return fail("expected %z");
                char c = text[pos];
                if (c == 'Z' || c == 'z') {
                    ++pos;
                } else if (c == '+' || c == '-') {
                    int sign = c == '+' ? 1 : -1;
                    ++pos;
                    std::int64_t oh, om = 0;
                    if (!parse_fixed_digits(text, pos, 2, oh)) return fail("expected %z hours");
                    if (pos < text.size() && text[pos] == ':') ++pos;
                    if (!parse_fixed_digits(text, pos, 2, om)) return fail("expected %z minutes");
                    offset_minutes = sign * (oh * 60 + om);
                } else {
                    return fail("expected %z");
                }
                break;
            }
            case '%':
                if (pos >= text.size() || text[pos] != '%') return fail("expected '%'");
                ++pos;
                break;
            default:
                return fail(std::string("unsupported directive %") + format[f]);
        }
    }
    if (pos != text.size()) return fail("unexpected trailing characters");
    if (month < 1 || month > 12) return fail("month out of range");
    if (day < 1 || day > days_in_month(year, static_cast<unsigned>(month)))
        return fail("day out of range");
    if (hour > 23 || minute > 59 || second > 59) return fail("time out of range");
    std::int64_t days = days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    std::int64_t total = ((days * 24 + hour) * 60 + minute - offset_minutes) * 60 + second;
    return Timestamp{total * 1000 + millis_frac};
}

}  // namespace procmine
