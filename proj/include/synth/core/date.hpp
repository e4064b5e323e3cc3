#pragma once

#include <compare>
#include <string>

namespace synth {

// Day-resolution calendar date, serialized as ISO-8601 "YYYY-MM-DD".
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;

    static Date parse(const std::string& text);  // throws ParseError
    static bool valid(int year, int month, int day);

    std::string to_string() const;

    // Days since the civil epoch 1970-01-01.
    long to_days() const;
    static Date from_days(long days);
    Date plus_days(long n) const;
};

inline long days_between(const Date& from, const Date& to) {
    return to.to_days() - from.to_days();
}

}  // namespace synth
