#pragma once

#include <cstdint>
#include <compare>
#include <string>

namespace gram {

/// Exact rational number used for beat positions and durations.
///
/// Onsets and note lengths stay exact through interpretation, fragmenting
/// and concatenation checks; doubles appear only at the seconds/tempo
/// boundary. Always kept normalized with a positive denominator.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den);
    constexpr Rational(std::int64_t whole) : num_(whole), den_(1) {}  // NOLINT(google-explicit-constructor)

    /// Parses decimal notation ("1", "0.5", "-2.25") exactly.
    static Rational from_decimal(const std::string& text);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational operator-() const { return {-num_, den_}; }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }

    bool operator==(const Rational& o) const = default;
    std::strong_ordering operator<=>(const Rational& o) const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

inline Rational abs(const Rational& r) { return r < Rational(0) ? -r : r; }

}  // namespace gram
