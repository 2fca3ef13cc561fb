#include "gram/core/rational.h"

#include <numeric>
#include <stdexcept>

namespace gram {

Rational::Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
}

Rational Rational::from_decimal(const std::string& text) {
    std::size_t dot = text.find('.');
    if (dot == std::string::npos) return {std::stoll(text), 1};
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    std::int64_t w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
    std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
    const bool neg = !whole.empty() && whole[0] == '-';
    std::int64_t num = (neg ? -1 : 1) * ((w < 0 ? -w : w) * den + f);
    return {num, den};
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator+(const Rational& o) const {
    return {num_ * o.den_ + o.num_ * den_, den_ * o.den_};
}
Rational Rational::operator-(const Rational& o) const {
    return {num_ * o.den_ - o.num_ * den_, den_ * o.den_};
}
Rational Rational::operator*(const Rational& o) const {
    return {num_ * o.num_, den_ * o.den_};
}
Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw std::invalid_argument("Rational: division by zero");
    return {num_ * o.den_, den_ * o.num_};
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
    const std::int64_t lhs = num_ * o.den_;
    const std::int64_t rhs = o.num_ * den_;
    return lhs <=> rhs;
}

}  // namespace gram
