#include "vcz/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace vcz {

DyadicCube::DyadicCube(int level, std::int64_t index) : level_(level), index_(index)
{
    if (index < 0) {
        throw std::invalid_argument("DyadicCube: index must be nonnegative");
    }
    if (level < -60 || level > 60) {
        throw std::invalid_argument("DyadicCube: level out of range [-60, 60]");
    }
}

double DyadicCube::left() const noexcept { return std::ldexp(static_cast<double>(index_), level_); }
double DyadicCube::right() const noexcept { return std::ldexp(static_cast<double>(index_ + 1), level_); }
double DyadicCube::measure() const noexcept { return std::ldexp(1.0, level_); }
double DyadicCube::center() const noexcept
{
    return std::ldexp(2.0 * static_cast<double>(index_) + 1.0, level_ - 1);
}

DyadicCube DyadicCube::parent() const { return {level_ + 1, index_ / 2}; }

std::pair<DyadicCube, DyadicCube> DyadicCube::children() const
{
    return {DyadicCube(level_ - 1, 2 * index_), DyadicCube(level_ - 1, 2 * index_ + 1)};
}

bool DyadicCube::contains(const DyadicCube& other) const noexcept
{
    if (other.level_ > level_) {
        return false;
    }
    const int shift = level_ - other.level_;
    const std::int64_t ancestor = shift >= 63 ? 0 : (other.index_ >> shift);
    return ancestor == index_;
}

bool DyadicCube::disjoint(const DyadicCube& other) const noexcept
{
    return !contains(other) && !other.contains(*this);
}

HalfOpenInterval DyadicCube::expand() const noexcept
{
    const double c = center();
    const double len = measure();
    return {std::max(0.0, c - len), c + len};
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    if (std::isfinite(v) && s.find_first_of(".eE") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string to_string(const DyadicCube& q)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "Q(%d,%lld)=(%.17g,%.17g]", q.level(),
                  static_cast<long long>(q.index()), q.left(), q.right());
    return buf;
}

std::ostream& operator<<(std::ostream& os, const DyadicCube& q) { return os << to_string(q); }

} // namespace vcz
