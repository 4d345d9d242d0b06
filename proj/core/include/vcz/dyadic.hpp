#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>

namespace vcz {

/// Plain half-open interval (left, right]. Used for expanded cubes, which are not dyadic.
struct HalfOpenInterval {
    double left = 0.0;
    double right = 0.0;

    double length() const noexcept { return right - left; }
    bool contains(double t) const noexcept { return left < t && t <= right; }

    bool operator==(const HalfOpenInterval&) const = default;
};

/// Dyadic cube Q_{n,k} = (2^n k, 2^n (k+1)] on the half-line, stored as the integer pair (n, k).
/// Order relations are decided in integer arithmetic.
class DyadicCube {
public:
    /// Throws std::invalid_argument for a negative index or a level outside [-60, 60].
    DyadicCube(int level, std::int64_t index);

    int level() const noexcept { return level_; }
    std::int64_t index() const noexcept { return index_; }

    double left() const noexcept;
    double right() const noexcept;
    double measure() const noexcept;
    double center() const noexcept;

    DyadicCube parent() const;
    std::pair<DyadicCube, DyadicCube> children() const;

    /// True iff other ⊆ *this.
    bool contains(const DyadicCube& other) const noexcept;
    bool disjoint(const DyadicCube& other) const noexcept;

    /// Interval with the same center and twice the length, intersected with R_+.
    HalfOpenInterval expand() const noexcept;

    auto operator<=>(const DyadicCube&) const = default;

private:
    int level_;
    std::int64_t index_;
};

inline DyadicCube parent(const DyadicCube& q) { return q.parent(); }
inline std::pair<DyadicCube, DyadicCube> children(const DyadicCube& q) { return q.children(); }
inline HalfOpenInterval expand(const DyadicCube& q) { return q.expand(); }
/// True iff q2 ⊆ q1.
inline bool contains(const DyadicCube& q1, const DyadicCube& q2) { return q1.contains(q2); }

/// 17 significant digits (bit-faithful), with ".0" appended when the result looks integral.
std::string format_double(double v);

/// "Q(n,k)=(a,b]"
std::string to_string(const DyadicCube& q);
std::ostream& operator<<(std::ostream& os, const DyadicCube& q);

} // namespace vcz
