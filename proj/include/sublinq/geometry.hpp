#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace sublinq {

using Vec = std::vector<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Measure convention: inf * 0 = 0, so null sets never contribute to
// weighted sums.
inline double wmul(double value, double weight) {
    if (weight == 0.0) return 0.0;
    return value * weight;
}

double sq_dist(const Vec& a, const Vec& b);
double dist(const Vec& a, const Vec& b);
double cheb_dist(const Vec& a, const Vec& b);

// Lebesgue volume of the unit ball in dimension n.
double unit_ball_volume(int n);

struct Box {
    Vec lo;
    Vec hi;

    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const;
    bool contains_closed(const Vec& x) const;
    bool contains_half_open(const Vec& x) const;
    // Volume of the intersection with another box. Closure does not matter
    // for volumes.
    double overlap_volume(const Box& other) const;
};

// Dyadic cube at `level` with integer corner `coords`: side 2^-level,
// cube = prod_i [coords_i * 2^-level, (coords_i + 1) * 2^-level).
// Positive levels are finer, negative levels are coarser.
struct DyadicCube {
    int level = 0;
    std::vector<std::int64_t> coords;

    double side() const { return std::ldexp(1.0, -level); }
    Box box() const;
    bool operator==(const DyadicCube&) const = default;
    bool operator<(const DyadicCube& o) const {
        if (level != o.level) return level < o.level;
        return coords < o.coords;
    }
};

// The dyadic cube at `level` containing x (half-open convention).
DyadicCube dyadic_ancestor(const Vec& x, int level);

}  // namespace sublinq
