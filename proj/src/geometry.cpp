#include "sublinq/geometry.hpp"

#include <algorithm>
#include <stdexcept>

namespace sublinq {

double sq_dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double dist(const Vec& a, const Vec& b) { return std::sqrt(sq_dist(a, b)); }

double cheb_dist(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

double unit_ball_volume(int n) {
    return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double Box::volume() const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) v *= (hi[i] - lo[i]);
    return v;
}

bool Box::contains_closed(const Vec& x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    return true;
}

bool Box::contains_half_open(const Vec& x) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
        if (x[i] < lo[i] || x[i] >= hi[i]) return false;
    return true;
}

double Box::overlap_volume(const Box& other) const {
    double v = 1.0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        const double w = std::min(hi[i], other.hi[i]) - std::max(lo[i], other.lo[i]);
        if (w <= 0.0) return 0.0;
        v *= w;
    }
    return v;
}

Box DyadicCube::box() const {
    const double s = side();
    Box b;
    b.lo.resize(coords.size());
    b.hi.resize(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) {
        b.lo[i] = static_cast<double>(coords[i]) * s;
        b.hi[i] = static_cast<double>(coords[i] + 1) * s;
    }
    return b;
}

DyadicCube dyadic_ancestor(const Vec& x, int level) {
    DyadicCube q;
    q.level = level;
    q.coords.resize(x.size());
    const double scale = std::ldexp(1.0, level);
    for (std::size_t i = 0; i < x.size(); ++i)
        q.coords[i] = static_cast<std::int64_t>(std::floor(x[i] * scale));
    return q;
}

}  // namespace sublinq
