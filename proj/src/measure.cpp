#include "sublinq/measure.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sublinq {

namespace {

std::string format_point(const Vec& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) os << ", ";
        os << p[i];
    }
    os << ")";
    return os.str();
}

void check_in_domain(const DiscreteMeasure& m, const Vec& p, const char* what) {
    if (static_cast<int>(p.size()) != m.dimension)
        throw std::invalid_argument(std::string(what) + " has dimension " +
                                    std::to_string(p.size()) + ", measure expects " +
                                    std::to_string(m.dimension));
    if (m.domain == DomainKind::HalfLine && p[0] <= 0.0)
        throw std::invalid_argument(std::string(what) + " " + format_point(p) +
                                    " is outside the half-line (0, +inf)");
    if (m.domain == DomainKind::UpperHalfSpace && p.back() <= 0.0)
        throw std::invalid_argument(std::string(what) + " " + format_point(p) +
                                    " has nonpositive height in the upper half-space");
}

}  // namespace

std::string domain_name(DomainKind d) {
    switch (d) {
        case DomainKind::HalfLine: return "half_line";
        case DomainKind::Euclidean: return "euclidean";
        case DomainKind::UpperHalfSpace: return "upper_half_space";
    }
    return "?";
}

void DiscreteMeasure::validate() const {
    if (dimension < 1) throw std::invalid_argument("measure dimension must be positive");
    if (domain == DomainKind::HalfLine && dimension != 1)
        throw std::invalid_argument("half-line measures are one-dimensional");
    if (quad_level < 0 || quad_level > 20)
        throw std::invalid_argument("quad_level out of range [0, 20]");
    for (const auto& a : point_atoms) {
        if (!(a.weight >= 0.0)) throw std::invalid_argument("point atom weight must be >= 0");
        check_in_domain(*this, a.location, "point atom");
    }
    for (const auto& c : cell_atoms) {
        if (!(c.weight >= 0.0)) throw std::invalid_argument("cell weight must be >= 0");
        if (static_cast<int>(c.box.lo.size()) != dimension ||
            static_cast<int>(c.box.hi.size()) != dimension)
            throw std::invalid_argument("cell box dimension mismatch");
        for (int i = 0; i < dimension; ++i)
            if (!(c.box.lo[i] < c.box.hi[i]))
                throw std::invalid_argument("cell box must satisfy lo < hi componentwise");
        // Cells may touch the domain boundary (lo = 0); their quadrature
        // samples stay strictly inside.
        if (domain == DomainKind::HalfLine && c.box.lo[0] < 0.0)
            throw std::invalid_argument("cell extends outside the half-line");
        if (domain == DomainKind::UpperHalfSpace && c.box.lo[dimension - 1] < 0.0)
            throw std::invalid_argument("cell extends below the boundary hyperplane");
    }
}

std::vector<WeightedSample> DiscreteMeasure::samples() const {
    std::vector<WeightedSample> out;
    std::size_t pieces = std::size_t(1) << (std::size_t(quad_level) * dimension);
    out.reserve(point_atoms.size() + cell_atoms.size() * pieces);
    for (const auto& a : point_atoms) out.push_back({a.location, a.weight, false});
    const std::int64_t per_axis = std::int64_t(1) << quad_level;
    for (const auto& c : cell_atoms) {
        const double piece_weight = c.weight / static_cast<double>(pieces);
        std::vector<std::int64_t> idx(dimension, 0);
        while (true) {
            Vec mid(dimension);
            for (int i = 0; i < dimension; ++i) {
                const double h = (c.box.hi[i] - c.box.lo[i]) / static_cast<double>(per_axis);
                mid[i] = c.box.lo[i] + (static_cast<double>(idx[i]) + 0.5) * h;
            }
            out.push_back({std::move(mid), piece_weight, true});
            int axis = 0;
            while (axis < dimension && ++idx[axis] == per_axis) idx[axis++] = 0;
            if (axis == dimension) break;
        }
    }
    return out;
}

bool DiscreteMeasure::has_positive_point_mass() const {
    for (const auto& a : point_atoms)
        if (a.weight > 0.0) return true;
    return false;
}

bool DiscreteMeasure::is_zero() const {
    return total_mass(*this) == 0.0;
}

double total_mass(const DiscreteMeasure& m) {
    double s = 0.0;
    for (const auto& a : m.point_atoms) s += a.weight;
    for (const auto& c : m.cell_atoms) s += c.weight;
    return s;
}

double box_mass(const DiscreteMeasure& m, const Box& box, BoxClosure closure) {
    if (box.dim() != m.dimension)
        throw std::invalid_argument("box_mass: box dimension " + std::to_string(box.dim()) +
                                    " does not match measure dimension " +
                                    std::to_string(m.dimension));
    double s = 0.0;
    for (const auto& a : m.point_atoms) {
        const bool inside = closure == BoxClosure::Closed ? box.contains_closed(a.location)
                                                          : box.contains_half_open(a.location);
        if (inside) s += a.weight;
    }
    for (const auto& c : m.cell_atoms)
        s += c.weight * (box.overlap_volume(c.box) / c.volume());
    return s;
}

std::optional<std::size_t> GridFunction::find(const Vec& p) const {
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i] == p) return i;
    return std::nullopt;
}

double GridFunction::value_at(const Vec& p) const {
    auto i = find(p);
    if (!i) throw std::invalid_argument("grid function has no sample at " + format_point(p));
    return values[*i];
}

GridFunction scale(const GridFunction& f, double c) {
    GridFunction g = f;
    for (std::size_t i = 0; i < g.values.size(); ++i)
        g.values[i] = (c == 0.0) ? 0.0 : f.values[i] * c;
    return g;
}

namespace {

// Resolves f's values at the measure's sample points, preserving sample
// order. Throws naming the first uncovered sample.
void resolve_on_samples(const GridFunction& f, const DiscreteMeasure& sigma,
                        std::vector<double>& values, std::vector<double>& weights) {
    const auto smp = sigma.samples();
    values.clear();
    weights.clear();
    values.reserve(smp.size());
    weights.reserve(smp.size());
    std::map<Vec, std::size_t> index;
    for (std::size_t i = 0; i < f.points.size(); ++i) index.emplace(f.points[i], i);
    for (const auto& s : smp) {
        auto it = index.find(s.x);
        if (it == index.end())
            throw std::invalid_argument("grid function does not cover the measure sample at " +
                                        format_point(s.x));
        values.push_back(f.values[it->second]);
        weights.push_back(s.w);
    }
}

}  // namespace

double lq_norm_aligned(std::span<const double> values, std::span<const double> weights,
                       double q) {
    if (!(q > 0.0)) throw std::invalid_argument("lq_norm: q must be positive");
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0) throw std::invalid_argument("lq_norm: negative sample value");
        s += wmul(std::pow(values[i], q), weights[i]);
    }
    return std::pow(s, 1.0 / q);
}

double weak_lq_norm_aligned(std::span<const double> values, std::span<const double> weights,
                            double q) {
    if (!(q > 0.0)) throw std::invalid_argument("weak_lq_norm: q must be positive");
    // Distinct positive values, descending. For each threshold v the sup of
    // t * sigma({f > t})^{1/q} over t < v is attained as t -> v^- with
    // sigma({f >= v}).
    std::set<double, std::greater<double>> distinct;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] < 0.0) throw std::invalid_argument("weak_lq_norm: negative sample value");
        if (values[i] > 0.0 && weights[i] > 0.0) distinct.insert(values[i]);
    }
    double best = 0.0;
    for (double v : distinct) {
        double tail = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (values[i] >= v) tail += weights[i];
        if (std::isinf(v)) {
            if (tail > 0.0) return kInf;
            continue;
        }
        best = std::max(best, v * std::pow(tail, 1.0 / q));
    }
    return best;
}

double lq_norm(const GridFunction& f, const DiscreteMeasure& sigma, double q) {
    std::vector<double> values, weights;
    resolve_on_samples(f, sigma, values, weights);
    return lq_norm_aligned(values, weights, q);
}

double weak_lq_norm(const GridFunction& f, const DiscreteMeasure& sigma, double q) {
    std::vector<double> values, weights;
    resolve_on_samples(f, sigma, values, weights);
    return weak_lq_norm_aligned(values, weights, q);
}

}  // namespace sublinq
