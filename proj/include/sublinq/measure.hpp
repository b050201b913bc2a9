#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublinq/geometry.hpp"

namespace sublinq {

enum class DomainKind { HalfLine, Euclidean, UpperHalfSpace };

std::string domain_name(DomainKind d);

struct PointAtom {
    Vec location;
    double weight = 0.0;
};

// Uniform mass `weight` spread over an axis-aligned box. Integrals against
// the measure realise the cell through its dyadic midpoint quadrature (see
// DiscreteMeasure::quad_level); masses of boxes use exact volume overlap.
struct CellAtom {
    Box box;
    double weight = 0.0;

    double volume() const { return box.volume(); }
    double density() const { return weight / box.volume(); }
};

struct WeightedSample {
    Vec x;
    double w = 0.0;
    bool from_cell = false;
};

// A finite nonnegative measure given by point atoms plus uniform-density
// cells. `dimension` is the ambient coordinate count; for UpperHalfSpace
// the boundary dimension is dimension - 1 and the last coordinate is the
// height.
struct DiscreteMeasure {
    int dimension = 1;
    DomainKind domain = DomainKind::Euclidean;
    std::vector<PointAtom> point_atoms;
    std::vector<CellAtom> cell_atoms;
    // Dyadic refinement of the midpoint quadrature: every cell is split into
    // 2^quad_level pieces per axis, each represented by its midpoint.
    int quad_level = 4;

    void validate() const;  // throws std::invalid_argument on bad atoms
    std::vector<WeightedSample> samples() const;
    bool has_positive_point_mass() const;
    bool is_zero() const;
};

double total_mass(const DiscreteMeasure& m);

enum class BoxClosure { Closed, HalfOpen };

// Mass of an axis-aligned box. Point atoms on the boundary count fully in
// the Closed convention (the default everywhere except dyadic cubes).
// Cells contribute weight * vol(box /\ cell) / vol(cell), exactly.
double box_mass(const DiscreteMeasure& m, const Box& box,
                BoxClosure closure = BoxClosure::Closed);

// A nonnegative function (+inf allowed) sampled on a finite point set.
struct GridFunction {
    std::vector<Vec> points;
    std::vector<double> values;

    std::optional<std::size_t> find(const Vec& p) const;
    double value_at(const Vec& p) const;  // throws if p is not a grid point
};

GridFunction scale(const GridFunction& f, double c);

// (Integral |f|^q dsigma)^{1/q} under the measure's quadrature. Throws if a
// sample point of sigma is not covered by f's grid.
double lq_norm(const GridFunction& f, const DiscreteMeasure& sigma, double q);

// sup_{t>0} t * sigma({f > t})^{1/q}, evaluated exactly at the sorted
// distinct values of f (the sup over each constancy interval of the
// distribution function is attained in the limit at these thresholds).
double weak_lq_norm(const GridFunction& f, const DiscreteMeasure& sigma, double q);

// Aligned variants used internally when values are already ordered like
// DiscreteMeasure::samples().
double lq_norm_aligned(std::span<const double> values, std::span<const double> weights,
                       double q);
double weak_lq_norm_aligned(std::span<const double> values, std::span<const double> weights,
                            double q);

}  // namespace sublinq
