#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sublinq/geometry.hpp"
#include "sublinq/measure.hpp"

namespace sublinq {

// G(x, y) = min(x, y) on (0, +inf); the Green kernel of -d^2/dx^2 with a
// Dirichlet condition at 0. Symmetric, strong maximum principle.
struct MinHalfLineK {};

// |x - y|^{alpha - n} on R^n, 0 < alpha < n. No normalizing constant: it
// cancels in every inequality this library tests, so callers must not
// normalize twice.
struct RieszK {
    int n = 1;
    double alpha = 0.5;
};

// Poisson kernel of the upper half-space R^{n+1}_+ with the probability
// normalization: P(x, y) = c_n y / (|x|^2 + y^2)^{(n+1)/2} and
// int_{R^n} P(x, y) dx = 1. One argument is an interior point (n+1
// coordinates), the other a boundary point (n coordinates); either order.
struct PoissonHalfSpaceK {
    int n = 1;  // boundary dimension
};

// Kernel of the symmetrized potential between interior points of the upper
// half-space: G((x, y), (xt, yt)) = P(x - xt, y + yt). No diagonal
// singularity since y + yt > 0.
struct SymmetrizedPoissonK {
    int n = 1;  // boundary dimension
};

// Finite kernel table over an explicit point list; the vehicle for exact
// brute-force experiments. values[i][j] = G(points[i], points[j]) and need
// not be symmetric.
struct MatrixK {
    std::vector<Vec> points;
    std::vector<std::vector<double>> values;

    std::size_t index_of(const Vec& p) const;  // throws on lookup miss
};

struct KernelSpec {
    std::variant<MinHalfLineK, RieszK, PoissonHalfSpaceK, SymmetrizedPoissonK, MatrixK> variant;
    double declared_a = 1.0;  // quasi-symmetry constant, >= 1
    double declared_h = 1.0;  // weak maximum principle constant, >= 1

    std::string name() const;
};

KernelSpec min_half_line_kernel();
KernelSpec riesz_kernel(int n, double alpha, double declared_h = 1.0);
KernelSpec poisson_half_space_kernel(int n);
// Declared h = 2^{n+1} for the symmetrized Poisson potential.
KernelSpec symmetrized_poisson_kernel(int n);
KernelSpec matrix_kernel(std::vector<Vec> points, std::vector<std::vector<double>> values,
                         double declared_a = 1.0, double declared_h = 1.0);

// Probability normalization constant c_n = Gamma((n+1)/2) / pi^{(n+1)/2}.
double poisson_constant(int n);
// P(x, y) for x in R^n given as squared norm |x|^2, height y > 0.
double poisson_kernel_value(int n, double sq_norm_x, double y);

// Diagonal singularities evaluate to +inf; they are never clamped.
double kernel_eval(const KernelSpec& k, const Vec& x, const Vec& y);

// Empirical quasi-symmetry constant over sample pairs:
// max over pairs of max(G(x,y)/G(y,x), G(y,x)/G(x,y)), with 0/0 -> 1 and
// finite/0 -> +inf.
double check_quasi_symmetry(const KernelSpec& k, const std::vector<std::pair<Vec, Vec>>& samples);

struct WeakMaxReport {
    double sup_on_support = 0.0;
    double sup_on_grid = 0.0;
    double empirical_h = 1.0;  // sup_on_grid / sup_on_support (1 when both vanish)
    Vec witness_point;
};

// Evaluates G(mu) on mu's own sample points and on grid ∪ support, and
// reports the empirical weak-maximum ratio.
WeakMaxReport check_weak_max(const KernelSpec& k, const DiscreteMeasure& mu,
                             const std::vector<Vec>& grid);

}  // namespace sublinq
