#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "sublinq/measure.hpp"
#include "sublinq/solver.hpp"

namespace sublinq {

// Query family for the maximal-operator sup. Exactness tiering:
//   UncenteredCubes1D  exact (piecewise closed-form candidates), dimension 1;
//   CenteredBalls      exact up to a per-piece line search (<= 1e-9 relative)
//                      when cells are present, exact for point atoms;
//   CenteredCubes      same contract as CenteredBalls, any dimension;
//   UncenteredApprox   max over a finite shifted dyadic cube family,
//                      one-sided lower-bound semantics.
// Gauges: cubes use Lebesgue volume |Q|^{1-alpha/n}; balls use Lebesgue ball
// volume with the same exponent.
struct MaxQueryMode {
    enum class Kind { CenteredBalls, CenteredCubes, UncenteredCubes1D, UncenteredApprox };
    Kind kind = Kind::UncenteredCubes1D;
    int refinement = 3;  // UncenteredApprox only

    static MaxQueryMode centered_balls() { return {Kind::CenteredBalls}; }
    static MaxQueryMode centered_cubes() { return {Kind::CenteredCubes}; }
    static MaxQueryMode uncentered_1d() { return {Kind::UncenteredCubes1D}; }
    static MaxQueryMode uncentered_approx(int refinement) {
        return {Kind::UncenteredApprox, refinement};
    }
};

// M_alpha nu (x) = sup over the mode's family F containing x of
// |F|_nu / |F|^{1 - alpha/n}. A point atom at x gives +inf in the exact
// modes (the pinned family shrinks around it).
double frac_max(const DiscreteMeasure& nu, double alpha, const Vec& x, MaxQueryMode mode);

// M_sigma nu (x) = sup over the family of |F|_nu / |F|_sigma; 0/0 members
// are skipped, positive/0 gives +inf.
double measure_max(const DiscreteMeasure& nu, const DiscreteMeasure& sigma, const Vec& x,
                   MaxQueryMode mode);

// Finitely supported assignment of weights to dyadic cubes.
struct DyadicWeightMap {
    // level -> (integer coords -> rho)
    std::map<int, std::map<std::vector<std::int64_t>, double>> levels;

    void insert(const DyadicCube& cube, double rho);  // throws on duplicates
    std::size_t size() const;
    std::vector<std::pair<DyadicCube, double>> entries() const;
};

// M_rho nu (x) = max over supported dyadic cubes containing x of
// rho_Q * nu(Q); the lookup walks x's ancestor at each supported level.
double dyadic_max(const DiscreteMeasure& nu, const DyadicWeightMap& rho, const Vec& x);

// Solved instance of u = M_alpha(u^q dsigma) on sigma's quadrature mesh.
struct MaximalSolveResult {
    GridFunction u;
    std::vector<double> sample_weights;
    IterationReport report;
    DiscreteMeasure weighted_measure;  // u^q dsigma as a subcell measure
    double alpha = 0.0;
    double q = 0.5;
    MaxQueryMode mode;

    double eval(const Vec& x) const;  // one extra application of M_alpha(u^q dsigma)
};

// Monotone iteration u_{j+1} = M_alpha(u_j^q sigma) seeded from
// (M_alpha sigma)^{1/(1-q)}. sigma must be a cell measure: a point atom
// forces M_alpha sigma = +inf at itself and the iteration is meaningless
// from an everywhere-infinite seed. The discrete first step is certified
// upward by the same seed-halving rule as the kernel solver.
MaximalSolveResult maximal_fixed_point(const DiscreteMeasure& sigma, double alpha, double q,
                                       MaxQueryMode mode, const SolveOptions& opts = {});

struct CoverPiece {
    enum class Kind { Ball, Box } kind = Kind::Ball;
    Vec center;          // Ball
    double radius = 0.0; // Ball
    Box box;             // Box

    static CoverPiece ball(Vec c, double r) { return {Kind::Ball, std::move(c), r, {}}; }
    static CoverPiece make_box(Box b) { return {Kind::Box, {}, 0.0, std::move(b)}; }

    Box bounding_box() const;
    bool contains(const Vec& x) const;
};

// Upper bound on the Hausdorff content H^{n-alpha}(E) for E a finite union
// of balls and boxes: the minimum of sum r_i^{n-alpha} over a finite cover
// family (each piece's circumscribed ball, one bounding ball, dyadic cube
// covers at levels 0..depth with cubes replaced by circumscribed balls).
double hausdorff_content_upper(const std::vector<CoverPiece>& E, int n, double alpha, int depth);

struct FrostmanEntry {
    double sigma_mass = 0.0;
    double content_upper = 0.0;
    bool flagged = false;  // sigma(E) > C * (upper bound)^q: a certain violation
};

struct FrostmanReport {
    std::vector<FrostmanEntry> entries;
    bool any_flagged = false;
};

// Necessary-direction violation detector for sigma(E) <= C * H^{n-alpha}(E)^q:
// an upper bound on the content can only certify violations, never the
// condition itself.
FrostmanReport frostman_condition_check(const DiscreteMeasure& sigma,
                                        const std::vector<std::vector<CoverPiece>>& family,
                                        double q, double alpha, double C, int depth = 4);

// Lower bound on the weak constant kappa_w of
// ||M_alpha nu||_{L^{q,inf}(sigma)} <= kappa_w ||nu||, from Dirac measures
// on the given grid. (M_alpha is itself a sup of linear maps, so Diracs
// give only a lower estimate.)
double weak_embedding_estimate_maximal(const DiscreteMeasure& sigma, double alpha, double q,
                                       const std::vector<Vec>& dirac_grid, MaxQueryMode mode);

}  // namespace sublinq
