#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sublinq/kernel.hpp"
#include "sublinq/measure.hpp"
#include "sublinq/potential.hpp"

namespace sublinq {

struct SolveOptions {
    double tolerance = 1e-12;    // sup-norm successive-difference stop (hybrid abs/rel)
    int max_iterations = 10000;
    double seed_scale = -1.0;    // c0 for the seed c0 * (G sigma)^{1/(1-q)}; < 0 means auto
    double divergence_factor = 1e15;  // abort when ||u_j|| exceeds this times ||u_0||
};

struct IterationReport {
    int iterations = 0;
    double final_residual = 0.0;  // max over samples of |u - G(u^q dsigma)| / max(1, u)
    bool monotone_ok = true;      // every iterate >= predecessor - 1e-12 * scale
    bool converged = false;
    bool diverged = false;        // overflow guard tripped: embedding likely fails
    double seed_scale = 1.0;      // the c0 actually used
    std::vector<double> norm_trace;  // lq_norm(u_j, sigma, q) for each iterate
    std::vector<std::size_t> degenerate_columns;  // kernel columns vanishing on supp sigma
};

// Monotone iteration u' = K diag(w) u^q for a nonnegative square matrix K
// and weights w; the common core of the kernel, Carleson, and boundary
// solvers. Seeds from c0 * (K w)^{1/(1-q)} and, when c0 < 0, halves c0 from
// 1 (at most 60 times) until the first step is verified upward.
struct MatrixIterationResult {
    std::vector<double> u;
    IterationReport report;
};
MatrixIterationResult iterate_matrix_fixed_point(const std::vector<std::vector<double>>& K,
                                                 const std::vector<double>& w, double q,
                                                 const SolveOptions& opts);

// A solved instance of u = G(u^q dsigma): values on sigma's sample points
// plus the evaluator for arbitrary query points (one extra application of
// G(u^q dsigma), exact for the true fixed point).
struct SolveResult {
    GridFunction u;                       // on sigma's sample points
    std::vector<double> sample_weights;   // aligned with u.points
    IterationReport report;
    KernelSpec kernel;
    DiscreteMeasure sigma;
    double q = 0.5;

    double eval(const Vec& x) const;
};

// Constructs the minimal positive solution by the iteration
// u_{j+1} = G(u_j^q dsigma) from u_0 = c0 (G sigma)^{1/(1-q)}.
// Requires G(sigma) finite at every sample point of sigma.
SolveResult solve_fixed_point(const KernelSpec& k, const DiscreteMeasure& sigma, double q,
                              const SolveOptions& opts = {});

struct SupersolutionCheck {
    bool ok = false;
    double max_violation = 0.0;  // max over samples of G(u^q dsigma) - u
};
SupersolutionCheck verify_supersolution(const GridFunction& u, const KernelSpec& k,
                                        const DiscreteMeasure& sigma, double q,
                                        double tol_scale = 1e-10);

struct LowerBoundReport {
    bool ok = true;
    double worst_margin = kInf;  // min over samples of u - bound
    Vec witness;
    bool tail_ok = true;         // half-line only: u(x) >= x * tail integral
    Vec tail_witness;
};

// Hard lower bounds for supersolutions: u >= (1-q)^{1/(1-q)} (G sigma)^{1/(1-q)}
// at every sample point, and on the half-line the fixed-point tail bound
// u(x) >= x * integral over [x, inf) of u^q dsigma.
LowerBoundReport check_lower_bounds(const SolveResult& res);

struct EnvelopeCheck {
    double c_lower = kInf;
    double c_upper = 0.0;
    std::vector<double> excluded;  // xs where envelope = 0 but u > 0
    bool head_bound_ok = true;     // u >= (1-q)^{1/(1-q)} * head_term
};

// Empirical two-sided envelope constants min/max of u(x)/envelope(x) over xs
// for a solved half-line instance.
EnvelopeCheck check_envelope(const SolveResult& res, const std::vector<double>& xs);

// Certified lower bound on the best embedding constant kappa:
// max over Dirac measures on dirac_grid and `mixtures` random normalized
// mixtures of ||G nu||_{L^q(sigma)} / ||nu||.
double embedding_constant_estimate(const KernelSpec& k, const DiscreteMeasure& sigma, double q,
                                   const std::vector<Vec>& dirac_grid, int mixtures,
                                   std::uint64_t seed = 1);

}  // namespace sublinq
