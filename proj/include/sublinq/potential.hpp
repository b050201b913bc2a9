#pragma once

#include <cstddef>
#include <vector>

#include "sublinq/kernel.hpp"
#include "sublinq/measure.hpp"

namespace sublinq {

// G(nu)(x) = integral G(x, y) dnu(y); cells through their quadrature
// samples. +inf propagates.
GridFunction apply_potential(const KernelSpec& k, const DiscreteMeasure& nu,
                             const std::vector<Vec>& query);
double apply_potential_at(const KernelSpec& k, const DiscreteMeasure& nu, const Vec& x);

// Hardy split of the min kernel on the half-line:
//   hardy_plus(nu, x)  = integral over (0, x]   of y dnu(y)
//   hardy_minus(nu, x) = x * nu((x, +inf))
// An atom exactly at x belongs to the plus part, so that
// hardy_plus + hardy_minus = G(nu) holds term by term.
double hardy_plus(const DiscreteMeasure& nu, double x);
double hardy_minus(const DiscreteMeasure& nu, double x);

// Exact best constant of the one-dimensional (1, q) inequality:
// kappa = (integral x^q dsigma)^{1/q}.
double kappa_1d(const DiscreteMeasure& sigma, double q);

// kappa of sigma restricted to the open tail (a, +inf); atoms at a excluded.
double kappa_localized(const DiscreteMeasure& sigma, double q, double a);

// K(sigma)(x) = x * (integral over [x, +inf) of y^q dsigma)^{1/(1-q)}.
// The tail is closed at x, which makes K upper semicontinuous at atoms and
// lets the envelope count an atom at x exactly once.
double k_potential(const DiscreteMeasure& sigma, double q, double x);

struct EnvelopeSample {
    double x = 0.0;
    double head_term = 0.0;  // (integral over (0, x) of y dsigma)^{1/(1-q)}
    double k_term = 0.0;     // K(sigma)(x)
    double envelope = 0.0;   // head_term + k_term
};

std::vector<EnvelopeSample> envelope(const DiscreteMeasure& sigma, double q,
                                     const std::vector<double>& xs);

struct CapacityResult {
    double value = 0.0;
    std::vector<double> equilibrium_weights;
    std::vector<std::size_t> active_constraints;  // indices with G(lambda) ~ 1
    std::vector<double> potential;                // G(lambda) at the input points
    std::vector<double> dual;                     // LP row multipliers
};

// Inner capacity of a finite point set: the LP
//   maximize sum lambda_i  s.t.  sum_j G(x_i, x_j) lambda_j <= 1, lambda >= 0.
// Requires G(x, x) > 0 at every input point; a kernel column identically
// zero makes the LP unbounded and is reported as a degeneracy error.
CapacityResult finite_capacity(const KernelSpec& k, const std::vector<Vec>& points,
                               double feas_tol = 1e-9);

}  // namespace sublinq
