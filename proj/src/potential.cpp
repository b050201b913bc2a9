#include "sublinq/potential.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sublinq/simplex.hpp"

namespace sublinq {

double apply_potential_at(const KernelSpec& k, const DiscreteMeasure& nu, const Vec& x) {
    double s = 0.0;
    for (const auto& a : nu.samples()) s += wmul(kernel_eval(k, x, a.x), a.w);
    return s;
}

GridFunction apply_potential(const KernelSpec& k, const DiscreteMeasure& nu,
                             const std::vector<Vec>& query) {
    const auto smp = nu.samples();
    GridFunction f;
    f.points = query;
    f.values.reserve(query.size());
    for (const auto& x : query) {
        double s = 0.0;
        for (const auto& a : smp) s += wmul(kernel_eval(k, x, a.x), a.w);
        f.values.push_back(s);
    }
    return f;
}

namespace {

void require_half_line(const DiscreteMeasure& m, const char* op) {
    if (m.domain != DomainKind::HalfLine)
        throw std::invalid_argument(std::string(op) + " requires a half-line measure");
}

}  // namespace

double hardy_plus(const DiscreteMeasure& nu, double x) {
    require_half_line(nu, "hardy_plus");
    double s = 0.0;
    for (const auto& a : nu.samples())
        if (a.x[0] <= x) s += a.x[0] * a.w;
    return s;
}

double hardy_minus(const DiscreteMeasure& nu, double x) {
    require_half_line(nu, "hardy_minus");
    double s = 0.0;
    for (const auto& a : nu.samples())
        if (a.x[0] > x) s += a.w;
    return x * s;
}

double kappa_1d(const DiscreteMeasure& sigma, double q) {
    require_half_line(sigma, "kappa_1d");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("kappa_1d: q must lie in (0, 1)");
    double s = 0.0;
    for (const auto& a : sigma.samples()) s += std::pow(a.x[0], q) * a.w;
    return std::pow(s, 1.0 / q);
}

double kappa_localized(const DiscreteMeasure& sigma, double q, double a) {
    require_half_line(sigma, "kappa_localized");
    if (!(a > 0.0)) throw std::invalid_argument("kappa_localized: a must be positive");
    double s = 0.0;
    for (const auto& smp : sigma.samples())
        if (smp.x[0] > a) s += std::pow(smp.x[0], q) * smp.w;
    return std::pow(s, 1.0 / q);
}

double k_potential(const DiscreteMeasure& sigma, double q, double x) {
    require_half_line(sigma, "k_potential");
    if (!(x > 0.0)) throw std::invalid_argument("k_potential: x must be positive");
    double s = 0.0;
    for (const auto& a : sigma.samples())
        if (a.x[0] >= x) s += std::pow(a.x[0], q) * a.w;
    return x * std::pow(s, 1.0 / (1.0 - q));
}

std::vector<EnvelopeSample> envelope(const DiscreteMeasure& sigma, double q,
                                     const std::vector<double>& xs) {
    require_half_line(sigma, "envelope");
    const auto smp = sigma.samples();
    std::vector<EnvelopeSample> out;
    out.reserve(xs.size());
    for (double x : xs) {
        if (!(x > 0.0)) throw std::invalid_argument("envelope: points must be positive");
        double head = 0.0;
        for (const auto& a : smp)
            if (a.x[0] < x) head += a.x[0] * a.w;
        EnvelopeSample e;
        e.x = x;
        e.head_term = std::pow(head, 1.0 / (1.0 - q));
        e.k_term = k_potential(sigma, q, x);
        e.envelope = e.head_term + e.k_term;
        out.push_back(e);
    }
    return out;
}

CapacityResult finite_capacity(const KernelSpec& k, const std::vector<Vec>& points,
                               double feas_tol) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("finite_capacity: empty point set");
    if (n > 64) throw std::invalid_argument("finite_capacity: at most 64 points supported");

    std::vector<std::vector<double>> A(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double g = kernel_eval(k, points[i], points[j]);
            if (std::isinf(g))
                throw std::invalid_argument(
                    "finite_capacity: kernel is infinite at a point pair; capacity needs a "
                    "finite kernel on the set");
            A[i][j] = g;
        }
    for (std::size_t j = 0; j < n; ++j) {
        bool all_zero = true;
        for (std::size_t i = 0; i < n; ++i)
            if (A[i][j] != 0.0) all_zero = false;
        if (all_zero)
            throw std::runtime_error(
                "finite_capacity: kernel column vanishes at point index " + std::to_string(j) +
                "; the kernel is degenerate on this set and the equilibrium LP is unbounded");
    }

    auto lp = simplex_maximize(A, std::vector<double>(n, 1.0), std::vector<double>(n, 1.0));
    if (lp.status == LpResult::Status::Unbounded)
        throw std::runtime_error("finite_capacity: equilibrium LP unbounded (degenerate kernel)");

    CapacityResult r;
    r.value = lp.value;
    r.equilibrium_weights = lp.x;
    r.dual = lp.dual;
    r.potential.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += A[i][j] * lp.x[j];
        r.potential[i] = s;
        if (s >= 1.0 - feas_tol) r.active_constraints.push_back(i);
    }
    return r;
}

}  // namespace sublinq
