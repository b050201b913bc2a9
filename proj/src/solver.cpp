#include "sublinq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sublinq {

namespace {

double pow_q(double v, double q) { return v == 0.0 ? 0.0 : std::pow(v, q); }

}  // namespace

MatrixIterationResult iterate_matrix_fixed_point(const std::vector<std::vector<double>>& K,
                                                 const std::vector<double>& w, double q,
                                                 const SolveOptions& opts) {
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("fixed point: q must lie in (0, 1)");
    if (!(opts.tolerance > 0.0) || opts.max_iterations < 1)
        throw std::invalid_argument("fixed point: bad solve options");
    const std::size_t n = w.size();
    MatrixIterationResult res;
    res.report.seed_scale = 1.0;
    if (n == 0) {
        res.report.converged = true;
        return res;
    }

    auto apply = [&](const std::vector<double>& u) {
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += wmul(K[i][j] * pow_q(u[j], q), w[j]);
            out[i] = s;
        }
        return out;
    };

    // G sigma at the sample points; also detects degenerate kernel columns
    // (vanishing against every positively weighted row).
    std::vector<double> gsig(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += wmul(K[i][j], w[j]);
        gsig[i] = s;
        if (std::isinf(s))
            throw std::invalid_argument(
                "fixed point: G(sigma) is infinite at a sample point; use cell measures or a "
                "bounded kernel");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (w[j] <= 0.0) continue;
        bool vanishes = true;
        for (std::size_t i = 0; i < n; ++i)
            if (w[i] > 0.0 && K[i][j] != 0.0) vanishes = false;
        if (vanishes) res.report.degenerate_columns.push_back(j);
    }

    const double e = 1.0 / (1.0 - q);
    std::vector<double> seed(n);
    for (std::size_t i = 0; i < n; ++i) seed[i] = std::pow(gsig[i], e);

    double c0 = opts.seed_scale > 0.0 ? opts.seed_scale : 1.0;
    std::vector<double> u(n), next;
    auto monotone_from = [&](const std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < n; ++i)
            if (b[i] < a[i] - 1e-12 * std::max(1.0, a[i])) return false;
        return true;
    };
    for (int attempt = 0;; ++attempt) {
        for (std::size_t i = 0; i < n; ++i) u[i] = c0 * seed[i];
        next = apply(u);
        if (opts.seed_scale > 0.0 || monotone_from(u, next)) break;
        if (attempt >= 60)
            throw std::runtime_error("fixed point: could not verify an upward first step");
        c0 *= 0.5;
    }
    res.report.seed_scale = c0;

    auto trace_norm = [&](const std::vector<double>& v) {
        return lq_norm_aligned(v, w, q);
    };
    res.report.norm_trace.push_back(trace_norm(u));
    const double norm0 = std::max(res.report.norm_trace.front(), 1e-300);

    bool stopped = false;
    int j = 0;
    for (; j < opts.max_iterations; ++j) {
        if (!monotone_from(u, next)) res.report.monotone_ok = false;
        res.report.norm_trace.push_back(trace_norm(next));
        if (res.report.norm_trace.back() > opts.divergence_factor * norm0 ||
            std::isinf(res.report.norm_trace.back())) {
            res.report.diverged = true;
            u = next;
            break;
        }
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            diff = std::max(diff, std::abs(next[i] - u[i]) / std::max(1.0, u[i]));
        u = next;
        if (diff <= opts.tolerance) {
            stopped = true;
            ++j;
            break;
        }
        next = apply(u);
    }
    res.report.iterations = j;

    if (res.report.diverged) {
        res.report.final_residual = kInf;
    } else {
        const auto fixed = apply(u);
        double resid = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            resid = std::max(resid, std::abs(fixed[i] - u[i]) / std::max(1.0, u[i]));
        res.report.final_residual = resid;
    }
    res.report.converged =
        stopped && !res.report.diverged && res.report.final_residual <= 10.0 * opts.tolerance;
    res.u = std::move(u);
    return res;
}

double SolveResult::eval(const Vec& x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < u.points.size(); ++j)
        s += wmul(kernel_eval(kernel, x, u.points[j]) * std::pow(u.values[j], q),
                  sample_weights[j]);
    return s;
}

SolveResult solve_fixed_point(const KernelSpec& k, const DiscreteMeasure& sigma, double q,
                              const SolveOptions& opts) {
    sigma.validate();
    const auto smp = sigma.samples();
    const std::size_t n = smp.size();
    std::vector<std::vector<double>> K(n, std::vector<double>(n));
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = smp[i].w;
        for (std::size_t j = 0; j < n; ++j) K[i][j] = kernel_eval(k, smp[i].x, smp[j].x);
    }
    auto it = iterate_matrix_fixed_point(K, w, q, opts);

    SolveResult res;
    res.kernel = k;
    res.sigma = sigma;
    res.q = q;
    res.report = std::move(it.report);
    res.u.points.reserve(n);
    res.sample_weights = std::move(w);
    for (const auto& s : smp) res.u.points.push_back(s.x);
    res.u.values = std::move(it.u);
    return res;
}

SupersolutionCheck verify_supersolution(const GridFunction& u, const KernelSpec& k,
                                        const DiscreteMeasure& sigma, double q,
                                        double tol_scale) {
    const auto smp = sigma.samples();
    std::vector<double> uv(smp.size());
    for (std::size_t i = 0; i < smp.size(); ++i) uv[i] = u.value_at(smp[i].x);
    SupersolutionCheck out;
    double scale = 1.0;
    for (double v : uv) scale = std::max(scale, v);
    // G(u^q dsigma) at every sample point, compared against u there.
    for (std::size_t i = 0; i < smp.size(); ++i) {
        double g = 0.0;
        for (std::size_t j = 0; j < smp.size(); ++j)
            g += wmul(kernel_eval(k, smp[i].x, smp[j].x) * std::pow(uv[j], q), smp[j].w);
        out.max_violation = std::max(out.max_violation, g - uv[i]);
    }
    out.ok = out.max_violation <= tol_scale * scale;
    return out;
}

LowerBoundReport check_lower_bounds(const SolveResult& res) {
    LowerBoundReport rep;
    const double q = res.q;
    const double e = 1.0 / (1.0 - q);
    const double c = std::pow(1.0 - q, e);
    const auto& pts = res.u.points;
    // (1-q)^{1/(1-q)} (G sigma)^{1/(1-q)} <= u, sharp for strong-max kernels.
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double gs = apply_potential_at(res.kernel, res.sigma, pts[i]);
        const double bound = c * std::pow(gs, e);
        const double margin = res.u.values[i] - bound;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.witness = pts[i];
        }
        if (res.u.values[i] < bound * (1.0 - 1e-12) - 1e-300) {
            rep.ok = false;
            rep.witness = pts[i];
        }
    }
    // Half-line tail identity u(x) >= x * integral over [x, inf) u^q dsigma.
    if (res.sigma.domain == DomainKind::HalfLine) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            double tail = 0.0;
            for (std::size_t jj = 0; jj < pts.size(); ++jj)
                if (pts[jj][0] >= pts[i][0])
                    tail += std::pow(res.u.values[jj], q) * res.sample_weights[jj];
            const double bound = pts[i][0] * tail;
            if (res.u.values[i] < bound * (1.0 - 1e-12) - 1e-300) {
                rep.tail_ok = false;
                rep.tail_witness = pts[i];
            }
        }
    }
    return rep;
}

EnvelopeCheck check_envelope(const SolveResult& res, const std::vector<double>& xs) {
    if (res.sigma.domain != DomainKind::HalfLine)
        throw std::invalid_argument("check_envelope requires a half-line instance");
    EnvelopeCheck out;
    const auto env = envelope(res.sigma, res.q, xs);
    const double q = res.q;
    const double c_head = std::pow(1.0 - q, 1.0 / (1.0 - q));
    for (const auto& e : env) {
        const double uval = res.eval({e.x});
        if (uval < c_head * e.head_term * (1.0 - 1e-12)) out.head_bound_ok = false;
        if (e.envelope == 0.0) {
            if (uval > 0.0) out.excluded.push_back(e.x);
            continue;
        }
        const double ratio = uval / e.envelope;
        out.c_lower = std::min(out.c_lower, ratio);
        out.c_upper = std::max(out.c_upper, ratio);
    }
    return out;
}

double embedding_constant_estimate(const KernelSpec& k, const DiscreteMeasure& sigma, double q,
                                   const std::vector<Vec>& dirac_grid, int mixtures,
                                   std::uint64_t seed) {
    const auto smp = sigma.samples();
    std::vector<double> weights(smp.size());
    for (std::size_t i = 0; i < smp.size(); ++i) weights[i] = smp[i].w;

    auto ratio_for = [&](const std::vector<Vec>& support, const std::vector<double>& mass) {
        double total = 0.0;
        for (double m : mass) total += m;
        if (total == 0.0) return 0.0;
        std::vector<double> gnu(smp.size(), 0.0);
        for (std::size_t i = 0; i < smp.size(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < support.size(); ++j)
                s += wmul(kernel_eval(k, smp[i].x, support[j]), mass[j]);
            gnu[i] = s;
        }
        return lq_norm_aligned(gnu, weights, q) / total;
    };

    double best = 0.0;
    for (const auto& y : dirac_grid) best = std::max(best, ratio_for({y}, {1.0}));

    if (mixtures > 0 && !dirac_grid.empty()) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::size_t> pick(0, dirac_grid.size() - 1);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int m = 0; m < mixtures; ++m) {
            const std::size_t parts = 2 + (m % 4);
            std::vector<Vec> support;
            std::vector<double> mass;
            double total = 0.0;
            for (std::size_t p = 0; p < parts; ++p) {
                support.push_back(dirac_grid[pick(rng)]);
                const double v = unif(rng) + 1e-9;
                mass.push_back(v);
                total += v;
            }
            for (double& v : mass) v /= total;
            best = std::max(best, ratio_for(support, mass));
        }
    }
    return best;
}

}  // namespace sublinq
