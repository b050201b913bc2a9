#include "sublinq/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sublinq {

std::size_t MatrixK::index_of(const Vec& p) const {
    for (std::size_t i = 0; i < points.size(); ++i)
        if (points[i] == p) return i;
    std::ostringstream os;
    os << "matrix kernel lookup miss at (";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    throw std::invalid_argument(os.str());
}

std::string KernelSpec::name() const {
    struct V {
        std::string operator()(const MinHalfLineK&) const { return "min"; }
        std::string operator()(const RieszK& k) const {
            return "riesz(n=" + std::to_string(k.n) + ",alpha=" + std::to_string(k.alpha) + ")";
        }
        std::string operator()(const PoissonHalfSpaceK& k) const {
            return "poisson(n=" + std::to_string(k.n) + ")";
        }
        std::string operator()(const SymmetrizedPoissonK& k) const {
            return "ppstar(n=" + std::to_string(k.n) + ")";
        }
        std::string operator()(const MatrixK&) const { return "matrix"; }
    };
    return std::visit(V{}, variant);
}

KernelSpec min_half_line_kernel() { return {MinHalfLineK{}, 1.0, 1.0}; }

KernelSpec riesz_kernel(int n, double alpha, double declared_h) {
    if (!(alpha > 0.0 && alpha < n)) throw std::invalid_argument("riesz kernel needs 0 < alpha < n");
    return {RieszK{n, alpha}, 1.0, declared_h};
}

KernelSpec poisson_half_space_kernel(int n) { return {PoissonHalfSpaceK{n}, 1.0, 1.0}; }

KernelSpec symmetrized_poisson_kernel(int n) {
    return {SymmetrizedPoissonK{n}, 1.0, std::ldexp(1.0, n + 1)};
}

KernelSpec matrix_kernel(std::vector<Vec> points, std::vector<std::vector<double>> values,
                         double declared_a, double declared_h) {
    if (values.size() != points.size())
        throw std::invalid_argument("matrix kernel: row count does not match point count");
    for (const auto& row : values) {
        if (row.size() != points.size())
            throw std::invalid_argument("matrix kernel: column count does not match point count");
        for (double v : row)
            if (!(v >= 0.0)) throw std::invalid_argument("matrix kernel values must be >= 0");
    }
    return {MatrixK{std::move(points), std::move(values)}, declared_a, declared_h};
}

double poisson_constant(int n) {
    return std::tgamma(0.5 * (n + 1)) / std::pow(M_PI, 0.5 * (n + 1));
}

double poisson_kernel_value(int n, double sq_norm_x, double y) {
    return poisson_constant(n) * y / std::pow(sq_norm_x + y * y, 0.5 * (n + 1));
}

namespace {

double eval_poisson_pair(int n, const Vec& a, const Vec& b) {
    // One argument interior (n+1 coords, height last), the other boundary
    // (n coords); accepted in either order.
    const Vec* interior = nullptr;
    const Vec* boundary = nullptr;
    if (static_cast<int>(a.size()) == n + 1 && static_cast<int>(b.size()) == n) {
        interior = &a;
        boundary = &b;
    } else if (static_cast<int>(b.size()) == n + 1 && static_cast<int>(a.size()) == n) {
        interior = &b;
        boundary = &a;
    } else {
        throw std::invalid_argument("poisson kernel expects one interior and one boundary point");
    }
    const double y = interior->back();
    if (!(y > 0.0)) throw std::invalid_argument("poisson kernel: interior point must have height > 0");
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = (*interior)[i] - (*boundary)[i];
        sq += d * d;
    }
    return poisson_kernel_value(n, sq, y);
}

}  // namespace

double kernel_eval(const KernelSpec& k, const Vec& x, const Vec& y) {
    struct V {
        const Vec& x;
        const Vec& y;
        double operator()(const MinHalfLineK&) const {
            if (x.size() != 1 || y.size() != 1)
                throw std::invalid_argument("min kernel is one-dimensional");
            if (x[0] <= 0.0 || y[0] <= 0.0)
                throw std::invalid_argument("min kernel arguments must be positive");
            return std::min(x[0], y[0]);
        }
        double operator()(const RieszK& k) const {
            if (static_cast<int>(x.size()) != k.n || static_cast<int>(y.size()) != k.n)
                throw std::invalid_argument("riesz kernel dimension mismatch");
            const double r = dist(x, y);
            if (r == 0.0) return kInf;
            return std::pow(r, k.alpha - k.n);
        }
        double operator()(const PoissonHalfSpaceK& k) const { return eval_poisson_pair(k.n, x, y); }
        double operator()(const SymmetrizedPoissonK& k) const {
            if (static_cast<int>(x.size()) != k.n + 1 || static_cast<int>(y.size()) != k.n + 1)
                throw std::invalid_argument("ppstar kernel expects upper-half-space points");
            const double h = x.back() + y.back();
            if (!(h > 0.0)) throw std::invalid_argument("ppstar kernel: heights must be positive");
            double sq = 0.0;
            for (int i = 0; i < k.n; ++i) {
                const double d = x[i] - y[i];
                sq += d * d;
            }
            return poisson_kernel_value(k.n, sq, h);
        }
        double operator()(const MatrixK& k) const { return k.values[k.index_of(x)][k.index_of(y)]; }
    };
    return std::visit(V{x, y}, k.variant);
}

double check_quasi_symmetry(const KernelSpec& k, const std::vector<std::pair<Vec, Vec>>& samples) {
    double worst = 1.0;
    for (const auto& [x, y] : samples) {
        const double g = kernel_eval(k, x, y);
        const double gt = kernel_eval(k, y, x);
        if (g == 0.0 && gt == 0.0) continue;  // 0/0 -> 1
        if (g == 0.0 || gt == 0.0) return kInf;
        worst = std::max(worst, std::max(g / gt, gt / g));
    }
    return worst;
}

WeakMaxReport check_weak_max(const KernelSpec& k, const DiscreteMeasure& mu,
                             const std::vector<Vec>& grid) {
    if (grid.empty()) throw std::invalid_argument("check_weak_max: grid must be nonempty");
    const auto smp = mu.samples();
    auto potential_at = [&](const Vec& x) {
        double s = 0.0;
        for (const auto& a : smp) s += wmul(kernel_eval(k, x, a.x), a.w);
        return s;
    };
    WeakMaxReport rep;
    rep.witness_point = grid.front();
    for (const auto& a : smp) {
        const double v = potential_at(a.x);
        if (v > rep.sup_on_support) rep.sup_on_support = v;
        if (v > rep.sup_on_grid) {
            rep.sup_on_grid = v;
            rep.witness_point = a.x;
        }
    }
    for (const auto& x : grid) {
        const double v = potential_at(x);
        if (v > rep.sup_on_grid) {
            rep.sup_on_grid = v;
            rep.witness_point = x;
        }
    }
    if (rep.sup_on_support > 0.0)
        rep.empirical_h = rep.sup_on_grid / rep.sup_on_support;
    else
        rep.empirical_h = rep.sup_on_grid > 0.0 ? kInf : 1.0;
    return rep;
}

}  // namespace sublinq
