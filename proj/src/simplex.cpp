#include "sublinq/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sublinq {

LpResult simplex_maximize(const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b, const std::vector<double>& c) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    for (const auto& row : A)
        if (row.size() != n) throw std::invalid_argument("simplex: ragged constraint matrix");
    if (b.size() != m) throw std::invalid_argument("simplex: rhs size mismatch");
    for (double bi : b)
        if (bi < 0.0) throw std::invalid_argument("simplex: rhs must be nonnegative");

    constexpr double eps = 1e-11;
    // Tableau: m rows of [A | I | b], objective row of reduced costs.
    std::vector<std::vector<double>> T(m, std::vector<double>(n + m + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
        T[i][n + i] = 1.0;
        T[i][n + m] = b[i];
    }
    std::vector<double> z(n + m + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) z[j] = c[j];
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

    while (true) {
        // Bland: entering = smallest column index with positive reduced cost.
        std::size_t enter = n + m;
        for (std::size_t j = 0; j < n + m; ++j)
            if (z[j] > eps) {
                enter = j;
                break;
            }
        if (enter == n + m) break;  // optimal

        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            if (T[i][enter] > eps) {
                const double ratio = T[i][n + m] / T[i][enter];
                if (ratio < best_ratio - eps ||
                    (std::abs(ratio - best_ratio) <= eps &&
                     (leave == m || basis[i] < basis[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave == m) {
            LpResult r;
            r.status = LpResult::Status::Unbounded;
            return r;
        }

        const double piv = T[leave][enter];
        for (auto& v : T[leave]) v /= piv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            const double f = T[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n + m; ++j) T[i][j] -= f * T[leave][j];
        }
        const double fz = z[enter];
        for (std::size_t j = 0; j <= n + m; ++j) z[j] -= fz * T[leave][j];
        basis[leave] = enter;
    }

    LpResult r;
    r.status = LpResult::Status::Optimal;
    r.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) r.x[basis[i]] = T[i][n + m];
    r.value = -z[n + m];
    // Dual multipliers are the negated reduced costs on the slack columns.
    r.dual.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) r.dual[i] = std::max(0.0, -z[n + i]);
    return r;
}

}  // namespace sublinq
