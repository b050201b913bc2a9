#include "sublinq/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

namespace sublinq {

namespace {

// ---------------------------------------------------------------------------
// One-dimensional breakpoint profile: sorted breakpoints, atom masses at
// them, cell densities on the gaps, and closed prefix masses. All interval
// masses of the measure are recovered exactly from this data.
struct Breaks1D {
    std::vector<double> b;       // sorted unique breakpoints (query point included)
    std::vector<double> atom;    // atom mass exactly at b[i]
    std::vector<double> dens;    // cell density on (b[i], b[i+1])
    std::vector<double> prefix;  // nu((-inf, b[i]]) closed
    std::size_t xi = 0;          // index of the query point

    // nu([b[i], b[j]]) for i <= j.
    double mass_closed(std::size_t i, std::size_t j) const {
        return prefix[j] - prefix[i] + atom[i];
    }
};

void collect_breakpoints(const DiscreteMeasure& m, std::set<double>& pts) {
    for (const auto& a : m.point_atoms)
        if (a.weight > 0.0) pts.insert(a.location[0]);
    for (const auto& c : m.cell_atoms) {
        pts.insert(c.box.lo[0]);
        pts.insert(c.box.hi[0]);
    }
}

Breaks1D build_profile(const DiscreteMeasure& m, const std::vector<double>& b, double x) {
    Breaks1D P;
    P.b = b;
    P.xi = static_cast<std::size_t>(
        std::lower_bound(P.b.begin(), P.b.end(), x) - P.b.begin());
    const std::size_t n = b.size();
    P.atom.assign(n, 0.0);
    P.dens.assign(n > 0 ? n - 1 : 0, 0.0);
    P.prefix.assign(n, 0.0);
    auto index_of = [&](double t) {
        return static_cast<std::size_t>(std::lower_bound(P.b.begin(), P.b.end(), t) -
                                        P.b.begin());
    };
    for (const auto& a : m.point_atoms)
        if (a.weight > 0.0) P.atom[index_of(a.location[0])] += a.weight;
    // Density changes only at cell endpoints, which are breakpoints.
    std::vector<double> delta(n, 0.0);
    for (const auto& c : m.cell_atoms) {
        if (c.weight <= 0.0) continue;
        const double d = c.density();
        delta[index_of(c.box.lo[0])] += d;
        delta[index_of(c.box.hi[0])] -= d;
    }
    double running = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        running += delta[i];
        P.dens[i] = running;
    }
    if (n > 0) {
        P.prefix[0] = P.atom[0];
        for (std::size_t i = 0; i + 1 < n; ++i)
            P.prefix[i + 1] = P.prefix[i] + P.dens[i] * (P.b[i + 1] - P.b[i]) + P.atom[i + 1];
    }
    return P;
}

struct Piece {
    std::size_t ia, ib;  // endpoint indices into b; ia == ib means degenerate
};

// Pieces for the left endpoint (l in [b[ia], b[ib]], b[ib] <= x) and the
// right endpoint, including a degenerate pinned piece when the query point
// sits at the boundary of the breakpoint range.
void make_pieces(const Breaks1D& P, std::vector<Piece>& lefts, std::vector<Piece>& rights) {
    lefts.clear();
    rights.clear();
    const std::size_t m = P.b.size();
    if (P.xi == 0)
        lefts.push_back({0, 0});
    else
        for (std::size_t i = 0; i < P.xi; ++i) lefts.push_back({i, i + 1});
    if (P.xi == m - 1)
        rights.push_back({m - 1, m - 1});
    else
        for (std::size_t j = P.xi; j + 1 < m; ++j) rights.push_back({j, j + 1});
}

// Exact uncentered 1D sup of nu([l, r]) / (r - l)^s over l <= x <= r.
double frac_unc1d(const Breaks1D& P, double s) {
    if (P.b.empty()) return 0.0;
    double best = 0.0;
    auto consider = [&](double mass, double len) {
        if (mass <= 0.0 || len <= 0.0) return;
        best = std::max(best, mass / std::pow(len, s));
    };
    // Stationary point of (A + B t) / (D + t)^s for t in (t0, t1).
    auto stationary = [&](double A, double B, double D, double t0, double t1) {
        if (B <= 0.0 || s >= 1.0) return;
        const double t = (s * A - B * D) / (B * (1.0 - s));
        if (t > t0 && t < t1) consider(A + B * t, D + t);
    };

    std::vector<Piece> lefts, rights;
    make_pieces(P, lefts, rights);
    for (const auto& lp : lefts) {
        const double U = P.b[lp.ib] - P.b[lp.ia];
        const double rhoL = lp.ia < lp.ib ? P.dens[lp.ia] : 0.0;
        const double atomL = lp.ia < lp.ib ? P.atom[lp.ia] : 0.0;
        for (const auto& rp : rights) {
            const double V = P.b[rp.ib] - P.b[rp.ia];
            const double rhoR = rp.ia < rp.ib ? P.dens[rp.ia] : 0.0;
            const double atomR = rp.ia < rp.ib ? P.atom[rp.ib] : 0.0;
            const double d0 = P.b[rp.ia] - P.b[lp.ib];
            const double M0 = P.mass_closed(lp.ib, rp.ia);

            consider(M0, d0);
            if (U > 0.0) consider(M0 + rhoL * U + atomL, d0 + U);
            if (V > 0.0) consider(M0 + rhoR * V + atomR, d0 + V);
            if (U > 0.0 && V > 0.0)
                consider(M0 + rhoL * U + atomL + rhoR * V + atomR, d0 + U + V);

            // Interior optimum: along u + v = t the mass is maximized by
            // feeding the denser side first; each affine segment of that
            // path has at most one stationary point.
            const bool left_hi = rhoL >= rhoR;
            const double rhoHi = left_hi ? rhoL : rhoR;
            const double rhoLo = left_hi ? rhoR : rhoL;
            const double capHi = left_hi ? U : V;
            const double capLo = left_hi ? V : U;
            if (rhoHi > 0.0 && capHi > 0.0) {
                stationary(M0, rhoHi, d0, 0.0, capHi);
                consider(M0 + rhoHi * capHi, d0 + capHi);
                if (rhoLo > 0.0 && capLo > 0.0) {
                    const double A2 = M0 + rhoHi * capHi - rhoLo * capHi;
                    stationary(A2, rhoLo, d0, capHi, capHi + capLo);
                }
            }
            // Outer edges carry the boundary atoms; scan them separately.
            if (U > 0.0 && V > 0.0) {
                stationary(M0 + rhoL * U + atomL, rhoR, d0 + U, 0.0, V);
                stationary(M0 + rhoR * V + atomR, rhoL, d0 + V, 0.0, U);
            }
        }
    }
    return best;
}

// Exact uncentered 1D sup of nu([l, r]) / sigma([l, r]); the ratio of two
// affine mass functions is monotone along every line, so corner candidates
// (with and without the boundary atoms that enter exactly there) suffice.
double measure_unc1d(const Breaks1D& N, const Breaks1D& S) {
    if (N.b.empty()) return 0.0;
    double best = 0.0;
    bool unbounded = false;
    auto consider = [&](double mn, double ms) {
        if (ms <= 0.0) {
            if (mn > 0.0) unbounded = true;
            return;
        }
        best = std::max(best, mn / ms);
    };

    std::vector<Piece> lefts, rights;
    make_pieces(N, lefts, rights);
    for (const auto& lp : lefts) {
        const double U = N.b[lp.ib] - N.b[lp.ia];
        const double rhoLn = lp.ia < lp.ib ? N.dens[lp.ia] : 0.0;
        const double rhoLs = lp.ia < lp.ib ? S.dens[lp.ia] : 0.0;
        const double atomLn = lp.ia < lp.ib ? N.atom[lp.ia] : 0.0;
        const double atomLs = lp.ia < lp.ib ? S.atom[lp.ia] : 0.0;
        for (const auto& rp : rights) {
            const double V = N.b[rp.ib] - N.b[rp.ia];
            const double rhoRn = rp.ia < rp.ib ? N.dens[rp.ia] : 0.0;
            const double rhoRs = rp.ia < rp.ib ? S.dens[rp.ia] : 0.0;
            const double atomRn = rp.ia < rp.ib ? N.atom[rp.ib] : 0.0;
            const double atomRs = rp.ia < rp.ib ? S.atom[rp.ib] : 0.0;
            const double M0n = N.mass_closed(lp.ib, rp.ia);
            const double M0s = S.mass_closed(lp.ib, rp.ia);

            for (int cu = 0; cu < (U > 0.0 ? 2 : 1); ++cu) {
                for (int cv = 0; cv < (V > 0.0 ? 2 : 1); ++cv) {
                    const double u = cu ? U : 0.0;
                    const double v = cv ? V : 0.0;
                    const double base_n = M0n + rhoLn * u + rhoRn * v;
                    const double base_s = M0s + rhoLs * u + rhoRs * v;
                    for (int il = 0; il <= (cu ? 1 : 0); ++il)
                        for (int ir = 0; ir <= (cv ? 1 : 0); ++ir)
                            consider(base_n + il * atomLn + ir * atomRn,
                                     base_s + il * atomLs + ir * atomRs);
                }
            }
        }
    }
    return unbounded ? kInf : best;
}

std::vector<double> merged_breakpoints(const DiscreteMeasure& a, const DiscreteMeasure* b,
                                       double x) {
    std::set<double> pts;
    pts.insert(x);
    collect_breakpoints(a, pts);
    if (b) collect_breakpoints(*b, pts);
    return {pts.begin(), pts.end()};
}

// ---------------------------------------------------------------------------
// Centered modes.

double golden_max(const std::function<double(double)>& f, double a, double b, int iters = 80) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    double best = std::max(f(a), f(b));
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
        best = std::max(best, std::max(f1, f2));
    }
    return best;
}

// Area of the disk B(center, r) intersected with a rectangle, by adaptive
// Simpson integration of the chord-width profile.
double disk_box_area(const Vec& center, double r, const Box& box) {
    const double x0 = center[0], y0 = center[1];
    const double lo = std::max(box.lo[1], y0 - r), hi = std::min(box.hi[1], y0 + r);
    if (lo >= hi) return 0.0;
    auto width = [&](double v) {
        const double dy = v - y0;
        const double w = std::sqrt(std::max(0.0, r * r - dy * dy));
        return std::max(0.0, std::min(box.hi[0], x0 + w) - std::max(box.lo[0], x0 - w));
    };
    std::function<double(double, double, double, double, double, double, int)> simpson =
        [&](double a, double b, double fa, double fm, double fb, double whole, int depth) {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = width(lm), frm = width(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if (depth > 24 || std::abs(left + right - whole) < 1e-13 * (1.0 + std::abs(whole)))
                return left + right;
            return simpson(a, m, fa, flm, fm, left, depth + 1) +
                   simpson(m, b, fm, frm, fb, right, depth + 1);
        };
    const double fa = width(lo), fb = width(hi), fm = width(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson(lo, hi, fa, fm, fb, whole, 0);
}

double centered_mass(const DiscreteMeasure& nu, const Vec& x, double r, bool balls) {
    double s = 0.0;
    for (const auto& a : nu.point_atoms) {
        if (a.weight <= 0.0) continue;
        const double d = balls ? dist(x, a.location) : cheb_dist(x, a.location);
        if (d <= r) s += a.weight;
    }
    for (const auto& c : nu.cell_atoms) {
        if (c.weight <= 0.0) continue;
        if (!balls) {
            Box q;
            q.lo.resize(x.size());
            q.hi.resize(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                q.lo[i] = x[i] - r;
                q.hi[i] = x[i] + r;
            }
            s += c.weight * (q.overlap_volume(c.box) / c.volume());
        } else if (x.size() == 1) {
            const double w =
                std::min(c.box.hi[0], x[0] + r) - std::max(c.box.lo[0], x[0] - r);
            if (w > 0.0) s += c.weight * (w / c.volume());
        } else if (x.size() == 2) {
            s += c.weight * (disk_box_area(x, r, c.box) / c.volume());
        } else {
            throw std::invalid_argument(
                "CenteredBalls with cell measures is supported in dimensions 1 and 2 only; "
                "use CenteredCubes");
        }
    }
    return s;
}

double frac_centered(const DiscreteMeasure& nu, const DiscreteMeasure* sigma, double alpha,
                     const Vec& x, bool balls) {
    const int n = static_cast<int>(x.size());
    const double gauge_c =
        balls ? std::pow(unit_ball_volume(n), 1.0 - alpha / n) : std::pow(2.0, n - alpha);

    std::set<double> radii;
    auto add_radii_for = [&](const DiscreteMeasure& m) {
        for (const auto& a : m.point_atoms) {
            if (a.weight <= 0.0) continue;
            const double d = balls ? dist(x, a.location) : cheb_dist(x, a.location);
            if (d > 0.0) radii.insert(d);
        }
        for (const auto& c : m.cell_atoms) {
            if (c.weight <= 0.0) continue;
            for (std::size_t i = 0; i < x.size(); ++i) {
                for (double face : {std::abs(x[i] - c.box.lo[i]), std::abs(x[i] - c.box.hi[i])})
                    if (face > 0.0) radii.insert(face);
            }
            if (balls) {
                // Corner distances: the overlap shape changes there too.
                const std::size_t corners = std::size_t(1) << x.size();
                for (std::size_t mask = 0; mask < corners; ++mask) {
                    Vec corner(x.size());
                    for (std::size_t i = 0; i < x.size(); ++i)
                        corner[i] = (mask >> i) & 1 ? c.box.hi[i] : c.box.lo[i];
                    const double d = dist(x, corner);
                    if (d > 0.0) radii.insert(d);
                }
            }
        }
    };
    add_radii_for(nu);
    if (sigma) add_radii_for(*sigma);
    if (radii.empty()) return 0.0;

    const bool ratio_mode = sigma != nullptr;
    bool unbounded = false;
    auto value = [&](double r) {
        const double mn = centered_mass(nu, x, r, balls);
        if (!ratio_mode) return mn <= 0.0 ? 0.0 : mn / (gauge_c * std::pow(r, n - alpha));
        const double ms = centered_mass(*sigma, x, r, balls);
        if (ms <= 0.0) {
            if (mn > 0.0) unbounded = true;
            return 0.0;
        }
        return mn / ms;
    };

    const bool has_cells = [&] {
        auto any = [](const DiscreteMeasure& m) {
            for (const auto& c : m.cell_atoms)
                if (c.weight > 0.0) return true;
            return false;
        };
        return any(nu) || (sigma && any(*sigma));
    }();

    double best = 0.0;
    double prev = 0.0;
    for (double r : radii) {
        best = std::max(best, value(r));
        if (has_cells) {
            const double a = prev > 0.0 ? prev : r * 1e-9;
            if (r > a) best = std::max(best, golden_max(value, a, r));
        }
        prev = r;
    }
    return unbounded ? kInf : best;
}

double frac_unc_approx(const DiscreteMeasure& nu, const DiscreteMeasure* sigma, double alpha,
                       const Vec& x, int refinement) {
    const int n = static_cast<int>(x.size());
    double best = 0.0;
    bool unbounded = false;
    const std::int64_t shifts = (std::int64_t(1) << refinement) + 1;
    for (int level = -refinement; level <= refinement; ++level) {
        const double side = std::ldexp(1.0, -level);
        const double step = side / std::ldexp(1.0, refinement);
        const double gauge = std::pow(side, double(n) * (1.0 - alpha / n));
        std::vector<std::int64_t> idx(n, 0);
        while (true) {
            Box q;
            q.lo.resize(n);
            q.hi.resize(n);
            for (int i = 0; i < n; ++i) {
                q.lo[i] = x[i] - side + static_cast<double>(idx[i]) * step;
                q.hi[i] = q.lo[i] + side;
            }
            const double mn = box_mass(nu, q, BoxClosure::Closed);
            if (sigma) {
                const double ms = box_mass(*sigma, q, BoxClosure::Closed);
                if (ms > 0.0)
                    best = std::max(best, mn / ms);
                else if (mn > 0.0)
                    unbounded = true;
            } else if (mn > 0.0) {
                best = std::max(best, mn / gauge);
            }
            int axis = 0;
            while (axis < n && ++idx[axis] == shifts) idx[axis++] = 0;
            if (axis == n) break;
        }
    }
    return unbounded ? kInf : best;
}

bool atom_at(const DiscreteMeasure& m, const Vec& x) {
    for (const auto& a : m.point_atoms)
        if (a.weight > 0.0 && a.location == x) return true;
    return false;
}

void check_frac_args(const DiscreteMeasure& nu, double alpha, const Vec& x, MaxQueryMode mode) {
    if (static_cast<int>(x.size()) != nu.dimension)
        throw std::invalid_argument("maximal query point dimension mismatch");
    if (!(alpha >= 0.0 && alpha < nu.dimension))
        throw std::invalid_argument("maximal operator requires 0 <= alpha < n");
    if (mode.kind == MaxQueryMode::Kind::UncenteredCubes1D && nu.dimension != 1)
        throw std::invalid_argument("UncenteredCubes1D requires dimension 1");
}

}  // namespace

double frac_max(const DiscreteMeasure& nu, double alpha, const Vec& x, MaxQueryMode mode) {
    check_frac_args(nu, alpha, x, mode);
    switch (mode.kind) {
        case MaxQueryMode::Kind::UncenteredCubes1D: {
            if (atom_at(nu, x)) return kInf;
            const auto pts = merged_breakpoints(nu, nullptr, x[0]);
            const auto P = build_profile(nu, pts, x[0]);
            return frac_unc1d(P, 1.0 - alpha);
        }
        case MaxQueryMode::Kind::CenteredBalls:
        case MaxQueryMode::Kind::CenteredCubes: {
            if (atom_at(nu, x)) return kInf;
            return frac_centered(nu, nullptr, alpha, x,
                                 mode.kind == MaxQueryMode::Kind::CenteredBalls);
        }
        case MaxQueryMode::Kind::UncenteredApprox:
            return frac_unc_approx(nu, nullptr, alpha, x, mode.refinement);
    }
    throw std::logic_error("unreachable");
}

double measure_max(const DiscreteMeasure& nu, const DiscreteMeasure& sigma, const Vec& x,
                   MaxQueryMode mode) {
    check_frac_args(nu, 0.0, x, mode);
    if (sigma.dimension != nu.dimension)
        throw std::invalid_argument("measure_max: dimension mismatch");
    if (sigma.is_zero()) throw std::invalid_argument("measure_max: sigma must not be zero");
    switch (mode.kind) {
        case MaxQueryMode::Kind::UncenteredCubes1D: {
            const auto pts = merged_breakpoints(nu, &sigma, x[0]);
            const auto N = build_profile(nu, pts, x[0]);
            const auto S = build_profile(sigma, pts, x[0]);
            return measure_unc1d(N, S);
        }
        case MaxQueryMode::Kind::CenteredBalls:
        case MaxQueryMode::Kind::CenteredCubes:
            return frac_centered(nu, &sigma, 0.0, x,
                                 mode.kind == MaxQueryMode::Kind::CenteredBalls);
        case MaxQueryMode::Kind::UncenteredApprox:
            return frac_unc_approx(nu, &sigma, 0.0, x, mode.refinement);
    }
    throw std::logic_error("unreachable");
}

void DyadicWeightMap::insert(const DyadicCube& cube, double rho) {
    if (!(rho >= 0.0)) throw std::invalid_argument("dyadic weight must be >= 0");
    auto& level = levels[cube.level];
    if (!level.emplace(cube.coords, rho).second)
        throw std::invalid_argument("duplicate dyadic cube entry");
}

std::size_t DyadicWeightMap::size() const {
    std::size_t n = 0;
    for (const auto& [lvl, m] : levels) n += m.size();
    return n;
}

std::vector<std::pair<DyadicCube, double>> DyadicWeightMap::entries() const {
    std::vector<std::pair<DyadicCube, double>> out;
    for (const auto& [lvl, m] : levels)
        for (const auto& [coords, rho] : m) out.push_back({DyadicCube{lvl, coords}, rho});
    return out;
}

double dyadic_max(const DiscreteMeasure& nu, const DyadicWeightMap& rho, const Vec& x) {
    double best = 0.0;
    for (const auto& [level, m] : rho.levels) {
        const auto anc = dyadic_ancestor(x, level);
        auto it = m.find(anc.coords);
        if (it == m.end()) continue;
        best = std::max(best, it->second * box_mass(nu, anc.box(), BoxClosure::HalfOpen));
    }
    return best;
}

double MaximalSolveResult::eval(const Vec& x) const {
    return frac_max(weighted_measure, alpha, x, mode);
}

MaximalSolveResult maximal_fixed_point(const DiscreteMeasure& sigma, double alpha, double q,
                                       MaxQueryMode mode, const SolveOptions& opts) {
    sigma.validate();
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("maximal_fixed_point: q must lie in (0, 1)");
    if (!(alpha >= 0.0 && alpha < sigma.dimension))
        throw std::invalid_argument("maximal_fixed_point: need 0 <= alpha < n");
    if (sigma.has_positive_point_mass())
        throw std::invalid_argument(
            "maximal_fixed_point: sigma carries point atoms, so M_alpha sigma = +inf at an "
            "atom and the iteration has no finite seed; use a cell measure");
    if (!(opts.tolerance > 0.0) || opts.max_iterations < 1)
        throw std::invalid_argument("maximal_fixed_point: bad solve options");

    // Subcell mesh: every cell split into its quadrature pieces, so the
    // iteration acts on a fixed finite vector of midpoint values and the
    // operator is exactly monotone in them.
    DiscreteMeasure fine;
    fine.dimension = sigma.dimension;
    fine.domain = sigma.domain;
    fine.quad_level = 0;
    const std::int64_t per_axis = std::int64_t(1) << sigma.quad_level;
    for (const auto& c : sigma.cell_atoms) {
        const std::size_t pieces = std::size_t(1)
                                   << (std::size_t(sigma.quad_level) * sigma.dimension);
        const double pw = c.weight / static_cast<double>(pieces);
        std::vector<std::int64_t> idx(sigma.dimension, 0);
        while (true) {
            Box sub;
            sub.lo.resize(sigma.dimension);
            sub.hi.resize(sigma.dimension);
            for (int i = 0; i < sigma.dimension; ++i) {
                const double h = (c.box.hi[i] - c.box.lo[i]) / static_cast<double>(per_axis);
                sub.lo[i] = c.box.lo[i] + static_cast<double>(idx[i]) * h;
                sub.hi[i] = sub.lo[i] + h;
            }
            fine.cell_atoms.push_back({sub, pw});
            int axis = 0;
            while (axis < sigma.dimension && ++idx[axis] == per_axis) idx[axis++] = 0;
            if (axis == sigma.dimension) break;
        }
    }

    const auto smp = fine.samples();
    const std::size_t n = smp.size();
    MaximalSolveResult res;
    res.alpha = alpha;
    res.q = q;
    res.mode = mode;
    res.report.seed_scale = 1.0;
    res.sample_weights.resize(n);
    res.u.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        res.u.points.push_back(smp[i].x);
        res.sample_weights[i] = smp[i].w;
    }
    if (n == 0) {
        res.report.converged = true;
        res.weighted_measure = fine;
        return res;
    }

    auto apply = [&](const std::vector<double>& u) {
        DiscreteMeasure nu = fine;
        for (std::size_t m = 0; m < n; ++m)
            nu.cell_atoms[m].weight = fine.cell_atoms[m].weight * std::pow(u[m], q);
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = frac_max(nu, alpha, smp[i].x, mode);
        return out;
    };

    std::vector<double> msig(n);
    for (std::size_t i = 0; i < n; ++i) {
        msig[i] = frac_max(fine, alpha, smp[i].x, mode);
        if (std::isinf(msig[i]))
            throw std::invalid_argument("maximal_fixed_point: M_alpha sigma infinite at a sample");
    }
    const double e = 1.0 / (1.0 - q);
    std::vector<double> seed(n);
    for (std::size_t i = 0; i < n; ++i) seed[i] = std::pow(msig[i], e);

    auto monotone_from = [&](const std::vector<double>& a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < n; ++i)
            if (b[i] < a[i] - 1e-12 * std::max(1.0, a[i])) return false;
        return true;
    };

    // The continuum seed (M_alpha sigma)^{1/(1-q)} certifies an upward first
    // step; under the subcell discretization the certificate can miss by a
    // mesh-resolution factor, so the same halving rule as the kernel solver
    // restores it.
    double c0 = opts.seed_scale > 0.0 ? opts.seed_scale : 1.0;
    std::vector<double> u(n), next;
    for (int attempt = 0;; ++attempt) {
        for (std::size_t i = 0; i < n; ++i) u[i] = c0 * seed[i];
        next = apply(u);
        if (opts.seed_scale > 0.0 || monotone_from(u, next)) break;
        if (attempt >= 60)
            throw std::runtime_error("maximal_fixed_point: no verified upward first step");
        c0 *= 0.5;
    }
    res.report.seed_scale = c0;

    res.report.norm_trace.push_back(lq_norm_aligned(u, res.sample_weights, q));
    const double norm0 = std::max(res.report.norm_trace.front(), 1e-300);
    bool stopped = false;
    int j = 0;
    for (; j < opts.max_iterations; ++j) {
        if (!monotone_from(u, next)) res.report.monotone_ok = false;
        res.report.norm_trace.push_back(lq_norm_aligned(next, res.sample_weights, q));
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

    res.u.values = u;
    res.weighted_measure = fine;
    for (std::size_t m = 0; m < n; ++m)
        res.weighted_measure.cell_atoms[m].weight =
            fine.cell_atoms[m].weight * std::pow(u[m], q);
    return res;
}

Box CoverPiece::bounding_box() const {
    if (kind == Kind::Box) return box;
    Box b;
    b.lo.resize(center.size());
    b.hi.resize(center.size());
    for (std::size_t i = 0; i < center.size(); ++i) {
        b.lo[i] = center[i] - radius;
        b.hi[i] = center[i] + radius;
    }
    return b;
}

bool CoverPiece::contains(const Vec& x) const {
    if (kind == Kind::Box) return box.contains_closed(x);
    return dist(x, center) <= radius;
}

double hausdorff_content_upper(const std::vector<CoverPiece>& E, int n, double alpha,
                               int depth) {
    if (E.empty()) return 0.0;
    if (!(alpha >= 0.0 && alpha < n))
        throw std::invalid_argument("hausdorff_content_upper: need 0 <= alpha < n");
    const double expn = n - alpha;
    auto circumradius = [&](const Box& b) { return 0.5 * dist(b.lo, b.hi); };

    // Candidate 1: each piece under its own circumscribed ball.
    double per_piece = 0.0;
    for (const auto& p : E)
        per_piece += std::pow(p.kind == CoverPiece::Kind::Ball ? p.radius
                                                               : circumradius(p.box),
                              expn);
    double best = per_piece;

    // Candidate 2: one ball around everything.
    Box hull = E.front().bounding_box();
    for (const auto& p : E) {
        const Box b = p.bounding_box();
        for (int i = 0; i < n; ++i) {
            hull.lo[i] = std::min(hull.lo[i], b.lo[i]);
            hull.hi[i] = std::max(hull.hi[i], b.hi[i]);
        }
    }
    best = std::min(best, std::pow(circumradius(hull), expn));

    // Candidate 3: dyadic cube covers, each cube replaced by its
    // circumscribed ball of radius side * sqrt(n) / 2.
    for (int level = 0; level <= depth; ++level) {
        const double scale = std::ldexp(1.0, level);
        std::set<std::vector<std::int64_t>> cubes;
        bool too_many = false;
        for (const auto& p : E) {
            const Box b = p.bounding_box();
            std::vector<std::int64_t> kmin(n), kmax(n);
            for (int i = 0; i < n; ++i) {
                kmin[i] = static_cast<std::int64_t>(std::floor(b.lo[i] * scale));
                kmax[i] = static_cast<std::int64_t>(std::ceil(b.hi[i] * scale)) - 1;
                if (kmax[i] < kmin[i]) kmax[i] = kmin[i];
            }
            std::vector<std::int64_t> k = kmin;
            while (true) {
                cubes.insert(k);
                if (cubes.size() > 200000) {
                    too_many = true;
                    break;
                }
                int axis = 0;
                while (axis < n && ++k[axis] > kmax[axis]) {
                    k[axis] = kmin[axis];
                    ++axis;
                }
                if (axis == n) break;
            }
            if (too_many) break;
        }
        if (too_many) continue;
        const double r = 0.5 * std::sqrt(static_cast<double>(n)) * std::ldexp(1.0, -level);
        best = std::min(best, static_cast<double>(cubes.size()) * std::pow(r, expn));
    }
    return best;
}

FrostmanReport frostman_condition_check(const DiscreteMeasure& sigma,
                                        const std::vector<std::vector<CoverPiece>>& family,
                                        double q, double alpha, double C, int depth) {
    FrostmanReport rep;
    const auto smp = sigma.samples();
    for (const auto& E : family) {
        FrostmanEntry e;
        for (const auto& s : smp) {
            for (const auto& p : E)
                if (p.contains(s.x)) {
                    e.sigma_mass += s.w;
                    break;
                }
        }
        e.content_upper = hausdorff_content_upper(E, sigma.dimension, alpha, depth);
        e.flagged = e.sigma_mass > C * std::pow(e.content_upper, q) * (1.0 + 1e-12);
        rep.any_flagged = rep.any_flagged || e.flagged;
        rep.entries.push_back(e);
    }
    return rep;
}

double weak_embedding_estimate_maximal(const DiscreteMeasure& sigma, double alpha, double q,
                                       const std::vector<Vec>& dirac_grid, MaxQueryMode mode) {
    const auto smp = sigma.samples();
    std::vector<double> weights(smp.size());
    for (std::size_t i = 0; i < smp.size(); ++i) weights[i] = smp[i].w;
    double best = 0.0;
    for (const auto& y : dirac_grid) {
        DiscreteMeasure nu;
        nu.dimension = sigma.dimension;
        nu.domain = DomainKind::Euclidean;
        nu.point_atoms.push_back({y, 1.0});
        std::vector<double> vals(smp.size());
        for (std::size_t i = 0; i < smp.size(); ++i)
            vals[i] = frac_max(nu, alpha, smp[i].x, mode);
        best = std::max(best, weak_lq_norm_aligned(vals, weights, q));
    }
    return best;
}

}  // namespace sublinq
