#pragma once

#include <vector>

namespace sublinq {

// Dense tableau simplex with Bland's anti-cycling rule for
//   maximize c.x  subject to  A x <= b, x >= 0,
// with b >= 0 (the slack basis is the start). Instances here are tiny
// (<= 64 variables); determinism matters more than speed.
struct LpResult {
    enum class Status { Optimal, Unbounded } status = Status::Optimal;
    double value = 0.0;
    std::vector<double> x;
    std::vector<double> dual;  // one multiplier per row, >= 0 at optimum
};

LpResult simplex_maximize(const std::vector<std::vector<double>>& A,
                          const std::vector<double>& b, const std::vector<double>& c);

}  // namespace sublinq
