#pragma once

#include <cmath>

namespace impactis {

// Neumaier compensated accumulator. Sums over articles go through this so
// the 1e-9 closure tolerances stay reachable on corpora up to ~1e7 rows.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace impactis
