#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace cpx::detail {

// Neumaier-compensated accumulator. The pmf/metric sums here mix magnitudes
// across many orders; plain accumulation loses the tiny tail terms that the
// truncation-error accounting relies on.
class NeumaierSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double sum(std::span<const double> xs) noexcept {
    NeumaierSum s;
    for (double x : xs) s.add(x);
    return s.value();
}

}  // namespace cpx::detail
