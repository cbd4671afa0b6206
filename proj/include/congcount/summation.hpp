#pragma once

#ifdef __FAST_MATH__
#error fast math enabled (-ffast-math); this would defeat compensated summation
#endif

#include <cmath>
#include <complex>

namespace congcount {

// Neumaier variant of Kahan summation. The carry absorbs the rounding error
// of each add regardless of which operand is larger.
class CompensatedSum {
public:
    CompensatedSum() = default;

    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// Componentwise compensated accumulator for complex sums.
class ComplexSum {
public:
    void add(const std::complex<double>& z) {
        re_.add(z.real());
        im_.add(z.imag());
    }

    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

} // namespace congcount
