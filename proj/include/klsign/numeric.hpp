#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace klsign {

// Neumaier's variant of Kahan summation.
template <class T>
class CompensatedSum {
public:
    void add(T x)
    {
        T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    CompensatedSum& operator+=(T x)
    {
        add(x);
        return *this;
    }
    T value() const { return sum_ + comp_; }

private:
    T sum_{0};
    T comp_{0};
};

// Ordinary least-squares slope of y against x.
inline double fit_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need at least two paired points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0)
        throw std::invalid_argument("fit_slope: degenerate abscissae");
    return sxy / sxx;
}

} // namespace klsign
