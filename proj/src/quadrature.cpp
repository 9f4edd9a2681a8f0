#include "klsign/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

namespace klsign::quadrature {

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double a, double b)
{
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * fsum;
        if (j % 2 == 1)
            gauss += kWg[j / 2] * fsum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

} // namespace

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::closed_form:
        return "closed_form";
    case Method::adaptive:
        return "adaptive";
    case Method::monte_carlo:
        return "monte_carlo";
    }
    return "unknown";
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol, double rel_tol,
    int max_intervals)
{
    if (!(a <= b))
        throw std::invalid_argument("integrate_adaptive: require a <= b");
    QuadratureResult out;
    out.method = Method::adaptive;
    if (a == b)
        return out;

    std::priority_queue<Segment> heap;
    heap.push(gauss_kronrod(f, a, b));
    double total = heap.top().value;
    double error = heap.top().error;
    int intervals = 1;
    while (error > std::max(abs_tol, rel_tol * std::abs(total)) && intervals < max_intervals) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = gauss_kronrod(f, worst.a, mid);
        Segment right = gauss_kronrod(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }

    // Re-add in a fixed order so the result does not carry the drift of the
    // running updates.
    std::vector<Segment> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
    double sum = 0, err = 0;
    for (const auto& s : segs) {
        sum += s.value;
        err += s.error;
    }
    out.value = sum;
    out.abs_error_estimate = err;
    out.samples = static_cast<std::uint64_t>(intervals) * 30 - 15;
    if (err > std::max(abs_tol, rel_tol * std::abs(sum)))
        out.note = "tolerance not reached within interval budget";
    return out;
}

} // namespace klsign::quadrature
