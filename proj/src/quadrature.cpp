#include "threshold_lab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace tlab {

namespace {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double value;
    double error;
};

PanelResult gk15(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kKronrodNodes[i]);
        fv[14 - i] = f(c + h * kKronrodNodes[i]);
    }
    fv[7] = f(c);

    double kron = kKronrodWeights[7] * fv[7];
    double gauss = kGaussWeights[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kron += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1)
            gauss += kGaussWeights[i / 2] * (fv[i] + fv[14 - i]);
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& other) const { return error < other.error; }
};

double integrate_plain(const Integrand& f, double a, double b, double rtol, double atol) {
    if (a == b)
        return 0.0;

    auto first = gk15(f, a, b);
    std::priority_queue<Interval> queue;
    queue.push({a, b, first.value, first.error});
    double total = first.value;
    double total_err = first.error;
    double l1 = std::abs(first.value); // roundoff floor for cancellation-heavy integrands

    const int max_intervals = 20000;
    int used = 1;
    int stalls = 0; // splits that failed to shrink the error: evaluation-noise floor
    auto target = [&] {
        return std::max({atol, rtol * std::abs(total), 50.0 * 1e-16 * l1});
    };
    while (total_err > target()) {
        if (stalls >= 200)
            return total; // error estimate dominated by integrand roundoff
        if (used >= max_intervals || queue.empty())
            throw QuadratureFailure("adaptive quadrature did not converge");
        Interval worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at floating point resolution; accept its estimate
            total_err -= worst.error;
            continue;
        }
        auto left = gk15(f, worst.a, mid);
        auto right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        l1 += std::abs(left.value) + std::abs(right.value) - std::abs(worst.value);
        if (left.error + right.error >= 0.5 * worst.error)
            ++stalls;
        queue.push({worst.a, mid, left.value, left.error});
        queue.push({mid, worst.b, right.value, right.error});
        ++used;
    }
    return total;
}

} // namespace

double integrate(const Integrand& f, double a, double b, double rtol, double atol) {
    return integrate_plain(f, a, b, rtol, atol);
}

double integrate(const Integrand& f, double a, double b, std::span<const double> breakpoints,
                 double rtol, double atol) {
    if (a == b)
        return 0.0;
    std::vector<double> cuts{a, b};
    for (double x : breakpoints)
        if (x > a && x < b)
            cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i])
            total += integrate_plain(f, cuts[i], cuts[i + 1], rtol, atol / double(cuts.size()));
    return total;
}

double l2_norm(const Integrand& g, double a, double b, std::span<const double> breakpoints,
               double rtol) {
    auto square = [&g](double x) {
        const double v = g(x);
        return v * v;
    };
    const double s = integrate(square, a, b, breakpoints, rtol, 1e-300);
    return std::sqrt(std::max(s, 0.0));
}

CumulativeIntegral::CumulativeIntegral(Integrand f, double a, double b,
                                       std::span<const double> breakpoints, double rtol,
                                       double max_panel)
    : f_(std::move(f)), a_(a), b_(b), rtol_(rtol) {
    std::vector<double> cuts{a, b};
    for (double x : breakpoints)
        if (x > a && x < b)
            cuts.push_back(x);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    edges_.push_back(a);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double len = cuts[i + 1] - cuts[i];
        const int n = std::max(1, int(std::ceil(len / max_panel)));
        for (int j = 1; j <= n; ++j)
            edges_.push_back(cuts[i] + len * double(j) / double(n));
    }

    prefix_.resize(edges_.size());
    prefix_[0] = 0.0;
    for (std::size_t i = 1; i < edges_.size(); ++i)
        prefix_[i] = prefix_[i - 1] +
                     integrate_plain(f_, edges_[i - 1], edges_[i], rtol_, 1e-300);
    for (double p : prefix_)
        scale_ = std::max(scale_, std::abs(p));
}

double CumulativeIntegral::upto(double x) const {
    if (edges_.empty())
        return 0.0;
    if (x <= a_)
        return 0.0;
    x = std::min(x, b_);
    auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
    const std::size_t idx = std::size_t(it - edges_.begin()) - 1;
    double value = prefix_[idx];
    if (x > edges_[idx])
        // absolute floor tied to the cumulative scale: partial panels of
        // cancellation-heavy integrands bottom out at evaluation noise
        value += integrate_plain(f_, edges_[idx], x, rtol_, 1e-14 * std::max(scale_, 1e-3));
    return value;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double rel_width, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    if ((flo < 0.0) == (fhi < 0.0))
        throw NoBracket("bisect_root: same sign at both endpoints");
    for (int i = 0; i < max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double fm = f(mid);
        if (fm == 0.0)
            return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= rel_width * std::max(std::abs(lo), std::abs(hi)))
            break;
    }
    return 0.5 * (lo + hi);
}

} // namespace tlab
