#include "ualign/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace ualign {

namespace {

// (node, Gauss-7 weight, Kronrod-15 weight); nodes are symmetric about 0.
constexpr double gk_nw[8][3] = {
    {0.000000000000000, 0.417959183673469, 0.209482141084728},
    {0.405845151377397, 0.381830050505119, 0.190350578064785},
    {0.741531185599394, 0.279705391489277, 0.140653259715525},
    {0.949107912342759, 0.129484966168870, 0.063092092629979},
    {0.207784955007898, 0.0, 0.204432940075298},
    {0.586087235467691, 0.0, 0.169004726639267},
    {0.864864423359769, 0.0, 0.104790010322250},
    {0.991455371120813, 0.0, 0.022935322010529},
};

double gk15(const std::function<double(double)>& f, double a, double b, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double y0 = f(c);
    double g7 = gk_nw[0][1] * y0;
    double k15 = gk_nw[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        double dx = h * gk_nw[i][0];
        double y = f(c + dx) + f(c - dx);
        g7 += gk_nw[i][1] * y;
        k15 += gk_nw[i][2] * y;
    }
    g7 *= h;
    k15 *= h;
    double diff = std::abs(g7 - k15);
    err = std::min(diff, 200.0 * diff * std::sqrt(diff));
    return k15;
}

} // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double rel_tol, double abs_tol, int max_intervals) {
    QuadResult res;
    if (a == b) return res;

    struct Interval {
        double a, b, value, error;
        bool operator<(const Interval& o) const { return error < o.error; }
    };
    std::vector<Interval> heap;
    auto push = [&heap](Interval iv) {
        heap.push_back(iv);
        std::push_heap(heap.begin(), heap.end());
    };
    auto pop = [&heap]() {
        std::pop_heap(heap.begin(), heap.end());
        Interval iv = heap.back();
        heap.pop_back();
        return iv;
    };

    double e0;
    double v0 = gk15(f, a, b, e0);
    push({a, b, v0, e0});
    double sum_val = v0, sum_err = e0, sum_abs = std::abs(v0);
    int used = 1;

    while (true) {
        double tol = std::max(abs_tol, rel_tol * std::max(std::abs(sum_val), sum_abs));
        if (sum_err <= tol) break;
        if (used >= max_intervals || heap.empty()) {
            res.converged = sum_err <= 64.0 * tol;
            break;
        }
        Interval iv = pop();
        if (iv.error <= 0.0) { // every interval is already at the floor
            push(iv);
            res.converged = sum_err <= 64.0 * tol;
            break;
        }
        double mid = 0.5 * (iv.a + iv.b);
        if (mid <= iv.a || mid >= iv.b) { // rounding resolution reached
            sum_err -= iv.error;          // accept as-is
            iv.error = 0.0;
            push(iv);
            continue;
        }
        double el, er;
        double vl = gk15(f, iv.a, mid, el);
        double vr = gk15(f, mid, iv.b, er);
        sum_val += vl + vr - iv.value;
        sum_err += el + er - iv.error;
        sum_abs += std::abs(vl) + std::abs(vr) - std::abs(iv.value);
        push({iv.a, mid, vl, el});
        push({mid, iv.b, vr, er});
        used += 2;
    }
    res.value = sum_val;
    res.error = std::max(sum_err, 0.0);
    return res;
}

QuadResult integrate_piecewise(const std::function<double(double)>& f,
                               std::vector<double> pts, double rel_tol, double abs_tol) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    QuadResult total;
    if (pts.size() < 2) return total;

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        QuadResult r = integrate(f, pts[i], pts[i + 1], rel_tol, abs_tol);
        total.value += r.value;
        total.error += r.error;
        total.converged = total.converged && r.converged;
    }
    return total;
}

} // namespace ualign
