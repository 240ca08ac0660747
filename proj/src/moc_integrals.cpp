#include "ualign/moc_integrals.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ualign/events.hpp"

namespace ualign {

namespace {

void require_converged(const QuadResult& r, const char* who) {
    if (!r.converged)
        throw NumericalEvent(NumericalEvent::Kind::Quadrature, 0.0,
                             std::string(who) + ": adaptive refinement did not converge");
}

// Angular moments over [0,pi] with weight sin^{d-2}(theta).
double angular_w0(int d) { return d == 2 ? M_PI : 2.0; }              // int sin^{d-2}
double angular_ws(int d) { return d == 2 ? M_PI / 2.0 : 4.0 / 3.0; }  // int sin^d
double angular_wc(int d) { return d == 2 ? M_PI / 2.0 : 2.0 / 3.0; }  // int cos^2 sin^{d-2}
double angular_wabs(int d) { return d == 2 ? 2.0 : 1.0; }             // int |cos| sin^{d-2}

// sigma_{d-2} factor of the (z1,|z_h|) reduction, with sigma_0 = 1.
double sigma_dm2(int d) { return d == 3 ? 2.0 * M_PI : 1.0; }

void keep_inside(std::vector<double>& pts, double lo, double hi) {
    std::vector<double> out;
    out.push_back(lo);
    out.push_back(hi);
    for (double p : pts)
        if (p > lo && p < hi) out.push_back(p);
    pts = std::move(out);
}

} // namespace

double riesz_constant(double alpha, int d) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("riesz_constant: alpha outside (0,2)");
    double num = std::pow(2.0, alpha) * std::tgamma(0.5 * (d + alpha));
    double den = std::pow(M_PI, 0.5 * d) * std::abs(std::tgamma(-0.5 * alpha));
    return num / den;
}

QuadValue dissipation_D_quadrature(double xi, const Moc& m, double alpha) {
    if (!(xi > 0.0)) throw std::invalid_argument("dissipation_D_quadrature: xi must be positive");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("dissipation_D_quadrature: alpha outside (0,2)");
    const double lam = m.lambda();
    const double rel = 1e-9;

    QuadValue out;

    // --- near part: eta in (0, xi/2]
    // series core [0,a]: 2w(xi)-w(xi+2e)-w(xi-2e) = -4 w''(xi) e^2 + O(e^4)
    double a = 1e-4 * xi;
    if (lam > 0.0) a = std::min(a, 0.25 * std::abs(xi - lam) + 1e-300);
    a = std::max(a, 1e-12 * xi);
    a = std::min(a, 0.25 * xi);
    double series = -4.0 * m.second_derivative(xi) * std::pow(a, 2.0 - alpha) / (2.0 - alpha);
    out.value += series;
    out.error += 1e-7 * series; // expansion remainder is O((a/xi)^2) relative

    auto g1 = [&](double e) {
        double num = -(m.diff(xi, 2.0 * e) + m.diff(xi, -2.0 * e));
        return num * std::pow(e, -1.0 - alpha);
    };
    std::vector<double> pts1;
    if (lam > xi && lam < 2.0 * xi) pts1.push_back(0.5 * (lam - xi));
    if (lam > 0.0 && lam < xi) pts1.push_back(0.5 * (xi - lam));
    keep_inside(pts1, a, 0.5 * xi);
    QuadResult r1 = integrate_piecewise(g1, pts1, rel);
    require_converged(r1, "dissipation_D_quadrature/near");
    out.value += r1.value;
    out.error += r1.error;

    // --- far part: eta in [xi/2, inf)
    auto g2 = [&](double e) {
        double num = 2.0 * m(xi) - m.diff(2.0 * e - xi, 2.0 * xi);
        return num * std::pow(e, -1.0 - alpha);
    };
    double start = 0.5 * xi;
    double far_end = std::max({4.0 * xi, 4.0 * lam, start * 2.0});
    std::vector<double> pts2;
    if (std::isfinite(lam)) {
        pts2.push_back(0.5 * (lam - xi)); // 2e+xi = lam
        pts2.push_back(0.5 * (lam + xi)); // 2e-xi = lam
    }
    keep_inside(pts2, start, far_end);
    QuadResult r2 = integrate_piecewise(g2, pts2, rel);
    require_converged(r2, "dissipation_D_quadrature/far");
    out.value += r2.value;
    out.error += r2.error;

    // doubling panels until the contribution is negligible, then the
    // analytic remainder of the 2w(xi) part
    double accum = std::abs(out.value);
    double lo = far_end;
    const double panel_cut = 1e-14;
    const double analytic_from = 1e6 * std::max(xi, std::min(lam, 1e3 * xi));
    for (int p = 0; p < 80; ++p) {
        double hi = 2.0 * lo;
        QuadResult rp = integrate(g2, lo, hi, rel);
        out.value += rp.value;
        out.error += rp.error;
        accum = std::max(accum, std::abs(out.value));
        lo = hi;
        if (std::abs(rp.value) < panel_cut * accum && lo >= analytic_from) break;
    }
    double tail_main = 2.0 * m(xi) * std::pow(lo, -alpha) / alpha;
    double tail_err = m.delta() * xi / (2.0 * lo - xi) * std::pow(lo, -alpha) / alpha;
    out.value += tail_main;
    out.error += tail_err;
    return out;
}

namespace {

// Angular average of w(rho(s,theta)) - w(xi) against sin^{d-2}, where
// rho = sqrt(xi^2 - 2 xi s cos(theta) + s^2); the gap rho - xi is formed
// cancellation-free as s(s - 2 xi cos)/ (rho + xi).
double angular_moc_average(const Moc& m, double xi, double s, int d, double rel) {
    auto gap = [&](double ct) {
        double q = s * (s - 2.0 * xi * ct);
        double rho2 = xi * xi + q;
        double rho = std::sqrt(std::max(rho2, 0.0));
        return q / (rho + xi);
    };
    auto f = [&](double theta) {
        double ct = std::cos(theta);
        double g = gap(ct);
        if (g <= -xi) g = -xi * (1.0 - 1e-15); // rho hits 0 only at s=xi, theta=0
        double w = (d == 2) ? 1.0 : std::sin(theta);
        return m.diff(xi, g) * w;
    };
    // breakpoints where rho crosses lambda (monotone in theta) or hits 0
    std::vector<double> pts{0.0, M_PI};
    const double lam = m.lambda();
    if (lam > 0.0 && std::isfinite(lam)) {
        double c = (xi * xi + s * s - lam * lam) / (2.0 * xi * s);
        if (c > -1.0 && c < 1.0) pts.push_back(std::acos(c));
    }
    QuadResult r = integrate_piecewise(f, pts, rel);
    require_converged(r, "angular_moc_average");
    return r.value;
}

} // namespace

QuadValue A_quadrature(double xi, const Moc& m, double alpha, int d) {
    if (!(xi > 0.0)) throw std::invalid_argument("A_quadrature: xi must be positive");
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("A_quadrature: alpha outside (0,2)");
    if (d < 1 || d > 3) throw std::invalid_argument("A_quadrature: d must be 1, 2 or 3");
    const double c_alpha = riesz_constant(alpha, d);
    const double lam = m.lambda();
    const double rel = 1e-8;

    QuadValue out;

    // series core [0,a]: the odd part cancels, leaving
    //   s^2 [ w'(xi)/(2 xi) * Ws + w''(xi)/2 * Wc ]   (angular weights)
    double a = std::min(1e-4 * xi, lam > 0.0 ? 0.5 * std::abs(xi - lam) : 1e-4 * xi);
    a = std::max(a, 1e-12 * xi);
    double ws = (d == 1) ? 0.0 : angular_ws(d);
    double wc = (d == 1) ? 2.0 : angular_wc(d);
    double q2 = m.derivative(xi) / (2.0 * xi) * ws + 0.5 * m.second_derivative(xi) * wc;
    double series = q2 * std::pow(a, 2.0 - alpha) / (2.0 - alpha);
    out.value += series;
    // near the branch kink the expansion is one-sided; charge the whole term
    out.error += (a <= 1.0000001e-12 * xi) ? std::abs(series) : 1e-7 * std::abs(series);

    double far_start = std::max(4.0 * (xi + (std::isfinite(lam) ? lam : 0.0)), 1e3 * xi);

    if (d == 1) {
        auto f = [&](double s) {
            double left = (s < xi) ? m.diff(xi, -s) : m.diff(xi, s - 2.0 * xi);
            double right = m.diff(xi, s);
            return (left + right) * std::pow(s, -1.0 - alpha);
        };
        std::vector<double> pts{xi};
        if (std::isfinite(lam)) {
            pts.push_back(xi - lam);
            pts.push_back(xi + lam);
            pts.push_back(lam - xi);
        }
        keep_inside(pts, a, far_start);
        QuadResult r = integrate_piecewise(f, pts, rel);
        require_converged(r, "A_quadrature/d1");
        out.value += r.value;
        out.error += r.error;
    } else {
        auto f = [&](double s) {
            return angular_moc_average(m, xi, s, d, 1e-9) * std::pow(s, -1.0 - alpha);
        };
        std::vector<double> pts{xi};
        if (std::isfinite(lam)) {
            pts.push_back(std::abs(xi - lam));
            pts.push_back(xi + lam);
        }
        keep_inside(pts, a, far_start);
        QuadResult r = integrate_piecewise(f, pts, rel);
        require_converged(r, "A_quadrature/polar");
        out.value += sigma_dm2(d) * r.value;
        out.error += sigma_dm2(d) * r.error;
    }

    // analytic log-branch tail: angular average ~ W0 (w(s)-w(xi)) + O((xi/s)^2)
    double w0 = (d == 1) ? 2.0 : angular_w0(d);
    double sig = (d == 1) ? 1.0 : sigma_dm2(d);
    double M = far_start;
    double tail = w0 * ((m(M) - m(xi)) * std::pow(M, -alpha) / alpha +
                        0.5 * m.delta() * std::pow(M, -alpha) / (alpha * alpha));
    double tail_err = w0 * m.delta() * (xi / M) * std::pow(M, -alpha) / alpha;
    out.value += sig * tail;
    out.error += sig * tail_err;

    out.value *= c_alpha;
    out.error *= c_alpha;
    return out;
}

QuadValue K_bar_quadrature(double xi, const MocPair& pair, double alpha, int d) {
    if (!(xi > 0.0)) throw std::invalid_argument("K_bar_quadrature: xi must be positive");
    if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("K_bar_quadrature: alpha outside (0,2)");
    if (d < 1 || d > 3) throw std::invalid_argument("K_bar_quadrature: d must be 1, 2 or 3");
    const Moc& m1 = pair.omega1;
    const Moc& m2 = pair.omega2;
    const double lam = m1.lambda();
    if (!(lam > 1e-6 * xi))
        throw std::invalid_argument("K_bar_quadrature: lambda too small relative to xi");
    const double c_alpha = riesz_constant(alpha, d);
    const double rel = 1e-8;

    QuadValue out;

    // series core [0,a]: w1(z) ~ w1'(0) z and |w2-diff| ~ w2'(xi) |z1|
    double a = std::min({1e-6 * xi, 0.5 * lam, 0.5 * xi});
    double w1p0 = m1.delta() / lam;
    double wabs = (d == 1) ? 2.0 : angular_wabs(d);
    double series = w1p0 * m2.derivative(xi) * wabs * std::pow(a, 2.0 - alpha) / (2.0 - alpha);
    out.value += series;
    out.error += 1e-4 * series;

    if (d == 1) {
        auto f = [&](double z) {
            // | w2(|xi-z|) - w2(xi) | : the argument stays <= xi on (0,2xi)
            double dm = -m2.diff(xi, -std::min(z, 2.0 * xi - z));
            double dp = m2.diff(xi, z);
            return m1(z) * (dm + dp) * std::pow(z, -1.0 - alpha);
        };
        std::vector<double> pts{xi, lam, xi - lam, xi + lam, lam - xi};
        keep_inside(pts, a, 2.0 * xi);
        QuadResult r = integrate_piecewise(f, pts, rel);
        require_converged(r, "K_bar_quadrature/d1");
        out.value += r.value;
        out.error += r.error;
    } else {
        auto inner = [&](double s) {
            auto f = [&](double theta) {
                double z1 = s * std::cos(theta);
                double dv;
                if (z1 <= 0.0)
                    dv = m2.diff(xi, -z1); // |xi - z1| = xi + |z1| >= xi
                else
                    dv = -m2.diff(xi, -std::min(z1, 2.0 * xi - z1));
                double w = (d == 2) ? 1.0 : std::sin(theta);
                return dv * w;
            };
            std::vector<double> pts{0.0, M_PI};
            for (double c : {0.0, xi / s, (xi - lam) / s, (xi + lam) / s})
                if (c > -1.0 && c < 1.0) pts.push_back(std::acos(c));
            QuadResult r = integrate_piecewise(f, pts, 1e-9);
            require_converged(r, "K_bar_quadrature/angular");
            return r.value;
        };
        auto f = [&](double s) { return m1(s) * inner(s) * std::pow(s, -1.0 - alpha); };
        std::vector<double> pts{lam, xi, xi - lam, xi + lam, lam - xi};
        keep_inside(pts, a, 2.0 * xi);
        QuadResult r = integrate_piecewise(f, pts, rel);
        require_converged(r, "K_bar_quadrature/polar");
        out.value += sigma_dm2(d) * r.value;
        out.error += sigma_dm2(d) * r.error;
    }

    out.value *= 2.0 * c_alpha;
    out.error *= 2.0 * c_alpha;
    return out;
}

QuadValue riesz_moc_bracket(double xi, const Moc& m2, double alpha) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("riesz_moc_bracket: alpha must lie in (1,2)");
    if (!(xi > 0.0)) throw std::invalid_argument("riesz_moc_bracket: xi must be positive");
    const double lam = m2.lambda();
    const double rel = 1e-9;
    QuadValue out;

    // int_0^xi w2(e) e^{alpha-2} de ; the e->0 singularity is integrable.
    double a = std::min(1e-6 * xi, lam > 0.0 ? 0.5 * lam : 1e-6 * xi);
    a = std::max(a, 1e-14 * xi);
    double head;
    if (a < lam) {
        head = (m2.delta() / lam) * std::pow(a, alpha) / alpha; // w2 ~ delta/lam * e
        out.error += 0.25 * head * std::pow(a / lam, m2.mu());  // next series term scale
    } else {
        head = m2(a) * std::pow(a, alpha - 1.0) / (alpha - 1.0); // w2 ~ flat across the core
        out.error += head * m2.delta() / std::max(m2(a), m2.delta());
    }
    out.value += head;
    auto f1 = [&](double e) { return m2(e) * std::pow(e, alpha - 2.0); };
    std::vector<double> pts1{lam};
    keep_inside(pts1, a, xi);
    QuadResult r1 = integrate_piecewise(f1, pts1, rel);
    require_converged(r1, "riesz_moc_bracket/head");
    out.value += r1.value;
    out.error += r1.error;

    // xi * int_xi^inf w2(e) e^{alpha-3} de ; analytic once in the log branch.
    double M = std::max(xi, lam);
    if (M > xi) {
        auto f2 = [&](double e) { return m2(e) * std::pow(e, alpha - 3.0); };
        QuadResult r2 = integrate(f2, xi, M, rel);
        require_converged(r2, "riesz_moc_bracket/tail-head");
        out.value += xi * r2.value;
        out.error += xi * r2.error;
    }
    // int_M^inf [w2(M) + (delta/2) log(e/M)] e^{alpha-3} de
    double tail = m2(M) * std::pow(M, alpha - 2.0) / (2.0 - alpha) +
                  0.5 * m2.delta() * std::pow(M, alpha - 2.0) / ((2.0 - alpha) * (2.0 - alpha));
    out.value += xi * tail;
    return out;
}

QuadValue riesz_moc_bound(double xi, const Moc& m2, double alpha, double F0_norm,
                          double rho_bar, double C4t, double C0) {
    QuadValue b = riesz_moc_bracket(xi, m2, alpha);
    b.value = C4t * b.value + C0 * rho_bar * F0_norm * xi;
    b.error = C4t * b.error;
    return b;
}

QuadValue k_subc_majorant_quadrature(double xi, const Moc& m2, double alpha, int d,
                                     double rhoF0, double C4t, double C0) {
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("k_subc_majorant_quadrature: alpha must lie in (1,2)");
    if (!(xi > 0.0)) throw std::invalid_argument("k_subc_majorant_quadrature: xi must be positive");
    const double lam = m2.lambda();
    if (!(lam > 1e-6 * xi))
        throw std::invalid_argument("k_subc_majorant_quadrature: lambda too small relative to xi");
    const double c_alpha = riesz_constant(alpha, d);
    const double sig = (d == 1) ? 1.0 : (d == 2 ? 2.0 * M_PI : 4.0 * M_PI);
    const double omg_coef = 2.0 * C4t / ((alpha - 1.0) * (2.0 - alpha));
    const double rel = 1e-9;

    auto f = [&](double e) {
        double w2 = m2(e);
        double lip_part = C0 * rhoF0 * e;
        double omg_part = omg_coef * w2 * std::pow(e, alpha - 1.0);
        return (lip_part + omg_part) * w2 * std::pow(e, -1.0 - alpha);
    };
    // integrand ~ e^{1-alpha} near zero: integrable, no series needed
    std::vector<double> pts{lam};
    keep_inside(pts, 1e-12 * xi, 2.0 * xi);
    QuadResult r = integrate_piecewise(f, pts, rel);
    require_converged(r, "k_subc_majorant_quadrature");
    QuadValue out;
    out.value = 2.0 * c_alpha * sig * r.value;
    out.error = 2.0 * c_alpha * sig * r.error;
    return out;
}

} // namespace ualign
