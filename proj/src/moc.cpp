#include "ualign/moc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ualign/counter_rng.hpp"

namespace ualign {

Moc::Moc(double delta, double mu, double lambda)
    : delta_(delta), mu_(mu), log_lambda_(std::log(lambda)) {
    if (!(delta > 0.0)) throw std::invalid_argument("Moc: delta must be positive");
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("Moc: mu must lie in (0,1)");
    if (!(lambda > 0.0)) throw std::invalid_argument("Moc: lambda must be positive");
}

Moc Moc::from_log_lambda(double delta, double mu, double log_lambda) {
    Moc m(delta, mu, 1.0);
    if (!std::isfinite(log_lambda)) throw std::invalid_argument("Moc: log_lambda must be finite");
    m.log_lambda_ = log_lambda;
    return m;
}

double Moc::lambda() const { return std::exp(log_lambda_); }

double Moc::operator()(double xi) const {
    if (!(xi > 0.0)) throw std::invalid_argument("Moc: xi must be positive");
    double lx = std::log(xi) - log_lambda_;
    if (lx <= 0.0) {
        double x = std::exp(lx);
        return delta_ * (x - 0.25 * std::pow(x, 1.0 + mu_));
    }
    return delta_ * (0.75 + 0.5 * lx);
}

double Moc::derivative(double xi) const {
    if (!(xi > 0.0)) throw std::invalid_argument("Moc: xi must be positive");
    double lx = std::log(xi) - log_lambda_;
    if (lx <= 0.0) {
        double lam = lambda();
        double x = std::exp(lx);
        return (delta_ / lam) * (1.0 - 0.25 * (1.0 + mu_) * std::pow(x, mu_));
    }
    return 0.5 * delta_ / xi;
}

double Moc::second_derivative(double xi) const {
    if (!(xi > 0.0)) throw std::invalid_argument("Moc: xi must be positive");
    double lx = std::log(xi) - log_lambda_;
    if (lx <= 0.0) {
        double lam = lambda();
        double x = std::exp(lx);
        return -(delta_ * mu_ * (1.0 + mu_) / (4.0 * lam * lam)) * std::pow(x, mu_ - 1.0);
    }
    return -0.5 * delta_ / (xi * xi);
}

namespace {

// omega(b)-omega(a) for lambda <= a <= b, stable via log1p.
double diff_log_branch(double delta, double a, double gap) {
    return 0.5 * delta * std::log1p(gap / a);
}

// omega(b)-omega(a) for 0 < a <= b <= lambda, stable via expm1/log1p.
double diff_power_branch(double delta, double mu, double lambda, double a, double gap) {
    double xa = a / lambda;
    double power_gap = std::pow(xa, 1.0 + mu) * std::expm1((1.0 + mu) * std::log1p(gap / a));
    return delta * (gap / lambda - 0.25 * power_gap);
}

// omega(lambda)-omega(a) for a <= lambda, stable near a = lambda.
double diff_power_to_knee(double delta, double mu, double lambda, double a) {
    double g = (lambda - a) / lambda; // = 1 - a/lambda
    double one_minus_xpow = -std::expm1((1.0 + mu) * std::log1p(-g));
    return delta * (g - 0.25 * one_minus_xpow);
}

} // namespace

double Moc::diff(double xi, double gap) const {
    double a = xi, b = xi + gap;
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("Moc::diff: arguments must be positive");
    double sign = 1.0;
    if (gap < 0.0) {
        std::swap(a, b);
        gap = -gap;
        sign = -1.0;
    }
    if (gap == 0.0) return 0.0;

    double la = std::log(a), lb = std::log(b);
    if (lb <= log_lambda_) return sign * diff_power_branch(delta_, mu_, lambda(), a, gap);
    if (la >= log_lambda_) return sign * diff_log_branch(delta_, a, gap);
    // straddles the branch point
    double lam = lambda();
    return sign * (diff_power_to_knee(delta_, mu_, lam, a) + diff_log_branch(delta_, lam, b - lam));
}

MocPair::MocPair(Moc omega1_, Moc omega2_, double kappa_, double c0_, double rho_bar, double V0)
    : omega1(omega1_), omega2(omega2_), kappa(kappa_), c0(c0_) {
    if (omega1.log_lambda() != omega2.log_lambda() || omega1.mu() != omega2.mu())
        throw std::invalid_argument("MocPair: omega1 and omega2 must share lambda and mu");
    if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("MocPair: kappa outside (0,1]");
    if (!(c0 >= 0.0)) throw std::invalid_argument("MocPair: c0 must be nonnegative");
    log_Xi1 = omega1.log_lambda() + 2.0 * rho_bar / omega1.delta() - 1.5;
    log_Xi2 = omega2.log_lambda() + 2.0 * V0 / omega2.delta() - 1.5;
}

MocPair MocPair::from_logs(Moc omega1, Moc omega2, double kappa, double c0, double log_Xi1,
                           double log_Xi2) {
    MocPair p(omega1, omega2, kappa, c0, 1.0, 1.0);
    p.log_Xi1 = log_Xi1;
    p.log_Xi2 = log_Xi2;
    return p;
}

double MocPair::Xi1() const { return std::exp(log_Xi1); }
double MocPair::Xi2() const { return std::exp(log_Xi2); }

double admissible_lambda(const ScalarField& f, double delta) {
    return std::exp(log_admissible_lambda(f, delta));
}

double log_admissible_lambda(const ScalarField& f, double delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("admissible_lambda: delta must be positive");
    double fsup = f.sup_norm();
    double gsup = gradient_norm(f).max();
    if (gsup == 0.0) return std::numeric_limits<double>::infinity();
    return std::log(2.0 * fsup / gsup) - 4.0 * fsup / delta;
}

ShiftSet::ShiftSet(const TorusGrid& grid, std::uint64_t seed) {
    const int n = grid.n_per_dim();
    const int d = grid.dim();
    const double dx = grid.dx();
    auto torus_dist = [&](const std::array<int, 3>& off) {
        double s = 0.0;
        for (int j = 0; j < d; ++j) {
            int a = off[static_cast<std::size_t>(j)];
            int m = std::min(a, n - a);
            s += static_cast<double>(m) * m;
        }
        return dx * std::sqrt(s);
    };

    for (int dd = 0; dd < d; ++dd) {
        for (int j = 1; j < n; ++j) {
            std::array<int, 3> off{0, 0, 0};
            off[static_cast<std::size_t>(dd)] = j;
            shifts_.push_back({off, torus_dist(off)});
        }
    }
    CounterRng rng(seed);
    for (int r = 0; r < 64; ++r) {
        std::array<int, 3> off{0, 0, 0};
        bool nonzero = false;
        for (int j = 0; j < d; ++j) {
            off[static_cast<std::size_t>(j)] = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n)));
            nonzero = nonzero || off[static_cast<std::size_t>(j)] != 0;
        }
        if (!nonzero) off[0] = 1;
        shifts_.push_back({off, torus_dist(off)});
    }
}

namespace {

double max_increment(const std::vector<double>& v, const TorusGrid& g,
                     const std::array<int, 3>& off) {
    const int n = g.n_per_dim();
    const int d = g.dim();
    double m = -std::numeric_limits<double>::infinity();
    if (d == 1) {
        const int s = off[0];
        for (int i = 0; i < n; ++i) {
            double inc = v[static_cast<std::size_t>((i + s) % n)] - v[static_cast<std::size_t>(i)];
            if (inc > m) m = inc;
        }
        return m;
    }
    if (d == 2) {
        const int s0 = off[0], s1 = off[1];
        for (int i0 = 0; i0 < n; ++i0) {
            int j0 = (i0 + s0) % n;
            const double* row = v.data() + static_cast<std::size_t>(i0) * n;
            const double* row_s = v.data() + static_cast<std::size_t>(j0) * n;
            for (int i1 = 0; i1 < n; ++i1) {
                double inc = row_s[(i1 + s1) % n] - row[i1];
                if (inc > m) m = inc;
            }
        }
        return m;
    }
    // d == 3
    for (std::size_t flat = 0; flat < v.size(); ++flat) {
        auto idx = g.unflatten(flat);
        std::size_t shifted = 0;
        for (int j = 0; j < d; ++j) {
            int t = (idx[static_cast<std::size_t>(j)] + off[static_cast<std::size_t>(j)]) % n;
            shifted = shifted * static_cast<std::size_t>(n) + static_cast<std::size_t>(t);
        }
        double inc = v[shifted] - v[flat];
        if (inc > m) m = inc;
    }
    return m;
}

} // namespace

ScanResult scan_breakthrough(const ScalarField& f, const Moc& m, double decay_factor,
                             const ShiftSet& shifts) {
    auto v = f.physical();
    const TorusGrid& g = f.grid();
    ScanResult worst{std::numeric_limits<double>::infinity(), 0.0, {0, 0, 0}, 0.0, true};
    for (const auto& s : shifts.shifts()) {
        double inc = max_increment(v, g, s.offset);
        double margin = decay_factor * m(s.distance) - inc;
        if (margin < worst.margin) {
            worst.margin = margin;
            worst.xi_at_argmin = s.distance;
            worst.argmin_shift = s.offset;
            worst.max_increment = inc;
        }
    }
    worst.pass = worst.margin > 0.0;
    return worst;
}

ScanResult scan_breakthrough(const ScalarField& f, const Moc& m, double decay_factor) {
    ShiftSet shifts(f.grid());
    return scan_breakthrough(f, m, decay_factor, shifts);
}

double holder_seminorm(const ScalarField& f, double sigma, const ShiftSet& shifts) {
    if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("holder_seminorm: sigma outside (0,1]");
    auto v = f.physical();
    const TorusGrid& g = f.grid();
    const int n = g.n_per_dim();
    double best = 0.0;
    for (const auto& s : shifts.shifts()) {
        double num = 0.0;
        if (g.dim() == 1) {
            for (int i = 0; i < n; ++i) {
                double inc = std::abs(v[static_cast<std::size_t>((i + s.offset[0]) % n)] -
                                      v[static_cast<std::size_t>(i)]);
                if (inc > num) num = inc;
            }
        } else {
            for (std::size_t flat = 0; flat < v.size(); ++flat) {
                auto idx = g.unflatten(flat);
                std::size_t shifted = 0;
                for (int j = 0; j < g.dim(); ++j) {
                    int t = (idx[static_cast<std::size_t>(j)] + s.offset[static_cast<std::size_t>(j)]) % n;
                    shifted = shifted * static_cast<std::size_t>(n) + static_cast<std::size_t>(t);
                }
                double inc = std::abs(v[shifted] - v[flat]);
                if (inc > num) num = inc;
            }
        }
        best = std::max(best, num / std::pow(s.distance, sigma));
    }
    return best;
}

} // namespace ualign
