#include "ualign/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ualign {

ScalarField::ScalarField(GridPtr grid, std::vector<double> physical_values, double time)
    : grid_(std::move(grid)), repr_(Representation::Physical),
      phys_(std::move(physical_values)), time_(time) {
    if (phys_.size() != grid_->size())
        throw std::invalid_argument("ScalarField: physical size mismatch");
}

ScalarField::ScalarField(GridPtr grid, std::vector<std::complex<double>> spectral_values, double time)
    : grid_(std::move(grid)), repr_(Representation::Spectral),
      spec_(std::move(spectral_values)), time_(time) {
    if (spec_.size() != grid_->size())
        throw std::invalid_argument("ScalarField: spectral size mismatch");
}

ScalarField ScalarField::sample(GridPtr grid,
                                const std::function<double(const std::array<double, 3>&)>& fn) {
    std::vector<double> v(grid->size());
    for (std::size_t i = 0; i < grid->size(); ++i) {
        auto idx = grid->unflatten(i);
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int d = 0; d < grid->dim(); ++d)
            x[static_cast<std::size_t>(d)] = grid->node(idx[static_cast<std::size_t>(d)]);
        v[i] = fn(x);
    }
    return ScalarField(std::move(grid), std::move(v));
}

ScalarField ScalarField::constant(GridPtr grid, double value) {
    std::vector<double> v(grid->size(), value);
    return ScalarField(std::move(grid), std::move(v));
}

ScalarField ScalarField::to_physical() const {
    if (repr_ == Representation::Physical) return *this;
    std::vector<double> v;
    grid_->inverse(spec_, v);
    return ScalarField(grid_, std::move(v), time_);
}

ScalarField ScalarField::to_spectral() const {
    if (repr_ == Representation::Spectral) return *this;
    std::vector<std::complex<double>> v;
    grid_->forward(phys_, v);
    return ScalarField(grid_, std::move(v), time_);
}

std::vector<double> ScalarField::physical() const {
    if (repr_ == Representation::Physical) return phys_;
    std::vector<double> v;
    grid_->inverse(spec_, v);
    return v;
}

std::vector<std::complex<double>> ScalarField::spectral() const {
    if (repr_ == Representation::Spectral) return spec_;
    std::vector<std::complex<double>> v;
    grid_->forward(phys_, v);
    return v;
}

double ScalarField::min() const {
    auto v = physical();
    return *std::min_element(v.begin(), v.end());
}

double ScalarField::max() const {
    auto v = physical();
    return *std::max_element(v.begin(), v.end());
}

double ScalarField::sup_norm() const {
    auto v = physical();
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

namespace {

// 3-point parabolic peak correction from samples around a local maximum
double parabolic_bump(double ym, double y0, double yp) {
    double den = 2.0 * y0 - ym - yp;
    if (den <= 0.0) return 0.0;
    double num = yp - ym;
    return num * num / (8.0 * den);
}

} // namespace

double ScalarField::refined_max(int factor) const {
    const TorusGrid& g = *grid_;
    if (g.dim() > 2) throw std::invalid_argument("refined_max: only dim <= 2 is supported");
    const int n = g.n_per_dim();
    const int fn = n * factor;
    auto spec = spectral();
    auto fine_grid = make_grid(g.dim(), fn, g.length());
    std::vector<std::complex<double>> fine(fine_grid->size(), 0.0);
    const int nyq = n / 2;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        auto idx = g.unflatten(i);
        // copy mode k to the same k in the fine layout; split any Nyquist
        // component between +n/2 and -n/2
        std::vector<std::pair<int, double>> comps[3];
        for (int d = 0; d < g.dim(); ++d) {
            int k = g.wavenumber_index(idx[static_cast<std::size_t>(d)]);
            if (idx[static_cast<std::size_t>(d)] == nyq) {
                comps[d].push_back({nyq, 0.5});
                comps[d].push_back({-nyq, 0.5});
            } else {
                comps[d].push_back({k, 1.0});
            }
        }
        auto place = [&](int k0, int k1, double w) {
            std::size_t flat = static_cast<std::size_t>((k0 % fn + fn) % fn);
            if (g.dim() > 1) flat = flat * fn + static_cast<std::size_t>((k1 % fn + fn) % fn);
            fine[flat] += w * spec[i];
        };
        if (g.dim() == 1) {
            for (auto [k0, w0] : comps[0]) place(k0, 0, w0);
        } else {
            for (auto [k0, w0] : comps[0])
                for (auto [k1, w1] : comps[1]) place(k0, k1, w0 * w1);
        }
    }
    std::vector<double> v;
    fine_grid->inverse(fine, v);

    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    double peak = v[best];
    if (g.dim() == 1) {
        std::size_t m = (best + v.size() - 1) % v.size();
        std::size_t p = (best + 1) % v.size();
        peak += parabolic_bump(v[m], v[best], v[p]);
    } else {
        auto idx = fine_grid->unflatten(best);
        std::size_t row = static_cast<std::size_t>(idx[0]);
        std::size_t col = static_cast<std::size_t>(idx[1]);
        auto at = [&](std::size_t i0, std::size_t i1) {
            return v[(i0 % fn) * static_cast<std::size_t>(fn) + (i1 % fn)];
        };
        peak += parabolic_bump(at(row + fn - 1, col), v[best], at(row + 1, col)) +
                parabolic_bump(at(row, col + fn - 1), v[best], at(row, col + 1));
    }
    return peak;
}

double ScalarField::refined_min(int factor) const {
    ScalarField neg = -1.0 * (*this);
    return -neg.refined_max(factor);
}

double ScalarField::refined_sup(int factor) const {
    return std::max(std::abs(refined_max(factor)), std::abs(refined_min(factor)));
}

double ScalarField::integral() const {
    auto v = physical();
    double s = 0.0;
    for (double x : v) s += x;
    return s * grid_->cell_volume();
}

bool ScalarField::finite() const {
    if (repr_ == Representation::Physical) {
        for (double x : phys_)
            if (!std::isfinite(x)) return false;
        return true;
    }
    for (const auto& c : spec_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
}

void require_same_grid(const ScalarField& a, const ScalarField& b, const char* who) {
    if (!a.grid().same_layout(b.grid()))
        throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b, "operator+");
    auto va = a.physical();
    auto vb = b.physical();
    for (std::size_t i = 0; i < va.size(); ++i) va[i] += vb[i];
    return ScalarField(a.grid_ptr(), std::move(va), a.time());
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b, "operator-");
    auto va = a.physical();
    auto vb = b.physical();
    for (std::size_t i = 0; i < va.size(); ++i) va[i] -= vb[i];
    return ScalarField(a.grid_ptr(), std::move(va), a.time());
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a, b, "operator*");
    auto va = a.physical();
    auto vb = b.physical();
    for (std::size_t i = 0; i < va.size(); ++i) va[i] *= vb[i];
    return ScalarField(a.grid_ptr(), std::move(va), a.time());
}

ScalarField operator*(double s, const ScalarField& a) {
    auto va = a.physical();
    for (double& x : va) x *= s;
    return ScalarField(a.grid_ptr(), std::move(va), a.time());
}

ScalarField& ScalarField::operator+=(const ScalarField& b) {
    *this = *this + b;
    return *this;
}

ScalarField apply_spectral_multiplier(const ScalarField& f,
                                      const std::function<double(std::size_t)>& multiplier) {
    auto spec = f.spectral();
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= multiplier(i);
    return ScalarField(f.grid_ptr(), std::move(spec), f.time());
}

ScalarField fractional_laplacian(const ScalarField& f, double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("fractional_laplacian: alpha must lie in (0,2)");
    const TorusGrid& g = f.grid();
    return apply_spectral_multiplier(f, [&g, alpha](std::size_t i) {
        double kn = g.wavevector_norm(i);
        return kn == 0.0 ? 0.0 : std::pow(kn, alpha);
    });
}

ScalarField partial(const ScalarField& f, int d) {
    const TorusGrid& g = f.grid();
    if (d < 0 || d >= g.dim()) throw std::invalid_argument("partial: bad dimension");
    auto spec = f.spectral();
    for (std::size_t i = 0; i < spec.size(); ++i) {
        auto idx = g.unflatten(i);
        int id = idx[static_cast<std::size_t>(d)];
        if (id == g.n_per_dim() / 2) {
            spec[i] = 0.0; // odd multiplier has no real-subspace Nyquist image
            continue;
        }
        spec[i] *= std::complex<double>(0.0, g.wavenumber(id));
    }
    return ScalarField(f.grid_ptr(), std::move(spec), f.time());
}

ScalarField partial_x1(const ScalarField& f) { return partial(f, 0); }

ScalarField inv_dx1_lambda(const ScalarField& rho, double alpha, double rel_tol) {
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("inv_dx1_lambda: alpha must lie in (0,2)");
    const TorusGrid& g = rho.grid();
    auto spec = rho.spectral();

    // Scale for the admissibility check: largest |k|^alpha-weighted mode.
    double scale = 0.0;
    std::vector<double> lam(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) {
        double kn = g.wavevector_norm(i);
        lam[i] = kn == 0.0 ? 0.0 : std::pow(kn, alpha);
        scale = std::max(scale, std::abs(spec[i]) * lam[i]);
    }

    const int nyq = g.n_per_dim() / 2;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        auto idx = g.unflatten(i);
        int k1_index = idx[0];
        bool invertible = (k1_index != 0) && (k1_index != nyq);
        double mode_mass = std::abs(spec[i]) * lam[i];
        if (!invertible) {
            if (scale > 0.0 && mode_mass > rel_tol * scale)
                throw std::invalid_argument(
                    "inv_dx1_lambda: Lambda^alpha rho has k1=0 spectral mass; G0=0 is unachievable");
            spec[i] = 0.0;
            continue;
        }
        double k1 = g.wavenumber(k1_index);
        // |k|^alpha / (i k1) = -i |k|^alpha / k1
        spec[i] *= std::complex<double>(0.0, -lam[i] / k1);
    }
    return ScalarField(rho.grid_ptr(), std::move(spec), rho.time());
}

ScalarField dealias(const ScalarField& f) {
    const TorusGrid& g = f.grid();
    auto spec = f.spectral();
    for (std::size_t i = 0; i < spec.size(); ++i)
        if (g.above_dealias_cut(i)) spec[i] = 0.0;
    return ScalarField(f.grid_ptr(), std::move(spec), f.time());
}

ScalarField gradient_norm(const ScalarField& f) {
    const TorusGrid& g = f.grid();
    std::vector<double> acc(g.size(), 0.0);
    for (int d = 0; d < g.dim(); ++d) {
        auto comp = partial(f, d).physical();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += comp[i] * comp[i];
    }
    for (double& x : acc) x = std::sqrt(x);
    return ScalarField(f.grid_ptr(), std::move(acc), f.time());
}

ScalarField translate(const ScalarField& f, const std::array<double, 3>& a) {
    const TorusGrid& g = f.grid();
    auto spec = f.spectral();
    for (std::size_t i = 0; i < spec.size(); ++i) {
        auto idx = g.unflatten(i);
        double phase = 0.0;
        for (int d = 0; d < g.dim(); ++d)
            phase += g.wavenumber(idx[static_cast<std::size_t>(d)]) * a[static_cast<std::size_t>(d)];
        spec[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return ScalarField(f.grid_ptr(), std::move(spec), f.time());
}

} // namespace ualign
