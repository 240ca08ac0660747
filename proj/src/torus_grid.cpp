#include "ualign/torus_grid.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace ualign {

namespace {
// FFTW plan creation is not thread-safe; executions via the new-array
// interface are. One global mutex guards all plan construction.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

struct TorusGrid::Plans {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
    ~Plans() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        if (fwd) fftw_destroy_plan(fwd);
        if (inv) fftw_destroy_plan(inv);
    }
};

TorusGrid::TorusGrid(int dim, int n_per_dim, double length)
    : dim_(dim), n_(n_per_dim), length_(length) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("TorusGrid: dim must be 1, 2 or 3");
    if (n_per_dim % 2 != 0) throw std::invalid_argument("TorusGrid: n must be even");
    if (n_per_dim < 8) throw std::invalid_argument("TorusGrid: n must be >= 8");
    if (!(length > 0.0)) throw std::invalid_argument("TorusGrid: length must be positive");

    size_ = 1;
    for (int i = 0; i < dim_; ++i) size_ *= static_cast<std::size_t>(n_);

    kint_.resize(static_cast<std::size_t>(n_));
    kphys_.resize(static_cast<std::size_t>(n_));
    const double scale = 2.0 * M_PI / length_;
    for (int i = 0; i < n_; ++i) {
        int k = (i <= n_ / 2) ? i : i - n_;
        kint_[static_cast<std::size_t>(i)] = k;
        kphys_[static_cast<std::size_t>(i)] = scale * k;
    }

    plans_ = std::make_unique<Plans>();
    std::vector<std::complex<double>> scratch_in(size_), scratch_out(size_);
    int dims[3] = {n_, n_, n_};
    std::lock_guard<std::mutex> lock(planner_mutex());
    // FFTW_UNALIGNED lets the new-array execute functions run on any
    // double-aligned buffer, which keeps transforms reentrant.
    plans_->fwd = fftw_plan_dft(dim_, dims,
                                reinterpret_cast<fftw_complex*>(scratch_in.data()),
                                reinterpret_cast<fftw_complex*>(scratch_out.data()),
                                FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_->inv = fftw_plan_dft(dim_, dims,
                                reinterpret_cast<fftw_complex*>(scratch_in.data()),
                                reinterpret_cast<fftw_complex*>(scratch_out.data()),
                                FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plans_->fwd || !plans_->inv) throw std::runtime_error("TorusGrid: FFTW plan creation failed");
}

TorusGrid::~TorusGrid() = default;

double TorusGrid::cell_volume() const {
    double v = 1.0;
    for (int i = 0; i < dim_; ++i) v *= dx();
    return v;
}

std::array<int, 3> TorusGrid::unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int d = dim_ - 1; d >= 0; --d) {
        idx[static_cast<std::size_t>(d)] = static_cast<int>(flat % static_cast<std::size_t>(n_));
        flat /= static_cast<std::size_t>(n_);
    }
    return idx;
}

double TorusGrid::wavevector_norm(std::size_t flat) const {
    auto idx = unflatten(flat);
    double s = 0.0;
    for (int d = 0; d < dim_; ++d) {
        double k = kphys_[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
        s += k * k;
    }
    return std::sqrt(s);
}

double TorusGrid::wavenumber_x1(std::size_t flat) const {
    auto idx = unflatten(flat);
    return kphys_[static_cast<std::size_t>(idx[0])];
}

bool TorusGrid::has_nyquist(std::size_t flat) const {
    auto idx = unflatten(flat);
    for (int d = 0; d < dim_; ++d) {
        if (idx[static_cast<std::size_t>(d)] == n_ / 2) return true;
    }
    return false;
}

bool TorusGrid::above_dealias_cut(std::size_t flat) const {
    auto idx = unflatten(flat);
    for (int d = 0; d < dim_; ++d) {
        int k = kint_[static_cast<std::size_t>(idx[static_cast<std::size_t>(d)])];
        if (3 * std::abs(k) > n_) return true;
    }
    return false;
}

void TorusGrid::forward(const std::vector<double>& phys,
                        std::vector<std::complex<double>>& spec) const {
    if (phys.size() != size_) throw std::invalid_argument("TorusGrid::forward: size mismatch");
    std::vector<std::complex<double>> in(size_);
    for (std::size_t i = 0; i < size_; ++i) in[i] = phys[i];
    spec.resize(size_);
    fftw_execute_dft(plans_->fwd,
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(spec.data()));
    const double norm = 1.0 / static_cast<double>(size_);
    for (auto& c : spec) c *= norm;
}

void TorusGrid::inverse(const std::vector<std::complex<double>>& spec,
                        std::vector<double>& phys) const {
    if (spec.size() != size_) throw std::invalid_argument("TorusGrid::inverse: size mismatch");
    std::vector<std::complex<double>> in(spec), out(size_);
    fftw_execute_dft(plans_->inv,
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    phys.resize(size_);
    for (std::size_t i = 0; i < size_; ++i) phys[i] = out[i].real();
}

GridPtr make_grid(int dim, int n_per_dim, double length) {
    return std::make_shared<const TorusGrid>(dim, n_per_dim, length);
}

} // namespace ualign
