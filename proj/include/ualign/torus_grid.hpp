#ifndef UALIGN_TORUS_GRID_HPP
#define UALIGN_TORUS_GRID_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace ualign {

/** Uniform periodic lattice on [0,L)^d with spectral wavenumber tables.
 *
 * Physical nodes are x_j = j*L/n per dimension. Integer wavenumbers follow
 * the standard symmetric FFT ordering {0,1,...,n/2,-n/2+1,...,-1}; physical
 * wavenumbers carry the 2*pi/L scale factor. The grid owns the FFT plans,
 * so fields sharing a grid share transform machinery. */
class TorusGrid {
  public:
    /** Constructs a d-dimensional grid; throws std::invalid_argument on an
     * odd n, n < 8, nonpositive length, or dim outside {1,2,3}. */
    TorusGrid(int dim, int n_per_dim, double length);
    ~TorusGrid();

    TorusGrid(const TorusGrid&) = delete;
    TorusGrid& operator=(const TorusGrid&) = delete;

    int dim() const { return dim_; }
    int n_per_dim() const { return n_; }
    double length() const { return length_; }
    /** Grid spacing L/n. */
    double dx() const { return length_ / n_; }
    /** Total number of lattice points n^d. */
    std::size_t size() const { return size_; }
    /** Cell volume (dx)^d, the quadrature weight of one node. */
    double cell_volume() const;

    /** Integer wavenumber of 1-d index i (in {-n/2+1,...,n/2}). */
    int wavenumber_index(int i) const { return kint_[static_cast<std::size_t>(i)]; }
    /** Physical wavenumber component 2*pi*k/L of 1-d index i. */
    double wavenumber(int i) const { return kphys_[static_cast<std::size_t>(i)]; }
    /** Physical node coordinate of 1-d index i. */
    double node(int i) const { return dx() * i; }

    /** Decomposes a flat row-major index into per-dimension indices. */
    std::array<int, 3> unflatten(std::size_t flat) const;
    /** Euclidean norm of the physical wavenumber vector at a flat index. */
    double wavevector_norm(std::size_t flat) const;
    /** Physical wavenumber of dimension 0 (the x1 direction) at a flat index. */
    double wavenumber_x1(std::size_t flat) const;
    /** True if any integer wavenumber component is the Nyquist index n/2. */
    bool has_nyquist(std::size_t flat) const;
    /** True if all integer wavenumber components exceed the 2/3 cut |k|<=n/3. */
    bool above_dealias_cut(std::size_t flat) const;

    /** Unnormalized forward DFT followed by 1/size() scaling, so the result
     * holds actual Fourier coefficients: f(x) = sum_k fhat_k exp(i k.x). */
    void forward(const std::vector<double>& phys, std::vector<std::complex<double>>& spec) const;
    void inverse(const std::vector<std::complex<double>>& spec, std::vector<double>& phys) const;

    bool same_layout(const TorusGrid& other) const {
        return dim_ == other.dim_ && n_ == other.n_ && length_ == other.length_;
    }

  private:
    int dim_;
    int n_;
    double length_;
    std::size_t size_;
    std::vector<int> kint_;
    std::vector<double> kphys_;
    struct Plans;
    std::unique_ptr<Plans> plans_;
};

using GridPtr = std::shared_ptr<const TorusGrid>;

/** Factory mirroring the grid constructor; validates and shares ownership. */
GridPtr make_grid(int dim, int n_per_dim, double length = 6.283185307179586476925286766559);

} // namespace ualign

#endif
