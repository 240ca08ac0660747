#ifndef UALIGN_SCALAR_FIELD_HPP
#define UALIGN_SCALAR_FIELD_HPP

#include <complex>
#include <functional>
#include <vector>

#include "ualign/torus_grid.hpp"

namespace ualign {

enum class Representation { Physical, Spectral };

/** One real scalar field on a TorusGrid, held in either physical or
 * spectral form. Conversions return new fields; a field is never mutated
 * through its public surface except by whole-value assignment. */
class ScalarField {
  public:
    ScalarField(GridPtr grid, std::vector<double> physical_values, double time = 0.0);
    ScalarField(GridPtr grid, std::vector<std::complex<double>> spectral_values, double time = 0.0);

    /** Builds a field by sampling fn at the physical nodes. fn receives the
     * node coordinates (only the first dim() entries are meaningful). */
    static ScalarField sample(GridPtr grid, const std::function<double(const std::array<double, 3>&)>& fn);
    static ScalarField constant(GridPtr grid, double value);

    const TorusGrid& grid() const { return *grid_; }
    GridPtr grid_ptr() const { return grid_; }
    Representation representation() const { return repr_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    ScalarField to_physical() const;
    ScalarField to_spectral() const;

    /** Physical values; converts on the fly if held spectrally. */
    std::vector<double> physical() const;
    /** Spectral coefficients; converts on the fly if held physically. */
    std::vector<std::complex<double>> spectral() const;

    double min() const;
    double max() const;
    double sup_norm() const;
    /** Extrema of the band-limited interpolant: zero-padded spectral
     * refinement plus a parabolic peak correction. Grid-sampled extrema
     * wander by O(dx^2) as the continuum extremum moves between nodes,
     * which is far above the tolerances of the transport monitors. */
    double refined_max(int factor = 4) const;
    double refined_min(int factor = 4) const;
    double refined_sup(int factor = 4) const;
    /** Discrete integral over the torus, sum * cell_volume. */
    double integral() const;
    bool finite() const;

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b); // pointwise
    friend ScalarField operator*(double s, const ScalarField& a);
    ScalarField& operator+=(const ScalarField& b);

  private:
    GridPtr grid_;
    Representation repr_;
    std::vector<double> phys_;
    std::vector<std::complex<double>> spec_;
    double time_ = 0.0;
};

/** Throws std::invalid_argument unless both fields share one grid layout. */
void require_same_grid(const ScalarField& a, const ScalarField& b, const char* who);

/** Applies a real multiplier m(flat_index) in spectral space. */
ScalarField apply_spectral_multiplier(const ScalarField& f,
                                      const std::function<double(std::size_t)>& multiplier);

/** Fractional Laplacian via the Fourier symbol |k|^alpha; the mean mode
 * maps to zero. Rejects alpha outside (0,2). */
ScalarField fractional_laplacian(const ScalarField& f, double alpha);

/** Spectral x1-derivative (multiplier i*k1); the k1 Nyquist plane is zeroed
 * to keep the result in the real subspace. */
ScalarField partial_x1(const ScalarField& f);

/** Inverts partial_x1 on Lambda^alpha rho: multiplier |k|^alpha/(i*k1) on
 * modes with k1 != 0. Rejects rho whose Lambda^alpha rho has spectral mass
 * above rel_tol (relative to the largest mode) on the k1 = 0 planes or the
 * k1 Nyquist plane, where the inversion is undefined. */
ScalarField inv_dx1_lambda(const ScalarField& rho, double alpha, double rel_tol = 1e-10);

/** Two-thirds rule: zeroes every mode with any |k_i| > n/3. */
ScalarField dealias(const ScalarField& f);

/** Gradient component along dimension d (0-based). */
ScalarField partial(const ScalarField& f, int d);

/** Pointwise Euclidean norm of the spectral gradient, returned physically. */
ScalarField gradient_norm(const ScalarField& f);

/** Translates f by the vector a (periodic), via phase shifts exp(i k.a). */
ScalarField translate(const ScalarField& f, const std::array<double, 3>& a);

} // namespace ualign

#endif
