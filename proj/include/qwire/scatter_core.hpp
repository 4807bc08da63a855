#pragma once

/**
 * Exact scattering of a hard-wall wire mode off a point impurity.
 *
 * For incident mode n at energy omega the field is
 *
 *   x > 0:  psi = sum_l (delta_nl - A_nl) sin(l pi y) exp(i k_l x)
 *   x < 0:  psi = psi_inc - sum_l A_nl sin(l pi y) exp(i k_l |x|)
 *
 *   A_nl = sin(n pi eps) sin(l pi eps) / (i k_l B),
 *   B    = ln(rho0 / rho_bar) / (2 pi) + sum_{n' <= m} sin^2(n' pi eps) / (i k_n')
 *
 * where rho_bar is the regularized on-site length absorbing the logarithmic
 * singularity of the Green's function, and every mode n' > m is evanescent.
 * The result does not depend on which such m is used.
 */

#include <functional>
#include <optional>
#include <vector>

#include "qwire/extrapolation.hpp"
#include "qwire/specfun.hpp"
#include "qwire/wire_model.hpp"

namespace qwire {

class Impurity {
public:
    /// epsilon in (0, 1) is the transverse position; rho0 > 0 the strength length.
    Impurity(double epsilon, double rho0);

    [[nodiscard]] double epsilon() const { return epsilon_; }
    [[nodiscard]] double rho0() const { return rho0_; }
    /// Bound-state de Broglie wavelength pi rho0 exp(gamma/2) / 2.
    [[nodiscard]] double de_broglie_wavelength() const;

private:
    double epsilon_;
    double rho0_;
};

// ---------------------------------------------------------------------------
// Regularized on-site length

struct RhoBarOptions {
    /// First width of the ladder rho_k = start * 2^-k. Capped at twice the
    /// distance to the nearer wall, which sets the scale the ladder must resolve.
    double start = 1e-2;
    /// Ladder depth; the table eliminates rho^2p and rho^2p ln rho pairs.
    int levels = 9;
};

struct RhoBar {
    double value = 0.0;
    double log_value = 0.0;
    /// Difference between the last two extrapolation orders (in ln rho_bar).
    double error = 0.0;
};

/// ln rho_bar = lim_{rho -> 0} [ln rho + S(rho)], with S from gaussian_cut_sum.
/// Throws ConvergenceError when successive orders disagree by more than 1e-6.
RhoBar rho_bar(double epsilon, Energy omega, int m, RhoBarOptions options = {});

/// Independent route to ln rho_bar: the divergent part of the series is summed
/// in closed form (harmonic numbers, Clausen log) and only an absolutely
/// convergent O(n^-3) remainder is summed numerically.
double log_rho_bar_tail_subtraction(double epsilon, Energy omega, int m);

/// Threshold index for an energy: largest m >= 1 with (m^2 - m + 1/2) pi^2 <= omega,
/// i.e. each threshold owns the energies up to the midpoints with its neighbours.
int threshold_window(double omega);

// ---------------------------------------------------------------------------
// Exact solution

/// psi_inc = sin(n pi y) exp(i k_n x).
cplx incident_wave(int n, Energy omega, Point r);

struct FieldOptions {
    /// Hard cap on the evanescent modes kept in a field evaluation; only
    /// reached within ~1e-3 of the impurity line x = 0.
    int max_modes = 4096;
};

class ScatteringSolution {
public:
    [[nodiscard]] int incident_mode() const { return n_; }
    [[nodiscard]] Energy energy() const { return omega_; }
    [[nodiscard]] int threshold_index() const { return m_; }
    [[nodiscard]] double epsilon() const { return epsilon_; }
    [[nodiscard]] double rho_bar() const { return rho_bar_; }
    /// Delta_m^{-1/2}; empty when the resonant mode is decoupled.
    [[nodiscard]] const std::optional<cplx>& delta_m_inv_sqrt() const { return delta_m_inv_sqrt_; }
    [[nodiscard]] double unitarity_defect() const { return unitarity_defect_; }

    [[nodiscard]] cplx amplitude(int l) const;
    [[nodiscard]] cplx transmitted(int l) const { return (l == n_ ? 1.0 : 0.0) - amplitude(l); }
    [[nodiscard]] cplx reflected(int l) const { return -amplitude(l); }
    [[nodiscard]] cplx wavenumber(int l) const;
    /// Modes 1..propagating_modes() carry flux at this energy.
    [[nodiscard]] int propagating_modes() const { return propagating_; }
    /// A_nl for l = 1..propagating_modes().
    [[nodiscard]] std::vector<cplx> propagating_amplitudes() const;

    [[nodiscard]] cplx field(Point r, FieldOptions options = {}) const;

    friend ScatteringSolution solve_scattering(const WireGeometry&, const Impurity&, int, Energy, int, const RhoBar&);

private:
    int n_ = 0;
    int m_ = 0;
    Energy omega_;
    double epsilon_ = 0.0;
    double rho_bar_ = 0.0;
    cplx common_;  // sin(n pi eps) / B
    std::optional<cplx> delta_m_inv_sqrt_;
    double unitarity_defect_ = 0.0;
    int propagating_ = 0;
};

/**
 * Full solution for incident mode n. Preconditions: hard-wall geometry,
 * mode n propagating, omega < ((m+1) pi)^2. Throws ThresholdError when omega
 * sits exactly on a cut-off n' <= m.
 */
ScatteringSolution solve_scattering(const WireGeometry& geometry, const Impurity& impurity, int n, Energy omega, int m);
/// Same, reusing a rho_bar already computed for (epsilon, omega, m).
ScatteringSolution solve_scattering(const WireGeometry& geometry, const Impurity& impurity, int n, Energy omega, int m,
                                    const RhoBar& precomputed);

cplx amplitude(const WireGeometry& geometry, const Impurity& impurity, int n, int l, Energy omega, int m);

cplx scattered_field(const WireGeometry& geometry, const Impurity& impurity, int n, Energy omega, int m, Point r,
                     FieldOptions options = {});

// ---------------------------------------------------------------------------
// Threshold limit of the exact solution

struct ThresholdLimitOptions {
    /// Largest offset above (m pi)^2, as a fraction of (m pi)^2.
    double first_relative_offset = 1e-6;
    /// Ladder length; offsets shrink by 4 (k_m by 2) per level.
    int levels = 6;
};

/**
 * The exact solution on a ladder omega_j = (m pi)^2 + delta_j approaching the
 * m-th cut-off from above. Limits are polynomial extrapolations in k_m, in
 * which every quantity here is analytic.
 */
class ThresholdApproach {
public:
    ThresholdApproach(const WireGeometry& geometry, const Impurity& impurity, int n, int m, ThresholdLimitOptions options = {});

    [[nodiscard]] Extrapolated<cplx> amplitude_limit(int l) const;
    [[nodiscard]] Extrapolated<cplx> field_limit(Point r, FieldOptions options = {}) const;
    [[nodiscard]] const std::vector<ScatteringSolution>& ladder() const { return ladder_; }
    [[nodiscard]] const std::vector<double>& wavenumbers() const { return k_; }

private:
    Extrapolated<cplx> limit(const std::function<cplx(const ScatteringSolution&)>& f) const;
    std::vector<ScatteringSolution> ladder_;
    std::vector<double> k_;
};

// ---------------------------------------------------------------------------
// Near-threshold and threshold reductions

/// Delta_m^{-1/2} = ln(rho0/rho_bar) / (2 pi sin^2(m pi eps))
///                  - i sum_{n'<m} [sin^2(n' pi eps) / sin^2(m pi eps)] / (pi sqrt(m^2 - n'^2)).
/// Throws DecoupledModeError when |sin(m pi eps)| <= 1e-8.
cplx delta_m(const WireGeometry& geometry, const Impurity& impurity, int m, Energy omega);

struct FieldValue {
    cplx value;
    /// sin(m pi eps) = 0 (or chi_m(eps) = 0): no resonant scattering, value is psi_inc.
    bool decoupled = false;
    /// |omega - (m pi)^2| / |Delta_m| > 0.1: the two-mode reduction is unreliable.
    bool outside_validity = false;
};

/// Two-mode approximation
/// psi_inc - [sin(n pi eps)/sin(m pi eps)] sin(m pi y) e^{i k_m |x|} / (1 + i k_m Delta_m^{-1/2}).
FieldValue near_threshold_field(const WireGeometry& geometry, const Impurity& impurity, int n, int m, Energy omega, Point r);

/// Field exactly at omega = omega_m. Independent of rho0:
/// hard wall   psi_inc - [sin(n pi eps)/sin(m pi eps)] sin(m pi y),
/// general     chi_n(y) e^{i sqrt(omega_m - omega_n) x} - [chi_n(eps)/chi_m(eps)] chi_m(y).
FieldValue threshold_field(const WireGeometry& geometry, const Impurity& impurity, int n, int m, Point r);

/// C = 4 exp(gamma/2 - Ci(pi)).
double surface_constant();

enum class WallSide { lower, upper };

/// Surface form ln(rho0 / (C eps)) / (2 pi (m pi eps)^2), eps measured from the
/// nearer wall. Requires m*eps < 0.05 or m*(1-eps) < 0.05.
cplx surface_impurity_delta(const Impurity& impurity, int m);

/// psi_inc at threshold minus (n/m) sin(m pi y) scaled by the wall parity:
/// lower wall -(n/m), upper wall (-1)^{n-m+1} (n/m). Needs 1 <= n < m.
cplx surface_threshold_field(int n, int m, WallSide side, Point r);

// ---------------------------------------------------------------------------
// 1D references

class OneDBarrier {
public:
    enum class Kind { weak_finite, delta };

    static OneDBarrier weak_finite(double height, double width);
    static OneDBarrier delta(double strength);

    [[nodiscard]] Kind kind() const { return kind_; }
    [[nodiscard]] double height() const { return height_; }
    [[nodiscard]] double width() const { return width_; }
    [[nodiscard]] double strength() const { return kind_ == Kind::delta ? strength_ : height_ * width_; }
    /// sqrt(dV) L < 0.1 for the weak barrier; always true for the delta.
    [[nodiscard]] bool weak_regime() const;

private:
    Kind kind_ = Kind::delta;
    double height_ = 0.0;
    double width_ = 0.0;
    double strength_ = 0.0;
};

/// Weak barrier: 1 / (1 + 4 omega / (dV L)^2). Delta: 1 / (1 + 4 omega / alpha^2).
double reflection_1d(const OneDBarrier& barrier, double omega);

/// Exact reflection of a rectangular barrier of the given height and width.
double reflection_rectangular_barrier(double height, double width, double omega);

}  // namespace qwire
