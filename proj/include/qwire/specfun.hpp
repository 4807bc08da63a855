#pragma once

/**
 * Special functions and numeric primitives for the hard-wall wire.
 *
 * Units: hbar = 2m = 1, wire width = 1. The n-th transverse threshold of the
 * hard-wall wire is (n pi)^2.
 */

#include <complex>
#include <numbers>

namespace qwire {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Euler-Mascheroni constant.
double euler_gamma();

/// sin(pi t), exactly zero at integers and exactly +-1 at half-integers.
double sin_pi(double t);

/// Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt, for x > 0.
double cosine_integral(double x);

/**
 * An energy stored as an offset from a hard-wall threshold,
 * omega = (ref_mode * pi)^2 + offset.
 *
 * Distances to other thresholds are formed as (ref^2 - l^2) pi^2 + offset, so
 * an energy a hair above a cut-off keeps its offset exactly instead of losing
 * it to cancellation against (m pi)^2. ref_mode = 0 is a plain energy.
 */
class Energy {
public:
    constexpr Energy() = default;

    static constexpr Energy at(double omega) { return Energy(0, omega); }
    static Energy above_threshold(int m, double offset);

    [[nodiscard]] double value() const { return double(ref_) * ref_ * kPi * kPi + offset_; }
    [[nodiscard]] int reference_mode() const { return ref_; }
    [[nodiscard]] double offset() const { return offset_; }

    /// omega - (l pi)^2, computed without cancellation when l is the reference mode.
    [[nodiscard]] double distance_to_threshold(int l) const {
        return (double(ref_) * ref_ - double(l) * l) * kPi * kPi + offset_;
    }

    /// True when omega coincides with (l pi)^2 (exactly for the reference
    /// mode, to 1e-13 relative otherwise).
    [[nodiscard]] bool at_threshold(int l) const;

private:
    constexpr Energy(int ref, double offset) : ref_(ref), offset_(offset) {}
    int ref_ = 0;
    double offset_ = 0.0;
};

/// sqrt(d) on the outgoing branch: real non-negative for d >= 0, +i sqrt(-d) otherwise.
cplx branch_sqrt(double d);

struct LongitudinalWavenumber {
    int mode_index = 0;
    double energy = 0.0;
    cplx value;

    [[nodiscard]] bool propagating() const { return value.imag() == 0.0 && value.real() > 0.0; }
    [[nodiscard]] bool evanescent() const { return value.imag() > 0.0; }
};

/// k_l = sqrt(omega - (l pi)^2) with the decaying branch below cut-off.
LongitudinalWavenumber longitudinal_wavenumber(int l, Energy omega);
LongitudinalWavenumber longitudinal_wavenumber(int l, double omega);

/**
 * S(rho) = 2 pi sum_{n > m} sin^2(n pi eps) / sqrt((n pi)^2 - omega) exp(-(n pi rho / 2)^2).
 *
 * All summed modes must be evanescent: omega < ((m+1) pi)^2. The series is cut
 * once the Gaussian factor drops below 1e-16 and a geometric tail bound is
 * below 1e-12 of the running total.
 */
double gaussian_cut_sum(double epsilon, Energy omega, int m, double rho);

}  // namespace qwire
