#include "qwire/scatter_core.hpp"

#include <array>
#include <cmath>
#include <string>

#include "compensated_sum.hpp"
#include "qwire/errors.hpp"

namespace qwire {

namespace {

constexpr double kDecoupledTolerance = 1e-8;
const cplx kI(0.0, 1.0);

void require_hard_wall(const WireGeometry& geometry, const char* op) {
    if (geometry.kind() != WallKind::hard_wall)
        throw DomainError(std::string(op) + ": only defined for the hard-wall wire");
}

void require_inside(Point r, const char* op) {
    if (!(r.y >= 0.0 && r.y <= 1.0)) throw DomainError(std::string(op) + ": y outside [0, 1]");
    if (!std::isfinite(r.x)) throw DomainError(std::string(op) + ": x not finite");
}

double sin_mode(int n, double y) { return sin_pi(double(n) * y); }

}  // namespace

Impurity::Impurity(double epsilon, double rho0) : epsilon_(epsilon), rho0_(rho0) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("Impurity: epsilon must lie in (0, 1)");
    if (!(rho0 > 0.0)) throw DomainError("Impurity: rho0 must be positive");
}

double Impurity::de_broglie_wavelength() const { return kPi * rho0_ * std::exp(0.5 * euler_gamma()) / 2.0; }

// ---------------------------------------------------------------------------

RhoBar rho_bar(double epsilon, Energy omega, int m, RhoBarOptions options) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("rho_bar: epsilon must lie in (0, 1)");
    if (m < 0) throw DomainError("rho_bar: negative threshold index");
    if (!(omega.distance_to_threshold(m + 1) < 0.0))
        throw DomainError("rho_bar: omega must lie below ((m+1) pi)^2");
    if (options.levels < 3) throw DomainError("rho_bar: ladder needs at least 3 levels");
    if (!(options.start > 0.0 && options.start <= 0.1)) throw DomainError("rho_bar: ladder start must be in (0, 0.1]");

    const double start = std::min(options.start, 2.0 * std::min(epsilon, 1.0 - epsilon));
    std::vector<double> values(std::size_t(options.levels));
    std::vector<double> exponents;
    for (int k = 0; k < options.levels; ++k) {
        const double rho = std::ldexp(start, -k);
        values[std::size_t(k)] = std::log(rho) + gaussian_cut_sum(epsilon, omega, m, rho);
        if (k > 0) exponents.push_back(2.0 * double((k + 1) / 2));
    }
    const auto ex = richardson<double>(values, 2.0, exponents);
    if (!(ex.error <= 1e-6) || !std::isfinite(ex.value))
        throw ConvergenceError("rho_bar: extrapolation orders disagree by " + std::to_string(ex.error));
    return {std::exp(ex.value), ex.value, ex.error};
}

double log_rho_bar_tail_subtraction(double epsilon, Energy omega, int m) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("log_rho_bar_tail_subtraction: epsilon must lie in (0, 1)");
    if (m < 0) throw DomainError("log_rho_bar_tail_subtraction: negative threshold index");
    if (!(omega.distance_to_threshold(m + 1) < 0.0))
        throw DomainError("log_rho_bar_tail_subtraction: omega must lie below ((m+1) pi)^2");

    // 2 pi sin^2/kappa_n = (1 - cos(2 pi n eps))/n + 2 pi sin^2 (1/kappa_n - 1/(n pi)).
    // The first piece has a closed-form limit:
    //   lim [ln rho + sum_{n>m} (1 - cos 2 pi n eps)/n e^{-(n pi rho/2)^2}]
    //     = gamma/2 - ln(pi/2) - H_m + ln(2 sin pi eps) + sum_{n<=m} cos(2 pi n eps)/n.
    double closed = 0.5 * euler_gamma() - std::log(0.5 * kPi) + std::log(2.0 * std::sin(kPi * epsilon));
    for (int n = 1; n <= m; ++n) closed += (std::cos(2.0 * kPi * double(n) * epsilon) - 1.0) / double(n);

    // Remainder 2 pi sin^2 omega / ((n pi + kappa) kappa n pi) = O(n^-3).
    const double w = omega.value();
    constexpr long kTerms = 2000000;
    detail::CompensatedSum rest;
    for (long n = m + 1; n <= kTerms; ++n) {
        const double npi = kPi * double(n);
        const double kappa = std::sqrt(-omega.distance_to_threshold(int(n)));
        const double s = std::sin(kPi * epsilon * double(n));
        rest.add(2.0 * kPi * s * s * w / ((npi + kappa) * kappa * npi));
    }
    // Tail beyond kTerms with sin^2 averaged to 1/2: sum w/(pi^2 n^3) ~ w/(2 pi^2 N^2).
    rest.add(w / (2.0 * kPi * kPi * double(kTerms) * double(kTerms)));
    return closed + rest.value();
}

int threshold_window(double omega) {
    if (!std::isfinite(omega)) throw DomainError("threshold_window: energy not finite");
    const double x = omega / (kPi * kPi);
    if (x < 2.5) return 1;
    // largest m with m^2 - m + 1/2 <= x
    int m = int(std::floor(0.5 * (1.0 + std::sqrt(4.0 * x - 1.0))));
    while (double(m + 1) * (m + 1) - (m + 1) + 0.5 <= x) ++m;
    while (m > 1 && double(m) * m - m + 0.5 > x) --m;
    return m;
}

// ---------------------------------------------------------------------------

cplx incident_wave(int n, Energy omega, Point r) {
    if (n < 1) throw DomainError("incident_wave: mode index must be >= 1");
    const cplx k = longitudinal_wavenumber(n, omega).value;
    return sin_mode(n, r.y) * std::exp(kI * k * r.x);
}

cplx ScatteringSolution::wavenumber(int l) const { return longitudinal_wavenumber(l, omega_).value; }

cplx ScatteringSolution::amplitude(int l) const {
    if (l < 1) throw DomainError("ScatteringSolution::amplitude: mode index must be >= 1");
    const double s = sin_mode(l, epsilon_);
    if (s == 0.0 || common_ == 0.0) return {0.0, 0.0};
    return common_ * s / (kI * wavenumber(l));
}

std::vector<cplx> ScatteringSolution::propagating_amplitudes() const {
    std::vector<cplx> out;
    out.reserve(std::size_t(propagating_));
    for (int l = 1; l <= propagating_; ++l) out.push_back(amplitude(l));
    return out;
}

cplx ScatteringSolution::field(Point r, FieldOptions options) const {
    require_inside(r, "ScatteringSolution::field");
    if (options.max_modes < 1) throw DomainError("ScatteringSolution::field: max_modes must be >= 1");
    // For either sign of x, psi = psi_inc(x) - sum_l A_nl sin(l pi y) e^{i k_l |x|}.
    const double ax = std::abs(r.x);
    cplx scattered(0.0, 0.0);
    const double ratio = std::exp(-kPi * ax);
    const int last_resonant = std::max(n_, m_);
    for (int l = 1; l <= options.max_modes; ++l) {
        const cplx k = wavenumber(l);
        const cplx a = amplitude(l);
        scattered += a * sin_mode(l, r.y) * std::exp(kI * k * ax);
        if (l > last_resonant && ax > 0.0) {
            // |A_nl| <= |common| / kappa_l and kappa grows by ~pi per mode.
            const double bound = std::abs(common_) / k.imag() * std::exp(-k.imag() * ax) / (1.0 - ratio);
            if (bound < 1e-16 * std::max(1.0, std::abs(scattered))) break;
        }
    }
    return incident_wave(n_, omega_, r) - scattered;
}

ScatteringSolution solve_scattering(const WireGeometry& geometry, const Impurity& impurity, int n, Energy omega, int m) {
    require_hard_wall(geometry, "solve_scattering");
    if (m < 1) throw DomainError("solve_scattering: threshold index must be >= 1");
    if (!(omega.distance_to_threshold(m + 1) < 0.0))
        throw DomainError("solve_scattering: omega must lie below ((m+1) pi)^2 for threshold index m");
    return solve_scattering(geometry, impurity, n, omega, m, rho_bar(impurity.epsilon(), omega, m));
}

ScatteringSolution solve_scattering(const WireGeometry& geometry, const Impurity& impurity, int n, Energy omega, int m,
                                    const RhoBar& rb) {
    require_hard_wall(geometry, "solve_scattering");
    if (n < 1) throw DomainError("solve_scattering: incident mode must be >= 1");
    if (m < 1) throw DomainError("solve_scattering: threshold index must be >= 1");
    if (!(omega.distance_to_threshold(m + 1) < 0.0))
        throw DomainError("solve_scattering: omega must lie below ((m+1) pi)^2 for threshold index m");
    for (int l = 1; l <= m; ++l)
        if (omega.at_threshold(l))
            throw ThresholdError("solve_scattering: omega sits on threshold " + std::to_string(l) +
                                 "; use the threshold-limit operations");
    if (!(omega.distance_to_threshold(n) > 0.0)) throw DomainError("solve_scattering: incident mode does not propagate");

    const double eps = impurity.epsilon();
    ScatteringSolution sol;
    sol.n_ = n;
    sol.m_ = m;
    sol.omega_ = omega;
    sol.epsilon_ = eps;
    sol.rho_bar_ = rb.value;

    const double bracket = (std::log(impurity.rho0()) - rb.log_value) / (2.0 * kPi);
    cplx b(bracket, 0.0);
    for (int l = 1; l <= m; ++l) {
        const double s = sin_mode(l, eps);
        b += s * s / (kI * longitudinal_wavenumber(l, omega).value);
    }
    const double sn = sin_mode(n, eps);
    if (sn == 0.0)
        sol.common_ = 0.0;
    else if (b == 0.0)
        throw PoleError("solve_scattering: amplitude denominator vanishes");
    else
        sol.common_ = sn / b;

    int prop = 0;
    while (omega.distance_to_threshold(prop + 1) > 0.0) ++prop;
    sol.propagating_ = prop;

    const double kn = longitudinal_wavenumber(n, omega).value.real();
    double flux = 0.0;
    for (int l = 1; l <= prop; ++l) {
        const double kl = longitudinal_wavenumber(l, omega).value.real();
        const cplx a = sol.amplitude(l);
        flux += kl / kn * (std::norm(sol.transmitted(l)) + std::norm(a));
    }
    sol.unitarity_defect_ = std::abs(1.0 - flux);

    const double sm = sin_mode(m, eps);
    if (std::abs(sm) > kDecoupledTolerance) {
        cplx d(bracket / (sm * sm), 0.0);
        for (int l = 1; l < m; ++l) {
            const double s = sin_mode(l, eps);
            d -= kI * (s * s / (sm * sm)) / (kPi * std::sqrt(double(m) * m - double(l) * l));
        }
        sol.delta_m_inv_sqrt_ = d;
    }
    return sol;
}

cplx amplitude(const WireGeometry& geometry, const Impurity& impurity, int n, int l, Energy omega, int m) {
    return solve_scattering(geometry, impurity, n, omega, m).amplitude(l);
}

cplx scattered_field(const WireGeometry& geometry, const Impurity& impurity, int n, Energy omega, int m, Point r,
                     FieldOptions options) {
    require_inside(r, "scattered_field");
    return solve_scattering(geometry, impurity, n, omega, m).field(r, options);
}

// ---------------------------------------------------------------------------

ThresholdApproach::ThresholdApproach(const WireGeometry& geometry, const Impurity& impurity, int n, int m,
                                     ThresholdLimitOptions options) {
    if (n < 1 || n >= m) throw DomainError("ThresholdApproach: need 1 <= n < m");
    if (options.levels < 2) throw DomainError("ThresholdApproach: ladder needs at least 2 levels");
    if (!(options.first_relative_offset > 0.0 && options.first_relative_offset < 1e-2))
        throw DomainError("ThresholdApproach: first offset must be in (0, 1e-2)");
    const double first = options.first_relative_offset * double(m) * m * kPi * kPi;
    for (int j = 0; j < options.levels; ++j) {
        const double offset = std::ldexp(first, -2 * j);
        ladder_.push_back(solve_scattering(geometry, impurity, n, Energy::above_threshold(m, offset), m));
        k_.push_back(std::sqrt(offset));
    }
}

Extrapolated<cplx> ThresholdApproach::limit(const std::function<cplx(const ScatteringSolution&)>& f) const {
    std::vector<cplx> values;
    values.reserve(ladder_.size());
    for (const auto& s : ladder_) values.push_back(f(s));
    return extrapolate_to_zero<cplx>(k_, values);
}

Extrapolated<cplx> ThresholdApproach::amplitude_limit(int l) const {
    return limit([l](const ScatteringSolution& s) { return s.amplitude(l); });
}

Extrapolated<cplx> ThresholdApproach::field_limit(Point r, FieldOptions options) const {
    return limit([r, options](const ScatteringSolution& s) { return s.field(r, options); });
}

// ---------------------------------------------------------------------------

cplx delta_m(const WireGeometry& geometry, const Impurity& impurity, int m, Energy omega) {
    require_hard_wall(geometry, "delta_m");
    if (m < 1) throw DomainError("delta_m: threshold index must be >= 1");
    const double eps = impurity.epsilon();
    const double sm = sin_mode(m, eps);
    if (std::abs(sm) <= kDecoupledTolerance)
        throw DecoupledModeError("delta_m: sin(m pi eps) vanishes; use the full amplitude");
    const RhoBar rb = rho_bar(eps, omega, m);
    cplx d((std::log(impurity.rho0()) - rb.log_value) / (2.0 * kPi * sm * sm), 0.0);
    for (int l = 1; l < m; ++l) {
        const double s = sin_mode(l, eps);
        d -= kI * (s * s / (sm * sm)) / (kPi * std::sqrt(double(m) * m - double(l) * l));
    }
    return d;
}

FieldValue near_threshold_field(const WireGeometry& geometry, const Impurity& impurity, int n, int m, Energy omega,
                                Point r) {
    require_hard_wall(geometry, "near_threshold_field");
    require_inside(r, "near_threshold_field");
    if (n < 1 || n >= m) throw DomainError("near_threshold_field: need 1 <= n < m");
    const double eps = impurity.epsilon();
    const double sm = sin_mode(m, eps);
    FieldValue out;
    const cplx inc = incident_wave(n, omega, r);
    if (std::abs(sm) <= kDecoupledTolerance) {
        out.value = inc;
        out.decoupled = true;
        return out;
    }
    const cplx d = delta_m(geometry, impurity, m, omega);
    const cplx km = longitudinal_wavenumber(m, omega).value;
    const double ratio = sin_mode(n, eps) / sm;
    out.value = inc - ratio * sin_mode(m, r.y) * std::exp(kI * km * std::abs(r.x)) / (1.0 + kI * km * d);
    out.outside_validity = std::abs(omega.distance_to_threshold(m)) * std::norm(d) > 0.1;
    return out;
}

FieldValue threshold_field(const WireGeometry& geometry, const Impurity& impurity, int n, int m, Point r) {
    require_inside(r, "threshold_field");
    if (n < 1 || n >= m) throw DomainError("threshold_field: need 1 <= n < m");
    const double eps = impurity.epsilon();
    FieldValue out;
    if (geometry.kind() == WallKind::hard_wall) {
        const cplx inc = incident_wave(n, Energy::above_threshold(m, 0.0), r);
        const double sm = sin_mode(m, eps);
        if (std::abs(sm) <= kDecoupledTolerance) {
            out.value = inc;
            out.decoupled = true;
            return out;
        }
        out.value = inc - (sin_mode(n, eps) / sm) * sin_mode(m, r.y);
        return out;
    }
    const TransverseMode chi_n = mode(geometry, n);
    const TransverseMode chi_m = mode(geometry, m);
    const double gap = chi_m.threshold() - chi_n.threshold();
    if (!(gap > 0.0)) throw DomainError("threshold_field: mode n must lie below mode m");
    const cplx inc = chi_n(r.y) * std::exp(kI * std::sqrt(gap) * r.x);
    const double cm = chi_m(eps);
    if (std::abs(cm) <= kDecoupledTolerance) {
        out.value = inc;
        out.decoupled = true;
        return out;
    }
    out.value = inc - (chi_n(eps) / cm) * chi_m(r.y);
    return out;
}

double surface_constant() { return 4.0 * std::exp(0.5 * euler_gamma() - cosine_integral(kPi)); }

cplx surface_impurity_delta(const Impurity& impurity, int m) {
    if (m < 1) throw DomainError("surface_impurity_delta: threshold index must be >= 1");
    double eps = impurity.epsilon();
    if (double(m) * eps < 0.05) {
    } else if (double(m) * (1.0 - eps) < 0.05) {
        eps = 1.0 - eps;
    } else {
        throw DomainError("surface_impurity_delta: impurity is not near a wall (need m*eps < 0.05)");
    }
    const double mpe = double(m) * kPi * eps;
    return {std::log(impurity.rho0() / (surface_constant() * eps)) / (2.0 * kPi * mpe * mpe), 0.0};
}

cplx surface_threshold_field(int n, int m, WallSide side, Point r) {
    require_inside(r, "surface_threshold_field");
    if (n < 1 || n >= m) throw DomainError("surface_threshold_field: need 1 <= n < m");
    // sin(n pi eps)/sin(m pi eps) -> n/m at the lower wall, (-1)^{n-m} n/m at the upper one.
    double coeff = -double(n) / double(m);
    if (side == WallSide::upper && (m - n) % 2 != 0) coeff = -coeff;
    const double kn = kPi * std::sqrt(double(m) * m - double(n) * n);
    return sin_mode(n, r.y) * std::exp(kI * kn * r.x) + coeff * sin_mode(m, r.y);
}

// ---------------------------------------------------------------------------

OneDBarrier OneDBarrier::weak_finite(double height, double width) {
    if (!std::isfinite(height)) throw DomainError("OneDBarrier: height not finite");
    if (!(width > 0.0) || !std::isfinite(width)) throw DomainError("OneDBarrier: width must be positive");
    OneDBarrier b;
    b.kind_ = Kind::weak_finite;
    b.height_ = height;
    b.width_ = width;
    return b;
}

OneDBarrier OneDBarrier::delta(double strength) {
    if (!std::isfinite(strength)) throw DomainError("OneDBarrier: strength not finite");
    OneDBarrier b;
    b.kind_ = Kind::delta;
    b.strength_ = strength;
    return b;
}

bool OneDBarrier::weak_regime() const {
    if (kind_ == Kind::delta) return true;
    return std::sqrt(std::abs(height_)) * width_ < 0.1;
}

double reflection_1d(const OneDBarrier& barrier, double omega) {
    if (!(omega >= 0.0)) throw DomainError("reflection_1d: energy must be non-negative");
    const double a = barrier.strength();
    if (a == 0.0) return 0.0;
    return a * a / (a * a + 4.0 * omega);
}

double reflection_rectangular_barrier(double height, double width, double omega) {
    if (!(omega >= 0.0)) throw DomainError("reflection_rectangular_barrier: energy must be non-negative");
    if (!(width >= 0.0)) throw DomainError("reflection_rectangular_barrier: width must be non-negative");
    if (height == 0.0 || width == 0.0) return 0.0;
    // R = V^2 sin^2(qL) / (4 k^2 q^2 + V^2 sin^2(qL)) with sin(qL) = qL sinc(qL),
    // written without dividing by q so omega = V is regular.
    const double u = (omega - height) * width * width;
    double sinc;
    if (std::abs(u) < 1e-8)
        sinc = 1.0 - u / 6.0;
    else if (u > 0.0)
        sinc = std::sin(std::sqrt(u)) / std::sqrt(u);
    else
        sinc = std::sinh(std::sqrt(-u)) / std::sqrt(-u);
    const double num = height * height * width * width * sinc * sinc;
    return num / (num + 4.0 * omega);
}

}  // namespace qwire
