#include "qwire/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "compensated_sum.hpp"
#include "qwire/errors.hpp"

namespace qwire {

double euler_gamma() { return std::numbers::egamma; }

double sin_pi(double t) {
    const double r = t - 2.0 * std::nearbyint(0.5 * t);  // [-1, 1]
    if (r == 0.0 || r == 1.0 || r == -1.0) return 0.0;
    if (r == 0.5) return 1.0;
    if (r == -0.5) return -1.0;
    return std::sin(kPi * r);
}

namespace {

// Power series, used for x <= 4 where the largest term is O(1).
double cosine_integral_series(double x) {
    const double x2 = x * x;
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
        const double contrib = term / (2.0 * k);
        sum += contrib;
        if (std::abs(contrib) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return std::numbers::egamma + std::log(x) + sum;
}

// Continued fraction for E1(ix) evaluated with the modified Lentz method;
// Ci(x) = -Re[e^{-ix} h].
double cosine_integral_fraction(double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    cplx b(1.0, x);
    cplx c(1.0 / tiny, 0.0);
    cplx d = 1.0 / b;
    cplx h = d;
    for (int i = 2; i < 10000; ++i) {
        const double a = -double(i - 1) * double(i - 1);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const cplx del = c * d;
        h *= del;
        if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps) break;
    }
    h *= cplx(std::cos(x), -std::sin(x));
    return -h.real();
}

}  // namespace

double cosine_integral(double x) {
    if (!(x > 0.0)) throw DomainError("cosine_integral: argument must be positive");
    if (x <= 4.0) return cosine_integral_series(x);
    return cosine_integral_fraction(x);
}

Energy Energy::above_threshold(int m, double offset) {
    if (m < 0) throw DomainError("Energy::above_threshold: negative threshold index");
    return Energy(m, offset);
}

bool Energy::at_threshold(int l) const {
    const double d = distance_to_threshold(l);
    if (l == ref_) return d == 0.0;
    return std::abs(d) <= 1e-13 * std::max(1.0, double(l) * l * kPi * kPi);
}

cplx branch_sqrt(double d) {
    if (d >= 0.0) return {std::sqrt(d), 0.0};
    return {0.0, std::sqrt(-d)};
}

LongitudinalWavenumber longitudinal_wavenumber(int l, Energy omega) {
    if (l < 1) throw DomainError("longitudinal_wavenumber: mode index must be >= 1, got " + std::to_string(l));
    return {l, omega.value(), branch_sqrt(omega.distance_to_threshold(l))};
}

LongitudinalWavenumber longitudinal_wavenumber(int l, double omega) {
    return longitudinal_wavenumber(l, Energy::at(omega));
}

double gaussian_cut_sum(double epsilon, Energy omega, int m, double rho) {
    if (!(rho > 0.0)) throw DomainError("gaussian_cut_sum: width rho must be positive");
    if (m < 0) throw DomainError("gaussian_cut_sum: negative threshold index");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("gaussian_cut_sum: epsilon outside [0, 1]");
    if (!(omega.distance_to_threshold(m + 1) < 0.0))
        throw DomainError("gaussian_cut_sum: mode m+1 must be evanescent (omega < ((m+1) pi)^2)");
    if (epsilon == 0.0 || epsilon == 1.0) return 0.0;

    const double a = 0.25 * kPi * kPi * rho * rho;
    detail::CompensatedSum sum;
    for (long n = m + 1;; ++n) {
        const double kappa = std::sqrt(-omega.distance_to_threshold(int(n)));
        const double gauss = std::exp(-a * double(n) * double(n));
        const double s = std::sin(kPi * epsilon * double(n));
        sum.add(2.0 * kPi * s * s / kappa * gauss);
        if (gauss < 1e-16) {
            const double next = double(n + 1);
            const double kappa_next = std::sqrt(-omega.distance_to_threshold(int(n + 1)));
            const double ratio = std::exp(-2.0 * a * next);
            const double bound = 2.0 * kPi / kappa_next * std::exp(-a * next * next) / (1.0 - ratio);
            if (bound <= 1e-12 * std::abs(sum.value()) || bound < std::numeric_limits<double>::min()) break;
        }
        if (n > std::numeric_limits<int>::max() / 2)
            throw ConvergenceError("gaussian_cut_sum: width too small for a finite truncation");
    }
    return sum.value();
}

}  // namespace qwire
