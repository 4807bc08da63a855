#pragma once

// Reference computations used only by the tests. None of them calls into the
// library code they are compared against.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr double gamma_e = std::numbers::egamma;

/// Ci(x) = gamma + ln x + int_0^x (cos t - 1)/t dt by adaptive Gauss-Kronrod.
inline double ci_quadrature(double x) {
    auto f = [](double t) {
        if (t < 1e-4) {
            const double t2 = t * t;
            return -t / 2.0 + t * t2 / 24.0 - t * t2 * t2 / 720.0;
        }
        return (std::cos(t) - 1.0) / t;
    };
    // panels no longer than 1 keep the oscillation resolved without deep recursion
    const int panels = std::max(1, int(std::ceil(x)));
    double integral = 0.0;
    for (int j = 0; j < panels; ++j) {
        const double a = x * j / panels, b = x * (j + 1) / panels;
        integral += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 8, 1e-15);
    }
    return gamma_e + std::log(x) + integral;
}

/// 2 pi sum_{n=m+1}^{N} sin^2(n pi eps) exp(-(n pi rho/2)^2) / sqrt((n pi)^2 - omega), plain long double loop
/// (stops once the gaussian drops below 1e-30).
inline double cut_sum_brute(double eps, double omega, int m, double rho, long terms) {
    long double s = 0.0L;
    for (long n = m + 1; n <= m + terms; ++n) {
        const long double kn = (long double)n * (long double)pi;
        const long double cut = std::exp(-(kn * rho / 2.0L) * (kn * rho / 2.0L));
        if (cut < 1e-30L) break;
        const long double sn = std::sin((long double)pi * eps * (long double)n);
        s += sn * sn * cut / std::sqrt(kn * kn - omega);
    }
    return double(2.0L * (long double)pi * s);
}

/// i sum_{n<=N} sin(n pi y) sin(n pi y') exp(i k_n |dx|) / k_n for the hard wall.
inline cplx green_brute(double x, double y, double xp, double yp, double omega, long terms) {
    std::complex<long double> s = 0.0L;
    const long double dx = std::abs(x - xp);
    for (long n = 1; n <= terms; ++n) {
        const long double d = omega - (long double)n * n * pi * pi;
        const std::complex<long double> k = d >= 0 ? std::complex<long double>(std::sqrt(d), 0) : std::complex<long double>(0, std::sqrt(-d));
        const long double chi = std::sin((long double)pi * n * y) * std::sin((long double)pi * n * yp);
        s += std::complex<long double>(0, 1) * chi * std::exp(std::complex<long double>(0, 1) * k * dx) / k;
    }
    return cplx(double(s.real()), double(s.imag()));
}

/**
 * Reflection of -psi'' + V(x) psi = omega psi for a piecewise-constant V by
 * propagating (psi, psi') across the layers and matching plane waves outside.
 */
inline double reflection_layers(const std::vector<double>& heights, const std::vector<double>& widths, double omega) {
    const cplx k(std::sqrt(omega), 0.0);
    // transmitted wave e^{ikx} at the right edge, integrate back to the left edge
    cplx psi = 1.0;
    cplx dpsi = cplx(0, 1) * k;
    for (std::size_t j = heights.size(); j-- > 0;) {
        const cplx q = std::sqrt(cplx(omega - heights[j], 0.0));
        const double L = widths[j];
        cplx c, s_over_q, q_s;
        if (std::abs(q) < 1e-12) {
            c = 1.0;
            s_over_q = L;
            q_s = 0.0;
        } else {
            c = std::cos(q * L);
            s_over_q = std::sin(q * L) / q;
            q_s = q * std::sin(q * L);
        }
        // backward step over a layer of width L
        const cplx p = c * psi - s_over_q * dpsi;
        const cplx dp = q_s * psi + c * dpsi;
        psi = p;
        dpsi = dp;
    }
    // psi = a e^{ikx} + b e^{-ikx} at the left edge (x = 0)
    const cplx a = 0.5 * (psi + dpsi / (cplx(0, 1) * k));
    const cplx b = 0.5 * (psi - dpsi / (cplx(0, 1) * k));
    return std::norm(b / a);
}

/**
 * ln rho_bar from a least-squares fit of F(rho) = ln rho + S(rho) on a ladder
 * to a + rho^2 (b + c ln rho) + rho^4 (d + e ln rho), with S summed by brute force.
 */
inline double log_rho_bar_fit(double eps, double omega, int m, double start, int levels, long terms) {
    Eigen::MatrixXd A(levels, 5);
    Eigen::VectorXd F(levels);
    for (int k = 0; k < levels; ++k) {
        const double r = start * std::pow(0.5, k);
        const double u = r / start;
        const double lr = std::log(u);
        A.row(k) << 1.0, u * u, u * u * lr, u * u * u * u, u * u * u * u * lr;
        F(k) = std::log(r) + cut_sum_brute(eps, omega, m, r, terms);
    }
    const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(F);
    return coef(0);
}

}  // namespace oracle
