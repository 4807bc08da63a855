#pragma once

// Sequence extrapolation used by every "limit" in the library: the
// rho -> 0 limit of the regularized on-site sum, the omega -> threshold
// limit of the amplitudes, and the finite-width ladder of the PDE oracle.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace qwire {

template <typename T>
struct Extrapolated {
    T value{};
    /// |best - second best| estimate; zero when only one sample was given.
    double error = 0.0;
    /// Diagonal of the extrapolation table, lowest order first.
    std::vector<T> orders;
};

namespace detail {
template <typename T>
double magnitude(const T& v) {
    return std::abs(v);
}
}  // namespace detail

/// Polynomial (Neville) extrapolation of samples f(t_i) to t = 0.
/// The abscissae need not be geometric but must be distinct.
template <typename T>
Extrapolated<T> extrapolate_to_zero(std::span<const double> t, std::span<const T> f) {
    if (t.size() != f.size() || t.empty())
        throw std::invalid_argument("extrapolate_to_zero: mismatched or empty samples");
    const std::size_t n = t.size();
    std::vector<T> p(f.begin(), f.end());
    Extrapolated<T> out;
    out.orders.push_back(p[n - 1]);
    for (std::size_t k = 1; k < n; ++k) {
        for (std::size_t i = 0; i + k < n; ++i) {
            const double ti = t[i];
            const double tk = t[i + k];
            if (ti == tk) throw std::invalid_argument("extrapolate_to_zero: repeated abscissa");
            p[i] = (ti * p[i + 1] - tk * p[i]) / (ti - tk);
        }
        // p[n-1-k] now holds the order-k extrapolant built on the last k+1 points
        out.orders.push_back(p[n - 1 - k]);
    }
    out.value = p[0];
    if (n > 1) out.error = detail::magnitude(out.orders[n - 1] - out.orders[n - 2]);
    return out;
}

/// Richardson table on a geometric ladder h_i = h_0 / ratio^i.
/// exponents[k] is the power of h eliminated at column k+1; repeat an
/// exponent to also remove an accompanying h^p ln h term.
template <typename T>
Extrapolated<T> richardson(std::span<const T> values, double ratio, std::span<const double> exponents) {
    if (values.empty()) throw std::invalid_argument("richardson: no samples");
    std::vector<T> col(values.begin(), values.end());
    Extrapolated<T> out;
    out.orders.push_back(col.back());
    const std::size_t columns = std::min(exponents.size(), values.size() - 1);
    for (std::size_t k = 0; k < columns; ++k) {
        const double factor = std::pow(ratio, exponents[k]) - 1.0;
        for (std::size_t i = 0; i + 1 < col.size(); ++i) col[i] = col[i + 1] + (col[i + 1] - col[i]) / factor;
        col.pop_back();
        out.orders.push_back(col.back());
    }
    out.value = out.orders.back();
    if (out.orders.size() > 1)
        out.error = detail::magnitude(out.orders[out.orders.size() - 1] - out.orders[out.orders.size() - 2]);
    return out;
}

}  // namespace qwire
