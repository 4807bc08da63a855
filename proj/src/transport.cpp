#include "qwire/transport.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qwire/errors.hpp"

namespace qwire {

TransportResult transport_at(const WireGeometry& geometry, const Impurity& impurity, Energy omega) {
    if (!(omega.distance_to_threshold(1) > 0.0) && !omega.at_threshold(1))
        throw DomainError("transport_at: no propagating mode below pi^2");
    const int m = threshold_window(omega.value());
    for (int l = 1; l <= m + 1; ++l)
        if (omega.at_threshold(l))
            throw ThresholdError("transport_at: omega sits on threshold " + std::to_string(l) +
                                 "; use threshold_transport");

    const RhoBar rb = rho_bar(impurity.epsilon(), omega, m);
    int channels = 0;
    while (omega.distance_to_threshold(channels + 1) > 0.0) ++channels;

    TransportResult out;
    out.energy = omega;
    out.T = Eigen::MatrixXd::Zero(channels, channels);
    out.R = Eigen::MatrixXd::Zero(channels, channels);
    for (int n = 1; n <= channels; ++n) {
        const ScatteringSolution s = solve_scattering(geometry, impurity, n, omega, m, rb);
        const double kn = s.wavenumber(n).real();
        double flux = 0.0;
        for (int l = 1; l <= channels; ++l) {
            const double kl = s.wavenumber(l).real();
            out.T(n - 1, l - 1) = kl / kn * std::norm(s.transmitted(l));
            out.R(n - 1, l - 1) = kl / kn * std::norm(s.reflected(l));
            flux += out.T(n - 1, l - 1) + out.R(n - 1, l - 1);
        }
        out.unitarity_defect = std::max(out.unitarity_defect, std::abs(1.0 - flux));
    }
    out.conductance = out.T.sum();
    return out;
}

TransportResult transport_at(const WireGeometry& geometry, const Impurity& impurity, double omega) {
    return transport_at(geometry, impurity, Energy::at(omega));
}

TransportResult threshold_transport(const WireGeometry& geometry, const Impurity& impurity, int m) {
    (void)impurity;
    if (geometry.kind() != WallKind::hard_wall) throw DomainError("threshold_transport: only defined for the hard-wall wire");
    if (m < 2) throw DomainError("threshold_transport: need m >= 2 for an open channel");
    TransportResult out;
    out.energy = Energy::above_threshold(m, 0.0);
    out.T = Eigen::MatrixXd::Identity(m - 1, m - 1);
    out.R = Eigen::MatrixXd::Zero(m - 1, m - 1);
    out.conductance = double(m - 1);
    return out;
}

std::vector<SweepPoint> sweep(const WireGeometry& geometry, const Impurity& impurity, const std::vector<double>& omega_grid,
                              int threads) {
    std::vector<SweepPoint> out(omega_grid.size());
    if (omega_grid.empty()) return out;
    unsigned workers = threads > 0 ? unsigned(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, unsigned(omega_grid.size()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < omega_grid.size(); i = next++) {
            out[i].omega = omega_grid[i];
            try {
                out[i].result = transport_at(geometry, impurity, omega_grid[i]);
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    if (workers == 1) {
        work();
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return out;
}

}  // namespace qwire
