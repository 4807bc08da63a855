#pragma once

// Flux-normalized transmission/reflection matrices and Landauer conductance.
//
// T_nl = (k_l/k_n) |delta_nl - A_nl|^2, R_nl = (k_l/k_n) |A_nl|^2, both over
// propagating channels only. Conductance is the dimensionless channel sum
// (multiply by 2e^2/h for physical units).

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qwire/scatter_core.hpp"

namespace qwire {

struct TransportResult {
    Energy energy;
    /// Rows: incident mode n, columns: outgoing mode l (0-based).
    Eigen::MatrixXd T;
    Eigen::MatrixXd R;
    double conductance = 0.0;
    /// max_n |1 - sum_l (T_nl + R_nl)|, reported as computed.
    double unitarity_defect = 0.0;

    [[nodiscard]] int channels() const { return int(T.rows()); }
};

/// Needs at least one open channel and omega off every threshold.
TransportResult transport_at(const WireGeometry& geometry, const Impurity& impurity, Energy omega);
TransportResult transport_at(const WireGeometry& geometry, const Impurity& impurity, double omega);

/// omega -> (m pi)^2 from above: the m-th mode opens with zero flux and every
/// other amplitude vanishes, so T is the identity on m-1 channels.
TransportResult threshold_transport(const WireGeometry& geometry, const Impurity& impurity, int m);

struct SweepPoint {
    double omega = 0.0;
    std::optional<TransportResult> result;
    std::string error;

    [[nodiscard]] bool ok() const { return result.has_value(); }
};

/// Evaluates transport_at on every grid value. Failures are recorded per point;
/// output order matches the input. threads <= 0 picks the hardware count.
std::vector<SweepPoint> sweep(const WireGeometry& geometry, const Impurity& impurity, const std::vector<double>& omega_grid,
                              int threads = 0);

}  // namespace qwire
