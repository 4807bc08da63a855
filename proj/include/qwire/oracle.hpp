#pragma once

/**
 * Finite-difference reference solver for the wire with a finite-width impurity
 *
 *   -lap psi + D psi = omega psi,
 *   D psi = 2 sqrt(pi) / (rho ln(rho/rho0)) delta(x) exp(-(y-eps)^2/rho^2) psi(0, eps),
 *
 * on a square lattice (spacing h) over x in [-X, X], y in [0, 1], Dirichlet at
 * the walls. The leads are closed with the exact discrete Dirichlet-to-Neumann
 * map of the clean lattice wire, so amplitudes need no absorbing layer and X can
 * be short. The impurity acts through the single value psi(0, eps); it enters
 * the sparse system as one extra unknown q with rho ln(rho/rho0) q = 2 sqrt(pi) psi(0, eps),
 * which keeps rho = rho0 (infinite prefactor) regular.
 */

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qwire/extrapolation.hpp"
#include "qwire/specfun.hpp"

namespace qwire {

struct DiscreteWireConfig {
    /// 1/h; the transverse grid has cells_per_width - 1 interior points.
    int cells_per_width = 400;
    /// X; rounded to a whole number of cells.
    double half_length = 0.05;
    /// Lead modes kept in the boundary map; 0 keeps all of them (exact).
    int lead_modes = 0;
    double rho = 0.01;
    double epsilon = 0.3;
    double rho0 = 0.01;
    /// false gives the clean wire.
    bool impurity = true;
};

class DiscreteWire {
public:
    /// Throws ConfigError when rho/h < 4 or a parameter is out of range.
    explicit DiscreteWire(DiscreteWireConfig config);

    [[nodiscard]] const DiscreteWireConfig& config() const { return config_; }
    [[nodiscard]] double h() const { return h_; }
    /// Interior transverse points.
    [[nodiscard]] int ny() const { return ny_; }
    [[nodiscard]] int half_columns() const { return half_; }
    [[nodiscard]] int columns() const { return 2 * half_ + 1; }
    [[nodiscard]] int lead_modes() const { return lead_modes_; }
    /// Lattice transverse eigenvalue (2 - 2 cos(n pi h)) / h^2, the n-th lattice cut-off.
    [[nodiscard]] double transverse_eigenvalue(int n) const;
    /// 2 sqrt(pi) / (rho ln(rho/rho0)); infinite at rho = rho0, zero for the clean wire.
    [[nodiscard]] double strength() const;

private:
    DiscreteWireConfig config_;
    double h_ = 0.0;
    int ny_ = 0;
    int half_ = 0;
    int lead_modes_ = 0;
};

struct OracleAmplitude {
    int l = 0;
    /// Coefficients of sin(l pi y) e^{i k_l |x|} referred to x = 0.
    cplx transmitted;
    cplx reflected;
};

struct OracleSolution {
    double rho = 0.0;
    int incident_mode = 0;
    double omega = 0.0;
    /// One entry per propagating lattice mode, l = 1, 2, ...
    std::vector<OracleAmplitude> amplitudes;
    /// ||A x - b|| / ||b||.
    double residual = 0.0;
    /// |1 - sum_l (v_l/v_n)(|t_l|^2 + |r_l|^2)| with lattice velocities sin(theta_l)/h.
    double flux_defect = 0.0;

    /// Equivalent of A_nl: delta_nl - transmitted.
    [[nodiscard]] cplx scattering(int l) const;
};

/// Sparse LU solve for incident mode n. Throws SolverError on a singular
/// system or a residual above 1e-10, ConfigError on invalid inputs.
OracleSolution solve(const DiscreteWire& wire, int n, double omega);

struct ExtrapolatedAmplitude {
    int l = 0;
    Extrapolated<cplx> transmitted;
    Extrapolated<cplx> reflected;
};

struct RhoExtrapolation {
    std::vector<ExtrapolatedAmplitude> amplitudes;
    /// false when successive ladder differences fail to shrink for some amplitude.
    bool monotone = true;
    std::string warning;
    std::vector<OracleSolution> raw;

    [[nodiscard]] Extrapolated<cplx> scattering(int l, int incident_mode) const;
};

/// Polynomial extrapolation of every amplitude to rho = 0 in the variable rho^2.
/// Needs >= 3 solutions with geometrically decreasing rho and matching (n, omega).
RhoExtrapolation rho_extrapolate(std::span<const OracleSolution> ladder);

struct UniversalityEntry {
    double rho0 = 0.0;
    /// Energy above the lattice cut-off, offset_factor * |Delta_m|.
    double offset = 0.0;
    Extrapolated<cplx> coefficient;
};

struct UniversalityReport {
    int n = 0;
    int m = 0;
    double epsilon = 0.0;
    cplx closed_form;
    std::vector<UniversalityEntry> entries;
    /// max pairwise |c_i - c_j| / |closed_form|.
    double spread = 0.0;
    /// |mean c - closed_form| / |closed_form|.
    double mean_deviation = 0.0;
};

/// Runs solve + rho_extrapolate for each rho0 just above the m-th lattice
/// cut-off and compares the m-mode coefficient with sin(n pi eps)/sin(m pi eps).
UniversalityReport universality_probe(const DiscreteWireConfig& base, int n, int m, const std::vector<double>& rho0s,
                                      const std::vector<double>& rho_ladder = {0.04, 0.02, 0.01},
                                      double offset_factor = 1e-4);

/// Records {rho, n, l, re, im, error} of the scattering amplitudes.
/// rho is null for extrapolated entries.
std::vector<nlohmann::json> amplitude_records(const OracleSolution& solution);
std::vector<nlohmann::json> amplitude_records(const RhoExtrapolation& extrapolation);

}  // namespace qwire
