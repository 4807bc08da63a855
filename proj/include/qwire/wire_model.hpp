#pragma once

/**
 * Clean-wire model: geometry, transverse modes and the mode-sum Green's
 * function
 *
 *   G(r, r') = i sum_n chi_n(y) chi_n(y') / k_n exp(i k_n |x - x'|),
 *
 * with k_n = sqrt(omega - omega_n) on the decaying branch below cut-off.
 * Lengths are in units of the wire width (y in [0, 1]).
 *
 * Mode normalization follows the hard-wall convention chi_n = sin(n pi y):
 * int_0^1 chi_n chi_l dy = delta_nl / 2 for every geometry kind, so that the
 * formulas written with sines carry over unchanged to general cross-sections.
 */

#include <filesystem>
#include <memory>
#include <vector>

#include "qwire/specfun.hpp"

namespace qwire {

enum class WallKind { hard_wall, general };

/// V_perp(y) on [0, 1], piecewise linear between samples.
class TransversePotential {
public:
    TransversePotential() = default;
    TransversePotential(std::vector<double> y, std::vector<double> v);

    static TransversePotential constant(double value);
    /// Two-column whitespace-separated text (y V); '#' starts a comment.
    static TransversePotential from_file(const std::filesystem::path& path);

    [[nodiscard]] double operator()(double y) const;

private:
    std::vector<double> y_;
    std::vector<double> v_;
};

class TransverseMode {
public:
    /// Analytic hard-wall mode sin(n pi y), threshold (n pi)^2.
    static TransverseMode hard_wall(int n);
    /// Mode sampled on a uniform interior grid y_j = j h, j = 1..N (h = 1/(N+1)); cubic in between.
    static TransverseMode sampled(int n, double threshold, std::shared_ptr<const std::vector<double>> samples);

    [[nodiscard]] int index() const { return index_; }
    [[nodiscard]] double threshold() const { return threshold_; }
    [[nodiscard]] double operator()(double y) const;
    [[nodiscard]] bool analytic() const { return samples_ == nullptr; }

private:
    int index_ = 0;
    double threshold_ = 0.0;
    std::shared_ptr<const std::vector<double>> samples_;
};

struct EigensolveOptions {
    /// Interior points of the coarse grid; a second grid with 2N+1 points is
    /// used for the refinement check and Richardson correction.
    int grid_points = 512;
};

class WireGeometry {
public:
    static WireGeometry hard_wall(int num_modes = 1 << 20);
    static WireGeometry general(TransversePotential potential, int num_modes, EigensolveOptions options = {});

    [[nodiscard]] WallKind kind() const { return kind_; }
    [[nodiscard]] int num_modes() const { return num_modes_; }
    [[nodiscard]] const TransversePotential& potential() const { return potential_; }
    [[nodiscard]] const EigensolveOptions& eigensolve_options() const { return options_; }

    /// Largest relative eigenvalue change between the two refinement grids
    /// (zero for the hard wall).
    [[nodiscard]] double refinement_defect() const { return refinement_defect_; }

    friend TransverseMode mode(const WireGeometry& geometry, int n);

private:
    WallKind kind_ = WallKind::hard_wall;
    int num_modes_ = 0;
    TransversePotential potential_;
    EigensolveOptions options_;
    double refinement_defect_ = 0.0;
    std::shared_ptr<const std::vector<TransverseMode>> modes_;
};

TransverseMode mode(const WireGeometry& geometry, int n);

/**
 * Lowest `count` Dirichlet eigenpairs of -d^2/dy^2 + V_perp(y) on [0, 1].
 *
 * Second-order finite differences on grids of N and 2N+1 interior points
 * (h and h/2); eigenvalues are Richardson-corrected across the pair, profiles
 * come from the fine grid. Eigenvalues by Sturm bisection, vectors by inverse
 * iteration. Throws ResolutionError when count > N/10.
 */
std::vector<TransverseMode> transverse_eigensolve(const WireGeometry& geometry, int count);

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Outgoing Green's function of the clean wire. Refuses x == x' (the sum is
/// at best conditionally convergent on that line, log-singular at r = r').
cplx greens_function(const WireGeometry& geometry, Point r, Point r_prime, Energy omega);

}  // namespace qwire
