#include "qwire/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "qwire/errors.hpp"
#include "qwire/scatter_core.hpp"

namespace qwire {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;
using CVec = Eigen::VectorXcd;

// Root of z + 1/z = 2c on the outgoing (|z| = 1, Im z > 0) or decaying (|z| < 1) branch.
cplx lead_factor(double c) {
    if (std::abs(c) <= 1.0) return {c, std::sqrt(1.0 - c * c)};
    if (c > 1.0) return {c - std::sqrt(c * c - 1.0), 0.0};
    return {c + std::sqrt(c * c - 1.0), 0.0};
}

}  // namespace

DiscreteWire::DiscreteWire(DiscreteWireConfig config) : config_(config) {
    if (config.cells_per_width < 8) throw ConfigError("DiscreteWire: cells_per_width must be >= 8");
    if (!(config.half_length >= 0.0) || !std::isfinite(config.half_length))
        throw ConfigError("DiscreteWire: half_length must be non-negative");
    h_ = 1.0 / double(config.cells_per_width);
    ny_ = config.cells_per_width - 1;
    half_ = int(std::lround(config.half_length / h_));
    if (config.lead_modes < 0 || config.lead_modes > ny_)
        throw ConfigError("DiscreteWire: lead_modes must be in [0, " + std::to_string(ny_) + "]");
    lead_modes_ = config.lead_modes == 0 ? ny_ : config.lead_modes;
    if (config.impurity) {
        if (!(config.epsilon > 0.0 && config.epsilon < 1.0)) throw ConfigError("DiscreteWire: epsilon must lie in (0, 1)");
        if (!(config.rho > 0.0)) throw ConfigError("DiscreteWire: rho must be positive");
        if (!(config.rho0 > 0.0)) throw ConfigError("DiscreteWire: rho0 must be positive");
        if (config.rho / h_ < 4.0)
            throw ConfigError("DiscreteWire: rho/h = " + std::to_string(config.rho / h_) +
                              " < 4 does not resolve the impurity");
    }
}

double DiscreteWire::transverse_eigenvalue(int n) const {
    return (2.0 - 2.0 * std::cos(kPi * double(n) * h_)) / (h_ * h_);
}

double DiscreteWire::strength() const {
    if (!config_.impurity) return 0.0;
    const double l = std::log(config_.rho / config_.rho0);
    if (l == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::sqrt(kPi) / (config_.rho * l);
}

cplx OracleSolution::scattering(int l) const {
    for (const auto& a : amplitudes)
        if (a.l == l) return (l == incident_mode ? 1.0 : 0.0) - a.transmitted;
    throw DomainError("OracleSolution::scattering: mode " + std::to_string(l) + " not propagating");
}

OracleSolution solve(const DiscreteWire& wire, int n, double omega) {
    const auto& cfg = wire.config();
    const double h = wire.h();
    const int ny = wire.ny();
    const int half = wire.half_columns();
    const int nx = wire.columns();
    const int r = wire.lead_modes();
    if (n < 1 || n > r) throw ConfigError("oracle solve: incident mode outside the retained lead modes");
    if (!std::isfinite(omega)) throw ConfigError("oracle solve: energy not finite");

    // Lead data
    std::vector<cplx> z(std::size_t(ny) + 1);
    int propagating = 0;
    for (int l = 1; l <= ny; ++l) {
        const double c = 1.0 - 0.5 * h * h * (omega - wire.transverse_eigenvalue(l));
        z[std::size_t(l)] = lead_factor(c);
        if (std::abs(c) < 1.0) propagating = l;
        else if (std::abs(c) == 1.0 && l <= r)
            throw SolverError("oracle solve: energy sits on lattice cut-off " + std::to_string(l));
    }
    if (std::abs(1.0 - 0.5 * h * h * (omega - wire.transverse_eigenvalue(n))) >= 1.0)
        throw ConfigError("oracle solve: incident mode does not propagate on the lattice");
    if (r < ny) {
        // Dropped modes are pinned to zero at the ghost columns; they must have
        // decayed there, which the first evanescent mode bounds.
        const double kappa = std::sqrt(std::max(0.0, wire.transverse_eigenvalue(propagating + 1) - omega));
        if (propagating >= r || !(double(half) * h * kappa >= 10.0))
            throw ConfigError("oracle solve: truncated leads need every open mode kept and X >= 10/kappa_{m+1}");
    }

    // Phi(j, l) = sqrt(2h) sin(l pi y_j), orthonormal over the interior points.
    Eigen::MatrixXd phi(ny, r);
    for (int j = 0; j < ny; ++j)
        for (int l = 0; l < r; ++l) phi(j, l) = std::sqrt(2.0 * h) * std::sin(kPi * double(l + 1) * double(j + 1) * h);
    Eigen::VectorXcd zr(r);
    for (int l = 0; l < r; ++l) zr(l) = z[std::size_t(l + 1)];
    const Eigen::MatrixXcd lead = phi.cast<cplx>() * zr.asDiagonal() * phi.transpose().cast<cplx>();

    const double eps = cfg.epsilon;
    auto incident = [&](int i) {
        CVec v(ny);
        const cplx f = std::pow(z[std::size_t(n)], double(i - half));
        for (int j = 0; j < ny; ++j) v(j) = std::sin(kPi * double(n) * double(j + 1) * h) * f;
        return v;
    };

    const Eigen::Index unknowns = Eigen::Index(nx) * ny + 1;
    const Eigen::Index q_index = unknowns - 1;
    auto index = [ny](int i, int j) { return Eigen::Index(i) * ny + j; };

    std::vector<Eigen::Triplet<cplx>> trip;
    trip.reserve(std::size_t(nx) * ny * 5 + 2 * std::size_t(ny) * ny + std::size_t(ny) + 4);
    CVec rhs = CVec::Zero(unknowns);
    const double diag = omega * h * h - 4.0;
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            const Eigen::Index row = index(i, j);
            trip.emplace_back(row, row, diag);
            if (j > 0) trip.emplace_back(row, index(i, j - 1), 1.0);
            if (j + 1 < ny) trip.emplace_back(row, index(i, j + 1), 1.0);
            if (i > 0) trip.emplace_back(row, index(i - 1, j), 1.0);
            if (i + 1 < nx) trip.emplace_back(row, index(i + 1, j), 1.0);
        }
    }
    // Ghost columns: psi_{-1} = S psi_0 + (inc_{-1} - S inc_0), psi_{nx} = S psi_{nx-1} + (inc_{nx} - S inc_{nx-1}).
    for (int side = 0; side < 2; ++side) {
        const int i = side == 0 ? 0 : nx - 1;
        const int ghost = side == 0 ? -1 : nx;
        for (int j = 0; j < ny; ++j)
            for (int jp = 0; jp < ny; ++jp)
                if (lead(j, jp) != 0.0) trip.emplace_back(index(i, j), index(i, jp), lead(j, jp));
        const CVec source = incident(ghost) - lead * incident(i);
        for (int j = 0; j < ny; ++j) rhs(index(i, j)) -= source(j);
    }

    // Impurity column and the bordered row.
    if (cfg.impurity) {
        for (int j = 0; j < ny; ++j) {
            const double y = double(j + 1) * h;
            const double g = std::exp(-(y - eps) * (y - eps) / (cfg.rho * cfg.rho));
            if (g > 0.0) trip.emplace_back(index(half, j), q_index, -h * g);
        }
        trip.emplace_back(q_index, q_index, cfg.rho * std::log(cfg.rho / cfg.rho0));
        const double jf = eps / h;
        const int jlo = int(std::floor(jf));
        const double w = jf - double(jlo);
        // interior index j (1-based) maps to column j-1; walls carry psi = 0
        if (jlo >= 1 && jlo <= ny) trip.emplace_back(q_index, index(half, jlo - 1), -2.0 * std::sqrt(kPi) * (1.0 - w));
        if (w > 0.0 && jlo + 1 >= 1 && jlo + 1 <= ny)
            trip.emplace_back(q_index, index(half, jlo), -2.0 * std::sqrt(kPi) * w);
    } else {
        trip.emplace_back(q_index, q_index, 1.0);
    }

    SpMat a(unknowns, unknowns);
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw SolverError("oracle solve: sparse factorization failed (singular system?)");
    const CVec x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw SolverError("oracle solve: sparse back-substitution failed");

    OracleSolution out;
    out.rho = cfg.rho;
    out.incident_mode = n;
    out.omega = omega;
    out.residual = (a * x - rhs).norm() / rhs.norm();
    if (!(out.residual < 1e-10))
        throw SolverError("oracle solve: residual " + std::to_string(out.residual) + " above 1e-10");

    const CVec right = x.segment(index(nx - 1, 0), ny);
    const CVec left = x.segment(index(0, 0), ny) - incident(0);
    const double vn = std::sin(std::arg(z[std::size_t(n)])) / h;
    double flux = 0.0;
    for (int l = 1; l <= std::min(propagating, r); ++l) {
        cplx cr(0.0, 0.0);
        cplx cl(0.0, 0.0);
        for (int j = 0; j < ny; ++j) {
            const double s = std::sin(kPi * double(l) * double(j + 1) * h);
            cr += s * right(j);
            cl += s * left(j);
        }
        const cplx back = std::pow(z[std::size_t(l)], -double(half));
        OracleAmplitude amp;
        amp.l = l;
        amp.transmitted = 2.0 * h * cr * back;
        amp.reflected = 2.0 * h * cl * back;
        const double vl = std::sin(std::arg(z[std::size_t(l)])) / h;
        flux += vl / vn * (std::norm(amp.transmitted) + std::norm(amp.reflected));
        out.amplitudes.push_back(amp);
    }
    out.flux_defect = std::abs(1.0 - flux);
    return out;
}

Extrapolated<cplx> RhoExtrapolation::scattering(int l, int incident_mode) const {
    for (const auto& a : amplitudes) {
        if (a.l != l) continue;
        Extrapolated<cplx> out = a.transmitted;
        const cplx shift = l == incident_mode ? 1.0 : 0.0;
        out.value = shift - out.value;
        for (auto& o : out.orders) o = shift - o;
        return out;
    }
    throw DomainError("RhoExtrapolation::scattering: mode " + std::to_string(l) + " not available");
}

RhoExtrapolation rho_extrapolate(std::span<const OracleSolution> ladder) {
    if (ladder.size() < 3) throw DomainError("rho_extrapolate: need at least 3 ladder points");
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        if (!(ladder[i].rho < ladder[i - 1].rho)) throw DomainError("rho_extrapolate: rho must decrease along the ladder");
        if (ladder[i].incident_mode != ladder[0].incident_mode || ladder[i].omega != ladder[0].omega)
            throw DomainError("rho_extrapolate: ladder mixes incident modes or energies");
    }
    RhoExtrapolation out;
    out.raw.assign(ladder.begin(), ladder.end());
    std::vector<double> t;
    for (const auto& s : ladder) t.push_back(s.rho * s.rho);
    std::size_t modes = ladder[0].amplitudes.size();
    for (const auto& s : ladder) modes = std::min(modes, s.amplitudes.size());

    auto monotone = [](const std::vector<cplx>& v) {
        for (std::size_t i = 2; i < v.size(); ++i)
            if (std::abs(v[i] - v[i - 1]) > std::abs(v[i - 1] - v[i - 2]) && std::abs(v[i] - v[i - 1]) > 1e-12)
                return false;
        return true;
    };
    for (std::size_t k = 0; k < modes; ++k) {
        std::vector<cplx> tr;
        std::vector<cplx> re;
        for (const auto& s : ladder) {
            tr.push_back(s.amplitudes[k].transmitted);
            re.push_back(s.amplitudes[k].reflected);
        }
        ExtrapolatedAmplitude e;
        e.l = ladder[0].amplitudes[k].l;
        e.transmitted = extrapolate_to_zero<cplx>(t, tr);
        e.reflected = extrapolate_to_zero<cplx>(t, re);
        if (!monotone(tr) || !monotone(re)) {
            out.monotone = false;
            out.warning += "mode " + std::to_string(e.l) + ": ladder differences do not shrink; ";
        }
        out.amplitudes.push_back(std::move(e));
    }
    return out;
}

UniversalityReport universality_probe(const DiscreteWireConfig& base, int n, int m, const std::vector<double>& rho0s,
                                      const std::vector<double>& rho_ladder, double offset_factor) {
    if (n < 1 || n >= m) throw ConfigError("universality_probe: need 1 <= n < m");
    if (rho0s.empty()) throw ConfigError("universality_probe: empty rho0 list");
    if (!(offset_factor > 0.0)) throw ConfigError("universality_probe: offset factor must be positive");
    const double eps = base.epsilon;
    const double sm = std::sin(kPi * double(m) * eps);
    if (std::abs(sm) <= 1e-8) throw DecoupledModeError("universality_probe: mode m has a node at the impurity");

    UniversalityReport rep;
    rep.n = n;
    rep.m = m;
    rep.epsilon = eps;
    rep.closed_form = std::sin(kPi * double(n) * eps) / sm;
    const auto hard = WireGeometry::hard_wall();
    for (const double rho0 : rho0s) {
        const cplx d = delta_m(hard, Impurity(eps, rho0), m, Energy::above_threshold(m, 0.0));
        UniversalityEntry e;
        e.rho0 = rho0;
        e.offset = offset_factor / std::norm(d);
        std::vector<OracleSolution> sols;
        for (const double rho : rho_ladder) {
            DiscreteWireConfig c = base;
            c.rho = rho;
            c.rho0 = rho0;
            c.impurity = true;
            const DiscreteWire wire(c);
            sols.push_back(solve(wire, n, wire.transverse_eigenvalue(m) + e.offset));
        }
        e.coefficient = rho_extrapolate(sols).scattering(m, n);
        rep.entries.push_back(e);
    }
    cplx mean(0.0, 0.0);
    for (const auto& e : rep.entries) mean += e.coefficient.value;
    mean /= double(rep.entries.size());
    const double scale = std::abs(rep.closed_form);
    for (std::size_t i = 0; i < rep.entries.size(); ++i)
        for (std::size_t j = i + 1; j < rep.entries.size(); ++j)
            rep.spread = std::max(rep.spread, std::abs(rep.entries[i].coefficient.value - rep.entries[j].coefficient.value) / scale);
    rep.mean_deviation = std::abs(mean - rep.closed_form) / scale;
    return rep;
}

std::vector<nlohmann::json> amplitude_records(const OracleSolution& solution) {
    std::vector<nlohmann::json> out;
    for (const auto& a : solution.amplitudes) {
        const cplx s = solution.scattering(a.l);
        out.push_back({{"rho", solution.rho}, {"n", solution.incident_mode}, {"l", a.l}, {"re", s.real()},
                       {"im", s.imag()}, {"error", 0.0}});
    }
    return out;
}

std::vector<nlohmann::json> amplitude_records(const RhoExtrapolation& extrapolation) {
    std::vector<nlohmann::json> out;
    if (extrapolation.raw.empty()) return out;
    const int n = extrapolation.raw.front().incident_mode;
    for (const auto& a : extrapolation.amplitudes) {
        const auto s = extrapolation.scattering(a.l, n);
        out.push_back({{"rho", nullptr}, {"n", n}, {"l", a.l}, {"re", s.value.real()}, {"im", s.value.imag()},
                       {"error", s.error}});
    }
    return out;
}

}  // namespace qwire
