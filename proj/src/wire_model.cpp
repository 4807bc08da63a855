#include "qwire/wire_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "qwire/errors.hpp"

namespace qwire {

// ---------------------------------------------------------------------------
// TransversePotential

TransversePotential::TransversePotential(std::vector<double> y, std::vector<double> v)
    : y_(std::move(y)), v_(std::move(v)) {
    if (y_.size() != v_.size() || y_.empty()) throw ConfigError("transverse potential: need matching, non-empty y and V columns");
    for (std::size_t i = 1; i < y_.size(); ++i)
        if (!(y_[i] > y_[i - 1])) throw ConfigError("transverse potential: y samples must be strictly increasing");
}

TransversePotential TransversePotential::constant(double value) { return TransversePotential({0.0, 1.0}, {value, value}); }

TransversePotential TransversePotential::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("transverse potential: cannot open " + path.string());
    std::vector<double> y;
    std::vector<double> v;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        double a = 0.0;
        double b = 0.0;
        if (!(fields >> a)) continue;
        if (!(fields >> b))
            throw ConfigError("transverse potential: line " + std::to_string(lineno) + " of " + path.string() + " has one column");
        y.push_back(a);
        v.push_back(b);
    }
    return TransversePotential(std::move(y), std::move(v));
}

double TransversePotential::operator()(double y) const {
    if (y_.empty()) return 0.0;
    if (y <= y_.front()) return v_.front();
    if (y >= y_.back()) return v_.back();
    const auto it = std::upper_bound(y_.begin(), y_.end(), y);
    const std::size_t i = std::size_t(it - y_.begin());
    const double t = (y - y_[i - 1]) / (y_[i] - y_[i - 1]);
    return (1.0 - t) * v_[i - 1] + t * v_[i];
}

// ---------------------------------------------------------------------------
// TransverseMode

TransverseMode TransverseMode::hard_wall(int n) {
    TransverseMode m;
    m.index_ = n;
    m.threshold_ = double(n) * n * kPi * kPi;
    return m;
}

TransverseMode TransverseMode::sampled(int n, double threshold, std::shared_ptr<const std::vector<double>> samples) {
    TransverseMode m;
    m.index_ = n;
    m.threshold_ = threshold;
    m.samples_ = std::move(samples);
    return m;
}

double TransverseMode::operator()(double y) const {
    if (!samples_) return std::sin(double(index_) * kPi * y);
    const auto& s = *samples_;
    const int n = int(s.size());
    if (y <= 0.0 || y >= 1.0) return 0.0;
    // node k sits at y = k/(n+1); walls are nodes 0 and n+1, continued oddly past them
    auto node = [&](int k) {
        double sign = 1.0;
        if (k < 0) k = -k, sign = -1.0;
        if (k > n + 1) k = 2 * (n + 1) - k, sign = -sign;
        return (k == 0 || k == n + 1) ? 0.0 : sign * s[std::size_t(k - 1)];
    };
    const double t = y * (n + 1);
    const int j = std::min(int(t), n);
    const double u = t - j;
    // cubic through nodes j-1 .. j+2
    const double w0 = -u * (u - 1.0) * (u - 2.0) / 6.0;
    const double w1 = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    const double w2 = -(u + 1.0) * u * (u - 2.0) / 2.0;
    const double w3 = (u + 1.0) * u * (u - 1.0) / 6.0;
    return w0 * node(j - 1) + w1 * node(j) + w2 * node(j + 1) + w3 * node(j + 2);
}

// ---------------------------------------------------------------------------
// Tridiagonal eigensolver

namespace {

struct Tridiagonal {
    std::vector<double> diag;
    double off = 0.0;  // constant off-diagonal -1/h^2
    double h = 0.0;
};

Tridiagonal discretize(const TransversePotential& v, int n) {
    Tridiagonal t;
    t.h = 1.0 / (n + 1);
    t.off = -1.0 / (t.h * t.h);
    t.diag.resize(std::size_t(n));
    for (int j = 0; j < n; ++j) t.diag[std::size_t(j)] = 2.0 / (t.h * t.h) + v((j + 1) * t.h);
    return t;
}

// Number of eigenvalues strictly below lambda (Sturm sequence).
int sturm_count(const Tridiagonal& t, double lambda) {
    const double e2 = t.off * t.off;
    int count = 0;
    double q = 1.0;
    for (std::size_t j = 0; j < t.diag.size(); ++j) {
        q = t.diag[j] - lambda - (j == 0 ? 0.0 : e2 / q);
        if (q == 0.0) q = -1e-300;
        if (q < 0.0) ++count;
    }
    return count;
}

double kth_eigenvalue(const Tridiagonal& t, int k) {
    double lo = *std::min_element(t.diag.begin(), t.diag.end()) - 2.0 * std::abs(t.off);
    double hi = *std::max_element(t.diag.begin(), t.diag.end()) + 2.0 * std::abs(t.off);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(t, mid) > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Solves (T - shift) x = b in place by LU with partial pivoting.
void shifted_solve(const Tridiagonal& t, double shift, std::vector<double>& b) {
    const std::size_t n = t.diag.size();
    std::vector<double> d(n), du(n, 0.0), du2(n, 0.0), dl(n, t.off);
    for (std::size_t i = 0; i < n; ++i) d[i] = t.diag[i] - shift;
    for (std::size_t i = 0; i + 1 < n; ++i) du[i] = t.off;
    std::vector<bool> swapped(n, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) d[i] = 1e-300;
            const double f = dl[i] / d[i];
            dl[i] = f;
            d[i + 1] -= f * du[i];
        } else {
            const double f = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = f;
            const double tmp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = tmp - f * d[i + 1];
            if (i + 2 < n) {
                du2[i] = du[i + 1];
                du[i + 1] = -f * du[i + 1];
            }
            swapped[i] = true;
        }
    }
    if (d[n - 1] == 0.0) d[n - 1] = 1e-300;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (swapped[i]) std::swap(b[i], b[i + 1]);
        b[i + 1] -= dl[i] * b[i];
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (std::size_t i = n - 2; i-- > 0;) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
}

struct Eigenpairs {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

Eigenpairs lowest_eigenpairs(const Tridiagonal& t, int count, bool want_vectors) {
    Eigenpairs out;
    const std::size_t n = t.diag.size();
    for (int k = 0; k < count; ++k) {
        const double lambda = kth_eigenvalue(t, k);
        out.values.push_back(lambda);
        if (!want_vectors) continue;
        std::vector<double> x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = 1.0 + 0.5 * std::sin(0.7 * double(j) + 0.3 * k);
        const double shift = lambda + 1e-10 * std::max(1.0, std::abs(lambda));
        for (int it = 0; it < 4; ++it) {
            shifted_solve(t, shift, x);
            for (const auto& prev : out.vectors) {
                double dot = 0.0;
                for (std::size_t j = 0; j < n; ++j) dot += prev[j] * x[j];
                for (std::size_t j = 0; j < n; ++j) x[j] -= dot * prev[j];
            }
            double norm = 0.0;
            for (double v : x) norm += v * v;
            norm = std::sqrt(norm);
            for (double& v : x) v /= norm;
        }
        out.vectors.push_back(std::move(x));
    }
    return out;
}

}  // namespace

std::vector<TransverseMode> transverse_eigensolve(const WireGeometry& geometry, int count) {
    if (geometry.kind() != WallKind::general) throw DomainError("transverse_eigensolve: geometry must be of general kind");
    if (count < 1) throw DomainError("transverse_eigensolve: count must be >= 1");
    const int coarse_n = geometry.eigensolve_options().grid_points;
    if (coarse_n < 512) throw ConfigError("transverse_eigensolve: grid must have at least 512 points");
    if (count * 10 > coarse_n)
        throw ResolutionError("transverse_eigensolve: " + std::to_string(count) + " modes need at least " +
                              std::to_string(10 * count) + " grid points, have " + std::to_string(coarse_n));

    const int fine_n = 2 * coarse_n + 1;
    const Tridiagonal coarse = discretize(geometry.potential(), coarse_n);
    const Tridiagonal fine = discretize(geometry.potential(), fine_n);
    const Eigenpairs ec = lowest_eigenpairs(coarse, count, false);
    const Eigenpairs ef = lowest_eigenpairs(fine, count, true);

    std::vector<TransverseMode> modes;
    modes.reserve(std::size_t(count));
    for (int k = 0; k < count; ++k) {
        const double lambda = (4.0 * ef.values[std::size_t(k)] - ec.values[std::size_t(k)]) / 3.0;
        std::vector<double> v = ef.vectors[std::size_t(k)];
        // h sum chi^2 = 1/2, first interior sample positive
        double norm2 = 0.0;
        for (double s : v) norm2 += s * s;
        const double scale = std::sqrt(0.5 / (norm2 * fine.h));
        const double sign = v.front() < 0.0 ? -1.0 : 1.0;
        for (double& s : v) s *= sign * scale;
        modes.push_back(TransverseMode::sampled(k + 1, lambda, std::make_shared<const std::vector<double>>(std::move(v))));
    }
    return modes;
}

// ---------------------------------------------------------------------------
// WireGeometry

WireGeometry WireGeometry::hard_wall(int num_modes) {
    if (num_modes < 1) throw ConfigError("hard-wall geometry: num_modes must be >= 1");
    WireGeometry g;
    g.kind_ = WallKind::hard_wall;
    g.num_modes_ = num_modes;
    return g;
}

WireGeometry WireGeometry::general(TransversePotential potential, int num_modes, EigensolveOptions options) {
    if (num_modes < 1) throw ConfigError("general geometry: num_modes must be >= 1");
    WireGeometry g;
    g.kind_ = WallKind::general;
    g.num_modes_ = num_modes;
    g.potential_ = std::move(potential);
    g.options_ = options;
    auto modes = transverse_eigensolve(g, num_modes);

    // refinement defect: compare against the unextrapolated coarse spectrum
    const Tridiagonal coarse = discretize(g.potential_, options.grid_points);
    const Eigenpairs ec = lowest_eigenpairs(coarse, num_modes, false);
    for (int k = 0; k < num_modes; ++k) {
        const double exact = modes[std::size_t(k)].threshold();
        g.refinement_defect_ = std::max(g.refinement_defect_, std::abs(ec.values[std::size_t(k)] - exact) / std::max(1.0, std::abs(exact)));
    }
    g.modes_ = std::make_shared<const std::vector<TransverseMode>>(std::move(modes));
    return g;
}

TransverseMode mode(const WireGeometry& geometry, int n) {
    if (n < 1 || n > geometry.num_modes_)
        throw DomainError("mode: index " + std::to_string(n) + " outside 1.." + std::to_string(geometry.num_modes_));
    if (geometry.kind_ == WallKind::hard_wall) return TransverseMode::hard_wall(n);
    return (*geometry.modes_)[std::size_t(n - 1)];
}

// ---------------------------------------------------------------------------
// Green's function

cplx greens_function(const WireGeometry& geometry, Point r, Point r_prime, Energy omega) {
    const double dx = std::abs(r.x - r_prime.x);
    if (dx == 0.0) {
        if (r.y == r_prime.y) throw SingularityError("greens_function: coincident points (logarithmic singularity)");
        throw SingularityError("greens_function: x == x' is only reachable through the regularized on-site sum");
    }
    if (!(r.y >= 0.0 && r.y <= 1.0 && r_prime.y >= 0.0 && r_prime.y <= 1.0))
        throw DomainError("greens_function: transverse coordinate outside [0, 1]");

    const double w = omega.value();
    const auto distance = [&](const TransverseMode& m) {
        return geometry.kind() == WallKind::hard_wall ? omega.distance_to_threshold(m.index()) : w - m.threshold();
    };

    cplx total = 0.0;
    double scale = 0.0;
    int last_propagating = 0;
    for (int n = 1; n <= geometry.num_modes(); ++n) {
        const TransverseMode m = mode(geometry, n);
        const double d = distance(m);
        const bool pole = geometry.kind() == WallKind::hard_wall ? omega.at_threshold(n)
                                                                  : std::abs(d) <= 1e-13 * std::max(1.0, std::abs(m.threshold()));
        if (pole) throw PoleError("greens_function: energy sits on threshold " + std::to_string(n));
        const cplx k = branch_sqrt(d);
        if (d > 0.0) last_propagating = n;
        const cplx phase = std::exp(cplx(0.0, 1.0) * k * dx);
        total += cplx(0.0, 1.0) * m(r.y) * m(r_prime.y) / k * phase;

        // |chi| <= ~1, so |phase / k| bounds every remaining term
        const double bound = std::abs(phase) / std::abs(k);
        scale = std::max(scale, std::abs(total));
        if (n == 1) scale = std::max(scale, 1e-2 * bound);
        if (d < 0.0 && n > last_propagating + 10 && bound < 1e-14 * scale) return total;
    }
    throw ConvergenceError("greens_function: mode sum not converged within " + std::to_string(geometry.num_modes()) +
                           " transverse modes; move the points apart or add modes");
}

}  // namespace qwire
