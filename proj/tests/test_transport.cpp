#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qwire/errors.hpp"
#include "qwire/transport.hpp"

using namespace qwire;

namespace {
const WireGeometry kWire = WireGeometry::hard_wall();

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / x.size(), my += y[i] / y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxy / sxx;
}
}  // namespace

TEST_CASE("transport at a single energy") {
    SUBCASE("matrices follow the amplitudes") {
        const Impurity imp(0.3, 0.01);
        const double w = 4 * kPi * kPi * 1.05;
        const auto t = transport_at(kWire, imp, w);
        REQUIRE(t.channels() == 2);
        for (int n = 1; n <= 2; ++n) {
            const auto s = solve_scattering(kWire, imp, n, Energy::at(w), 2);
            for (int l = 1; l <= 2; ++l) {
                const double ratio = s.wavenumber(l).real() / s.wavenumber(n).real();
                CHECK(t.T(n - 1, l - 1) == doctest::Approx(ratio * std::norm(s.transmitted(l))).epsilon(1e-14));
                CHECK(t.R(n - 1, l - 1) == doctest::Approx(ratio * std::norm(s.reflected(l))).epsilon(1e-14));
            }
        }
        CHECK(t.conductance == doctest::Approx(t.T.sum()));
        CHECK(t.unitarity_defect < 1e-12);
        CHECK((t.T.array() >= 0).all());
        CHECK((t.R.array() >= 0).all());
        CHECK(t.conductance <= t.channels() + t.unitarity_defect * t.channels());
    }
    SUBCASE("vanishing coupling") {
        // the coupling only dies like 1/ln rho0, so the deficit falls off like 1/ln^2 rho0
        double prev = 1.0;
        std::vector<double> ll, ld;
        for (double rho0 : {1e-10, 1e-30, 1e-100, 1e-300}) {
            const auto t = transport_at(kWire, Impurity(0.3, rho0), 4 * kPi * kPi * 1.2);
            double worst = 0.0;
            for (int n = 0; n < t.channels(); ++n) worst = std::max(worst, std::abs(t.T(n, n) - 1.0));
            CHECK(worst < prev);
            prev = worst;
            ll.push_back(std::log(-std::log(rho0)));
            ld.push_back(std::log(worst));
        }
        CHECK(std::abs(slope(ll, ld) + 2.0) < 0.1);
    }
    SUBCASE("centre impurity leaves mode 2 untouched") {
        const auto t = transport_at(kWire, Impurity(0.5, 0.01), 4 * kPi * kPi * 1.2);
        CHECK(t.T(0, 1) == 0.0);
        CHECK(t.T(1, 0) == 0.0);
        CHECK(t.R(0, 1) == 0.0);
        CHECK(t.R(1, 0) == 0.0);
        CHECK(t.R(1, 1) == 0.0);
        CHECK(t.T(1, 1) == 1.0);
    }
    SUBCASE("errors") {
        const Impurity imp(0.3, 0.01);
        CHECK_THROWS_AS(transport_at(kWire, imp, 5.0), DomainError);
        CHECK_THROWS_AS(transport_at(kWire, imp, Energy::above_threshold(2, 0.0)), ThresholdError);
    }
}

TEST_CASE("threshold transport") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ue(0.02, 0.98), ur(-5, -1);
    for (int m : {2, 3}) {
        for (int i = 0; i < 5; ++i) {
            const auto t = threshold_transport(kWire, Impurity(ue(rng), std::pow(10.0, ur(rng))), m);
            CHECK(t.conductance == double(m - 1));
            CHECK(t.T == Eigen::MatrixXd::Identity(m - 1, m - 1));
            CHECK(t.R.isZero(0.0));
        }
    }
    CHECK(threshold_transport(kWire, Impurity(0.5, 0.01), 2).conductance == 1.0);
    CHECK_THROWS_AS(threshold_transport(kWire, Impurity(0.5, 0.01), 1), DomainError);
}

TEST_CASE("approach to quantization") {
    const Impurity imp(0.3, 0.01);
    std::vector<double> lk, ld, lg;
    double prev_t = 0.0;
    for (int j = 0; j <= 12; ++j) {
        const double off = 1e-2 * std::pow(10.0, -0.5 * j);
        const auto t = transport_at(kWire, imp, Energy::above_threshold(2, off));
        const double deficit = 1.0 - t.T(0, 0);
        CHECK(deficit > 0.0);
        CHECK(t.T(0, 0) > prev_t);
        prev_t = t.T(0, 0);
        lk.push_back(std::log(std::sqrt(off)));
        ld.push_back(std::log(deficit));
        // mode 2 is open but barely carries current; G counts it
        CHECK(t.conductance > 1.0);
        lg.push_back(std::log(t.conductance - 1.0));
    }
    // deficit linear in k_2, i.e. in the amplitude
    CHECK(std::abs(slope(lk, ld) - 1.0) < 0.1);
    // G - 1 vanishes like k_2^2
    CHECK(std::abs(slope(lk, lg) - 2.0) < 0.1);
    for (std::size_t j = 1; j < lg.size(); ++j) CHECK(lg[j] < lg[j - 1]);
}

TEST_CASE("sweep") {
    const Impurity imp(0.3, 0.01);
    SUBCASE("single point equals transport_at") {
        const auto s = sweep(kWire, imp, {45.0});
        REQUIRE(s.size() == 1);
        REQUIRE(s[0].ok());
        const auto t = transport_at(kWire, imp, 45.0);
        CHECK(s[0].result->T == t.T);
        CHECK(s[0].result->R == t.R);
        CHECK(s[0].result->conductance == t.conductance);
    }
    SUBCASE("ordered, thread count invariant, failures recorded") {
        std::vector<double> grid;
        for (int i = 0; i < 200; ++i) grid.push_back((1.01 + (8.9 - 1.01) * i / 199.0) * kPi * kPi);
        grid.push_back(4 * kPi * kPi);
        grid.push_back(3.0);
        const auto a = sweep(kWire, imp, grid, 1);
        const auto b = sweep(kWire, imp, grid, 8);
        REQUIRE(a.size() == grid.size());
        double worst = 0.0;
        int failed = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            CHECK(a[i].omega == grid[i]);
            CHECK(b[i].omega == grid[i]);
            CHECK(a[i].ok() == b[i].ok());
            if (!a[i].ok()) {
                ++failed;
                CHECK_FALSE(a[i].error.empty());
                continue;
            }
            CHECK(a[i].result->T == b[i].result->T);
            worst = std::max(worst, a[i].result->unitarity_defect);
        }
        CHECK(failed == 2);
        CHECK(worst < 1e-8);
    }
}
