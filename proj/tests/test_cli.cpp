#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "qwire/cli.hpp"
#include "qwire/errors.hpp"
#include "qwire/transport.hpp"

using namespace qwire;
using namespace qwire::cli;

namespace {

int column(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return int(i);
    FAIL("missing column " << name);
    return -1;
}

double num(const std::string& s) { return std::stod(s); }

RunConfig config(const std::string& sub) {
    RunConfig c;
    c.subcommand = sub;
    return c;
}

}  // namespace

TEST_CASE("config round trip") {
    RunConfig c = config("field");
    c.epsilon = 0.1 + 0.2;
    c.rho0 = 1.0 / 3.0;
    c.rho_ladder = {0.05, 0.025, 1e-2 / 3};
    c.omega = std::nextafter(4 * kPi * kPi, 100.0);
    c.offset_factors = {1e-3};
    c.components = true;
    c.out = "grid.csv";
    c.omega_grid = "1.1pi2:8.9pi2:200";
    const RunConfig back = parse_config(emit_config(c));
    CHECK(back == c);
    CHECK(parse_config(emit_config(back)) == c);
    CHECK(emit_config(back) == emit_config(c));

    RunConfig none = config("oned");
    CHECK_FALSE(parse_config(emit_config(none)).omega.has_value());

    CHECK_THROWS_AS(parse_config("epsilon=abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("nonsense=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("epsilon\n"), ConfigError);
    CHECK(parse_config("# comment\n  epsilon = 0.25  # trailing\n").epsilon == 0.25);
}

TEST_CASE("omega grids") {
    const auto g = parse_omega_grid("1pi2:3pi2:3");
    REQUIRE(g.size() == 3);
    CHECK(g[1] == doctest::Approx(2 * kPi * kPi));
    CHECK(parse_omega_grid("0, 0.25,2.5") == std::vector<double>{0.0, 0.25, 2.5});
    CHECK_THROWS_AS(parse_omega_grid(""), ConfigError);
    CHECK_THROWS_AS(parse_omega_grid("1:2"), ConfigError);
    CHECK_THROWS_AS(parse_omega_grid("1:2:0"), ConfigError);
}

TEST_CASE("validation names the constraint and exits with 2") {
    std::ostringstream out, log;
    auto expect_config_error = [&](const RunConfig& c, const std::string& fragment) {
        log.str("");
        CHECK(run(c, out, log) == kConfigError);
        CHECK(log.str().find(fragment) != std::string::npos);
    };
    expect_config_error(config("sweep"), "omega-grid");
    expect_config_error(config("bogus"), "subcommand");
    RunConfig c = config("oned");
    c.omega_grid = "-1,2";
    expect_config_error(c, "omega values");
    c = config("sweep");
    c.omega_grid = "50";
    c.epsilon = 1.5;
    expect_config_error(c, "epsilon");
    c = config("universality");
    c.threshold_m = 1;
    expect_config_error(c, "threshold-m");
    c = config("oracle-compare");
    c.omega = 41.0;
    c.rho_ladder = {0.04, 0.02, 0.005};
    expect_config_error(c, "rho/h");
    c = config("field");
    c.field_mode = "defect";
    expect_config_error(c, "energy");
    c.format = "xml";
    expect_config_error(c, "format");
}

TEST_CASE("sweep command") {
    RunConfig c = config("sweep");
    SUBCASE("200 points, unitarity") {
        c.omega_grid = "1.1pi2:8.9pi2:200";
        const auto r = run_sweep(c);
        CHECK(r.exit_code == kSuccess);
        const int m = column(r.table, "unitarity_defect");
        int kept = 0;
        for (const auto& row : r.table.rows) {
            ++kept;
            CHECK(num(row[std::size_t(m)]) < 1e-8);
        }
        // 1.1..8.9 pi^2 with 200 points never lands on a threshold
        CHECK(kept == 200);
        CHECK(column(r.table, "T_1_1") == 2);
        CHECK(column(r.table, "R_2_2") > 0);
    }
    SUBCASE("one point is transport_at") {
        c.omega_grid = "45.5";
        const auto r = run_sweep(c);
        REQUIRE(r.table.rows.size() == 1);
        const auto t = transport_at(WireGeometry::hard_wall(), Impurity(c.epsilon, c.rho0), 45.5);
        CHECK(r.table.rows[0][std::size_t(column(r.table, "T_1_2"))] == format_number(t.T(0, 1)));
        CHECK(r.table.rows[0][std::size_t(column(r.table, "conductance"))] == format_number(t.conductance));
    }
    SUBCASE("failed points") {
        c.omega_grid = "5,45,50";
        const auto r = run_sweep(c);
        CHECK(r.table.rows.size() == 2);
        CHECK(r.log.size() == 1);
        CHECK(r.exit_code == kPartialFailure);
        std::ostringstream out, log;
        CHECK(run(c, out, log) == kPartialFailure);
        c.omega_grid = "5,45,46,47,48,49,50,51,52,53,54";
        CHECK(run_sweep(c).exit_code == kSuccess);
    }
    SUBCASE("deterministic bytes") {
        c.omega_grid = "1.2pi2:5pi2:17";
        c.threads = 8;
        std::ostringstream a, b, log;
        REQUIRE(run(c, a, log) == 0);
        c.threads = 1;
        REQUIRE(run(c, b, log) == 0);
        CHECK(a.str() == b.str());
        CHECK(a.str().rfind("omega,m,T_1_1", 0) == 0);
    }
}

TEST_CASE("field command") {
    SUBCASE("clean wire") {
        RunConfig c = config("field");
        c.field_mode = "clean";
        c.omega = 4 * kPi * kPi;
        c.nx = 21;
        c.ny = 41;
        const auto r = run_field(c);
        CHECK(r.table.rows.size() == 21u * 41u);
        double worst = 0.0;
        for (const auto& row : r.table.rows) {
            const double y = num(row[1]);
            worst = std::max(worst, std::abs(num(row[2]) - std::pow(std::sin(kPi * y), 2)));
        }
        CHECK(worst < 1e-14);
    }
    SUBCASE("threshold mode") {
        RunConfig c = config("field");
        c.field_mode = "threshold";
        c.threshold_m = 2;
        c.epsilon = 0.25;
        c.nx = 31;
        c.ny = 11;
        c.components = true;
        const auto r = run_field(c);
        double worst = 0.0;
        for (const auto& row : r.table.rows) {
            const double x = num(row[0]), y = num(row[1]);
            const cplx psi = std::sin(kPi * y) * std::exp(cplx(0, std::sqrt(3.0) * kPi * x)) - std::sqrt(0.5) * std::sin(2 * kPi * y);
            worst = std::max(worst, std::abs(num(row[2]) - std::norm(psi)));
            worst = std::max(worst, std::abs(num(row[3]) - psi.real()));
        }
        CHECK(worst < 1e-14);
    }
    SUBCASE("defect mode tends to the threshold mode") {
        RunConfig c = config("field");
        c.threshold_m = 2;
        c.x_min = 1.0;
        c.x_max = 2.0;
        c.nx = 11;
        c.ny = 21;
        RunConfig t = c;
        t.field_mode = "threshold";
        const auto at = run_field(t);
        std::vector<double> lo, lw;
        for (double offset : {1e-4, 1e-6, 1e-8, 1e-10}) {
            c.offset = offset;
            const auto near = run_field(c);
            double worst = 0.0;
            for (std::size_t i = 0; i < near.table.rows.size(); ++i)
                worst = std::max(worst, std::abs(num(near.table.rows[i][2]) - num(at.table.rows[i][2])));
            lo.push_back(std::log(offset));
            lw.push_back(std::log(worst));
        }
        // the gap closes like k_m
        for (std::size_t i = 1; i < lw.size(); ++i) {
            const double s = (lw[i] - lw[i - 1]) / (lo[i] - lo[i - 1]);
            CHECK(std::abs(s - 0.5) < 0.1);
        }
        CHECK(std::exp(lw.back()) < 1e-4);
    }
    SUBCASE("json lines") {
        RunConfig c = config("field");
        c.field_mode = "clean";
        c.omega = 50.0;
        c.nx = 2;
        c.ny = 2;
        c.format = "json";
        std::ostringstream out, log;
        REQUIRE(run(c, out, log) == 0);
        std::istringstream in(out.str());
        std::string line;
        int n = 0;
        while (std::getline(in, line)) {
            const auto j = nlohmann::json::parse(line);
            CHECK(j["density"].is_number());
            ++n;
        }
        CHECK(n == 4);
    }
}

TEST_CASE("universality command") {
    RunConfig c = config("universality");
    c.threshold_m = 2;
    c.rho0_list = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
    const auto r = run_universality(c);
    const int path = column(r.table, "path");
    const int pass = column(r.table, "pass");
    const int spread = column(r.table, "spread");
    int verdicts = 0;
    std::vector<double> spreads;
    for (const auto& row : r.table.rows) {
        if (row[std::size_t(path)] == "threshold-field") CHECK(num(row[std::size_t(spread)]) == 0.0);
        if (row[std::size_t(path)] == "near-threshold-spread") spreads.push_back(num(row[std::size_t(spread)]));
        if (row[std::size_t(path)].rfind("verdict", 0) == 0 || row[std::size_t(path)] == "threshold-field") {
            ++verdicts;
            CHECK(row[std::size_t(pass)] == "1");
        }
    }
    CHECK(verdicts == 3);
    REQUIRE(spreads.size() == 3);
    CHECK(spreads[1] < spreads[0]);
    CHECK(spreads[2] < spreads[1]);
}

TEST_CASE("oned command") {
    RunConfig c = config("oned");
    c.omega_grid = "0,0.25,2.5";
    const auto r = run_oned(c);
    REQUIRE(r.table.rows.size() == 3);
    CHECK(num(r.table.rows[0][1]) == 1.0);
    CHECK(num(r.table.rows[1][1]) == 0.5);
    CHECK(num(r.table.rows[2][1]) == doctest::Approx(1.0 / 11.0).epsilon(1e-15));
    for (const auto& row : r.table.rows) CHECK(std::abs(num(row[3]) - num(row[1])) < 1e-4);
    c.alpha = 3.0;
    CHECK(num(run_oned(c).table.rows[0][1]) == 1.0);
}

TEST_CASE("output file") {
    RunConfig c = config("oned");
    c.omega_grid = "1";
    c.out = (std::filesystem::temp_directory_path() / "qwire_oned.csv").string();
    std::ostringstream out, log;
    REQUIRE(run(c, out, log) == 0);
    CHECK(out.str().empty());
    std::ifstream in(c.out);
    std::string header;
    std::getline(in, header);
    CHECK(header == "omega,r_delta,r_weak,r_barrier_exact,weak_regime");
    std::filesystem::remove(c.out);
}
