#include "qwire/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qwire/errors.hpp"
#include "qwire/oracle.hpp"
#include "qwire/scatter_core.hpp"
#include "qwire/transport.hpp"

namespace qwire::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + value + "' is not a number");
    }
    if (used != value.size()) throw ConfigError(key + ": '" + value + "' is not a number");
    return v;
}

int to_int(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(value, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + value + "' is not an integer");
    }
    if (used != value.size() || v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
        throw ConfigError(key + ": '" + value + "' is not an integer");
    return int(v);
}

bool to_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError(key + ": '" + value + "' is not a boolean");
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    if (trim(value).empty()) return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    return out;
}

std::string list_string(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s;
}

// Number with optional "pi2" suffix meaning a multiple of pi^2.
double grid_value(const std::string& token) {
    std::string t = trim(token);
    double scale = 1.0;
    if (t.size() > 3 && t.compare(t.size() - 3, 3, "pi2") == 0) {
        scale = kPi * kPi;
        t = trim(t.substr(0, t.size() - 3));
    }
    return to_double("omega-grid", t) * scale;
}

std::vector<double> linspace(double a, double b, int count) {
    std::vector<double> out;
    if (count == 1) return {a};
    for (int i = 0; i < count; ++i) out.push_back(a + (b - a) * double(i) / double(count - 1));
    return out;
}

const std::set<std::string> kSubcommands{"sweep", "field", "universality", "oned", "oracle-compare"};

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

bool decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

Energy energy_of(const RunConfig& c) {
    if (c.omega) return Energy::at(*c.omega);
    if (c.threshold_m > 0) return Energy::above_threshold(c.threshold_m, c.offset);
    throw ConfigError("energy: set omega, or threshold-m with offset");
}

WireGeometry geometry_of(const RunConfig& c) {
    if (c.geometry == "general")
        return WireGeometry::general(TransversePotential::from_file(c.potential_file), c.num_modes);
    return WireGeometry::hard_wall();
}

}  // namespace

// ---------------------------------------------------------------------------

void set_option(RunConfig& c, const std::string& key_in, const std::string& value_in) {
    const std::string key = trim(key_in);
    const std::string value = trim(value_in);
    if (key == "subcommand") c.subcommand = value;
    else if (key == "geometry") c.geometry = value;
    else if (key == "potential-file") c.potential_file = value;
    else if (key == "num-modes") c.num_modes = to_int(key, value);
    else if (key == "epsilon") c.epsilon = to_double(key, value);
    else if (key == "rho0") c.rho0 = to_double(key, value);
    else if (key == "rho-ladder") c.rho_ladder = to_list(key, value);
    else if (key == "rho0-list") c.rho0_list = to_list(key, value);
    else if (key == "mode-n") c.mode_n = to_int(key, value);
    else if (key == "threshold-m") c.threshold_m = to_int(key, value);
    else if (key == "omega") c.omega = value.empty() ? std::nullopt : std::optional<double>(to_double(key, value));
    else if (key == "offset") c.offset = to_double(key, value);
    else if (key == "omega-grid") c.omega_grid = value;
    else if (key == "offset-factors") c.offset_factors = to_list(key, value);
    else if (key == "field-mode") c.field_mode = value;
    else if (key == "nx") c.nx = to_int(key, value);
    else if (key == "ny") c.ny = to_int(key, value);
    else if (key == "x-min") c.x_min = to_double(key, value);
    else if (key == "x-max") c.x_max = to_double(key, value);
    else if (key == "components") c.components = to_bool(key, value);
    else if (key == "alpha") c.alpha = to_double(key, value);
    else if (key == "barrier-width") c.barrier_width = to_double(key, value);
    else if (key == "oracle") c.oracle = to_bool(key, value);
    else if (key == "cells-per-width") c.cells_per_width = to_int(key, value);
    else if (key == "half-length") c.half_length = to_double(key, value);
    else if (key == "out") c.out = value;
    else if (key == "format") c.format = value;
    else if (key == "threads") c.threads = to_int(key, value);
    else throw ConfigError("unknown configuration key '" + key + "'");
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        set_option(c, line.substr(0, eq), line.substr(eq + 1));
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string emit_config(const RunConfig& c) {
    std::ostringstream o;
    auto kv = [&o](const char* k, const std::string& v) { o << k << '=' << v << '\n'; };
    kv("subcommand", c.subcommand);
    kv("geometry", c.geometry);
    kv("potential-file", c.potential_file);
    kv("num-modes", format_int(c.num_modes));
    kv("epsilon", format_number(c.epsilon));
    kv("rho0", format_number(c.rho0));
    kv("rho-ladder", list_string(c.rho_ladder));
    kv("rho0-list", list_string(c.rho0_list));
    kv("mode-n", format_int(c.mode_n));
    kv("threshold-m", format_int(c.threshold_m));
    kv("omega", c.omega ? format_number(*c.omega) : "");
    kv("offset", format_number(c.offset));
    kv("omega-grid", c.omega_grid);
    kv("offset-factors", list_string(c.offset_factors));
    kv("field-mode", c.field_mode);
    kv("nx", format_int(c.nx));
    kv("ny", format_int(c.ny));
    kv("x-min", format_number(c.x_min));
    kv("x-max", format_number(c.x_max));
    kv("components", c.components ? "true" : "false");
    kv("alpha", format_number(c.alpha));
    kv("barrier-width", format_number(c.barrier_width));
    kv("oracle", c.oracle ? "true" : "false");
    kv("cells-per-width", format_int(c.cells_per_width));
    kv("half-length", format_number(c.half_length));
    kv("out", c.out);
    kv("format", c.format);
    kv("threads", format_int(c.threads));
    return o.str();
}

std::vector<double> parse_omega_grid(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw ConfigError("omega-grid: empty grid");
    std::vector<double> out;
    if (s.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() != 3) throw ConfigError("omega-grid: expected start:stop:count");
        const int count = to_int("omega-grid", trim(parts[2]));
        if (count < 1) throw ConfigError("omega-grid: count must be >= 1");
        out = linspace(grid_value(parts[0]), grid_value(parts[1]), count);
    } else {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(grid_value(item));
    }
    for (const double w : out)
        if (!std::isfinite(w)) throw ConfigError("omega-grid: non-finite value");
    return out;
}

void validate(const RunConfig& c) {
    require(kSubcommands.count(c.subcommand) == 1,
            "subcommand must be one of sweep|field|universality|oned|oracle-compare, got '" + c.subcommand + "'");
    require(c.format == "csv" || c.format == "json", "format must be csv or json");
    require(c.geometry == "hard-wall" || c.geometry == "general", "geometry must be hard-wall or general");
    require(c.geometry != "general" || !c.potential_file.empty(), "general geometry needs potential-file");
    require(c.num_modes >= 1, "num-modes must be >= 1");
    require(c.epsilon > 0.0 && c.epsilon < 1.0, "epsilon must lie in (0, 1)");
    require(c.rho0 > 0.0 && std::isfinite(c.rho0), "rho0 must be positive");
    require(c.mode_n >= 1, "mode-n must be >= 1");
    require(c.threshold_m >= 0, "threshold-m must be >= 0");
    require(c.threads >= 0, "threads must be >= 0");
    require(!c.omega || std::isfinite(*c.omega), "omega must be finite");
    require(std::isfinite(c.offset), "offset must be finite");

    if (c.subcommand == "sweep") {
        require(c.geometry == "hard-wall", "sweep: only the hard-wall geometry is supported");
        parse_omega_grid(c.omega_grid);
    } else if (c.subcommand == "oned") {
        for (const double w : parse_omega_grid(c.omega_grid)) require(w >= 0.0, "oned: omega values must be >= 0");
        require(std::isfinite(c.alpha), "oned: alpha must be finite");
        require(c.barrier_width > 0.0, "oned: barrier-width must be positive");
    } else if (c.subcommand == "field") {
        require(c.field_mode == "clean" || c.field_mode == "defect" || c.field_mode == "threshold",
                "field: field-mode must be clean, defect or threshold");
        require(c.nx >= 1 && c.ny >= 1, "field: nx and ny must be >= 1");
        require(c.x_min <= c.x_max, "field: x-min must not exceed x-max");
        require(c.geometry == "hard-wall" || c.field_mode == "threshold",
                "field: general geometry is only supported in threshold mode");
        if (c.field_mode == "threshold") {
            require(c.threshold_m > c.mode_n, "field: threshold mode needs threshold-m > mode-n");
        } else {
            const Energy e = energy_of(c);
            require(e.distance_to_threshold(c.mode_n) > 0.0, "field: incident mode-n must propagate at the energy");
            if (c.field_mode == "defect" && !c.omega)
                require(c.offset >= 0.0 && c.threshold_m > c.mode_n,
                        "field: defect mode at a threshold needs offset >= 0 and threshold-m > mode-n");
        }
    } else if (c.subcommand == "universality") {
        require(c.threshold_m > c.mode_n, "universality: threshold-m must exceed mode-n");
        require(!c.rho0_list.empty(), "universality: rho0-list is empty");
        for (const double r : c.rho0_list) require(r > 0.0, "universality: rho0-list values must be positive");
        for (const double f : c.offset_factors) require(f > 0.0, "universality: offset-factors must be positive");
        if (c.oracle) {
            require(c.rho_ladder.size() >= 3 && decreasing(c.rho_ladder),
                    "universality: rho-ladder needs >= 3 decreasing values");
            require(c.geometry == "hard-wall", "universality: oracle runs use the hard-wall wire");
        }
    } else if (c.subcommand == "oracle-compare") {
        require(c.geometry == "hard-wall", "oracle-compare: only the hard-wall geometry is supported");
        require(c.rho_ladder.size() >= 3 && decreasing(c.rho_ladder), "oracle-compare: rho-ladder needs >= 3 decreasing values");
        for (const double r : c.rho_ladder)
            require(r * double(c.cells_per_width) >= 4.0, "oracle-compare: every rho must satisfy rho/h >= 4");
        const Energy e = energy_of(c);
        require(e.distance_to_threshold(c.mode_n) > 0.0, "oracle-compare: incident mode-n must propagate");
    }
}

// ---------------------------------------------------------------------------

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table::add_row: column count mismatch");
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_int(long v) { return std::to_string(v); }

void write_table(const Table& table, const std::string& format, std::ostream& out) {
    if (format == "json") {
        for (const auto& row : table.rows) {
            nlohmann::ordered_json obj;
            for (std::size_t i = 0; i < row.size(); ++i) {
                const std::string& cell = row[i];
                if (cell.empty()) {
                    obj[table.columns[i]] = nullptr;
                    continue;
                }
                char* end = nullptr;
                const double v = std::strtod(cell.c_str(), &end);
                if (end && *end == '\0' && std::isfinite(v))
                    obj[table.columns[i]] = v;
                else
                    obj[table.columns[i]] = cell;
            }
            out << obj.dump() << '\n';
        }
        return;
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
}

// ---------------------------------------------------------------------------

CommandResult run_sweep(const RunConfig& c) {
    const auto grid = parse_omega_grid(c.omega_grid);
    const auto geometry = WireGeometry::hard_wall();
    const Impurity impurity(c.epsilon, c.rho0);
    const auto points = sweep(geometry, impurity, grid, c.threads);

    int channels = 0;
    std::size_t ok = 0;
    for (const auto& p : points)
        if (p.ok()) {
            channels = std::max(channels, p.result->channels());
            ++ok;
        }
    CommandResult res;
    auto& t = res.table;
    t.columns = {"omega", "m"};
    for (const char* which : {"T", "R"})
        for (int n = 1; n <= channels; ++n)
            for (int l = 1; l <= channels; ++l)
                t.columns.push_back(std::string(which) + "_" + std::to_string(n) + "_" + std::to_string(l));
    t.columns.push_back("conductance");
    t.columns.push_back("unitarity_defect");

    for (const auto& p : points) {
        if (!p.ok()) {
            res.log.push_back("omega " + format_number(p.omega) + ": " + p.error);
            continue;
        }
        const auto& r = *p.result;
        std::vector<std::string> row{format_number(p.omega), format_int(threshold_window(p.omega))};
        for (const auto* mat : {&r.T, &r.R})
            for (int n = 0; n < channels; ++n)
                for (int l = 0; l < channels; ++l)
                    row.push_back(format_number(n < r.channels() && l < r.channels() ? (*mat)(n, l) : 0.0));
        row.push_back(format_number(r.conductance));
        row.push_back(format_number(r.unitarity_defect));
        t.add_row(std::move(row));
    }
    if (double(ok) < 0.9 * double(points.size())) res.exit_code = kPartialFailure;
    return res;
}

CommandResult run_field(const RunConfig& c) {
    const auto geometry = geometry_of(c);
    const Impurity impurity(c.epsilon, c.rho0);
    const int n = c.mode_n;
    std::function<cplx(Point)> psi;
    std::optional<ScatteringSolution> solution;
    std::optional<ThresholdApproach> approach;

    if (c.field_mode == "clean") {
        const Energy e = energy_of(c);
        psi = [n, e](Point r) { return incident_wave(n, e, r); };
    } else if (c.field_mode == "threshold") {
        const int m = c.threshold_m;
        psi = [&geometry, &impurity, n, m](Point r) { return threshold_field(geometry, impurity, n, m, r).value; };
    } else if (!c.omega && c.offset == 0.0) {
        approach.emplace(geometry, impurity, n, c.threshold_m);
        psi = [&approach](Point r) { return approach->field_limit(r).value; };
    } else {
        const Energy e = energy_of(c);
        const int m = c.threshold_m > 0 ? c.threshold_m : threshold_window(e.value());
        solution = solve_scattering(geometry, impurity, n, e, m);
        psi = [&solution](Point r) { return solution->field(r); };
    }

    CommandResult res;
    auto& t = res.table;
    t.columns = {"x", "y", "density"};
    if (c.components) {
        t.columns.push_back("re");
        t.columns.push_back("im");
    }
    for (const double x : linspace(c.x_min, c.x_max, c.nx)) {
        for (const double y : linspace(0.0, 1.0, c.ny)) {
            const cplx v = psi({x, y});
            std::vector<std::string> row{format_number(x), format_number(y), format_number(std::norm(v))};
            if (c.components) {
                row.push_back(format_number(v.real()));
                row.push_back(format_number(v.imag()));
            }
            t.add_row(std::move(row));
        }
    }
    return res;
}

CommandResult run_universality(const RunConfig& c) {
    const auto geometry = WireGeometry::hard_wall();
    const int n = c.mode_n;
    const int m = c.threshold_m;
    const double sm = sin_pi(double(m) * c.epsilon);
    if (std::abs(sm) <= 1e-8) throw ConfigError("universality: sin(m pi epsilon) vanishes, mode m is decoupled");
    const double closed = sin_pi(double(n) * c.epsilon) / sm;

    CommandResult res;
    auto& t = res.table;
    t.columns = {"path", "rho0", "offset_factor", "re", "im", "spread", "deviation", "pass"};
    auto spread_of = [](const std::vector<cplx>& v) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = i + 1; j < v.size(); ++j) s = std::max(s, std::abs(v[i] - v[j]));
        return s;
    };

    // Closed-form threshold field: rho0 enters nowhere, spread is exactly zero.
    double field_spread = 0.0;
    {
        std::vector<cplx> first;
        for (std::size_t i = 0; i < c.rho0_list.size(); ++i) {
            const Impurity imp(c.epsilon, c.rho0_list[i]);
            std::vector<cplx> values;
            for (const double x : {-0.7, 0.0, 0.45})
                for (const double y : {0.1, 0.35, 0.8}) values.push_back(threshold_field(geometry, imp, n, m, {x, y}).value);
            if (i == 0) first = values;
            for (std::size_t j = 0; j < values.size(); ++j) field_spread = std::max(field_spread, std::abs(values[j] - first[j]));
        }
        t.add_row({"threshold-field", "", "", format_number(closed), "0", format_number(field_spread), "",
                   field_spread == 0.0 ? "1" : "0"});
    }

    // Threshold limit of the full solution.
    std::vector<cplx> limits;
    double worst = 0.0;
    for (const double rho0 : c.rho0_list) {
        const ThresholdApproach a(geometry, Impurity(c.epsilon, rho0), n, m);
        const cplx v = a.amplitude_limit(m).value;
        limits.push_back(v);
        worst = std::max(worst, std::abs(v - closed));
        t.add_row({"threshold-limit", format_number(rho0), "", format_number(v.real()), format_number(v.imag()), "",
                   format_number(std::abs(v - closed)), ""});
    }
    const double spread_threshold = spread_of(limits);
    const bool threshold_pass = spread_threshold < 1e-8 && worst < 1e-6;
    t.add_row({"verdict-threshold", "", "", format_number(closed), "0", format_number(spread_threshold),
               format_number(worst), threshold_pass ? "1" : "0"});

    // Near-threshold spread against offset.
    std::vector<double> spreads;
    for (const double f : c.offset_factors) {
        std::vector<cplx> coeffs;
        for (const double rho0 : c.rho0_list) {
            const Impurity imp(c.epsilon, rho0);
            const cplx d = delta_m(geometry, imp, m, Energy::above_threshold(m, 0.0));
            const Energy e = Energy::above_threshold(m, f / std::norm(d));
            const cplx v = solve_scattering(geometry, imp, n, e, m).amplitude(m);
            coeffs.push_back(v);
            t.add_row({"near-threshold", format_number(rho0), format_number(f), format_number(v.real()),
                       format_number(v.imag()), "", format_number(std::abs(v - closed)), ""});
        }
        spreads.push_back(spread_of(coeffs));
        t.add_row({"near-threshold-spread", "", format_number(f), "", "", format_number(spreads.back()), "", ""});
    }
    // Spreads must shrink as the offset factor shrinks.
    std::vector<std::size_t> order(spreads.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&c](std::size_t a, std::size_t b) { return c.offset_factors[a] > c.offset_factors[b]; });
    bool monotone = true;
    for (std::size_t i = 1; i < order.size(); ++i)
        if (!(spreads[order[i]] < spreads[order[i - 1]]) && spreads[order[i - 1]] > 0.0) monotone = false;
    t.add_row({"verdict-near-threshold", "", "", "", "", "", "", monotone ? "1" : "0"});

    if (c.oracle) {
        DiscreteWireConfig base;
        base.cells_per_width = c.cells_per_width;
        base.half_length = c.half_length;
        base.epsilon = c.epsilon;
        const auto rep = universality_probe(base, n, m, c.rho0_list, c.rho_ladder);
        for (const auto& e : rep.entries)
            t.add_row({"oracle", format_number(e.rho0), format_number(1e-4), format_number(e.coefficient.value.real()),
                       format_number(e.coefficient.value.imag()), "", format_number(std::abs(e.coefficient.value - closed)),
                       ""});
        const bool pass = rep.spread < 0.05 && rep.mean_deviation < 0.05;
        t.add_row({"verdict-oracle", "", "", "", "", format_number(rep.spread), format_number(rep.mean_deviation),
                   pass ? "1" : "0"});
    }
    return res;
}

CommandResult run_oned(const RunConfig& c) {
    const auto grid = parse_omega_grid(c.omega_grid);
    const auto delta = OneDBarrier::delta(c.alpha);
    const double height = c.alpha / c.barrier_width;
    const auto weak = OneDBarrier::weak_finite(height, c.barrier_width);
    CommandResult res;
    auto& t = res.table;
    t.columns = {"omega", "r_delta", "r_weak", "r_barrier_exact", "weak_regime"};
    if (!weak.weak_regime()) res.log.push_back("barrier outside the weak regime: sqrt(dV) L >= 0.1");
    for (const double w : grid)
        t.add_row({format_number(w), format_number(reflection_1d(delta, w)), format_number(reflection_1d(weak, w)),
                   format_number(reflection_rectangular_barrier(height, c.barrier_width, w)),
                   weak.weak_regime() ? "1" : "0"});
    return res;
}

CommandResult run_oracle_compare(const RunConfig& c) {
    const Energy e = energy_of(c);
    const double omega = e.value();
    const int n = c.mode_n;
    std::vector<OracleSolution> ladder;
    for (const double rho : c.rho_ladder) {
        DiscreteWireConfig cfg;
        cfg.cells_per_width = c.cells_per_width;
        cfg.half_length = c.half_length;
        cfg.rho = rho;
        cfg.epsilon = c.epsilon;
        cfg.rho0 = c.rho0;
        ladder.push_back(solve(DiscreteWire(cfg), n, omega));
    }
    const auto ex = rho_extrapolate(ladder);
    const auto analytic =
        solve_scattering(WireGeometry::hard_wall(), Impurity(c.epsilon, c.rho0), n, e, threshold_window(omega));

    CommandResult res;
    if (!ex.monotone) res.log.push_back("rho extrapolation: " + ex.warning);
    auto& t = res.table;
    t.columns = {"source", "rho", "n", "l", "re", "im", "error", "rel_deviation"};
    for (const auto& s : ladder)
        for (const auto& a : s.amplitudes) {
            const cplx v = s.scattering(a.l);
            t.add_row({"oracle", format_number(s.rho), format_int(n), format_int(a.l), format_number(v.real()),
                       format_number(v.imag()), "", ""});
        }
    for (const auto& a : ex.amplitudes) {
        const auto v = ex.scattering(a.l, n);
        const cplx ref = analytic.amplitude(a.l);
        const double dev = std::abs(ref) > 0.0 ? std::abs(v.value - ref) / std::abs(ref) : std::abs(v.value);
        t.add_row({"extrapolated", "", format_int(n), format_int(a.l), format_number(v.value.real()),
                   format_number(v.value.imag()), format_number(v.error), format_number(dev)});
        t.add_row({"analytic", "", format_int(n), format_int(a.l), format_number(ref.real()), format_number(ref.imag()),
                   "", ""});
    }
    return res;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& log) {
    try {
        validate(config);
    } catch (const std::exception& e) {
        log << "configuration error: " << e.what() << '\n';
        return kConfigError;
    }
    CommandResult res;
    try {
        if (config.subcommand == "sweep") res = run_sweep(config);
        else if (config.subcommand == "field") res = run_field(config);
        else if (config.subcommand == "universality") res = run_universality(config);
        else if (config.subcommand == "oned") res = run_oned(config);
        else res = run_oracle_compare(config);
    } catch (const ConfigError& e) {
        log << "configuration error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        log << "numerical failure: " << e.what() << '\n';
        return kPartialFailure;
    }
    for (const auto& line : res.log) log << line << '\n';
    if (config.out.empty()) {
        write_table(res.table, config.format, out);
    } else {
        std::ofstream file(config.out);
        if (!file) {
            log << "configuration error: cannot write " << config.out << '\n';
            return kConfigError;
        }
        write_table(res.table, config.format, file);
    }
    return res.exit_code;
}

}  // namespace qwire::cli
