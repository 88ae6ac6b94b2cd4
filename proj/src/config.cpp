#include "monolab/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace monolab {

namespace {

struct Parser {
    ExperimentConfig cfg;
    std::vector<std::string> errors;
    std::set<std::string> seen;

    void err(int line, const std::string& msg) {
        errors.push_back("line " + std::to_string(line) + ": " + msg);
    }

    bool to_double(const std::string& s, double& v) {
        auto rc = std::from_chars(s.data(), s.data() + s.size(), v);
        return rc.ec == std::errc() && rc.ptr == s.data() + s.size();
    }
    bool to_int(const std::string& s, long long& v) {
        auto rc = std::from_chars(s.data(), s.data() + s.size(), v);
        return rc.ec == std::errc() && rc.ptr == s.data() + s.size();
    }

    void handle(int line, const std::string& key, const std::string& val) {
        if (!seen.insert(key).second) {
            err(line, "duplicate key '" + key + "'");
            return;
        }
        cfg.raw[key] = val;

        auto num_checked = [&](double lo, double hi, double& target) {
            double v;
            if (!to_double(val, v)) {
                err(line, "key '" + key + "': not a number ('" + val + "')");
                return false;
            }
            if (v < lo || v > hi) {
                err(line, "key '" + key + "': value " + val + " out of range [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
                return false;
            }
            target = v;
            return true;
        };
        auto num = [&](double lo, double hi, double& target) { num_checked(lo, hi, target); };
        auto opt_num = [&](double lo, double hi, std::optional<double>& target) {
            double v = 0.0;
            if (num_checked(lo, hi, v)) target = v;
        };
        auto integer = [&](long long lo, long long hi, auto& target) {
            long long v;
            if (!to_int(val, v)) {
                err(line, "key '" + key + "': not an integer ('" + val + "')");
                return;
            }
            if (v < lo || v > hi) {
                err(line, "key '" + key + "': value out of range");
                return;
            }
            target = (std::decay_t<decltype(target)>)v;
        };

        if (key == "kind") {
            if (val == "scan")
                cfg.kind = ExperimentKind::scan;
            else if (val == "bound")
                cfg.kind = ExperimentKind::bound;
            else if (val == "dyadic")
                cfg.kind = ExperimentKind::dyadic;
            else if (val == "fh")
                cfg.kind = ExperimentKind::fh;
            else if (val == "solve")
                cfg.kind = ExperimentKind::solve;
            else if (val == "hebey")
                cfg.kind = ExperimentKind::hebey;
            else if (val == "calibrate")
                cfg.kind = ExperimentKind::calibrate;
            else
                err(line, "unknown experiment kind '" + val + "'");
        } else if (key == "n") {
            long long v = 0;
            integer(2, 3, v);
            cfg.n = (int)v;
        } else if (key == "metric") {
            if (val == "euclidean" || val == "sphere" || val == "hyperbolic" ||
                val == "perturbation")
                cfg.metric = val;
            else
                err(line, "unknown metric '" + val + "'");
        } else if (key == "kappa")
            num(-100.0, 100.0, cfg.kappa);
        else if (key == "lambda")
            opt_num(0.0, 1e6, cfg.lambda);
        else if (key == "working_radius")
            opt_num(1e-6, 2.0, cfg.working_radius);
        else if (key == "rescale_t")
            num(1e-9, 1.0, cfg.rescale_t);
        else if (key == "perturbation_eps")
            num(-0.5, 0.5, cfg.perturbation_eps);
        else if (key == "grid_r")
            opt_num(1e-6, 2.0, cfg.grid_r);
        else if (key == "n_r") {
            long long v = 0;
            integer(16, 100000, v);
            cfg.n_r = (int)v;
        } else if (key == "n_ang") {
            long long v = 0;
            integer(16, 1000000, v);
            cfg.n_ang = (int)v;
        } else if (key == "n_polar") {
            long long v = 0;
            integer(4, 4096, v);
            cfg.n_polar = (int)v;
        } else if (key == "n_azim") {
            long long v = 0;
            integer(8, 8192, v);
            cfg.n_azim = (int)v;
        } else if (key == "pair") {
            if (val == "plane" || val == "sector" || val == "inhomogeneous" || val == "zero")
                cfg.pair = val;
            else
                err(line, "unknown pair family '" + val + "'");
        } else if (key == "dir_x")
            num(-1e3, 1e3, cfg.dir_x);
        else if (key == "dir_y")
            num(-1e3, 1e3, cfg.dir_y);
        else if (key == "dir_z")
            num(-1e3, 1e3, cfg.dir_z);
        else if (key == "theta")
            num(1e-6, 2.0 * M_PI - 1e-6, cfg.theta);
        else if (key == "a")
            num(0.0, 1.0, cfg.a);
        else if (key == "c0")
            num(0.0, 1e6, cfg.c0);
        else if (key == "c1")
            num(0.0, 1e9, cfg.C1);
        else if (key == "c2")
            num(0.0, 1e9, cfg.C2);
        else if (key == "c3")
            num(0.0, 1e9, cfg.C3);
        else if (key == "k_max") {
            long long v = 0;
            integer(0, 12, v);
            cfg.k_max = (int)v;
        } else if (key == "delta")
            opt_num(1e-6, 2.0, cfg.delta);
        else if (key == "r_min")
            opt_num(1e-9, 2.0, cfg.r_min);
        else if (key == "r_max")
            opt_num(1e-9, 2.0, cfg.r_max);
        else if (key == "r_count") {
            long long v = 0;
            integer(2, 100000, v);
            cfg.r_count = (int)v;
        } else if (key == "fh_count") {
            long long v = 0;
            integer(0, 100000, v);
            cfg.fh_count = (int)v;
        } else if (key == "fh_theta")
            num(1e-6, 2.0 * M_PI - 1e-6, cfg.fh_theta);
        else if (key == "h_x")
            num(-1e6, 1e6, cfg.h_x);
        else if (key == "h_y")
            num(-1e6, 1e6, cfg.h_y);
        else if (key == "h_z")
            num(-1e6, 1e6, cfg.h_z);
        else if (key == "h_const")
            num(-1e6, 1e6, cfg.h_const);
        else if (key == "f1")
            num(-1e6, 1e6, cfg.f1);
        else if (key == "f2")
            num(-1e6, 1e6, cfg.f2);
        else if (key == "solver_tol")
            num(1e-14, 1.0, cfg.solver_tol);
        else if (key == "max_sweeps") {
            long long v = 0;
            integer(1, 1000000000LL, v);
            cfg.max_sweeps = v;
        } else if (key == "max_outer") {
            long long v = 0;
            integer(1, 100000, v);
            cfg.max_outer = (int)v;
        } else if (key == "lipschitz_k")
            opt_num(1e-6, 2.0, cfg.lipschitz_k);
        else if (key == "flux_g") {
            if (val == "diff" || val == "prod1" || val == "none")
                cfg.flux_g = val;
            else
                err(line, "unknown flux descriptor '" + val + "'");
        } else if (key == "hebey_radius")
            opt_num(1e-6, 2.0, cfg.hebey_radius);
        else if (key == "hebey_k")
            opt_num(0.0, 1e6, cfg.hebey_K);
        else if (key == "fd_step")
            opt_num(1e-12, 0.1, cfg.fd_step);
        else if (key == "seed") {
            long long v = 0;
            integer(0, 4294967295LL, v);
            cfg.seed = (unsigned)v;
        } else if (key == "out")
            cfg.out = val;
        else if (key == "svg") {
            if (val == "true" || val == "1")
                cfg.svg = true;
            else if (val == "false" || val == "0")
                cfg.svg = false;
            else
                err(line, "key 'svg': expected true/false");
        } else
            err(line, "unknown key '" + key + "'");
    }

    void finalize() {
        // kind-dependent consistency that is checkable statically
        if (cfg.metric == "sphere" && cfg.kappa < 0.0)
            errors.push_back("metric sphere requires kappa > 0");
        if (cfg.metric == "hyperbolic" && cfg.kappa > 0.0)
            errors.push_back("metric hyperbolic requires kappa < 0");
        if (cfg.metric == "sphere" && cfg.kappa == 0.0) cfg.kappa = 1.0;
        if (cfg.metric == "hyperbolic" && cfg.kappa == 0.0) cfg.kappa = -1.0;
        if (cfg.r_min && cfg.r_max && *cfg.r_min > *cfg.r_max)
            errors.push_back("r_min exceeds r_max");
        if (cfg.kind == ExperimentKind::dyadic) {
            int need = 8 * (int)std::pow(4.0, cfg.k_max + 1);
            int nr = cfg.n_r.value_or(need);
            if (nr < need)
                errors.push_back("insufficient resolution: dyadic k_max=" +
                                 std::to_string(cfg.k_max) + " needs n_r >= " +
                                 std::to_string(need));
        }
        if (cfg.kind == ExperimentKind::solve && cfg.pair != "plane")
            cfg.pair = "plane"; // solve ignores the pair family
    }
};

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

std::vector<std::string> parse_config_checked(const std::string& text, ExperimentConfig& out) {
    Parser p;
    std::istringstream is(text);
    std::string line;
    int ln = 0;
    bool saw_kind = false;
    while (std::getline(is, line)) {
        ++ln;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos) {
            p.err(ln, "expected 'key = value'");
            continue;
        }
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty() || val.empty()) {
            p.err(ln, "expected 'key = value'");
            continue;
        }
        if (key == "kind") saw_kind = true;
        p.handle(ln, key, val);
    }
    if (!saw_kind) p.errors.insert(p.errors.begin(), "missing required key 'kind'");
    p.finalize();
    out = p.cfg;
    return p.errors;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    auto errors = parse_config_checked(text, cfg);
    if (!errors.empty()) {
        std::string msg = "config errors:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw config_error(msg);
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw config_error("cannot open config file " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return parse_config(os.str());
}

ModelMetric ExperimentConfig::make_model() const {
    ModelMetric m = ModelMetric::euclidean(n);
    if (metric == "sphere" || metric == "hyperbolic") {
        double k = kappa;
        if (k == 0.0) k = metric == "sphere" ? 1.0 : -1.0;
        m = ModelMetric::space_form(n, k);
    } else if (metric == "perturbation") {
        QuadraticPerturbation pert;
        double e = perturbation_eps;
        pert.add(0, 0, 1, 1, e);
        pert.add(1, 1, 0, 0, -e);
        pert.add(0, 1, 0, 1, e / 2.0);
        if (n == 3) pert.add(2, 2, 0, 0, e / 2.0);
        m = ModelMetric::polynomial(n, pert, lambda.value_or(std::abs(e) * 6.0));
    }
    if (lambda) m = m.with_lambda(*lambda);
    if (working_radius) m = m.with_working_radius(*working_radius);
    if (rescale_t != 1.0) m = rescale(m, rescale_t);
    return m;
}

std::shared_ptr<const BallGrid> ExperimentConfig::make_grid(const ModelMetric& model,
                                                            int resolution_scale) const {
    double R = grid_r.value_or(std::min(1.0, model.working_radius()));
    if (R > model.working_radius() * (1.0 + 1e-9))
        throw config_error("grid_r exceeds the metric working radius");
    int nr_default = kind == ExperimentKind::solve ? 48 : 96;
    if (kind == ExperimentKind::dyadic) nr_default = 8 * (int)std::pow(4.0, k_max + 1);
    int nr = n_r.value_or(nr_default) * resolution_scale;
    if (n == 2) {
        int na_default = kind == ExperimentKind::dyadic ? 64 : 4 * n_r.value_or(nr_default);
        if (kind == ExperimentKind::solve) na_default = 2 * n_r.value_or(nr_default);
        int na = n_ang.value_or(na_default) * resolution_scale;
        if (na % 8 != 0) na += 8 - na % 8; // keep axis-aligned interfaces on nodes
        return BallGrid::build(2, R, nr, na);
    }
    int np_default = kind == ExperimentKind::solve ? 16 : 24;
    if (kind == ExperimentKind::dyadic) np_default = 12;
    int np_base = n_polar.value_or(
        n_ang ? std::max(4, (int)std::lround(std::sqrt(*n_ang / 2.0))) : np_default);
    int np = np_base * resolution_scale;
    int nz = n_azim.value_or(2 * np_base) * resolution_scale;
    if (nz % 8 != 0) nz += 8 - nz % 8;
    return BallGrid::build3(R, nr, np, nz);
}

std::string ExperimentConfig::kind_name() const {
    switch (kind) {
        case ExperimentKind::scan: return "scan";
        case ExperimentKind::bound: return "bound";
        case ExperimentKind::dyadic: return "dyadic";
        case ExperimentKind::fh: return "fh";
        case ExperimentKind::solve: return "solve";
        case ExperimentKind::hebey: return "hebey";
        case ExperimentKind::calibrate: return "calibrate";
    }
    return "?";
}

} // namespace monolab
