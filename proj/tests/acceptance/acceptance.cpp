// Acceptance run: one PASS/FAIL line per criterion. Tolerances are pinned
// here, not read from the library defaults.
//
// Usage: acceptance [--json reports.json] [--only N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "oscillab/oscillab.hpp"

using namespace oscillab;
using nlohmann::json;
using clk = std::chrono::steady_clock;

namespace {

// pinned tolerances
constexpr double exact_slack = 1e-9;
constexpr double exact_runtime_s = 60.0;
constexpr double jump1d_rel = 0.02;
constexpr double jump1d_runtime_s = 10.0;
constexpr double jump2d_rel = 0.05;
constexpr double jump2d_runtime_s = 180.0;
constexpr double amplitude_tol = 1e-12;
constexpr double dilation_tol = 1e-9;
constexpr double drift_tol = 0.15;
constexpr std::size_t min_general_besov_points = 12;
constexpr double vanish_ratio = 0.1;
constexpr double persist_band = 0.1;
constexpr double jn_min_r2 = 0.95;
constexpr double modulus_slack = 1e-12;
constexpr double besov_bracket_lo = 1.0 / 8.0;
constexpr double besov_bracket_hi = 8.0;
constexpr double sobolev_slack = 0.05;

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<Report> reports;  // compared byte for byte across thread counts
};

void require(Outcome& o, bool ok) { o.pass = o.pass && ok; }

double seconds_since(clk::time_point t) { return std::chrono::duration<double>(clk::now() - t).count(); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

// 1. explicit-constant identities on 1000 random piecewise-constant functions
Outcome exact_identities()
{
    Outcome o;
    std::vector<std::vector<Report>> per_op;
    std::string digest;
    std::size_t failures = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        FixtureSpec s;
        s.generator = Generator::random_piecewise;
        s.dim = seed % 2 ? 2 : 1;
        s.cells = s.dim == 2 ? 64 : 256;
        s.seed = seed;
        ExactSuiteParams p;
        p.seed = seed;
        p.tolerance = exact_slack;
        const auto rs = exact_inequality_suite(generate_fixture(s).u, p);
        per_op.resize(rs.size());
        for (std::size_t i = 0; i < rs.size(); ++i) {
            failures += rs[i].pass ? 0 : 1;
            per_op[i].push_back(rs[i]);
            digest += to_json(rs[i]).dump();
        }
    }
    for (auto& group : per_op) {
        o.reports.push_back(detail::merge_worst(group.front().op, group, exact_slack));
    }
    Report d;
    d.op = "exact_suite_digest";
    d.extra["fnv1a"] = fnv1a(digest);
    o.reports.push_back(d);
    require(o, failures == 0);
    o.summary = std::to_string(o.reports.size() - 1) + " identity families x 1000 functions, " +
                std::to_string(failures) + " violations";
    return o;
}

// 2. 1D directional jump energies
Outcome jumps_1d()
{
    Outcome o;
    const auto d = GridDomain::centered(1, 4096, 1.0);
    const RegionBox box{{-1.0, 0.0}, {1.0, 0.0}};
    const auto eps = geometric_schedule(0.2, 0.01, 6);
    const auto step = JumpShape::step1d(1.5);
    const auto stair = JumpShape::staircase1d({-0.3, 0.3}, {1.0, -2.0});
    for (const auto& [name, shape] : {std::pair{"step", step}, std::pair{"staircase", stair}}) {
        const auto c = directional_sweep(shape.sample(d), box.mask(d), {1.0, 0.0}, 2.0, eps);
        const double truth = ground_truth(shape, box, 2.0).directional;
        auto r = Report::equality(std::string("jump1d:") + name, c.limit, truth, jump1d_rel);
        r.extra["energy"] = c.energy;
        require(o, r.pass);
        o.reports.push_back(r);
    }
    o.summary = fmt("step limit %.6g (exact 2.25), staircase limit %.6g (exact 5)", o.reports[0].lhs, o.reports[1].lhs);
    return o;
}

// 3. 2D kernel formula on a disk, directional limit on a square
Outcome jumps_2d()
{
    Outcome o;
    const auto eps = geometric_schedule(0.15, 0.02, 5);
    {
        const auto d = GridDomain::centered(2, 512, 0.5);
        const RegionBox box{{-0.5, -0.5}, {0.5, 0.5}};
        const auto disk = JumpShape::disk2d(1.0, {0.0, 0.0}, 0.3);
        const auto c = kernel_sweep(disk.sample(d), box.mask(d), KernelFamily(KernelKind::box, 2), 2.0, eps);
        auto r = Report::equality("jump2d:disk_kernel", c.limit, ground_truth(disk, box, 2.0).kernel_limit(), jump2d_rel);
        r.extra["energy"] = c.energy;
        require(o, r.pass);
        o.reports.push_back(r);
    }
    {
        const auto d = GridDomain::centered(2, 512, 1.0);
        const RegionBox box{{-1.0, -1.0}, {1.0, 1.0}};
        const auto sq = JumpShape::square2d(1.0, {0.0, 0.0}, 0.5);
        const auto c = directional_sweep(sq.sample(d), box.mask(d), {1.0, 0.0}, 2.0, eps);
        auto r = Report::equality("jump2d:square_directional", c.limit, 2.0 * 0.5, jump2d_rel);
        r.extra["energy"] = c.energy;
        require(o, r.pass);
        o.reports.push_back(r);
    }
    o.summary = fmt("disk kernel limit %.6g (exact 1.2), square limit %.6g (exact 1)", o.reports[0].lhs, o.reports[1].lhs);
    return o;
}

// 4. ratio scans of every interpolation theorem
Outcome ratio_scans()
{
    Outcome o;
    ScanOptions opt;
    opt.fixtures = {Generator::step, Generator::log_singular, Generator::hoelder_bump, Generator::constant};
    opt.settings.amplitude_tol = amplitude_tol;
    opt.settings.dilation_tol = dilation_tol;
    opt.settings.drift_tol = drift_tol;
    double worst_drift = 0.0;
    require(o, default_params(Theorem::general_besov).size() >= min_general_besov_points);
    for (auto t : all_theorems) {
        const auto s = bmo_ratio_scan(t, opt);
        bool constant_flagged = true;
        for (const auto& c : s.cases) {
            if (c.fixture == "constant") {
                constant_flagged = constant_flagged && c.excluded;
            }
        }
        const bool ok = s.finite && s.amplitude_dev <= amplitude_tol && s.dilation_dev <= dilation_tol &&
                        s.drift <= drift_tol && constant_flagged && s.evaluated > 0;
        auto r = to_report(s, opt);
        r.pass = ok;
        r.extra["constant_flagged"] = constant_flagged;
        require(o, ok);
        worst_drift = std::max(worst_drift, s.drift);
        o.reports.push_back(r);
    }
    o.summary = fmt("%g theorems, worst drift %.3g", static_cast<double>(all_theorems.size()), worst_drift);
    return o;
}

// 5. vanishing on a smooth bump, persistence on a jump
Outcome vmo()
{
    Outcome o;
    const auto shifts = geometric_shifts(128, 8);
    const auto g = vmo_vanishing_check(fixture(Generator::gaussian_bump, 1, 1024), 1.0, 2.0, 0.5, shifts, vanish_ratio);
    require(o, g.pass && g.extra["monotone"].get<bool>());
    const double a = 1.5;
    const auto s = vmo_persistence_check(fixture(Generator::step, 1, 1024, a), 1.0, 1.0, shifts, a, persist_band);
    require(o, s.pass);
    o.reports = {g, s};
    o.summary = fmt("gaussian E(h_min)/E(h_max) = %.3g, step E(h)/|a| in [%.4g, %.4g]", g.lhs / (g.rhs / vanish_ratio),
                    s.ratio, 1.0 + s.extra["max_rel_dev"].get<double>());
    return o;
}

// 6. John-Nirenberg decay on a logarithm
Outcome john_nirenberg()
{
    Outcome o;
    const auto u = fixture(Generator::log_singular, 1, 1024);
    std::vector<double> sig;
    for (int i = 1; i <= 60; ++i) {
        sig.push_back(0.1 * i);
    }
    const auto jn = jn_decay_probe(u, CellBlock::cube(u.domain(), {0, 0}, 1024), sig);
    Report r;
    r.op = "john_nirenberg";
    r.lhs = jn.r_squared;
    r.rhs = jn_min_r2;
    r.ratio = jn.r_squared / jn_min_r2;
    r.tolerance = 0.0;
    r.pass = jn.r_squared >= jn_min_r2 && jn.slope < 0.0 && jn.tail_points >= 3 &&
             jn.tail_threshold == 2.0 * jn.bmo;
    r.extra = {{"slope", jn.slope}, {"bmo", jn.bmo}, {"tail_points", jn.tail_points}};
    require(o, r.pass);
    o.reports.push_back(r);
    o.summary = fmt("slope %.4g, R^2 %.4g on %g tail points", jn.slope, jn.r_squared, static_cast<double>(jn.tail_points));
    return o;
}

// 7. modulus monotonicity, k vs k+1 equivalence, Marchaud
Outcome besov_machinery()
{
    Outcome o;
    std::size_t violations = 0;
    const std::vector<double> ts{0.01, 0.02, 0.05, 0.1, 0.2, 0.4};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int dim = seed % 2 ? 2 : 1;
        const auto u = fixture(Generator::random_piecewise, dim, dim == 2 ? 32 : 128, 1.0, seed);
        const auto lat = ShiftLattice::ball(dim, dim == 2 ? 8.0 : 32.0);
        for (double p : {0.5, 1.0, 2.0}) {
            const double c = p >= 1.0 ? 2.0 : std::pow(2.0, 1.0 / p);
            for (int k : {1, 2}) {
                const auto a = modulus_of_continuity(u, k, p, lat, ts);
                const auto b = modulus_of_continuity(u, k + 1, p, lat, ts);
                for (std::size_t i = 0; i < ts.size(); ++i) {
                    violations += b.omega[i] <= c * a.omega[i] * (1.0 + modulus_slack) ? 0 : 1;
                }
            }
        }
    }
    auto mono = Report::inequality("modulus_order", static_cast<double>(violations), 0.0, 0.0);
    require(o, mono.pass);
    o.reports.push_back(mono);

    double lo = infinity;
    double hi = 0.0;
    double marchaud = 0.0;
    std::vector<double> mts;
    for (int i = 0; i < 8; ++i) {
        mts.push_back(0.004 * std::pow(2.0, i));
    }
    const auto lat = ShiftLattice::ball(1, 128.0);
    for (auto g : {Generator::gaussian_bump, Generator::hoelder_bump}) {
        const auto u = fixture(g, 1, 512);
        for (double s : {0.3, 0.6}) {
            for (double p : {0.5, 1.0, 2.0}) {
                const double k1 = besov_integral_norm(u, s, p, 2.0, lat, DifferenceSupport::whole_space, 1).value;
                const double k2 = besov_integral_norm(u, s, p, 2.0, lat, DifferenceSupport::whole_space, 2).value;
                lo = std::min(lo, k1 / k2);
                hi = std::max(hi, k1 / k2);
            }
        }
        auto m = marchaud_probe(u, 1.0, 1, 2, 1.0, mts, lat);
        m.params["fixture"] = to_string(g);
        require(o, m.pass);
        marchaud = std::max(marchaud, m.ratio);
        o.reports.push_back(m);
    }
    Report eq;
    eq.op = "besov_k_equivalence";
    eq.lhs = lo;
    eq.rhs = hi;
    eq.ratio = hi / lo;
    eq.pass = lo >= besov_bracket_lo && hi <= besov_bracket_hi;
    eq.extra = {{"bracket", {besov_bracket_lo, besov_bracket_hi}}};
    require(o, eq.pass);
    o.reports.push_back(eq);
    o.summary = fmt("k1/k2 in [%.3g, %.3g], max Marchaud ratio %.3g", lo, hi, marchaud) + ", " +
                std::to_string(violations) + " modulus violations";
    return o;
}

// 8. W^{1,2} via difference quotients
Outcome sobolev_differences()
{
    Outcome o;
    const auto r = sobolev_difference_check(fixture(Generator::gaussian_bump, 1, 1024), 2.0, ShiftLattice::ball(1, 64.0),
                                            sobolev_slack);
    require(o, r.pass && r.extra["lower_ok"].get<bool>());
    o.reports.push_back(r);
    o.summary = fmt("sup quotient / ||grad u||^2 = %.6g", r.ratio);
    return o;
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double time_limit_s;       // 0 = none
    bool time_single_thread;   // which run the limit applies to
};

std::string dump(const std::vector<Report>& rs) { return to_json(rs).dump(); }

}  // namespace

int main(int argc, char** argv)
{
    std::string json_path;
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--json") == 0 && i + 1 < argc) {
            json_path = argv[++i];
        } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--json path] [--only N]\n");
            return 2;
        }
    }

    const std::vector<Criterion> criteria{
        {1, "exact-identity suite", exact_identities, exact_runtime_s, true},
        {2, "1D jump detection", jumps_1d, jump1d_runtime_s, true},
        {3, "2D kernel jump formula", jumps_2d, jump2d_runtime_s, false},
        {4, "ratio-scan properties", ratio_scans, 0.0, false},
        {5, "VMO vanishing vs persistence", vmo, 0.0, false},
        {6, "John-Nirenberg probe", john_nirenberg, 0.0, false},
        {7, "Besov machinery", besov_machinery, 0.0, false},
        {8, "Sobolev difference characterization", sobolev_differences, 0.0, false},
    };

    bool all_ok = true;
    bool deterministic = true;
    std::string mismatched;
    json out = json::object();
    for (const auto& c : criteria) {
        if (only != 0 && only != c.id && only != 9) {
            continue;
        }
        set_thread_count(1);
        auto t = clk::now();
        Outcome single;
        std::string error;
        try {
            single = c.run();
        } catch (const std::exception& e) {
            single.pass = false;
            error = e.what();
        }
        const double t_single = seconds_since(t);

        set_thread_count(0);
        t = clk::now();
        Outcome threaded;
        try {
            threaded = c.run();
        } catch (const std::exception& e) {
            threaded.pass = false;
            error = e.what();
        }
        const double t_auto = seconds_since(t);

        // a fixed multi-thread pass so the comparison means something on one-core hosts
        set_thread_count(4);
        Outcome four;
        try {
            four = c.run();
        } catch (const std::exception& e) {
            four.pass = false;
            error = e.what();
        }

        const double timed = c.time_single_thread ? t_single : t_auto;
        const bool fast = c.time_limit_s == 0.0 || timed < c.time_limit_s;
        const bool ok = single.pass && threaded.pass && four.pass && fast && error.empty();
        const auto reference = dump(single.reports);
        if (reference != dump(threaded.reports) || reference != dump(four.reports)) {
            deterministic = false;
            mismatched += " " + std::to_string(c.id);
        }
        all_ok = all_ok && ok;
        std::string line = single.summary;
        if (c.time_limit_s > 0.0) {
            line += fmt("; %.2f s ", timed) + (c.time_single_thread ? "(1 thread" : "(auto threads") +
                    fmt(", limit %.0f s)", c.time_limit_s);
        }
        if (!error.empty()) {
            line += "; error: " + error;
        }
        std::printf("%s criterion %d (%s): %s\n", ok ? "PASS" : "FAIL", c.id, c.name, line.c_str());
        std::fflush(stdout);
        out[std::to_string(c.id)] = {{"pass", ok}, {"reports", to_json(single.reports)},
                                     {"seconds_single", t_single}, {"seconds_auto", t_auto}};
    }
    std::printf("%s criterion 9 (determinism across thread counts): %s\n", deterministic ? "PASS" : "FAIL",
                deterministic ? "reports byte-identical for 1, auto and 4 threads"
                              : ("reports differ for criteria" + mismatched).c_str());
    all_ok = all_ok && deterministic;
    if (!json_path.empty()) {
        std::ofstream f(json_path);
        f << out.dump(2) << "\n";
    }
    return all_ok ? 0 : 1;
}
