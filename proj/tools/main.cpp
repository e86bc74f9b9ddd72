#include <chrono>
#include <filesystem>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "leapfrog/contour.hpp"
#include "leapfrog/io.hpp"
#include "leapfrog/monodromy.hpp"
#include "leapfrog/parallel.hpp"
#include "leapfrog/pointvortex.hpp"
#include "leapfrog/verify.hpp"

namespace fs = std::filesystem;
namespace pv = lf::pointvortex;
namespace ct = lf::contour;
namespace mono = lf::monodromy;
using lf::io::fmt17;
using lf::io::RunConfig;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitAcceptance = 4;

struct Cli {
    std::string config_path;
    std::string out_dir = "out";
    double y0 = 1.0, xi0 = 0.5, eps = 0.1, tol = 1e-12;
    double delta = 0.3, tau = 1.5, c2 = 0.0;
    std::string xi0_range; // lo:hi:n
    std::string grid = "256x256";
    int kmax = 20, threads = 0, jmax = 512;
    bool plot_data = false;
    bool skip_simulation = false;
    double t_end_periods = 1.0;
    int nodes = 128, snapshots = 64;
};

struct Range {
    double lo, hi;
    std::size_t n;
};

Range parse_range(const std::string& s) {
    Range r{};
    const auto a = s.find(':'), b = s.rfind(':');
    if (a == std::string::npos || b == a)
        throw std::invalid_argument("range must be lo:hi:n");
    r.lo = std::stod(s.substr(0, a));
    r.hi = std::stod(s.substr(a + 1, b - a - 1));
    const long n = std::stol(s.substr(b + 1));
    if (n < 1) throw std::invalid_argument("range count must be >= 1");
    r.n = static_cast<std::size_t>(n);
    return r;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos) throw std::invalid_argument("grid must be NxM");
    return {std::stoul(s.substr(0, x)), std::stoul(s.substr(x + 1))};
}

RunConfig effective_config(const Cli& cli, const CLI::App& app) {
    RunConfig cfg;
    if (!cli.config_path.empty()) cfg = RunConfig::load(cli.config_path);
    auto maybe = [&](const char* flag, const char* key, const std::string& val) {
        if (app.count(flag) > 0 || !cfg.has(key)) cfg.set(key, val);
    };
    maybe("--y0", "y0", fmt17(cli.y0));
    maybe("--xi0", "xi0", fmt17(cli.xi0));
    maybe("--eps", "eps", fmt17(cli.eps));
    maybe("--tol", "tol", fmt17(cli.tol));
    maybe("--delta", "delta", fmt17(cli.delta));
    maybe("--tau", "tau", fmt17(cli.tau));
    maybe("--c2", "c2", fmt17(cli.c2));
    maybe("--grid", "grid", cli.grid);
    maybe("--kmax", "kmax", std::to_string(cli.kmax));
    maybe("--jmax", "jmax", std::to_string(cli.jmax));
    maybe("--xi0-range", "xi0_range", cli.xi0_range);
    maybe("--out", "out", cli.out_dir);
    maybe("--threads", "threads",
          std::to_string(cli.threads > 0
                             ? cli.threads
                             : static_cast<int>(std::thread::hardware_concurrency())));
    maybe("--nodes", "nodes", std::to_string(cli.nodes));
    maybe("--snapshots", "snapshots", std::to_string(cli.snapshots));
    maybe("--periods", "periods", fmt17(cli.t_end_periods));
    return cfg;
}

void write_manifest(const RunConfig& cfg, const std::string& command,
                    const std::vector<std::string>& outputs) {
    json man;
    man["command"] = command;
    man["config_hash"] = cfg.hash();
    json kv;
    for (const auto& [k, v] : cfg.kv) kv[k] = v;
    man["config"] = kv;
    man["outputs"] = outputs;
    man["timestamp"] = static_cast<long>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    lf::io::write_text_file(
        (fs::path(cfg.get("out", "out")) / ("manifest_" + command + ".json")).string(),
        man.dump(2) + "\n");
}

pv::VortexParams params_of(const RunConfig& cfg) {
    pv::VortexParams p{cfg.get_double("y0", 1.0), cfg.get_double("xi0", 0.5),
                       cfg.get_double("eps", 0.1)};
    p.validate();
    return p;
}

int cmd_orbit(const RunConfig& cfg) {
    auto p = params_of(cfg);
    const double T = pv::period_quadrature(p);
    const double t_end = cfg.get_double("periods", 1.0) * T;
    const auto orbit = pv::integrate_orbit(p, t_end, cfg.get_double("tol", 1e-12), 513);
    lf::io::CsvWriter csv((fs::path(cfg.get("out", "out")) / "orbit.csv").string(),
                          {"t", "eta", "xi", "x0", "H"});
    for (const auto& s : orbit.samples) csv.row({s.t, s.eta, s.xi, s.x0, s.H});
    csv.close();
    write_manifest(cfg, "orbit", {"orbit.csv"});
    return kExitOk;
}

int cmd_period(const RunConfig& cfg) {
    const double y0 = cfg.get_double("y0", 1.0);
    Range range{cfg.get_double("xi0", 0.5), cfg.get_double("xi0", 0.5), 1};
    if (cfg.has("xi0_range") && !cfg.get("xi0_range", "").empty())
        range = parse_range(cfg.get("xi0_range", ""));
    const int threads = cfg.get_int("threads", 1);
    std::vector<std::array<double, 7>> rows(range.n);
    lf::numerics::parallel_for(range.n, threads, [&](std::size_t i) {
        const double xi0 =
            (range.n == 1)
                ? range.lo
                : range.lo + (range.hi - range.lo) * double(i) / double(range.n - 1);
        const pv::VortexParams p{y0, xi0, 0.0};
        const double T = pv::period_quadrature(p);
        const double dh = 1e-4 * y0;
        const double wp = 2.0 * M_PI / pv::period_quadrature({y0, xi0 + dh, 0.0});
        const double wm = 2.0 * M_PI / pv::period_quadrature({y0, xi0 - dh, 0.0});
        const double lo = 2.0 * M_PI * xi0 * xi0;
        const double hi = lo / (1.0 - 2.0 * p.alpha0());
        rows[i] = {xi0,          T, 2.0 * M_PI / T, (wp - wm) / (2.0 * dh),
                   lo,           hi,
                   (T >= lo && T <= hi) ? 1.0 : 0.0};
    });
    lf::io::CsvWriter csv(
        (fs::path(cfg.get("out", "out")) / "period.csv").string(),
        {"xi0", "T", "omega0", "domega", "T_lower", "T_upper", "bounds_ok"});
    for (const auto& r : rows)
        csv.row({r[0], r[1], r[2], r[3], r[4], r[5], r[6]});
    csv.close();
    write_manifest(cfg, "period", {"period.csv"});
    return kExitOk;
}

int cmd_qtheta(const RunConfig& cfg) {
    auto p = params_of(cfg);
    const auto [np, nt] = parse_grid(cfg.get("grid", "256x256"));
    (void)nt;
    const auto orb = pv::solve_q_theta(p, np, cfg.get_double("tol", 1e-12));
    lf::io::CsvWriter csv((fs::path(cfg.get("out", "out")) / "qtheta.csv").string(),
                          {"phi", "q", "Theta", "Theta_dot"});
    for (std::size_t k = 0; k < orb.n_phi; ++k)
        csv.row({2.0 * M_PI * double(k) / double(orb.n_phi), orb.q[k], orb.theta_big[k],
                 orb.theta_dot[k]});
    csv.close();
    write_manifest(cfg, "qtheta", {"qtheta.csv"});
    return kExitOk;
}

int cmd_g0(const RunConfig& cfg) {
    auto p = params_of(cfg);
    const auto [np, nt] = parse_grid(cfg.get("grid", "128x128"));
    const auto orbit = pv::solve_q_theta(p, np, cfg.get_double("tol", 1e-12));
    const auto geom = ct::make_geometry(orbit, cfg.get_int("kmax", 20));
    const double eps = p.eps;
    const lf::numerics::BoundaryField zero(np, nt);
    const auto quad = ct::sum_dtheta_psi(eps, zero, geom);
    const auto series = ct::g0_series(eps, geom, nt);
    const double diff = (quad - series.field).sup_norm();
    json rec;
    rec["eps"] = eps;
    rec["sup_diff"] = diff;
    rec["series_tail_bound"] = series.tail_bound;
    rec["series_sup"] = series.field.sup_norm();
    const auto out = fs::path(cfg.get("out", "out"));
    lf::io::write_text_file((out / "g0_summary.json").string(), rec.dump(2) + "\n");
    lf::io::write_text_file((out / "g0_series_field.json").string(),
                            series.field.to_json() + "\n");
    write_manifest(cfg, "g0", {"g0_summary.json", "g0_series_field.json"});
    return kExitOk;
}

int cmd_approx(const RunConfig& cfg) {
    auto p = params_of(cfg);
    const auto [np, nt] = parse_grid(cfg.get("grid", "64x64"));
    (void)nt;
    const auto orbit = pv::solve_q_theta(p, np, cfg.get_double("tol", 1e-12));
    const auto geom = ct::make_geometry(orbit, cfg.get_int("kmax", 20));
    const double eps = p.eps;
    auto reps = ct::approx_solution(eps, geom);
    auto scaled = reps;
    scaled *= eps;
    const double n_full = ct::G_residual(eps, scaled, geom).sup_norm();
    auto reps_half = ct::approx_solution(0.5 * eps, geom);
    reps_half *= 0.5 * eps;
    const double n_half = ct::G_residual(0.5 * eps, reps_half, geom).sup_norm();
    const lf::numerics::BoundaryField zero(np, np);
    const double n_zero = ct::G_residual(eps, zero, geom).sup_norm();
    json rec;
    rec["eps"] = eps;
    rec["norm_G_at_eps_reps"] = n_full;
    rec["norm_G_at_half"] = n_half;
    rec["slope_log2"] = std::log2(n_full / n_half);
    rec["norm_G_at_zero"] = n_zero;
    const auto out = fs::path(cfg.get("out", "out"));
    lf::io::write_text_file((out / "approx_summary.json").string(), rec.dump(2) + "\n");
    lf::io::write_text_file((out / "r_eps_field.json").string(), reps.to_json() + "\n");
    write_manifest(cfg, "approx", {"approx_summary.json", "r_eps_field.json"});
    return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, bool plot_data) {
    auto p = params_of(cfg);
    const auto [np, nt] = parse_grid(cfg.get("grid", "128x128"));
    (void)nt;
    const auto orbit = pv::solve_q_theta(p, np, cfg.get_double("tol", 1e-12));
    const auto geom = ct::make_geometry(orbit, cfg.get_int("kmax", 20));
    auto r_init = ct::approx_solution(p.eps, geom);
    r_init *= p.eps;
    const double T = pv::period_quadrature(p);
    ct::SimulationOptions opt;
    opt.n_nodes = static_cast<std::size_t>(cfg.get_int("nodes", 128));
    opt.n_snapshots = static_cast<std::size_t>(cfg.get_int("snapshots", 64));
    const auto traj =
        ct::simulate_patches(p, r_init, cfg.get_double("periods", 1.0) * T, opt);
    const auto diag = ct::patch_diagnostics(traj, geom);

    const auto out = fs::path(cfg.get("out", "out"));
    std::vector<std::string> outputs;
    json man;
    man["period"] = T;
    man["times"] = json::array();
    man["centroids"] = json::array();
    man["areas"] = json::array();
    man["mode2"] = json::array();
    std::string plot;
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
        const auto& snap = traj.snapshots[s];
        man["times"].push_back(snap.t);
        man["centroids"].push_back({snap.centroid[0].real(), snap.centroid[0].imag(),
                                    snap.centroid[1].real(), snap.centroid[1].imag()});
        man["areas"].push_back({snap.area[0], snap.area[1]});
        man["mode2"].push_back({snap.mode2[0], snap.mode2[1]});
        for (int b = 0; b < 2; ++b) {
            char name[64];
            std::snprintf(name, sizeof name, "snapshot_%03zu_patch%d.csv", s, b + 1);
            lf::io::CsvWriter csv((out / name).string(), {"k", "x", "y"});
            for (std::size_t k = 0; k < snap.boundary[b].size(); ++k)
                csv.row({double(k), snap.boundary[b][k].real(),
                         snap.boundary[b][k].imag()});
            csv.close();
            outputs.emplace_back(name);
            if (plot_data) {
                for (const auto& w : snap.boundary[b])
                    plot += fmt17(w.real()) + " " + fmt17(w.imag()) + "\n";
                plot += "\n\n";
            }
        }
    }
    man["diagnostics"] = {{"max_centroid_error", diag.max_centroid_error},
                          {"max_area_drift", diag.max_area_drift},
                          {"exchange_count", diag.exchange_count},
                          {"mode2_initial", diag.mode2_initial},
                          {"mode2_predicted", diag.mode2_predicted},
                          {"symmetry_defect", diag.symmetry_defect}};
    lf::io::write_text_file((out / "simulation.json").string(), man.dump(2) + "\n");
    outputs.emplace_back("simulation.json");
    if (plot_data) {
        lf::io::write_text_file((out / "boundaries.dat").string(), plot);
        outputs.emplace_back("boundaries.dat");
    }
    write_manifest(cfg, "simulate", outputs);
    return kExitOk;
}

int cmd_monodromy(const RunConfig& cfg) {
    auto p = params_of(cfg);
    const auto orbit = pv::solve_q_theta(p, 128, cfg.get_double("tol", 1e-12));
    const auto sys =
        mono::build_system(p.eps, p, orbit, cfg.get_double("c2", 0.0));
    const auto rep = mono::fundamental_matrix(sys, cfg.get_double("tol", 1e-12));
    const double trig = mono::a0_det_gap_identity(2.0 * M_PI);
    auto gap_ode = [&] {
        auto M = mono::a0_exponential_ode(2.0 * M_PI, 1e-12);
        for (int i = 0; i < 4; ++i) M[i * 4 + i] -= 1.0;
        return mono::mat_det(M).real();
    }();
    json rec;
    rec["det_gap_re"] = rep.det_gap.real();
    rec["det_gap_im"] = rep.det_gap.imag();
    rec["structure_ok"] = rep.structure_ok;
    rec["structure_defect"] = rep.structure_defect;
    rec["a0_det_gap_trig"] = trig;
    rec["a0_det_gap_ode"] = gap_ode;
    json mrows = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int j = 0; j < 4; ++j)
            row.push_back({rep.M[i * 4 + j].real(), rep.M[i * 4 + j].imag()});
        mrows.push_back(row);
    }
    rec["M"] = mrows;
    lf::io::write_text_file(
        (fs::path(cfg.get("out", "out")) / "monodromy.json").string(), rec.dump(2) + "\n");
    std::cout << "det_gap = " << fmt17(rep.det_gap.real()) << " + "
              << fmt17(rep.det_gap.imag()) << "i\n";
    write_manifest(cfg, "monodromy", {"monodromy.json"});
    return kExitOk;
}

int cmd_scan_singular(const RunConfig& cfg) {
    const double y0 = cfg.get_double("y0", 1.0);
    Range range{0.1, 0.65, 551};
    if (cfg.has("xi0_range") && !cfg.get("xi0_range", "").empty())
        range = parse_range(cfg.get("xi0_range", ""));
    const int threads = cfg.get_int("threads", 1);
    std::vector<double> gaps(range.n);
    lf::numerics::parallel_for(range.n, threads, [&](std::size_t i) {
        const double xi0 =
            range.lo + (range.hi - range.lo) * double(i) / double(range.n - 1);
        gaps[i] = mono::det_gap_at(y0, xi0);
    });
    lf::io::CsvWriter csv(
        (fs::path(cfg.get("out", "out")) / "singular_scan.csv").string(),
        {"xi0", "det_gap_re", "det_gap_im"});
    for (std::size_t i = 0; i < range.n; ++i) {
        const double xi0 =
            range.lo + (range.hi - range.lo) * double(i) / double(range.n - 1);
        csv.row({xi0, gaps[i], 0.0});
    }
    csv.close();
    const double step = (range.hi - range.lo) / double(range.n - 1);
    const auto roots = mono::singular_scan(y0, range.lo, range.hi, step);
    json rec = json::array();
    for (const auto& r : roots) rec.push_back({{"xi0", r.xi0}, {"slope", r.slope}});
    lf::io::write_text_file((fs::path(cfg.get("out", "out")) / "singular_roots.json").string(),
                            rec.dump(2) + "\n");
    write_manifest(cfg, "scan-singular", {"singular_scan.csv", "singular_roots.json"});
    return kExitOk;
}

int cmd_cantor(const RunConfig& cfg) {
    const double y0 = cfg.get_double("y0", 1.0);
    Range range{0.12, 0.18, 2};
    if (cfg.has("xi0_range") && !cfg.get("xi0_range", "").empty())
        range = parse_range(cfg.get("xi0_range", ""));
    const auto scan = mono::cantor_measure(
        y0, cfg.get_double("eps", 0.1), cfg.get_double("delta", 0.3),
        cfg.get_double("tau", 1.5), range.lo, range.hi, cfg.get_int("jmax", 512), 0,
        4096, 2.0, cfg.get_double("c2", 0.0));
    json rec;
    rec["summary"] = {{"eps", scan.eps},
                      {"delta", scan.delta},
                      {"tau", scan.tau},
                      {"lambda", scan.lambda},
                      {"radius_factor", scan.radius_factor},
                      {"measure", scan.measure},
                      {"interval_count", scan.interval_count},
                      {"truncation_warning", scan.truncation_warning}};
    json iv = json::array();
    const std::size_t cap = 20000; // keep the record bounded
    for (std::size_t i = 0; i < scan.excluded.size() && i < cap; ++i) {
        const auto& e = scan.excluded[i];
        iv.push_back({{"l", e.l}, {"j", e.j}, {"k", e.k}, {"lo", e.lo}, {"hi", e.hi}});
    }
    rec["excluded"] = iv;
    lf::io::write_text_file((fs::path(cfg.get("out", "out")) / "cantor.json").string(),
                            rec.dump(2) + "\n");
    if (scan.truncation_warning)
        std::cerr << "warning: truncation tail exceeds 10% of the reported measure\n";
    std::cout << "excluded measure = " << fmt17(scan.measure) << "\n";
    write_manifest(cfg, "cantor", {"cantor.json"});
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg, bool skip_simulation) {
    lf::verify::SuiteOptions opt;
    opt.run_simulation = !skip_simulation;
    opt.threads = cfg.get_int("threads", 1);
    const auto results = lf::verify::run_acceptance(opt);
    const std::string report = lf::verify::format_report(results);
    std::cout << report;
    lf::io::write_text_file(
        (fs::path(cfg.get("out", "out")) / "verify_report.txt").string(), report);
    write_manifest(cfg, "verify", {"verify_report.txt"});
    for (const auto& r : results)
        if (!r.pass) return kExitAcceptance;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"leapfrogging vortex laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    Cli cli;
    app.add_option("--config", cli.config_path, "key=value configuration file");
    app.add_option("--y0", cli.y0, "pair height");
    app.add_option("--xi0", cli.xi0, "initial vertical gap");
    app.add_option("--xi0-range", cli.xi0_range, "lo:hi:n grid of xi0");
    app.add_option("--eps", cli.eps, "patch concentration scale");
    app.add_option("--grid", cli.grid, "NxM spectral grid");
    app.add_option("--tol", cli.tol, "integrator tolerance");
    app.add_option("--kmax", cli.kmax, "series truncation order");
    app.add_option("--jmax", cli.jmax, "spatial-mode truncation for cantor");
    app.add_option("--delta", cli.delta, "Diophantine exponent");
    app.add_option("--tau", cli.tau, "Diophantine power");
    app.add_option("--c2", cli.c2, "constant-coefficient correction");
    app.add_option("--out", cli.out_dir, "output directory");
    app.add_option("--threads", cli.threads, "worker pool size (default: cores)");
    app.add_option("--nodes", cli.nodes, "boundary nodes per patch");
    app.add_option("--snapshots", cli.snapshots, "snapshot count");
    app.add_option("--periods", cli.t_end_periods, "integration length in periods");
    app.add_flag("--plot-data", cli.plot_data, "emit gnuplot-ready columns");
    app.add_flag("--skip-simulation", cli.skip_simulation,
                 "verify: skip the long simulation criterion");

    for (const char* name : {"orbit", "period", "qtheta", "g0", "approx", "simulate",
                             "monodromy", "scan-singular", "cantor", "verify"})
        app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    }

    try {
        const RunConfig cfg = effective_config(cli, app);
        fs::create_directories(cfg.get("out", "out"));
        const std::string sub = app.get_subcommands().front()->get_name();
        if (sub == "orbit") return cmd_orbit(cfg);
        if (sub == "period") return cmd_period(cfg);
        if (sub == "qtheta") return cmd_qtheta(cfg);
        if (sub == "g0") return cmd_g0(cfg);
        if (sub == "approx") return cmd_approx(cfg);
        if (sub == "simulate") return cmd_simulate(cfg, cli.plot_data);
        if (sub == "monodromy") return cmd_monodromy(cfg);
        if (sub == "scan-singular") return cmd_scan_singular(cfg);
        if (sub == "cantor") return cmd_cantor(cfg);
        if (sub == "verify") return cmd_verify(cfg, cli.skip_simulation);
        std::cerr << "unknown subcommand\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << R"({"error":"validation","message":")" << e.what() << "\"}\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << R"({"error":"numerical","message":")" << e.what() << "\"}\n";
        return kExitNumerical;
    }
}
