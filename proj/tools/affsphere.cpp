#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

#include "affsphere/affine_sphere.hpp"
#include "affsphere/fixtures.hpp"
#include "affsphere/io.hpp"
#include "affsphere/singular.hpp"
#include "affsphere/symmetry.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace affsphere;

namespace {

struct Options {
    std::string fixture;
    std::string alpha_file, beta_file;
    std::string base = "0,0";
    double gbase = 0.0;
    std::string window;
    std::string res = "80x80";
    std::string out_dir = ".";
    std::string formats;
    std::string grid_file;
    std::string config_file;
    double quad_tol = 1e-10;
    double trace_tol = 1e-9;
    double lambda_tol = 1e-4;
    double step = 1e-3;
    double extract_tol = 1e-6;
    int threads = 0;
    bool serial = false;
};

std::vector<double> numbers_in(std::string text) {
    // tolerate bracketed syntaxes like [a,b]^2 and [a,b]x[c,d]
    const size_t caret = text.find("^2");
    bool squared = caret != std::string::npos;
    if (squared) text.erase(caret, 2);
    for (char& c : text)
        if (c == '[' || c == ']' || c == 'x' || c == ';') c = ',';
    std::vector<double> vals;
    const char* p = text.c_str();
    char* end = nullptr;
    while (*p) {
        const double v = std::strtod(p, &end);
        if (end == p) {
            ++p;
            continue;
        }
        vals.push_back(v);
        p = end;
    }
    if (squared && vals.size() == 2) {
        vals.push_back(vals[0]);
        vals.push_back(vals[1]);
    }
    return vals;
}

Window parse_window(const std::string& text) {
    const std::vector<double> v = numbers_in(text);
    if (v.size() == 2) return {v[0], v[1], v[0], v[1]};
    if (v.size() == 4) return {v[0], v[1], v[2], v[3]};
    fail(ErrorKind::Config, "cannot parse window '" + text + "'");
}

std::pair<int, int> parse_res(const std::string& text) {
    int a = 0, b = 0;
    if (std::sscanf(text.c_str(), "%dx%d", &a, &b) != 2 || a < 2 || b < 2)
        fail(ErrorKind::Config, "cannot parse resolution '" + text + "' (want NxM)");
    return {a, b};
}

std::set<std::string> parse_formats(const std::string& text,
                                    const std::set<std::string>& allowed) {
    if (text.empty()) return allowed;
    std::set<std::string> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!allowed.count(tok))
            fail(ErrorKind::Config, "unknown format '" + tok + "'");
        out.insert(tok);
    }
    return out;
}

struct Job {
    CurvePair pair;
    std::optional<Fixture> fx;
    Window window;
    int ns = 80, nt = 80;
    std::set<std::string> formats;
    fs::path out;
    Options opt;
    Exec exec = Exec::Parallel;
};

void apply_config_file(CLI::App& app, Options& opt) {
    if (opt.config_file.empty()) return;
    std::ifstream in(opt.config_file);
    if (!in) fail(ErrorKind::Config, "cannot open config '" + opt.config_file + "'");
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorKind::Config, std::string("invalid config JSON: ") + e.what());
    }
    // config fills only options the command line left untouched
    auto maybe = [&](const char* flag, auto& slot) {
        const CLI::Option* o = app.get_option_no_throw(flag);
        const std::string key = std::string(flag).substr(2);
        if (j.contains(key) && (!o || o->count() == 0)) slot = j[key];
    };
    maybe("--fixture", opt.fixture);
    maybe("--alpha", opt.alpha_file);
    maybe("--beta", opt.beta_file);
    maybe("--base", opt.base);
    maybe("--gbase", opt.gbase);
    maybe("--window", opt.window);
    maybe("--res", opt.res);
    maybe("--out", opt.out_dir);
    maybe("--formats", opt.formats);
    maybe("--grid", opt.grid_file);
    maybe("--quad-tol", opt.quad_tol);
    maybe("--trace-tol", opt.trace_tol);
    maybe("--lambda-tol", opt.lambda_tol);
    maybe("--step", opt.step);
    maybe("--extract-tol", opt.extract_tol);
    maybe("--threads", opt.threads);
}

Job make_job(CLI::App& cmd, Options& opt, Window fallback_window(const Fixture&)) {
    apply_config_file(cmd, opt);
    if (opt.quad_tol <= 0 || opt.trace_tol <= 0 || opt.lambda_tol <= 0 || opt.step <= 0)
        fail(ErrorKind::Config, "tolerances must be positive");

    Job job;
    job.out = fs::path(opt.out_dir);
    job.opt = opt;
    if (!opt.fixture.empty()) {
        if (!opt.alpha_file.empty() || !opt.beta_file.empty())
            fail(ErrorKind::Config, "give either --fixture or --alpha/--beta, not both");
        const Fixture& fx = fixture(opt.fixture);
        job.pair = fx.pair;
        job.fx = fx;
        job.window = opt.window.empty() ? fallback_window(fx) : parse_window(opt.window);
    } else if (!opt.alpha_file.empty() && !opt.beta_file.empty()) {
        PlanarCurve alpha = load_curve_json(opt.alpha_file);
        PlanarCurve beta = load_curve_json(opt.beta_file);
        const std::vector<double> b = numbers_in(opt.base);
        if (b.size() != 2) fail(ErrorKind::Config, "cannot parse --base (want s0,t0)");
        job.pair = make_pair(std::move(alpha), std::move(beta), b[0], b[1], opt.gbase);
        if (opt.window.empty())
            fail(ErrorKind::Config, "--window is required for file-defined curves");
        job.window = parse_window(opt.window);
    } else {
        fail(ErrorKind::Config, "a curve pair is required: --fixture or --alpha/--beta");
    }
    std::tie(job.ns, job.nt) = parse_res(opt.res);
    job.exec = opt.serial ? Exec::Serial : Exec::Parallel;
    fs::create_directories(job.out);
    return job;
}

int cmd_surface(CLI::App& cmd, Options& opt) {
    Job job = make_job(cmd, opt, [](const Fixture& fx) { return fx.default_window; });
    job.formats = parse_formats(opt.formats, {"obj", "csv", "json", "svg"});
    const GridSpec spec{job.window, job.ns, job.nt, opt.quad_tol};
    const SurfaceGrid grid = evaluate_grid(job.pair, spec, job.exec);

    if (job.formats.count("obj"))
        write_obj(grid, (job.out / "surface.obj").string(),
                  (job.out / "surface_singular_vertices.json").string());
    if (job.formats.count("csv")) {
        write_grid_csv(grid, (job.out / "grid.csv").string());
        write_samples_csv(grid, (job.out / "samples.csv").string());
    }
    if (job.formats.count("json"))
        write_grid_json(grid, (job.out / "grid.json").string());

    // structural identity check over the grid
    double max_l = 0.0, max_n = 0.0, max_xi = 0.0;
    for (const auto& sm : grid.samples) {
        const ImmersionPoint ip = immerse_with_g(job.pair, sm.s, sm.t, sm.g);
        max_l = std::max(max_l, std::abs(ip.L));
        max_n = std::max(max_n, std::abs(ip.N));
        if (std::abs(ip.omega) > 1e-6)
            max_xi = std::max(max_xi, (ip.xi - Vec3{0.0, 0.0, 1.0}).norm());
    }
    json validation;
    validation["max_abs_L"] = max_l;
    validation["max_abs_N"] = max_n;
    validation["max_xi_deviation"] = max_xi;
    validation["vertices"] = grid.samples.size();
    std::ofstream vout(job.out / "validation.json");
    vout << validation.dump(2) << '\n';
    std::cout << "surface: " << grid.samples.size() << " vertices; max|L|=" << max_l
              << " max|N|=" << max_n << " max|xi-(0,0,1)|=" << max_xi << '\n';
    return 0;
}

int cmd_singular(CLI::App& cmd, Options& opt) {
    Job job = make_job(cmd, opt, [](const Fixture& fx) { return fx.default_window; });
    job.formats = parse_formats(opt.formats, {"json", "svg", "csv"});
    const SingularSetResult result = trace_singular_set(
        job.pair, job.window, opt.step, opt.trace_tol, opt.lambda_tol, job.exec);

    if (job.formats.count("json"))
        write_singular_json(result, (job.out / "singular.json").string());
    if (job.formats.count("csv"))
        write_evolute_csv(result, (job.out / "evolute.csv").string());
    if (job.formats.count("svg"))
        write_evolute_svg(job.pair, result, (job.out / "evolute.svg").string());

    // summary table
    size_t counts[4] = {0, 0, 0, 0};
    std::vector<Vec2> tails;
    for (const auto& branch : result.branches)
        for (const auto& p : branch.points) {
            ++counts[static_cast<int>(p.kind)];
            if (p.kind == SingularKind::Swallowtail) tails.push_back({p.s, p.t});
        }
    std::printf("branches: %zu  (degenerate seeds: %d%s)\n", result.branches.size(),
                result.degenerate_seeds,
                result.degenerate_field ? "; field degenerate" : "");
    std::printf("%-14s %8zu\n%-14s %8zu\n%-14s %8zu\n%-14s %8zu\n", "CuspidalEdge",
                counts[0], "Swallowtail", counts[1], "Degenerate", counts[2],
                "Unclassified", counts[3]);
    for (const Vec2& z : tails)
        std::printf("swallowtail at (s,t) = (%.10g, %.10g)\n", z.x, z.y);
    if (result.classifier_disagreements > 0)
        std::printf("classifier cross-check disagreements: %d\n",
                    result.classifier_disagreements);
    return 0;
}

int cmd_symmetry(CLI::App& cmd, Options& opt) {
    Job job = make_job(cmd, opt, [](const Fixture& fx) { return fx.symmetry_window; });
    job.formats = parse_formats(opt.formats, {"json", "svg", "csv"});
    AassOptions aopts;
    aopts.window = job.window;
    aopts.step = opt.step;
    aopts.quad_tol = std::min(opt.quad_tol, 1e-12);
    const AassResult aass = aass_solve(job.pair, aopts, job.exec);
    const AessResult aess =
        local_symmetry_points(job.pair, job.window, opt.trace_tol, opt.step, job.exec);

    if (job.formats.count("json"))
        write_symmetry_json(aass, aess, (job.out / "symmetry.json").string());
    if (job.formats.count("csv"))
        write_symmetry_csv(aass, aess, (job.out / "symmetry.csv").string());
    if (job.formats.count("svg")) {
        const SingularSetResult singular = trace_singular_set(
            job.pair, job.window, opt.step, opt.trace_tol, opt.lambda_tol, job.exec);
        write_overlay_svg(job.pair, singular, aass, aess,
                          (job.out / "overlay.svg").string());
    }
    size_t aass_pts = 0, aess_pts = 0;
    for (const auto& b : aass.branches) aass_pts += b.size();
    for (const auto& b : aess.branches) aess_pts += b.size();
    std::printf("AASS: %zu branches, %zu solutions%s\n", aass.branches.size(), aass_pts,
                aass.stalled ? " (continuation stalled somewhere)" : "");
    std::printf("AESS: %zu branches, %zu points%s\n", aess.branches.size(), aess_pts,
                aess.degenerate_e ? " (degenerate: determinant vanishes everywhere)"
                                  : "");
    return 0;
}

int cmd_roundtrip(CLI::App& cmd, Options& opt) {
    json report;
    GradientGrid grid;
    std::optional<Job> job;
    if (!opt.grid_file.empty()) {
        apply_config_file(cmd, opt);
        fs::create_directories(opt.out_dir);
        const LoadedGrid loaded = fs::path(opt.grid_file).extension() == ".json"
                                      ? load_grid_json(opt.grid_file)
                                      : load_grid_csv(opt.grid_file);
        GradientGrid fd = GradientGrid::from_values(loaded.s_values, loaded.t_values,
                                                    loaded.x, loaded.g);
        if (loaded.has_n) {
            // consistency between the stored gradient and the differenced one,
            // judged where the chart is comfortably away from its fold
            double max_det = 0.0;
            for (double d : fd.chart_det) max_det = std::max(max_det, std::abs(d));
            double worst = 0.0, scale = 0.0;
            for (size_t k = 0; k < fd.n.size(); ++k) {
                if (!fd.n[k].finite() || std::abs(fd.chart_det[k]) < 0.25 * max_det)
                    continue;
                worst = std::max(worst, (fd.n[k] - loaded.n[k]).norm());
                scale = std::max(scale, loaded.n[k].norm());
            }
            report["gradient_consistency"] = worst;
            if (worst > 1e-2 * std::max(1.0, scale))
                fail(ErrorKind::NotAsymptotic,
                     "stored gradient disagrees with differenced g by " +
                         std::to_string(worst));
            fd.n = loaded.n;
        } else {
            // differenced gradients carry O(h^2) noise near the fold
            opt.extract_tol = std::max(opt.extract_tol, 1e-2);
        }
        grid = std::move(fd);
    } else {
        job = make_job(cmd, opt, [](const Fixture& fx) { return fx.default_window; });
        const GridSpec spec{job->window, job->ns, job->nt, opt.quad_tol};
        grid = GradientGrid::from_surface(evaluate_grid(job->pair, spec, job->exec));
    }
    const ExtractionResult ex = extract_curves(grid, opt.extract_tol);
    report["cross_variation"] = ex.cross_variation;
    report["roles_swapped"] = ex.roles_swapped;

    const fs::path out(opt.out_dir);
    fs::create_directories(out);
    auto dump_curve = [](const PlanarCurve& c, const std::vector<double>& params,
                         const std::string& path) {
        json j;
        j["backend"] = "samples";
        json samples = json::array();
        for (double u : params) {
            const Vec2 p = c.point(u);
            samples.push_back(json::array({u, p.x, p.y}));
        }
        j["samples"] = std::move(samples);
        std::ofstream o(path);
        o << j.dump(2) << '\n';
    };
    dump_curve(ex.alpha, grid.s_values, (out / "alpha_recovered.json").string());
    dump_curve(ex.beta, grid.t_values, (out / "beta_recovered.json").string());

    if (job && job->fx) {
        double dev = 0.0;
        for (double s : grid.s_values)
            dev = std::max(dev, (ex.alpha.point(s) - job->pair.alpha.point(s)).norm());
        for (double t : grid.t_values)
            dev = std::max(dev, (ex.beta.point(t) - job->pair.beta.point(t)).norm());
        report["max_deviation_vs_original"] = dev;
    }
    std::ofstream rout(out / "roundtrip.json");
    rout << report.dump(2) << '\n';
    std::cout << report.dump(2) << '\n';
    return 0;
}

int cmd_selftest(Options& opt) {
    std::vector<std::string> names =
        opt.fixture.empty() ? fixture_names() : std::vector<std::string>{opt.fixture};
    bool all_ok = true;
    for (const std::string& name : names) {
        const Fixture& fx = fixture(name);
        std::printf("== %s ==\n", name.c_str());
        for (const CheckResult& c : run_fixture_checks(fx)) {
            all_ok = all_ok && c.passed;
            std::printf("[%s] %-36s %12.5g <= %-10.3g %s\n",
                        c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value,
                        c.threshold, c.detail.c_str());
        }
    }
    return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"improper indefinite affine spheres from pairs of planar curves"};
    app.require_subcommand(1);

    Options opt;
    if (const char* env = std::getenv("AFFSPHERE_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--fixture", opt.fixture, "built-in curve pair");
        cmd->add_option("--alpha", opt.alpha_file, "alpha curve JSON file");
        cmd->add_option("--beta", opt.beta_file, "beta curve JSON file");
        cmd->add_option("--base", opt.base, "base parameters s0,t0");
        cmd->add_option("--gbase", opt.gbase, "g at the base");
        cmd->add_option("--window", opt.window, "parameter window a,b[,c,d]");
        cmd->add_option("--res", opt.res, "grid resolution NxM");
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--formats", opt.formats, "subset of obj,svg,csv,json");
        cmd->add_option("--quad-tol", opt.quad_tol, "quadrature tolerance");
        cmd->add_option("--trace-tol", opt.trace_tol, "zero-set tolerance");
        cmd->add_option("--lambda-tol", opt.lambda_tol, "swallowtail band half-width");
        cmd->add_option("--step", opt.step, "trace / continuation step");
        cmd->add_option("--extract-tol", opt.extract_tol, "cross-variation tolerance");
        cmd->add_option("--threads", opt.threads, "cap worker threads");
        cmd->add_flag("--serial", opt.serial, "run kernels serially");
        cmd->add_option("--config", opt.config_file, "JSON config file");
        return cmd;
    };

    CLI::App* surface = add_common(app.add_subcommand("surface", "sample the surface"));
    CLI::App* singular =
        add_common(app.add_subcommand("singular", "trace and classify the singular set"));
    CLI::App* symmetry =
        add_common(app.add_subcommand("symmetry", "AASS and AESS reports"));
    CLI::App* roundtrip =
        add_common(app.add_subcommand("roundtrip", "recover the curve pair"));
    roundtrip->add_option("--grid", opt.grid_file, "surface grid file (csv or json)");
    CLI::App* selftest =
        app.add_subcommand("selftest", "run the built-in expectation suite");
    selftest->add_option("--fixture", opt.fixture, "restrict to one fixture");

    try {
        app.parse(argc, argv);
        if (opt.threads > 0) omp_set_num_threads(opt.threads);
        if (surface->parsed()) return cmd_surface(*surface, opt);
        if (singular->parsed()) return cmd_singular(*singular, opt);
        if (symmetry->parsed()) return cmd_symmetry(*symmetry, opt);
        if (roundtrip->parsed()) return cmd_roundtrip(*roundtrip, opt);
        if (selftest->parsed()) return cmd_selftest(opt);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help text
        std::cerr << "{\"error\": \"ConfigError\", \"message\": \""
                  << std::string(e.what()) << "\"}\n";
        return 2;
    } catch (const Error& e) {
        json err;
        err["error"] = error_kind_name(e.kind());
        err["message"] = e.what();
        std::cerr << err.dump() << '\n';
        return e.kind() == ErrorKind::Config ? 2 : 3;
    } catch (const std::exception& e) {
        json err;
        err["error"] = "InternalError";
        err["message"] = e.what();
        std::cerr << err.dump() << '\n';
        return 3;
    }
    return 0;
}
