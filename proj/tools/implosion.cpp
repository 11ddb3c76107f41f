// Command-line front end: one subcommand per computation, each writing its
// outputs and a manifest.json into --out.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "implosion/cfrac.hpp"
#include "implosion/circlemap.hpp"
#include "implosion/errors.hpp"
#include "implosion/fatou.hpp"
#include "implosion/hypgeo.hpp"
#include "implosion/kernels.hpp"
#include "implosion/lavaurs.hpp"
#include "implosion/raster.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace implosion;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitPrecision = 3;
constexpr int kExitUsage = 64;
constexpr const char* kVersion = "0.3.0";

struct Options {
    std::string pq = "1/2";
    std::string omega = "golden";
    std::string sigma;
    int resolution = 256;
    int maxiter = 10000;
    int depth = 8;
    std::string region = "-2,-2,2,2";
    std::string out = ".";
    std::uint64_t seed = 1;
    int threads = 0;

    std::string resolutions = "256,512";
    std::string w = "0.3,20";
    double epsilon = 0.5;
    int budget = 50;
    double tol = 1e-10;
    int levels = 10;
    int scale_levels = 18;
    int level_min = 2;
    int samples = 100;
    double K = 2.0;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_reals(const std::string& text, std::size_t expected, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("bad number in ") + what + ": '" + item + "'");
        }
    }
    if (expected && out.size() != expected)
        throw UsageError(std::string(what) + " expects " + std::to_string(expected) + " comma-separated values");
    return out;
}

std::pair<std::int64_t, std::int64_t> parse_pq(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) throw UsageError("--pq expects P/Q");
    try {
        return {std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1))};
    } catch (const std::exception&) {
        throw UsageError("--pq expects integers P/Q");
    }
}

cfrac::ContinuedFraction parse_omega(const std::string& text) {
    if (text == "golden") return cfrac::golden();
    if (text.rfind("cf:", 0) == 0) {
        std::vector<std::int64_t> q;
        for (double v : parse_reals(text.substr(3), 0, "--omega cf:"))
            q.push_back(static_cast<std::int64_t>(v));
        return cfrac::from_quotients(q);
    }
    const double x = parse_reals(text, 1, "--omega")[0];
    return cfrac::expand(x, 40);
}

raster::Region parse_region(const std::string& text) {
    const auto v = parse_reals(text, 4, "--region");
    return {v[0], v[1], v[2], v[3]};
}

struct Run {
    std::string name;
    Options opt;
    json manifest;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    fs::path out_dir() const {
        fs::create_directories(opt.out);
        return opt.out;
    }

    void write_text(const std::string& file, const std::string& text) const {
        std::ofstream os(out_dir() / file, std::ios::binary);
        os << text;
        if (!os) throw std::runtime_error("cannot write " + (out_dir() / file).string());
    }

    void finish() {
        manifest["subcommand"] = name;
        manifest["version"] = kVersion;
        manifest["seed"] = opt.seed;
        manifest["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_text("manifest.json", manifest.dump(2) + "\n");
    }
};

std::shared_ptr<const fatou::FatouAtlas> make_atlas(Run& run) {
    const auto [p, q] = parse_pq(run.opt.pq);
    run.manifest["pq"] = run.opt.pq;
    return std::make_shared<const fatou::FatouAtlas>(parabolic::ParabolicPolynomial(p, q));
}

lavaurs::LavaursSystem make_system(Run& run, int depth) {
    auto atlas = make_atlas(run);
    cplx sigma;
    if (!run.opt.sigma.empty()) {
        const auto v = parse_reals(run.opt.sigma, 2, "--sigma");
        sigma = {v[0], v[1]};
        run.manifest["sigma_source"] = "flag";
    } else {
        const auto cf = parse_omega(run.opt.omega);
        sigma = lavaurs::solve_sigma(atlas, cf.value, lavaurs::End::Upper);
        run.manifest["omega"] = run.opt.omega;
        run.manifest["omega_value"] = cf.value;
        run.manifest["sigma_source"] = "solved";
    }
    run.manifest["sigma"] = {sigma.real(), sigma.imag()};
    return {atlas, sigma, depth};
}

raster::RasterConfig make_config(Run& run) {
    raster::RasterConfig cfg;
    cfg.region = parse_region(run.opt.region);
    cfg.resolution = run.opt.resolution;
    cfg.maxiter = run.opt.maxiter;
    cfg.lavaurs_depth = run.opt.depth;
    cfg.threads = run.opt.threads;
    run.manifest["region"] = {cfg.region.re_min, cfg.region.im_min, cfg.region.re_max, cfg.region.im_max};
    run.manifest["maxiter"] = cfg.maxiter;
    run.manifest["depth"] = cfg.lavaurs_depth;
    run.manifest["isa"] = std::string(simd::isa_name(simd::detect_isa()));
    return cfg;
}

circlemap::CircleMapLift make_lift(Run& run) {
    const auto cf = parse_omega(run.opt.omega);
    run.manifest["omega"] = run.opt.omega;
    run.manifest["omega_value"] = cf.value;
    run.manifest["tol"] = run.opt.tol;
    auto lift = circlemap::tune_rotation(cf.value, run.opt.tol);
    run.manifest["t"] = lift.t();
    return lift;
}

json counts_json(const raster::LabelCounts& c) {
    return {{"escaped_p", c.escaped_p},
            {"escaped_lavaurs", c.escaped_lavaurs},
            {"undecided", c.undecided},
            {"depth_exhausted", c.depth_exhausted},
            {"numeric_failures", c.numeric_failures}};
}

int cmd_render(Run& run) {
    auto sys = make_system(run, run.opt.depth);
    auto cfg = make_config(run);
    run.manifest["resolution"] = cfg.resolution;
    const auto raster = raster::render(sys, cfg);
    raster::write_png(raster, run.out_dir() / "render.png");
    run.manifest["counts"] = counts_json(raster.counts);
    std::printf("render %dx%d: escaped_p %lld escaped_lavaurs %lld undecided %lld -> %s\n", cfg.resolution,
                cfg.resolution, static_cast<long long>(raster.counts.escaped_p),
                static_cast<long long>(raster.counts.escaped_lavaurs), static_cast<long long>(raster.counts.undecided),
                (run.out_dir() / "render.png").c_str());
    return 0;
}

int cmd_area_scan(Run& run) {
    auto sys = make_system(run, run.opt.depth);
    auto cfg = make_config(run);
    std::vector<int> res;
    for (double v : parse_reals(run.opt.resolutions, 0, "--resolutions")) res.push_back(static_cast<int>(v));
    run.manifest["resolutions"] = res;
    const auto report = raster::area_scan(sys, cfg, res);
    run.write_text("area.csv", raster::to_csv(report));

    std::ostringstream detail;
    detail.precision(12);
    detail << "resolution,depth_exhausted,numeric_failures,interior_proxy,boundary_cover\n";
    for (const auto& r : report.rows)
        detail << r.resolution << ',' << r.counts.depth_exhausted << ',' << r.counts.numeric_failures << ','
               << r.interior_proxy << ',' << r.boundary_cover << '\n';
    run.write_text("area_detail.csv", detail.str());
    std::cout << raster::to_csv(report);
    return 0;
}

int cmd_fatou_check(Run& run) {
    auto atlas = make_atlas(run);
    std::mt19937_64 rng(run.opt.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto& trap = atlas->trap();
    const auto& poly = atlas->poly();
    const int q = poly.period();

    std::ostringstream csv;
    csv.precision(6);
    csv << "kind,re,im,residual\n";
    double worst_abel = 0.0, worst_psi = 0.0;
    int abel_points = 0;
    for (int i = 0; i < run.opt.samples * 4 && abel_points < run.opt.samples; ++i) {
        // Points of the trap region w = c0 (1 + s) + i c0 t.
        const double c0 = trap.c0();
        const cplx w{c0 * (1.0 + u(rng)), c0 * (2.0 * u(rng) - 1.0)};
        const int k = static_cast<int>(u(rng) * q) % q;
        const cplx z = trap.attracting_direction(k) * std::pow(std::abs(trap.leading()) / w, 1.0 / q);
        try {
            const double r = std::abs(atlas->phi(poly.iterate_q(z)) - atlas->phi(z) - 1.0);
            worst_abel = std::max(worst_abel, r);
            csv << "abel," << z.real() << ',' << z.imag() << ',' << r << '\n';
            ++abel_points;
        } catch (const NotCertified&) {
        }
    }
    int psi_points = 0;
    for (int i = 0; i < run.opt.samples; ++i) {
        const cplx w{u(rng), 6.0 * u(rng) - 3.0};
        const cplx a = atlas->psi(w + 1.0);
        const cplx b = poly.iterate_q(atlas->psi(w));
        // Orbits past the bailout radius are escaping; the equation is not checked there.
        if (!(std::abs(a) < fatou::FatouAtlas::kPsiBailout && std::abs(b) < fatou::FatouAtlas::kPsiBailout)) continue;
        const double r = std::abs(a - b);
        worst_psi = std::max(worst_psi, r);
        ++psi_points;
        csv << "psi," << w.real() << ',' << w.imag() << ',' << r << '\n';
    }
    run.write_text("fatou_check.csv", csv.str());
    run.manifest["samples"] = run.opt.samples;
    run.manifest["abel_points"] = abel_points;
    run.manifest["abel_max_residual"] = worst_abel;
    run.manifest["psi_points"] = psi_points;
    run.manifest["psi_max_residual"] = worst_psi;
    std::printf("abel residual max %.3e over %d points; psi residual max %.3e over %d points\n", worst_abel,
                abel_points, worst_psi, psi_points);
    return worst_abel < 1e-8 && worst_psi < 1e-8 && abel_points == run.opt.samples ? 0 : kExitValidation;
}

int cmd_sigma_solve(Run& run) {
    auto sys = make_system(run, run.opt.depth);
    const auto up = lavaurs::end_translation(sys, lavaurs::End::Upper);
    const auto down = lavaurs::end_translation(sys, lavaurs::End::Lower);
    const cplx z0 = lavaurs::critical_value_phase(sys.atlas());
    const double product = std::abs(up.m * down.m);
    run.manifest["m_upper"] = {up.m.real(), up.m.imag()};
    run.manifest["m_lower"] = {down.m.real(), down.m.imag()};
    run.manifest["multiplier_product_modulus"] = product;
    run.manifest["z0_estimate"] = {z0.real(), z0.imag()};
    std::printf("sigma = %.12f %+.12fi\n", sys.sigma().real(), sys.sigma().imag());
    std::printf("m_upper = %.12f %+.12fi  (|m| = %.3e)\n", up.m.real(), up.m.imag(), std::abs(up.m));
    std::printf("m_lower = %.6e %+.6ei  (|m| = %.3e)\n", down.m.real(), down.m.imag(), std::abs(down.m));
    std::printf("|m_upper m_lower| = %.6e\n", product);
    return 0;
}

int cmd_horn_probe(Run& run) {
    auto sys = make_system(run, run.opt.depth);
    const auto v = parse_reals(run.opt.w, 2, "--w");
    const double hs = raster::siegel_height(sys);
    const auto probe = raster::horn_orbit_classify(sys, {v[0], v[1]}, run.opt.epsilon, run.opt.budget, hs);
    run.manifest["w"] = v;
    run.manifest["epsilon"] = run.opt.epsilon;
    run.manifest["budget"] = run.opt.budget;
    run.manifest["siegel_threshold"] = hs;
    run.manifest["class"] = raster::horn_class_name(probe.cls);
    run.manifest["steps"] = probe.steps;
    std::printf("%s (proxy) after %d steps; far visits %d; Siegel threshold %.2f\n", raster::horn_class_name(probe.cls),
                probe.steps, probe.far_visits, hs);
    return 0;
}

int cmd_circle_tune(Run& run) {
    const auto lift = make_lift(run);
    const auto rho = circlemap::rotation_number(lift, 50'000'000, run.opt.tol / 10.0);
    run.manifest["rho"] = rho.value;
    run.manifest["rho_error"] = rho.error;
    std::printf("t = %.17g\nrho = %.15f (+- %.1e)\n", lift.t(), rho.value, rho.error);
    return 0;
}

int cmd_partition_report(Run& run) {
    const auto lift = make_lift(run);
    const auto rep = circlemap::real_bounds_report(lift, run.opt.levels);
    run.write_text("bounds.csv", circlemap::to_csv(rep));
    run.manifest["levels"] = run.opt.levels;
    run.manifest["K"] = rep.K;
    run.manifest["K_prime"] = rep.K_prime;
    std::cout << circlemap::to_csv(rep);
    std::printf("K = %.6f  K' = %.6f\n", rep.K, rep.K_prime);
    return 0;
}

int cmd_scale_match(Run& run) {
    const auto lift = make_lift(run);
    const circlemap::PartitionLadder ladder(lift, run.opt.scale_levels);
    const auto rep = circlemap::real_bounds_report(ladder);
    // ell is log-uniform down to the largest interval of the top level, so a match always exists.
    const double ell_min = rep.levels.back().max_interval;
    std::mt19937_64 rng(run.opt.seed);
    std::uniform_real_distribution<double> ux(0.0, 1.0), ul(std::log(ell_min), 0.0);
    std::ostringstream csv;
    csv.precision(12);
    csv << "x,ell,level,length,ratio\n";
    int bad = 0;
    for (int i = 0; i < run.opt.samples; ++i) {
        const double x = ux(rng);
        const double ell = std::min(std::exp(ul(rng)), 1.0 - 1e-12);
        const auto sm = circlemap::scale_match(ladder, x, ell);
        if (!(sm.ratio >= 1.0 / rep.K_prime && sm.ratio <= rep.K_prime)) ++bad;
        csv << x << ',' << ell << ',' << sm.level << ',' << sm.length << ',' << sm.ratio << '\n';
    }
    run.write_text("scale_match.csv", csv.str());
    run.manifest["samples"] = run.opt.samples;
    run.manifest["levels"] = run.opt.scale_levels;
    run.manifest["ell_min"] = ell_min;
    run.manifest["K_prime"] = rep.K_prime;
    run.manifest["out_of_bounds"] = bad;
    std::printf("K' = %.6f; %d of %d samples outside [1/K', K']\n", rep.K_prime, bad, run.opt.samples);
    return bad == 0 ? 0 : kExitValidation;
}

int cmd_ball_sweep(Run& run) {
    const auto lift = make_lift(run);
    const circlemap::PartitionLadder ladder(lift, run.opt.levels);
    const auto rep = circlemap::real_bounds_report(ladder);
    hypgeo::ConeSearchOptions copt;
    copt.seed = run.opt.seed;
    const auto cone = hypgeo::cone_search(rep.K, copt);
    const double h1 = circlemap::triangle_height(lift);

    std::ostringstream csv;
    csv.precision(12);
    csv << "level,interval,m,length,center_re,center_im,radius,r_over_len,d_over_len,fallback,checks\n";
    int failed = 0;
    for (int n = run.opt.level_min; n <= run.opt.levels; ++n) {
        const auto& P = ladder.level(n);
        for (int i = 0; i < static_cast<int>(P.size()); ++i) {
            const auto b = circlemap::partition_ball(ladder, n, i, cone, h1);
            const bool ok = b.below_real && b.image_in_cone && b.lands_in_upper;
            failed += !ok;
            csv << n << ',' << i << ',' << b.m << ',' << b.interval_length << ',' << b.ball.center.real() << ','
                << b.ball.center.imag() << ',' << b.ball.radius << ',' << b.ball.radius / b.interval_length << ','
                << b.distance / b.interval_length << ',' << b.triangle_fallback << ',' << (ok ? "ok" : "fail") << '\n';
        }
    }
    run.write_text("balls.csv", csv.str());
    run.manifest["levels"] = {run.opt.level_min, run.opt.levels};
    run.manifest["K"] = rep.K;
    run.manifest["r0"] = cone.r0;
    run.manifest["M0"] = cone.M0;
    run.manifest["h1"] = h1;
    run.manifest["failed"] = failed;
    std::printf("%d balls failed their checks\n", failed);
    return failed == 0 ? 0 : kExitValidation;
}

int cmd_cone_search(Run& run) {
    hypgeo::ConeSearchOptions copt;
    copt.seed = run.opt.seed;
    const auto cc = hypgeo::cone_search(run.opt.K, copt);
    run.manifest["K"] = cc.K;
    run.manifest["r0"] = cc.r0;
    run.manifest["M0"] = cc.M0;
    run.manifest["depth"] = cc.depth;
    run.manifest["validated"] = cc.validated;
    std::printf("K = %g: r0 = %.6g, M0 = %.6g (validated on %d triples, seed %llu)\n", cc.K, cc.r0, cc.M0,
                cc.validated, static_cast<unsigned long long>(cc.seed));
    return 0;
}

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("--pq", o.pq, "rotation p/q of the parabolic multiplier")->capture_default_str();
    sub->add_option("--omega", o.omega, "golden | <decimal> | cf:a1,a2,...")->capture_default_str();
    sub->add_option("--sigma", o.sigma, "phase re,im (overrides the solved value)");
    sub->add_option("--resolution", o.resolution, "pixels per side")->capture_default_str();
    sub->add_option("--maxiter", o.maxiter, "iterations per escape test")->capture_default_str();
    sub->add_option("--depth", o.depth, "Lavaurs depth")->capture_default_str();
    sub->add_option("--region", o.region, "x0,y0,x1,y1")->capture_default_str();
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
    sub->add_option("--threads", o.threads, "worker threads (0: all cores)")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parabolic implosion toolkit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Options opt;

    struct Entry {
        const char* name;
        const char* help;
        int (*fn)(Run&);
    };
    const Entry entries[] = {
        {"render", "classify pixels and write render.png", cmd_render},
        {"area-scan", "cover areas across resolutions (area.csv)", cmd_area_scan},
        {"fatou-check", "Abel and repelling-equation residuals", cmd_fatou_check},
        {"sigma-solve", "phase for a virtual rotation number; multipliers", cmd_sigma_solve},
        {"horn-probe", "classify one horn-map orbit", cmd_horn_probe},
        {"circle-tune", "tune the Blaschke circle map to omega", cmd_circle_tune},
        {"partition-report", "real bounds of dynamical partitions (bounds.csv)", cmd_partition_report},
        {"scale-match", "random scale matches against K'", cmd_scale_match},
        {"ball-sweep", "partition balls over a range of levels (balls.csv)", cmd_ball_sweep},
        {"cone-search", "constants of the cone lemma for K", cmd_cone_search},
    };
    std::vector<std::pair<CLI::App*, const Entry*>> subs;
    for (const auto& e : entries) {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, opt);
        subs.emplace_back(sub, &e);
    }
    app.get_subcommand("area-scan")->add_option("--resolutions", opt.resolutions, "comma-separated, increasing")
        ->capture_default_str();
    auto* horn = app.get_subcommand("horn-probe");
    horn->add_option("--w", opt.w, "start point re,im")->capture_default_str();
    horn->add_option("--epsilon", opt.epsilon, "far-region depth")->capture_default_str();
    horn->add_option("--budget", opt.budget, "horn-map iterations")->capture_default_str();
    for (const char* name : {"circle-tune", "partition-report", "scale-match", "ball-sweep"})
        app.get_subcommand(name)->add_option("--tol", opt.tol, "rotation-number tolerance")->capture_default_str();
    for (const char* name : {"partition-report", "ball-sweep"})
        app.get_subcommand(name)->add_option("--levels", opt.levels, "top partition level")->capture_default_str();
    app.get_subcommand("scale-match")->add_option("--levels", opt.scale_levels, "top partition level")
        ->capture_default_str();
    app.get_subcommand("ball-sweep")->add_option("--level-min", opt.level_min, "first level")->capture_default_str();
    for (const char* name : {"fatou-check", "scale-match"})
        app.get_subcommand(name)->add_option("--samples", opt.samples, "sample count")->capture_default_str();
    app.get_subcommand("cone-search")->add_option("--K", opt.K, "commensurability constant")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return kExitUsage;
    }

    for (auto [sub, entry] : subs) {
        if (!sub->parsed()) continue;
        Run run{entry->name, opt, json::object()};
        try {
            const int code = entry->fn(run);
            run.finish();
            return code;
        } catch (const UsageError& e) {
            std::cerr << "usage error: " << e.what() << "\n" << sub->help();
            return kExitUsage;
        } catch (const DomainError& e) {
            std::cerr << "invalid argument: " << e.what() << "\n";
            return kExitUsage;
        } catch (const ValidationError& e) {
            std::cerr << "validation failure: " << e.what() << "\n";
            return kExitValidation;
        } catch (const PrecisionError& e) {
            std::cerr << "precision failure: " << e.what() << "\n";
            return kExitPrecision;
        } catch (const NotCertified& e) {
            std::cerr << "not certified: " << e.what() << "\n";
            return kExitPrecision;
        } catch (const ResourceError& e) {
            std::cerr << "resource limit: " << e.what() << "\n";
            return kExitPrecision;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    return kExitUsage;
}
