#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "fixtures.hpp"
#include "implosion/errors.hpp"
#include "implosion/raster.hpp"

using namespace implosion;
using raster::LabelKind;

namespace {

raster::RasterConfig small_config(int resolution, int depth = 8) {
    raster::RasterConfig cfg;
    cfg.resolution = resolution;
    cfg.lavaurs_depth = depth;
    cfg.maxiter = 4000;
    return cfg;
}

}  // namespace

TEST_CASE("classify_point examples") {
    const auto& sys = fixtures::golden_system();
    const auto cfg = small_config(16);
    const auto far = raster::classify_point(sys, cfg, cplx(3.0, 3.0));
    CHECK(far.kind == LabelKind::EscapedP);
    CHECK(far.k == 0);
    CHECK(far.n == 0);
    CHECK(raster::classify_point(sys, cfg, 0.0).kind == LabelKind::Undecided);

    // A trap point whose g-image escapes.
    std::mt19937_64 rng(41);
    bool found = false;
    for (int i = 0; i < 400 && !found; ++i) {
        const cplx z = fixtures::trap_point(sys.atlas(), rng);
        const auto label = raster::classify_point(sys, cfg, z);
        if (label.kind == LabelKind::EscapedLavaurs && label.k == 1) {
            found = true;
            const cplx g = sys.lavaurs_map(z);
            const auto r = parabolic::escape_test(sys.atlas().poly(), g, cfg.maxiter, cfg.escape_radius);
            CHECK(r.status == parabolic::EscapeStatus::Escaped);
        }
    }
    CHECK(found);
}

TEST_CASE("config validation") {
    auto cfg = small_config(8);
    CHECK_THROWS_AS(cfg.validate(), DomainError);
    cfg = small_config(16);
    cfg.escape_radius = 2.0;
    CHECK_THROWS_AS(cfg.validate(), DomainError);
}

TEST_CASE("render counts and corner pixel") {
    const auto& sys = fixtures::golden_system();
    auto cfg = small_config(16);
    const auto r16 = raster::render(sys, cfg);
    CHECK(r16.counts.total() == 256);
    cfg.resolution = 32;
    CHECK(raster::render(sys, cfg).counts.total() == 4 * 256);

    auto corner = small_config(16);
    corner.region = {-3.2, -3.2, 3.2, 3.2};
    const auto rc = raster::render(sys, corner);
    CHECK(raster::pixel_center(corner, 0, 15) == cplx(3.0, 3.0));
    CHECK(rc.at(0, 15).kind == LabelKind::EscapedP);
    CHECK(rc.at(0, 15).n == 0);
}

TEST_CASE("render is independent of threads and instruction set") {
    const auto& sys = fixtures::golden_system();
    auto cfg = small_config(64);
    cfg.threads = 1;
    const auto a = raster::render(sys, cfg, simd::Isa::Scalar);
    cfg.threads = 4;
    const auto b = raster::render(sys, cfg, simd::detect_isa());
    CHECK(a.labels == b.labels);
    for (int row = 0; row < 64; row += 7)
        for (int col = 0; col < 64; col += 5)
            CHECK(a.at(row, col) == raster::classify_point(sys, cfg, raster::pixel_center(cfg, row, col)));
}

TEST_CASE("property: deeper runs keep shallow escapes") {
    const auto& sys = fixtures::golden_system();
    const auto deep = raster::render(sys, small_config(64, 8));
    for (int d : {1, 3, 5}) {
        const auto shallow = raster::render(sys, small_config(64, d));
        int compared = 0;
        for (std::size_t i = 0; i < deep.labels.size(); ++i) {
            const auto& l = deep.labels[i];
            if (l.kind == LabelKind::Undecided || l.k > d) continue;
            CHECK(shallow.labels[i] == l);
            ++compared;
        }
        CHECK(compared > 0);
    }
}

TEST_CASE("property: labels are invariant under P^q") {
    const auto& sys = fixtures::golden_system();
    const auto& P = sys.atlas().poly();
    auto cfg = small_config(16);
    cfg.maxiter = 20000;
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    int tested = 0;
    for (int i = 0; i < 2000 && tested < 100; ++i) {
        const cplx z{u(rng), u(rng)};
        if (!parabolic::petal_certificate(P, sys.atlas().trap(), z, 20000)) continue;
        const auto a = raster::classify_point(sys, cfg, z);
        const auto b = raster::classify_point(sys, cfg, P.iterate_q(z));
        if (a.reason == raster::UndecidedReason::Boundary || b.reason == raster::UndecidedReason::Boundary) continue;
        CHECK(a.kind == b.kind);
        ++tested;
    }
    CHECK(tested >= 50);
}

TEST_CASE("property: coarsened fine cover stays inside the coarse cover") {
    // The excess comes from a boundary layer of width about one pixel, so its
    // share falls like 1/N; the 2% bound is reached from N = 512 on.
    const auto& sys = fixtures::golden_system();
    double prev = 1.0;
    for (int n : {64, 512}) {
        auto cfg = small_config(n);
        cfg.maxiter = 10000;
        const auto coarse = raster::render(sys, cfg);
        cfg.resolution = 2 * n;
        const auto fine = raster::render(sys, cfg);
        const double excess = static_cast<double>(raster::pooled_excess(fine, coarse)) / (n * n);
        CHECK(excess < prev);
        prev = excess;
    }
    CHECK(prev <= 0.02);
}

TEST_CASE("area scan") {
    const auto& sys = fixtures::golden_system();
    const auto report = raster::area_scan(sys, small_config(16), {32, 64});
    REQUIRE(report.rows.size() == 2);
    for (const auto& row : report.rows) {
        CHECK(row.counts.total() == static_cast<std::int64_t>(row.resolution) * row.resolution);
        CHECK(row.cover_area >= 0.0);
        CHECK(row.cover_area == doctest::Approx(row.interior_proxy + row.boundary_cover));
    }
    const auto csv = raster::to_csv(report);
    CHECK(csv.rfind(std::string(raster::kAreaCsvHeader) + "\n", 0) == 0);
    CHECK_THROWS_AS(raster::area_scan(sys, small_config(16), {64, 32}), DomainError);
}

TEST_CASE("depth zero covers the filled Julia set") {
    const auto& sys = fixtures::golden_system();
    const auto r = raster::render(sys, small_config(64, 0));
    CHECK(r.counts.escaped_lavaurs == 0);
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        const auto& l = r.labels[i];
        if (l.kind != LabelKind::Undecided) continue;
        const cplx z = raster::pixel_center(r.config, static_cast<int>(i) / 64, static_cast<int>(i) % 64);
        CHECK(parabolic::escape_test(sys.atlas().poly(), z, 4000).status == parabolic::EscapeStatus::Bounded);
    }
}

TEST_CASE("image output") {
    const auto& sys = fixtures::golden_system();
    const auto r = raster::render(sys, small_config(16));
    const auto rgb = raster::to_rgb(r);
    CHECK(rgb.size() == 16u * 16u * 3u);
    // Undecided pixels are black.
    for (std::size_t i = 0; i < r.labels.size(); ++i)
        if (r.labels[i].kind == LabelKind::Undecided) CHECK(rgb[3 * i] + rgb[3 * i + 1] + rgb[3 * i + 2] == 0);

    const auto path = std::filesystem::temp_directory_path() / "implosion_test_render.png";
    raster::write_png(r, path);
    std::ifstream in(path, std::ios::binary);
    char sig[8] = {};
    in.read(sig, 8);
    CHECK(std::string(sig + 1, 3) == "PNG");
    std::filesystem::remove(path);
}

TEST_CASE("horn orbit classes") {
    const auto& sys = fixtures::golden_system();
    const double H = raster::siegel_height(sys);
    CHECK(H > 0.0);
    CHECK(raster::horn_orbit_classify(sys, {0.3, 20.0}, 0.5, 50, H).cls == raster::HornClass::UpperTrapped);
    CHECK(raster::horn_orbit_classify(sys, {0.3, 20.0}, 0.5, 0, H).cls == raster::HornClass::Undecided);

    const cplx w{0.3, 0.8};
    CHECK_THROWS_AS(sys.horn_map(w), NotCertified);
    CHECK(parabolic::escape_test(sys.atlas().poly(), sys.atlas().psi(w), 10000).status ==
          parabolic::EscapeStatus::Escaped);
    CHECK(raster::horn_orbit_classify(sys, w, 0.5, 50, H).cls == raster::HornClass::Escapes);
}
