#include "implosion/raster.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "implosion/errors.hpp"

namespace implosion::raster {

namespace {

constexpr std::size_t kChunk = 2048;

simd::OrbitParams stage_params(const lavaurs::LavaursSystem& sys, const RasterConfig& cfg) {
    return sys.atlas().trap().orbit_params(sys.atlas().poly(), cfg.maxiter, cfg.escape_radius);
}

bool trap_step_ok(const fatou::FatouAtlas& atlas, cplx zt) {
    const auto& trap = atlas.trap();
    const cplx next = atlas.poly().iterate_q(zt);
    return trap.w(next).real() - trap.w(zt).real() >= 0.5 && trap.petal_of(next) == trap.petal_of(zt);
}

// g_sigma(z) from the trapped iterate zt = P^n(z): phi(z) = phi(zt) - n/q.
cplx lavaurs_from_iterate(const lavaurs::LavaursSystem& sys, cplx zt, int n) {
    const auto& atlas = sys.atlas();
    const double shift = static_cast<double>(n) / atlas.poly().period();
    return atlas.psi(atlas.phi(zt) - shift + sys.sigma());
}

PixelLabel undecided(UndecidedReason why) {
    PixelLabel l;
    l.kind = LabelKind::Undecided;
    l.reason = why;
    return l;
}

PixelLabel escaped(int k, int n) {
    PixelLabel l;
    l.kind = k == 0 ? LabelKind::EscapedP : LabelKind::EscapedLavaurs;
    l.k = k;
    l.n = n;
    return l;
}

// Outcome of one stage for a point: either a final label or the next point.
struct StageResult {
    bool final = false;
    PixelLabel label;
    cplx next{};
};

StageResult finish_stage(const lavaurs::LavaursSystem& sys, const RasterConfig& cfg, int k,
                         const simd::OrbitPoint& r) {
    StageResult out;
    out.final = true;
    switch (r.status) {
        case simd::OrbitStatus::Escaped:
            out.label = escaped(k, r.n);
            return out;
        case simd::OrbitStatus::Bounded:
            out.label = undecided(UndecidedReason::Boundary);
            return out;
        case simd::OrbitStatus::Trapped:
            break;
    }
    const cplx zt{r.re, r.im};
    if (!trap_step_ok(sys.atlas(), zt)) {
        out.label = undecided(UndecidedReason::Boundary);
        return out;
    }
    if (k == cfg.lavaurs_depth) {
        out.label = undecided(UndecidedReason::DepthExhausted);
        return out;
    }
    try {
        const cplx g = lavaurs_from_iterate(sys, zt, r.n);
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) {
            out.label = undecided(UndecidedReason::Numeric);
            return out;
        }
        out.final = false;
        out.next = g;
    } catch (const NotCertified&) {
        out.label = undecided(UndecidedReason::Numeric);
    } catch (const PrecisionError&) {
        out.label = undecided(UndecidedReason::Numeric);
    }
    return out;
}

int thread_count(const RasterConfig& cfg) {
    if (cfg.threads > 0) return cfg.threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

template <class Fn>
void parallel_chunks(std::size_t n, int threads, Fn&& fn) {
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    if (threads <= 1 || chunks <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) fn(c * kChunk, std::min(n, (c + 1) * kChunk));
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < chunks; c = next++) fn(c * kChunk, std::min(n, (c + 1) * kChunk));
    };
    std::vector<std::jthread> pool;
    const int extra = static_cast<int>(std::min<std::size_t>(chunks, threads)) - 1;
    for (int t = 0; t < extra; ++t) pool.emplace_back(worker);
    worker();
}

void count(LabelCounts& c, const PixelLabel& l) {
    switch (l.kind) {
        case LabelKind::EscapedP: ++c.escaped_p; break;
        case LabelKind::EscapedLavaurs: ++c.escaped_lavaurs; break;
        case LabelKind::Undecided:
            ++c.undecided;
            if (l.reason == UndecidedReason::DepthExhausted) ++c.depth_exhausted;
            if (l.reason == UndecidedReason::Numeric) ++c.numeric_failures;
            break;
    }
}

struct Rgb {
    std::uint8_t r, g, b;
};

Rgb hsv(double h, double s, double v) {
    h = std::fmod(h, 360.0) / 60.0;
    const int i = static_cast<int>(h);
    const double f = h - i;
    const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    double r = v, g = t, b = p;
    switch (i) {
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        case 5: r = v; g = p; b = q; break;
        default: break;
    }
    auto byte = [](double x) { return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0)); };
    return {byte(r), byte(g), byte(b)};
}

Rgb color(const PixelLabel& l) {
    switch (l.kind) {
        case LabelKind::EscapedP: {
            const auto v = static_cast<std::uint8_t>(std::lround(150.0 + 105.0 * std::exp(-l.n / 24.0)));
            return {v, v, v};
        }
        case LabelKind::EscapedLavaurs:
            return hsv(200.0 + 67.0 * (l.k - 1), 0.75, 0.45 + 0.5 * std::exp(-l.n / 32.0));
        case LabelKind::Undecided:
            break;
    }
    return {0, 0, 0};
}

}  // namespace

void RasterConfig::validate() const {
    if (resolution < 16) throw DomainError("raster: resolution must be at least 16");
    if (!(escape_radius >= 4.0)) throw DomainError("raster: escape radius must be at least 4");
    if (lavaurs_depth < 0) throw DomainError("raster: negative lavaurs depth");
    if (maxiter < 1) throw DomainError("raster: maxiter must be positive");
    if (!(region.re_max > region.re_min && region.im_max > region.im_min))
        throw DomainError("raster: empty region");
}

double ClassificationRaster::pixel_area() const {
    const double n = config.resolution;
    return (config.region.width() / n) * (config.region.height() / n);
}

cplx pixel_center(const RasterConfig& cfg, int row, int col) {
    const double n = cfg.resolution;
    return {cfg.region.re_min + (col + 0.5) * (cfg.region.width() / n),
            cfg.region.im_max - (row + 0.5) * (cfg.region.height() / n)};
}

PixelLabel classify_point(const lavaurs::LavaursSystem& sys, const RasterConfig& cfg, cplx z) {
    const auto params = stage_params(sys, cfg);
    for (int k = 0;; ++k) {
        const auto r = simd::orbit_point(params, z.real(), z.imag());
        const auto s = finish_stage(sys, cfg, k, r);
        if (s.final) return s.label;
        z = s.next;
    }
}

ClassificationRaster render(const lavaurs::LavaursSystem& sys, const RasterConfig& cfg) {
    return render(sys, cfg, simd::detect_isa());
}

ClassificationRaster render(const lavaurs::LavaursSystem& sys, const RasterConfig& cfg, simd::Isa isa) {
    cfg.validate();
    const auto params = stage_params(sys, cfg);
    const int threads = thread_count(cfg);
    const std::size_t total = static_cast<std::size_t>(cfg.resolution) * cfg.resolution;

    ClassificationRaster out;
    out.config = cfg;
    out.labels.assign(total, PixelLabel{});

    std::vector<std::size_t> index(total);
    std::vector<double> re(total), im(total);
    for (int row = 0; row < cfg.resolution; ++row) {
        for (int col = 0; col < cfg.resolution; ++col) {
            const std::size_t i = static_cast<std::size_t>(row) * cfg.resolution + col;
            const cplx z = pixel_center(cfg, row, col);
            index[i] = i;
            re[i] = z.real();
            im[i] = z.imag();
        }
    }

    std::vector<std::int32_t> iters;
    std::vector<simd::OrbitStatus> status;
    std::vector<StageResult> results;
    for (int k = 0; !index.empty(); ++k) {
        const std::size_t n = index.size();
        iters.assign(n, 0);
        status.assign(n, simd::OrbitStatus::Bounded);
        results.assign(n, StageResult{});
        parallel_chunks(n, threads, [&](std::size_t lo, std::size_t hi) {
            const std::size_t len = hi - lo;
            simd::OrbitBatch batch{{re.data() + lo, len}, {im.data() + lo, len},
                                   {iters.data() + lo, len}, {status.data() + lo, len}};
            simd::orbit(params, batch, isa);
            for (std::size_t i = lo; i < hi; ++i)
                results[i] = finish_stage(sys, cfg, k, {re[i], im[i], iters[i], status[i]});
        });

        std::size_t kept = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (results[i].final) {
                out.labels[index[i]] = results[i].label;
                continue;
            }
            index[kept] = index[i];
            re[kept] = results[i].next.real();
            im[kept] = results[i].next.imag();
            ++kept;
        }
        index.resize(kept);
        re.resize(kept);
        im.resize(kept);
    }

    for (const auto& l : out.labels) count(out.counts, l);
    return out;
}

std::vector<std::uint8_t> to_rgb(const ClassificationRaster& raster) {
    std::vector<std::uint8_t> px;
    px.reserve(raster.labels.size() * 3);
    for (const auto& l : raster.labels) {
        const Rgb c = color(l);
        px.push_back(c.r);
        px.push_back(c.g);
        px.push_back(c.b);
    }
    return px;
}

AreaReport area_scan(const lavaurs::LavaursSystem& sys, const RasterConfig& base,
                     const std::vector<int>& resolutions) {
    if (resolutions.empty()) throw DomainError("area_scan: no resolutions");
    for (std::size_t i = 1; i < resolutions.size(); ++i)
        if (resolutions[i] <= resolutions[i - 1]) throw DomainError("area_scan: resolutions must increase");
    AreaReport report;
    for (int res : resolutions) {
        RasterConfig cfg = base;
        cfg.resolution = res;
        const auto raster = render(sys, cfg);
        AreaRow row;
        row.resolution = res;
        row.counts = raster.counts;
        const double px = raster.pixel_area();
        row.cover_area = static_cast<double>(raster.counts.undecided) * px;
        row.interior_proxy = static_cast<double>(raster.counts.depth_exhausted) * px;
        row.boundary_cover = row.cover_area - row.interior_proxy;
        report.rows.push_back(row);
    }
    return report;
}

std::string to_csv(const AreaReport& report) {
    std::ostringstream os;
    os.precision(12);
    os << kAreaCsvHeader << '\n';
    for (const auto& r : report.rows)
        os << r.resolution << ',' << r.counts.escaped_p << ',' << r.counts.escaped_lavaurs << ','
           << r.counts.undecided << ',' << r.cover_area << '\n';
    return os.str();
}

std::int64_t pooled_excess(const ClassificationRaster& fine, const ClassificationRaster& coarse) {
    const int n = coarse.config.resolution;
    if (fine.config.resolution != 2 * n) throw DomainError("pooled_excess: fine raster must have twice the resolution");
    std::int64_t excess = 0;
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            bool pooled = false;
            for (int dr = 0; dr < 2; ++dr)
                for (int dc = 0; dc < 2; ++dc)
                    pooled = pooled || fine.at(2 * row + dr, 2 * col + dc).kind == LabelKind::Undecided;
            if (pooled && coarse.at(row, col).kind != LabelKind::Undecided) ++excess;
        }
    }
    return excess;
}

const char* horn_class_name(HornClass c) {
    switch (c) {
        case HornClass::Escapes: return "escapes";
        case HornClass::UpperTrapped: return "upper_trapped";
        case HornClass::FarRecurrent: return "far_recurrent";
        case HornClass::Undecided: return "undecided";
    }
    return "undecided";
}

double siegel_height(const lavaurs::LavaursSystem& sys) {
    const cplx nu = lavaurs::end_translation(sys, lavaurs::End::Upper).nu;
    constexpr int kSamples = 16;
    for (double h = 0.5; h <= 40.0; h += 0.5) {
        double worst = 0.0;
        try {
            for (int k = 0; k < kSamples; ++k) {
                const cplx w{static_cast<double>(k) / kSamples, h};
                worst = std::max(worst, std::abs(sys.horn_map(w) - w - nu));
            }
        } catch (const std::runtime_error&) {
            continue;
        }
        if (worst < 1e-3) return h;
    }
    throw PrecisionError("siegel_height: horn map never close to its end translation", 0.0);
}

HornProbe horn_orbit_classify(const lavaurs::LavaursSystem& sys, cplx w, double epsilon, int budget,
                              double siegel_threshold) {
    if (!(epsilon > 0.0)) throw DomainError("horn_orbit_classify: epsilon must be positive");
    HornProbe probe;
    probe.last = w;
    if (budget <= 0) return probe;
    int above_run = 0;
    for (int i = 0; i < budget; ++i) {
        try {
            w = sys.horn_map(w);
        } catch (const NotCertified&) {
            probe.cls = HornClass::Escapes;
            return probe;
        } catch (const PrecisionError&) {
            return probe;
        }
        probe.steps = i + 1;
        probe.last = w;
        if (w.imag() <= -epsilon && ++probe.far_visits >= 3) {
            probe.cls = HornClass::FarRecurrent;
            return probe;
        }
        above_run = w.imag() > siegel_threshold ? above_run + 1 : 0;
    }
    // Trapped: the second half of the orbit never left the region above the threshold.
    if (above_run >= (budget + 1) / 2) probe.cls = HornClass::UpperTrapped;
    return probe;
}

}  // namespace implosion::raster
