#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "implosion/kernels.hpp"
#include "implosion/lavaurs.hpp"

namespace implosion::raster {

struct Region {
    double re_min = -2.0;
    double im_min = -2.0;
    double re_max = 2.0;
    double im_max = 2.0;

    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
};

struct RasterConfig {
    Region region;
    int resolution = 256;
    int maxiter = 10000;
    int lavaurs_depth = 8;
    double escape_radius = 4.0;
    int threads = 0;  // 0: hardware concurrency

    void validate() const;
};

enum class LabelKind : std::uint8_t { EscapedP, EscapedLavaurs, Undecided };

// Why a point stayed undecided. Only the label kind enters the area counts.
enum class UndecidedReason : std::uint8_t {
    None,
    Boundary,        // neither escaped nor certified within maxiter
    DepthExhausted,  // certified interior after lavaurs_depth applications of g
    Numeric,         // g could not be evaluated to tolerance
};

struct PixelLabel {
    LabelKind kind = LabelKind::Undecided;
    std::int32_t k = 0;  // applications of g before the final escape
    std::int32_t n = 0;  // iterations of P in the final stage
    UndecidedReason reason = UndecidedReason::None;

    friend bool operator==(const PixelLabel&, const PixelLabel&) = default;
};

PixelLabel classify_point(const lavaurs::LavaursSystem& sys, const RasterConfig& cfg, cplx z);

struct LabelCounts {
    std::int64_t escaped_p = 0;
    std::int64_t escaped_lavaurs = 0;
    std::int64_t undecided = 0;
    std::int64_t depth_exhausted = 0;
    std::int64_t numeric_failures = 0;

    std::int64_t total() const { return escaped_p + escaped_lavaurs + undecided; }
};

struct ClassificationRaster {
    RasterConfig config;
    std::vector<PixelLabel> labels;  // row-major, row 0 at im_max
    LabelCounts counts;

    const PixelLabel& at(int row, int col) const {
        return labels[static_cast<std::size_t>(row) * config.resolution + col];
    }
    double pixel_area() const;
};

// Pixel centre of (row, col); row 0 is the top edge (max Im).
cplx pixel_center(const RasterConfig& cfg, int row, int col);

// Deterministic for a fixed configuration, independent of thread count and ISA.
ClassificationRaster render(const lavaurs::LavaursSystem& sys, const RasterConfig& cfg);
ClassificationRaster render(const lavaurs::LavaursSystem& sys, const RasterConfig& cfg, simd::Isa isa);

// 8-bit RGB, row-major, top-left = (re_min, im_max).
std::vector<std::uint8_t> to_rgb(const ClassificationRaster& raster);
void write_png(const ClassificationRaster& raster, const std::filesystem::path& path);

struct AreaRow {
    int resolution = 0;
    LabelCounts counts;
    double cover_area = 0.0;       // undecided pixels * pixel area
    double interior_proxy = 0.0;   // depth-exhausted part of the cover
    double boundary_cover = 0.0;   // remaining part of the cover
};

struct AreaReport {
    std::vector<AreaRow> rows;
};

inline constexpr const char* kAreaCsvHeader = "resolution,escaped_p,escaped_lavaurs,undecided,cover_area";

AreaReport area_scan(const lavaurs::LavaursSystem& sys, const RasterConfig& base,
                     const std::vector<int>& resolutions);
std::string to_csv(const AreaReport& report);

// 2x2 max-pooling of the undecided mask of `fine` (resolution 2N) compared
// with the undecided mask of `coarse` (resolution N): the number of coarse
// pixels flagged by the pooled mask but decided in `coarse`.
std::int64_t pooled_excess(const ClassificationRaster& fine, const ClassificationRaster& coarse);

// Proxy classes for horn-map orbits on the cylinder.
enum class HornClass { Escapes, UpperTrapped, FarRecurrent, Undecided };

const char* horn_class_name(HornClass c);

struct HornProbe {
    HornClass cls = HornClass::Undecided;
    int steps = 0;
    int far_visits = 0;
    cplx last{};
};

// Height above which h_sigma is within 1e-3 of the translation by nu_+.
double siegel_height(const lavaurs::LavaursSystem& sys);

HornProbe horn_orbit_classify(const lavaurs::LavaursSystem& sys, cplx w, double epsilon, int budget,
                              double siegel_threshold);

}  // namespace implosion::raster
