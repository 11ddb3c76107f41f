#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string output;
};

Result run(const std::string& args, const fs::path& out) {
    fs::create_directories(out);
    const fs::path log = out / "stdout.txt";
    const std::string cmd = std::string(IMPLOSION_CLI) + " " + args + " --out " + out.string() + " > " +
                            log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const char* name) {
    const auto p = fs::temp_directory_path() / "implosion_cli_test" / name;
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("sigma-solve prints sigma and the multiplier") {
    const auto dir = scratch("sigma");
    const auto r = run("sigma-solve --pq 1/2 --omega golden", dir);
    CHECK(r.code == 0);
    CHECK(r.output.find("sigma = ") != std::string::npos);
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["subcommand"] == "sigma-solve");
    CHECK(manifest.contains("sigma"));
    CHECK(manifest.contains("wall_time_s"));
    CHECK(manifest["multiplier_product_modulus"].get<double>() > 1.0);
}

TEST_CASE("render writes a PNG") {
    const auto dir = scratch("render");
    CHECK(run("render --resolution 16", dir).code == 0);
    const auto png = slurp(dir / "render.png");
    REQUIRE(png.size() > 24);
    CHECK(png.substr(1, 3) == "PNG");
    // IHDR width and height, big endian.
    CHECK(static_cast<unsigned char>(png[19]) == 16);
    CHECK(static_cast<unsigned char>(png[23]) == 16);
}

TEST_CASE("usage errors exit with 64") {
    const auto dir = scratch("usage");
    const auto r = run("render --no-such-flag", dir);
    CHECK(r.code == 64);
    CHECK(r.output.find("--resolution") != std::string::npos);
    CHECK(run("render --pq 2/4", dir).code == 64);
    CHECK(run("render --resolution 8", dir).code == 64);
}

TEST_CASE("area-scan output is byte-identical across runs and thread counts") {
    const auto a = scratch("area_a"), b = scratch("area_b");
    CHECK(run("area-scan --resolutions 32,64 --threads 1", a).code == 0);
    CHECK(run("area-scan --resolutions 32,64 --threads 3", b).code == 0);
    const auto csv = slurp(a / "area.csv");
    CHECK(csv.rfind("resolution,escaped_p,escaped_lavaurs,undecided,cover_area\n", 0) == 0);
    CHECK(csv == slurp(b / "area.csv"));
    CHECK(slurp(a / "area_detail.csv") == slurp(b / "area_detail.csv"));
}

TEST_CASE("circle subcommands") {
    const auto dir = scratch("circle");
    CHECK(run("partition-report --levels 6", dir).code == 0);
    CHECK(slurp(dir / "bounds.csv").rfind("level,num_points,max_adjacent_ratio,min_interval,max_interval\n", 0) == 0);
    CHECK(run("scale-match --levels 12 --samples 20", dir).code == 0);
    CHECK(run("cone-search --K 1.5", dir).code == 0);
    CHECK(run("horn-probe --w 0.3,20", dir).output.find("upper") != std::string::npos);
}
