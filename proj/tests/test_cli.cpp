#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "heliocot/csv.hpp"
#include "heliocot/io_util.hpp"

using namespace heliocot;
namespace fs = std::filesystem;

namespace {

#ifndef HELIOCOT_BIN
#error "HELIOCOT_BIN must point at the CLI binary"
#endif

int run(const std::string& args, bool quiet = true) {
    std::string cmd = std::string("\"") + HELIOCOT_BIN + "\" " + args;
    if (quiet)
        cmd += " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("heliocot_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// fast small-camera config shared by the CLI cases
const char* kConfigText = R"([camera]
image_width_px = 256
image_height_px = 256
center_x_px = 127.5
center_y_px = 127.5
radius_90deg_px = 115

[synth]
days = 2
span_min = 6
cot_cycle = [0, 50, 100, 25]
)";

fs::path write_config(const fs::path& dir) {
    const fs::path path = dir / "heliocot.toml";
    atomic_write_file(path, kConfigText);
    return path;
}

} // namespace

TEST_CASE("missing config file exits 2 with the path in the message") {
    const auto dir = fresh_dir("badcfg");
    const std::string cmd = std::string("\"") + HELIOCOT_BIN +
                            "\" --config /no/such/file.toml solarpos --at 2015-06-21T12:00:00Z" +
                            " >/dev/null 2>" + (dir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 2);
    CHECK(read_file(dir / "stderr.txt").find("/no/such/file.toml") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("HELIOCOT_CONFIG is the fallback config path") {
    const auto dir = fresh_dir("envcfg");
    atomic_write_file(dir / "env.toml", "[site]\nlatitude_deg = 200\n");  // invalid on purpose
    const std::string cmd = std::string("HELIOCOT_CONFIG=") + (dir / "env.toml").string() + " \"" +
                            HELIOCOT_BIN + "\" solarpos --at 2015-06-21T12:00:00Z >/dev/null 2>&1";
    // the env-selected config is read and its bad latitude rejected
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 1);
    fs::remove_all(dir);
}

TEST_CASE("unknown subcommands and flags exit 1") {
    CHECK(run("frobnicate") == 1);
    CHECK(run("cot --no-such-flag x") == 1);
    CHECK(run("") == 1);  // a subcommand is required
}

TEST_CASE("solarpos emits a CSV row") {
    CHECK(run("solarpos --at 2015-06-21T12:00:00Z --lat 0 --lon 0") == 0);
    CHECK(run("solarpos --at not-a-time") == 1);
}

TEST_CASE("cot subcommand keeps rows with valid cells and drops all-fill rows") {
    const auto dir = fresh_dir("cot");
    atomic_write_file(dir / "cot.csv",
                      "timestamp_utc,c00,c01,c02,c10,c11,c12,c20,c21,c22\n"
                      "2015-03-14T04:10:00Z,12,12,12,12,12,12,12,12,12\n"
                      "2015-03-14T07:10:00Z,NA,NA,NA,NA,NA,NA,NA,NA,NA\n"
                      "2015-03-15T04:10:00Z,1,2,3,4,5,6,7,8,NA\n");
    CHECK(run("cot --in " + (dir / "cot.csv").string() + " --out " +
              (dir / "cot_mean.csv").string()) == 0);
    const auto out = read_file(dir / "cot_mean.csv");
    CHECK(out == "timestamp_utc,cot_mean,n_valid\n"
                 "2015-03-14T04:10:00Z,12,9\n"
                 "2015-03-15T04:10:00Z,4.5,8\n");

    atomic_write_file(dir / "bad.csv", "timestamp_utc,c00,c01,c02,c10,c11,c12,c20,c21,c22\n"
                                       "2015-03-14T04:10:00Z,12,12,12,12,105,12,12,12,12\n");
    CHECK(run("cot --in " + (dir / "bad.csv").string() + " --out " +
              (dir / "nope.csv").string()) == 1);
    CHECK(run("cot --in " + (dir / "missing.csv").string() + " --out " +
              (dir / "nope.csv").string()) == 2);
    fs::remove_all(dir);
}

TEST_CASE("run-all equals the hand-chained stages and is idempotent") {
    const auto dir = fresh_dir("chain");
    const auto config = write_config(dir);
    const std::string cfg_arg = "--config " + config.string() + " ";

    REQUIRE(run(cfg_arg + "synth --out " + (dir / "data").string()) == 0);

    // individual stages
    const fs::path a = dir / "manual";
    fs::create_directories(a);
    const std::string data = (dir / "data").string();
    REQUIRE(run(cfg_arg + "luminance --images " + data + "/images --out " + a.string() +
                "/luminance.csv --jobs 2") == 0);
    REQUIRE(run(cfg_arg + "clearsky --lum " + a.string() + "/luminance.csv --out " + a.string() +
                "/clearsky.csv") == 0);
    REQUIRE(run(cfg_arg + "fit-map --lum " + a.string() + "/luminance.csv --gc " + a.string() +
                "/clearsky.csv --flags " + data + "/clear_flags.csv --out " + a.string() +
                "/clearsky_map.csv") == 0);
    REQUIRE(run(cfg_arg + "cot --in " + data + "/cot.csv --out " + a.string() + "/cot_mean.csv") ==
            0);
    REQUIRE(run(cfg_arg + "align --lum " + a.string() + "/luminance.csv --gc " + a.string() +
                "/clearsky.csv --map " + a.string() + "/clearsky_map.csv --cot " + a.string() +
                "/cot_mean.csv --out " + a.string() + "/aligned_pairs.csv") == 0);
    REQUIRE(run(cfg_arg + "correlate --pairs " + a.string() + "/aligned_pairs.csv --out-report " +
                a.string() + "/report.json --out-svg " + a.string() +
                "/scatter.svg --out-points " + a.string() + "/scatter_points.csv") == 0);

    // aligned pairs land exactly on the overpass timestamps with enough samples
    {
        const std::string pairs_text = read_file(a / "aligned_pairs.csv");
        const std::string cot_text = read_file(a / "cot_mean.csv");
        const auto pair_lines = csv::split_lines(pairs_text);
        const auto cot_lines = csv::split_lines(cot_text);
        REQUIRE(pair_lines.size() == cot_lines.size());
        for (std::size_t i = 1; i < pair_lines.size(); ++i) {
            const auto pf = csv::split_fields(pair_lines[i]);
            const auto cf = csv::split_fields(cot_lines[i]);
            CHECK(pf[0] == cf[0]);
            CHECK(csv::parse_integer(pf[3]) >= 3);
        }
    }

    // chained
    const fs::path b = dir / "chained";
    REQUIRE(run(cfg_arg + "run-all --images " + data + "/images --cot " + data +
                "/cot.csv --flags " + data + "/clear_flags.csv --out " + b.string() +
                " --jobs 2") == 0);

    for (const char* name :
         {"luminance.csv", "clearsky.csv", "clearsky_map.csv", "cot_mean.csv",
          "aligned_pairs.csv", "report.json", "scatter.svg", "scatter_points.csv"}) {
        CAPTURE(name);
        CHECK(read_file(a / name) == read_file(b / name));
    }

    // idempotence: a second identical run rewrites identical bytes
    const fs::path c = dir / "chained2";
    REQUIRE(run(cfg_arg + "run-all --images " + data + "/images --cot " + data +
                "/cot.csv --flags " + data + "/clear_flags.csv --out " + c.string() +
                " --jobs 1") == 0);
    for (const char* name : {"luminance.csv", "report.json", "scatter.svg"})
        CHECK(read_file(b / name) == read_file(c / name));

    fs::remove_all(dir);
}
