#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace std::string_literals;
namespace fs = std::filesystem;

namespace {

const std::string kCli = REPERIO_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "reperio_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<char> read_bytes(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

std::string first_line(const fs::path& p) {
    std::ifstream is(p);
    std::string line;
    std::getline(is, line);
    return line;
}

}  // namespace

TEST_CASE("help exits zero, bad usage exits two, runtime failure exits one") {
    CHECK(run("--help") == 0);
    CHECK(run("synth --help") == 0);
    CHECK(run("no-such-command") == 2);
    CHECK(run("synth --n 2 --out /tmp/x --frobnicate") == 2);
    CHECK(run("") == 2);  // a subcommand is required
    // missing dataset at runtime
    CHECK(run("baseline --method pos --dataset /nonexistent --out /tmp/m.csv") == 1);
}

TEST_CASE("synth is deterministic across invocations") {
    const fs::path a = fresh_dir("synth_a");
    const fs::path b = fresh_dir("synth_b");
    const std::string common =
        " --n 2 --frames 60 --height 16 --width 16 --seed 7 --hr-min 70 --hr-max 110";
    REQUIRE(run("synth --out " + a.string() + common) == 0);
    REQUIRE(run("synth --out " + b.string() + common) == 0);
    CHECK(read_bytes(a / "manifest.csv") == read_bytes(b / "manifest.csv"));
    CHECK(read_bytes(a / "clips/clip0000/video.rptf") == read_bytes(b / "clips/clip0000/video.rptf"));
    CHECK(read_bytes(a / "clips/clip0001/bvp.rptf") == read_bytes(b / "clips/clip0001/bvp.rptf"));
}

TEST_CASE("tcm-spectrum emits the documented CSV header") {
    const fs::path dir = fresh_dir("spectrum");
    const fs::path csv = dir / "spectrum.csv";
    REQUIRE(run("tcm-spectrum --frames 120 --mask-start 30 --mask-len 40 --out " + csv.string()) ==
            0);
    CHECK(first_line(csv) == "freq_hz,analytic_mag,fft_mag");
    // the two magnitude columns agree to printed precision
    std::ifstream is(csv);
    std::string line;
    std::getline(is, line);
    int rows = 0;
    while (std::getline(is, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double analytic = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const double fft = std::stod(line.substr(c2 + 1));
        CHECK(std::abs(analytic - fft) < 1e-8);
        ++rows;
    }
    CHECK(rows == 120 * 8 / 2 + 1);
}

TEST_CASE("graph-dump writes edges with relation names") {
    const fs::path dir = fresh_dir("graph");
    const fs::path csv = dir / "edges.csv";
    REQUIRE(run("graph-dump --frames 6 --past 1 --future 1 --delta-min 2 --delta-max 3 --out " +
                csv.string()) == 0);
    CHECK(first_line(csv) == "target,source,relation");
    std::ifstream is(csv);
    std::string line;
    bool found = false;
    while (std::getline(is, line)) {
        if (line == "4,1,InterPast") found = true;
    }
    CHECK(found);
}

TEST_CASE("hrv command reports interval statistics for the ground truth") {
    const fs::path data = fresh_dir("hrv_data");
    REQUIRE(run("synth --out " + data.string() +
                " --n 2 --frames 300 --height 16 --width 16 --seed 3") == 0);
    const fs::path csv = fresh_dir("hrv_out") / "hrv.csv";
    REQUIRE(run("hrv --dataset " + data.string() + " --out " + csv.string()) == 0);
    CHECK(first_line(csv) == "clip_id,n_peaks,mean_ibi_ms,sdnn_ms,sd1_ms,sd2_ms,sd1_sd2");
    std::ifstream is(csv);
    std::string line;
    std::getline(is, line);
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 2);
}
