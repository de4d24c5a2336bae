#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <string>

#include "reperio/config.hpp"

using namespace reperio;
namespace fs = std::filesystem;

namespace {

fs::path write_config(const std::string& name, const std::string& body) {
    const fs::path dir = fs::temp_directory_path() / "reperio_config_tests";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream os(p);
    os << body;
    return p;
}

}  // namespace

TEST_CASE("full configuration parses with comments and whitespace") {
    const auto path = write_config("good.ini", R"(
# model geometry
[model]
patch = 8
embed_dim = 16
swin_layers = 2
swin_heads = 2
window = 4
node_dim = 16
rgcn_hidden = 16
gt_hidden = 16
gt_heads = 2   ; trailing comment
past_window = 1
future_window = 1
delta_min = 15
delta_max = 25

[train]
lr = 0.001
steps = 200
batch = 4
flip_prob = 0.5
seed = 42

[tcm]
p = 0.4
r_min = 0.25
r_max = 0.5

[paths]
dataset = data/train
out = runs/a
)");
    const RunConfig cfg = parse_run_config(path);
    CHECK(cfg.model.patch == 8);
    CHECK(cfg.model.embed_dim == 16);
    CHECK(cfg.model.gt_heads == 2);
    CHECK(cfg.model.delta_max == 25);
    CHECK(cfg.hyper.lr == 0.001);
    CHECK(cfg.hyper.steps == 200);
    CHECK(cfg.hyper.tcm.p == 0.4);
    CHECK(cfg.hyper.seed == 42);
    CHECK(cfg.model.seed == 42);  // a single seed drives init and sampling
    CHECK(cfg.dataset_path == "data/train");
    CHECK(cfg.out_path == "runs/a");
}

TEST_CASE("unknown keys are rejected") {
    const auto path = write_config("bad_key.ini", "[model]\npatch = 8\nlearning_rate = 0.1\n");
    CHECK_THROWS_WITH(parse_run_config(path),
                      Catch::Matchers::ContainsSubstring("unknown key 'learning_rate'"));
}

TEST_CASE("unknown sections are rejected") {
    const auto path = write_config("bad_section.ini", "[optimizer]\nlr = 0.1\n");
    CHECK_THROWS_WITH(parse_run_config(path),
                      Catch::Matchers::ContainsSubstring("unknown section [optimizer]"));
}

TEST_CASE("keys outside any section are rejected") {
    const auto path = write_config("stray.ini", "patch = 8\n");
    CHECK_THROWS_WITH(parse_run_config(path), Catch::Matchers::ContainsSubstring("outside section"));
}

TEST_CASE("malformed booleans are rejected") {
    const auto path = write_config("bad_bool.ini", "[train]\nwall_times = maybe\n");
    CHECK_THROWS_WITH(parse_run_config(path), Catch::Matchers::ContainsSubstring("boolean"));
}

TEST_CASE("missing file is an error") {
    CHECK_THROWS_AS(parse_run_config("/nonexistent/reperio.ini"), std::runtime_error);
}
