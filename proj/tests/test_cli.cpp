// End-to-end checks of the command-line pipeline: exit codes, artifact
// files, and determinism. Each command runs as a subprocess of the binary
// CMake points at via DSOKR_CLI_PATH.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dsokr/datasets.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("dsokr-cli-" + std::to_string(::getpid()) + "-" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
    const std::string cmd = std::string(DSOKR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("datagen writes all splits, is deterministic, and validates its spec") {
    TempDir dir;
    const std::string base = "datagen --n-train 80 --n-val 20 --n-test 20 --dx 10 --dy 8 --d 3";
    CHECK(run(base + " --seed 5 --out " + dir.file("a")) == 0);
    for (const char* f : {"train_x.csv", "train_y.csv", "val_x.csv", "val_y.csv", "test_x.csv",
                          "test_y.csv", "run_manifest.json"})
        CHECK(fs::exists(dir.path / "a" / f));
    CHECK(dsokr::load_csv_matrix(dir.file("a/train_y.csv")).rows() == 80);
    CHECK(dsokr::load_csv_matrix(dir.file("a/test_x.csv")).cols() == 10);

    CHECK(run(base + " --seed 5 --out " + dir.file("b")) == 0);
    CHECK(slurp(dir.file("a/train_y.csv")) == slurp(dir.file("b/train_y.csv")));

    // latent dimension >= output dimension is a config error
    CHECK(run("datagen --dy 8 --d 8 --out " + dir.file("c")) == 2);
    CHECK(run("--bogus-flag") == 2);
}

TEST_CASE("select-m writes curves and suggests a sketch size") {
    TempDir dir;
    REQUIRE(run("datagen --n-train 120 --n-val 40 --n-test 10 --dx 10 --dy 8 --d 3 --out " +
                dir.file("data")) == 0);
    CHECK(run("select-m --train-y " + dir.file("data/train_y.csv") + " --val-y " +
              dir.file("data/val_y.csv") + " --ms 4 8 16 --replicates 2 --als --lambda 0.01 --out " +
              dir.file("sel")) == 0);
    CHECK(fs::exists(dir.path / "sel" / "als_curve.csv"));
    const Eigen::MatrixXd sweep = dsokr::load_csv_matrix(dir.file("sel/sweep_curve.csv"));
    CHECK(sweep.rows() == 3);
    CHECK(sweep(0, 0) == 4.0);

    // single m, single replicate -> one-row curve
    CHECK(run("select-m --train-y " + dir.file("data/train_y.csv") + " --val-y " +
              dir.file("data/val_y.csv") + " --ms 8 --replicates 1 --out " + dir.file("sel1")) == 0);
    CHECK(dsokr::load_csv_matrix(dir.file("sel1/sweep_curve.csv")).rows() == 1);

    // sub-sample sketches cannot exceed n
    CHECK(run("select-m --train-y " + dir.file("data/train_y.csv") + " --val-y " +
              dir.file("data/val_y.csv") + " --ms 500 --out " + dir.file("sel2")) == 2);
}

TEST_CASE("fit then eval: artifacts, reruns, and perfect-h retrieval") {
    TempDir dir;
    REQUIRE(run("datagen --n-train 150 --n-val 40 --n-test 40 --dx 12 --dy 8 --d 3 --seed 3 --out " +
                dir.file("data")) == 0);
    const std::string data = dir.file("data");
    const std::string fit_args = "fit --train-x " + data + "/train_x.csv --train-y " + data +
                                 "/train_y.csv --val-x " + data + "/val_x.csv --val-y " + data +
                                 "/val_y.csv --m 16 --epochs 30 --seed 4 --out ";
    CHECK(run(fit_args + dir.file("model")) == 0);
    for (const char* f : {"basis.json", "model.json", "history.csv", "run_manifest.json"})
        CHECK(fs::exists(dir.path / "model" / f));

    // same seeds -> identical training history
    CHECK(run(fit_args + dir.file("model2")) == 0);
    CHECK(slurp(dir.file("model/history.csv")) == slurp(dir.file("model2/history.csv")));

    CHECK(run("eval --model " + dir.file("model/model.json") + " --basis " +
              dir.file("model/basis.json") + " --test-x " + data + "/test_x.csv --test-y " + data +
              "/test_y.csv --out " + dir.file("ev")) == 0);
    const auto metrics = nlohmann::json::parse(slurp(dir.file("ev/metrics.json")));
    CHECK(metrics["n_items"] == 40);
    CHECK(metrics["mrr"].get<double>() > 0.0);
    CHECK(fs::exists(dir.path / "ev" / "per_item.csv"));

    // oracle coefficients retrieve every test output exactly
    CHECK(run("decode --basis " + dir.file("model/basis.json") + " --test-y " + data +
              "/test_y.csv --perfect-h --out " + dir.file("evph")) == 0);
    const auto ph = nlohmann::json::parse(slurp(dir.file("evph/metrics.json")));
    CHECK(ph["hits_at_1"].get<double>() == 1.0);

    // a custom candidate file without truth indices is a usage error
    CHECK(run("eval --model " + dir.file("model/model.json") + " --basis " +
              dir.file("model/basis.json") + " --test-x " + data + "/test_x.csv --test-y " + data +
              "/test_y.csv --candidates " + data + "/val_y.csv --out " + dir.file("ev2")) == 2);
}

TEST_CASE("a one-model ensemble reproduces the single-model metrics") {
    TempDir dir;
    REQUIRE(run("datagen --n-train 100 --n-val 30 --n-test 30 --dx 10 --dy 6 --d 2 --seed 9 --out " +
                dir.file("data")) == 0);
    const std::string data = dir.file("data");
    REQUIRE(run("fit --train-x " + data + "/train_x.csv --train-y " + data +
                "/train_y.csv --val-x " + data + "/val_x.csv --val-y " + data +
                "/val_y.csv --m 12 --epochs 20 --out " + dir.file("model")) == 0);
    REQUIRE(run("eval --model " + dir.file("model/model.json") + " --basis " +
                dir.file("model/basis.json") + " --test-x " + data + "/test_x.csv --test-y " +
                data + "/test_y.csv --out " + dir.file("single")) == 0);
    nlohmann::json manifest = {
        {"mode", "rank-sum"},
        {"models", {{{"model", dir.file("model/model.json")},
                     {"basis", dir.file("model/basis.json")}}}}};
    std::ofstream(dir.file("ensemble.json")) << manifest.dump();
    REQUIRE(run("eval --ensemble " + dir.file("ensemble.json") + " --test-x " + data +
                "/test_x.csv --test-y " + data + "/test_y.csv --out " + dir.file("ens")) == 0);
    const auto a = nlohmann::json::parse(slurp(dir.file("single/metrics.json")));
    const auto b = nlohmann::json::parse(slurp(dir.file("ens/metrics.json")));
    CHECK(a["mrr"] == b["mrr"]);
    CHECK(a["mean_rank"] == b["mean_rank"]);
}

TEST_CASE("missing input files are reported as runtime failures") {
    TempDir dir;
    CHECK(run("select-m --train-y " + dir.file("nope.csv") + " --out " + dir.file("out")) == 3);
}
