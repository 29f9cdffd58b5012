// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string err;
};

class Scratch {
public:
    Scratch() {
        dir_ = fs::temp_directory_path() / ("jamloc_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Scratch() { fs::remove_all(dir_); }
    fs::path path(const std::string& name) const { return dir_ / name; }

    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path(name)) << text;
        return path(name);
    }

    Run run(const std::string& args) const {
        const fs::path err = path("stderr.txt");
        const std::string cmd = std::string(JAMLOC_CLI_PATH) + " " + args + " > /dev/null 2> " + err.string();
        const int status = std::system(cmd.c_str());
        Run r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.err = slurp(err);
        return r;
    }

    static std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

private:
    static inline int counter_ = 0;
    fs::path dir_;
};

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string f; std::getline(in, f, ',');) out.push_back(f);
    return out;
}

}  // namespace

TEST_CASE("missing config file exits 2 and writes nothing") {
    Scratch s;
    const Run r = s.run("ideal --config " + s.path("absent.json").string() + " --out " + s.path("out").string());
    CHECK(r.code == 2);
    CHECK(!fs::exists(s.path("out") / "ideal.csv"));
    CHECK(r.err.find("absent.json") != std::string::npos);
}

TEST_CASE("malformed and unknown-key configs are rejected before any output") {
    Scratch s;
    const fs::path bad = s.write("bad.json", "{\n  \"trials\": 4,\n  \"n_samples\": ,\n}\n");
    Run r = s.run("ideal --config " + bad.string() + " --out " + s.path("out").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("line 3") != std::string::npos);
    CHECK(!fs::exists(s.path("out") / "ideal.csv"));

    const fs::path unknown = s.write("unknown.json", R"({"trials": 4, "shadow": 1})");
    r = s.run("run --config " + unknown.string() + " --out " + s.path("out").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("'shadow'") != std::string::npos);
    CHECK(!fs::exists(s.path("out")));
}

TEST_CASE("usage errors exit 2") {
    Scratch s;
    CHECK(s.run("").code == 2);
    CHECK(s.run("ideal --trials 0").code == 2);
    CHECK(s.run("run").code == 2);
    CHECK(s.run("multi --lean sideways").code == 2);
    CHECK(s.run("ideal --set warp=1 --trials 1 --out " + s.path("o").string()).code == 2);
}

TEST_CASE("ideal preset with default config") {
    Scratch s;
    const auto t0 = std::chrono::steady_clock::now();
    const Run r = s.run("ideal --trials 10 --threads 1 --out " + s.path("out").string());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    REQUIRE(r.code == 0);
    CHECK(secs < 10.0);
    const auto rows = lines(Scratch::slurp(s.path("out") / "ideal.csv"));
    REQUIRE(rows.size() == 46);
    CHECK(rows[0] == "n_samples,max_power_dbm,method,rmse_m,ci95_m,trials,failures");
    CHECK(fs::exists(s.path("out") / "ideal.manifest.json"));
    for (const auto& p : fs::directory_iterator(s.path("out"))) {
        CHECK(p.path().extension() != ".tmp");
    }
}

TEST_CASE("custom run with zero noise") {
    Scratch s;
    const fs::path cfg = s.write("quiet.json", R"({
        "trials": 1,
        "path_loss": {"shadowing_std_db": 0},
        "aoa_error": {"scale": 0},
        "position_error_power": 0
    })");
    REQUIRE(s.run("run --config " + cfg.string() + " --out " + s.path("out").string()).code == 0);
    const auto rows = lines(Scratch::slurp(s.path("out") / "run.csv"));
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < 3; ++i) {
        const auto f = split(rows[i]);
        CHECK(std::stod(f[3]) < 0.5);
    }
    CHECK(split(rows[3])[2] == "SPGD");
}

TEST_CASE("multi preset filters") {
    Scratch s;
    REQUIRE(s.run("multi --lean strong --m 2 --trials 3 --out " + s.path("out").string()).code == 0);
    const auto rows = lines(Scratch::slurp(s.path("out") / "multi.csv"));
    REQUIRE(rows.size() == 1 + 6 * 3);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto f = split(rows[i]);
        CHECK(f[0] == "2");
        CHECK(f[1] == "strong");
    }
    CHECK(split(rows[1])[2] == "0.500000");
    CHECK(split(rows.back())[2] == "1.000000");
}

TEST_CASE("--set overrides and seeds are honored") {
    Scratch s;
    REQUIRE(s.run("run --config " + s.write("c.json", "{\"trials\": 5}").string() +
                  " --set n_samples=8 --seed 3 --out " + s.path("a").string())
                .code == 0);
    const std::string manifest = Scratch::slurp(s.path("a") / "run.manifest.json");
    CHECK(manifest.find("\"n_samples\": 8") != std::string::npos);
    CHECK(manifest.find("\"master_seed\": 3") != std::string::npos);

    REQUIRE(s.run("run --config " + (s.path("a") / "run.manifest.json").string() + " --out " + s.path("b").string())
                .code == 0);
    CHECK(Scratch::slurp(s.path("a") / "run.csv") == Scratch::slurp(s.path("b") / "run.csv"));
}
