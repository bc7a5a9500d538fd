#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gb/serialize.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kScratch = fs::path("cli_scratch");

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& args, const fs::path& stderr_to = {}) {
    std::string cmd = std::string(GB_CLI_PATH) + " " + args + " >/dev/null";
    if (!stderr_to.empty()) {
        cmd += " 2>" + stderr_to.string();
    } else {
        cmd += " 2>/dev/null";
    }
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

// Worked-figure lattice, small enough to run quickly.
std::string default_config() {
    return R"({
  "epsilon": 1e-3,
  "tau": 1.0,
  "lambda": 4.0,
  "sin_theta": 0.03125,
  "phi": -1.0471975511965976,
  "eta": 0.5235987755982988,
  "L": 1.0,
  "l": 0.05,
  "mc_samples": 4000,
  "seed": 9,
  "random_loops": 6
})";
}

struct ScratchDir {
    ScratchDir() {
        fs::remove_all(kScratch);
        fs::create_directories(kScratch);
    }
};

}  // namespace

TEST_CASE("build writes a field file with one core per square") {
    ScratchDir scratch;
    write_file(kScratch / "cfg.json", default_config());
    const int code =
        run("build --config " + (kScratch / "cfg.json").string() + " --out " +
            (kScratch / "field.json").string());
    CHECK(code == 0);
    const gb::Json j = gb::Json::parse(read_file(kScratch / "field.json"));
    const long n1 = j["layout"]["N"][0].get<long>();
    const long n2 = j["layout"]["N"][1].get<long>();
    CHECK(j["cores"].size() == static_cast<std::size_t>(n1 + n2));
    CHECK(j["cells"].size() > 100);
}

TEST_CASE("build rejects an angle too large for the dyadic frames") {
    ScratchDir scratch;
    std::string cfg = default_config();
    cfg.replace(cfg.find("0.03125"), 7, "0.45");
    write_file(kScratch / "cfg.json", cfg);
    const int code = run("build --config " + (kScratch / "cfg.json").string() + " --out " +
                             (kScratch / "field.json").string(),
                         kScratch / "err.txt");
    CHECK(code == 1);
    const std::string err = read_file(kScratch / "err.txt");
    CHECK(err.find("requires sin(theta) <") != std::string::npos);
}

TEST_CASE("missing config file is an I/O error") {
    ScratchDir scratch;
    const int code = run("build --config " + (kScratch / "nope.json").string());
    CHECK(code == 3);
}

TEST_CASE("check passes on the default and degenerate configs") {
    ScratchDir scratch;
    write_file(kScratch / "cfg.json", default_config());
    CHECK(run("check --config " + (kScratch / "cfg.json").string() + " --out " +
              (kScratch / "check.json").string()) == 0);
    const gb::Json j = gb::Json::parse(read_file(kScratch / "check.json"));
    CHECK(j["all_ok"].get<bool>());

    std::string cfg = default_config();
    cfg.replace(cfg.find("-1.0471975511965976"), 19, "0.0");
    cfg.replace(cfg.find("0.5235987755982988"), 18, "1.5707963267948966");
    write_file(kScratch / "deg.json", cfg);
    CHECK(run("check --config " + (kScratch / "deg.json").string() + " --out " +
              (kScratch / "deg_check.json").string()) == 0);
}

TEST_CASE("check on a tampered field file fails with the admissibility code") {
    ScratchDir scratch;
    write_file(kScratch / "cfg.json", default_config());
    REQUIRE(run("build --config " + (kScratch / "cfg.json").string() + " --out " +
                (kScratch / "field.json").string()) == 0);
    gb::Json j = gb::Json::parse(read_file(kScratch / "field.json"));
    for (auto& jc : j["cells"]) {
        if (jc["region"]["kind"] == "DeltaB" && jc["region"]["square"] == 1) {
            jc["strain"][1][0] = jc["strain"][1][0].get<double>() + 5e-4;
            break;
        }
    }
    write_file(kScratch / "bad_field.json", j.dump(2) + "\n");
    const int code = run("check --config " + (kScratch / "cfg.json").string() + " --field " +
                         (kScratch / "bad_field.json").string() + " --out " +
                         (kScratch / "bad_check.json").string());
    CHECK(code == 2);
    const gb::Json rep = gb::Json::parse(read_file(kScratch / "bad_check.json"));
    CHECK(!rep["h1_ok"].get<bool>());
}

TEST_CASE("energy and sweep emit their reports") {
    ScratchDir scratch;
    write_file(kScratch / "cfg.json", default_config());
    CHECK(run("energy --config " + (kScratch / "cfg.json").string() + " --out " +
              (kScratch / "energy.json").string()) == 0);
    const gb::Json je = gb::Json::parse(read_file(kScratch / "energy.json"));
    CHECK(je.contains("ratio"));
    CHECK(je["total"].get<double>() > 0.0);

    std::string cfg = default_config();
    cfg.insert(cfg.rfind('}'), R"(,"sweep":[0.03125,0.015625,0.0078125,0.00390625])");
    write_file(kScratch / "sweep_cfg.json", cfg);
    CHECK(run("sweep --config " + (kScratch / "sweep_cfg.json").string() + " --csv " +
              (kScratch / "sweep.csv").string() + " --out " + (kScratch / "fit.json").string()) ==
          0);
    const std::string csv = read_file(kScratch / "sweep.csv");
    CHECK(csv.find("theta,sin_theta,") == 0);
    std::size_t lines = 0;
    for (char c : csv) {
        if (c == '\n') lines++;
    }
    CHECK(lines == 5);  // header + 4 rows
    const gb::Json fit = gb::Json::parse(read_file(kScratch / "fit.json"));
    CHECK(fit.contains("r2"));
    CHECK(fit["rows"].size() == 4);
}

TEST_CASE("sweep without a grid is a validation error") {
    ScratchDir scratch;
    write_file(kScratch / "cfg.json", default_config());
    CHECK(run("sweep --config " + (kScratch / "cfg.json").string()) == 1);
}

TEST_CASE("every command is deterministic byte for byte") {
    ScratchDir scratch;
    // A small domain keeps the render tractable.
    std::string cfg = R"({
  "epsilon": 1e-3,
  "tau": 1.0,
  "lambda": 4.0,
  "sin_theta": 0.03125,
  "phi": 0.5235987755982988,
  "eta": 5.235987755982989,
  "L": 0.05,
  "l": 0.004,
  "mc_samples": 3000,
  "seed": 17,
  "random_loops": 4,
  "sweep": [0.034, 0.031, 0.028]
})";
    write_file(kScratch / "cfg.json", cfg);
    const std::string base = " --config " + (kScratch / "cfg.json").string();
    for (const std::string cmd : {"build", "check", "energy", "render", "sweep"}) {
        const fs::path out1 = kScratch / (cmd + "_1.out");
        const fs::path out2 = kScratch / (cmd + "_2.out");
        std::string flag = " --out ";
        if (cmd == "render") flag = " --svg ";
        if (cmd == "sweep") flag = " --csv ";
        CHECK(run(cmd + base + flag + out1.string()) == 0);
        CHECK(run(cmd + base + flag + out2.string()) == 0);
        const std::string a = read_file(out1);
        const std::string b = read_file(out2);
        REQUIRE(!a.empty());
        CHECK(a == b);
    }
}
