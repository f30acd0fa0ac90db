// Copyright 2026 The toric-memory Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end runs of the command line tool.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name) {
    auto dir = fs::temp_directory_path() / ("toric_integration_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void put(const fs::path &p, const std::string &text) {
    std::ofstream(p) << text;
}

int cli(const std::string &args, const fs::path &log) {
    std::string cmd = std::string(TORIC_CLI) + " " + args + " > " + log.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string header_value(const std::string &table, const std::string &key) {
    std::istringstream in(table);
    std::string line;
    std::string prefix = "# " + key + ": ";
    while (std::getline(in, line)) {
        if (line.rfind(prefix, 0) == 0) {
            return line.substr(prefix.size());
        }
    }
    return "";
}

}  // namespace

TEST(integration, bound_subcommand) {
    auto dir = scratch("bound");
    ASSERT_EQ(cli("bound --out " + (dir / "out").string(), dir / "log"), 0) << slurp(dir / "log");
    auto table = slurp(dir / "out" / "bound.tsv");
    EXPECT_NE(table.find("0.0674\t0.164026"), std::string::npos) << table;
    EXPECT_EQ(header_value(table, "manifest_hash").size(), 16u);
    EXPECT_NE(slurp(dir / "out" / "manifest.json").find(header_value(table, "manifest_hash")), std::string::npos);
}

TEST(integration, threshold_bytes_independent_of_workers) {
    auto dir = scratch("threshold");
    put(dir / "config.json", R"({
        "lattice": {"L": 12, "kind": "random", "p_mix": 0.5},
        "analysis": {"sizes": [8, 12], "f_grid": [0.06, 0.09, 0.12, 0.15], "n_instances": 5, "n_errors": 40,
                     "bootstrap": 100},
        "master_seed": 11
    })");
    std::string base = "threshold --config " + (dir / "config.json").string();
    ASSERT_EQ(cli(base + " --workers 1 --out " + (dir / "w1").string(), dir / "log1"), 0) << slurp(dir / "log1");
    ASSERT_EQ(cli(base + " --workers 4 --out " + (dir / "w4").string(), dir / "log4"), 0) << slurp(dir / "log4");
    for (const char *f : {"threshold.tsv", "threshold_curves.tsv"}) {
        auto a = slurp(dir / "w1" / f);
        EXPECT_FALSE(a.empty());
        EXPECT_EQ(a, slurp(dir / "w4" / f)) << f;
    }
    ASSERT_EQ(cli(base + " --seed 12 --out " + (dir / "s12").string(), dir / "log12"), 0);
    EXPECT_NE(header_value(slurp(dir / "s12" / "threshold.tsv"), "manifest_hash"),
              header_value(slurp(dir / "w1" / "threshold.tsv"), "manifest_hash"));
}

TEST(integration, lattice_file_feeds_decoder) {
    auto dir = scratch("decode");
    put(dir / "config.json", R"({"lattice": {"L": 8, "kind": "random", "p_mix": 0.25, "seed": 4}})");
    ASSERT_EQ(cli("generate-lattice --config " + (dir / "config.json").string() + " --out " + (dir / "lat").string(),
                  dir / "log"),
              0)
        << slurp(dir / "log");
    auto checks = slurp(dir / "lat" / "lattice_checks.tsv");
    std::istringstream rows(checks);
    std::string line;
    int checked = 0;
    while (std::getline(rows, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("check\t", 0) == 0) {
            continue;
        }
        EXPECT_EQ(line.substr(line.find('\t'), 3), "\t1\t") << line;
        checked++;
    }
    EXPECT_GT(checked, 0);
    ASSERT_EQ(cli("decode --lattice " + (dir / "lat" / "lattice.json").string() + " --error 3,4 --out " +
                      (dir / "decoded.tsv").string(),
                  dir / "log2"),
              0)
        << slurp(dir / "log2");
    auto table = slurp(dir / "decoded.tsv");
    EXPECT_FALSE(header_value(table, "weight").empty()) << table;
    EXPECT_LE(std::stoi(header_value(table, "weight")), 2);
}

TEST(integration, dynamics_and_walk_subcommands) {
    auto dir = scratch("dynamics");
    put(dir / "sweep.json", R"({
        "lattice": {"L": 6},
        "disorder": {"kind": "ising"},
        "analysis": {"mode": "lifetime_sweep", "sweep": "sigma", "sweep_values": [0, 2], "n_traj": 20,
                     "t_min": 0.01, "t_end": 0.5, "t_cap": 50, "per_decade": 8}
    })");
    ASSERT_EQ(cli("dynamics --config " + (dir / "sweep.json").string() + " --out " + (dir / "d").string(),
                  dir / "log"),
              0)
        << slurp(dir / "log");
    auto lifetimes = slurp(dir / "d" / "lifetimes.tsv");
    EXPECT_NE(lifetimes.find("sigma\ttau"), std::string::npos) << lifetimes;

    put(dir / "walk.json", R"({"lattice": {"L": 16}, "walk": {"h": 1, "t_max": 3}})");
    ASSERT_EQ(cli("walk --config " + (dir / "walk.json").string() + " --out " + (dir / "w").string(), dir / "log2"),
              0)
        << slurp(dir / "log2");
    auto walk = slurp(dir / "w" / "walk.tsv");
    EXPECT_NEAR(std::stod(header_value(walk, "exponent")), 1.0, 1e-3) << walk;
}

TEST(integration, errors_exit_nonzero) {
    auto dir = scratch("errors");
    put(dir / "typo.json", R"({"lattice": {"L": 8, "knd": "square"}})");
    EXPECT_EQ(cli("bound --config " + (dir / "typo.json").string() + " --out " + (dir / "o").string(), dir / "log"),
              1);
    EXPECT_NE(slurp(dir / "log").find("lattice.knd"), std::string::npos);
    put(dir / "mismatch.json", R"({"experiment": "walk"})");
    EXPECT_EQ(cli("bound --config " + (dir / "mismatch.json").string(), dir / "log2"), 1);
    EXPECT_NE(slurp(dir / "log2").find("does not match"), std::string::npos);
    put(dir / "range.json", R"({"lattice": {"L": 8, "kind": "random", "p_mix": 1.3}})");
    EXPECT_EQ(cli("generate-lattice --config " + (dir / "range.json").string(), dir / "log3"), 1);
    EXPECT_NE(slurp(dir / "log3").find("p_mix"), std::string::npos);
}
