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

// Command line front end: one subcommand per experiment plus a standalone decoder.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "toric/cli_runner.h"
#include "toric/version.h"

namespace {

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot read " + path);
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

struct CommonFlags {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out;
};

void add_common(CLI::App *cmd, CommonFlags &flags) {
    cmd->add_option("--config", flags.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--seed", flags.seed, "Override master_seed");
    cmd->add_option("--workers", flags.workers, "Worker threads (< 1: all cores; TORIC_WORKERS overrides)");
    cmd->add_option("--out", flags.out, "Output directory");
}

toric::ExperimentConfig load(const CommonFlags &flags, toric::Experiment experiment) {
    nlohmann::json doc = nlohmann::json::object();
    if (!flags.config_path.empty()) {
        try {
            doc = nlohmann::json::parse(read_file(flags.config_path));
        } catch (const nlohmann::json::parse_error &e) {
            throw std::invalid_argument(flags.config_path + " is not valid JSON: " + e.what());
        }
    }
    const std::string name = toric::experiment_name(experiment);
    if (!doc.is_object()) {
        throw std::invalid_argument("config must be a JSON object");
    }
    if (doc.contains("experiment") && doc["experiment"] != name) {
        throw std::invalid_argument("config experiment " + doc["experiment"].dump() + " does not match subcommand (" +
                                    name + ")");
    }
    doc["experiment"] = name;
    if (flags.seed) {
        doc["master_seed"] = *flags.seed;
    }
    if (flags.workers) {
        doc["workers"] = *flags.workers;
    }
    if (flags.out) {
        doc["output"] = *flags.out;
    }
    return toric::parse_config(doc.dump());
}

std::vector<uint32_t> parse_ids(const std::string &text) {
    std::vector<uint32_t> ids;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            ids.push_back(static_cast<uint32_t>(std::stoul(item)));
        }
    }
    return ids;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Toric-code memory simulator: thresholds, anyon dynamics, decoding and quantum walks."};
    app.set_version_flag("--version", std::string(TORIC_VERSION) + "+" + TORIC_GIT_DESCRIBE);
    app.require_subcommand(1);

    struct Sub {
        const char *name;
        toric::Experiment experiment;
        const char *help;
    };
    const Sub subs[] = {
        {"generate-lattice", toric::Experiment::generate_lattice, "Build, validate and write a lattice file"},
        {"threshold", toric::Experiment::static_threshold, "Static threshold from independent flip errors"},
        {"dynamics", toric::Experiment::dynamics, "KMC ensembles: series, lifetime sweeps, dynamic thresholds"},
        {"walk", toric::Experiment::walk, "Single-anyon quantum-walk spreading"},
        {"bound", toric::Experiment::bound, "CSS capacity-bound contour"},
    };
    std::vector<CommonFlags> flags(std::size(subs));
    std::vector<CLI::App *> commands;
    for (size_t i = 0; i < std::size(subs); i++) {
        auto *cmd = app.add_subcommand(subs[i].name, subs[i].help);
        add_common(cmd, flags[i]);
        commands.push_back(cmd);
    }

    auto *decode = app.add_subcommand("decode", "Decode a syndrome with k-nearest-neighbour matching");
    std::string lattice_path, config_path, anyons_text, error_text, decode_out;
    uint32_t k = 10;
    auto *lattice_opt = decode->add_option("--lattice", lattice_path, "Lattice file from generate-lattice")
                            ->check(CLI::ExistingFile);
    decode->add_option("--config", config_path, "Config whose lattice section describes the code")
        ->check(CLI::ExistingFile)
        ->excludes(lattice_opt);
    auto *anyons_opt = decode->add_option("--anyons", anyons_text, "Comma-separated excited plaquettes");
    decode->add_option("--error", error_text, "Comma-separated flipped spins (syndrome is derived)")
        ->excludes(anyons_opt);
    decode->add_option("-k", k, "Neighbours per anyon in the sparse graph")->check(CLI::PositiveNumber);
    decode->add_option("--out", decode_out, "Output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        for (size_t i = 0; i < commands.size(); i++) {
            if (commands[i]->parsed()) {
                auto config = load(flags[i], subs[i].experiment);
                auto manifest = toric::run(config);
                std::cerr << "wrote";
                for (const auto &f : manifest.files) {
                    std::cerr << " " << f;
                }
                std::cerr << " and manifest.json to " << config.output << " (" << manifest.seconds << " s, hash "
                          << manifest.hash << ")\n";
            }
        }
        if (decode->parsed()) {
            toric::StabilizerCode code;
            if (!lattice_path.empty()) {
                code = toric::lattice_from_json(read_file(lattice_path));
            } else {
                CommonFlags f;
                f.config_path = config_path;
                auto config = load(f, toric::Experiment::generate_lattice);
                code = toric::build_code(config.lattice);
                if (config.dual) {
                    code = toric::dual(code);
                }
            }
            std::vector<uint32_t> anyons;
            if (!error_text.empty()) {
                std::vector<uint8_t> error(code.num_spins, 0);
                for (uint32_t s : parse_ids(error_text)) {
                    if (s >= code.num_spins) {
                        throw std::invalid_argument("spin " + std::to_string(s) + " out of range");
                    }
                    error[s] ^= 1;
                }
                anyons = toric::extract_syndrome(code, error).anyons;
            } else {
                anyons = parse_ids(anyons_text);
            }
            auto report = toric::decode_report(code, anyons, {k});
            if (decode_out.empty()) {
                std::cout << report.table;
            } else {
                std::ofstream(decode_out) << report.table;
            }
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
