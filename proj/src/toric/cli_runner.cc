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

#include "toric/cli_runner.h"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "toric/kmc_engine.h"
#include "toric/rng.h"
#include "toric/version.h"

namespace toric {

using nlohmann::json;

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::generate_lattice:
            return "generate_lattice";
        case Experiment::static_threshold:
            return "static_threshold";
        case Experiment::dynamics:
            return "dynamics";
        case Experiment::walk:
            return "walk";
        case Experiment::bound:
            return "bound";
    }
    return "?";
}

Experiment parse_experiment(const std::string &name) {
    for (auto e : {Experiment::generate_lattice, Experiment::static_threshold, Experiment::dynamics, Experiment::walk,
                   Experiment::bound}) {
        if (experiment_name(e) == name) {
            return e;
        }
    }
    throw std::invalid_argument("experiment: unknown value '" + name +
                                "' (expected generate_lattice, static_threshold, dynamics, walk or bound)");
}

std::string dynamics_mode_name(DynamicsMode m) {
    switch (m) {
        case DynamicsMode::series:
            return "series";
        case DynamicsMode::lifetime_sweep:
            return "lifetime_sweep";
        case DynamicsMode::threshold:
            return "threshold";
    }
    return "?";
}

DynamicsMode parse_dynamics_mode(const std::string &name) {
    for (auto m : {DynamicsMode::series, DynamicsMode::lifetime_sweep, DynamicsMode::threshold}) {
        if (dynamics_mode_name(m) == name) {
            return m;
        }
    }
    throw std::invalid_argument("analysis.mode: unknown value '" + name +
                                "' (expected series, lifetime_sweep or threshold)");
}

bool ExperimentConfig::operator==(const ExperimentConfig &o) const {
    return experiment == o.experiment && lattice == o.lattice && dual == o.dual && bath == o.bath &&
           disorder == o.disorder && interaction == o.interaction && decoder.k == o.decoder.k &&
           analysis == o.analysis && walk == o.walk && master_seed == o.master_seed && workers == o.workers &&
           output == o.output;
}

namespace {

/// Reads fields of one JSON object, rejecting keys that are never read.
class Section {
   public:
    Section(const json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) {
            throw std::invalid_argument(where("") + "must be an object");
        }
    }

    template <typename T>
    void read(const std::string &key, T &out) {
        known_.insert(key);
        auto it = obj_.find(key);
        if (it == obj_.end()) {
            return;
        }
        try {
            out = it->template get<T>();
        } catch (const json::exception &) {
            throw std::invalid_argument(where(key) + "has the wrong type (" + it->dump() + ")");
        }
    }

    Section child(const std::string &key) {
        known_.insert(key);
        auto it = obj_.find(key);
        static const json empty = json::object();
        return Section(it == obj_.end() ? empty : *it, path_.empty() ? key : path_ + "." + key);
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!known_.count(it.key())) {
                throw std::invalid_argument("unknown config key '" + (path_.empty() ? "" : path_ + ".") + it.key() +
                                            "'");
            }
        }
    }

    const json &raw(const std::string &key) {
        known_.insert(key);
        static const json null_value;
        auto it = obj_.find(key);
        return it == obj_.end() ? null_value : *it;
    }

    std::string where(const std::string &key) const {
        std::string full = path_.empty() ? key : (key.empty() ? path_ : path_ + "." + key);
        return full + ": ";
    }

   private:
    const json &obj_;
    std::string path_;
    std::set<std::string> known_;
};

template <typename Enum, typename Parse>
void read_enum(Section &s, const std::string &key, Enum &out, Parse parse, std::string (*name)(Enum)) {
    std::string text = name(out);
    s.read(key, text);
    try {
        out = parse(text);
    } catch (const std::invalid_argument &e) {
        throw std::invalid_argument(s.where(key) + e.what());
    }
}

void range_error(const std::string &field, const std::string &rule, double value) {
    std::ostringstream msg;
    msg << field << " must " << rule << " (got " << value << ")";
    throw std::invalid_argument(msg.str());
}

}  // namespace

void validate_config(const ExperimentConfig &c) {
    const auto &l = c.lattice;
    if (l.L < 2) {
        range_error("lattice.L", "be at least 2", l.L);
    }
    if (l.kind == LatticeKind::random && l.L % 2 != 0) {
        range_error("lattice.L", "be even for random lattices", l.L);
    }
    if (!(l.p_mix >= 0 && l.p_mix <= 1)) {
        range_error("lattice.p_mix", "lie in [0, 1]", l.p_mix);
    }
    validate_bath(c.bath);
    validate_disorder(c.disorder);
    validate_interaction(c.interaction);
    if (c.decoder.k < 1) {
        range_error("decoder.k", "be at least 1", c.decoder.k);
    }
    const auto &a = c.analysis;
    for (int L : a.sizes) {
        if (L < 2 || (l.kind == LatticeKind::random && L % 2 != 0)) {
            range_error("analysis.sizes", "hold valid lattice sizes", L);
        }
    }
    for (size_t i = 0; i < a.f_grid.size(); i++) {
        if (!(a.f_grid[i] >= 0 && a.f_grid[i] < 0.5) || (i > 0 && !(a.f_grid[i] > a.f_grid[i - 1]))) {
            range_error("analysis.f_grid", "increase within [0, 0.5)", a.f_grid[i]);
        }
    }
    for (double p : a.p_mix_grid) {
        if (!(p >= 0 && p <= 1)) {
            range_error("analysis.p_mix_grid", "lie in [0, 1]", p);
        }
    }
    if (a.n_instances < 1) {
        range_error("analysis.n_instances", "be at least 1", a.n_instances);
    }
    if (a.n_errors < 1) {
        range_error("analysis.n_errors", "be at least 1", a.n_errors);
    }
    if (a.bootstrap < 1) {
        range_error("analysis.bootstrap", "be at least 1", a.bootstrap);
    }
    if (a.n_traj < 1) {
        range_error("analysis.n_traj", "be at least 1", static_cast<double>(a.n_traj));
    }
    if (!(a.t_min > 0)) {
        range_error("analysis.t_min", "be positive", a.t_min);
    }
    if (!(a.t_end > a.t_min)) {
        range_error("analysis.t_end", "exceed analysis.t_min", a.t_end);
    }
    if (!(a.t_cap >= a.t_end)) {
        range_error("analysis.t_cap", "be at least analysis.t_end", a.t_cap);
    }
    if (a.per_decade < 1) {
        range_error("analysis.per_decade", "be at least 1", a.per_decade);
    }
    if (!(a.level > 0 && a.level < 1)) {
        range_error("analysis.level", "lie in (0, 1)", a.level);
    }
    if (a.sweep != "sigma" && a.sweep != "polarization") {
        throw std::invalid_argument("analysis.sweep must be sigma or polarization (got " + a.sweep + ")");
    }
    for (double p : a.p_x_grid) {
        if (!(p > 0 && p < 0.5)) {
            range_error("analysis.p_x_grid", "lie in (0, 0.5)", p);
        }
    }
    const auto &w = c.walk;
    if (!(w.h > 0)) {
        range_error("walk.h", "be positive", w.h);
    }
    if (!(w.t_min > 0)) {
        range_error("walk.t_min", "be positive", w.t_min);
    }
    if (!(w.t_max > w.t_min)) {
        range_error("walk.t_max", "exceed walk.t_min", w.t_max);
    }
    if (w.per_decade < 1) {
        range_error("walk.per_decade", "be at least 1", w.per_decade);
    }
    if (w.samples < 1) {
        range_error("walk.samples", "be at least 1", w.samples);
    }
    if (c.experiment == Experiment::static_threshold && a.f_grid.empty()) {
        throw std::invalid_argument("analysis.f_grid must not be empty for static_threshold");
    }
    if (c.experiment == Experiment::static_threshold && a.sizes.size() < 2) {
        throw std::invalid_argument("analysis.sizes needs at least two sizes for static_threshold");
    }
    if (c.experiment == Experiment::dynamics && a.mode == DynamicsMode::threshold && a.sizes.size() < 2) {
        throw std::invalid_argument("analysis.sizes needs at least two sizes for a dynamic threshold");
    }
    if (c.experiment == Experiment::dynamics && a.mode == DynamicsMode::lifetime_sweep && a.sweep_values.empty()) {
        throw std::invalid_argument("analysis.sweep_values must not be empty for a lifetime sweep");
    }
}

ExperimentConfig parse_config(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig c;
    Section root(doc, "");
    read_enum(root, "experiment", c.experiment, parse_experiment, experiment_name);
    {
        Section s = root.child("lattice");
        s.read("L", c.lattice.L);
        read_enum(s, "kind", c.lattice.kind, parse_lattice_kind, lattice_kind_name);
        s.read("p_mix", c.lattice.p_mix);
        s.read("seed", c.lattice.seed);
        s.finish();
    }
    root.read("dual", c.dual);
    {
        Section s = root.child("bath");
        read_enum(s, "model", c.bath.model, parse_bath_model, bath_model_name);
        s.read("gamma0", c.bath.gamma0);
        s.read("temperature", c.bath.temperature);
        s.read("kappa1", c.bath.kappa1);
        s.finish();
    }
    {
        Section s = root.child("disorder");
        read_enum(s, "kind", c.disorder.kind, parse_disorder_kind, disorder_kind_name);
        s.read("sigma", c.disorder.sigma);
        s.read("polarization", c.disorder.polarization);
        s.read("mean", c.disorder.mean);
        s.read("seed", c.disorder.seed);
        s.finish();
    }
    {
        Section s = root.child("interaction");
        s.read("A", c.interaction.A);
        s.read("alpha", c.interaction.alpha);
        const json &cap = s.raw("max_anyons");
        if (!cap.is_null()) {
            if (!cap.is_number_integer()) {
                throw std::invalid_argument("interaction.max_anyons: must be an integer or null");
            }
            c.interaction.max_anyons = cap.get<int>();
        }
        s.finish();
    }
    {
        Section s = root.child("decoder");
        s.read("k", c.decoder.k);
        s.finish();
    }
    {
        Section s = root.child("analysis");
        auto &a = c.analysis;
        s.read("sizes", a.sizes);
        s.read("f_grid", a.f_grid);
        s.read("p_mix_grid", a.p_mix_grid);
        s.read("n_instances", a.n_instances);
        s.read("n_errors", a.n_errors);
        s.read("bootstrap", a.bootstrap);
        read_enum(s, "mode", a.mode, parse_dynamics_mode, dynamics_mode_name);
        s.read("n_traj", a.n_traj);
        s.read("t_min", a.t_min);
        s.read("t_end", a.t_end);
        s.read("t_cap", a.t_cap);
        s.read("per_decade", a.per_decade);
        s.read("level", a.level);
        s.read("sweep", a.sweep);
        s.read("sweep_values", a.sweep_values);
        s.read("resample_lattice", a.resample_lattice);
        s.read("p_x_grid", a.p_x_grid);
        s.finish();
    }
    {
        Section s = root.child("walk");
        auto &w = c.walk;
        s.read("h", w.h);
        s.read("t_min", w.t_min);
        s.read("t_max", w.t_max);
        s.read("per_decade", w.per_decade);
        s.read("samples", w.samples);
        read_enum(s, "measure", w.measure, parse_spread_measure, spread_measure_name);
        s.finish();
    }
    root.read("master_seed", c.master_seed);
    root.read("workers", c.workers);
    root.read("output", c.output);
    root.finish();
    validate_config(c);
    return c;
}

namespace {

json config_json(const ExperimentConfig &c) {
    json j;
    j["experiment"] = experiment_name(c.experiment);
    j["lattice"] = {{"L", c.lattice.L},
                    {"kind", lattice_kind_name(c.lattice.kind)},
                    {"p_mix", c.lattice.p_mix},
                    {"seed", c.lattice.seed}};
    j["dual"] = c.dual;
    j["bath"] = {{"model", bath_model_name(c.bath.model)},
                 {"gamma0", c.bath.gamma0},
                 {"temperature", c.bath.temperature},
                 {"kappa1", c.bath.kappa1}};
    j["disorder"] = {{"kind", disorder_kind_name(c.disorder.kind)},
                     {"sigma", c.disorder.sigma},
                     {"polarization", c.disorder.polarization},
                     {"mean", c.disorder.mean},
                     {"seed", c.disorder.seed}};
    j["interaction"] = {{"A", c.interaction.A}, {"alpha", c.interaction.alpha}, {"max_anyons", nullptr}};
    if (c.interaction.max_anyons) {
        j["interaction"]["max_anyons"] = *c.interaction.max_anyons;
    }
    j["decoder"] = {{"k", c.decoder.k}};
    const auto &a = c.analysis;
    j["analysis"] = {{"sizes", a.sizes},
                     {"f_grid", a.f_grid},
                     {"p_mix_grid", a.p_mix_grid},
                     {"n_instances", a.n_instances},
                     {"n_errors", a.n_errors},
                     {"bootstrap", a.bootstrap},
                     {"mode", dynamics_mode_name(a.mode)},
                     {"n_traj", a.n_traj},
                     {"t_min", a.t_min},
                     {"t_end", a.t_end},
                     {"t_cap", a.t_cap},
                     {"per_decade", a.per_decade},
                     {"level", a.level},
                     {"sweep", a.sweep},
                     {"sweep_values", a.sweep_values},
                     {"resample_lattice", a.resample_lattice},
                     {"p_x_grid", a.p_x_grid}};
    const auto &w = c.walk;
    j["walk"] = {{"h", w.h},
                 {"t_min", w.t_min},
                 {"t_max", w.t_max},
                 {"per_decade", w.per_decade},
                 {"samples", w.samples},
                 {"measure", spread_measure_name(w.measure)}};
    j["master_seed"] = c.master_seed;
    j["workers"] = c.workers;
    j["output"] = c.output;
    return j;
}

std::string version_string() {
    return std::string(TORIC_VERSION) + "+" + TORIC_GIT_DESCRIBE;
}

/// FNV-1a, 64 bit.
uint64_t fnv1a(const std::string &s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

/// A tab-separated table with '#' metadata lines.
class Table {
   public:
    Table(std::string title, const std::string &hash) {
        meta("table", std::move(title));
        meta("manifest_hash", hash);
        meta("version", version_string());
    }

    void meta(const std::string &key, const std::string &value) {
        head_ << "# " << key << ": " << value << "\n";
    }

    void columns(const std::vector<std::string> &names) {
        row(names);
    }

    void row(const std::vector<std::string> &cells) {
        for (size_t i = 0; i < cells.size(); i++) {
            body_ << (i ? "\t" : "") << cells[i];
        }
        body_ << "\n";
    }

    std::string str() const {
        return head_.str() + body_.str();
    }

   private:
    std::ostringstream head_;
    std::ostringstream body_;
};

struct Outputs {
    std::filesystem::path dir;
    RunManifest *manifest;

    void write(const std::string &name, const std::string &content) {
        std::ofstream f(dir / name, std::ios::binary);
        if (!f) {
            throw std::runtime_error("cannot write " + (dir / name).string());
        }
        f << content;
        manifest->files.push_back(name);
    }
};

std::vector<double> log_grid(double lo, double hi, int per_decade) {
    std::vector<double> t = {0.0};
    for (int j = 0;; j++) {
        double v = lo * std::pow(10.0, static_cast<double>(j) / per_decade);
        if (v > hi * (1 + 1e-12)) {
            break;
        }
        t.push_back(v);
    }
    return t;
}

BootstrapConfig bootstrap_of(const ExperimentConfig &c) {
    return {c.analysis.bootstrap, 0.95, derive_seed(c.master_seed, 99, 0)};
}

void write_estimate_row(Table &t, const std::string &label, const ThresholdEstimate &e) {
    std::string pairs;
    for (double p : e.pair_crossings) {
        pairs += (pairs.empty() ? "" : ",") + num(p);
    }
    t.row({label, num(e.f_cr), num(e.ci.lo), num(e.ci.hi), std::to_string(e.bootstrap_ok),
           std::to_string(e.bootstrap_failed), pairs.empty() ? "-" : pairs});
}

void run_generate_lattice(const ExperimentConfig &c, Outputs &out, const std::string &hash) {
    StabilizerCode code = build_code(c.lattice);
    if (c.dual) {
        code = dual(code);
    }
    auto report = validate(code);
    json j = json::parse(lattice_to_json(code));
    j["manifest_hash"] = hash;
    out.write("lattice.json", j.dump(1) + "\n");
    Table t("lattice summary", hash);
    t.meta("num_spins", std::to_string(code.num_spins));
    t.meta("plaquettes", std::to_string(code.plaquettes.size()));
    t.meta("stars", std::to_string(code.stars.size()));
    t.columns({"check", "passed", "offending", "detail"});
    for (const auto &ch : report.checks) {
        t.row({ch.name, ch.passed ? "1" : "0", std::to_string(ch.offending.size()),
               ch.detail.empty() ? "-" : ch.detail});
    }
    out.write("lattice_checks.tsv", t.str());
    if (!report.ok()) {
        throw std::runtime_error("generated lattice failed validation:\n" + report.str());
    }
}

void run_static_threshold(const ExperimentConfig &c, Outputs &out, const std::string &hash) {
    const auto &a = c.analysis;
    StaticThresholdSpec spec;
    spec.lattice = c.lattice;
    spec.dual = c.dual;
    spec.sizes = a.sizes;
    spec.f_grid = a.f_grid;
    spec.n_instances = a.n_instances;
    spec.n_errors = a.n_errors;
    spec.decoder = c.decoder;
    if (!a.p_mix_grid.empty()) {
        auto rows = threshold_vs_pmix(a.p_mix_grid, spec, c.master_seed, c.workers, bootstrap_of(c));
        Table t("static thresholds versus p_mix", hash);
        t.columns({"p_mix", "sector", "f_cr", "ci_lo", "ci_hi", "bootstrap_ok", "bootstrap_failed", "pair_crossings"});
        for (const auto &r : rows) {
            write_estimate_row(t, num(r.p_mix) + "\tZ", r.z);
            write_estimate_row(t, num(r.p_mix) + "\tX", r.x);
        }
        out.write("pmix_thresholds.tsv", t.str());
        return;
    }
    auto res = static_threshold(spec, c.master_seed, c.workers, bootstrap_of(c));
    Table t("static threshold", hash);
    t.meta("method", res.estimate.method);
    t.columns({"estimate", "f_cr", "ci_lo", "ci_hi", "bootstrap_ok", "bootstrap_failed", "pair_crossings"});
    write_estimate_row(t, "threshold", res.estimate);
    out.write("threshold.tsv", t.str());
    Table curves("corrected logical parity curves", hash);
    curves.columns({"L", "op", "f", "mean", "ci_lo", "ci_hi", "samples"});
    for (const auto &sc : res.curves) {
        for (const LogicalCurve *lc : {&sc.z1, &sc.z2, &sc.average}) {
            for (size_t j = 0; j < lc->grid.size(); j++) {
                curves.row({std::to_string(lc->L), logical_op_name(lc->op), num(lc->grid[j]), num(lc->mean[j]),
                            num(lc->ci_lo[j]), num(lc->ci_hi[j]), std::to_string(lc->samples[j].total())});
            }
        }
    }
    out.write("threshold_curves.tsv", curves.str());
}

DynamicsConfig dynamics_config(const ExperimentConfig &c) {
    DynamicsConfig d;
    d.lattice = c.lattice;
    d.dual = c.dual;
    d.bath = c.bath;
    d.disorder = c.disorder;
    d.interaction = c.interaction;
    d.decoder = c.decoder;
    d.schedule = log_schedule(c.analysis.t_min, c.analysis.t_end, c.analysis.per_decade);
    d.resample_lattice = c.analysis.resample_lattice;
    return d;
}

void series_rows(Table &t, const EnsembleSeries &s, const std::string &prefix) {
    for (size_t j = 0; j < s.t.size(); j++) {
        std::vector<std::string> row;
        if (!prefix.empty()) {
            row.push_back(prefix);
        }
        for (auto v : {s.t[j], s.anyons.mean[j], s.anyons.sem[j], s.fraction.mean[j], s.fraction.sem[j], s.z1.mean[j],
                       s.z2.mean[j], s.z1_ec.mean[j], s.z2_ec.mean[j], s.z_ec.mean[j], s.z_ec.sem[j]}) {
            row.push_back(num(v));
        }
        t.row(row);
    }
}

const std::vector<std::string> kSeriesColumns = {"t",  "anyons", "anyons_sem", "fraction", "fraction_sem", "z1",
                                                 "z2", "z1_ec",  "z2_ec",      "z_ec",     "z_ec_sem"};

void run_dynamics(const ExperimentConfig &c, Outputs &out, const std::string &hash) {
    const auto &a = c.analysis;
    if (a.mode == DynamicsMode::series) {
        auto s = ensemble_run(dynamics_config(c), a.n_traj, c.master_seed, c.workers);
        auto lt = lifetime(s, a.level);
        Table t("dynamics ensemble series", hash);
        t.meta("trajectories", std::to_string(s.n_traj));
        t.meta("lifetime", num(lt.tau) + (lt.censored ? " (censored: no decay below level within t_end)" : ""));
        t.columns(kSeriesColumns);
        series_rows(t, s, "");
        out.write("dynamics.tsv", t.str());
        return;
    }
    if (a.mode == DynamicsMode::lifetime_sweep) {
        Table t("lifetime sweep over " + a.sweep, hash);
        t.meta("trajectories_per_point", std::to_string(a.n_traj));
        t.meta("seeding", "every point uses master_seed (common random numbers across the sweep)");
        t.columns({a.sweep, "tau", "censored", "t_end", "anyons_final", "anyons_final_sem", "fraction_final"});
        for (double v : a.sweep_values) {
            DynamicsConfig d = dynamics_config(c);
            if (a.sweep == "sigma") {
                d.disorder.sigma = v;
            } else {
                d.disorder.polarization = v;
            }
            auto run = run_lifetime(d, a.n_traj, c.master_seed, c.workers, a.t_min, a.per_decade, a.t_end, a.t_cap,
                                    a.level);
            const auto &s = run.series;
            t.row({num(v), num(run.lifetime.tau), run.lifetime.censored ? "1" : "0", num(run.t_end),
                   num(s.anyons.mean.back()), num(s.anyons.sem.back()), num(s.fraction.mean.back())});
        }
        out.write("lifetimes.tsv", t.str());
        return;
    }
    DynamicThresholdSpec spec;
    spec.p_mix = c.lattice.p_mix;
    spec.temperature = c.bath.temperature;
    spec.kappa1 = c.bath.kappa1;
    spec.sizes = a.sizes;
    spec.n_traj = a.n_traj;
    spec.t_min = a.t_min;
    spec.t_end = a.t_end;
    spec.per_decade = a.per_decade;
    spec.resample_lattice = a.resample_lattice;
    auto res = threshold_from_dynamics(spec, c.master_seed, c.workers, bootstrap_of(c));
    Table t("threshold from dynamics", hash);
    t.columns({"quantity", "value", "ci_lo", "ci_hi", "bootstrap_ok"});
    t.row({"crossing_time", num(res.tau), num(res.tau_ci.lo), num(res.tau_ci.hi), std::to_string(res.bootstrap_ok)});
    t.row({"f_cr", num(res.f_cr), num(res.f_ci.lo), num(res.f_ci.hi), std::to_string(res.bootstrap_ok)});
    out.write("dynamic_threshold.tsv", t.str());
    Table s("dynamic threshold series", hash);
    auto cols = kSeriesColumns;
    cols.insert(cols.begin(), "L");
    s.columns(cols);
    std::vector<int> sizes = a.sizes;
    std::sort(sizes.begin(), sizes.end());
    for (size_t i = 0; i < res.series.size(); i++) {
        series_rows(s, res.series[i], std::to_string(sizes[i]));
    }
    out.write("dynamic_threshold_series.tsv", s.str());
}

void run_walk(const ExperimentConfig &c, Outputs &out, const std::string &hash) {
    WalkSpec spec;
    spec.lattice = c.lattice;
    spec.h = c.walk.h;
    spec.disorder = c.disorder;
    spec.times = log_grid(c.walk.t_min, c.walk.t_max, c.walk.per_decade);
    spec.samples = c.walk.samples;
    spec.measure = c.walk.measure;
    spec.seed = c.master_seed;
    auto s = run_walk_ensemble(spec, c.workers, bootstrap_of(c));
    Table t("quantum walk spread", hash);
    t.meta("samples", std::to_string(s.samples));
    t.meta("disorder_over_h", num(s.disorder_ratio));
    t.meta("measure", spread_measure_name(c.walk.measure));
    t.meta("exponent", num(s.fit.exponent) + " ci [" + num(s.fit.ci.lo) + ", " + num(s.fit.ci.hi) + "] window [" +
                           num(s.fit.t_lo) + ", " + num(s.fit.t_hi) + "]");
    t.columns({"t", "spread", "spread_sem", "boundary_warning"});
    for (size_t j = 0; j < s.t.size(); j++) {
        t.row({num(s.t[j]), num(s.mean[j]), num(s.sem[j]), s.boundary_warning[j] ? "1" : "0"});
    }
    out.write("walk.tsv", t.str());
}

void run_bound(const ExperimentConfig &c, Outputs &out, const std::string &hash) {
    std::vector<double> grid = c.analysis.p_x_grid;
    if (grid.empty()) {
        grid = {0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.0674, 0.08, 0.09, 0.1, 0.110028, 0.12, 0.14, 0.16, 0.18};
    }
    Table t("CSS capacity bound contour", hash);
    t.columns({"p_x", "p_z", "H_p_x", "H_p_z"});
    for (double p : grid) {
        double q = bound_contour(p);
        t.row({num(p), num(q), num(shannon_entropy(p)), num(shannon_entropy(q))});
    }
    out.write("bound.tsv", t.str());
}

}  // namespace

std::string serialize_config(const ExperimentConfig &config) {
    return config_json(config).dump(2) + "\n";
}

std::string manifest_hash(const ExperimentConfig &config) {
    ExperimentConfig c = config;
    // Neither the worker count nor the output location may change results.
    c.workers = 0;
    c.output.clear();
    return hex64(fnv1a(serialize_config(c) + version_string()));
}

std::string lattice_to_json(const StabilizerCode &code) {
    json j;
    j["L"] = code.spec.L;
    j["kind"] = lattice_kind_name(code.spec.kind);
    j["p_mix"] = code.spec.p_mix;
    j["seed"] = code.spec.seed;
    j["dual"] = code.dual;
    j["num_spins"] = code.num_spins;
    auto stabs = [](const std::vector<Stabilizer> &v) {
        json a = json::array();
        for (const auto &s : v) {
            a.push_back({{"spins", s.spins}, {"pos", {s.pos.x, s.pos.y}}});
        }
        return a;
    };
    j["plaquettes"] = stabs(code.plaquettes);
    j["stars"] = stabs(code.stars);
    j["logicals"] = {{"X1", code.logicals[X1]},
                     {"Z1", code.logicals[Z1]},
                     {"X2", code.logicals[X2]},
                     {"Z2", code.logicals[Z2]}};
    return j.dump();
}

StabilizerCode lattice_from_json(const std::string &text) {
    StabilizerCode code;
    try {
        json j = json::parse(text);
        code.spec.L = j.at("L").get<int>();
        code.spec.kind = parse_lattice_kind(j.at("kind").get<std::string>());
        code.spec.p_mix = j.at("p_mix").get<double>();
        code.spec.seed = j.at("seed").get<uint64_t>();
        code.dual = j.at("dual").get<bool>();
        code.num_spins = j.at("num_spins").get<uint32_t>();
        auto stabs = [](const json &a) {
            std::vector<Stabilizer> v;
            for (const auto &s : a) {
                v.push_back({s.at("spins").get<std::vector<uint32_t>>(),
                             {s.at("pos").at(0).get<double>(), s.at("pos").at(1).get<double>()}});
            }
            return v;
        };
        code.plaquettes = stabs(j.at("plaquettes"));
        code.stars = stabs(j.at("stars"));
        const auto &l = j.at("logicals");
        code.logicals[X1] = l.at("X1").get<std::vector<uint32_t>>();
        code.logicals[Z1] = l.at("Z1").get<std::vector<uint32_t>>();
        code.logicals[X2] = l.at("X2").get<std::vector<uint32_t>>();
        code.logicals[Z2] = l.at("Z2").get<std::vector<uint32_t>>();
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("malformed lattice file: ") + e.what());
    }
    rebuild_incidence(code);
    auto report = validate(code);
    if (!report.ok()) {
        throw std::invalid_argument("lattice file failed validation:\n" + report.str());
    }
    return code;
}

RunManifest run(const ExperimentConfig &config) {
    validate_config(config);
    auto start = std::chrono::steady_clock::now();
    RunManifest m;
    m.hash = manifest_hash(config);
    m.version = version_string();
    m.config_json = serialize_config(config);
    m.seeds["master"] = config.master_seed;
    m.seeds["bootstrap"] = derive_seed(config.master_seed, 99, 0);
    if (config.experiment == Experiment::dynamics) {
        auto s = trajectory_seeds(config.master_seed, 0);
        m.seeds["trajectory[0].dynamics"] = s.dynamics;
        m.seeds["trajectory[0].disorder"] = s.disorder;
        m.seeds["trajectory[0].lattice"] = s.lattice;
    }
    if (config.experiment == Experiment::walk) {
        auto s = walk_seeds(config.master_seed, 0);
        m.seeds["realization[0].lattice"] = s.lattice;
        m.seeds["realization[0].disorder"] = s.disorder;
    }
    if (config.experiment == Experiment::static_threshold) {
        for (int L : config.analysis.sizes) {
            m.seeds["size[" + std::to_string(L) + "]"] = derive_seed(config.master_seed, 50, static_cast<uint64_t>(L));
        }
    }
    std::filesystem::path dir(config.output.empty() ? "." : config.output);
    std::filesystem::create_directories(dir);
    Outputs out{dir, &m};
    try {
        switch (config.experiment) {
            case Experiment::generate_lattice:
                run_generate_lattice(config, out, m.hash);
                break;
            case Experiment::static_threshold:
                run_static_threshold(config, out, m.hash);
                break;
            case Experiment::dynamics:
                run_dynamics(config, out, m.hash);
                break;
            case Experiment::walk:
                run_walk(config, out, m.hash);
                break;
            case Experiment::bound:
                run_bound(config, out, m.hash);
                break;
        }
    } catch (const std::exception &e) {
        throw std::runtime_error("experiment " + experiment_name(config.experiment) + " failed: " + e.what());
    }
    m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json j;
    j["manifest_hash"] = m.hash;
    j["version"] = m.version;
    j["config"] = json::parse(m.config_json);
    j["seeds"] = m.seeds;
    j["seconds"] = m.seconds;
    j["files"] = m.files;
    std::ofstream f(dir / "manifest.json");
    f << j.dump(2) << "\n";
    return m;
}

DecodeReport decode_report(const StabilizerCode &code, const std::vector<uint32_t> &anyons,
                           const DecoderConfig &config) {
    Syndrome syndrome{anyons};
    std::sort(syndrome.anyons.begin(), syndrome.anyons.end());
    Decoder decoder(code, config);
    DecodeReport r;
    r.result = decoder.decode_full(syndrome);
    std::ostringstream t;
    t << "# table: decoded matching\n";
    t << "# weight: " << r.result.weight << "\n";
    t << "# k_used: " << r.result.k_used << "\n";
    t << "# correction:";
    for (uint32_t s : r.result.correction.spins) {
        t << " " << s;
    }
    t << "\nanyon_a\tanyon_b\tweight\tpath\n";
    for (uint32_t e : r.result.matching) {
        const auto &edge = r.result.graph.edges[e];
        t << r.result.graph.nodes[edge.i] << "\t" << r.result.graph.nodes[edge.j] << "\t" << edge.weight << "\t";
        for (size_t i = 0; i < edge.path.size(); i++) {
            t << (i ? "," : "") << edge.path[i];
        }
        t << "\n";
    }
    r.table = t.str();
    return r;
}

}  // namespace toric
