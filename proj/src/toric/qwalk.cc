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

#include "toric/qwalk.h"

#include <lapacke.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

#include "toric/parallel.h"
#include "toric/rng.h"

namespace toric {

Eigen::MatrixXd build_walk_hamiltonian(const StabilizerCode &code, double h, const std::vector<double> &onsite) {
    const size_t n = code.plaquettes.size();
    if (onsite.size() != n) {
        throw std::invalid_argument("onsite energy count does not match plaquette count");
    }
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (size_t p = 0; p < n; p++) {
        M(p, p) = onsite[p];
    }
    for (uint32_t s = 0; s < code.num_spins; s++) {
        auto [a, b] = code.spin_to_plaquettes[s];
        if (a != b) {
            M(a, b) += h;
            M(b, a) += h;
        }
    }
    return M;
}

WalkPropagator::WalkPropagator(const Eigen::MatrixXd &M) {
    const Eigen::Index n = M.rows();
    if (M.cols() != n) {
        throw std::invalid_argument("walk matrix must be square");
    }
    if (static_cast<size_t>(n) > kMaxDenseWalkSize) {
        throw std::length_error("walk matrix of size " + std::to_string(n) + " exceeds the dense limit of " +
                                std::to_string(kMaxDenseWalkSize) + " plaquettes; use a smaller L");
    }
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if (n > 0 && (M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("walk matrix must be symmetric");
    }
    eigenvalues_.resize(n);
    if (n == 0) {
        return;
    }
    Eigen::MatrixXd a = M;
    eigenvectors_.resize(n, n);
    std::vector<lapack_int> support(2 * static_cast<size_t>(n));
    lapack_int found = 0;
    lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'A', 'U', static_cast<lapack_int>(n), a.data(),
                                     static_cast<lapack_int>(n), 0.0, 0.0, 0, 0, 0.0, &found, eigenvalues_.data(),
                                     eigenvectors_.data(), static_cast<lapack_int>(n), support.data());
    if (info != 0 || found != n || !decomposition_ok(M)) {
        // Some BLAS builds pick kernels that miscompute on the host CPU. Fall back to the
        // slower but self-contained solver rather than return a wrong propagator.
        static std::atomic<bool> warned{false};
        if (!warned.exchange(true)) {
            std::cerr << "warning: LAPACK eigendecomposition failed its self-check; using the built-in solver. "
                         "For OpenBLAS, setting OPENBLAS_CORETYPE (e.g. Haswell) usually fixes this.\n";
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M);
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("eigendecomposition failed");
        }
        eigenvalues_ = solver.eigenvalues();
        eigenvectors_ = solver.eigenvectors();
    }
}

bool WalkPropagator::decomposition_ok(const Eigen::MatrixXd &M) const {
    const Eigen::Index n = M.rows();
    Rng rng(12345);
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; i++) {
        x[i] = uniform01(rng) - 0.5;
    }
    const double scale = 1.0 + eigenvalues_.cwiseAbs().maxCoeff();
    Eigen::VectorXd vx = eigenvectors_ * x;
    double orthogonality = (eigenvectors_.transpose() * vx - x).norm() / x.norm();
    double residual = (M * vx - eigenvectors_ * eigenvalues_.cwiseProduct(x)).norm() / (scale * x.norm());
    return orthogonality < 1e-9 && residual < 1e-9;
}

WalkState WalkPropagator::evolve(const Eigen::VectorXcd &psi0, double t) const {
    if (static_cast<size_t>(psi0.size()) != size()) {
        throw std::invalid_argument("state size does not match the walk matrix");
    }
    Eigen::VectorXcd c = eigenvectors_.transpose().cast<std::complex<double>>() * psi0;
    for (Eigen::Index k = 0; k < c.size(); k++) {
        c[k] *= std::polar(1.0, -eigenvalues_[k] * t);
    }
    return {eigenvectors_.cast<std::complex<double>>() * c, t};
}

std::vector<WalkState> WalkPropagator::evolve(uint32_t origin, const std::vector<double> &times) const {
    if (origin >= size()) {
        throw std::out_of_range("walk origin out of range");
    }
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(size()));
    e[origin] = 1.0;
    std::vector<WalkState> out;
    out.reserve(times.size());
    for (double t : times) {
        if (t == 0.0) {
            out.push_back({e, 0.0});
        } else {
            out.push_back(evolve(e, t));
        }
    }
    return out;
}

Eigen::MatrixXd WalkPropagator::probabilities(uint32_t origin, const std::vector<double> &times) const {
    if (origin >= size()) {
        throw std::out_of_range("walk origin out of range");
    }
    const Eigen::Index n = static_cast<Eigen::Index>(size());
    const Eigen::Index T = static_cast<Eigen::Index>(times.size());
    Eigen::VectorXd c = eigenvectors_.row(origin).transpose();
    Eigen::MatrixXd re(n, T), im(n, T);
    for (Eigen::Index j = 0; j < T; j++) {
        for (Eigen::Index k = 0; k < n; k++) {
            double phase = eigenvalues_[k] * times[j];
            re(k, j) = c[k] * std::cos(phase);
            im(k, j) = -c[k] * std::sin(phase);
        }
    }
    Eigen::MatrixXd a = eigenvectors_ * re;
    Eigen::MatrixXd b = eigenvectors_ * im;
    Eigen::MatrixXd p = a.cwiseProduct(a) + b.cwiseProduct(b);
    for (Eigen::Index j = 0; j < T; j++) {
        if (times[j] == 0.0) {
            p.col(j).setZero();
            p(origin, j) = 1.0;
        }
    }
    return p;
}

std::vector<WalkState> evolve(const Eigen::MatrixXd &M, uint32_t origin, const std::vector<double> &times) {
    return WalkPropagator(M).evolve(origin, times);
}

double norm_of(const WalkState &state) {
    return state.amplitudes.norm();
}

double energy_of(const WalkState &state, const Eigen::MatrixXd &M) {
    return (state.amplitudes.adjoint() * (M.cast<std::complex<double>>() * state.amplitudes))(0).real();
}

std::string spread_measure_name(SpreadMeasure m) {
    return m == SpreadMeasure::rms ? "rms" : "std_dev";
}

SpreadMeasure parse_spread_measure(const std::string &name) {
    if (name == "rms") {
        return SpreadMeasure::rms;
    }
    if (name == "std_dev") {
        return SpreadMeasure::std_dev;
    }
    throw std::invalid_argument("unknown spread measure '" + name + "' (expected rms or std_dev)");
}

namespace {

std::vector<double> distances_from(uint32_t origin, const StabilizerCode &code) {
    std::vector<double> d(code.plaquettes.size());
    for (size_t p = 0; p < d.size(); p++) {
        d[p] = torus_distance(code.plaquettes[p].pos, code.plaquettes[origin].pos, code.L());
    }
    return d;
}

double spread_from(const Eigen::VectorXd &prob, const std::vector<double> &d, SpreadMeasure measure) {
    double m1 = 0.0;
    double m2 = 0.0;
    for (size_t p = 0; p < d.size(); p++) {
        m1 += prob[p] * d[p];
        m2 += prob[p] * d[p] * d[p];
    }
    double var = measure == SpreadMeasure::rms ? m2 : m2 - m1 * m1;
    return std::sqrt(std::max(0.0, var));
}

}  // namespace

double spread(const Eigen::VectorXd &probabilities, uint32_t origin, const StabilizerCode &code,
              SpreadMeasure measure) {
    if (static_cast<size_t>(probabilities.size()) != code.plaquettes.size() || origin >= code.plaquettes.size()) {
        throw std::invalid_argument("distribution does not match the code");
    }
    return spread_from(probabilities, distances_from(origin, code), measure);
}

double spread(const WalkState &state, uint32_t origin, const StabilizerCode &code, SpreadMeasure measure) {
    return spread(Eigen::VectorXd(state.amplitudes.cwiseAbs2()), origin, code, measure);
}

uint32_t central_plaquette(const StabilizerCode &code) {
    const double c = 0.5 * code.L();
    uint32_t best = 0;
    double best_d = INFINITY;
    for (uint32_t p = 0; p < code.plaquettes.size(); p++) {
        double d = std::hypot(code.plaquettes[p].pos.x - c, code.plaquettes[p].pos.y - c);
        if (d < best_d - 1e-12) {
            best_d = d;
            best = p;
        }
    }
    return best;
}

void validate_walk(const WalkSpec &spec) {
    if (!(spec.h > 0)) {
        throw std::invalid_argument("walk hopping h must be positive");
    }
    if (spec.samples < 1) {
        throw std::invalid_argument("walk samples must be at least 1");
    }
    if (spec.times.empty()) {
        throw std::invalid_argument("walk times must not be empty");
    }
    for (size_t j = 0; j < spec.times.size(); j++) {
        if (!(spec.times[j] >= 0) || (j > 0 && !(spec.times[j] > spec.times[j - 1]))) {
            throw std::invalid_argument("walk times must be non-negative and increasing");
        }
    }
    validate_disorder(spec.disorder);
}

ExponentFit fit_exponent(const std::vector<double> &t, const std::vector<double> &y,
                         const std::vector<uint8_t> &excluded) {
    if (t.size() != y.size() || (!excluded.empty() && excluded.size() != t.size())) {
        throw std::invalid_argument("fit series lengths differ");
    }
    double t_hi = 0.0;
    for (size_t j = 0; j < t.size(); j++) {
        if (t[j] > 0 && (excluded.empty() || !excluded[j])) {
            t_hi = std::max(t_hi, t[j]);
        }
    }
    ExponentFit fit;
    fit.t_hi = t_hi;
    fit.t_lo = t_hi / 10;
    std::vector<double> xs, ys;
    for (size_t j = 0; j < t.size(); j++) {
        if (t[j] > 0 && t[j] >= fit.t_lo * (1 - 1e-12) && t[j] <= t_hi && (excluded.empty() || !excluded[j])) {
            if (!(y[j] > 0)) {
                throw std::invalid_argument("spread vanishes inside the fit window");
            }
            xs.push_back(std::log(t[j]));
            ys.push_back(std::log(y[j]));
        }
    }
    fit.points = xs.size();
    if (xs.size() < 2) {
        throw std::invalid_argument("fit window holds fewer than two points");
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); i++) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); i++) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.exponent = sxy / sxx;
    if (xs.size() > 2) {
        double ssr = 0;
        for (size_t i = 0; i < xs.size(); i++) {
            double r = ys[i] - my - fit.exponent * (xs[i] - mx);
            ssr += r * r;
        }
        fit.std_error = std::sqrt(ssr / (n - 2) / sxx);
    }
    fit.ci = {fit.exponent - 1.96 * fit.std_error, fit.exponent + 1.96 * fit.std_error};
    return fit;
}

RealizationSeeds walk_seeds(uint64_t master, uint64_t index) {
    return {derive_seed(master, 80, index), derive_seed(master, 81, index)};
}

SpreadSeries run_walk_ensemble(const WalkSpec &spec, int workers, const BootstrapConfig &bootstrap) {
    validate_walk(spec);
    const size_t S = static_cast<size_t>(spec.samples);
    const size_t T = spec.times.size();
    SpreadSeries out;
    out.t = spec.times;
    out.samples = spec.samples;
    out.L = spec.lattice.L;
    out.disorder_ratio = spec.disorder.sigma / spec.h;
    out.per_sample.assign(S, std::vector<double>(T, 0.0));
    parallel_for(S, workers, [&](size_t i) {
        RealizationSeeds seeds = walk_seeds(spec.seed, i);
        LatticeSpec ls = spec.lattice;
        if (ls.kind == LatticeKind::random) {
            ls.seed = seeds.lattice;
        }
        StabilizerCode code = build_code(ls);
        DisorderSpec ds = spec.disorder;
        ds.seed = seeds.disorder;
        WalkPropagator prop(build_walk_hamiltonian(code, spec.h, sample_onsite(code, ds)));
        const uint32_t origin = central_plaquette(code);
        const auto d = distances_from(origin, code);
        Eigen::MatrixXd p = prop.probabilities(origin, spec.times);
        for (size_t j = 0; j < T; j++) {
            out.per_sample[i][j] = spread_from(p.col(static_cast<Eigen::Index>(j)), d, spec.measure);
        }
    });
    auto mean_series = [&](const std::vector<size_t> &idx) {
        std::vector<double> m(T, 0.0);
        for (size_t i : idx) {
            for (size_t j = 0; j < T; j++) {
                m[j] += out.per_sample[i][j];
            }
        }
        for (auto &v : m) {
            v /= static_cast<double>(idx.size());
        }
        return m;
    };
    std::vector<size_t> all(S);
    for (size_t i = 0; i < S; i++) {
        all[i] = i;
    }
    out.mean = mean_series(all);
    out.sem.assign(T, 0.0);
    out.boundary_warning.assign(T, 0);
    for (size_t j = 0; j < T; j++) {
        if (S > 1) {
            double ss = 0;
            for (size_t i = 0; i < S; i++) {
                ss += (out.per_sample[i][j] - out.mean[j]) * (out.per_sample[i][j] - out.mean[j]);
            }
            out.sem[j] = std::sqrt(ss / static_cast<double>(S - 1) / static_cast<double>(S));
        }
        out.boundary_warning[j] = out.mean[j] >= 0.25 * spec.lattice.L;
    }
    out.fit = fit_exponent(out.t, out.mean, out.boundary_warning);
    if (S > 1) {
        std::vector<double> reps;
        for (int r = 0; r < bootstrap.resamples; r++) {
            Rng rng(derive_seed(bootstrap.seed, 82, r));
            std::vector<size_t> idx(S);
            for (auto &x : idx) {
                x = rng() % S;
            }
            try {
                reps.push_back(fit_exponent(out.t, mean_series(idx), out.boundary_warning).exponent);
            } catch (const std::invalid_argument &) {
            }
        }
        if (!reps.empty()) {
            double a = 0.5 * (1 - bootstrap.confidence);
            out.fit.ci = {percentile(reps, a), percentile(reps, 1 - a)};
        }
    }
    return out;
}

}  // namespace toric
