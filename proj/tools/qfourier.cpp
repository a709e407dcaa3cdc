// Copyright 2026 The qfourier Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// qfourier: command-line front end.
//
// Exit codes: 0 success, 2 configuration/validation/resource error,
// 3 numeric failure.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qfourier/analysis.hpp"
#include "qfourier/circuit.hpp"
#include "qfourier/config.hpp"
#include "qfourier/errors.hpp"
#include "qfourier/experiment.hpp"
#include "qfourier/noise.hpp"
#include "qfourier/simulator.hpp"
#include "qfourier/spectrum.hpp"
#include "qfourier/training.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qfourier;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::string join(const std::vector<double> &v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out << (i ? " " : "") << v[i];
    }
    return out.str();
}

/// "1,2/3,4" -> {{0,1},{2,3}} (one-based on the command line).
std::vector<std::vector<std::size_t>> parse_groups(const std::string &text, std::size_t dims) {
    std::vector<std::vector<std::size_t>> groups;
    std::stringstream blocks(text);
    std::string block;
    while (std::getline(blocks, block, '/')) {
        std::vector<std::size_t> g;
        std::stringstream items(block);
        std::string item;
        while (std::getline(items, item, ',')) {
            std::size_t pos = 0;
            long long v = 0;
            try {
                v = std::stoll(item, &pos);
            } catch (const std::exception &) {
                pos = 0;
            }
            if (pos == 0 || pos != item.size() || v < 1 || static_cast<std::size_t>(v) > dims) {
                throw ConfigError("invalid group entry \"" + item + "\" (features are 1.." +
                                  std::to_string(dims) + ")");
            }
            g.push_back(static_cast<std::size_t>(v - 1));
        }
        groups.push_back(std::move(g));
    }
    return groups;
}

void write_text(const fs::path &path, const std::string &text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << text;
}

void write_timing(const fs::path &dir, double seconds) {
    write_json(dir / "timing.json", json{{"wall_time_seconds", seconds}});
}

std::string loss_csv(const std::vector<TrainReport> &runs) {
    std::ostringstream out;
    out.precision(17);
    out << "iteration";
    for (const auto &r : runs) {
        out << ",seed_" << r.seed;
    }
    out << '\n';
    const std::size_t n = runs.empty() ? 0 : runs.front().loss_history.size();
    for (std::size_t i = 0; i < n; ++i) {
        out << i;
        for (const auto &r : runs) {
            out << ',' << r.loss_history[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string coefficients_csv(const CoefficientTable &t) {
    std::ostringstream out;
    write_coefficients_csv(out, t);
    return out.str();
}

std::string diff_csv(const CoefficientDiff &d) {
    CoefficientTable t;
    t.frequencies = d.frequencies;
    t.values = d.diff;
    t.stride.assign(d.frequencies.empty() ? 0 : d.frequencies.front().size(), 1);
    return coefficients_csv(t);
}

std::vector<double> load_theta(const fs::path &path, std::size_t expected) {
    const json j = read_json(path);
    std::vector<double> theta;
    try {
        theta = j.at("theta").get<std::vector<double>>();
    } catch (const json::exception &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    if (theta.size() != expected) {
        throw ContractError("theta file has " + std::to_string(theta.size()) +
                            " parameters, circuit needs " + std::to_string(expected));
    }
    return theta;
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
    std::vector<double> prefactors;
    std::size_t dims = 1;
    std::string groups;
    std::size_t params = 0;
    bool csv = false;
};

int cmd_spectrum(const SpectrumArgs &a) {
    if (a.prefactors.empty()) {
        throw ConfigError("--prefactors needs at least one value");
    }
    for (double p : a.prefactors) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw ConfigError("prefactors must be positive and finite");
        }
    }
    if (a.dims < 1) {
        throw ConfigError("--dims must be at least 1");
    }
    const std::vector<std::vector<double>> per_dim(a.dims, a.prefactors);
    std::vector<std::vector<std::size_t>> groups;
    if (a.groups.empty()) {
        groups.emplace_back();
        for (std::size_t k = 0; k < a.dims; ++k) {
            groups.back().push_back(k);
        }
    } else {
        groups = parse_groups(a.groups, a.dims);
    }
    const MixedSpectrum ms = mixed_spectrum(per_dim, groups);
    const Cardinality card = mixed_cardinality(ms);
    const Spectrum1D one = spectrum_from_prefactors(a.prefactors);
    if (a.csv) {
        std::cout << "omega\n";
        for (double w : one.frequencies()) {
            std::cout << w << '\n';
        }
        return 0;
    }
    std::cout << "per-dimension spectrum (" << one.size() << " frequencies): "
              << join(one.frequencies()) << '\n';
    for (std::size_t b = 0; b < ms.blocks.size(); ++b) {
        std::cout << "group " << (b + 1) << " dims {";
        for (std::size_t k = 0; k < ms.blocks[b].dims.size(); ++k) {
            std::cout << (k ? "," : "") << (ms.blocks[b].dims[k] + 1);
        }
        std::cout << "}: " << card.per_block[b] << " frequency vectors\n";
    }
    std::cout << "total: " << card.total << '\n'
              << "shared zero vectors: " << card.shared_zero << '\n'
              << "distinct vectors: " << card.distinct << '\n';
    if (a.params > 0) {
        std::cout << "parameters: " << a.params << " -> "
                  << (a.params >= card.total ? "sufficient" : "insufficient") << '\n';
    }
    return 0;
}

struct RunArgs {
    std::string config;
    std::string theta;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> iterations;
    std::optional<std::size_t> subset;
    std::optional<std::size_t> shots;
    bool coefficients = false;
};

RunConfig resolve(const RunArgs &a) {
    RunConfig c = load_config(a.config);
    if (a.seed) {
        c.train.seed = *a.seed;
    }
    if (a.runs) {
        c.n_runs = *a.runs;
    }
    if (a.iterations) {
        c.train.iterations = *a.iterations;
    }
    if (a.subset) {
        c.noisy_eval.subset = *a.subset;
    }
    if (a.shots) {
        c.noise.shots = *a.shots;
    }
    c.validate();
    return c;
}

struct CoefficientSet {
    CoefficientTable model;
    CoefficientTable target;
    CoefficientDiff diff;
};

CoefficientSet coefficients_for(const RunConfig &c, const ParamCircuit &circuit,
                                const Dataset &data, const std::vector<double> &theta) {
    const long long stride = c.analysis.stride.empty() ? 1 : c.analysis.stride.front();
    const auto freqs = frequency_box(c.target.d, c.analysis.limit, stride);
    CoefficientSet s;
    s.model = dft_coefficients(model_function(circuit, theta), c.target.d, freqs,
                               c.analysis.n_grid, c.analysis.stride);
    s.target = dft_coefficients(scaled_target_function(c.target, data.scaling), c.target.d, freqs,
                                c.analysis.n_grid, c.analysis.stride);
    s.diff = coefficient_diff(s.model, s.target);
    return s;
}

void write_coefficients(const fs::path &dir, const CoefficientSet &s) {
    write_text(dir / "coefficients_model.csv", coefficients_csv(s.model));
    write_text(dir / "coefficients_target.csv", coefficients_csv(s.target));
    write_text(dir / "coefficients_diff.csv", diff_csv(s.diff));
}

int cmd_gen_data(const RunArgs &a) {
    const RunConfig c = resolve(a);
    const fs::path dir(a.out);
    const RowMatrix grid = cartesian_grid(c.data.points_per_dim, c.target.d, c.data.row_cap);
    std::vector<double> y(grid.rows());
    for (std::size_t r = 0; r < grid.rows(); ++r) {
        y[r] = eval_target(c.target, grid.row(r));
    }
    const Dataset scaled = minmax_scale(grid, y);
    fs::create_directories(dir);
    std::ofstream raw(dir / "data.csv");
    write_csv(raw, grid, y);
    std::ofstream sc(dir / "data_scaled.csv");
    write_csv(sc, scaled.inputs, scaled.targets);
    write_json(dir / "data.json",
               json{{"schema_version", kSchemaVersion},
                    {"config", to_json(c)},
                    {"rows", grid.rows()},
                    {"output_min", scaled.scaling.output_min},
                    {"output_max", scaled.scaling.output_max}});
    std::cout << "wrote " << grid.rows() << " rows to " << (dir / "data.csv").string() << '\n';
    return 0;
}

int cmd_train(const RunArgs &a) {
    const RunConfig c = resolve(a);
    const fs::path dir(a.out);
    const Dataset data = make_dataset(c.target, c.data.points_per_dim, c.data.row_cap);
    const ParamCircuit circuit = build_circuit(c.model);
    const SufficiencyReport suff = parameter_sufficiency(c.model);
    std::vector<TrainReport> runs = multi_run(c.model, data, c.train, c.n_runs);

    double wall = 0.0;
    json run_json = json::array();
    std::vector<double> scores;
    for (const auto &r : runs) {
        wall += r.wall_time;
        run_json.push_back(to_json(r));
        scores.push_back(r.r2_test);
        std::cout << "seed " << r.seed << ": r2_train " << r.r2_train << ", r2_test " << r.r2_test
                  << " (" << r.engine << ")\n";
    }
    json report{{"schema_version", kSchemaVersion},
                {"command", "train"},
                {"config", to_json(c)},
                {"n_qubits", circuit.n_qubits()},
                {"n_params", circuit.n_params()},
                {"spectrum_cardinality", suff.spectrum_cardinality},
                {"sufficient", suff.sufficient},
                {"runs", run_json},
                {"r2_test", to_json(summarize_runs(scores))}};
    if (a.coefficients) {
        const CoefficientSet s = coefficients_for(c, circuit, data, runs.front().final_theta);
        write_coefficients(dir, s);
        report["coefficient_diff_max_abs"] = s.diff.max_abs;
    }
    write_json(dir / "report.json", report);
    write_text(dir / "loss.csv", loss_csv(runs));
    write_json(dir / "theta.json", json{{"schema_version", kSchemaVersion},
                                        {"seed", runs.front().seed},
                                        {"n_params", circuit.n_params()},
                                        {"theta", runs.front().final_theta}});
    write_timing(dir, wall);
    return 0;
}

struct ExperimentArgs {
    std::string preset;
    std::string out = "out";
    bool paper_scale = false;
    std::vector<std::string> variants;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> iterations;
};

int cmd_experiment(const ExperimentArgs &a) {
    ExperimentPreset p = make_preset(a.preset, a.paper_scale);
    if (!a.variants.empty()) {
        select_variants(p, a.variants);
    }
    if (a.seed) {
        p.train.seed = *a.seed;
    }
    if (a.runs) {
        p.n_runs = *a.runs;
    }
    if (a.iterations) {
        p.train.iterations = *a.iterations;
    }
    double rows = 1.0;
    for (std::size_t k = 0; k < p.target.d; ++k) {
        rows *= static_cast<double>(p.data.points_per_dim);
    }
    if (rows > static_cast<double>(p.data.row_cap)) {
        throw ResourceError("dataset of " + std::to_string(static_cast<long long>(rows)) +
                            " rows exceeds the cap of " + std::to_string(p.data.row_cap) +
                            "; use desk scale or fewer points per dimension");
    }
    if (a.paper_scale) {
        std::cerr << "warning: --paper-scale runs " << p.n_runs << " seeds x "
                  << p.train.iterations << " iterations per variant and may take many hours\n";
    }
    const fs::path dir(a.out);
    const auto start = std::chrono::steady_clock::now();
    const ExperimentResult r =
        run_experiment(p, [](const std::string &msg) { std::cout << msg << std::endl; });
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json report{{"schema_version", kSchemaVersion},
                {"command", "experiment"},
                {"config", to_json(p)},
                {"result", to_json(r)}};
    write_json(dir / "report.json", report);
    if (r.model_coefficients) {
        write_coefficients(dir, {*r.model_coefficients, *r.target_coefficients, *r.coefficient_diff});
    }
    for (const auto &v : r.variants) {
        std::cout << v.name << " @" << v.budget << " (" << v.n_params
                  << " params): median r2_test " << v.r2_test.median << " [IQR " << v.r2_test.q25
                  << ", " << v.r2_test.q75 << "]\n";
    }
    write_timing(dir, wall);
    return 0;
}

int cmd_coeffs(const RunArgs &a) {
    const RunConfig c = resolve(a);
    const fs::path dir(a.out);
    const Dataset data = make_dataset(c.target, c.data.points_per_dim, c.data.row_cap);
    const ParamCircuit circuit = build_circuit(c.model);
    const std::vector<double> theta = load_theta(a.theta, circuit.n_params());
    const CoefficientSet s = coefficients_for(c, circuit, data, theta);
    write_coefficients(dir, s);
    write_json(dir / "coefficients.json",
               json{{"schema_version", kSchemaVersion},
                    {"command", "coeffs"},
                    {"config", to_json(c)},
                    {"max_abs_diff", s.diff.max_abs},
                    {"argmax", s.diff.argmax}});
    std::cout << "max |model - target| = " << s.diff.max_abs << '\n';
    return 0;
}

int cmd_noisy_eval(const RunArgs &a) {
    const RunConfig c = resolve(a);
    const fs::path dir(a.out);
    const Dataset data = make_dataset(c.target, c.data.points_per_dim, c.data.row_cap);
    const ParamCircuit circuit = build_circuit(c.model);
    const std::vector<double> theta = load_theta(a.theta, circuit.n_params());
    const Split sp = split(data, c.train.seed);
    const std::vector<std::size_t> rows =
        c.noisy_eval.subset == 0 ? sp.test : subset_rows(sp.test, c.noisy_eval.subset, c.noisy_eval.seed);

    const auto start = std::chrono::steady_clock::now();
    std::vector<double> clean;
    std::vector<double> targets;
    for (std::size_t r : rows) {
        clean.push_back(model_output(circuit, data.inputs.row(r), theta));
        targets.push_back(data.targets[r]);
    }
    const double r2_clean = r2(clean, targets);
    const NoisyEvaluation noisy = noisy_evaluate(circuit, data, rows, theta, c.noise, c.noisy_eval.seed);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_json(dir / "noisy_report.json",
               json{{"schema_version", kSchemaVersion},
                    {"command", "noisy-eval"},
                    {"config", to_json(c)},
                    {"rows", rows},
                    {"r2_noiseless", r2_clean},
                    {"r2_noisy", noisy.r2},
                    {"predictions_noiseless", clean},
                    {"predictions_noisy", noisy.predictions}});
    write_timing(dir, wall);
    std::cout << "rows " << rows.size() << ": r2 noiseless " << r2_clean << ", noisy " << noisy.r2
              << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Frequency-selected quantum Fourier models"};
    app.require_subcommand(1);

    SpectrumArgs spec;
    auto *s = app.add_subcommand("spectrum", "Frequency spectrum and cardinalities");
    s->add_option("--prefactors,--per-dim", spec.prefactors, "Prefactors per dimension")
        ->delimiter(',')
        ->required();
    s->add_option("--dims", spec.dims, "Number of input dimensions");
    s->add_option("--groups", spec.groups, "Mixed groups, e.g. 1,2/3,4 (default: one group)");
    s->add_option("--params", spec.params, "Parameter count to check for sufficiency");
    s->add_flag("--csv", spec.csv, "Print the per-dimension spectrum as CSV");

    RunArgs run;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", run.config, "JSON configuration")->required();
        sub->add_option("--out", run.out, "Output directory");
        sub->add_option("--seed", run.seed, "Override train.seed");
    };
    auto *g = app.add_subcommand("gen-data", "Write the sampled dataset");
    add_common(g);
    auto *t = app.add_subcommand("train", "Train a model");
    add_common(t);
    t->add_option("--runs", run.runs, "Override n_runs");
    t->add_option("--iterations", run.iterations, "Override train.iterations");
    t->add_flag("--coefficients", run.coefficients, "Also write coefficient tables");
    auto *c = app.add_subcommand("coeffs", "Fourier coefficients of a trained model");
    add_common(c);
    c->add_option("--theta", run.theta, "theta.json from train")->required();
    auto *n = app.add_subcommand("noisy-eval", "Evaluate a trained model with shot noise");
    add_common(n);
    n->add_option("--theta", run.theta, "theta.json from train")->required();
    n->add_option("--subset", run.subset, "Test rows to evaluate (0 = all)");
    n->add_option("--shots", run.shots, "Override noise.shots");

    ExperimentArgs exp;
    auto *e = app.add_subcommand("experiment", "Run a comparison preset");
    e->add_option("preset", exp.preset, "exp2d or exp4d")->required();
    e->add_option("--out", exp.out, "Output directory");
    e->add_option("--seed", exp.seed, "Base seed");
    e->add_option("--runs", exp.runs, "Runs per variant");
    e->add_option("--iterations", exp.iterations, "Iterations per run");
    e->add_option("--variants", exp.variants, "Subset of variants")->delimiter(',');
    e->add_flag("--paper-scale", exp.paper_scale, "Full grids, 5000 iterations, 100 runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &err) {
        return app.exit(err);
    } catch (const CLI::ParseError &err) {
        (void)app.exit(err);
        return kExitConfig;
    }

    try {
        if (s->parsed()) {
            return cmd_spectrum(spec);
        }
        if (g->parsed()) {
            return cmd_gen_data(run);
        }
        if (t->parsed()) {
            return cmd_train(run);
        }
        if (c->parsed()) {
            return cmd_coeffs(run);
        }
        if (n->parsed()) {
            return cmd_noisy_eval(run);
        }
        if (e->parsed()) {
            return cmd_experiment(exp);
        }
    } catch (const NumericError &err) {
        std::cerr << "numeric error: " << err.what() << '\n';
        return kExitNumeric;
    } catch (const Error &err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitConfig;
    } catch (const fs::filesystem_error &err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitConfig;
    }
    return kExitConfig;
}
