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
#include "qfourier/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "qfourier/errors.hpp"

namespace qfourier {

using nlohmann::json;

namespace {

/// Reads keys from one JSON object and rejects the ones nobody asked for.
class Section {
  public:
    Section(const json &j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw ConfigError(path_ + " must be an object");
        }
    }

    template <class T> void get(const std::string &key, T &out) {
        seen_.insert(key);
        const auto it = j_.find(key);
        if (it == j_.end()) {
            return;
        }
        try {
            out = it->template get<T>();
        } catch (const json::exception &e) {
            throw ConfigError(path_ + "." + key + ": " + e.what());
        }
    }

    [[nodiscard]] const json *child(const std::string &key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    [[nodiscard]] std::string path(const std::string &key) const { return path_ + "." + key; }

    void finish() const {
        for (const auto &item : j_.items()) {
            if (seen_.count(item.key()) == 0U) {
                throw ConfigError("unknown key " + path_ + "." + item.key());
            }
        }
    }

  private:
    const json &j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string axis_name(GateKind k) {
    switch (k) {
    case GateKind::RY:
        return "RY";
    case GateKind::RZ:
        return "RZ";
    default:
        return "RX";
    }
}

std::string engine_name(EngineKind k) {
    switch (k) {
    case EngineKind::Direct:
        return "direct";
    case EngineKind::Spectral:
        return "spectral";
    case EngineKind::Auto:
        break;
    }
    return "auto";
}

ModelConfig parse_model_at(const json &j, const std::string &where) {
    ModelConfig m;
    Section s(j, where);
    std::string arch = "parallel";
    std::string axis = "RX";
    std::string combine = "sum";
    s.get("architecture", arch);
    s.get("prefactors", m.prefactors);
    s.get("groups", m.groups);
    s.get("blocks_per_layer", m.blocks_per_layer);
    s.get("encoding_axis", axis);
    s.get("combine", combine);
    s.finish();
    if (arch == "parallel") {
        m.architecture = Architecture::Parallel;
    } else if (arch == "serial") {
        m.architecture = Architecture::Serial;
    } else {
        throw ConfigError(s.path("architecture") + " must be \"serial\" or \"parallel\"");
    }
    if (axis == "RX") {
        m.encoding_axis = GateKind::RX;
    } else if (axis == "RY") {
        m.encoding_axis = GateKind::RY;
    } else if (axis == "RZ") {
        m.encoding_axis = GateKind::RZ;
    } else {
        throw ConfigError(s.path("encoding_axis") + " must be RX, RY or RZ");
    }
    if (combine == "sum") {
        m.combine = Combine::Sum;
    } else if (combine == "mean") {
        m.combine = Combine::Mean;
    } else {
        throw ConfigError(s.path("combine") + " must be \"sum\" or \"mean\"");
    }
    return m;
}

TrainConfig parse_train_at(const json &j, const std::string &where) {
    TrainConfig t;
    Section s(j, where);
    std::string engine = "auto";
    s.get("learning_rate", t.learning_rate);
    s.get("iterations", t.iterations);
    s.get("beta1", t.beta1);
    s.get("beta2", t.beta2);
    s.get("epsilon", t.epsilon);
    s.get("init_low", t.init_low);
    s.get("init_high", t.init_high);
    s.get("seed", t.seed);
    s.get("engine", engine);
    s.get("track_test_loss", t.track_test_loss);
    s.finish();
    if (engine == "auto") {
        t.engine = EngineKind::Auto;
    } else if (engine == "direct") {
        t.engine = EngineKind::Direct;
    } else if (engine == "spectral") {
        t.engine = EngineKind::Spectral;
    } else {
        throw ConfigError(s.path("engine") + " must be auto, direct or spectral");
    }
    return t;
}

NoiseModel parse_noise_at(const json &j, const std::string &where) {
    NoiseModel n;
    Section s(j, where);
    s.get("p_1q", n.p_1q);
    s.get("p_2q", n.p_2q);
    s.get("p_readout", n.p_readout);
    s.get("shots", n.shots);
    s.finish();
    return n;
}

TargetSpec parse_target_at(const json &j, const std::string &where) {
    if (j.is_string()) {
        return target_preset(j.get<std::string>());
    }
    TargetSpec t;
    Section s(j, where);
    s.get("d", t.d);
    s.get("c0", t.c0);
    const json *terms = s.child("terms");
    s.finish();
    if (terms != nullptr) {
        if (!terms->is_array()) {
            throw ConfigError(where + ".terms must be an array");
        }
        for (std::size_t i = 0; i < terms->size(); ++i) {
            FourierTerm term;
            double re = 0.0;
            double im = 0.0;
            Section ts((*terms)[i], where + ".terms[" + std::to_string(i) + "]");
            ts.get("frequency", term.frequency);
            ts.get("re", re);
            ts.get("im", im);
            ts.finish();
            term.coefficient = Complex{re, im};
            t.terms.push_back(std::move(term));
        }
    }
    return t;
}

} // namespace

TargetSpec target_preset(const std::string &name) {
    if (name == "t2d") {
        return TargetSpec::t2d();
    }
    if (name == "t4d") {
        return TargetSpec::t4d();
    }
    if (name == "cos") {
        // cos(x) = 2 Re[0.5 exp(ix)]
        TargetSpec t;
        t.d = 1;
        t.terms.push_back({{1.0}, Complex{0.5, 0.0}});
        return t;
    }
    throw ConfigError("unknown target preset \"" + name + "\" (expected t2d, t4d or cos)");
}

ModelConfig parse_model(const json &j) { return parse_model_at(j, "model"); }
TrainConfig parse_train(const json &j) { return parse_train_at(j, "train"); }
NoiseModel parse_noise(const json &j) { return parse_noise_at(j, "noise"); }
TargetSpec parse_target(const json &j) { return parse_target_at(j, "target"); }

void RunConfig::validate() const {
    target.validate();
    model.validate();
    train.validate();
    noise.validate();
    if (model.n_features() != target.d) {
        throw ConfigError("model has " + std::to_string(model.n_features()) +
                          " features but the target is " + std::to_string(target.d) +
                          "-dimensional");
    }
    if (data.points_per_dim < 2) {
        throw ConfigError("data.points_per_dim must be at least 2");
    }
    double rows = 1.0;
    for (std::size_t k = 0; k < target.d; ++k) {
        rows *= static_cast<double>(data.points_per_dim);
    }
    if (rows > static_cast<double>(data.row_cap)) {
        throw ResourceError("grid of " + std::to_string(data.points_per_dim) + "^" +
                            std::to_string(target.d) + " rows exceeds row_cap " +
                            std::to_string(data.row_cap) + "; lower data.points_per_dim");
    }
    if (n_runs < 1) {
        throw ConfigError("n_runs must be at least 1");
    }
    if (!analysis.stride.empty() && analysis.stride.size() != target.d) {
        throw ConfigError("analysis.stride needs one entry per dimension");
    }
    for (std::size_t k = 0; k < target.d; ++k) {
        const long long g = analysis.stride.empty() ? 1 : analysis.stride[k];
        if (g < 1) {
            throw ConfigError("analysis.stride entries must be positive");
        }
        if (analysis.n_grid <= static_cast<std::size_t>(2 * (analysis.limit / g))) {
            throw ConfigError("analysis.n_grid " + std::to_string(analysis.n_grid) +
                              " aliases frequency " + std::to_string(analysis.limit) +
                              "; raise n_grid or lower limit");
        }
    }
    if (analysis.limit < 0) {
        throw ConfigError("analysis.limit must be non-negative");
    }
}

RunConfig parse_config(const json &j) {
    RunConfig c;
    Section s(j, "config");
    int version = kSchemaVersion;
    s.get("schema_version", version);
    if (version != kSchemaVersion) {
        throw ConfigError("unsupported schema_version " + std::to_string(version));
    }
    if (const json *t = s.child("target")) {
        c.target = parse_target_at(*t, "target");
        c.target_name = t->is_string() ? t->get<std::string>() : "inline";
    }
    if (const json *d = s.child("data")) {
        Section ds(*d, "data");
        ds.get("points_per_dim", c.data.points_per_dim);
        ds.get("row_cap", c.data.row_cap);
        ds.finish();
    }
    if (const json *m = s.child("model")) {
        c.model = parse_model_at(*m, "model");
    } else {
        c.model.prefactors = {{10.0, 20.0}, {10.0, 20.0}};
        c.model.blocks_per_layer = 10;
    }
    if (const json *t = s.child("train")) {
        c.train = parse_train_at(*t, "train");
    }
    if (const json *n = s.child("noise")) {
        c.noise = parse_noise_at(*n, "noise");
    }
    if (const json *n = s.child("noisy_eval")) {
        Section ns(*n, "noisy_eval");
        ns.get("subset", c.noisy_eval.subset);
        ns.get("seed", c.noisy_eval.seed);
        ns.finish();
    }
    if (const json *a = s.child("analysis")) {
        Section as(*a, "analysis");
        as.get("n_grid", c.analysis.n_grid);
        as.get("limit", c.analysis.limit);
        as.get("stride", c.analysis.stride);
        as.finish();
    }
    s.get("n_runs", c.n_runs);
    s.finish();
    c.validate();
    return c;
}

RunConfig load_config(const std::filesystem::path &path) { return parse_config(read_json(path)); }

json to_json(const ModelConfig &m) {
    return json{{"architecture", m.architecture == Architecture::Serial ? "serial" : "parallel"},
                {"prefactors", m.prefactors},
                {"groups", m.resolved_groups()},
                {"blocks_per_layer", m.blocks_per_layer},
                {"encoding_axis", axis_name(m.encoding_axis)},
                {"combine", m.combine == Combine::Mean ? "mean" : "sum"}};
}

json to_json(const TrainConfig &t) {
    return json{{"learning_rate", t.learning_rate}, {"iterations", t.iterations},
                {"beta1", t.beta1},                 {"beta2", t.beta2},
                {"epsilon", t.epsilon},             {"init_low", t.init_low},
                {"init_high", t.init_high},         {"seed", t.seed},
                {"engine", engine_name(t.engine)},  {"track_test_loss", t.track_test_loss}};
}

json to_json(const NoiseModel &n) {
    return json{{"p_1q", n.p_1q}, {"p_2q", n.p_2q}, {"p_readout", n.p_readout}, {"shots", n.shots}};
}

json to_json(const TargetSpec &t) {
    json terms = json::array();
    for (const auto &term : t.terms) {
        terms.push_back(json{{"frequency", term.frequency},
                             {"re", term.coefficient.real()},
                             {"im", term.coefficient.imag()}});
    }
    return json{{"d", t.d}, {"c0", t.c0}, {"terms", terms}};
}

json to_json(const RunConfig &c) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["target"] = c.target_name == "inline" ? to_json(c.target) : json(c.target_name);
    j["data"] = {{"points_per_dim", c.data.points_per_dim}, {"row_cap", c.data.row_cap}};
    j["model"] = to_json(c.model);
    j["train"] = to_json(c.train);
    j["noise"] = to_json(c.noise);
    j["noisy_eval"] = {{"subset", c.noisy_eval.subset}, {"seed", c.noisy_eval.seed}};
    j["analysis"] = {{"n_grid", c.analysis.n_grid},
                     {"limit", c.analysis.limit},
                     {"stride", c.analysis.stride}};
    j["n_runs"] = c.n_runs;
    return j;
}

json to_json(const TrainReport &r, bool with_history) {
    json j{{"seed", r.seed},
           {"engine", r.engine},
           {"iterations", r.loss_history.size()},
           {"initial_loss", r.loss_history.empty() ? 0.0 : r.loss_history.front()},
           {"final_train_mse", r.final_train_mse},
           {"final_test_mse", r.final_test_mse},
           {"r2_train", r.r2_train},
           {"r2_test", r.r2_test},
           {"final_theta", r.final_theta}};
    if (with_history) {
        j["loss_history"] = r.loss_history;
        if (!r.test_loss_history.empty()) {
            j["test_loss_history"] = r.test_loss_history;
        }
    }
    return j;
}

json to_json(const RunSummary &s) {
    return json{{"n", s.n},       {"mean", s.mean}, {"median", s.median}, {"q25", s.q25},
                {"q75", s.q75},   {"min", s.min},   {"max", s.max}};
}

json to_json(const CoefficientTable &t) {
    json values = json::array();
    for (std::size_t i = 0; i < t.frequencies.size(); ++i) {
        values.push_back(json{{"w", t.frequencies[i]},
                              {"re", t.values[i].real()},
                              {"im", t.values[i].imag()}});
    }
    return json{{"n_grid", t.n_grid}, {"stride", t.stride}, {"coefficients", values}};
}

void write_json(const std::filesystem::path &path, const json &value) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write " + path.string());
    }
    out << value.dump(2) << '\n';
}

json read_json(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

} // namespace qfourier
