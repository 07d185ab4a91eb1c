// Copyright 2026 The quinr Authors
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

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "quinr/quinr.hpp"

namespace {

using namespace quinr;

// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct IoFlags {
    int f32_height = 0;
    int f32_width = 0;
};

SignalTensor load_signal(const std::string &path, const IoFlags &io) {
    if (ends_with(path, ".f32")) {
        if (io.f32_height < 1 || io.f32_width < 1) {
            throw ConfigError("raw range images need --f32-height and --f32-width");
        }
        return load_range_image(path, io.f32_height, io.f32_width);
    }
    return load_image(path);
}

void write_file(const std::string &path, const std::vector<uint8_t> &bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot write '" + path + "'");
    }
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw IoError("short write on '" + path + "'");
    }
}

std::vector<uint8_t> read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    std::vector<uint8_t> bytes(static_cast<size_t>(in.tellg()));
    in.seekg(0);
    in.read(reinterpret_cast<char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!in) {
        throw IoError("short read on '" + path + "'");
    }
    return bytes;
}

Activation parse_activation(const std::string &name) {
    if (name == "qrelu") return Activation::QRelu;
    if (name == "relu") return Activation::Relu;
    if (name == "leaky_relu") return Activation::LeakyRelu;
    if (name == "identity") return Activation::Identity;
    throw ConfigError("unknown activation '" + name + "'");
}

SineForm parse_sine_form(const std::string &name) {
    if (name == "wx") return SineForm::OmegaWx;
    if (name == "wxb") return SineForm::OmegaWxB;
    throw ConfigError("unknown sine form '" + name + "' (use wx or wxb)");
}

ParamDtype parse_dtype(const std::string &name) {
    if (name == "fp32") return ParamDtype::F32;
    if (name == "fp16") return ParamDtype::F16;
    throw ConfigError("unknown dtype '" + name + "' (use fp32 or fp16)");
}

struct ModelFlags {
    std::string model = "quinr";
    int qubits = 4;
    int folds = 3;
    int embed = 0;  // 0 = derive qubits*folds
    int layers = 2;
    int blocks = 2;
    double w0 = 30.0;
    std::string activation = "qrelu";
    std::string sine_form = "wx";
    bool head_affine = true;
    uint64_t shuffle_seed = 1;
    uint64_t init_seed = 0;
    int hidden_width = 16;
    int hidden_layers = 2;

    ModelConfig quinr_config(int n_out) const {
        ModelConfig cfg;
        cfg.n_out = n_out;
        cfg.n_qubits = qubits;
        cfg.folds = folds;
        cfg.embed_size = embed > 0 ? embed : qubits * folds;
        cfg.entangling_layers = layers;
        cfg.blocks = blocks;
        cfg.omega0 = w0;
        cfg.activation = parse_activation(activation);
        cfg.sine_form = parse_sine_form(sine_form);
        cfg.head_affine = head_affine;
        cfg.shuffle_seed = shuffle_seed;
        cfg.init_seed = init_seed;
        cfg.validate();
        return cfg;
    }

    SirenConfig siren_config(int n_out) const {
        SirenConfig cfg;
        cfg.n_out = n_out;
        cfg.hidden_width = hidden_width;
        cfg.hidden_layers = hidden_layers;
        cfg.omega0 = w0;
        cfg.init_seed = init_seed;
        cfg.validate();
        return cfg;
    }
};

void add_model_flags(CLI::App *cmd, ModelFlags &flags) {
    cmd->add_option("--model", flags.model, "Model family: quinr or siren")
        ->check(CLI::IsMember({"quinr", "siren"}));
    cmd->add_option("--qubits", flags.qubits, "Qubit count of the circuit");
    cmd->add_option("--folds", flags.folds, "Folding rounds of the angle embedding");
    cmd->add_option("--embed", flags.embed, "Embedding size M (must equal qubits*folds)");
    cmd->add_option("--layers", flags.layers, "Entangling layers per block");
    cmd->add_option("--blocks", flags.blocks, "Re-uploading blocks");
    cmd->add_option("--w0", flags.w0, "Sinusoidal frequency scale");
    cmd->add_option("--activation", flags.activation, "Output activation")
        ->check(CLI::IsMember({"qrelu", "relu", "leaky_relu", "identity"}));
    cmd->add_option("--sine-form", flags.sine_form,
                    "Input layer form: wx = sin(w0*Wx+b), wxb = sin(w0*(Wx+b))")
        ->check(CLI::IsMember({"wx", "wxb"}));
    cmd->add_flag("--head-affine,!--no-head-affine", flags.head_affine,
                  "Per-channel affine rescale before the activation");
    cmd->add_option("--shuffle-seed", flags.shuffle_seed, "Seed of the per-block shuffles");
    cmd->add_option("--init-seed", flags.init_seed, "Seed of the parameter init");
    cmd->add_option("--hidden-width", flags.hidden_width, "Siren hidden width");
    cmd->add_option("--hidden-layers", flags.hidden_layers, "Siren hidden layer count");
}

struct TrainFlags {
    int steps = 10000;
    double lr = 1e-3;
    int batch = 1024;
    uint64_t seed = 0;
    int report_interval = 100;
    bool quiet = false;

    TrainOptions options() const {
        TrainOptions opts;
        opts.steps = steps;
        opts.lr = lr;
        opts.batch_size = batch;
        opts.seed = seed;
        opts.report_interval = report_interval;
        opts.verbose = !quiet;
        return opts;
    }
};

void add_train_flags(CLI::App *cmd, TrainFlags &flags) {
    cmd->add_option("--steps", flags.steps, "Optimization steps");
    cmd->add_option("--lr", flags.lr, "Adam learning rate");
    cmd->add_option("--batch", flags.batch, "Coordinates per minibatch");
    cmd->add_option("--seed", flags.seed, "Batch shuffling seed");
    cmd->add_option("--report-interval", flags.report_interval,
                    "Steps between progress/checkpoint evaluations");
    cmd->add_flag("--quiet", flags.quiet, "Suppress progress lines on stderr");
}

void add_io_flags(CLI::App *cmd, IoFlags &flags) {
    cmd->add_option("--f32-height", flags.f32_height, "Rows of a raw .f32 input");
    cmd->add_option("--f32-width", flags.f32_width, "Columns of a raw .f32 input");
}

int cmd_encode(const std::string &input, const std::string &output, const ModelFlags &model_flags,
               const TrainFlags &train_flags, const IoFlags &io_flags, const std::string &dtype_name,
               int refine_sweeps) {
    const SignalTensor source = load_signal(input, io_flags);
    const CoordinateDataset ds = build_dataset(source);
    const SignalMeta meta{ds.h, ds.w, ds.c, ds.domain};
    const ParamDtype dtype = parse_dtype(dtype_name);
    const TrainOptions opts = train_flags.options();

    std::vector<uint8_t> bytes;
    if (model_flags.model == "quinr") {
        auto [model, report] = encode(source, model_flags.quinr_config(ds.c), opts);
        refine_for_dtype(model, ds, dtype, refine_sweeps);
        bytes = serialize(model, meta, ds.norms, dtype);
    } else {
        auto [model, report] = encode_siren(source, model_flags.siren_config(ds.c), opts);
        refine_for_dtype(model, ds, dtype, refine_sweeps);
        bytes = serialize(model, meta, ds.norms, dtype);
    }
    write_file(output, bytes);

    const double rate = bpp(bytes.size(), source.pixels());
    const double quality = psnr(source, decode(bytes));
    std::printf("bpp=%.6f psnr=%.4f\n", rate, quality);
    return kExitOk;
}

int cmd_decode(const std::string &input, const std::string &output) {
    const SignalTensor reconstruction = decode(read_file(input));
    if (reconstruction.domain == ValueDomain::FloatRange) {
        if (ends_with(output, ".png")) {
            throw IoError("stream holds float-range data; write it to a .f32 path");
        }
        save_range_image(output, reconstruction);
    } else {
        save_image(output, reconstruction);
    }
    std::printf("wrote %s (%dx%d, %d channel%s)\n", output.c_str(), reconstruction.w,
                reconstruction.h, reconstruction.c, reconstruction.c == 1 ? "" : "s");
    return kExitOk;
}

int cmd_eval(const std::string &ref_path, const std::string &test_path, const IoFlags &io_flags) {
    const SignalTensor ref = load_signal(ref_path, io_flags);
    const SignalTensor test = load_signal(test_path, io_flags);
    std::printf("psnr=%.4f\n", psnr(ref, test));
    return kExitOk;
}

int cmd_gradcheck(uint64_t seed) {
    const auto results = run_gradcheck(seed);
    bool ok = true;
    for (const auto &r : results) {
        std::printf("%s %s max_err=%.3g\n", r.pass ? "ok  " : "FAIL", r.name.c_str(),
                    r.max_scaled_err);
        ok = ok && r.pass;
    }
    if (!ok) {
        std::fprintf(stderr, "gradcheck failed\n");
        return kExitNumerical;
    }
    return kExitOk;
}

// --- sweep grid files: `key=v1,v2,...` lines, `#` comments ---

std::map<std::string, std::vector<std::string>> parse_grid_file(const std::string &path) {
    static const std::set<std::string> kKnown{
        "kind",         "qubits", "folds", "layers", "blocks",
        "hidden-width", "hidden-layers",   "dtype",  "steps",
        "lr",           "batch",  "seed"};
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open grid file '" + path + "'");
    }
    std::map<std::string, std::vector<std::string>> grid;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("grid file line " + std::to_string(line_no) + " is not key=value");
        }
        std::string key = line.substr(first, eq - first);
        while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) {
            key.pop_back();
        }
        if (!kKnown.count(key)) {
            throw ConfigError("unknown grid key '" + key + "' on line " + std::to_string(line_no));
        }
        std::vector<std::string> values;
        std::string token;
        for (size_t i = eq + 1; i <= line.size(); ++i) {
            if (i == line.size() || line[i] == ',') {
                while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) {
                    token.erase(token.begin());
                }
                while (!token.empty() &&
                       (token.back() == ' ' || token.back() == '\t' || token.back() == '\r')) {
                    token.pop_back();
                }
                if (!token.empty()) {
                    values.push_back(token);
                }
                token.clear();
            } else {
                token.push_back(line[i]);
            }
        }
        if (values.empty()) {
            throw ConfigError("grid key '" + key + "' has no values");
        }
        grid[key] = std::move(values);
    }
    return grid;
}

std::vector<int> grid_ints(const std::map<std::string, std::vector<std::string>> &grid,
                           const std::string &key, std::vector<int> fallback) {
    const auto it = grid.find(key);
    if (it == grid.end()) {
        return fallback;
    }
    std::vector<int> out;
    for (const std::string &v : it->second) {
        out.push_back(std::stoi(v));
    }
    return out;
}

int cmd_sweep(const std::string &input, const std::string &grid_path, const std::string &csv_path,
              const ModelFlags &model_flags, TrainFlags train_flags, const IoFlags &io_flags,
              std::vector<std::string> dtype_names, int jobs, bool no_timings, int refine_sweeps,
              const std::set<std::string> &explicit_flags) {
    const SignalTensor source = load_signal(input, io_flags);
    const int n_out = source.c;
    const auto grid_file = parse_grid_file(grid_path);

    // scalar overrides from the grid file; explicit flags win
    auto scalar = [&](const std::string &key) -> const std::string * {
        const auto it = grid_file.find(key);
        if (it == grid_file.end()) {
            return nullptr;
        }
        if (it->second.size() != 1) {
            throw ConfigError("grid key '" + key + "' must have a single value");
        }
        return &it->second.front();
    };
    if (const auto *v = scalar("steps"); v && !explicit_flags.count("steps")) {
        train_flags.steps = std::stoi(*v);
    }
    if (const auto *v = scalar("lr"); v && !explicit_flags.count("lr")) {
        train_flags.lr = std::stod(*v);
    }
    if (const auto *v = scalar("batch"); v && !explicit_flags.count("batch")) {
        train_flags.batch = std::stoi(*v);
    }
    if (const auto *v = scalar("seed"); v && !explicit_flags.count("seed")) {
        train_flags.seed = std::stoull(*v);
    }

    std::vector<std::string> kinds{"quinr"};
    if (const auto it = grid_file.find("kind"); it != grid_file.end()) {
        kinds = it->second;
    }
    if (const auto it = grid_file.find("dtype"); it != grid_file.end() && dtype_names.empty()) {
        dtype_names = it->second;
    }
    if (dtype_names.empty()) {
        dtype_names = {"fp32"};
    }

    std::vector<GridPoint> points;
    for (const std::string &kind : kinds) {
        if (kind == "quinr") {
            for (int q : grid_ints(grid_file, "qubits", {model_flags.qubits})) {
                for (int f : grid_ints(grid_file, "folds", {model_flags.folds})) {
                    for (int l : grid_ints(grid_file, "layers", {model_flags.layers})) {
                        for (int b : grid_ints(grid_file, "blocks", {model_flags.blocks})) {
                            ModelFlags mf = model_flags;
                            mf.qubits = q;
                            mf.folds = f;
                            mf.embed = 0;
                            mf.layers = l;
                            mf.blocks = b;
                            GridPoint p;
                            p.kind = ModelKind::Quinr;
                            p.qconfig = mf.quinr_config(n_out);
                            points.push_back(p);
                        }
                    }
                }
            }
        } else if (kind == "siren") {
            for (int w : grid_ints(grid_file, "hidden-width", {model_flags.hidden_width})) {
                for (int l : grid_ints(grid_file, "hidden-layers", {model_flags.hidden_layers})) {
                    ModelFlags mf = model_flags;
                    mf.hidden_width = w;
                    mf.hidden_layers = l;
                    GridPoint p;
                    p.kind = ModelKind::Siren;
                    p.sconfig = mf.siren_config(n_out);
                    points.push_back(p);
                }
            }
        } else {
            throw ConfigError("unknown kind '" + kind + "' in grid (use quinr or siren)");
        }
    }

    SweepOptions opts;
    opts.train = train_flags.options();
    opts.dtypes.clear();
    for (const std::string &name : dtype_names) {
        opts.dtypes.push_back(parse_dtype(name));
    }
    opts.jobs = jobs;
    opts.timings = !no_timings;
    opts.refine_sweeps = refine_sweeps;

    const auto rows = rd_sweep(source, points, opts);
    std::ofstream csv(csv_path, std::ios::trunc);
    if (!csv) {
        throw IoError("cannot write CSV '" + csv_path + "'");
    }
    write_sweep_csv(csv, source, input, rows);
    std::printf("wrote %s (%zu rows)\n", csv_path.c_str(), rows.size());
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"quinr: overfit-and-ship signal compression with a hybrid "
                 "sinusoidal/variational-circuit coordinate network"};
    app.require_subcommand(1);

    ModelFlags model_flags;
    TrainFlags train_flags;
    IoFlags io_flags;
    std::string input, output, ref_path, test_path, grid_path, csv_path;
    std::string dtype_name = "fp32";
    std::vector<std::string> sweep_dtypes;
    uint64_t gradcheck_seed = 0;
    int jobs = 1;
    bool no_timings = false;
    int refine_sweeps = 2;

    CLI::App *enc = app.add_subcommand("encode", "Train a model on a signal and write a .qinr file");
    enc->add_option("--input,-i", input, "PNG or raw .f32 signal")->required();
    enc->add_option("--output,-o", output, "Destination .qinr path")->required();
    enc->add_option("--dtype", dtype_name, "Parameter payload precision")
        ->check(CLI::IsMember({"fp32", "fp16"}));
    enc->add_option("--refine-sweeps", refine_sweeps,
                    "Quantization-aware refinement sweeps for fp16 (0 disables)");
    add_model_flags(enc, model_flags);
    add_train_flags(enc, train_flags);
    add_io_flags(enc, io_flags);

    CLI::App *dec = app.add_subcommand("decode", "Reconstruct the signal stored in a .qinr file");
    dec->add_option("--input,-i", input, "Source .qinr path")->required();
    dec->add_option("--output,-o", output, "Destination image (.png) or range image (.f32)")
        ->required();

    CLI::App *ev = app.add_subcommand("eval", "PSNR between two signals");
    ev->add_option("--ref", ref_path, "Reference signal")->required();
    ev->add_option("--test", test_path, "Signal under test")->required();
    add_io_flags(ev, io_flags);

    CLI::App *sw = app.add_subcommand("sweep", "Rate-distortion sweep over a config grid");
    sw->add_option("--input,-i", input, "PNG or raw .f32 signal")->required();
    sw->add_option("--grid", grid_path, "Grid file of key=v1,v2,... lines")->required();
    sw->add_option("--output,-o", csv_path, "Destination CSV path")->required();
    sw->add_option("--dtype", sweep_dtypes, "Payload precisions to serialize (repeatable)")
        ->check(CLI::IsMember({"fp32", "fp16"}));
    sw->add_option("--jobs", jobs, "Parallel training workers");
    sw->add_option("--refine-sweeps", refine_sweeps,
                   "Quantization-aware refinement sweeps for fp16 rows (0 disables)");
    sw->add_flag("--no-timings", no_timings, "Zero the seconds column for byte-stable output");
    add_model_flags(sw, model_flags);
    add_train_flags(sw, train_flags);
    add_io_flags(sw, io_flags);

    CLI::App *gc = app.add_subcommand("gradcheck", "Finite-difference validation of every gradient path");
    gc->add_option("--seed", gradcheck_seed, "Suite seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (enc->parsed()) {
            return cmd_encode(input, output, model_flags, train_flags, io_flags, dtype_name,
                              refine_sweeps);
        }
        if (dec->parsed()) {
            return cmd_decode(input, output);
        }
        if (ev->parsed()) {
            return cmd_eval(ref_path, test_path, io_flags);
        }
        if (sw->parsed()) {
            std::set<std::string> explicit_flags;
            for (const char *name : {"steps", "lr", "batch", "seed"}) {
                if (sw->count(std::string("--") + name) > 0) {
                    explicit_flags.insert(name);
                }
            }
            return cmd_sweep(input, grid_path, csv_path, model_flags, train_flags, io_flags,
                             sweep_dtypes, jobs, no_timings, refine_sweeps, explicit_flags);
        }
        if (gc->parsed()) {
            return cmd_gradcheck(gradcheck_seed);
        }
    } catch (const ConfigError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const CapacityError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const NumericalError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    } catch (const Error &e) {  // io, codec, dimension errors
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
    return kExitUsage;
}
