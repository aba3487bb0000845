#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qic/config.hpp"
#include "qic/dataset.hpp"
#include "qic/mnist.hpp"
#include "qic/parallel.hpp"
#include "qic/train.hpp"

namespace qic {

/// Everything needed to (re)build one dataset.
struct DatasetSpec {
    DatasetKind kind = DatasetKind::bas;
    int n = 1;
    std::size_t count = 100;
    std::uint64_t seed = 0;
    std::vector<int> digits;   ///< mnist kinds
    int shade = 0;             ///< color22
    std::string corruption;    ///< mnist_corrupted

    bool operator==(const DatasetSpec&) const = default;
};

struct SweepEntry {
    std::string field;
    std::vector<std::string> values;

    bool operator==(const SweepEntry&) const = default;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    EncodingKind encoder = EncodingKind::frqi;
    TrainConfig train;
    std::size_t validation_count = 1000;
    std::vector<SweepEntry> sweep;
    std::string output = "report.csv";

    bool operator==(const ExperimentConfig&) const = default;
};

inline DatasetKind parse_dataset_kind(const std::string& s) {
    if (s == "bas") return DatasetKind::bas;
    if (s == "color22") return DatasetKind::color22;
    if (s == "mnist") return DatasetKind::mnist;
    if (s == "mnist_corrupted") return DatasetKind::mnist_corrupted;
    throw std::runtime_error("unknown dataset kind `" + s + "`");
}

inline EncodingKind parse_encoding_kind(const std::string& s) {
    if (s == "frqi") return EncodingKind::frqi;
    if (s == "mcqi") return EncodingKind::mcqi;
    throw std::runtime_error("unknown encoder `" + s + "`");
}

inline ClassifierKind parse_classifier_kind(const std::string& s) {
    if (s == "vqc") return ClassifierKind::vqc;
    if (s == "ac") return ClassifierKind::ac;
    throw std::runtime_error("unknown classifier `" + s + "`");
}

/// Build the training set a spec describes.
inline LabeledImageSet load_train_set(const DatasetSpec& spec,
                                      const std::filesystem::path& data_root) {
    switch (spec.kind) {
        case DatasetKind::bas:
            return gen_bas(spec.n, spec.count, spec.seed);
        case DatasetKind::color22:
            return gen_color22(spec.shade, spec.count, spec.seed);
        case DatasetKind::mnist:
            return load_mnist(data_root, spec.digits, spec.n, spec.count, spec.seed);
        case DatasetKind::mnist_corrupted:
            return load_corrupted_mnist(data_root, spec.corruption, spec.digits, spec.n,
                                        spec.count, spec.seed);
    }
    throw std::logic_error("load_train_set: bad kind");
}

/// Build the validation set disjoint from a spec's training set: generated
/// kinds draw from an offset seed, MNIST kinds continue the same shuffled
/// pool past the training samples.
inline LabeledImageSet load_validation_set(const DatasetSpec& spec, std::size_t count,
                                           const std::filesystem::path& data_root) {
    switch (spec.kind) {
        case DatasetKind::bas:
            return gen_bas(spec.n, count, validation_seed(spec.seed));
        case DatasetKind::color22:
            return gen_color22(spec.shade, count, validation_seed(spec.seed));
        case DatasetKind::mnist:
            return load_mnist(data_root, spec.digits, spec.n, count, spec.seed, spec.count);
        case DatasetKind::mnist_corrupted:
            return load_corrupted_mnist(data_root, spec.corruption, spec.digits, spec.n, count,
                                        spec.seed, spec.count);
    }
    throw std::logic_error("load_validation_set: bad kind");
}

namespace detail {

inline void check_section_keys(const ConfigFile& cfg, const std::string& section,
                               std::initializer_list<const char*> allowed) {
    const auto* entries = cfg.find_section(section);
    if (!entries) return;
    for (const auto& [key, value] : *entries) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok)
            throw std::runtime_error("unknown key `" + key + "` in section [" + section + "]");
    }
}

inline std::vector<int> parse_digit_list(const std::string& value) {
    std::vector<int> digits;
    for (const auto& item : split_list(value))
        digits.push_back(static_cast<int>(parse_int(item, "digits entry")));
    return digits;
}

}  // namespace detail

inline const std::vector<std::string> sweep_fields = {"n", "count", "shade", "classifier",
                                                      "corruption"};

inline ExperimentConfig parse_experiment_config(const std::string& text) {
    const ConfigFile file = parse_config(text);
    for (const auto& [name, entries] : file.sections)
        if (name != "dataset" && name != "experiment" && name != "train" && name != "sweep")
            throw std::runtime_error("unknown config section [" + name + "]");
    detail::check_section_keys(file, "dataset",
                               {"kind", "n", "count", "seed", "digits", "shade", "corruption"});
    detail::check_section_keys(file, "experiment", {"encoder", "validation_count", "output"});
    detail::check_section_keys(file, "train",
                               {"classifier", "layers", "epochs", "seed", "threads"});

    ExperimentConfig cfg;
    const auto get = [&](const char* section, const char* key) { return file.find(section, key); };

    const std::string* kind = get("dataset", "kind");
    if (!kind) throw std::runtime_error("config needs [dataset] kind");
    cfg.dataset.kind = parse_dataset_kind(*kind);
    if (const auto* v = get("dataset", "n"))
        cfg.dataset.n = static_cast<int>(parse_int(*v, "dataset n"));
    if (const auto* v = get("dataset", "count"))
        cfg.dataset.count = static_cast<std::size_t>(parse_uint(*v, "dataset count"));
    if (const auto* v = get("dataset", "seed")) cfg.dataset.seed = parse_uint(*v, "dataset seed");
    if (const auto* v = get("dataset", "digits")) cfg.dataset.digits = detail::parse_digit_list(*v);
    if (const auto* v = get("dataset", "shade"))
        cfg.dataset.shade = static_cast<int>(parse_int(*v, "dataset shade"));
    if (const auto* v = get("dataset", "corruption")) cfg.dataset.corruption = *v;

    const std::string* encoder = get("experiment", "encoder");
    if (!encoder) throw std::runtime_error("config needs [experiment] encoder");
    cfg.encoder = parse_encoding_kind(*encoder);
    if (const auto* v = get("experiment", "validation_count"))
        cfg.validation_count = static_cast<std::size_t>(parse_uint(*v, "validation_count"));
    if (const auto* v = get("experiment", "output")) cfg.output = *v;

    if (const auto* v = get("train", "classifier"))
        cfg.train.classifier = parse_classifier_kind(*v);
    if (const auto* v = get("train", "layers"))
        cfg.train.layers = static_cast<int>(parse_int(*v, "train layers"));
    if (const auto* v = get("train", "epochs"))
        cfg.train.epochs = static_cast<int>(parse_int(*v, "train epochs"));
    if (const auto* v = get("train", "seed")) cfg.train.seed = parse_uint(*v, "train seed");
    if (const auto* v = get("train", "threads"))
        cfg.train.threads = static_cast<int>(parse_int(*v, "train threads"));

    if (const auto* entries = file.find_section("sweep")) {
        for (const auto& [key, value] : *entries) {
            if (std::find(sweep_fields.begin(), sweep_fields.end(), key) == sweep_fields.end())
                throw std::runtime_error("unknown sweep field `" + key + "`");
            SweepEntry entry{key, split_list(value)};
            if (entry.values.empty())
                throw std::runtime_error("sweep field `" + key + "` has no values");
            cfg.sweep.push_back(std::move(entry));
        }
    }
    return cfg;
}

inline std::string emit_experiment_config(const ExperimentConfig& cfg) {
    ConfigFile file;
    ConfigFile::Entries dataset;
    dataset.emplace_back("kind", dataset_kind_name(cfg.dataset.kind));
    dataset.emplace_back("n", std::to_string(cfg.dataset.n));
    dataset.emplace_back("count", std::to_string(cfg.dataset.count));
    dataset.emplace_back("seed", std::to_string(cfg.dataset.seed));
    if (!cfg.dataset.digits.empty()) {
        std::string digits;
        for (int d : cfg.dataset.digits) {
            if (!digits.empty()) digits += ' ';
            digits += std::to_string(d);
        }
        dataset.emplace_back("digits", digits);
    }
    dataset.emplace_back("shade", std::to_string(cfg.dataset.shade));
    if (!cfg.dataset.corruption.empty()) dataset.emplace_back("corruption", cfg.dataset.corruption);
    file.sections.emplace_back("dataset", std::move(dataset));

    ConfigFile::Entries experiment;
    experiment.emplace_back("encoder", encoding_kind_name(cfg.encoder));
    experiment.emplace_back("validation_count", std::to_string(cfg.validation_count));
    experiment.emplace_back("output", cfg.output);
    file.sections.emplace_back("experiment", std::move(experiment));

    ConfigFile::Entries train;
    train.emplace_back("classifier", classifier_kind_name(cfg.train.classifier));
    train.emplace_back("layers", std::to_string(cfg.train.layers));
    train.emplace_back("epochs", std::to_string(cfg.train.epochs));
    train.emplace_back("seed", std::to_string(cfg.train.seed));
    train.emplace_back("threads", std::to_string(cfg.train.threads));
    file.sections.emplace_back("train", std::move(train));

    if (!cfg.sweep.empty()) {
        ConfigFile::Entries sweep;
        for (const auto& entry : cfg.sweep) {
            std::string joined;
            for (const auto& v : entry.values) {
                if (!joined.empty()) joined += ' ';
                joined += v;
            }
            sweep.emplace_back(entry.field, joined);
        }
        file.sections.emplace_back("sweep", std::move(sweep));
    }
    return emit_config(file);
}

/// One report row per sweep cell.
struct ReportRow {
    std::string dataset;
    std::string encoder;
    std::string classifier;
    int n = 1;
    std::size_t train_size = 0;
    int shade = -1;        ///< -1 when not applicable
    std::string corruption;
    std::string digits;    ///< e.g. "0|1"
    std::uint64_t seed = 0;
    int epochs = 0;
    int layers = 0;
    double final_loss = 0.0;
    double train_acc_default = 0.0;
    double train_acc = 0.0;
    double valid_acc_default = 0.0;
    double valid_acc = 0.0;
    double wall_seconds = 0.0;
};

inline constexpr const char* report_header =
    "dataset,encoder,classifier,n,train_size,shade,corruption,digits,seed,epochs,layers,"
    "final_loss,train_acc_default,train_acc,valid_acc_default,valid_acc,wall_seconds";

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string format_report_row(const ReportRow& row) {
    std::ostringstream out;
    out << csv_escape(row.dataset) << ',' << csv_escape(row.encoder) << ','
        << csv_escape(row.classifier) << ',' << row.n << ',' << row.train_size << ',';
    if (row.shade >= 0) out << row.shade;
    out << ',' << csv_escape(row.corruption) << ',' << csv_escape(row.digits) << ',' << row.seed
        << ',' << row.epochs << ',' << row.layers << ',';
    out << std::setprecision(10) << row.final_loss << ',';
    out << std::fixed << std::setprecision(6) << row.train_acc_default << ',' << row.train_acc
        << ',' << row.valid_acc_default << ',' << row.valid_acc << ','
        << std::setprecision(3) << row.wall_seconds;
    return out.str();
}

struct RunOptions {
    std::filesystem::path data_root = "data";
    int parallel_cells = 1;
    std::optional<std::uint64_t> seed_override;
    std::optional<std::string> output_override;
    std::function<void(std::size_t index, std::size_t total, const ReportRow&)> on_row;
};

namespace detail {

inline ExperimentConfig apply_sweep_cell(ExperimentConfig base,
                                         const std::vector<SweepEntry>& sweep,
                                         const std::vector<std::size_t>& choice) {
    for (std::size_t k = 0; k < sweep.size(); ++k) {
        const std::string& field = sweep[k].field;
        const std::string& value = sweep[k].values[choice[k]];
        if (field == "n")
            base.dataset.n = static_cast<int>(parse_int(value, "sweep n"));
        else if (field == "count")
            base.dataset.count = static_cast<std::size_t>(parse_uint(value, "sweep count"));
        else if (field == "shade")
            base.dataset.shade = static_cast<int>(parse_int(value, "sweep shade"));
        else if (field == "classifier")
            base.train.classifier = parse_classifier_kind(value);
        else if (field == "corruption")
            base.dataset.corruption = value;
        else
            throw std::runtime_error("unknown sweep field `" + field + "`");
    }
    return base;
}

inline std::string join_digits(const std::vector<int>& digits) {
    std::string out;
    for (int d : digits) {
        if (!out.empty()) out += '|';
        out += std::to_string(d);
    }
    return out;
}

}  // namespace detail

inline void validate_pairing(const ExperimentConfig& cfg) {
    const bool color = cfg.dataset.kind == DatasetKind::color22;
    if (color != (cfg.encoder == EncodingKind::mcqi))
        throw std::runtime_error("encoder/dataset mismatch: frqi takes grayscale datasets, "
                                 "mcqi takes color22");
}

/// Train and evaluate one sweep cell.
inline ReportRow run_cell(const ExperimentConfig& cell, const RunOptions& opt) {
    validate_pairing(cell);
    const auto start = std::chrono::steady_clock::now();
    const LabeledImageSet train_set = load_train_set(cell.dataset, opt.data_root);
    const LabeledImageSet valid_set =
        load_validation_set(cell.dataset, cell.validation_count, opt.data_root);
    const TrainHistory history = train(train_set, valid_set, cell.train);
    const auto stop = std::chrono::steady_clock::now();

    ReportRow row;
    row.dataset = dataset_kind_name(cell.dataset.kind);
    row.encoder = encoding_kind_name(cell.encoder);
    row.classifier = classifier_kind_name(cell.train.classifier);
    row.n = cell.dataset.n;
    row.train_size = cell.dataset.count;
    row.shade = cell.dataset.kind == DatasetKind::color22 ? cell.dataset.shade : -1;
    row.corruption = cell.dataset.corruption;
    row.digits = detail::join_digits(cell.dataset.digits);
    row.seed = cell.train.seed;
    row.epochs = static_cast<int>(history.loss.size());
    row.layers = history.model.ansatz.layers;
    row.final_loss = history.loss.empty() ? 0.0 : history.loss.back();
    row.train_acc_default = history.train_accuracy_default;
    row.train_acc = history.train_accuracy;
    row.valid_acc_default = history.validation_accuracy_default;
    row.valid_acc = history.validation_accuracy;
    row.wall_seconds = std::chrono::duration<double>(stop - start).count();
    return row;
}

/// Expand the sweep, run every cell, and stream rows to the report file in
/// cell order (rows of finished cells are flushed even if a later cell
/// crashes). Returns the rows in cell order.
inline std::vector<ReportRow> run_experiment(const ExperimentConfig& cfg,
                                             const RunOptions& opt = {}) {
    ExperimentConfig base = cfg;
    if (opt.seed_override) {
        base.dataset.seed = *opt.seed_override;
        base.train.seed = *opt.seed_override;
    }
    validate_pairing(base);

    std::size_t total = 1;
    for (const auto& entry : cfg.sweep) total *= entry.values.size();

    std::vector<ExperimentConfig> cells;
    cells.reserve(total);
    std::vector<std::size_t> choice(cfg.sweep.size(), 0);
    for (std::size_t cell = 0; cell < total; ++cell) {
        cells.push_back(detail::apply_sweep_cell(base, cfg.sweep, choice));
        for (std::size_t k = choice.size(); k-- > 0;) {
            if (++choice[k] < cfg.sweep[k].values.size()) break;
            choice[k] = 0;
        }
    }

    const std::filesystem::path out_path = opt.output_override.value_or(base.output);
    if (out_path.has_parent_path()) std::filesystem::create_directories(out_path.parent_path());
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write report: " + out_path.string());
    out << report_header << '\n' << std::flush;

    std::mutex mu;
    std::size_t next_flush = 0;
    std::vector<std::optional<ReportRow>> done(cells.size());
    parallel_for(cells.size(), opt.parallel_cells, [&](std::size_t i) {
        ReportRow row = run_cell(cells[i], opt);
        std::lock_guard<std::mutex> lock(mu);
        done[i] = std::move(row);
        while (next_flush < done.size() && done[next_flush]) {
            out << format_report_row(*done[next_flush]) << '\n' << std::flush;
            if (opt.on_row) opt.on_row(next_flush, done.size(), *done[next_flush]);
            ++next_flush;
        }
    });

    std::vector<ReportRow> rows;
    rows.reserve(done.size());
    for (auto& row : done) rows.push_back(std::move(*row));
    return rows;
}

}  // namespace qic
