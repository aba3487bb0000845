#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qic/qic.hpp"

namespace fs = std::filesystem;

namespace {

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path resolve_data_root(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("QIC_DATA_ROOT"); env && *env) return env;
    return "data";
}

int cmd_run(const std::string& config_path, const std::string& data_root_flag,
            std::optional<std::uint64_t> seed, const std::string& out, int parallel) {
    const auto cfg = qic::parse_experiment_config(read_text_file(config_path));
    qic::RunOptions opt;
    opt.data_root = resolve_data_root(data_root_flag);
    opt.parallel_cells = parallel;
    opt.seed_override = seed;
    if (!out.empty()) opt.output_override = out;
    opt.on_row = [](std::size_t index, std::size_t total, const qic::ReportRow& row) {
        std::cout << '[' << index + 1 << '/' << total << "] " << row.dataset << ' '
                  << row.classifier << " n=" << row.n << " size=" << row.train_size;
        if (row.shade >= 0) std::cout << " shade=" << row.shade;
        if (!row.corruption.empty()) std::cout << ' ' << row.corruption;
        std::cout << std::fixed << std::setprecision(3) << " acc=" << row.valid_acc
                  << " (default " << row.valid_acc_default << ", " << std::setprecision(1)
                  << row.wall_seconds << "s)" << std::endl;
    };
    qic::run_experiment(cfg, opt);
    std::cout << "report written to " << opt.output_override.value_or(cfg.output) << std::endl;
    return 0;
}

int cmd_table(const std::string& report_path, const std::string& format,
              const std::string& out) {
    const auto rows = qic::read_report(report_path);
    const auto fmt = format == "csv" ? qic::TableFormat::csv : qic::TableFormat::markdown;
    const std::string table = qic::emit_table(rows, fmt);
    if (out.empty()) {
        std::cout << table;
    } else {
        qic::write_text_file(out, table);
        std::cout << "table written to " << out << std::endl;
    }
    return 0;
}

int cmd_plot(const std::string& report_path, const std::string& out) {
    const auto rows = qic::read_report(report_path);
    const std::string svg = qic::emit_shade_plot(rows);
    const fs::path out_path =
        out.empty() ? fs::path(report_path).replace_extension(".svg") : fs::path(out);
    qic::write_text_file(out_path, svg);
    std::cout << "plot written to " << out_path.string() << std::endl;
    return 0;
}

/// Export a generated dataset: grayscale sets as an IDX image/label pair,
/// color sets as rank-4 + rank-1 QTD files. Labels are stored as class
/// indices (binary -1/+1 becomes 0/1).
int cmd_gen_data(const std::string& spec_path, const std::string& out_dir,
                 std::optional<std::uint64_t> seed) {
    const auto file = qic::parse_config(read_text_file(spec_path));
    const auto* kind = file.find("dataset", "kind");
    if (!kind) throw std::runtime_error("gen-data spec needs [dataset] kind");
    qic::DatasetSpec spec;
    spec.kind = qic::parse_dataset_kind(*kind);
    if (const auto* v = file.find("dataset", "n"))
        spec.n = static_cast<int>(qic::parse_int(*v, "dataset n"));
    if (const auto* v = file.find("dataset", "count"))
        spec.count = static_cast<std::size_t>(qic::parse_uint(*v, "dataset count"));
    if (const auto* v = file.find("dataset", "seed")) spec.seed = qic::parse_uint(*v, "seed");
    if (const auto* v = file.find("dataset", "shade"))
        spec.shade = static_cast<int>(qic::parse_int(*v, "dataset shade"));
    if (seed) spec.seed = *seed;
    if (spec.kind != qic::DatasetKind::bas && spec.kind != qic::DatasetKind::color22)
        throw std::runtime_error("gen-data generates synthetic datasets (bas, color22) only");

    const auto set = qic::load_train_set(spec, "data");
    const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
    std::vector<std::uint8_t> labels;
    labels.reserve(set.size());
    for (int label : set.labels)
        labels.push_back(set.label_kind == qic::LabelKind::binary
                             ? static_cast<std::uint8_t>(label < 0 ? 0 : 1)
                             : static_cast<std::uint8_t>(label));

    if (set.is_color()) {
        const std::size_t side = std::size_t{1} << spec.n;
        std::vector<std::uint8_t> payload;
        payload.reserve(set.size() * side * side * 3);
        for (const auto& img : set.color)
            for (const auto& px : img.pixels) {
                payload.push_back(px.r);
                payload.push_back(px.g);
                payload.push_back(px.b);
            }
        qic::write_qtd(dir / "images.qtd", {set.size(), side, side, 3}, payload);
        qic::write_qtd(dir / "labels.qtd", {labels.size()}, labels);
        std::cout << "wrote " << (dir / "images.qtd").string() << " and "
                  << (dir / "labels.qtd").string() << std::endl;
    } else {
        const std::size_t side = std::size_t{1} << spec.n;
        qic::RawImages raw;
        raw.count = set.size();
        raw.rows = raw.cols = side;
        for (const auto& img : set.gray)
            raw.data.insert(raw.data.end(), img.pixels.begin(), img.pixels.end());
        qic::write_idx_images(dir / "images-idx3-ubyte", raw);
        qic::write_idx_labels(dir / "labels-idx1-ubyte", labels);
        std::cout << "wrote " << (dir / "images-idx3-ubyte").string() << " and "
                  << (dir / "labels-idx1-ubyte").string() << std::endl;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum image classification experiments"};
    app.require_subcommand(1);

    std::string config_path, report_path, spec_path;
    std::string data_root, out, format = "md";
    int parallel = 1;
    std::optional<std::uint64_t> seed;

    auto* run = app.add_subcommand("run", "run an experiment config and write its report");
    run->add_option("config", config_path, "experiment config file")->required();
    run->add_option("--data-root", data_root, "dataset root (default $QIC_DATA_ROOT or ./data)");
    run->add_option("--seed", seed, "override dataset and training seeds");
    run->add_option("--out", out, "override the report output path");
    run->add_option("--parallel", parallel, "number of sweep cells to run in parallel")
        ->check(CLI::PositiveNumber);

    auto* table = app.add_subcommand("table", "pivot a report into a summary table");
    table->add_option("report", report_path, "report CSV produced by `run`")->required();
    table->add_option("--format", format, "csv or md")
        ->check(CLI::IsMember({"csv", "md"}));
    table->add_option("--out", out, "write to file instead of stdout");

    auto* plot = app.add_subcommand("plot", "render a shade sweep as an SVG chart");
    plot->add_option("report", report_path, "report CSV produced by `run`")->required();
    plot->add_option("--out", out, "output SVG path (default: report path with .svg)");

    auto* gen = app.add_subcommand("gen-data", "export a synthetic dataset to files");
    gen->add_option("spec", spec_path, "config file with a [dataset] section")->required();
    gen->add_option("--out", out, "output directory (default .)");
    gen->add_option("--seed", seed, "override the dataset seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, data_root, seed, out, parallel);
        if (table->parsed()) return cmd_table(report_path, format, out);
        if (plot->parsed()) return cmd_plot(report_path, out);
        if (gen->parsed()) return cmd_gen_data(spec_path, out, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
