#include "hrkl_cli.hpp"

#include "hrkl/baselines.hpp"
#include "hrkl/clustering.hpp"
#include "hrkl/csv_io.hpp"
#include "hrkl/embedding.hpp"
#include "hrkl/errors.hpp"
#include "hrkl/metrics.hpp"
#include "hrkl/random.hpp"
#include "hrkl/series.hpp"
#include "hrkl/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace hrkl::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr const char* kVersion = "hrkl " HRKL_VERSION;

/// Every setting a command can take; serialized into each JSON report.
struct RunConfig {
    std::string command;
    std::uint64_t seed = 0;
    int restarts = 3;
    int max_iters = 200;
    double tol = 1e-6;
    std::size_t workers = 1;
    std::size_t min_cluster_size = 3;
    std::size_t min_samples = 0;
    std::string method;
    std::string metric;
    std::size_t clusters = 0;
    std::string layout = "long";
    bool raw = false;
    std::size_t sax_window = 0;
    std::size_t sax_word_length = 8;
    std::size_t sax_alphabet = 4;
    bool sax_numerosity_reduction = true;
    std::size_t sections = 2;
    double frac = 0.15;
    std::string kind = "benchmark";
    std::size_t count = 15;
    std::size_t length = 100;
    bool high_noise_sine = true;
    std::map<std::string, std::string> paths;
};

ordered_json to_json(const RunConfig& c) {
    ordered_json j;
    j["command"] = c.command;
    j["seed"] = c.seed;
    j["restarts"] = c.restarts;
    j["max_iters"] = c.max_iters;
    j["tol"] = c.tol;
    j["workers"] = c.workers;
    j["min_cluster_size"] = c.min_cluster_size;
    j["min_samples"] = c.min_samples ? c.min_samples : c.min_cluster_size;
    j["method"] = c.method;
    j["metric"] = c.metric;
    j["clusters"] = c.clusters;
    j["layout"] = c.layout;
    j["raw"] = c.raw;
    j["sax"] = {{"window", c.sax_window},
                {"word_length", c.sax_word_length},
                {"alphabet", c.sax_alphabet},
                {"numerosity_reduction", c.sax_numerosity_reduction}};
    j["corruption"] = {{"sections", c.sections}, {"frac", c.frac}};
    j["synthetic"] = {{"kind", c.kind}, {"count", c.count}, {"length", c.length}, {"high_noise_sine", c.high_noise_sine}};
    j["paths"] = c.paths;
    return j;
}

ordered_json report_header(const RunConfig& c) {
    ordered_json j;
    j["version"] = kVersion;
    j["config"] = to_json(c);
    return j;
}

void write_json(const ordered_json& j, const fs::path& path) { write_text_file(path, j.dump(2) + "\n"); }

Dataset load_data(const RunConfig& c, const std::string& path) {
    LoadOptions opts;
    opts.layout = c.layout == "wide" ? CsvLayout::Wide : CsvLayout::Long;
    opts.standardize = !c.raw;
    return load_csv(path, opts);
}

std::vector<int> labels_in_order(const IdLabels& rows, const std::vector<std::string>& ids, const std::string& what) {
    if (rows.ids.size() != ids.size())
        throw ValidationError(what + " has " + std::to_string(rows.ids.size()) + " rows, expected " +
                              std::to_string(ids.size()));
    std::unordered_map<std::string, int> by_id;
    for (std::size_t i = 0; i < rows.ids.size(); ++i) by_id[rows.ids[i]] = rows.labels[i];
    std::vector<int> out;
    for (const auto& id : ids) {
        auto it = by_id.find(id);
        if (it == by_id.end()) throw ValidationError(what + " has no row for series '" + id + "'");
        out.push_back(it->second);
    }
    return out;
}

// ---------------------------------------------------------------- commands

int cmd_synth(const RunConfig& c, std::ostream& out) {
    const fs::path dir = c.paths.at("out");
    Dataset data = c.kind == "gait" ? generate_gait_like(c.seed, c.count, c.length)
                                    : generate_synthetic(c.seed, {c.length, c.high_noise_sine});
    write_long_csv(data, dir / "series.csv");
    write_labels_csv(data, dir / "labels.csv");
    ordered_json rep = report_header(c);
    rep["series"] = data.size();
    write_json(rep, dir / "synth_report.json");
    out << "wrote " << data.size() << " series to " << (dir / "series.csv").string() << "\n";
    return 0;
}

int cmd_analyze(const RunConfig& c, std::ostream& out) {
    const Dataset data = load_data(c, c.paths.at("data"));
    const Grammar grammar = c.paths.count("grammar") ? Grammar::load(c.paths.at("grammar")) : Grammar::defaults();
    const auto kernels = grammar.candidates();

    SweepConfig cfg;
    cfg.fit.restarts = c.restarts;
    cfg.fit.max_iters = c.max_iters;
    cfg.fit.tol = c.tol;
    cfg.fit.seed = c.seed;
    cfg.workers = c.workers;
    const SweepResult res = evaluate_all(data, kernels, cfg);

    const fs::path dir = c.paths.at("out");
    write_bic_csv(res.bic, dir / "bic.csv");

    ordered_json rep = report_header(c);
    rep["series"] = res.bic.series_ids;
    rep["kernels"] = res.bic.kernels;
    rep["failed_cells"] = res.failed_cells;
    double total_us = 0.0;
    ordered_json cells = ordered_json::array();
    for (std::size_t j = 0; j < res.bic.rows(); ++j)
        for (std::size_t k = 0; k < res.bic.cols(); ++k) {
            const CellReport& r = res.cell(j, k);
            total_us += r.wall_us;
            ordered_json cell = {{"series", res.bic.series_ids[j]},
                                 {"kernel", res.bic.kernels[k]},
                                 {"restarts_used", r.restarts_used},
                                 {"failed", r.failed},
                                 {"wall_us", r.wall_us}};
            if (r.failed) cell["error"] = r.error;
            cells.push_back(std::move(cell));
        }
    rep["mean_fit_wall_us"] = total_us / static_cast<double>(res.cells.size());
    rep["cells"] = std::move(cells);
    write_json(rep, dir / "fit_report.json");
    out << "wrote " << res.bic.rows() << "x" << res.bic.cols() << " BIC matrix to " << (dir / "bic.csv").string()
        << " (" << res.failed_cells << " failed fits)\n";
    return 0;
}

ordered_json dendrogram_json(const Dendrogram& d) {
    ordered_json arr = ordered_json::array();
    for (const auto& m : d.merges)
        arr.push_back({{"left", m.left}, {"right", m.right}, {"height", m.height}, {"size", m.size}});
    return arr;
}

std::string dendrogram_dot(const Dendrogram& d, const std::vector<std::string>& ids) {
    std::ostringstream os;
    os << "graph dendrogram {\n";
    for (std::size_t i = 0; i < d.leaves; ++i) os << "  n" << i << " [label=\"" << ids[i] << "\"];\n";
    for (std::size_t m = 0; m < d.merges.size(); ++m) {
        const std::size_t id = d.leaves + m;
        os << "  n" << id << " [label=\"" << format_double(d.merges[m].height) << "\", shape=point];\n";
        os << "  n" << id << " -- n" << d.merges[m].left << ";\n";
        os << "  n" << id << " -- n" << d.merges[m].right << ";\n";
    }
    os << "}\n";
    return os.str();
}

int cmd_cluster(RunConfig c, std::ostream& out) {
    const bool from_bic = c.paths.count("bic") > 0;
    if (from_bic == (c.paths.count("distances") > 0))
        throw UsageError("cluster needs exactly one of --bic or --distances");
    if (c.metric.empty()) c.metric = c.method == "hdbscan" ? "cosine" : "euclidean";
    const Metric metric = c.metric == "cosine" ? Metric::Cosine : Metric::Euclidean;
    const fs::path dir = c.paths.at("out");

    DistanceMatrix dist;
    std::optional<Embedding> emb;
    if (from_bic) {
        emb = standardize_rows(read_bic_csv(c.paths.at("bic")));
        dist = metric == Metric::Cosine ? cosine_distances(*emb) : euclidean_distances(*emb);
        write_embedding_csv(*emb, dir / "embedding.csv");
        write_distance_csv(dist, dir / "distances.csv");
    } else {
        dist = read_distance_csv(c.paths.at("distances"));
    }

    ordered_json rep = report_header(c);
    ClusterLabels labels;
    if (c.method == "hdbscan") {
        labels = hdbscan(dist.P, {c.min_cluster_size, c.min_samples});
    } else {
        if (c.clusters == 0) throw UsageError("hac needs --clusters");
        const Dendrogram d = hac_single_linkage(dist.P);
        labels = cut_dendrogram(d, c.clusters);
        rep["dendrogram"] = dendrogram_json(d);
        write_json(dendrogram_json(d), dir / "dendrogram.json");
        write_text_file(dir / "dendrogram.dot", dendrogram_dot(d, dist.ids));
    }
    write_id_labels({dist.ids, labels.labels}, dir / "labels.csv", "cluster");

    rep["n_clusters"] = labels.count;
    rep["n_outliers"] = labels.outliers();
    std::vector<std::string> flagged;
    for (auto r : dist.flagged_rows) flagged.push_back(dist.ids[r]);
    rep["flagged_series"] = flagged;
    write_json(rep, dir / "cluster_report.json");
    out << labels.count << " clusters, " << labels.outliers() << " outliers\n";
    return 0;
}

int cmd_describe(const RunConfig& c, std::ostream& out) {
    const BicMatrix B = read_bic_csv(c.paths.at("bic"));
    const IdLabels rows = read_id_labels(c.paths.at("labels"));
    ClusterLabels labels;
    labels.labels = labels_in_order(rows, B.series_ids, "labels file");
    for (int l : labels.labels) labels.count = std::max(labels.count, l + 1);

    ordered_json rep = report_header(c);
    const std::string shared = select_shared_kernel(B);
    rep["shared_kernel"] = {{"kernel", shared}, {"sentences", describe(parse_kernel(shared))}};
    ordered_json clusters = ordered_json::array();
    for (const auto& d : describe_clusters(B, labels)) {
        std::vector<std::string> members;
        for (auto m : d.members) members.push_back(B.series_ids[m]);
        clusters.push_back({{"cluster", d.cluster}, {"members", members}, {"kernel", d.kernel}, {"sentences", d.sentences}});
    }
    std::vector<std::string> outliers;
    for (std::size_t j = 0; j < labels.labels.size(); ++j)
        if (labels.labels[j] == kOutlier) outliers.push_back(B.series_ids[j]);
    rep["clusters"] = std::move(clusters);
    rep["outliers"] = outliers;
    write_json(rep, c.paths.at("out"));
    out << "described " << rep["clusters"].size() << " clusters\n";
    return 0;
}

int cmd_baseline(RunConfig c, std::ostream& out) {
    const Dataset data = load_data(c, c.paths.at("data"));
    DistanceMatrix d;
    if (c.method == "dtw") {
        d = dtw_distance_matrix(data);
    } else {
        if (c.sax_window == 0) c.sax_window = std::max<std::size_t>(c.sax_word_length, data.series.front().size() / 4);
        SaxConfig sax{c.sax_window, c.sax_word_length, c.sax_alphabet, c.sax_numerosity_reduction};
        d = sax_bop_distance_matrix(data, sax);
    }
    const fs::path path = c.paths.at("out");
    write_distance_csv(d, path);
    fs::path report = path;
    report.replace_extension(".json");
    write_json(report_header(c), report);
    out << "wrote " << d.size() << "x" << d.size() << " " << c.method << " distances to " << path.string() << "\n";
    return 0;
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
    const IdLabels truth = read_id_labels(c.paths.at("truth"));
    const IdLabels pred = read_id_labels(c.paths.at("pred"));
    if (truth.ids.size() != pred.ids.size())
        throw ValidationError("prediction has " + std::to_string(pred.ids.size()) + " rows, truth has " +
                              std::to_string(truth.ids.size()));
    const std::vector<int> p = labels_in_order(pred, truth.ids, "prediction file");
    const MetricReport m = cluster_metrics(truth.labels, p);

    ordered_json rep = report_header(c);
    rep["homogeneity"] = m.homogeneity;
    rep["completeness"] = m.completeness;
    rep["v_measure"] = m.v_measure;
    rep["n_clusters"] = m.n_clusters;
    rep["n_outliers"] = m.n_outliers;
    if (c.paths.count("out")) write_json(rep, c.paths.at("out"));
    out << rep.dump(2) << "\n";
    return 0;
}

int cmd_corrupt(const RunConfig& c, const std::vector<std::string>& ids, std::ostream& out) {
    Dataset data = load_data(c, c.paths.at("data"));
    std::set<std::string> wanted(ids.begin(), ids.end());
    for (const auto& id : wanted) {
        bool found = false;
        for (const auto& s : data.series) found = found || s.id == id;
        if (!found) throw ValidationError("unknown series id '" + id + "'");
    }
    data.labels.emplace(data.size(), 0);
    for (std::size_t j = 0; j < data.size(); ++j) {
        if (!wanted.count(data.series[j].id)) continue;
        data.series[j] = corrupt(data.series[j], derive_seed(c.seed, {j}), {c.sections, c.frac});
        (*data.labels)[j] = 1;
    }
    const fs::path dir = c.paths.at("out");
    write_long_csv(data, dir / "series.csv");
    write_labels_csv(data, dir / "labels.csv");
    ordered_json rep = report_header(c);
    rep["corrupted"] = std::vector<std::string>(wanted.begin(), wanted.end());
    write_json(rep, dir / "corrupt_report.json");
    out << "corrupted " << wanted.size() << " of " << data.size() << " series\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Kernel-embedding analysis of time-series collections", "hrkl"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    RunConfig c;
    std::string data_path, out_path, grammar_path, bic_path, dist_path, labels_path, pred_path, truth_path;
    std::vector<std::string> ids;

    auto add_layout = [&](CLI::App* sub) {
        sub->add_option("--layout", c.layout, "CSV layout")->check(CLI::IsMember({"long", "wide"}));
        sub->add_flag("--raw", c.raw, "keep values as they are (no z-scoring)");
    };

    auto* synth = app.add_subcommand("synth", "generate the benchmark or gait-like data");
    synth->add_option("--seed", c.seed);
    synth->add_option("--out", out_path, "output directory")->required();
    synth->add_option("--kind", c.kind)->check(CLI::IsMember({"benchmark", "gait"}));
    synth->add_option("--count", c.count, "series count (gait)");
    synth->add_option("--length", c.length, "points per series");
    synth->add_flag("!--no-high-noise", c.high_noise_sine, "do not force one noisy sine");

    auto* analyze = app.add_subcommand("analyze", "fit every kernel to every series (BIC matrix)");
    analyze->add_option("--data", data_path)->required();
    analyze->add_option("--grammar", grammar_path, "grammar file");
    analyze->add_option("--seed", c.seed);
    analyze->add_option("--restarts", c.restarts)->check(CLI::PositiveNumber);
    analyze->add_option("--max-iters", c.max_iters)->check(CLI::PositiveNumber);
    analyze->add_option("--tol", c.tol)->check(CLI::PositiveNumber);
    analyze->add_option("--workers", c.workers)->check(CLI::PositiveNumber);
    analyze->add_option("--out", out_path, "output directory")->required();
    add_layout(analyze);

    auto* cluster = app.add_subcommand("cluster", "cluster a BIC matrix or a distance matrix");
    cluster->add_option("--bic", bic_path);
    cluster->add_option("--distances", dist_path);
    cluster->add_option("--method", c.method)->required()->check(CLI::IsMember({"hdbscan", "hac"}));
    cluster->add_option("--min-cluster-size", c.min_cluster_size)->check(CLI::Range(2, 1 << 30));
    cluster->add_option("--min-samples", c.min_samples);
    cluster->add_option("--metric", c.metric)->check(CLI::IsMember({"euclidean", "cosine"}));
    cluster->add_option("--clusters", c.clusters, "cut the HAC tree into this many clusters");
    cluster->add_option("--out", out_path, "output directory")->required();

    auto* describe_cmd = app.add_subcommand("describe", "select and describe a kernel per cluster");
    describe_cmd->add_option("--bic", bic_path)->required();
    describe_cmd->add_option("--labels", labels_path)->required();
    describe_cmd->add_option("--out", out_path, "JSON report path")->required();

    auto* baseline = app.add_subcommand("baseline", "DTW or SAX bag-of-patterns distances");
    baseline->add_option("--data", data_path)->required();
    baseline->add_option("--method", c.method)->required()->check(CLI::IsMember({"dtw", "saxbop"}));
    baseline->add_option("--window", c.sax_window);
    baseline->add_option("--word-length", c.sax_word_length);
    baseline->add_option("--alphabet", c.sax_alphabet);
    baseline->add_flag("!--no-numerosity-reduction", c.sax_numerosity_reduction);
    baseline->add_option("--out", out_path, "distance CSV path")->required();
    add_layout(baseline);

    auto* eval = app.add_subcommand("eval", "homogeneity, completeness and V-measure");
    eval->add_option("--pred", pred_path)->required();
    eval->add_option("--truth", truth_path)->required();
    eval->add_option("--out", out_path, "JSON report path");

    auto* corrupt_cmd = app.add_subcommand("corrupt", "zero out sections of selected series");
    corrupt_cmd->add_option("--data", data_path)->required();
    corrupt_cmd->add_option("--ids", ids, "series ids to corrupt")->required()->delimiter(',');
    corrupt_cmd->add_option("--seed", c.seed);
    corrupt_cmd->add_option("--sections", c.sections);
    corrupt_cmd->add_option("--frac", c.frac);
    corrupt_cmd->add_option("--out", out_path, "output directory")->required();
    add_layout(corrupt_cmd);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto set_path = [&](const char* key, const std::string& v) {
        if (!v.empty()) c.paths[key] = v;
    };
    set_path("data", data_path);
    set_path("out", out_path);
    set_path("grammar", grammar_path);
    set_path("bic", bic_path);
    set_path("distances", dist_path);
    set_path("labels", labels_path);
    set_path("pred", pred_path);
    set_path("truth", truth_path);

    try {
        if (*synth) return c.command = "synth", cmd_synth(c, out);
        if (*analyze) return c.command = "analyze", cmd_analyze(c, out);
        if (*cluster) return c.command = "cluster", cmd_cluster(c, out);
        if (*describe_cmd) return c.command = "describe", cmd_describe(c, out);
        if (*baseline) return c.command = "baseline", cmd_baseline(c, out);
        if (*eval) return c.command = "eval", cmd_eval(c, out);
        if (*corrupt_cmd) return c.command = "corrupt", cmd_corrupt(c, ids, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return 5;
    }
    return 2;
}

}  // namespace hrkl::cli
