#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "solvgp/analysis.hpp"
#include "solvgp/errors.hpp"
#include "solvgp/io.hpp"
#include "solvgp/model_selection.hpp"
#include "solvgp/smiles.hpp"

using nlohmann::json;
using namespace solvgp;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    int threads = -1;  // -1: take the config's value
    bool timings = false;
};

RunConfig effective_config(const CommonOpts& opts) {
    RunConfig cfg = opts.config_path.empty() ? RunConfig::defaults()
                                             : load_config(opts.config_path);
    if (opts.threads >= 0) cfg.threads = opts.threads;
    cfg.validate();
    return cfg;
}

void write_output(const json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) raise("FileNotFound", "cannot write output to '" + path + "'");
    out << doc.dump(2) << '\n';
    out.flush();
    if (!out) raise("FileNotFound", "failed while writing '" + path + "'");
}

std::vector<MolecularGraph> parse_dataset(const Dataset& ds,
                                          const RadiiTable& radii) {
    std::vector<MolecularGraph> graphs;
    graphs.reserve(ds.size());
    for (const auto& rec : ds.records)
        graphs.push_back(graph_from_smiles(rec.smiles, radii, rec.id));
    return graphs;
}

json metrics_json(const RunConfig& cfg, std::span<const double> pred,
                  std::span<const double> truth) {
    json m = json::object();
    for (const auto& name : cfg.metrics) {
        if (name == "mae") m["mae"] = mae(pred, truth);
        else if (name == "rmse") m["rmse"] = rmse(pred, truth);
        else if (name == "r2") m["r2"] = pearson_r2(pred, truth);
        else raise("InvalidConfig", "unknown metric '" + name + "'");
    }
    return m;
}

json subset_metrics_json(const TrainedModel& model, const Dataset& test,
                         const RunConfig& cfg) {
    json out = json::array();
    for (const auto& s :
         element_subset_eval(model, test, cfg.element_subsets, cfg.threads))
        out.push_back({{"elements", s.label},
                       {"count", s.count},
                       {"mae", s.mae},
                       {"rmse", s.rmse}});
    return out;
}

int run_parse(const CommonOpts& opts, const std::string& smiles) {
    const RunConfig cfg = effective_config(opts);
    const MolecularGraph g = graph_from_smiles(smiles, cfg.radii);
    write_output(graph_to_json(g, cfg.kernel.zeta, cfg.kernel.adjacency),
                 opts.out_path);
    return 0;
}

int run_kernel(const CommonOpts& opts, const std::string& data_path,
               bool normalized) {
    const RunConfig cfg = effective_config(opts);
    const Dataset ds = load_csv(data_path, false);
    const auto graphs = parse_dataset(ds, cfg.radii);
    const KernelMatrix km =
        kernel_matrix(graphs, cfg.kernel, normalized, cfg.threads);

    json ids = json::array();
    for (const auto& rec : ds.records) ids.push_back(rec.id);
    std::vector<double> data(km.values.size());
    for (Eigen::Index i = 0; i < km.values.rows(); ++i)
        for (Eigen::Index j = 0; j < km.values.cols(); ++j)
            data[static_cast<std::size_t>(i) * km.values.cols() + j] =
                km.values(i, j);
    write_output({{"ids", ids},
                  {"normalized", normalized},
                  {"matrix",
                   {{"rows", km.values.rows()},
                    {"cols", km.values.cols()},
                    {"data", data}}}},
                 opts.out_path);
    return 0;
}

int run_train(const CommonOpts& opts, const std::string& data_path,
              const std::string& model_path) {
    const RunConfig cfg = effective_config(opts);
    const Dataset ds = load_csv(data_path).sorted_by_id();
    const TrainedModel model = TrainedModel::fit(
        ds, cfg.kernel, cfg.gp, cfg.radii, cfg.normalized, cfg.threads);
    save_model(model, model_path);

    write_output({{"trained", ds.size()},
                  {"model", model_path},
                  {"log_marginal_likelihood", model.log_marginal_likelihood()}},
                 opts.out_path);
    return 0;
}

int run_cv(const CommonOpts& opts, const std::string& data_path,
           const std::string& model_path) {
    const RunConfig cfg = effective_config(opts);
    const Dataset ds = load_csv(data_path);
    const auto [train, test] = split_by_id(ds, cfg.train_fraction);

    const CVReport report = grid_search(train, cfg.grid, cfg.kernel, cfg.gp,
                                        cfg.radii, cfg.normalized, cfg.threads);
    const Candidate& best = report.rows[report.selected].candidate;

    json doc = to_json(report, opts.timings);
    doc["split"] = {{"train", train.size()}, {"test", test.size()}};

    if (!model_path.empty()) {
        const TrainedModel model = TrainedModel::fit(
            train.sorted_by_id(), best.kernel(cfg.kernel), best.gp(cfg.gp),
            cfg.radii, cfg.normalized, cfg.threads);
        save_model(model, model_path);
        doc["model"] = model_path;
    }
    write_output(doc, opts.out_path);
    return 0;
}

int run_predict(const CommonOpts& opts, const std::string& model_path,
                const std::string& data_path) {
    const RunConfig cfg = effective_config(opts);
    const TrainedModel model = load_model(model_path);
    const Dataset ds = load_csv(data_path, false);
    const auto graphs = parse_dataset(ds, model.radii());

    const Eigen::VectorXd pred = model.predict_mean(graphs, cfg.threads);
    const auto var = model.predict_variance(graphs, cfg.threads);

    json ids = json::array();
    for (const auto& rec : ds.records) ids.push_back(rec.id);
    std::vector<double> p(pred.data(), pred.data() + pred.size());
    std::vector<double> v(var.diag.data(), var.diag.data() + var.diag.size());
    json doc = {{"ids", ids}, {"predictions", p}, {"variances", v}};

    const bool have_targets =
        std::all_of(ds.records.begin(), ds.records.end(),
                    [](const DataRecord& r) { return r.has_target; });
    if (have_targets && !ds.records.empty()) {
        std::vector<double> truth;
        truth.reserve(ds.size());
        for (const auto& rec : ds.records) truth.push_back(rec.target);
        doc["metrics"] = metrics_json(cfg, p, truth);
        doc["element_subsets"] = subset_metrics_json(model, ds, cfg);
    }
    write_output(doc, opts.out_path);
    return 0;
}

int run_bertz(const CommonOpts& opts, const std::string& data_path) {
    const RunConfig cfg = effective_config(opts);
    const Dataset ds = load_csv(data_path, false);
    const auto graphs = parse_dataset(ds, cfg.radii);
    const BciReport report = bci_report(graphs, cfg.histogram_bins);

    json ids = json::array();
    for (const auto& rec : ds.records) ids.push_back(rec.id);
    write_output({{"ids", ids},
                  {"bci", report.values},
                  {"mean", report.mean},
                  {"histogram", to_json(report.histogram)}},
                 opts.out_path);
    return 0;
}

int run_distance(const CommonOpts& opts, const std::string& model_path,
                 const std::string& data_path) {
    const RunConfig cfg = effective_config(opts);
    const TrainedModel model = load_model(model_path);
    const Dataset ds = load_csv(data_path, false);
    const auto graphs = parse_dataset(ds, model.radii());

    std::vector<std::string> ids;
    ids.reserve(ds.size());
    for (const auto& rec : ds.records) ids.push_back(rec.id);

    const DistanceReport report = distance_diagnostics(
        model.training_graphs(), graphs, ids, model.kernel_hyper(),
        cfg.distance_bin_width, cfg.threads);
    write_output(to_json(report), opts.out_path);
    return 0;
}

int run_embed(const CommonOpts& opts, const std::string& model_path,
              const std::string& mode, int d_max) {
    const RunConfig cfg = effective_config(opts);
    const TrainedModel model = load_model(model_path);

    Eigen::MatrixXd c = model.covariance();
    EmbedMode embed_mode = cfg.embed_mode;
    if (mode == "raw") embed_mode = EmbedMode::Raw;
    else if (mode == "distance") embed_mode = EmbedMode::Distance;
    else if (!mode.empty()) raise("InvalidConfig", "unknown embed mode '" + mode + "'");
    if (embed_mode == EmbedMode::Distance) c = covariance_to_distance(c);

    const EmbeddingResult emb = embed_mds(c, d_max);
    write_output(to_json(emb), opts.out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian process regression on molecular graphs with a "
                 "marginalized graph kernel"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string data_path, model_path, smiles, embed_mode_str;
    bool normalized_flag = false;
    int d_max = 8;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "JSON configuration file");
        sub->add_option("--out", opts.out_path, "output JSON path")->required();
        sub->add_option("--threads", opts.threads,
                        "worker cap (0 = machine parallelism)");
    };

    auto* parse_cmd = app.add_subcommand("parse", "perceive a SMILES string");
    parse_cmd->add_option("--smiles", smiles, "SMILES input")->required();
    add_common(parse_cmd);

    auto* kernel_cmd =
        app.add_subcommand("kernel", "pairwise kernel matrix of a dataset");
    kernel_cmd->add_option("--data", data_path, "dataset CSV")->required();
    kernel_cmd->add_flag("--normalized", normalized_flag,
                         "emit the cosine-normalized matrix");
    add_common(kernel_cmd);

    auto* train_cmd = app.add_subcommand("train", "fit a model");
    train_cmd->add_option("--data", data_path, "dataset CSV")->required();
    train_cmd->add_option("--model", model_path, "model output path")->required();
    add_common(train_cmd);

    auto* cv_cmd = app.add_subcommand(
        "cv", "split, cross-validated grid search, refit the best candidate");
    cv_cmd->add_option("--data", data_path, "dataset CSV")->required();
    cv_cmd->add_option("--model", model_path, "refitted best model output path");
    cv_cmd->add_flag("--timings", opts.timings,
                     "include wall-clock columns in the report");
    add_common(cv_cmd);

    auto* predict_cmd = app.add_subcommand("predict", "predict with a model");
    predict_cmd->add_option("--model", model_path, "model path")->required();
    predict_cmd->add_option("--data", data_path, "dataset CSV")->required();
    add_common(predict_cmd);

    auto* bertz_cmd =
        app.add_subcommand("bertz", "Bertz complexity report for a dataset");
    bertz_cmd->add_option("--data", data_path, "dataset CSV")->required();
    add_common(bertz_cmd);

    auto* distance_cmd = app.add_subcommand(
        "distance", "graph distances between a dataset and a model's training set");
    distance_cmd->add_option("--model", model_path, "model path")->required();
    distance_cmd->add_option("--data", data_path, "dataset CSV")->required();
    add_common(distance_cmd);

    auto* embed_cmd = app.add_subcommand(
        "embed", "low-dimensional embedding of a model's covariance");
    embed_cmd->add_option("--model", model_path, "model path")->required();
    embed_cmd->add_option("--mode", embed_mode_str, "raw | distance");
    embed_cmd->add_option("--dmax", d_max, "largest embedding dimension")
        ->required();
    add_common(embed_cmd);

    CLI11_PARSE(app, argc, argv);

    try {
        if (parse_cmd->parsed()) return run_parse(opts, smiles);
        if (kernel_cmd->parsed()) return run_kernel(opts, data_path, normalized_flag);
        if (train_cmd->parsed()) return run_train(opts, data_path, model_path);
        if (cv_cmd->parsed()) return run_cv(opts, data_path, model_path);
        if (predict_cmd->parsed()) return run_predict(opts, model_path, data_path);
        if (bertz_cmd->parsed()) return run_bertz(opts, data_path);
        if (distance_cmd->parsed()) return run_distance(opts, model_path, data_path);
        if (embed_cmd->parsed())
            return run_embed(opts, model_path, embed_mode_str, d_max);
    } catch (const Error& e) {
        std::cerr << json({{"error", e.code()}, {"detail", e.detail()}}).dump()
                  << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json({{"error", "Internal"}, {"detail", e.what()}}).dump()
                  << '\n';
        return 1;
    }
    return 1;
}
