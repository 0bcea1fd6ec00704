#include "solvgp/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "solvgp/errors.hpp"
#include "solvgp/smiles.hpp"

namespace solvgp {

using nlohmann::json;

namespace {

// RFC-4180 style fields: commas inside double quotes are literal and "" is an
// escaped quote.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

}  // namespace

Dataset load_csv(const std::string& path, bool require_target) {
    std::ifstream in(path);
    if (!in) raise("FileNotFound", "cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line))
        raise("MissingColumn", "file '" + path + "' has no header row");
    const auto header = split_csv_line(strip_cr(line));

    int id_col = -1, smiles_col = -1, target_col = -1;
    for (int i = 0; i < static_cast<int>(header.size()); ++i) {
        if (header[i] == "id") id_col = i;
        else if (header[i] == "smiles") smiles_col = i;
        else if (header[i] == "target") target_col = i;
    }
    if (id_col < 0) raise("MissingColumn", "required column 'id' not found");
    if (smiles_col < 0)
        raise("MissingColumn", "required column 'smiles' not found");
    if (target_col < 0 && require_target)
        raise("MissingColumn", "required column 'target' not found");

    Dataset ds;
    ds.provenance = path;
    std::set<std::string> ids;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        const int needed = std::max({id_col, smiles_col, target_col});
        if (static_cast<int>(fields.size()) <= needed)
            raise("UnparsableTarget",
                  "row " + std::to_string(row) + " has too few fields");

        DataRecord rec;
        rec.id = fields[id_col];
        rec.smiles = fields[smiles_col];
        if (!ids.insert(rec.id).second)
            raise("DuplicateId", "duplicate id '" + rec.id + "' at row " +
                                     std::to_string(row));
        if (target_col >= 0 && !fields[target_col].empty()) {
            const std::string& cell = fields[target_col];
            std::size_t used = 0;
            try {
                rec.target = std::stod(cell, &used);
            } catch (...) {
                raise("UnparsableTarget", "row " + std::to_string(row) +
                                              ": cannot parse '" + cell + "'");
            }
            if (used != cell.size())
                raise("UnparsableTarget", "row " + std::to_string(row) +
                                              ": trailing characters in '" +
                                              cell + "'");
        } else {
            if (require_target)
                raise("UnparsableTarget",
                      "row " + std::to_string(row) + ": empty target");
            rec.has_target = false;
        }
        ds.records.push_back(std::move(rec));
    }
    return ds;
}

namespace {

json radii_to_json(const RadiiTable& t) {
    json radii = json::object();
    for (int i = 0; i < kElementCount; ++i)
        radii[element_symbol(static_cast<Element>(i))] = t.radii[i];
    json factors = {{"single", t.factor_single},
                    {"aromatic", t.factor_aromatic},
                    {"double", t.factor_double},
                    {"triple", t.factor_triple}};
    return {{"radii", radii}, {"order_factors", factors}};
}

RadiiTable radii_from_json(const json& j) {
    RadiiTable t = RadiiTable::standard();
    if (j.contains("radii")) {
        for (const auto& [key, value] : j.at("radii").items()) {
            Element e;
            if (!element_from_symbol(key, e))
                raise("UnsupportedElement", "radius for unknown element '" + key + "'");
            t.radii[static_cast<int>(e)] = value.get<double>();
        }
    }
    if (j.contains("order_factors")) {
        const json& f = j.at("order_factors");
        if (f.contains("single")) t.factor_single = f.at("single").get<double>();
        if (f.contains("aromatic")) t.factor_aromatic = f.at("aromatic").get<double>();
        if (f.contains("double")) t.factor_double = f.at("double").get<double>();
        if (f.contains("triple")) t.factor_triple = f.at("triple").get<double>();
    }
    t.validate();
    return t;
}

std::string solver_name(KernelSolver s) {
    switch (s) {
        case KernelSolver::Auto: return "auto";
        case KernelSolver::Dense: return "dense";
        case KernelSolver::FixedPoint: return "fixed_point";
    }
    return "auto";
}

KernelSolver solver_from_name(const std::string& s) {
    if (s == "auto") return KernelSolver::Auto;
    if (s == "dense") return KernelSolver::Dense;
    if (s == "fixed_point") return KernelSolver::FixedPoint;
    raise("InvalidConfig", "unknown solver '" + s + "'");
}

json kernel_to_json(const KernelHyperparameters& k) {
    return {{"nu", k.nu},
            {"lambda", k.lambda},
            {"zeta", k.zeta},
            {"q", k.q},
            {"epsilon", k.epsilon},
            {"solver", solver_name(k.solver)},
            {"fixed_point_tol", k.fixed_point_tol},
            {"max_iterations", k.max_iterations},
            {"adjacency_exponent_convention",
             k.adjacency == AdjacencyConvention::Squared ? "squared" : "unsquared"},
            {"dense_size_limit", k.dense_size_limit}};
}

KernelHyperparameters kernel_from_json(const json& j,
                                       KernelHyperparameters k) {
    if (j.contains("nu")) k.nu = j.at("nu").get<double>();
    if (j.contains("lambda")) k.lambda = j.at("lambda").get<double>();
    if (j.contains("zeta")) k.zeta = j.at("zeta").get<double>();
    if (j.contains("q")) k.q = j.at("q").get<double>();
    if (j.contains("epsilon")) k.epsilon = j.at("epsilon").get<double>();
    if (j.contains("solver"))
        k.solver = solver_from_name(j.at("solver").get<std::string>());
    if (j.contains("fixed_point_tol"))
        k.fixed_point_tol = j.at("fixed_point_tol").get<double>();
    if (j.contains("max_iterations"))
        k.max_iterations = j.at("max_iterations").get<int>();
    if (j.contains("adjacency_exponent_convention")) {
        const auto name = j.at("adjacency_exponent_convention").get<std::string>();
        if (name == "squared")
            k.adjacency = AdjacencyConvention::Squared;
        else if (name == "unsquared")
            k.adjacency = AdjacencyConvention::Unsquared;
        else
            raise("InvalidConfig", "unknown adjacency convention '" + name + "'");
    }
    if (j.contains("dense_size_limit"))
        k.dense_size_limit = j.at("dense_size_limit").get<std::size_t>();
    k.validate();
    return k;
}

json gp_to_json(const GPHyperparameters& g) {
    return {{"sigma_sq", g.sigma_sq},
            {"alpha", g.alpha},
            {"mean_mode",
             g.mean_mode == MeanMode::Zero ? "zero" : "constant_estimated"},
            {"center_targets", g.center_targets}};
}

GPHyperparameters gp_from_json(const json& j, GPHyperparameters g) {
    if (j.contains("sigma_sq")) g.sigma_sq = j.at("sigma_sq").get<double>();
    if (j.contains("alpha")) g.alpha = j.at("alpha").get<double>();
    if (j.contains("mean_mode")) {
        const auto name = j.at("mean_mode").get<std::string>();
        if (name == "zero")
            g.mean_mode = MeanMode::Zero;
        else if (name == "constant_estimated")
            g.mean_mode = MeanMode::ConstantEstimated;
        else
            raise("InvalidConfig", "unknown mean mode '" + name + "'");
    }
    if (j.contains("center_targets"))
        g.center_targets = j.at("center_targets").get<bool>();
    g.validate();
    return g;
}

std::vector<double> packed_lower(const Eigen::MatrixXd& l) {
    const Eigen::Index n = l.rows();
    std::vector<double> out;
    out.reserve(n * (n + 1) / 2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) out.push_back(l(i, j));
    return out;
}

Eigen::MatrixXd unpack_lower(const std::vector<double>& packed, Eigen::Index n) {
    if (static_cast<Eigen::Index>(packed.size()) != n * (n + 1) / 2)
        raise("CorruptModel", "factor size does not match training set size");
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) l(i, j) = packed[k++];
    return l;
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
    if (model.training_records().size() != model.training_graphs().size())
        raise("Internal",
              "model carries no training records; fit from a Dataset to persist");
    const GpFit& fit = model.gp_fit();

    json training = json::array();
    for (const auto& rec : model.training_records())
        training.push_back(
            {{"id", rec.id}, {"smiles", rec.smiles}, {"target", rec.target}});

    std::vector<double> weights(model.targets().size());
    for (Eigen::Index i = 0; i < fit.weights.size(); ++i)
        weights[static_cast<std::size_t>(i)] = fit.weights[i];

    json doc = {{"format_version", kModelFormatVersion},
                {"kernel", kernel_to_json(model.kernel_hyper())},
                {"gp", gp_to_json(model.gp_hyper())},
                {"normalized", model.normalized()},
                {"mu_hat", fit.mu_hat},
                {"target_offset", fit.target_offset},
                {"sigma_eff_sq", fit.sigma_eff_sq},
                {"alpha_eff", fit.alpha_eff},
                {"log_marginal", fit.log_marginal},
                {"training", training},
                {"weights", weights},
                {"chol_lower", packed_lower(fit.chol_lower)}};
    doc.update(radii_to_json(model.radii()));

    std::ofstream out(path);
    if (!out) raise("FileNotFound", "cannot write model to '" + path + "'");
    out << doc.dump(2) << '\n';
    if (!out) raise("FileNotFound", "failed while writing '" + path + "'");
}

TrainedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise("FileNotFound", "cannot open model '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        raise("CorruptModel", "model parse error: " + std::string(e.what()));
    }

    try {
        if (!doc.contains("format_version") ||
            doc.at("format_version").get<int>() != kModelFormatVersion)
            raise("VersionMismatch",
                  "model format version is not " +
                      std::to_string(kModelFormatVersion));

        const KernelHyperparameters kh =
            kernel_from_json(doc.at("kernel"), KernelHyperparameters{});
        const GPHyperparameters gh =
            gp_from_json(doc.at("gp"), GPHyperparameters{});
        const RadiiTable radii = radii_from_json(doc);
        const bool normalized = doc.at("normalized").get<bool>();

        std::vector<DataRecord> records;
        for (const auto& r : doc.at("training"))
            records.push_back({r.at("id").get<std::string>(),
                               r.at("smiles").get<std::string>(),
                               r.at("target").get<double>(), true});
        if (records.empty()) raise("CorruptModel", "model has no training records");
        const auto n = static_cast<Eigen::Index>(records.size());

        GpFit fit;
        fit.hyper = gh;
        fit.mu_hat = doc.at("mu_hat").get<double>();
        fit.target_offset = doc.at("target_offset").get<double>();
        fit.sigma_eff_sq = doc.at("sigma_eff_sq").get<double>();
        fit.alpha_eff = doc.at("alpha_eff").get<double>();
        fit.log_marginal = doc.at("log_marginal").get<double>();

        const auto w = doc.at("weights").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(w.size()) != n)
            raise("CorruptModel", "weight vector size mismatch");
        fit.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), n);
        fit.chol_lower =
            unpack_lower(doc.at("chol_lower").get<std::vector<double>>(), n);

        std::vector<MolecularGraph> graphs;
        graphs.reserve(records.size());
        Eigen::VectorXd targets(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            graphs.push_back(
                graph_from_smiles(records[i].smiles, radii, records[i].id));
            targets[i] = records[i].target;
        }

        // Consistency check: L L^T must reproduce the covariance recomputed
        // from the stored hyperparameters on a sampled principal minor.
        const Eigen::Index sample = std::min<Eigen::Index>(n, 5);
        std::vector<int> idx(sample);
        for (Eigen::Index s = 0; s < sample; ++s)
            idx[s] = static_cast<int>(sample == 1 ? 0 : s * (n - 1) / (sample - 1));
        std::vector<MolecularGraph> sub;
        for (int i : idx) sub.push_back(graphs[i]);
        const KernelMatrix km = kernel_matrix(sub, kh, normalized, 0);
        Eigen::MatrixXd c_sample = fit.sigma_eff_sq * km.values;
        c_sample.diagonal().array() += fit.alpha_eff;
        const Eigen::MatrixXd ll = fit.chol_lower * fit.chol_lower.transpose();
        Eigen::MatrixXd ll_sample(sample, sample);
        for (Eigen::Index a = 0; a < sample; ++a)
            for (Eigen::Index b = 0; b < sample; ++b)
                ll_sample(a, b) = ll(idx[a], idx[b]);
        if ((ll_sample - c_sample).cwiseAbs().maxCoeff() > 1e-6)
            raise("CorruptModel",
                  "stored factorization disagrees with recomputed covariance");

        return TrainedModel::restore(std::move(graphs), std::move(records),
                                     std::move(targets), kh, gh, radii,
                                     normalized, std::move(fit));
    } catch (const json::exception& e) {
        raise("CorruptModel", "model field error: " + std::string(e.what()));
    }
}

RunConfig RunConfig::defaults() {
    RunConfig c;
    c.element_subsets = {{Element::C, Element::H},
                         {Element::C, Element::H, Element::O},
                         {Element::C, Element::H, Element::O, Element::N}};
    return c;
}

void RunConfig::validate() const {
    kernel.validate();
    gp.validate();
    grid.validate();
    radii.validate();
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        raise("InvalidConfig", "train fraction must lie in (0,1)");
    if (!(distance_bin_width > 0.0))
        raise("InvalidConfig", "distance bin width must be positive");
    if (histogram_bins < 1)
        raise("InvalidConfig", "histogram bin count must be positive");
    if (threads < 0) raise("InvalidConfig", "thread count must be >= 0");
}

RunConfig config_from_json(const json& j) {
    RunConfig c = RunConfig::defaults();
    if (j.contains("kernel")) c.kernel = kernel_from_json(j.at("kernel"), c.kernel);
    if (j.contains("gp")) c.gp = gp_from_json(j.at("gp"), c.gp);
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        if (g.contains("nu")) c.grid.nu = g.at("nu").get<std::vector<double>>();
        if (g.contains("lambda"))
            c.grid.lambda = g.at("lambda").get<std::vector<double>>();
        if (g.contains("zeta"))
            c.grid.zeta = g.at("zeta").get<std::vector<double>>();
        if (g.contains("q")) c.grid.q = g.at("q").get<std::vector<double>>();
        if (g.contains("alpha"))
            c.grid.alpha = g.at("alpha").get<std::vector<double>>();
        if (g.contains("sigma_sq"))
            c.grid.sigma_sq = g.at("sigma_sq").get<std::vector<double>>();
        if (g.contains("folds")) c.grid.folds = g.at("folds").get<int>();
    }
    c.radii = radii_from_json(j);
    if (j.contains("split") && j.at("split").contains("train_fraction"))
        c.train_fraction = j.at("split").at("train_fraction").get<double>();
    if (j.contains("normalized")) c.normalized = j.at("normalized").get<bool>();
    if (j.contains("embed") && j.at("embed").contains("mode")) {
        const auto mode = j.at("embed").at("mode").get<std::string>();
        if (mode == "raw")
            c.embed_mode = EmbedMode::Raw;
        else if (mode == "distance")
            c.embed_mode = EmbedMode::Distance;
        else
            raise("InvalidConfig", "unknown embed mode '" + mode + "'");
    }
    if (j.contains("element_subsets")) {
        c.element_subsets.clear();
        for (const auto& arr : j.at("element_subsets")) {
            std::vector<Element> set;
            for (const auto& sym : arr) {
                Element e;
                if (!element_from_symbol(sym.get<std::string>(), e))
                    raise("UnsupportedElement",
                          "unknown element '" + sym.get<std::string>() +
                              "' in element_subsets");
                set.push_back(e);
            }
            c.element_subsets.push_back(std::move(set));
        }
    }
    if (j.contains("metrics"))
        c.metrics = j.at("metrics").get<std::vector<std::string>>();
    if (j.contains("distance_bin_width"))
        c.distance_bin_width = j.at("distance_bin_width").get<double>();
    if (j.contains("histogram_bins"))
        c.histogram_bins = j.at("histogram_bins").get<int>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) raise("FileNotFound", "cannot open config '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        raise("InvalidConfig", "config parse error: " + std::string(e.what()));
    }
    return config_from_json(j);
}

json to_json(const Histogram& h) {
    return {{"edges", h.edges}, {"counts", h.counts}, {"density", h.density}};
}

json to_json(const CVReport& report, bool include_timings) {
    json rows = json::array();
    for (const auto& row : report.rows) {
        json r = {{"candidate",
                   {{"nu", row.candidate.nu},
                    {"lambda", row.candidate.lambda},
                    {"zeta", row.candidate.zeta},
                    {"q", row.candidate.q},
                    {"alpha", row.candidate.alpha},
                    {"sigma_sq", row.candidate.sigma_sq}}},
                  {"fold_mae", row.fold_mae},
                  {"fold_rmse", row.fold_rmse},
                  {"mean_mae", row.mean_mae}};
        if (include_timings) r["wall_seconds"] = row.wall_seconds;
        rows.push_back(std::move(r));
    }
    return {{"folds", report.folds},
            {"rows", rows},
            {"selected", report.selected}};
}

json to_json(const EmbeddingResult& emb) {
    json eigenvalues = json::array();
    for (Eigen::Index i = 0; i < emb.eigenvalues.size(); ++i)
        eigenvalues.push_back(emb.eigenvalues[i]);
    json points = json::array();
    for (Eigen::Index i = 0; i < emb.points.rows(); ++i)
        for (Eigen::Index j = 0; j < emb.points.cols(); ++j)
            points.push_back(emb.points(i, j));
    json out = {{"eigenvalues", eigenvalues},
                {"error_curve", emb.error_curve},
                {"points",
                 {{"rows", emb.points.rows()},
                  {"cols", emb.points.cols()},
                  {"data", points}}}};
    if (emb.d_at_10pct)
        out["d_at_10pct"] = *emb.d_at_10pct;
    else
        out["d_at_10pct"] = nullptr;
    return out;
}

json to_json(const DistanceReport& report) {
    json per_test = json::array();
    for (const auto& pt : report.per_test)
        per_test.push_back({{"id", pt.id},
                            {"mean_distance", pt.mean_distance},
                            {"min_distance", pt.min_distance},
                            {"far", pt.far}});
    json hists = json::array();
    for (const auto& h : report.per_test_hist) hists.push_back(to_json(h));
    return {{"train_train_mean", report.train_train_mean},
            {"per_test", per_test},
            {"histograms",
             {{"train_train", to_json(report.train_train)},
              {"per_test", hists}}}};
}

json graph_to_json(const MolecularGraph& g, double zeta,
                   AdjacencyConvention convention) {
    json vertices = json::array();
    for (const auto& v : g.vertices())
        vertices.push_back({{"element", element_symbol(v.element)},
                            {"charge", v.charge},
                            {"hybridization", hybridization_name(v.hybridization)},
                            {"aromatic", v.aromatic},
                            {"conjugated", v.conjugated},
                            {"hydrogens", v.hydrogens}});
    json edges = json::array();
    for (const auto& e : g.edges())
        edges.push_back(
            {{"i", e.i},
             {"j", e.j},
             {"order", e.label.order},
             {"aromatic", e.label.aromatic},
             {"conjugated", e.label.conjugated},
             {"ring", e.label.ring},
             {"length", e.label.length},
             {"weight", adjacency_weight(e.label.length, e.sigma, zeta, convention)}});
    return {{"id", g.source_id()}, {"vertices", vertices}, {"edges", edges}};
}

}  // namespace solvgp
