#include "solvgp/model_selection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "solvgp/errors.hpp"
#include "solvgp/smiles.hpp"

namespace solvgp {

// Dataset lives in dataset.hpp; its methods are implemented here with the
// rest of the selection machinery.
Eigen::VectorXd Dataset::targets() const {
    Eigen::VectorXd y(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        y[static_cast<Eigen::Index>(i)] =
            records[i].has_target ? records[i].target
                                  : std::numeric_limits<double>::quiet_NaN();
    return y;
}

Dataset Dataset::sorted_by_id() const {
    Dataset out = *this;
    std::sort(out.records.begin(), out.records.end(),
              [](const DataRecord& a, const DataRecord& b) { return a.id < b.id; });
    return out;
}

std::pair<Dataset, Dataset> split_by_id(const Dataset& dataset,
                                        double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        raise("InvalidConfig", "train fraction must lie in (0,1)");
    const std::size_t n = dataset.size();
    if (n == 0) raise("EmptyDataset", "cannot split an empty dataset");

    const Dataset sorted = dataset.sorted_by_id();
    const auto n_train = static_cast<std::size_t>(
        std::ceil(train_fraction * static_cast<double>(n)));
    if (n_train >= n)
        raise("EmptyDataset", "test split is empty at this train fraction");

    Dataset train, test;
    train.provenance = dataset.provenance;
    test.provenance = dataset.provenance;
    train.records.assign(sorted.records.begin(), sorted.records.begin() + n_train);
    test.records.assign(sorted.records.begin() + n_train, sorted.records.end());
    return {std::move(train), std::move(test)};
}

std::vector<std::pair<Dataset, Dataset>> kfold(const Dataset& dataset, int k) {
    if (k < 2) raise("InvalidConfig", "fold count must be at least 2");
    const std::size_t n = dataset.size();
    if (n < static_cast<std::size_t>(k))
        raise("TooFewRecords", std::to_string(n) + " records cannot form " +
                                   std::to_string(k) + " folds");

    const Dataset sorted = dataset.sorted_by_id();
    const std::size_t base = n / k;
    const std::size_t extra = n % k;

    std::vector<std::pair<Dataset, Dataset>> folds;
    folds.reserve(k);
    std::size_t begin = 0;
    for (int f = 0; f < k; ++f) {
        const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
        const std::size_t end = begin + size;
        Dataset train, val;
        train.provenance = dataset.provenance;
        val.provenance = dataset.provenance;
        for (std::size_t i = 0; i < n; ++i) {
            if (i >= begin && i < end)
                val.records.push_back(sorted.records[i]);
            else
                train.records.push_back(sorted.records[i]);
        }
        folds.emplace_back(std::move(train), std::move(val));
        begin = end;
    }
    return folds;
}

namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty())
        raise("LengthMismatch", "prediction and truth vectors must have equal, non-zero length");
}

}  // namespace

double mae(std::span<const double> predictions, std::span<const double> truths) {
    check_lengths(predictions, truths);
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        acc += std::abs(predictions[i] - truths[i]);
    return acc / static_cast<double>(predictions.size());
}

double rmse(std::span<const double> predictions, std::span<const double> truths) {
    check_lengths(predictions, truths);
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - truths[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(predictions.size()));
}

double pearson_r2(std::span<const double> predictions,
                  std::span<const double> truths) {
    check_lengths(predictions, truths);
    const std::size_t n = predictions.size();
    if (n < 2) raise("DegenerateVariance", "need at least two points");
    const double mp = std::accumulate(predictions.begin(), predictions.end(), 0.0) /
                      static_cast<double>(n);
    const double mt = std::accumulate(truths.begin(), truths.end(), 0.0) /
                      static_cast<double>(n);
    double cov = 0.0, vp = 0.0, vt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dp = predictions[i] - mp;
        const double dt = truths[i] - mt;
        cov += dp * dt;
        vp += dp * dp;
        vt += dt * dt;
    }
    if (vt == 0.0) raise("DegenerateVariance", "truth values are constant");
    if (vp == 0.0) return 0.0;
    const double r = cov / std::sqrt(vp * vt);
    return r * r;
}

void HyperGrid::validate() const {
    auto check = [](const std::vector<double>& v, const char* name) {
        if (v.empty())
            raise("InvalidConfig", std::string("empty grid for ") + name);
    };
    check(nu, "nu");
    check(lambda, "lambda");
    check(zeta, "zeta");
    check(q, "q");
    check(alpha, "alpha");
    check(sigma_sq, "sigma_sq");
    for (double v : nu)
        if (!(v > 0.0 && v < 1.0)) raise("InvalidConfig", "nu candidate outside (0,1)");
    for (double v : lambda)
        if (!(v > 0.0)) raise("InvalidConfig", "lambda candidate must be positive");
    for (double v : zeta)
        if (!(v > 0.0)) raise("InvalidConfig", "zeta candidate must be positive");
    for (double v : q)
        if (!(v > 0.0 && v < 1.0)) raise("InvalidConfig", "q candidate outside (0,1)");
    for (double v : alpha)
        if (!(v >= 0.0)) raise("InvalidConfig", "alpha candidate must be non-negative");
    for (double v : sigma_sq)
        if (!(v > 0.0)) raise("InvalidConfig", "sigma_sq candidate must be positive");
    if (folds < 2) raise("InvalidConfig", "fold count must be at least 2");
}

std::size_t HyperGrid::candidate_count() const {
    return nu.size() * lambda.size() * zeta.size() * q.size() * alpha.size() *
           sigma_sq.size();
}

KernelHyperparameters Candidate::kernel(const KernelHyperparameters& base) const {
    KernelHyperparameters k = base;
    k.nu = nu;
    k.lambda = lambda;
    k.zeta = zeta;
    k.q = q;
    return k;
}

GPHyperparameters Candidate::gp(const GPHyperparameters& base) const {
    GPHyperparameters g = base;
    g.alpha = alpha;
    g.sigma_sq = sigma_sq;
    return g;
}

CVReport grid_search(const Dataset& train, const HyperGrid& grid,
                     const KernelHyperparameters& kernel_base,
                     const GPHyperparameters& gp_base, const RadiiTable& radii,
                     bool normalized, int threads) {
    grid.validate();
    const int k = grid.folds;
    const Dataset sorted = train.sorted_by_id();
    const std::size_t n = sorted.size();
    if (n < static_cast<std::size_t>(k))
        raise("TooFewRecords", "fewer records than folds");

    std::vector<MolecularGraph> graphs;
    graphs.reserve(n);
    for (const auto& rec : sorted.records)
        graphs.push_back(graph_from_smiles(rec.smiles, radii, rec.id));
    const Eigen::VectorXd y = sorted.targets();

    // Fold index blocks over the id-sorted order.
    std::vector<std::vector<int>> val_idx(k), train_idx(k);
    {
        const std::size_t base = n / k, extra = n % k;
        std::size_t begin = 0;
        for (int f = 0; f < k; ++f) {
            const std::size_t size = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
            for (std::size_t i = 0; i < n; ++i) {
                if (i >= begin && i < begin + size)
                    val_idx[f].push_back(static_cast<int>(i));
                else
                    train_idx[f].push_back(static_cast<int>(i));
            }
            begin += size;
        }
    }

    auto sorted_copy = [](std::vector<double> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    const auto nus = sorted_copy(grid.nu);
    const auto lambdas = sorted_copy(grid.lambda);
    const auto zetas = sorted_copy(grid.zeta);
    const auto qs = sorted_copy(grid.q);
    const auto alphas = sorted_copy(grid.alpha);
    const auto sigmas = sorted_copy(grid.sigma_sq);

    using clock = std::chrono::steady_clock;
    const double inf = std::numeric_limits<double>::infinity();

    CVReport report;
    report.folds = k;
    report.rows.reserve(grid.candidate_count());

    for (double nu : nus)
        for (double lambda : lambdas)
            for (double zeta : zetas)
                for (double q : qs) {
                    Candidate kc{nu, lambda, zeta, q, 0.0, 0.0};
                    const auto t_kernel = clock::now();
                    const KernelMatrix km = kernel_matrix(
                        graphs, kc.kernel(kernel_base), normalized, threads);
                    double kernel_seconds =
                        std::chrono::duration<double>(clock::now() - t_kernel)
                            .count();

                    for (double alpha : alphas)
                        for (double sigma_sq : sigmas) {
                            CVReport::Row row;
                            row.candidate = {nu, lambda, zeta, q, alpha, sigma_sq};
                            const GPHyperparameters gh =
                                row.candidate.gp(gp_base);
                            const auto t_row = clock::now();
                            for (int f = 0; f < k; ++f) {
                                const Eigen::MatrixXd ktt =
                                    km.values(train_idx[f], train_idx[f]);
                                const Eigen::MatrixXd kvt =
                                    km.values(val_idx[f], train_idx[f]);
                                Eigen::VectorXd yt(train_idx[f].size());
                                std::vector<double> truth(val_idx[f].size());
                                for (std::size_t i = 0; i < train_idx[f].size(); ++i)
                                    yt[static_cast<Eigen::Index>(i)] =
                                        y[train_idx[f][i]];
                                for (std::size_t i = 0; i < val_idx[f].size(); ++i)
                                    truth[i] = y[val_idx[f][i]];
                                try {
                                    const GpFit fit = fit_kernel(ktt, yt, gh);
                                    const Eigen::VectorXd pred =
                                        predict_mean_kernel(fit, kvt);
                                    std::vector<double> p(pred.data(),
                                                          pred.data() + pred.size());
                                    row.fold_mae.push_back(mae(p, truth));
                                    row.fold_rmse.push_back(rmse(p, truth));
                                } catch (const Error& e) {
                                    if (e.code() != "NotPositiveDefinite") throw;
                                    row.fold_mae.push_back(inf);
                                    row.fold_rmse.push_back(inf);
                                }
                            }
                            row.mean_mae =
                                std::accumulate(row.fold_mae.begin(),
                                                row.fold_mae.end(), 0.0) /
                                static_cast<double>(k);
                            row.wall_seconds =
                                std::chrono::duration<double>(clock::now() - t_row)
                                    .count() +
                                kernel_seconds;
                            kernel_seconds = 0.0;  // charge assembly once
                            report.rows.push_back(std::move(row));
                        }
                }

    std::size_t best = 0;
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        if (report.rows[i].mean_mae < report.rows[best].mean_mae) best = i;
    report.selected = best;
    return report;
}

}  // namespace solvgp
