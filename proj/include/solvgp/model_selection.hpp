#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "solvgp/dataset.hpp"
#include "solvgp/gpr.hpp"
#include "solvgp/kernel.hpp"

namespace solvgp {

// Deterministic split: sort by id, first ceil(f*N) records train, rest test.
// Both halves must be non-empty.
std::pair<Dataset, Dataset> split_by_id(const Dataset& dataset,
                                        double train_fraction);

// Contiguous blocks of the id-sorted records; the first N mod k blocks carry
// the extra record. Fold i pairs the complement (train) with block i
// (validation).
std::vector<std::pair<Dataset, Dataset>> kfold(const Dataset& dataset, int k);

double mae(std::span<const double> predictions, std::span<const double> truths);
double rmse(std::span<const double> predictions, std::span<const double> truths);
// Squared Pearson correlation coefficient.
double pearson_r2(std::span<const double> predictions,
                  std::span<const double> truths);

struct HyperGrid {
    std::vector<double> nu = {0.1, 0.3, 0.5};
    std::vector<double> lambda = {0.05, 0.10, 0.20};
    std::vector<double> zeta = {0.5, 1.0};
    std::vector<double> q = {0.01, 0.05, 0.10};
    std::vector<double> alpha = {1e-4, 1e-2, 1e-1};
    std::vector<double> sigma_sq = {1.0, 10.0};
    int folds = 10;

    void validate() const;
    std::size_t candidate_count() const;
};

struct Candidate {
    double nu, lambda, zeta, q, alpha, sigma_sq;

    KernelHyperparameters kernel(const KernelHyperparameters& base) const;
    GPHyperparameters gp(const GPHyperparameters& base) const;
};

struct CVReport {
    struct Row {
        Candidate candidate;
        std::vector<double> fold_mae;   // one entry per fold; inf on failure
        std::vector<double> fold_rmse;
        double mean_mae = 0.0;
        double wall_seconds = 0.0;
    };
    std::vector<Row> rows;      // canonical candidate order
    std::size_t selected = 0;   // min mean MAE; ties to the smallest tuple
    int folds = 0;
};

// Exhaustive k-fold cross-validated grid search selecting the candidate with
// the minimum mean validation MAE. Kernel matrices over the full dataset are
// assembled once per (nu, lambda, zeta, q) and sliced per fold, so the report
// is deterministic given (dataset, grid) and independent of the thread count.
// Candidates whose fit fails are recorded with infinite MAE.
CVReport grid_search(const Dataset& train, const HyperGrid& grid,
                     const KernelHyperparameters& kernel_base,
                     const GPHyperparameters& gp_base,
                     const RadiiTable& radii, bool normalized = true,
                     int threads = 0);

}  // namespace solvgp
