#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "solvgp/gpr.hpp"
#include "solvgp/model_selection.hpp"
#include "solvgp/molgraph.hpp"

namespace solvgp {

struct Histogram {
    std::vector<double> edges;        // bin k covers [edges[k], edges[k+1])
    std::vector<std::int64_t> counts;
    std::vector<double> density;      // counts / (N * width)
};

Histogram histogram_bins(std::span<const double> values, int bins);
Histogram histogram_width(std::span<const double> values, double width);
// Same, with bin edges fixed by the caller (shared binning across populations).
Histogram histogram_with_edges(std::span<const double> values,
                               const std::vector<double>& edges);

// All unordered pairs of distinct edges sharing a vertex, as edge-index pairs.
std::vector<std::pair<int, int>> adjacent_edge_pairs(const MolecularGraph& g);

// Partition of the adjacent-edge pairs into symmetry classes. Two pairs are
// equivalent when their canonical signatures match; vertex colors come from
// iterated neighborhood refinement run to a fixed point.
std::vector<std::vector<int>> symmetry_classes(
    const std::vector<std::pair<int, int>>& pairs, const MolecularGraph& g);

// Bertz complexity: 2 n log2 n - sum_i n_i log2 n_i over symmetry classes of
// adjacent-edge pairs, with 0 log 0 = 0 and BCI = 0 for n = 0.
double bertz_index(const MolecularGraph& g);

struct BciReport {
    std::vector<double> values;  // per molecule, input order
    double mean = 0.0;
    Histogram histogram;
};

BciReport bci_report(std::span<const MolecularGraph> graphs, int bins);

struct SubsetMetrics {
    std::string label;      // e.g. "C,H,O"
    std::size_t count = 0;  // molecules in the subset
    double mae = 0.0;
    double rmse = 0.0;
};

// Metrics restricted to test molecules whose element set is contained in each
// candidate set. Empty subsets are omitted.
std::vector<SubsetMetrics> element_subset_eval(
    const TrainedModel& model, const Dataset& test,
    const std::vector<std::vector<Element>>& element_sets, int threads = 0);

struct DistanceReport {
    double train_train_mean = 0.0;
    struct PerTest {
        std::string id;
        double mean_distance = 0.0;
        double min_distance = 0.0;
        bool far = false;  // no training molecule within distance 1.0
    };
    std::vector<PerTest> per_test;
    Histogram train_train;             // shared bin edges across populations
    std::vector<Histogram> per_test_hist;
};

DistanceReport distance_diagnostics(std::span<const MolecularGraph> train,
                                    std::span<const MolecularGraph> test,
                                    std::span<const std::string> test_ids,
                                    const KernelHyperparameters& hyper,
                                    double bin_width = 0.05, int threads = 0);

struct EmbeddingResult {
    Eigen::MatrixXd points;       // m x d_max, columns ordered by eigenvalue
    Eigen::VectorXd eigenvalues;  // descending, full spectrum
    std::vector<double> error_curve;  // ||C~(d) - C||_F / ||C||_F, d = 1..d_max
    std::optional<int> d_at_10pct;    // smallest d with error < 0.1
};

// Anchored classical scaling of a square symmetric matrix: build
// T_ij = (C_1j^2 + C_i1^2 - C_ij^2) / 2, eigendecompose, take X = U sqrt(S)
// with negative eigenvalues clamped to zero, and compare the pairwise
// distances of the leading d columns against C.
EmbeddingResult embed_mds(const Eigen::MatrixXd& c, int d_max);

// d_ij = sqrt(C_ii + C_jj - 2 C_ij): covariance to a coherent distance matrix.
Eigen::MatrixXd covariance_to_distance(const Eigen::MatrixXd& c);

}  // namespace solvgp
