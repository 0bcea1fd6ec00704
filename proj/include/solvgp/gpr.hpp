#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "solvgp/dataset.hpp"
#include "solvgp/kernel.hpp"
#include "solvgp/molgraph.hpp"

namespace solvgp {

enum class MeanMode : std::uint8_t { Zero, ConstantEstimated };

struct GPHyperparameters {
    double sigma_sq = 1.0;  // signal variance, > 0
    double alpha = 1e-2;    // noise / regularization added to the diagonal, >= 0
    MeanMode mean_mode = MeanMode::Zero;
    // Subtract the training-target mean before fitting and add it back on
    // prediction. Gives constant-mean behavior with zero-mean algebra.
    bool center_targets = true;

    void validate() const;
};

// Result of conditioning on a precomputed kernel matrix. The covariance is
// C = sigma_eff_sq * Khat + alpha_eff * I = L L^T and w = C^{-1} residual.
struct GpFit {
    Eigen::MatrixXd chol_lower;   // L
    Eigen::VectorXd weights;      // w
    double mu_hat = 0.0;          // fitted constant mean (0 in zero mode)
    double target_offset = 0.0;   // centering offset added back on predict
    double sigma_eff_sq = 1.0;    // sigma^2, or its estimator in constant mode
    double alpha_eff = 0.0;       // diagonal term actually added to C
    double log_marginal = 0.0;
    GPHyperparameters hyper;
};

// Fit against an already-assembled train-by-train kernel matrix.
// Throws NotPositiveDefinite when C admits no Cholesky factorization.
GpFit fit_kernel(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y,
                 const GPHyperparameters& hyper);

// Posterior mean from a test-by-train kernel block.
Eigen::VectorXd predict_mean_kernel(const GpFit& fit,
                                    const Eigen::MatrixXd& cross);

// Gaussian process regression over molecular graphs.
class TrainedModel {
public:
    static TrainedModel fit(std::vector<MolecularGraph> graphs,
                            Eigen::VectorXd targets,
                            const KernelHyperparameters& kernel_hyper,
                            const GPHyperparameters& gp_hyper,
                            const RadiiTable& radii = RadiiTable::standard(),
                            bool normalized = true, int threads = 0);

    // Parses the dataset's SMILES and keeps the records, so the model can be
    // persisted and its training set re-examined later.
    static TrainedModel fit(const Dataset& data,
                            const KernelHyperparameters& kernel_hyper,
                            const GPHyperparameters& gp_hyper,
                            const RadiiTable& radii = RadiiTable::standard(),
                            bool normalized = true, int threads = 0);

    // Rebuild from persisted state; the caller guarantees consistency.
    static TrainedModel restore(std::vector<MolecularGraph> graphs,
                                std::vector<DataRecord> records,
                                Eigen::VectorXd targets,
                                KernelHyperparameters kernel_hyper,
                                GPHyperparameters gp_hyper, RadiiTable radii,
                                bool normalized, GpFit fit);

    Eigen::VectorXd predict_mean(std::span<const MolecularGraph> test,
                                 int threads = 0) const;

    struct Variance {
        Eigen::VectorXd diag;  // per-molecule MSE, clamped at 0
        Eigen::MatrixXd full;
    };
    Variance predict_variance(std::span<const MolecularGraph> test,
                              int threads = 0) const;

    double log_marginal_likelihood() const { return fit_.log_marginal; }

    const std::vector<MolecularGraph>& training_graphs() const {
        return graphs_;
    }
    // Empty when the model was fitted from bare graphs.
    const std::vector<DataRecord>& training_records() const { return records_; }
    const Eigen::VectorXd& targets() const { return targets_; }
    const KernelHyperparameters& kernel_hyper() const { return kernel_hyper_; }
    const GPHyperparameters& gp_hyper() const { return gp_hyper_; }
    const RadiiTable& radii() const { return radii_; }
    bool normalized() const { return normalized_; }
    const GpFit& gp_fit() const { return fit_; }

    // C = L L^T as stored; used by the embedding front end.
    Eigen::MatrixXd covariance() const {
        return fit_.chol_lower * fit_.chol_lower.transpose();
    }

private:
    TrainedModel() = default;

    std::vector<MolecularGraph> graphs_;
    std::vector<DataRecord> records_;
    Eigen::VectorXd targets_;
    KernelHyperparameters kernel_hyper_;
    GPHyperparameters gp_hyper_;
    RadiiTable radii_ = RadiiTable::standard();
    bool normalized_ = true;
    GpFit fit_;
};

}  // namespace solvgp
