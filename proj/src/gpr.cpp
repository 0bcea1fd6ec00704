#include "solvgp/gpr.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "solvgp/errors.hpp"
#include "solvgp/smiles.hpp"

namespace solvgp {

void GPHyperparameters::validate() const {
    if (!(sigma_sq > 0.0))
        raise("InvalidConfig", "sigma_sq must be positive");
    if (!(alpha >= 0.0)) raise("InvalidConfig", "alpha must be non-negative");
}

GpFit fit_kernel(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& y_in,
                 const GPHyperparameters& hyper) {
    hyper.validate();
    const Eigen::Index n = kernel.rows();
    if (n == 0) raise("EmptyDataset", "fit with zero training points");
    if (kernel.cols() != n)
        raise("LengthMismatch", "kernel matrix is not square");
    if (y_in.size() != n)
        raise("LengthMismatch", "target vector and kernel matrix disagree");

    GpFit fit;
    fit.hyper = hyper;

    Eigen::VectorXd y = y_in;
    if (hyper.center_targets) {
        fit.target_offset = y.mean();
        y.array() -= fit.target_offset;
    }

    double sigma_eff = hyper.sigma_sq;
    Eigen::VectorXd resid = y;
    if (hyper.mean_mode == MeanMode::ConstantEstimated) {
        Eigen::MatrixXd psi = kernel;
        psi.diagonal().array() += hyper.alpha / hyper.sigma_sq;
        Eigen::LLT<Eigen::MatrixXd> psi_llt(psi);
        if (psi_llt.info() != Eigen::Success)
            raise("NotPositiveDefinite",
                  "correlation matrix is not positive definite; raise alpha");
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
        const Eigen::VectorXd psi_inv_y = psi_llt.solve(y);
        const Eigen::VectorXd psi_inv_1 = psi_llt.solve(ones);
        fit.mu_hat = ones.dot(psi_inv_y) / ones.dot(psi_inv_1);
        resid = y.array() - fit.mu_hat;
        if (resid.lpNorm<Eigen::Infinity>() <=
            1e-12 * (1.0 + y.lpNorm<Eigen::Infinity>())) {
            // Targets are constant: the estimator collapses to mu with zero
            // residual process variance.
            resid.setZero();
            sigma_eff = 1e-30;
        } else {
            sigma_eff = resid.dot(psi_llt.solve(resid)) / static_cast<double>(n);
        }
    }
    fit.sigma_eff_sq = sigma_eff;
    fit.alpha_eff = hyper.mean_mode == MeanMode::ConstantEstimated
                        ? sigma_eff * hyper.alpha / hyper.sigma_sq
                        : hyper.alpha;

    Eigen::MatrixXd c = sigma_eff * kernel;
    c.diagonal().array() += fit.alpha_eff;
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success)
        raise("NotPositiveDefinite",
              "covariance matrix is not positive definite; raise alpha");
    fit.chol_lower = llt.matrixL();
    fit.weights = llt.solve(resid);

    const double log_det =
        2.0 * fit.chol_lower.diagonal().array().log().sum();
    fit.log_marginal = -0.5 * resid.dot(fit.weights) - 0.5 * log_det -
                       0.5 * static_cast<double>(n) *
                           std::log(2.0 * std::numbers::pi);
    return fit;
}

Eigen::VectorXd predict_mean_kernel(const GpFit& fit,
                                    const Eigen::MatrixXd& cross) {
    if (cross.cols() != fit.weights.size())
        raise("LengthMismatch", "cross kernel block and weights disagree");
    Eigen::VectorXd out = fit.sigma_eff_sq * (cross * fit.weights);
    out.array() += fit.mu_hat + fit.target_offset;
    return out;
}

TrainedModel TrainedModel::fit(std::vector<MolecularGraph> graphs,
                               Eigen::VectorXd targets,
                               const KernelHyperparameters& kernel_hyper,
                               const GPHyperparameters& gp_hyper,
                               const RadiiTable& radii, bool normalized,
                               int threads) {
    if (graphs.empty()) raise("EmptyDataset", "fit with zero graphs");
    if (static_cast<Eigen::Index>(graphs.size()) != targets.size())
        raise("LengthMismatch", "graph count and target count disagree");

    const KernelMatrix km = kernel_matrix(graphs, kernel_hyper, normalized, threads);

    TrainedModel model;
    model.graphs_ = std::move(graphs);
    model.targets_ = std::move(targets);
    model.kernel_hyper_ = kernel_hyper;
    model.gp_hyper_ = gp_hyper;
    model.radii_ = radii;
    model.normalized_ = normalized;
    model.fit_ = fit_kernel(km.values, model.targets_, gp_hyper);
    return model;
}

TrainedModel TrainedModel::fit(const Dataset& data,
                               const KernelHyperparameters& kernel_hyper,
                               const GPHyperparameters& gp_hyper,
                               const RadiiTable& radii, bool normalized,
                               int threads) {
    if (data.records.empty()) raise("EmptyDataset", "fit with zero records");
    std::vector<MolecularGraph> graphs;
    graphs.reserve(data.size());
    for (const auto& rec : data.records)
        graphs.push_back(graph_from_smiles(rec.smiles, radii, rec.id));
    TrainedModel model = fit(std::move(graphs), data.targets(), kernel_hyper,
                             gp_hyper, radii, normalized, threads);
    model.records_ = data.records;
    return model;
}

TrainedModel TrainedModel::restore(std::vector<MolecularGraph> graphs,
                                   std::vector<DataRecord> records,
                                   Eigen::VectorXd targets,
                                   KernelHyperparameters kernel_hyper,
                                   GPHyperparameters gp_hyper, RadiiTable radii,
                                   bool normalized, GpFit fit) {
    TrainedModel model;
    model.graphs_ = std::move(graphs);
    model.records_ = std::move(records);
    model.targets_ = std::move(targets);
    model.kernel_hyper_ = kernel_hyper;
    model.gp_hyper_ = gp_hyper;
    model.radii_ = radii;
    model.normalized_ = normalized;
    model.fit_ = std::move(fit);
    return model;
}

Eigen::VectorXd TrainedModel::predict_mean(std::span<const MolecularGraph> test,
                                           int threads) const {
    const Eigen::MatrixXd cross =
        cross_kernel_matrix(test, graphs_, kernel_hyper_, normalized_, threads);
    return predict_mean_kernel(fit_, cross);
}

TrainedModel::Variance TrainedModel::predict_variance(
    std::span<const MolecularGraph> test, int threads) const {
    const Eigen::MatrixXd cross =
        cross_kernel_matrix(test, graphs_, kernel_hyper_, normalized_, threads);
    const KernelMatrix ktt = kernel_matrix(test, kernel_hyper_, normalized_, threads);

    // Sigma* = s2 K** - (s2 K_D*)^T C^{-1} (s2 K_D*) with C = L L^T.
    const double s2 = fit_.sigma_eff_sq;
    const Eigen::MatrixXd b = s2 * cross.transpose();  // train x test
    const Eigen::MatrixXd z =
        fit_.chol_lower.triangularView<Eigen::Lower>().solve(b);

    Variance var;
    var.full = s2 * ktt.values - z.transpose() * z;
    var.diag = var.full.diagonal().cwiseMax(0.0);
    return var;
}

}  // namespace solvgp
