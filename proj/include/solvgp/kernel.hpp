#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "solvgp/molgraph.hpp"

namespace solvgp {

enum class KernelSolver : std::uint8_t { Auto, Dense, FixedPoint };

// Everything the marginalized graph kernel needs. Auto picks the dense
// factorization when the product system has at most dense_size_limit unknowns
// and the fixed-point iteration above that.
struct KernelHyperparameters {
    double nu = 0.3;        // vertex mismatch penalty, in (0,1)
    double lambda = 0.10;   // edge length scale, Angstrom, > 0
    double zeta = 1.0;      // adjacency length-scale multiplier, > 0
    double q = 0.05;        // walk stopping probability, in (0,1)
    double epsilon = 1.0;   // edge discrete-label mismatch factor, in (0,1]
    KernelSolver solver = KernelSolver::Auto;
    double fixed_point_tol = 1e-12;
    int max_iterations = 10000;
    AdjacencyConvention adjacency = AdjacencyConvention::Squared;
    std::size_t dense_size_limit = 4096;

    void validate() const;
};

// 1 when the full label tuples agree, nu otherwise.
double vertex_kernel(const VertexLabel& a, const VertexLabel& b, double nu);

// Square-exponential in the length difference, times epsilon when the
// discrete labels (order, aromaticity, conjugation, ring) differ.
double edge_kernel(const EdgeLabel& a, const EdgeLabel& b, double lambda,
                   double epsilon = 1.0);

// Marginalized graph kernel: expected path similarity of simultaneous random
// walks, computed by solving the product-graph equilibrium system.
double mgk_raw(const MolecularGraph& g, const MolecularGraph& gp,
               const KernelHyperparameters& hyper);

// Cosine-normalized kernel: K(G,G') / sqrt(K(G,G) K(G',G')), in [0,1].
double mgk_normalized(const MolecularGraph& g, const MolecularGraph& gp,
                      const KernelHyperparameters& hyper);

struct KernelMatrix {
    Eigen::MatrixXd values;
    bool normalized = false;
    KernelHyperparameters hyper;
};

// Pairwise kernel matrix; only the upper triangle is computed and mirrored.
// Entries may be computed concurrently; the result is bitwise independent of
// the thread count.
KernelMatrix kernel_matrix(std::span<const MolecularGraph> graphs,
                           const KernelHyperparameters& hyper, bool normalized,
                           int threads = 0);

// Rectangular rows-by-columns block; normalization uses each graph's own
// self-kernel.
Eigen::MatrixXd cross_kernel_matrix(std::span<const MolecularGraph> rows,
                                    std::span<const MolecularGraph> cols,
                                    const KernelHyperparameters& hyper,
                                    bool normalized, int threads = 0);

// Kernel-induced metric d = sqrt(2 - 2 K̂), in [0, sqrt(2)].
double graph_distance(const MolecularGraph& g, const MolecularGraph& gp,
                      const KernelHyperparameters& hyper);

// Exact truncated enumeration of simultaneous walks up to max_length
// vertices per path. Testing oracle: recursion over adjacency lists, no
// linear algebra shared with mgk_raw. Limited to n*n' <= 30, max_length <= 12.
double brute_force_kernel(const MolecularGraph& g, const MolecularGraph& gp,
                          const KernelHyperparameters& hyper, int max_length);

}  // namespace solvgp
