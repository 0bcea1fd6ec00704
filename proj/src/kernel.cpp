#include "solvgp/kernel.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/LU>

#include "solvgp/errors.hpp"
#include "solvgp/parallel.hpp"

namespace solvgp {

void KernelHyperparameters::validate() const {
    if (!(nu > 0.0 && nu < 1.0))
        raise("InvalidConfig", "nu must lie in (0,1)");
    if (!(lambda > 0.0)) raise("InvalidConfig", "lambda must be positive");
    if (!(zeta > 0.0)) raise("InvalidConfig", "zeta must be positive");
    if (!(q > 0.0 && q < 1.0))
        raise("InvalidConfig", "q must lie in (0,1)");
    if (!(epsilon > 0.0 && epsilon <= 1.0))
        raise("InvalidConfig", "epsilon must lie in (0,1]");
    if (!(fixed_point_tol > 0.0))
        raise("InvalidConfig", "fixed-point tolerance must be positive");
    if (max_iterations < 1)
        raise("InvalidConfig", "max_iterations must be at least 1");
}

double vertex_kernel(const VertexLabel& a, const VertexLabel& b, double nu) {
    return a == b ? 1.0 : nu;
}

double edge_kernel(const EdgeLabel& a, const EdgeLabel& b, double lambda,
                   double epsilon) {
    const double d = a.length - b.length;
    double k = std::exp(-d * d / (2.0 * lambda * lambda));
    if (!a.same_discrete_labels(b)) k *= epsilon;
    return k;
}

namespace {

// Directed view of one graph's random walk: per-vertex arcs carrying
// transition probabilities (1-q) A_uv / sum_w A_uw. A vertex without
// neighbors keeps an empty arc list; the walk can only stop there.
struct WalkGraph {
    struct Arc {
        int to;
        int edge;
        double p;
    };
    std::vector<std::vector<Arc>> arcs;
};

WalkGraph make_walk_graph(const MolecularGraph& g,
                          const KernelHyperparameters& h) {
    const int n = g.size();
    std::vector<double> edge_w(g.edges().size());
    std::vector<double> rowsum(n, 0.0);
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
        const auto& ed = g.edges()[e];
        edge_w[e] =
            adjacency_weight(ed.label.length, ed.sigma, h.zeta, h.adjacency);
        rowsum[ed.i] += edge_w[e];
        rowsum[ed.j] += edge_w[e];
    }
    WalkGraph w;
    w.arcs.resize(n);
    for (int v = 0; v < n; ++v) {
        w.arcs[v].reserve(g.neighbors(v).size());
        for (const auto& a : g.neighbors(v))
            w.arcs[v].push_back(
                {a.to, a.edge, (1.0 - h.q) * edge_w[a.edge] / rowsum[v]});
    }
    return w;
}

// Microkernel lookup tables for one pair of graphs.
struct PairTables {
    int n, np;
    std::vector<double> kv;  // n * np
    std::vector<double> ke;  // m * mp
    int mp;
};

PairTables make_tables(const MolecularGraph& g, const MolecularGraph& gp,
                       const KernelHyperparameters& h) {
    PairTables t;
    t.n = g.size();
    t.np = gp.size();
    t.kv.resize(static_cast<std::size_t>(t.n) * t.np);
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.np; ++j)
            t.kv[static_cast<std::size_t>(i) * t.np + j] =
                vertex_kernel(g.vertices()[i], gp.vertices()[j], h.nu);

    const int m = static_cast<int>(g.edges().size());
    t.mp = static_cast<int>(gp.edges().size());
    t.ke.resize(static_cast<std::size_t>(m) * t.mp);
    for (int e = 0; e < m; ++e)
        for (int f = 0; f < t.mp; ++f)
            t.ke[static_cast<std::size_t>(e) * t.mp + f] = edge_kernel(
                g.edges()[e].label, gp.edges()[f].label, h.lambda, h.epsilon);
    return t;
}

Eigen::VectorXd solve_dense(const WalkGraph& wa, const WalkGraph& wb,
                            const PairTables& t, double q) {
    const Eigen::Index nsys =
        static_cast<Eigen::Index>(t.n) * static_cast<Eigen::Index>(t.np);
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(nsys, nsys);
    for (int h1 = 0; h1 < t.n; ++h1) {
        for (int h2 = 0; h2 < t.np; ++h2) {
            const Eigen::Index row =
                static_cast<Eigen::Index>(h1) * t.np + h2;
            for (const auto& a1 : wa.arcs[h1]) {
                const double pa = a1.p;
                const std::size_t ke_base =
                    static_cast<std::size_t>(a1.edge) * t.mp;
                for (const auto& a2 : wb.arcs[h2]) {
                    const Eigen::Index col =
                        static_cast<Eigen::Index>(a1.to) * t.np + a2.to;
                    s(row, col) -= pa * a2.p * t.kv[col] * t.ke[ke_base + a2.edge];
                }
            }
        }
    }
    const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(nsys, q * q);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(std::move(s));
    Eigen::VectorXd r = lu.solve(rhs);
    if (!r.allFinite())
        raise("SingularSystem", "equilibrium system solve produced non-finite values");
    return r;
}

Eigen::VectorXd solve_fixed_point(const WalkGraph& wa, const WalkGraph& wb,
                                  const PairTables& t,
                                  const KernelHyperparameters& h) {
    const std::size_t nsys =
        static_cast<std::size_t>(t.n) * static_cast<std::size_t>(t.np);
    const double b = h.q * h.q;
    Eigen::VectorXd r = Eigen::VectorXd::Constant(nsys, b);
    Eigen::VectorXd next(nsys);
    for (int iter = 0; iter < h.max_iterations; ++iter) {
        double delta = 0.0;
        double rmax = 0.0;
        for (int h1 = 0; h1 < t.n; ++h1) {
            for (int h2 = 0; h2 < t.np; ++h2) {
                const std::size_t row = static_cast<std::size_t>(h1) * t.np + h2;
                double acc = b;
                for (const auto& a1 : wa.arcs[h1]) {
                    const double pa = a1.p;
                    const std::size_t ke_base =
                        static_cast<std::size_t>(a1.edge) * t.mp;
                    for (const auto& a2 : wb.arcs[h2]) {
                        const std::size_t col =
                            static_cast<std::size_t>(a1.to) * t.np + a2.to;
                        acc += pa * a2.p * t.kv[col] * t.ke[ke_base + a2.edge] *
                               r[static_cast<Eigen::Index>(col)];
                    }
                }
                next[static_cast<Eigen::Index>(row)] = acc;
                delta = std::max(delta,
                                 std::abs(acc - r[static_cast<Eigen::Index>(row)]));
                rmax = std::max(rmax, std::abs(acc));
            }
        }
        r.swap(next);
        if (delta <= h.fixed_point_tol * std::max(1.0, rmax)) return r;
    }
    raise("FixedPointDivergence",
          "fixed-point iteration did not reach tolerance within " +
              std::to_string(h.max_iterations) + " iterations");
}

double mgk_checked(const MolecularGraph& g, const MolecularGraph& gp,
                   const KernelHyperparameters& h) {
    const WalkGraph wa = make_walk_graph(g, h);
    const WalkGraph wb = make_walk_graph(gp, h);
    const PairTables t = make_tables(g, gp, h);
    const std::size_t nsys =
        static_cast<std::size_t>(t.n) * static_cast<std::size_t>(t.np);

    const bool dense =
        h.solver == KernelSolver::Dense ||
        (h.solver == KernelSolver::Auto && nsys <= h.dense_size_limit);
    const Eigen::VectorXd r = dense ? solve_dense(wa, wb, t, h.q)
                                    : solve_fixed_point(wa, wb, t, h);

    double acc = 0.0;
    for (std::size_t idx = 0; idx < nsys; ++idx)
        acc += t.kv[idx] * r[static_cast<Eigen::Index>(idx)];
    return acc / (static_cast<double>(t.n) * static_cast<double>(t.np));
}

}  // namespace

double mgk_raw(const MolecularGraph& g, const MolecularGraph& gp,
               const KernelHyperparameters& hyper) {
    hyper.validate();
    return mgk_checked(g, gp, hyper);
}

double mgk_normalized(const MolecularGraph& g, const MolecularGraph& gp,
                      const KernelHyperparameters& hyper) {
    hyper.validate();
    if (g == gp) return 1.0;
    const double kaa = mgk_checked(g, g, hyper);
    const double kbb = mgk_checked(gp, gp, hyper);
    if (!(kaa > 0.0) || !(kbb > 0.0))
        raise("DegenerateSelfKernel", "self kernel is not positive");
    return mgk_checked(g, gp, hyper) / std::sqrt(kaa * kbb);
}

KernelMatrix kernel_matrix(std::span<const MolecularGraph> graphs,
                           const KernelHyperparameters& hyper, bool normalized,
                           int threads) {
    hyper.validate();
    const std::size_t n = graphs.size();
    if (n == 0) raise("EmptyDataset", "kernel matrix over zero graphs");

    std::vector<double> self(n);
    parallel_for_index(n, threads, [&](std::size_t i) {
        self[i] = mgk_checked(graphs[i], graphs[i], hyper);
    });
    for (std::size_t i = 0; i < n; ++i)
        if (!(self[i] > 0.0))
            raise("DegenerateSelfKernel",
                  "self kernel of graph " + std::to_string(i) + " is not positive");

    std::vector<std::pair<int, int>> tasks;
    tasks.reserve(n * (n - 1) / 2);
    for (int i = 0; i < static_cast<int>(n); ++i)
        for (int j = i + 1; j < static_cast<int>(n); ++j) tasks.push_back({i, j});

    std::vector<double> vals(tasks.size());
    parallel_for_index(tasks.size(), threads, [&](std::size_t k) {
        vals[k] = mgk_checked(graphs[tasks[k].first], graphs[tasks[k].second], hyper);
    });

    KernelMatrix out;
    out.normalized = normalized;
    out.hyper = hyper;
    out.values.resize(n, n);
    for (std::size_t i = 0; i < n; ++i)
        out.values(i, i) = normalized ? 1.0 : self[i];
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        const auto [i, j] = tasks[k];
        const double v =
            normalized ? vals[k] / std::sqrt(self[i] * self[j]) : vals[k];
        out.values(i, j) = v;
        out.values(j, i) = v;
    }
    return out;
}

Eigen::MatrixXd cross_kernel_matrix(std::span<const MolecularGraph> rows,
                                    std::span<const MolecularGraph> cols,
                                    const KernelHyperparameters& hyper,
                                    bool normalized, int threads) {
    hyper.validate();
    if (rows.empty() || cols.empty())
        raise("EmptyDataset", "cross kernel with an empty graph set");
    const std::size_t nr = rows.size(), nc = cols.size();

    std::vector<double> self_r(nr, 1.0), self_c(nc, 1.0);
    if (normalized) {
        parallel_for_index(nr, threads, [&](std::size_t i) {
            self_r[i] = mgk_checked(rows[i], rows[i], hyper);
        });
        parallel_for_index(nc, threads, [&](std::size_t j) {
            self_c[j] = mgk_checked(cols[j], cols[j], hyper);
        });
        for (double s : self_r)
            if (!(s > 0.0)) raise("DegenerateSelfKernel", "self kernel not positive");
        for (double s : self_c)
            if (!(s > 0.0)) raise("DegenerateSelfKernel", "self kernel not positive");
    }

    Eigen::MatrixXd out(nr, nc);
    parallel_for_index(nr * nc, threads, [&](std::size_t t) {
        const std::size_t i = t / nc, j = t % nc;
        double v = mgk_checked(rows[i], cols[j], hyper);
        if (normalized) v /= std::sqrt(self_r[i] * self_c[j]);
        out(i, j) = v;
    });
    return out;
}

double graph_distance(const MolecularGraph& g, const MolecularGraph& gp,
                      const KernelHyperparameters& hyper) {
    const double khat = mgk_normalized(g, gp, hyper);
    return std::sqrt(std::max(0.0, 2.0 - 2.0 * khat));
}

double brute_force_kernel(const MolecularGraph& g, const MolecularGraph& gp,
                          const KernelHyperparameters& hyper, int max_length) {
    hyper.validate();
    const std::size_t nsys =
        static_cast<std::size_t>(g.size()) * static_cast<std::size_t>(gp.size());
    if (nsys > 30)
        raise("OracleScaleExceeded",
              "product system has " + std::to_string(nsys) +
                  " states; the enumeration oracle accepts at most 30");
    if (max_length < 1 || max_length > 12)
        raise("OracleScaleExceeded", "path length must lie in [1, 12]");

    const WalkGraph wa = make_walk_graph(g, hyper);
    const WalkGraph wb = make_walk_graph(gp, hyper);
    const PairTables t = make_tables(g, gp, hyper);
    const double stop = hyper.q * hyper.q;

    double total = 0.0;
    auto walk = [&](auto&& self, int u, int v, int depth, double w) -> void {
        total += w * stop;
        if (depth == max_length) return;
        for (const auto& a1 : wa.arcs[u]) {
            const double pa = w * a1.p;
            const std::size_t ke_base = static_cast<std::size_t>(a1.edge) * t.mp;
            for (const auto& a2 : wb.arcs[v]) {
                const std::size_t col =
                    static_cast<std::size_t>(a1.to) * t.np + a2.to;
                self(self, a1.to, a2.to, depth + 1,
                     pa * a2.p * t.kv[col] * t.ke[ke_base + a2.edge]);
            }
        }
    };

    const double ps = 1.0 / (static_cast<double>(t.n) * static_cast<double>(t.np));
    for (int i = 0; i < t.n; ++i)
        for (int j = 0; j < t.np; ++j)
            walk(walk, i, j, 1,
                 ps * t.kv[static_cast<std::size_t>(i) * t.np + j]);
    return total;
}

}  // namespace solvgp
