#include "solvgp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "solvgp/errors.hpp"
#include "solvgp/kernel.hpp"
#include "solvgp/parallel.hpp"
#include "solvgp/smiles.hpp"

namespace solvgp {

namespace {

Histogram bin_values(std::span<const double> values, std::vector<double> edges) {
    Histogram h;
    h.edges = std::move(edges);
    const std::size_t bins = h.edges.size() - 1;
    h.counts.assign(bins, 0);
    const double lo = h.edges.front(), hi = h.edges.back();
    const double width = (hi - lo) / static_cast<double>(bins);
    for (double v : values) {
        std::size_t b;
        if (v >= hi) {
            b = bins - 1;  // right edge closes the last bin
        } else {
            b = static_cast<std::size_t>((v - lo) / width);
            if (b >= bins) b = bins - 1;
        }
        ++h.counts[b];
    }
    h.density.resize(bins);
    const double n = static_cast<double>(values.size());
    for (std::size_t b = 0; b < bins; ++b)
        h.density[b] = static_cast<double>(h.counts[b]) / (n * width);
    return h;
}

}  // namespace

Histogram histogram_bins(std::span<const double> values, int bins) {
    if (values.empty()) raise("EmptyInput", "histogram of zero values");
    if (bins < 1) raise("InvalidConfig", "bin count must be positive");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    double lo = *mn, hi = *mx;
    if (lo == hi) {  // constant sample: one unit-width bin around the value
        lo -= 0.5;
        hi += 0.5;
        bins = 1;
    }
    std::vector<double> edges(bins + 1);
    for (int b = 0; b <= bins; ++b)
        edges[b] = lo + (hi - lo) * static_cast<double>(b) / bins;
    return bin_values(values, std::move(edges));
}

Histogram histogram_width(std::span<const double> values, double width) {
    if (values.empty()) raise("EmptyInput", "histogram of zero values");
    if (!(width > 0.0)) raise("InvalidConfig", "bin width must be positive");
    const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
    const double start = std::floor(*mn / width) * width;
    const int bins =
        std::max(1, static_cast<int>(std::floor((*mx - start) / width)) + 1);
    std::vector<double> edges(bins + 1);
    for (int b = 0; b <= bins; ++b) edges[b] = start + width * b;
    return bin_values(values, std::move(edges));
}

Histogram histogram_with_edges(std::span<const double> values,
                               const std::vector<double>& edges) {
    if (values.empty()) raise("EmptyInput", "histogram of zero values");
    if (edges.size() < 2) raise("InvalidConfig", "need at least two bin edges");
    return bin_values(values, edges);
}

std::vector<std::pair<int, int>> adjacent_edge_pairs(const MolecularGraph& g) {
    std::vector<std::pair<int, int>> pairs;
    for (int v = 0; v < g.size(); ++v) {
        const auto& arcs = g.neighbors(v);
        for (std::size_t a = 0; a < arcs.size(); ++a)
            for (std::size_t b = a + 1; b < arcs.size(); ++b)
                pairs.emplace_back(std::min(arcs[a].edge, arcs[b].edge),
                                   std::max(arcs[a].edge, arcs[b].edge));
    }
    return pairs;
}

namespace {

using EdgeKey = std::tuple<double, bool, bool, bool, double>;

EdgeKey edge_key(const EdgeLabel& e) {
    return {e.order, e.aromatic, e.conjugated, e.ring, e.length};
}

// Iterated neighborhood refinement to a fixed point. New color ids are
// assigned by signature order, so the coloring is invariant under vertex
// relabeling.
std::vector<int> refine_colors(const MolecularGraph& g) {
    const int n = g.size();
    using InitKey = std::tuple<int, int, int, bool, bool, int>;
    std::map<InitKey, int> init_ids;
    std::vector<InitKey> init_keys(n);
    for (int v = 0; v < n; ++v) {
        const VertexLabel& l = g.vertices()[v];
        init_keys[v] = {static_cast<int>(l.element), l.charge,
                        static_cast<int>(l.hybridization), l.aromatic,
                        l.conjugated, l.hydrogens};
        init_ids.emplace(init_keys[v], 0);
    }
    int next_id = 0;
    for (auto& [key, id] : init_ids) id = next_id++;

    std::vector<int> color(n);
    for (int v = 0; v < n; ++v) color[v] = init_ids[init_keys[v]];

    for (int round = 0; round < n; ++round) {
        using Sig = std::pair<int, std::vector<std::pair<EdgeKey, int>>>;
        std::vector<Sig> sigs(n);
        for (int v = 0; v < n; ++v) {
            std::vector<std::pair<EdgeKey, int>> nbr;
            for (const auto& a : g.neighbors(v))
                nbr.emplace_back(edge_key(g.edges()[a.edge].label), color[a.to]);
            std::sort(nbr.begin(), nbr.end());
            sigs[v] = {color[v], std::move(nbr)};
        }
        std::map<Sig, int> ids;
        for (const auto& s : sigs) ids.emplace(s, 0);
        int fresh = 0;
        for (auto& [key, id] : ids) id = fresh++;

        std::vector<int> next(n);
        bool changed = false;
        for (int v = 0; v < n; ++v) {
            next[v] = ids[sigs[v]];
            if (next[v] != color[v]) changed = true;
        }
        color.swap(next);
        if (!changed) break;
    }
    return color;
}

}  // namespace

std::vector<std::vector<int>> symmetry_classes(
    const std::vector<std::pair<int, int>>& pairs, const MolecularGraph& g) {
    const std::vector<int> color = refine_colors(g);

    // A pair's signature: refined color of the shared atom plus the sorted
    // (edge label, end-atom color) legs.
    using Leg = std::pair<EdgeKey, int>;
    using Sig = std::tuple<int, Leg, Leg>;
    std::map<Sig, std::vector<int>> classes;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto& e1 = g.edges()[pairs[p].first];
        const auto& e2 = g.edges()[pairs[p].second];
        int shared, end1, end2;
        if (e1.i == e2.i) { shared = e1.i; end1 = e1.j; end2 = e2.j; }
        else if (e1.i == e2.j) { shared = e1.i; end1 = e1.j; end2 = e2.i; }
        else if (e1.j == e2.i) { shared = e1.j; end1 = e1.i; end2 = e2.j; }
        else { shared = e1.j; end1 = e1.i; end2 = e2.i; }

        Leg a{edge_key(e1.label), color[end1]};
        Leg b{edge_key(e2.label), color[end2]};
        if (b < a) std::swap(a, b);
        classes[{color[shared], a, b}].push_back(static_cast<int>(p));
    }

    std::vector<std::vector<int>> out;
    out.reserve(classes.size());
    for (auto& [sig, members] : classes) out.push_back(std::move(members));
    return out;
}

double bertz_index(const MolecularGraph& g) {
    const auto pairs = adjacent_edge_pairs(g);
    const double n = static_cast<double>(pairs.size());
    if (n == 0.0) return 0.0;
    const auto classes = symmetry_classes(pairs, g);
    double sum = 0.0;
    for (const auto& cls : classes) {
        const double ni = static_cast<double>(cls.size());
        sum += ni * std::log2(ni);  // 1 * log2(1) = 0 covers the convention
    }
    return 2.0 * n * std::log2(n) - sum;
}

BciReport bci_report(std::span<const MolecularGraph> graphs, int bins) {
    if (graphs.empty()) raise("EmptyInput", "no graphs");
    BciReport r;
    r.values.reserve(graphs.size());
    for (const auto& g : graphs) r.values.push_back(bertz_index(g));
    r.mean = std::accumulate(r.values.begin(), r.values.end(), 0.0) /
             static_cast<double>(r.values.size());
    r.histogram = histogram_bins(r.values, bins);
    return r;
}

std::vector<SubsetMetrics> element_subset_eval(
    const TrainedModel& model, const Dataset& test,
    const std::vector<std::vector<Element>>& element_sets, int threads) {
    if (test.records.empty()) raise("EmptyDataset", "empty test set");

    std::vector<MolecularGraph> graphs;
    graphs.reserve(test.size());
    for (const auto& rec : test.records)
        graphs.push_back(graph_from_smiles(rec.smiles, model.radii(), rec.id));

    std::vector<SubsetMetrics> out;
    for (const auto& allowed : element_sets) {
        const std::set<Element> allowed_set(allowed.begin(), allowed.end());
        std::vector<MolecularGraph> subset;
        std::vector<double> truth;
        for (std::size_t i = 0; i < graphs.size(); ++i) {
            const auto elems = graphs[i].element_set();
            const bool inside = std::all_of(
                elems.begin(), elems.end(),
                [&](Element e) { return allowed_set.count(e) > 0; });
            if (inside) {
                subset.push_back(graphs[i]);
                truth.push_back(test.records[i].target);
            }
        }
        if (subset.empty()) continue;

        const Eigen::VectorXd pred = model.predict_mean(subset, threads);
        std::vector<double> p(pred.data(), pred.data() + pred.size());

        SubsetMetrics m;
        for (std::size_t i = 0; i < allowed.size(); ++i) {
            if (i) m.label += ",";
            m.label += element_symbol(allowed[i]);
        }
        m.count = subset.size();
        m.mae = mae(p, truth);
        m.rmse = rmse(p, truth);
        out.push_back(std::move(m));
    }
    return out;
}

DistanceReport distance_diagnostics(std::span<const MolecularGraph> train,
                                    std::span<const MolecularGraph> test,
                                    std::span<const std::string> test_ids,
                                    const KernelHyperparameters& hyper,
                                    double bin_width, int threads) {
    if (train.empty() || test.empty())
        raise("EmptyDataset", "distance diagnostics need non-empty sets");
    if (!(bin_width > 0.0)) raise("InvalidConfig", "bin width must be positive");

    const KernelMatrix ktt = kernel_matrix(train, hyper, true, threads);
    const Eigen::MatrixXd cross =
        cross_kernel_matrix(test, train, hyper, true, threads);

    auto to_distance = [](double khat) {
        return std::sqrt(std::max(0.0, 2.0 - 2.0 * khat));
    };

    std::vector<double> train_train;
    train_train.reserve(train.size() * (train.size() - 1) / 2);
    for (Eigen::Index i = 0; i < ktt.values.rows(); ++i)
        for (Eigen::Index j = i + 1; j < ktt.values.cols(); ++j)
            train_train.push_back(to_distance(ktt.values(i, j)));

    DistanceReport report;
    report.train_train_mean =
        train_train.empty()
            ? 0.0
            : std::accumulate(train_train.begin(), train_train.end(), 0.0) /
                  static_cast<double>(train_train.size());

    // Shared bin edges covering [0, sqrt(2)] for every population.
    const double dmax = std::sqrt(2.0);
    const int bins = static_cast<int>(std::ceil(dmax / bin_width));
    std::vector<double> edges(bins + 1);
    for (int b = 0; b <= bins; ++b) edges[b] = bin_width * b;

    if (!train_train.empty())
        report.train_train = histogram_with_edges(train_train, edges);

    for (std::size_t t = 0; t < test.size(); ++t) {
        std::vector<double> d(train.size());
        for (std::size_t j = 0; j < train.size(); ++j)
            d[j] = to_distance(cross(static_cast<Eigen::Index>(t),
                                     static_cast<Eigen::Index>(j)));
        DistanceReport::PerTest pt;
        pt.id = t < test_ids.size() ? test_ids[t] : std::to_string(t);
        pt.mean_distance = std::accumulate(d.begin(), d.end(), 0.0) /
                           static_cast<double>(d.size());
        pt.min_distance = *std::min_element(d.begin(), d.end());
        pt.far = pt.min_distance > 1.0;
        report.per_test.push_back(std::move(pt));
        report.per_test_hist.push_back(histogram_with_edges(d, edges));
    }
    return report;
}

EmbeddingResult embed_mds(const Eigen::MatrixXd& c, int d_max) {
    const Eigen::Index m = c.rows();
    if (m < 2 || c.cols() != m)
        raise("NonSymmetricInput", "matrix must be square with at least 2 rows");
    const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
    if ((c - c.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        raise("NonSymmetricInput", "matrix is not symmetric");
    if (d_max < 1 || d_max > m)
        raise("InvalidConfig", "d_max must lie in [1, m]");
    const double c_norm = c.norm();
    if (!(c_norm > 0.0)) raise("EmptyInput", "zero matrix cannot be embedded");

    // Anchor at the first row/column: T_ij = (C_1j^2 + C_i1^2 - C_ij^2) / 2.
    Eigen::MatrixXd t(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            t(i, j) = 0.5 * (c(0, j) * c(0, j) + c(i, 0) * c(i, 0) -
                             c(i, j) * c(i, j));
    t = 0.5 * (t + t.transpose()).eval();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    if (es.info() != Eigen::Success)
        raise("SingularSystem", "eigendecomposition failed");

    // Eigen returns ascending order; flip to descending.
    EmbeddingResult result;
    result.eigenvalues = es.eigenvalues().reverse();
    Eigen::MatrixXd u = es.eigenvectors().rowwise().reverse();
    Eigen::VectorXd sqrt_s =
        result.eigenvalues.cwiseMax(0.0).cwiseSqrt();  // clamp negatives

    Eigen::MatrixXd x = u * sqrt_s.asDiagonal();
    result.points = x.leftCols(d_max);

    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(m, m);
    result.error_curve.reserve(d_max);
    for (int d = 0; d < d_max; ++d) {
        const Eigen::VectorXd col = x.col(d);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < m; ++j) {
                const double diff = col[i] - col[j];
                d2(i, j) += diff * diff;
            }
        const double err = (d2.cwiseSqrt() - c).norm() / c_norm;
        result.error_curve.push_back(err);
        if (!result.d_at_10pct && err < 0.1) result.d_at_10pct = d + 1;
    }
    return result;
}

Eigen::MatrixXd covariance_to_distance(const Eigen::MatrixXd& c) {
    const Eigen::Index m = c.rows();
    if (c.cols() != m) raise("NonSymmetricInput", "matrix must be square");
    Eigen::MatrixXd d(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            d(i, j) = std::sqrt(std::max(0.0, c(i, i) + c(j, j) - 2.0 * c(i, j)));
    return d;
}

}  // namespace solvgp
