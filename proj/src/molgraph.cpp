#include "solvgp/molgraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "solvgp/errors.hpp"

namespace solvgp {

namespace {

const std::array<std::string, kElementCount> kSymbols = {
    "C", "N", "O", "P", "S", "F", "Cl", "Br", "I", "H"};

}  // namespace

const std::string& element_symbol(Element e) {
    return kSymbols[static_cast<int>(e)];
}

bool element_from_symbol(const std::string& symbol, Element& out) {
    for (int i = 0; i < kElementCount; ++i) {
        if (kSymbols[i] == symbol) {
            out = static_cast<Element>(i);
            return true;
        }
    }
    return false;
}

const std::string& hybridization_name(Hybridization h) {
    static const std::array<std::string, 4> names = {"none", "sp", "sp2", "sp3"};
    return names[static_cast<int>(h)];
}

RadiiTable RadiiTable::standard() {
    RadiiTable t;
    t.radii[static_cast<int>(Element::C)] = 0.76;
    t.radii[static_cast<int>(Element::N)] = 0.71;
    t.radii[static_cast<int>(Element::O)] = 0.66;
    t.radii[static_cast<int>(Element::P)] = 1.07;
    t.radii[static_cast<int>(Element::S)] = 1.05;
    t.radii[static_cast<int>(Element::F)] = 0.57;
    t.radii[static_cast<int>(Element::Cl)] = 1.02;
    t.radii[static_cast<int>(Element::Br)] = 1.20;
    t.radii[static_cast<int>(Element::I)] = 1.39;
    t.radii[static_cast<int>(Element::H)] = 0.31;
    return t;
}

double RadiiTable::order_factor(double bond_order) const {
    if (bond_order == 1.0) return factor_single;
    if (bond_order == 1.5) return factor_aromatic;
    if (bond_order == 2.0) return factor_double;
    if (bond_order == 3.0) return factor_triple;
    raise("ElementMissingFromTable",
          "no length factor for bond order " + std::to_string(bond_order));
}

void RadiiTable::validate() const {
    for (int i = 0; i < kElementCount; ++i) {
        if (!(radii[i] > 0.2 && radii[i] < 2.0))
            raise("InvalidConfig", "covalent radius of " + kSymbols[i] +
                                       " outside (0.2, 2.0) Angstrom");
    }
    for (double f : {factor_single, factor_aromatic, factor_double, factor_triple})
        if (!(f > 0.0))
            raise("InvalidConfig", "bond order length factor must be positive");
}

double edge_length(double bond_order, Element elem_i, Element elem_j,
                   const RadiiTable& radii) {
    return radii.order_factor(bond_order) *
           (radii.radius(elem_i) + radii.radius(elem_j));
}

MolecularGraph::MolecularGraph(std::vector<VertexLabel> vertices,
                               std::vector<Edge> edges, std::string source_id)
    : vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      source_id_(std::move(source_id)) {
    const int n = size();
    if (n == 0) raise("EmptyInput", "molecular graph has no vertices");

    std::set<std::pair<int, int>> seen;
    for (auto& e : edges_) {
        if (e.i < 0 || e.i >= n || e.j < 0 || e.j >= n)
            raise("InvalidGraph", "edge endpoint out of range");
        if (e.i == e.j) raise("InvalidGraph", "self bond");
        if (e.i > e.j) std::swap(e.i, e.j);
        if (!seen.insert({e.i, e.j}).second)
            raise("InvalidGraph", "duplicate bond");
        if (!(e.label.length > 0.0))
            raise("InvalidGraph", "non-positive bond length");
        if (e.label.aromatic && !e.label.ring)
            raise("InvalidGraph", "aromatic bond outside a ring");
    }

    adjacency_.assign(n, {});
    for (int k = 0; k < static_cast<int>(edges_.size()); ++k) {
        adjacency_[edges_[k].i].push_back({edges_[k].j, k});
        adjacency_[edges_[k].j].push_back({edges_[k].i, k});
    }

    // Single connected component.
    std::vector<char> visited(n, 0);
    std::vector<int> stack = {0};
    visited[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (const Arc& a : adjacency_[v]) {
            if (!visited[a.to]) {
                visited[a.to] = 1;
                ++reached;
                stack.push_back(a.to);
            }
        }
    }
    if (reached != n) raise("InvalidGraph", "graph is not connected");
}

std::vector<Element> MolecularGraph::element_set() const {
    std::set<Element> s;
    bool any_h = false;
    for (const auto& v : vertices_) {
        s.insert(v.element);
        if (v.hydrogens > 0) any_h = true;
    }
    if (any_h) s.insert(Element::H);
    return {s.begin(), s.end()};
}

bool MolecularGraph::edge_keys_equal(const MolecularGraph& other) const {
    if (edges_.size() != other.edges_.size()) return false;
    auto key = [](const Edge& e) {
        return std::tuple(e.i, e.j, e.label.order, e.label.aromatic,
                          e.label.conjugated, e.label.ring, e.label.length);
    };
    std::vector<std::tuple<int, int, double, bool, bool, bool, double>> a, b;
    for (const auto& e : edges_) a.push_back(key(e));
    for (const auto& e : other.edges_) b.push_back(key(e));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

double adjacency_weight(double length, double sigma, double zeta,
                        AdjacencyConvention convention) {
    const double scale = zeta * sigma;
    const double denom =
        convention == AdjacencyConvention::Squared ? scale * scale : scale;
    return std::exp(-0.5 * length * length / denom);
}

Eigen::MatrixXd build_adjacency(const MolecularGraph& graph, double zeta,
                                AdjacencyConvention convention) {
    if (!(zeta > 0.0)) raise("InvalidConfig", "zeta must be positive");
    const int n = graph.size();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : graph.edges()) {
        const double w = adjacency_weight(e.label.length, e.sigma, zeta, convention);
        a(e.i, e.j) = w;
        a(e.j, e.i) = w;
    }
    return a;
}

Eigen::MatrixXd transition_matrix(const Eigen::MatrixXd& adjacency, double q) {
    if (!(q > 0.0 && q < 1.0))
        raise("InvalidConfig", "stopping probability must lie in (0,1)");
    const Eigen::Index n = adjacency.rows();
    Eigen::MatrixXd p(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double rowsum = adjacency.row(i).sum();
        if (rowsum <= 0.0)
            raise("IsolatedVertex",
                  "vertex " + std::to_string(i) + " has no neighbors");
        p.row(i) = (1.0 - q) / rowsum * adjacency.row(i);
    }
    return p;
}

}  // namespace solvgp
