#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace solvgp {

// The ten elements the pipeline supports.
enum class Element : std::uint8_t { C, N, O, P, S, F, Cl, Br, I, H };

constexpr int kElementCount = 10;

const std::string& element_symbol(Element e);
// Returns true and sets `out` when `symbol` is a supported element.
bool element_from_symbol(const std::string& symbol, Element& out);

enum class Hybridization : std::uint8_t { None, Sp, Sp2, Sp3 };

const std::string& hybridization_name(Hybridization h);

struct VertexLabel {
    Element element = Element::C;
    std::int8_t charge = 0;
    Hybridization hybridization = Hybridization::None;
    bool aromatic = false;
    bool conjugated = false;
    std::uint8_t hydrogens = 0;

    friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
};

struct EdgeLabel {
    double order = 1.0;  // 1 | 1.5 | 2 | 3
    bool aromatic = false;
    bool conjugated = false;
    bool ring = false;
    double length = 0.0;  // equilibrium bond length, Angstrom

    // Discrete part only; length is compared smoothly by the edge kernel.
    bool same_discrete_labels(const EdgeLabel& o) const {
        return order == o.order && aromatic == o.aromatic &&
               conjugated == o.conjugated && ring == o.ring;
    }

    friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

// Per-element single-bond covalent radii plus bond-order contraction factors.
// sigma_ij = r_i + r_j feeds the adjacency rule; order_factor * sigma_ij gives
// the tabulated equilibrium bond length.
struct RadiiTable {
    std::array<double, kElementCount> radii;  // indexed by Element
    double factor_single = 1.00;
    double factor_aromatic = 0.93;
    double factor_double = 0.87;
    double factor_triple = 0.78;

    static RadiiTable standard();

    double radius(Element e) const { return radii[static_cast<int>(e)]; }
    double order_factor(double bond_order) const;
    // All radii must lie in (0.2, 2.0) Angstrom and factors must be positive.
    void validate() const;
};

// Tabulated equilibrium length of a bond: order_factor * (r_i + r_j).
double edge_length(double bond_order, Element elem_i, Element elem_j,
                   const RadiiTable& radii);

// Labeled, weighted, undirected molecular graph over heavy atoms.
// Edges are stored once with i < j; `sigma` keeps r_i + r_j from the radii
// table in force when the graph was perceived.
class MolecularGraph {
public:
    struct Edge {
        int i = 0;
        int j = 0;
        EdgeLabel label;
        double sigma = 0.0;  // r_i + r_j, Angstrom
    };

    MolecularGraph() = default;
    // Validates endpoints, symmetry-normalizes to i < j, rejects self and
    // duplicate bonds, requires a single connected component.
    MolecularGraph(std::vector<VertexLabel> vertices, std::vector<Edge> edges,
                   std::string source_id);

    int size() const { return static_cast<int>(vertices_.size()); }
    const std::vector<VertexLabel>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::string& source_id() const { return source_id_; }

    struct Arc {
        int to;
        int edge;  // index into edges()
    };
    // neighbors(v): arcs to every adjacent vertex, in insertion order.
    const std::vector<Arc>& neighbors(int v) const { return adjacency_[v]; }
    int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }

    // Element set of the molecule, including implicit hydrogens.
    std::vector<Element> element_set() const;

    friend bool operator==(const MolecularGraph& a, const MolecularGraph& b) {
        return a.vertices_ == b.vertices_ && a.edge_keys_equal(b);
    }

private:
    bool edge_keys_equal(const MolecularGraph& other) const;

    std::vector<VertexLabel> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<Arc>> adjacency_;
    std::string source_id_;
};

enum class AdjacencyConvention : std::uint8_t {
    Squared,  // exp(-l^2 / (2 (zeta sigma)^2)); dimensionally consistent
    Unsquared  // exp(-l^2 / (2 zeta sigma)); available for comparison runs
};

// Edge weight of a single bond under the spatial adjacency rule.
double adjacency_weight(double length, double sigma, double zeta,
                        AdjacencyConvention convention);

// Dense symmetric adjacency matrix with zero diagonal; entries in (0,1] for
// bonds, 0 elsewhere. zeta > 0.
Eigen::MatrixXd build_adjacency(const MolecularGraph& graph, double zeta,
                                AdjacencyConvention convention =
                                    AdjacencyConvention::Squared);

// Random-walk transition matrix P(j|i) = (1-q) A_ij / sum_k A_ik.
// Every row sums to exactly 1-q. Rows of zeros (isolated vertices) are
// rejected; single-atom molecules are handled by the kernel directly.
Eigen::MatrixXd transition_matrix(const Eigen::MatrixXd& adjacency, double q);

}  // namespace solvgp
