#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "solvgp/errors.hpp"
#include "solvgp/molgraph.hpp"
#include "solvgp/smiles.hpp"
#include "test_support.hpp"

using namespace solvgp;

namespace {
const RadiiTable kRadii = RadiiTable::standard();
}

TEST_SUITE("molgraph") {

TEST_CASE("edge lengths from the radii table") {
    CHECK(edge_length(1.0, Element::C, Element::C, kRadii) ==
          doctest::Approx(1.52).epsilon(1e-12));
    CHECK(edge_length(2.0, Element::C, Element::C, kRadii) ==
          doctest::Approx(1.3224).epsilon(1e-12));
    CHECK(edge_length(1.5, Element::C, Element::C, kRadii) ==
          doctest::Approx(0.93 * 1.52).epsilon(1e-12));
    // Determinism.
    CHECK(edge_length(3.0, Element::C, Element::N, kRadii) ==
          edge_length(3.0, Element::C, Element::N, kRadii));
}

TEST_CASE("radii table validation") {
    RadiiTable t = kRadii;
    t.radii[0] = 2.5;
    CHECK_THROWS_AS(t.validate(), Error);
    t = kRadii;
    t.factor_double = 0.0;
    CHECK_THROWS_AS(t.validate(), Error);
    CHECK_THROWS_AS(kRadii.order_factor(2.5), Error);
}

TEST_CASE("adjacency of a carbon-carbon bond") {
    const auto g = graph_from_smiles("CC", kRadii);
    const Eigen::MatrixXd a = build_adjacency(g, 1.0);
    CHECK(a(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(a(1, 0) == a(0, 1));
    CHECK(a(0, 0) == 0.0);
}

TEST_CASE("adjacency saturates as zeta grows") {
    const auto g = graph_from_smiles("CC(=O)N", kRadii);
    const Eigen::MatrixXd a = build_adjacency(g, 1e9);
    for (const auto& e : g.edges())
        CHECK(a(e.i, e.j) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("adjacency of ethanol has one entry per bond") {
    const auto g = graph_from_smiles("CCO", kRadii);
    const Eigen::MatrixXd a = build_adjacency(g, 1.0);
    int nonzero = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (a(i, j) != 0.0) ++nonzero;
    CHECK(nonzero == 2);
}

TEST_CASE("unsquared adjacency convention") {
    const auto g = graph_from_smiles("CC", kRadii);
    const Eigen::MatrixXd a =
        build_adjacency(g, 1.0, AdjacencyConvention::Unsquared);
    // exp(-l^2 / (2 zeta sigma)) with l = sigma = 1.52
    CHECK(a(0, 1) == doctest::Approx(std::exp(-0.5 * 1.52)).epsilon(1e-12));
}

TEST_CASE("transition matrix of a single bond") {
    Eigen::MatrixXd a(2, 2);
    a << 0.0, 0.7, 0.7, 0.0;
    const Eigen::MatrixXd p = transition_matrix(a, 0.25);
    CHECK(p(0, 0) == 0.0);
    CHECK(p(0, 1) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(p(1, 0) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("transition rows sum to one minus q") {
    testsupport::MoleculeGen gen(123, 9);
    for (int i = 0; i < 30; ++i) {
        const auto g = gen.next_graph(kRadii);
        if (g.size() < 2) continue;
        const Eigen::MatrixXd p = transition_matrix(build_adjacency(g, 1.0), 0.1);
        for (int r = 0; r < g.size(); ++r)
            CHECK(p.row(r).sum() == doctest::Approx(0.9).epsilon(1e-14));
    }
}

TEST_CASE("star graph transition probabilities") {
    const auto g = graph_from_smiles("C(C)(C)C", kRadii);  // K_{1,3}
    const Eigen::MatrixXd p = transition_matrix(build_adjacency(g, 1.0), 0.1);
    for (int j = 1; j < 4; ++j)
        CHECK(p(0, j) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("isolated vertex is rejected") {
    CHECK_THROWS_AS(transition_matrix(Eigen::MatrixXd::Zero(1, 1), 0.1), Error);
}

TEST_CASE("adjacency and transitions commute with relabeling") {
    std::mt19937 rng(7);
    testsupport::MoleculeGen gen(77, 8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = gen.next_graph(kRadii);
        if (g.size() < 2) continue;
        const auto perm = testsupport::random_permutation(g.size(), rng);
        const auto h = testsupport::relabel(g, perm);

        Eigen::MatrixXd pi = Eigen::MatrixXd::Zero(g.size(), g.size());
        for (int i = 0; i < g.size(); ++i) pi(perm[i], i) = 1.0;

        const Eigen::MatrixXd ag = build_adjacency(g, 0.8);
        const Eigen::MatrixXd ah = build_adjacency(h, 0.8);
        CHECK((ah - pi * ag * pi.transpose()).cwiseAbs().maxCoeff() <= 1e-14);

        const Eigen::MatrixXd pg = transition_matrix(ag, 0.2);
        const Eigen::MatrixXd ph = transition_matrix(ah, 0.2);
        CHECK((ph - pi * pg * pi.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("spectral radius stays below one minus q") {
    testsupport::MoleculeGen gen(99, 9);
    const double q = 0.15;
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = gen.next_graph(kRadii);
        if (g.size() < 2) continue;
        const Eigen::MatrixXd p = transition_matrix(build_adjacency(g, 1.0), q);
        const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(p).eigenvalues();
        double radius = 0.0;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            radius = std::max(radius, std::abs(ev[i]));
        CHECK(radius <= 1.0 - q + 1e-10);
    }
}

TEST_CASE("graph construction rejects malformed input") {
    std::vector<VertexLabel> two(2);
    EdgeLabel lab;
    lab.length = 1.5;
    SUBCASE("self bond") {
        CHECK_THROWS_AS(
            MolecularGraph(two, {{0, 0, lab, 1.5}}, ""), Error);
    }
    SUBCASE("duplicate bond") {
        CHECK_THROWS_AS(
            MolecularGraph(two, {{0, 1, lab, 1.5}, {1, 0, lab, 1.5}}, ""),
            Error);
    }
    SUBCASE("disconnected") {
        std::vector<VertexLabel> three(3);
        CHECK_THROWS_AS(MolecularGraph(three, {{0, 1, lab, 1.5}}, ""), Error);
    }
}

}  // TEST_SUITE
