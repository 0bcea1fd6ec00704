#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "solvgp/errors.hpp"
#include "solvgp/kernel.hpp"
#include "solvgp/smiles.hpp"
#include "test_support.hpp"

using namespace solvgp;

namespace {

const RadiiTable kRadii = RadiiTable::standard();

KernelHyperparameters hyper(double nu = 0.3, double lambda = 0.2,
                            double zeta = 1.0, double q = 0.1) {
    KernelHyperparameters h;
    h.nu = nu;
    h.lambda = lambda;
    h.zeta = zeta;
    h.q = q;
    return h;
}

MolecularGraph mol(const char* smiles) {
    return graph_from_smiles(smiles, kRadii);
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("vertex microkernel") {
    const auto g = mol("CCO");
    CHECK(vertex_kernel(g.vertices()[0], g.vertices()[0], 0.5) == 1.0);
    // C(H3) vs C(H2) differ in hydrogen count only; still a mismatch.
    CHECK(vertex_kernel(g.vertices()[0], g.vertices()[1], 0.5) == 0.5);
    CHECK(vertex_kernel(g.vertices()[0], g.vertices()[2], 0.3) == 0.3);

    std::mt19937 rng(11);
    testsupport::MoleculeGen gen(11, 6);
    for (int i = 0; i < 20; ++i) {
        const auto a = gen.next_graph(kRadii);
        const auto b = gen.next_graph(kRadii);
        const auto& va = a.vertices()[rng() % a.size()];
        const auto& vb = b.vertices()[rng() % b.size()];
        CHECK(vertex_kernel(va, vb, 0.25) == vertex_kernel(vb, va, 0.25));
    }
}

TEST_CASE("edge microkernel") {
    EdgeLabel a, b;
    a.length = 1.52;
    b.length = 1.52;
    CHECK(edge_kernel(a, b, 0.2) == 1.0);

    b.length = 1.32;
    CHECK(edge_kernel(a, b, 0.2) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));

    b.length = 60.0;
    CHECK(edge_kernel(a, b, 0.2) == doctest::Approx(0.0).epsilon(1e-300));

    // Discrete label mismatch scales by epsilon.
    b = a;
    b.order = 2.0;
    CHECK(edge_kernel(a, b, 0.2, 0.25) == 0.25);
    CHECK(edge_kernel(a, b, 0.2, 1.0) == 1.0);
}

TEST_CASE("single-vertex closed forms") {
    const auto c = mol("C");
    const auto o = mol("O");
    const auto h = hyper(0.3, 0.2, 1.0, 0.1);
    CHECK(mgk_raw(c, c, h) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(mgk_raw(c, o, h) == doctest::Approx(0.003).epsilon(1e-12));
    CHECK(mgk_normalized(c, o, h) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(mgk_normalized(c, c, h) == 1.0);
}

TEST_CASE("kernel symmetry over random pairs") {
    testsupport::MoleculeGen gen(202, 8);
    const auto h = hyper();
    for (int i = 0; i < 50; ++i) {
        const auto a = gen.next_graph(kRadii);
        const auto b = gen.next_graph(kRadii);
        const double kab = mgk_raw(a, b, h);
        const double kba = mgk_raw(b, a, h);
        CHECK(std::abs(kab - kba) <= 1e-12 * std::max(kab, kba));
    }
}

TEST_CASE("permutation invariance") {
    std::mt19937 rng(17);
    testsupport::MoleculeGen gen(17, 8);
    const auto h = hyper();
    for (int i = 0; i < 20; ++i) {
        const auto a = gen.next_graph(kRadii);
        const auto b = gen.next_graph(kRadii);
        const auto perm = testsupport::random_permutation(a.size(), rng);
        const auto pa = testsupport::relabel(a, perm);
        const double k1 = mgk_raw(a, b, h);
        const double k2 = mgk_raw(pa, b, h);
        CHECK(std::abs(k1 - k2) <= 1e-12 * std::max(k1, k2));
    }
}

TEST_CASE("normalized kernel stays within the unit interval") {
    testsupport::MoleculeGen gen(303, 8);
    const auto h = hyper();
    for (int i = 0; i < 30; ++i) {
        const auto a = gen.next_graph(kRadii);
        const auto b = gen.next_graph(kRadii);
        const double k = mgk_normalized(a, b, h);
        CHECK(k >= 0.0);
        CHECK(k <= 1.0 + 1e-12);
    }
}

TEST_CASE("solver equivalence on random pairs") {
    testsupport::MoleculeGen gen(404, 12);
    auto h_dense = hyper();
    h_dense.solver = KernelSolver::Dense;
    auto h_fp = hyper();
    h_fp.solver = KernelSolver::FixedPoint;
    h_fp.fixed_point_tol = 1e-13;
    for (int i = 0; i < 50; ++i) {
        const auto a = gen.next_graph(kRadii);
        const auto b = gen.next_graph(kRadii);
        const double kd = mgk_raw(a, b, h_dense);
        const double kf = mgk_raw(a, b, h_fp);
        CHECK(std::abs(kd - kf) <= 1e-9 * std::max(kd, kf));
    }
}

TEST_CASE("fixed point hits the iteration cap when starved") {
    auto h = hyper();
    h.solver = KernelSolver::FixedPoint;
    h.max_iterations = 1;
    h.fixed_point_tol = 1e-15;
    const auto a = mol("CCO");
    CHECK_THROWS_AS(mgk_raw(a, a, h), Error);
}

TEST_CASE("kernel matrix basics") {
    const auto h = hyper();
    SUBCASE("single graph") {
        std::vector<MolecularGraph> one = {mol("CCO")};
        const KernelMatrix km = kernel_matrix(one, h, true);
        REQUIRE(km.values.rows() == 1);
        CHECK(km.values(0, 0) == 1.0);
    }
    SUBCASE("permutation of input permutes rows and columns") {
        std::vector<MolecularGraph> graphs = {mol("C"), mol("CC"), mol("CCO"),
                                              mol("c1ccccc1")};
        const KernelMatrix km = kernel_matrix(graphs, h, true);
        std::vector<MolecularGraph> rev(graphs.rbegin(), graphs.rend());
        const KernelMatrix kr = kernel_matrix(rev, h, true);
        const int n = static_cast<int>(graphs.size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(km.values(i, j) ==
                      doctest::Approx(kr.values(n - 1 - i, n - 1 - j))
                          .epsilon(1e-12));
    }
    SUBCASE("threaded assembly is bitwise identical") {
        testsupport::MoleculeGen gen(505, 8);
        std::vector<MolecularGraph> graphs;
        for (int i = 0; i < 10; ++i) graphs.push_back(gen.next_graph(kRadii));
        const KernelMatrix k1 = kernel_matrix(graphs, h, true, 1);
        const KernelMatrix k4 = kernel_matrix(graphs, h, true, 4);
        CHECK((k1.values.array() == k4.values.array()).all());
    }
}

TEST_CASE("normalized kernel matrices are positive semidefinite") {
    testsupport::MoleculeGen gen(606, 8);
    std::vector<MolecularGraph> graphs;
    for (int i = 0; i < 20; ++i) graphs.push_back(gen.next_graph(kRadii));
    const KernelMatrix km = kernel_matrix(graphs, hyper(), true);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(km.values);
    CHECK(es.eigenvalues().minCoeff() >=
          -1e-8 * km.values.trace() / static_cast<double>(graphs.size()));
}

TEST_CASE("cross kernel blocks") {
    const auto h = hyper();
    testsupport::MoleculeGen gen(707, 7);
    std::vector<MolecularGraph> a, b;
    for (int i = 0; i < 5; ++i) a.push_back(gen.next_graph(kRadii));
    for (int i = 0; i < 4; ++i) b.push_back(gen.next_graph(kRadii));

    SUBCASE("cross(A, A) matches kernel_matrix(A)") {
        const Eigen::MatrixXd c = cross_kernel_matrix(a, a, h, true);
        const KernelMatrix km = kernel_matrix(a, h, true);
        CHECK((c - km.values).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("cross(A, B) is the transpose of cross(B, A)") {
        const Eigen::MatrixXd ab = cross_kernel_matrix(a, b, h, true);
        const Eigen::MatrixXd ba = cross_kernel_matrix(b, a, h, true);
        CHECK((ab - ba.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    }
    SUBCASE("single pair reduces to the normalized kernel") {
        const Eigen::MatrixXd c = cross_kernel_matrix(
            std::span(a.data(), 1), std::span(b.data(), 1), h, true);
        CHECK(c(0, 0) ==
              doctest::Approx(mgk_normalized(a[0], b[0], h)).epsilon(1e-12));
    }
}

TEST_CASE("graph distance") {
    const auto h = hyper(0.5, 0.2, 1.0, 0.1);
    const auto c = mol("C");
    const auto o = mol("O");
    SUBCASE("self distance is zero") { CHECK(graph_distance(c, c, h) == 0.0); }
    SUBCASE("normalized similarity one half gives unit distance") {
        // Single-vertex mismatch: K-hat = nu = 0.5 exactly.
        CHECK(graph_distance(c, o, h) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("triangle inequality on random triples") {
        testsupport::MoleculeGen gen(808, 7);
        for (int i = 0; i < 20; ++i) {
            const auto x = gen.next_graph(kRadii);
            const auto y = gen.next_graph(kRadii);
            const auto z = gen.next_graph(kRadii);
            const double dxy = graph_distance(x, y, h);
            const double dyz = graph_distance(y, z, h);
            const double dxz = graph_distance(x, z, h);
            CHECK(dxz <= dxy + dyz + 1e-10);
        }
    }
}

TEST_CASE("enumeration oracle") {
    SUBCASE("single-vertex pair matches the solver for any length") {
        const auto h = hyper(0.3, 0.2, 1.0, 0.25);
        const auto c = mol("C");
        const auto o = mol("O");
        for (int len : {1, 3, 7}) {
            CHECK(brute_force_kernel(c, c, h, len) ==
                  doctest::Approx(mgk_raw(c, c, h)).epsilon(1e-15));
            CHECK(brute_force_kernel(c, o, h, len) ==
                  doctest::Approx(mgk_raw(c, o, h)).epsilon(1e-15));
        }
    }
    SUBCASE("two-atom fragments converge to the solver value") {
        const auto h = hyper(0.3, 0.2, 1.0, 0.3);
        const auto cc = mol("CC");
        const auto co = mol("CO");
        const double exact = mgk_raw(cc, co, h);
        const double truncated = brute_force_kernel(cc, co, h, 10);
        CHECK(std::abs(exact - truncated) <= 1e-6);
    }
    SUBCASE("truncated sums increase monotonically in the length cap") {
        const auto h = hyper(0.3, 0.2, 1.0, 0.3);
        const auto a = mol("CCO");
        const auto b = mol("CCN");
        double prev = 0.0;
        for (int len = 1; len <= 8; ++len) {
            const double val = brute_force_kernel(a, b, h, len);
            CHECK(val >= prev);
            prev = val;
        }
    }
    SUBCASE("truncation gap decays geometrically") {
        const auto h = hyper(0.3, 0.2, 1.0, 0.5);
        const auto a = mol("CC(C)O");
        const auto b = mol("CCCO");
        const double exact = mgk_raw(a, b, h);
        const double bound = (1.0 - h.q) * (1.0 - h.q) + 0.02;
        double prev_gap = -1.0;
        for (int len = 1; len <= 8; ++len) {
            const double gap = exact - brute_force_kernel(a, b, h, len);
            if (prev_gap > 1e-12 * exact) CHECK(gap <= bound * prev_gap);
            prev_gap = gap;
        }
    }
    SUBCASE("scale guard") {
        const auto benzene = mol("c1ccccc1");
        CHECK_THROWS_AS(brute_force_kernel(benzene, benzene, hyper(), 5), Error);
        CHECK_THROWS_AS(brute_force_kernel(mol("C"), mol("C"), hyper(), 13), Error);
    }
}

TEST_CASE("normalized kernel is non-decreasing in nu") {
    const auto a = mol("CCO");
    const auto b = mol("CCC");
    const auto c = mol("c1ccccc1");
    double prev_ab = 0.0, prev_ac = 0.0;
    for (double nu : {0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) {
        const auto h = hyper(nu, 0.2, 1.0, 0.1);
        const double kab = mgk_normalized(a, b, h);
        const double kac = mgk_normalized(a, c, h);
        CHECK(kab >= prev_ab - 1e-12);
        CHECK(kac >= prev_ac - 1e-12);
        prev_ab = kab;
        prev_ac = kac;
    }
}

TEST_CASE("hyperparameter validation") {
    auto h = hyper();
    h.nu = 1.0;
    CHECK_THROWS_AS(h.validate(), Error);
    h = hyper();
    h.q = 0.0;
    CHECK_THROWS_AS(h.validate(), Error);
    h = hyper();
    h.lambda = -1.0;
    CHECK_THROWS_AS(h.validate(), Error);
    h = hyper();
    h.epsilon = 0.0;
    CHECK_THROWS_AS(h.validate(), Error);
}

}  // TEST_SUITE
