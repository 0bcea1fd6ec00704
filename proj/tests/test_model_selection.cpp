#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

#include "solvgp/errors.hpp"
#include "solvgp/model_selection.hpp"
#include "test_support.hpp"

using namespace solvgp;

namespace {

const RadiiTable kRadii = RadiiTable::standard();

Dataset synthetic_ids(int n) {
    // Ids are hashed so sorted order is unrelated to insertion order.
    Dataset ds;
    for (int i = 0; i < n; ++i) {
        const std::size_t h = std::hash<int>{}(i * 2654435761u);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016zx", h);
        ds.records.push_back({buf, "C", 0.0, true});
    }
    return ds;
}

// Small alcohol/alkane mix with group-additive targets; enough structure for
// cross-validation to prefer sane hyperparameters.
Dataset toy_dataset() {
    const char* smiles[] = {
        "C",        "CC",      "CCC",      "CCCC",     "CCCCC",  "CC(C)C",
        "CC(C)CC",  "CCCCCC",  "CO",       "CCO",      "CCCO",   "CCCCO",
        "CC(C)O",   "CC(O)CC", "OCCO",     "CCCCCO",   "CN",     "CCN",
        "CCCN",     "CC(C)N",  "CNC",      "CCNCC",    "CS",     "CCS",
        "CSC",      "CC=O",    "CCC=O",    "CC(C)=O",  "CCC(C)=O", "C=C",
        "CC=C",     "CC=CC",   "C#C",      "CC#C",     "CC#N",   "CCC#N",
        "c1ccccc1", "Cc1ccccc1", "CCc1ccccc1", "Oc1ccccc1",
    };
    Dataset ds;
    int idx = 0;
    for (const char* s : smiles) {
        const std::size_t h = std::hash<std::string>{}(s);
        char buf[40];
        std::snprintf(buf, sizeof buf, "%016zx", h);
        DataRecord rec;
        rec.id = buf;
        rec.smiles = s;
        const std::string str(s);
        double y = 1.5 + 0.12 * static_cast<double>(str.size());
        y -= 5.0 * static_cast<double>(std::count(str.begin(), str.end(), 'O'));
        y -= 4.0 * static_cast<double>(std::count(str.begin(), str.end(), 'N'));
        y -= 1.5 * static_cast<double>(std::count(str.begin(), str.end(), 'S'));
        y -= 0.8 * static_cast<double>(std::count(str.begin(), str.end(), 'c')) / 6.0;
        rec.target = y;
        ds.records.push_back(std::move(rec));
        ++idx;
    }
    return ds;
}

HyperGrid tiny_grid() {
    HyperGrid g;
    g.nu = {0.3};
    g.lambda = {0.1};
    g.zeta = {1.0};
    g.q = {0.05};
    g.alpha = {1e-2};
    g.sigma_sq = {1.0};
    g.folds = 5;
    return g;
}

}  // namespace

TEST_SUITE("model_selection") {

TEST_CASE("split sizes reproduce the 550/38 protocol") {
    const Dataset ds = synthetic_ids(588);
    const auto [train, test] = split_by_id(ds, 0.935);
    CHECK(train.size() == 550);
    CHECK(test.size() == 38);
}

TEST_CASE("split rejects an empty test half") {
    const Dataset ds = synthetic_ids(10);
    CHECK_THROWS_AS(split_by_id(ds, 0.999), Error);
    CHECK_THROWS_AS(split_by_id(ds, 1.0), Error);
    CHECK_THROWS_AS(split_by_id(Dataset{}, 0.5), Error);
}

TEST_CASE("split ignores the input record order") {
    Dataset ds = synthetic_ids(50);
    std::mt19937 rng(5);
    Dataset shuffled = ds;
    std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);
    const auto [t1, v1] = split_by_id(ds, 0.8);
    const auto [t2, v2] = split_by_id(shuffled, 0.8);
    REQUIRE(t1.size() == t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i)
        CHECK(t1.records[i].id == t2.records[i].id);
}

TEST_CASE("kfold partitions") {
    SUBCASE("ten singletons") {
        const auto folds = kfold(synthetic_ids(10), 10);
        REQUIRE(folds.size() == 10);
        for (const auto& [train, val] : folds) {
            CHECK(train.size() == 9);
            CHECK(val.size() == 1);
        }
    }
    SUBCASE("3600 records in ten blocks of 360") {
        const auto folds = kfold(synthetic_ids(3600), 10);
        REQUIRE(folds.size() == 10);
        for (const auto& [train, val] : folds) {
            CHECK(val.size() == 360);
            CHECK(train.size() == 3240);
        }
    }
    SUBCASE("validation blocks form a disjoint cover") {
        const Dataset ds = synthetic_ids(47);
        const auto folds = kfold(ds, 10);
        std::set<std::string> seen;
        std::size_t total = 0;
        for (const auto& [train, val] : folds) {
            total += val.size();
            for (const auto& r : val.records) CHECK(seen.insert(r.id).second);
        }
        CHECK(total == 47);
        // First 47 % 10 = 7 blocks carry the extra record.
        CHECK(folds[0].second.size() == 5);
        CHECK(folds[7].second.size() == 4);
    }
    SUBCASE("too few records") {
        CHECK_THROWS_AS(kfold(synthetic_ids(5), 10), Error);
    }
}

TEST_CASE("mae") {
    const std::vector<double> y = {0.0, 0.0};
    CHECK(mae(std::vector<double>{0.0, 0.0}, y) == 0.0);
    CHECK(mae(std::vector<double>{1.0, 2.0}, y) == doctest::Approx(1.5));
    CHECK_THROWS_AS(mae(std::vector<double>{1.0}, y), Error);

    // Paired permutation invariance.
    std::mt19937 rng(6);
    std::vector<double> p(20), t(20);
    for (int i = 0; i < 20; ++i) {
        p[i] = std::uniform_real_distribution<double>(-5, 5)(rng);
        t[i] = std::uniform_real_distribution<double>(-5, 5)(rng);
    }
    const double before = mae(p, t);
    std::vector<int> perm = testsupport::random_permutation(20, rng);
    std::vector<double> p2(20), t2(20);
    for (int i = 0; i < 20; ++i) {
        p2[perm[i]] = p[i];
        t2[perm[i]] = t[i];
    }
    CHECK(mae(p2, t2) == doctest::Approx(before).epsilon(1e-14));
}

TEST_CASE("rmse") {
    const std::vector<double> y = {0.0, 0.0};
    CHECK(rmse(std::vector<double>{0.0, 0.0}, y) == 0.0);
    CHECK(rmse(std::vector<double>{1.0, 2.0}, y) ==
          doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));

    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 12);
        std::vector<double> p(n), t(n);
        for (int i = 0; i < n; ++i) {
            p[i] = std::uniform_real_distribution<double>(-5, 5)(rng);
            t[i] = std::uniform_real_distribution<double>(-5, 5)(rng);
        }
        CHECK(rmse(p, t) >= mae(p, t) - 1e-12);
    }
}

TEST_CASE("pearson r2") {
    std::vector<double> y = {1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> affine(5);
    for (int i = 0; i < 5; ++i) affine[i] = 2.0 * y[i] + 3.0;
    CHECK(pearson_r2(affine, y) == doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<double> t = {1.0, -1.0, 1.0, -1.0};
    const std::vector<double> p = {1.0, 1.0, -1.0, -1.0};
    CHECK(pearson_r2(p, t) == doctest::Approx(0.0).epsilon(1e-12));

    // Five-point check against the textbook formula.
    const std::vector<double> yp = {2.1, 3.9, 6.2, 7.8, 9.9};
    const int n = 5;
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sx += y[i];
        sy += yp[i];
        sxy += y[i] * yp[i];
        sxx += y[i] * y[i];
        syy += yp[i] * yp[i];
    }
    const double r = (n * sxy - sx * sy) /
                     std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
    CHECK(pearson_r2(yp, y) == doctest::Approx(r * r).epsilon(1e-12));

    CHECK_THROWS_AS(pearson_r2(std::vector<double>{1.0, 2.0},
                               std::vector<double>{3.0, 3.0}),
                    Error);
}

TEST_CASE("grid search selects the single candidate") {
    const Dataset ds = toy_dataset();
    const CVReport report = grid_search(ds, tiny_grid(), KernelHyperparameters{},
                                        GPHyperparameters{}, kRadii);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.selected == 0);
    CHECK(report.rows[0].fold_mae.size() == 5);
    CHECK(std::isfinite(report.rows[0].mean_mae));
}

TEST_CASE("duplicated candidates tie and the first wins") {
    HyperGrid grid = tiny_grid();
    grid.alpha = {1e-2, 1e-2};
    const Dataset ds = toy_dataset();
    const CVReport report = grid_search(ds, grid, KernelHyperparameters{},
                                        GPHyperparameters{}, kRadii);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].mean_mae == report.rows[1].mean_mae);
    CHECK(report.selected == 0);
}

TEST_CASE("selected candidate attains the minimum mean MAE") {
    HyperGrid grid = tiny_grid();
    grid.nu = {0.1, 0.5};
    grid.q = {0.05, 0.2};
    grid.alpha = {1e-3, 1e-1};
    const Dataset ds = toy_dataset();
    const CVReport report = grid_search(ds, grid, KernelHyperparameters{},
                                        GPHyperparameters{}, kRadii);
    REQUIRE(report.rows.size() == 8);
    for (const auto& row : report.rows)
        CHECK(report.rows[report.selected].mean_mae <= row.mean_mae);
    // Fit count bookkeeping: every row carries one MAE per fold.
    for (const auto& row : report.rows)
        CHECK(row.fold_mae.size() == static_cast<std::size_t>(grid.folds));
}

TEST_CASE("a failing candidate is recorded, not fatal") {
    // Duplicate molecules with alpha = 0 make the covariance singular.
    Dataset ds = toy_dataset();
    ds.records[1].smiles = ds.records[0].smiles;
    HyperGrid grid = tiny_grid();
    grid.alpha = {0.0, 1e-2};
    const CVReport report = grid_search(ds, grid, KernelHyperparameters{},
                                        GPHyperparameters{}, kRadii);
    REQUIRE(report.rows.size() == 2);
    CHECK(std::isinf(report.rows[0].mean_mae));
    CHECK(std::isfinite(report.rows[1].mean_mae));
    CHECK(report.selected == 1);
}

TEST_CASE("grid search is deterministic and order independent") {
    HyperGrid grid = tiny_grid();
    grid.nu = {0.5, 0.1};  // unsorted on purpose; canonical order sorts
    const Dataset ds = toy_dataset();
    Dataset shuffled = ds;
    std::mt19937 rng(8);
    std::shuffle(shuffled.records.begin(), shuffled.records.end(), rng);

    const CVReport r1 = grid_search(ds, grid, KernelHyperparameters{},
                                    GPHyperparameters{}, kRadii);
    const CVReport r2 = grid_search(shuffled, grid, KernelHyperparameters{},
                                    GPHyperparameters{}, kRadii);
    REQUIRE(r1.rows.size() == r2.rows.size());
    CHECK(r1.rows[0].candidate.nu == 0.1);
    for (std::size_t i = 0; i < r1.rows.size(); ++i) {
        CHECK(r1.rows[i].mean_mae == r2.rows[i].mean_mae);
        for (std::size_t f = 0; f < r1.rows[i].fold_mae.size(); ++f)
            CHECK(r1.rows[i].fold_mae[f] == r2.rows[i].fold_mae[f]);
    }
}

TEST_CASE("grid validation") {
    HyperGrid grid = tiny_grid();
    grid.nu = {};
    CHECK_THROWS_AS(grid.validate(), Error);
    grid = tiny_grid();
    grid.q = {1.5};
    CHECK_THROWS_AS(grid.validate(), Error);
    grid = tiny_grid();
    grid.folds = 1;
    CHECK_THROWS_AS(grid.validate(), Error);
}

}  // TEST_SUITE
