#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "camel/errors.hpp"
#include "camel/report_io.hpp"
#include "camel/tuner.hpp"
#include "testutil.hpp"

using namespace camel;

namespace {

TrainerConfig base_config() {
    TrainerConfig cfg;
    cfg.lambda1 = 1.0;
    cfg.lambda2 = 0.1;
    return cfg;
}

}  // namespace

TEST_CASE("cross_validate on separable synthetic data") {
    Dataset ds = testutil::make_cluster_dataset(20, 4, 4, 4, 0.1, 91);
    const GridPoint point{0.1, 1.0, 0.01};
    CvResult result = cross_validate(ds, point, 5, 123, base_config(), 2);

    CHECK(result.folds.size() == 5);
    CHECK(result.all_converged);
    for (const auto& fold : result.folds) {
        CHECK(fold.report.average_precision >= 0.99);
        CHECK(fold.chosen.alpha == point.alpha);
        CHECK(fold.sigma > 0.0);
    }
    CHECK(result.mean.average_precision >= 0.99);
}

TEST_CASE("cross_validate is deterministic for a fixed seed") {
    Dataset ds = testutil::make_cluster_dataset(8, 3, 3, 3, 0.3, 92);
    const GridPoint point{0.5, 1.0, 0.1};
    CvResult a = cross_validate(ds, point, 3, 7, base_config(), 1);
    CvResult b = cross_validate(ds, point, 3, 7, base_config(), 3);
    CHECK(cv_result_to_text(a) == cv_result_to_text(b));
    CHECK(cv_result_to_json(a) == cv_result_to_json(b));

    CvResult c = cross_validate(ds, point, 3, 8, base_config(), 1);
    CHECK(cv_result_to_text(a) != cv_result_to_text(c));
}

TEST_CASE("cross_validate fold-size edge cases") {
    SUBCASE("n=4, k=2 evaluates both folds") {
        Dataset ds = testutil::make_cluster_dataset(2, 2, 2, 2, 0.1, 93);
        CvResult r = cross_validate(ds, GridPoint{0.0, 1.0, 0.1}, 2, 5, base_config(), 1);
        CHECK(r.folds.size() == 2);
    }
    SUBCASE("a fold whose training side drops below two instances is an error") {
        Dataset ds = testutil::make_cluster_dataset(3, 1, 2, 2, 0.1, 94);
        REQUIRE(ds.features.rows() == 3);
        CHECK_THROWS_AS(cross_validate(ds, GridPoint{0.0, 1.0, 0.1}, 2, 5, base_config(), 1),
                        InputError);
    }
    SUBCASE("k below 2 is rejected") {
        Dataset ds = testutil::make_cluster_dataset(4, 2, 2, 2, 0.1, 95);
        CHECK_THROWS_AS(cross_validate(ds, GridPoint{0.0, 1.0, 0.1}, 1, 5, base_config(), 1),
                        InputError);
    }
}

TEST_CASE("grid defaults match the documented ladders") {
    Grid g = Grid::defaults();
    REQUIRE(g.alphas.size() == 11);
    CHECK(g.alphas.front() == 0.0);
    CHECK(g.alphas.back() == 1.0);
    CHECK(g.alphas[3] == doctest::Approx(0.3));
    REQUIRE(g.lambda2s.size() == 7);
    CHECK(g.lambda2s ==
          std::vector<double>{1e-3, 2e-3, 1e-2, 2e-2, 1e-1, 2e-1, 1.0});
    CHECK(g.lambda1 == 1.0);
    CHECK(g.points().size() == 77);
}

TEST_CASE("grid_search") {
    Dataset ds = testutil::make_cluster_dataset(10, 3, 3, 3, 0.1, 96);

    SUBCASE("single-point grid returns that point") {
        Grid grid;
        grid.alphas = {0.3};
        grid.lambda2s = {0.05};
        GridSearchOutcome out =
            grid_search(ds, grid, 3, SelectionMetric::average_precision, 11, base_config(), 1);
        CHECK(out.best.alpha == 0.3);
        CHECK(out.best.lambda2 == 0.05);
        CHECK(out.table.size() == 1);
        CHECK(out.total_fits == 3);
    }
    SUBCASE("a dominant point wins") {
        Grid grid;
        grid.alphas = {0.0};
        grid.lambda2s = {0.05, 1e6};  // the huge value collapses the model to its bias
        GridSearchOutcome out =
            grid_search(ds, grid, 3, SelectionMetric::average_precision, 11, base_config(), 1);
        CHECK(out.best.lambda2 == 0.05);
        CHECK(out.best_score > 0.9);
        CHECK(out.total_fits == 2 * 3);
    }
    SUBCASE("exact ties break toward smaller alpha, then smaller lambda2") {
        Grid grid;
        grid.alphas = {0.2, 0.4};
        grid.lambda2s = {0.05, 0.01};
        GridSearchOutcome out =
            grid_search(ds, grid, 3, SelectionMetric::hamming_loss, 11, base_config(), 1);
        // separable data: every point predicts perfectly, all scores tie at 0
        for (const auto& [point, score] : out.table) CHECK(score == 0.0);
        CHECK(out.best.alpha == 0.2);
        CHECK(out.best.lambda2 == 0.01);
    }
    SUBCASE("empty grid is rejected") {
        Grid grid;
        CHECK_THROWS_AS(
            grid_search(ds, grid, 3, SelectionMetric::average_precision, 11, base_config(), 1),
            InputError);
    }
}

TEST_CASE("selection metric helpers") {
    CHECK(higher_is_better(SelectionMetric::average_precision));
    CHECK(higher_is_better(SelectionMetric::macro_f1));
    CHECK(!higher_is_better(SelectionMetric::hamming_loss));
    CHECK(!higher_is_better(SelectionMetric::coverage));
    CHECK(parse_selection_metric("ranking_loss") == SelectionMetric::ranking_loss);
    CHECK(selection_metric_name(SelectionMetric::micro_f1) == "micro_f1");
    CHECK_THROWS_AS(parse_selection_metric("auc"), InputError);

    MetricReport r;
    r.coverage = 0.25;
    CHECK(metric_value(r, SelectionMetric::coverage) == 0.25);
}

TEST_CASE("fold statistics never leak the held-out rows") {
    Dataset ds = testutil::make_cluster_dataset(8, 3, 3, 3, 0.3, 97);
    const FoldSplit split = kfold_split(ds.features.rows(), 3, 13);
    const std::vector<int> train_rows = fold_train_rows(split, 0);
    const std::vector<int> test_rows = fold_test_rows(split, 0);

    Dataset noised = ds;
    for (int r : test_rows) {
        for (std::size_t j = 0; j < noised.features.cols(); ++j)
            noised.features(r, j) += 1000.0 + j;
        for (std::size_t j = 0; j < noised.labels.cols(); ++j)
            noised.labels(r, j) = -noised.labels(r, j);
    }

    const GridPoint point{0.4, 1.0, 0.05};
    FoldFit a = fit_fold(ds, train_rows, point, base_config());
    FoldFit b = fit_fold(noised, train_rows, point, base_config());

    CHECK(a.model.kernel.bandwidth == b.model.kernel.bandwidth);
    CHECK(testutil::bitwise_equal(a.model.dual_coeffs, b.model.dual_coeffs));
    CHECK(testutil::bitwise_equal(a.model.bias, b.model.bias));
    CHECK(testutil::bitwise_equal(a.model.g, b.model.g));
}

TEST_CASE("nested_cross_validate runs the full protocol deterministically") {
    Dataset ds = testutil::make_cluster_dataset(10, 3, 3, 3, 0.2, 98);
    Grid grid;
    grid.alphas = {0.0, 0.5};
    grid.lambda2s = {0.01, 0.1};

    CvResult a = nested_cross_validate(ds, grid, 3, 2, SelectionMetric::average_precision, 21,
                                       base_config(), 2);
    CHECK(a.folds.size() == 3);
    CHECK(a.selection == SelectionMetric::average_precision);
    // 4 grid points x 2 inner folds x 3 outer folds
    CHECK(a.sensitivity.size() == 4 * 3);
    for (const auto& fold : a.folds) {
        CHECK((fold.chosen.alpha == 0.0 || fold.chosen.alpha == 0.5));
        CHECK((fold.chosen.lambda2 == 0.01 || fold.chosen.lambda2 == 0.1));
    }
    CHECK(a.mean.average_precision > 0.9);

    CvResult b = nested_cross_validate(ds, grid, 3, 2, SelectionMetric::average_precision, 21,
                                       base_config(), 1);
    CHECK(cv_result_to_text(a) == cv_result_to_text(b));
    CHECK(sensitivity_to_text(a) == sensitivity_to_text(b));
}
