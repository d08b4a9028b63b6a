#include <doctest.h>

#include <algorithm>
#include <vector>

#include "fairaudit/errors.hpp"
#include "fairaudit/metrics.hpp"
#include "support/fixtures.hpp"

using namespace fairaudit;

TEST_SUITE("metrics") {

TEST_CASE("default registry order") {
    auto r = MetricRegistry::with_defaults();
    CHECK(r.ids() == std::vector<std::string>{"accuracy", "recall", "specificity", "precision", "npv", "fnr", "fpr",
                                              "fdr", "fomr", "f1"});
}

TEST_CASE("formulas on a worked confusion matrix") {
    auto r = MetricRegistry::with_defaults();
    ConfusionCounts c{3, 5, 2, 1};  // tp tn fp fn
    CHECK(*r.evaluate(c, "accuracy") == doctest::Approx(8.0 / 11));
    CHECK(*r.evaluate(c, "recall") == doctest::Approx(3.0 / 4));
    CHECK(*r.evaluate(c, "specificity") == doctest::Approx(5.0 / 7));
    CHECK(*r.evaluate(c, "precision") == doctest::Approx(3.0 / 5));
    CHECK(*r.evaluate(c, "npv") == doctest::Approx(5.0 / 6));
    CHECK(*r.evaluate(c, "fnr") == doctest::Approx(1.0 / 4));
    CHECK(*r.evaluate(c, "fpr") == doctest::Approx(2.0 / 7));
    CHECK(*r.evaluate(c, "fdr") == doctest::Approx(2.0 / 5));
    CHECK(*r.evaluate(c, "fomr") == doctest::Approx(1.0 / 6));
    CHECK(*r.evaluate(c, "f1") == doctest::Approx(2 * 0.6 * 0.75 / 1.35));
}

TEST_CASE("zero denominators are undefined, not zero") {
    auto r = MetricRegistry::with_defaults();
    ConfusionCounts negatives_only{0, 4, 0, 0};
    CHECK(r.evaluate(negatives_only, "accuracy") == 1.0);
    CHECK_FALSE(r.evaluate(negatives_only, "recall"));
    CHECK_FALSE(r.evaluate(negatives_only, "precision"));
    CHECK_FALSE(r.evaluate(negatives_only, "fnr"));
    CHECK_FALSE(r.evaluate(negatives_only, "f1"));
    CHECK(r.evaluate(negatives_only, "fpr") == 0.0);

    ConfusionCounts empty;
    for (const auto& id : r.ids()) CHECK_FALSE(r.evaluate(empty, id));

    ConfusionCounts all_wrong{0, 0, 2, 3};
    CHECK(r.evaluate(all_wrong, "precision") == 0.0);
    CHECK(r.evaluate(all_wrong, "recall") == 0.0);
    CHECK_FALSE(r.evaluate(all_wrong, "f1"));
}

TEST_CASE("registry validation") {
    auto r = MetricRegistry::with_defaults();
    CHECK_THROWS_AS(r.register_metric("accuracy", [](const ConfusionCounts&) { return MetricValue{}; }),
                    RegistryError);
    CHECK_THROWS_AS(r.register_metric("Bad-Id", [](const ConfusionCounts&) { return MetricValue{}; }),
                    RegistryError);
    CHECK_THROWS_AS(r.register_metric("ok", MetricFormula{}), RegistryError);
    try {
        r.require("auc");
        FAIL("expected RegistryError");
    } catch (const RegistryError& e) {
        CHECK(std::string(e.what()).find("accuracy, recall") != std::string::npos);
    }
    r.register_metric("positive_rate", [](const ConfusionCounts& c) { return ratio(c.tp + c.fp, c.total()); });
    CHECK(r.evaluate({1, 1, 1, 1}, "positive_rate") == 0.5);
    CHECK(r.evaluate_all({1, 1, 1, 1}).size() == 11);
}

TEST_CASE("sort directions") {
    auto r = MetricRegistry::with_defaults();
    CHECK(r.direction("accuracy") == Direction::higher_is_better);
    CHECK(r.direction("fpr") == Direction::lower_is_better);
    CHECK_FALSE(r.sorts_descending("accuracy", SortOrder::worst_first));
    CHECK(r.sorts_descending("fpr", SortOrder::worst_first));
    CHECK(r.sorts_descending("accuracy", SortOrder::descending));
    CHECK_FALSE(r.sorts_descending("fnr", SortOrder::ascending));
    CHECK(parse_sort_order("asc") == SortOrder::ascending);
    CHECK(parse_sort_order("desc") == SortOrder::descending);
    CHECK(parse_sort_order("worst") == SortOrder::worst_first);
    CHECK_THROWS_AS(parse_sort_order("up"), InvalidArgumentError);
}

TEST_CASE("undefined values sort last either way") {
    std::vector<MetricValue> v{0.5, std::nullopt, 0.1, 0.9};
    std::stable_sort(v.begin(), v.end(), ascending_undefined_last);
    CHECK(v == std::vector<MetricValue>{0.1, 0.5, 0.9, std::nullopt});
    std::stable_sort(v.begin(), v.end(), descending_undefined_last);
    CHECK(v == std::vector<MetricValue>{0.9, 0.5, 0.1, std::nullopt});
}

TEST_CASE("confusion counts and dataset average") {
    auto loaded = fixtures::load_text(
        "g,label,pred\n"
        "a,1,1\n"
        "a,0,0\n"
        "b,0,1\n"
        "b,1,0\n"
        "b,1,1\n");
    auto all = confusion_all(loaded.table);
    CHECK(all == ConfusionCounts{2, 1, 1, 1});
    std::vector<RowId> b{2, 3, 4};
    CHECK(confusion(b, loaded.table) == ConfusionCounts{1, 0, 1, 1});
    CHECK(*label_balance(b, loaded.table) == doctest::Approx(2.0 / 3));
    CHECK_FALSE(label_balance({}, loaded.table));
    auto r = MetricRegistry::with_defaults();
    CHECK(*dataset_average(loaded.table, r, "accuracy") == doctest::Approx(0.6));
}

}
