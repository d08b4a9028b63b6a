#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "fairaudit/errors.hpp"
#include "fairaudit/kmeans.hpp"
#include "fairaudit/suggest.hpp"
#include "support/fixtures.hpp"

using namespace fairaudit;

namespace {

// Canonical form of a partition: clusters as sorted member lists, sorted.
std::vector<std::vector<RowId>> partition(const ClusterModel& m) {
    auto members = m.members();
    std::sort(members.begin(), members.end());
    return members;
}

}  // namespace

TEST_SUITE("kmeans") {

TEST_CASE("sparse squared distance matches the dense formula") {
    std::vector<double> c{0.25, 0.75, 0.0, 1.0, 0.5};
    double norm = 0;
    for (double x : c) norm += x * x;
    std::vector<std::uint32_t> active{1, 4};
    std::vector<double> x{0, 1, 0, 0, 1};
    double dense = 0;
    for (std::size_t j = 0; j < c.size(); ++j) dense += (x[j] - c[j]) * (x[j] - c[j]);
    CHECK(squared_distance(active, c, norm) == doctest::Approx(dense).epsilon(1e-12));
}

TEST_CASE("config validation") {
    std::mt19937_64 rng(1);
    auto t = fixtures::random_table(rng, 20, {3, 3});
    auto m = one_hot(t.table, t.schema);
    ClusterConfig c;
    c.k = 0;
    CHECK_THROWS_AS(kmeans(m, c), InvalidArgumentError);
    c.k = 21;
    CHECK_THROWS_AS(kmeans(m, c), InvalidArgumentError);
    c.k = 2;
    c.max_iterations = 0;
    CHECK_THROWS_AS(kmeans(m, c), InvalidArgumentError);
    c.max_iterations = 10;
    c.tolerance = -1;
    CHECK_THROWS_AS(kmeans(m, c), InvalidArgumentError);
}

TEST_CASE("k larger than the number of distinct rows is rejected") {
    auto loaded = fixtures::load_text("g,label,pred\na,1,1\na,0,0\nb,1,0\nb,0,1\n");
    auto m = one_hot(loaded.table, loaded.schema);
    ClusterConfig c;
    c.k = 3;
    CHECK_THROWS_AS(kmeans(m, c), InvalidArgumentError);
    c.k = 2;
    auto model = kmeans(m, c);
    CHECK(partition(model) == std::vector<std::vector<RowId>>{{0, 1}, {2, 3}});
    CHECK(model.inertia() == doctest::Approx(0.0));
    CHECK(model.converged());
}

TEST_CASE("every cluster is non-empty and rows sit at their nearest centroid") {
    std::mt19937_64 rng(11);
    auto t = fixtures::random_table(rng, 300, {4, 3, 5, 2});
    auto m = one_hot(t.table, t.schema);
    ClusterConfig c;
    c.k = 8;
    c.seed = 3;
    auto model = kmeans(m, c);
    CHECK(model.k() == 8);
    for (const auto& members : model.members()) CHECK_FALSE(members.empty());
    for (std::size_t r = 0; r < m.row_count(); ++r) {
        double best = 1e300;
        for (std::size_t k = 0; k < model.k(); ++k) {
            auto cen = model.centroid(k);
            double norm = std::inner_product(cen.begin(), cen.end(), cen.begin(), 0.0);
            best = std::min(best, squared_distance(m.active(r), cen, norm));
        }
        auto own = model.centroid(model.assignments()[r]);
        double own_norm = std::inner_product(own.begin(), own.end(), own.begin(), 0.0);
        CHECK(squared_distance(m.active(r), own, own_norm) <= best + 1e-9);
    }
}

TEST_CASE("partition does not depend on row order") {
    std::mt19937_64 rng(5);
    auto t = fixtures::random_table(rng, 200, {3, 4, 2});
    auto m = one_hot(t.table, t.schema);
    ClusterConfig c;
    c.k = 5;
    c.seed = 42;
    auto model = kmeans(m, c);

    std::vector<RowId> perm(200);
    std::iota(perm.begin(), perm.end(), 0u);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::vector<ValueCode>> cols(3, std::vector<ValueCode>(200));
    std::vector<std::uint8_t> labels(200), preds(200);
    for (std::size_t i = 0; i < 200; ++i) {
        for (std::size_t f = 0; f < 3; ++f) cols[f][i] = t.table.code(perm[i], f);
        labels[i] = t.table.label(perm[i]);
        preds[i] = t.table.prediction(perm[i]);
    }
    DataTable shuffled(t.schema, cols, labels, preds);
    auto model2 = kmeans(one_hot(shuffled, t.schema), c);

    // Map back to original row ids and compare partitions.
    std::vector<std::vector<RowId>> mapped;
    for (auto members : model2.members()) {
        for (auto& r : members) r = perm[r];
        std::sort(members.begin(), members.end());
        mapped.push_back(members);
    }
    std::sort(mapped.begin(), mapped.end());
    CHECK(mapped == partition(model));
}

TEST_CASE("cluster subgroups are named and cover every row") {
    std::mt19937_64 rng(9);
    auto t = fixtures::random_table(rng, 120, {3, 3});
    auto m = one_hot(t.table, t.schema);
    ClusterConfig c;
    c.k = 4;
    auto model = kmeans(m, c);
    auto registry = MetricRegistry::with_defaults();
    auto groups = clusters_to_subgroups(model, t.table, t.schema, registry);
    REQUIRE(groups.size() == 4);
    CHECK(groups[0].spec.display_name == "Cluster 1");
    CHECK(groups[3].spec.display_name == "Cluster 4");
    std::size_t total = 0;
    for (const auto& g : groups) {
        CHECK(g.spec.kind == GroupKind::cluster);
        total += g.size();
    }
    CHECK(total == 120);
}

}

TEST_SUITE("suggest") {

TEST_CASE("entropy in bits") {
    std::vector<std::uint64_t> point{0, 7, 0};
    CHECK(*entropy_bits(point) == 0.0);
    std::vector<std::uint64_t> uniform{3, 3, 3, 3};
    CHECK(*entropy_bits(uniform) == doctest::Approx(2.0).epsilon(1e-12));
    std::vector<std::uint64_t> skew{1, 3};
    CHECK(*entropy_bits(skew) == doctest::Approx(0.8112781244591328));
    std::vector<std::uint64_t> none{0, 0};
    CHECK_FALSE(entropy_bits(none));
}

TEST_CASE("dominant features rank by entropy with value ties broken by text") {
    auto loaded = fixtures::load_text(
        "race,sex,label,pred\n"
        "a,M,1,1\n"
        "b,M,1,1\n"
        "c,M,0,1\n"
        "c,M,0,0\n");
    auto registry = MetricRegistry::with_defaults();
    auto g = materialize(make_predicate_spec(loaded.schema, {}), loaded.table, loaded.schema, registry);
    auto dominant = dominant_features(g.distribution, loaded.schema);
    REQUIRE(dominant.size() == 2);
    CHECK(dominant[0].feature == 1);
    CHECK(dominant[0].entropy == 0.0);
    CHECK(dominant[0].fraction == 1.0);
    CHECK(dominant[1].feature == 0);
    CHECK(dominant[1].value == 2);
    CHECK(dominant[1].fraction == 0.5);

    auto tie = fixtures::load_text("race,label,pred\nb,1,1\na,0,0\n");
    auto tg = materialize(make_predicate_spec(tie.schema, {}), tie.table, tie.schema, registry);
    CHECK(dominant_features(tg.distribution, tie.schema)[0].value == 0);  // "a" < "b"

    FeatureDistribution empty;
    empty.counts.resize(1);
    CHECK_THROWS_AS(dominant_features(empty, tie.schema), InvalidArgumentError);
}

TEST_CASE("suggestions rank worst first and hide small groups") {
    auto registry = MetricRegistry::with_defaults();
    auto loaded = fixtures::load_text(
        "g,label,pred\n"
        "a,1,1\na,1,1\na,1,0\n"
        "b,1,0\nb,1,0\nb,0,0\n"
        "c,0,1\nc,0,1\nc,0,0\n"
        "d,1,1\n");
    std::vector<GroupRef> groups;
    for (ValueCode v = 0; v < 4; ++v) {
        groups.push_back(std::make_shared<const Subgroup>(
            materialize(make_predicate_spec(loaded.schema, {{0, v}}), loaded.table, loaded.schema, registry)));
    }
    auto names = [](const std::vector<GroupRef>& gs) {
        std::vector<std::string> out;
        for (const auto& g : gs) out.push_back(g->spec.display_name);
        return out;
    };
    CHECK(names(rank_suggestions(groups, "accuracy", 2, registry)) ==
          std::vector<std::string>{"g=b", "g=c", "g=a"});
    // fpr: a undefined (no negatives), b 0, c 2/3. Worst first is descending.
    CHECK(names(rank_suggestions(groups, "fpr", 2, registry)) == std::vector<std::string>{"g=c", "g=b", "g=a"});
    CHECK(names(rank_suggestions(groups, "fpr", 2, registry, SortOrder::ascending)) ==
          std::vector<std::string>{"g=b", "g=c", "g=a"});
    CHECK(rank_suggestions(groups, "accuracy", 1, registry).size() == 4);
    CHECK_THROWS_AS(rank_suggestions(groups, "auc", 1, registry), RegistryError);
}

}
