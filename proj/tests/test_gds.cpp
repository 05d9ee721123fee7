#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>

#include "gdsarm/error.hpp"
#include "gdsarm/gds.hpp"
#include "oracles.hpp"

using namespace gdsarm;

namespace {

std::vector<double> pick(const std::vector<double>& v, const std::vector<std::size_t>& idx)
{
    std::vector<double> out;
    for (auto i : idx) out.push_back(v[i]);
    return out;
}

std::vector<std::string> labels(const std::vector<Effect>& e, std::size_t m)
{
    std::vector<std::string> out;
    for (const auto& x : e) out.push_back(effect_label(x, default_factor_names(m)));
    return out;
}

} // namespace

TEST_CASE("two-means examples")
{
    const std::vector<double> v{0.1, 0.2, 4.9, 5.1};
    const auto s = split_two_means(v);
    CHECK(pick(v, s.high) == std::vector<double>{4.9, 5.1});
    CHECK(pick(v, s.low) == std::vector<double>{0.1, 0.2});

    const std::vector<double> same{2, 2, 2};
    CHECK(split_two_means(same).high.size() == 3);
    const std::vector<double> zeros{0, 0};
    CHECK(split_two_means(zeros).high.empty());
    const std::vector<double> one{3};
    CHECK(split_two_means(one).high.size() == 1);
}

TEST_CASE("two-means is the exhaustive optimum")
{
    std::mt19937_64 rng(10);
    std::uniform_int_distribution<std::size_t> len(1, 12);
    std::exponential_distribution<double> e(1.0);
    std::uniform_int_distribution<int> grid(0, 4);
    for (int rep = 0; rep < 400; ++rep) {
        std::vector<double> v(len(rng));
        // mix continuous draws with repeated small integers to exercise ties
        for (auto& x : v) x = rep % 2 ? e(rng) : grid(rng);
        const auto s = split_two_means(v);
        CHECK(s.low.size() + s.high.size() == v.size());
        CHECK(std::abs(within_cluster_sse(v, s) - oracle::best_two_partition_sse(v)) < 1e-9);
        if (!s.low.empty() && !s.high.empty()) {
            const auto lv = pick(v, s.low);
            const auto hv = pick(v, s.high);
            CHECK(*std::max_element(lv.begin(), lv.end()) < *std::min_element(hv.begin(), hv.end()));
        }
    }
}

TEST_CASE("lloyd two clusters")
{
    const std::vector<double> v{0.1, 0.2, 4.9, 5.1};
    CHECK(pick(v, kmeans_two_clusters(v).high) == std::vector<double>{4.9, 5.1});
    const std::vector<double> zeros{0, 0, 0};
    CHECK(kmeans_two_clusters(zeros).high.empty());
    const std::vector<double> same{1, 1};
    CHECK(kmeans_two_clusters(same).high.size() == 2);

    std::mt19937_64 rng(11);
    std::exponential_distribution<double> e(1.0);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> v(10);
        for (auto& x : v) x = e(rng);
        const auto s = kmeans_two_clusters(v);
        CHECK(s.low.size() + s.high.size() == v.size());
        REQUIRE(!s.high.empty());
        // a Lloyd fixed point: each point is no closer to the other centre
        const auto hv = pick(v, s.high);
        const auto lv = pick(v, s.low);
        const double ch = std::accumulate(hv.begin(), hv.end(), 0.0) / static_cast<double>(hv.size());
        if (lv.empty()) continue;
        const double cl = std::accumulate(lv.begin(), lv.end(), 0.0) / static_cast<double>(lv.size());
        for (double x : hv) CHECK(std::abs(x - ch) < std::abs(x - cl) + 1e-12);
        for (double x : lv) CHECK(std::abs(x - cl) <= std::abs(x - ch) + 1e-12);
    }
}

TEST_CASE("cast fatigue")
{
    const auto d = oracle::cast_fatigue_design();
    const auto y = oracle::cast_fatigue_response();
    const auto m = gds_main_effects(d, y);
    CHECK(labels(m.active_effects, 7) == std::vector<std::string>{"D", "F"});
    CHECK(m.important_factors == std::vector<int>{3, 5});
    CHECK(m.r_squared == doctest::Approx(0.5867).epsilon(1e-3));

    const auto all = gds_all_2fi(d, y);
    CHECK(labels(all.active_effects, 7) == std::vector<std::string>{"F", "AE", "FG"});
    CHECK(all.important_factors == std::vector<int>{0, 4, 5, 6});
    CHECK(all.r_squared == doctest::Approx(0.9526).epsilon(1e-3));
}

TEST_CASE("exact recovery of a single effect")
{
    const auto d = oracle::cast_fatigue_design();
    std::vector<double> y(12);
    for (int i = 0; i < 12; ++i) y[static_cast<std::size_t>(i)] = 5 * d.settings()(i, 5);
    CHECK(labels(gds_main_effects(d, y).active_effects, 7) == std::vector<std::string>{"F"});
    for (auto t : {Thresholding::exact_two_means, Thresholding::gamma}) {
        GdsOptions o;
        o.thresholding = t;
        CHECK(labels(gds_main_effects(d, y, o).active_effects, 7) == std::vector<std::string>{"F"});
    }
}

TEST_CASE("zero response")
{
    const auto d = oracle::cast_fatigue_design();
    const std::vector<double> y(12, 3.5);
    CHECK(gds_main_effects(d, y).active_effects.empty());
    CHECK(gds_all_2fi(d, y).important_factors.empty());
}

TEST_CASE("winner has the smallest bic")
{
    const auto d = oracle::cast_fatigue_design();
    const auto y = oracle::cast_fatigue_response();
    for (auto t : {Thresholding::kmeans, Thresholding::exact_two_means, Thresholding::gamma}) {
        GdsOptions o;
        o.thresholding = t;
        const auto mm = build_model_matrix(d, all_effects(7), y);
        const auto path = gds_path(mm, o);
        REQUIRE(!path.candidates.empty());
        for (const auto& c : path.candidates) {
            CHECK(path.candidates[path.best].bic <= c.bic);
            CHECK(c.bic == bic(c.refit.rss, 12, c.selected.size()));
            CHECK(c.selected == c.refit.effects);
            CHECK(std::is_sorted(c.selected.begin(), c.selected.end()));
        }
    }
}

TEST_CASE("selection does not depend on column order")
{
    const auto d = oracle::cast_fatigue_design();
    const auto y = oracle::cast_fatigue_response();
    std::mt19937_64 rng(12);
    const auto base = gds_effects(d, all_effects(7), y).active_effects;
    for (int rep = 0; rep < 10; ++rep) {
        auto effects = all_effects(7);
        std::shuffle(effects.begin(), effects.end(), rng);
        CHECK(gds_effects(d, effects, y).active_effects == base);
    }
}

TEST_CASE("pure noise gives small models")
{
    std::mt19937_64 rng(13);
    std::normal_distribution<double> z;
    std::size_t total = 0;
    for (int rep = 0; rep < 20; ++rep) {
        const auto d = oracle::random_orthogonal_design(rng, 16, 8);
        std::vector<double> y(16);
        for (auto& v : y) v = z(rng);
        total += gds_main_effects(d, y).active_effects.size();
    }
    // on average well under half of the eight candidates
    CHECK(total < 20 * 4);
}
