#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "gdsarm/dantzig.hpp"
#include "gdsarm/error.hpp"
#include "gdsarm/simplex.hpp"
#include "oracles.hpp"

using namespace gdsarm;

namespace {

struct TinyLp {
    std::vector<double> c;
    oracle::Matrix a;
    std::vector<double> b;
};

/// Random bounded LP: a box row sum(x) <= 10 keeps the feasible set bounded.
TinyLp random_lp(std::mt19937_64& rng, std::size_t vars, std::size_t rows)
{
    std::uniform_int_distribution<int> coef(-4, 4);
    TinyLp lp;
    for (std::size_t j = 0; j < vars; ++j) lp.c.push_back(coef(rng));
    for (std::size_t i = 0; i + 1 < rows; ++i) {
        std::vector<double> row;
        for (std::size_t j = 0; j < vars; ++j) row.push_back(coef(rng));
        lp.a.push_back(row);
        lp.b.push_back(coef(rng) + 1);
    }
    lp.a.push_back(std::vector<double>(vars, 1.0));
    lp.b.push_back(10);
    return lp;
}

Eigen::MatrixXd to_eigen(const oracle::Matrix& a)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(a[0].size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[i][j];
    }
    return m;
}

ModelMatrix orthogonal_instance(std::mt19937_64& rng, std::size_t n, std::size_t p)
{
    const auto d = oracle::random_orthogonal_design(rng, n, p);
    std::normal_distribution<double> z;
    std::vector<double> y(n);
    for (auto& v : y) v = 3 * z(rng);
    return build_model_matrix(d, main_effects(p), y);
}

} // namespace

TEST_CASE("lp basics")
{
    Eigen::MatrixXd a(1, 1);
    a << -1;
    const std::vector<double> c{1}, b{-3};
    const auto r = lp_solve(c, a, b);
    REQUIRE(r.status == LpStatus::optimal);
    CHECK(r.x[0] == doctest::Approx(3));

    const std::vector<double> neg{-1};
    const std::vector<double> loose{5};
    Eigen::MatrixXd up(1, 1);
    up << -1;
    CHECK(lp_solve(neg, up, loose).status == LpStatus::unbounded);

    Eigen::MatrixXd infeas(2, 1);
    infeas << 1, -1;
    const std::vector<double> ib{1, -2};
    CHECK(lp_solve(c, infeas, ib).status == LpStatus::infeasible);

    CHECK(to_string(LpStatus::iteration_limit) == "iteration-limit");
}

TEST_CASE("degenerate lp terminates")
{
    // Beale's cycling example (with a bounding row) and redundant copies.
    Eigen::MatrixXd a(4, 4);
    a << 0.25, -60, -0.04, 9,
         0.5, -90, -0.02, 3,
         0, 0, 1, 0,
         0.25, -60, -0.04, 9;
    const std::vector<double> b{0, 0, 1, 0};
    const std::vector<double> c{-0.75, 150, -0.02, 6};
    for (bool bland : {false, true}) {
        LpOptions o;
        o.bland_only = bland;
        o.degenerate_before_bland = 0;
        const auto r = lp_solve(c, a, b, o);
        REQUIRE(r.status == LpStatus::optimal);
        CHECK(r.objective == doctest::Approx(-0.05));
    }
}

TEST_CASE("lp matches vertex enumeration")
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> size(1, 6);
    int infeasible = 0;
    for (int rep = 0; rep < 300; ++rep) {
        const auto lp = random_lp(rng, size(rng), size(rng));
        const auto ref = oracle::vertex_enumeration(lp.c, lp.a, lp.b);
        const auto r = lp_solve(lp.c, to_eigen(lp.a), lp.b);
        if (!ref.feasible) {
            ++infeasible;
            CHECK(r.status == LpStatus::infeasible);
            continue;
        }
        REQUIRE(r.status == LpStatus::optimal);
        CHECK(std::abs(r.objective - ref.objective) < 1e-6);
        const auto bmax = std::abs(*std::max_element(lp.b.begin(), lp.b.end(), [](double l, double r) { return std::abs(l) < std::abs(r); }));
        for (std::size_t i = 0; i < lp.b.size(); ++i) {
            double lhs = 0;
            for (std::size_t j = 0; j < lp.c.size(); ++j) lhs += lp.a[i][j] * r.x[j];
            CHECK(lhs <= lp.b[i] + 1e-8 * (1 + bmax));
        }
        for (double v : r.x) CHECK(v >= 0);
    }
    CHECK(infeasible > 0);
}

TEST_CASE("delta grid")
{
    std::mt19937_64 rng(3);
    const auto mm = orthogonal_instance(rng, 12, 5);
    const double dmax = (mm.columns.transpose() * mm.y).cwiseAbs().maxCoeff();
    const auto g = delta_grid(mm);
    REQUIRE(g.size() == 10);
    for (int k = 0; k < 10; ++k) CHECK(g[static_cast<std::size_t>(k)] == doctest::Approx((k + 1) * dmax / 11));
    CHECK(g.front() > 0);
    CHECK(g.back() < dmax);

    auto flat = mm;
    flat.y.setZero();
    CHECK_THROWS_WITH_AS(delta_grid(flat), "constant response", ValidationError);
}

TEST_CASE("dantzig on orthogonal designs")
{
    std::mt19937_64 rng(21);
    for (std::size_t n : {8, 12, 16}) {
        for (int rep = 0; rep < 10; ++rep) {
            std::uniform_int_distribution<std::size_t> ps(2, n - 1);
            const auto mm = orthogonal_instance(rng, n, ps(rng));
            const Eigen::VectorXd b = mm.columns.transpose() * mm.y;
            for (double frac : {0.0, 0.2, 0.5, 0.9, 1.0, 1.3}) {
                const double delta = frac * b.cwiseAbs().maxCoeff();
                const auto s = dantzig_select(mm, delta);
                REQUIRE(s.ok());
                const auto ref = orthogonal_dantzig_oracle(mm, delta);
                CHECK((s.beta - ref).cwiseAbs().maxCoeff() < 1e-6);
                CHECK(correlation_residual(mm, s.beta) <= delta + 1e-7);
                for (Eigen::Index j = 0; j < b.size(); ++j) CHECK(s.beta(j) * b(j) >= 0);
                if (frac >= 1.0) CHECK(s.beta.isZero());
            }
        }
    }
}

TEST_CASE("orthogonal oracle")
{
    std::mt19937_64 rng(4);
    const auto mm = orthogonal_instance(rng, 12, 4);
    const Eigen::VectorXd b = mm.columns.transpose() * mm.y;
    CHECK((orthogonal_dantzig_oracle(mm, 0) - b / 11).cwiseAbs().maxCoeff() < 1e-12);
    // b_j = 5, delta = 2, n - 1 = 11
    auto scaled = mm;
    scaled.y = mm.columns.col(0) * (5.0 / 11.0);
    CHECK(orthogonal_dantzig_oracle(scaled, 2)(0) == doctest::Approx(3.0 / 11.0));
    CHECK(orthogonal_dantzig_oracle(scaled, 2)(1) == doctest::Approx(0.0));

    const auto d = oracle::cast_fatigue_design();
    const auto y = oracle::cast_fatigue_response();
    const auto inter = build_model_matrix(d, all_effects(7), y);
    CHECK_THROWS_AS(orthogonal_dantzig_oracle(inter, 0.1), ValidationError);
}

TEST_CASE("dantzig matches vertex enumeration on tiny instances")
{
    std::mt19937_64 rng(8);
    std::normal_distribution<double> z;
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t p = 1 + rep % 3;
        Eigen::MatrixXd raw(6, static_cast<Eigen::Index>(p));
        for (Eigen::Index i = 0; i < raw.size(); ++i) raw(i) = z(rng);
        std::vector<double> y(6);
        for (auto& v : y) v = z(rng);
        const auto mm = normalize_columns(raw, main_effects(p), y);
        const Eigen::MatrixXd g = mm.columns.transpose() * mm.columns;
        const Eigen::VectorXd b = mm.columns.transpose() * mm.y;
        const double delta = 0.3 * b.cwiseAbs().maxCoeff();
        oracle::Matrix a(2 * p, std::vector<double>(2 * p));
        std::vector<double> rhs(2 * p), c(2 * p, 1.0);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t j = 0; j < p; ++j) {
                const double gij = g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                a[i][j] = gij;
                a[i][j + p] = -gij;
                a[i + p][j] = -gij;
                a[i + p][j + p] = gij;
            }
            rhs[i] = delta + b(static_cast<Eigen::Index>(i));
            rhs[i + p] = delta - b(static_cast<Eigen::Index>(i));
        }
        // a bounding row so the oracle's vertex set is finite
        a.push_back(std::vector<double>(2 * p, 1.0));
        rhs.push_back(1e6);
        const auto ref = oracle::vertex_enumeration(c, a, rhs);
        const auto s = dantzig_select(mm, delta);
        REQUIRE(ref.feasible);
        REQUIRE(s.ok());
        CHECK(std::abs(s.beta.lpNorm<1>() - ref.objective) < 1e-6);
    }
}

TEST_CASE("l1 norm shrinks along the grid and the path agrees with single solves")
{
    const auto d = oracle::cast_fatigue_design();
    const auto y = oracle::cast_fatigue_response();
    const auto mm = build_model_matrix(d, all_effects(7), y);
    const auto grid = delta_grid(mm);
    const auto path = dantzig_path(mm, grid);
    REQUIRE(path.size() == grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        REQUIRE(path[k].ok());
        CHECK(path[k].delta == grid[k]);
        CHECK(path[k].feasible);
        const auto single = dantzig_select(mm, grid[k]);
        CHECK(std::abs(single.beta.lpNorm<1>() - path[k].beta.lpNorm<1>()) < 1e-8);
        if (k > 0) CHECK(path[k - 1].beta.lpNorm<1>() >= path[k].beta.lpNorm<1>() - 1e-9);
        for (Eigen::Index j = 0; j < path[k].beta.size(); ++j) {
            CHECK((path[k].beta(j) == 0.0 || std::abs(path[k].beta(j)) >= 1e-9));
        }
    }
    CHECK_THROWS_AS(dantzig_select(mm, -1), ValidationError);
}

TEST_CASE("iteration limit is reported")
{
    const auto d = oracle::cast_fatigue_design();
    const auto y = oracle::cast_fatigue_response();
    const auto mm = build_model_matrix(d, all_effects(7), y);
    LpOptions o;
    o.max_pivots = 1;
    const auto g = delta_grid(mm);
    const auto s = dantzig_select(mm, g[9], o);
    CHECK(s.lp_status == LpStatus::iteration_limit);
    CHECK(s.feasible == (correlation_residual(mm, s.beta) <= g[9] + 1e-7));
}
