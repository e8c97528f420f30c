#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "footrule/copulas.hpp"

using namespace footrule;

namespace {

std::vector<double> pt(std::initializer_list<double> v) { return std::vector<double>(v); }

/// Evaluate two evaluators over an interior grid and return the largest gap.
double max_grid_gap(const CopulaEvaluator& a, const CopulaEvaluator& b, int res = 7) {
    const int d = a.dim();
    REQUIRE(b.dim() == d);
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> u(static_cast<std::size_t>(d));
    double worst = 0.0;
    for (;;) {
        for (int i = 0; i < d; ++i) u[static_cast<std::size_t>(i)] = (idx[static_cast<std::size_t>(i)] + 1.0) / (res + 1.0);
        worst = std::max(worst, std::abs(a(u) - b(u)));
        int i = 0;
        while (i < d && ++idx[static_cast<std::size_t>(i)] == res) idx[static_cast<std::size_t>(i++)] = 0;
        if (i == d) break;
    }
    return worst;
}

} // namespace

TEST_CASE("model validation", "[copulas]") {
    CHECK_THROWS_AS(CopulaModel::clayton(3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CopulaModel::fgm(3, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(CopulaModel::cuadras_auge(3, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(CopulaModel::independence(1), std::invalid_argument);
    CHECK_NOTHROW(CopulaModel::countermonotone());
}

TEST_CASE("cdf closed forms", "[copulas]") {
    CHECK(cdf(CopulaModel::comonotone(3), pt({0.3, 0.7, 0.5})) == 0.3);
    CHECK(cdf(CopulaModel::independence(3), pt({0.5, 0.5, 0.5})) == 0.125);
    CHECK(std::abs(cdf(CopulaModel::clayton(2, 1.0), pt({0.5, 0.5})) - 1.0 / 3.0) < 1e-15);
    CHECK(std::abs(cdf(CopulaModel::fgm(2, 1.0), pt({0.5, 0.5})) - 0.3125) < 1e-15);
    CHECK(cdf(CopulaModel::countermonotone(), pt({0.3, 0.5})) == 0.0);
    CHECK(std::abs(cdf(CopulaModel::countermonotone(), pt({0.7, 0.5})) - 0.2) < 1e-15);

    CHECK_THROWS_AS(cdf(CopulaModel::independence(3), pt({0.5, 0.5})), std::invalid_argument);
    CHECK_THROWS_AS(cdf(CopulaModel::independence(2), pt({0.5, 1.5})), std::invalid_argument);
}

TEST_CASE("grounded and uniform margins for every family", "[copulas]") {
    const std::vector<CopulaModel> models = {
        CopulaModel::independence(3), CopulaModel::comonotone(3),
        CopulaModel::countermonotone(), CopulaModel::fgm(3, 0.7),
        CopulaModel::clayton(3, 2.0),  CopulaModel::cuadras_auge(3, 0.4),
    };
    for (const auto& m : models) {
        const int d = m.dim;
        for (int axis = 0; axis < d; ++axis) {
            for (double v : {0.0, 0.25, 0.6, 1.0}) {
                std::vector<double> zeroed(static_cast<std::size_t>(d), v);
                zeroed[static_cast<std::size_t>(axis)] = 0.0;
                CHECK(cdf(m, zeroed) == 0.0);
                std::vector<double> margin(static_cast<std::size_t>(d), 1.0);
                margin[static_cast<std::size_t>(axis)] = v;
                CHECK(std::abs(cdf(m, margin) - v) < 1e-15);
            }
        }
    }
}

TEST_CASE("marginal diagonals", "[copulas]") {
    CHECK(std::abs(marginal_diagonal(CopulaModel::cuadras_auge(4, 0.4), 4, 0.5) -
                   std::pow(0.5, 2.8)) < 1e-15);
    CHECK(marginal_diagonal(CopulaModel::clayton(5, 2.0), 0, 0.7) == 1.0);
    CHECK(marginal_diagonal(CopulaModel::fgm(4, 0.9), 1, 0.42) == 0.42);
    CHECK(marginal_diagonal(CopulaModel::clayton(3, 2.0), 3, 0.0) == 0.0);

    // Index-set overload validates and keys by size.
    const auto m = CopulaModel::clayton(4, 1.5);
    const std::vector<int> subset{0, 2};
    CHECK(marginal_diagonal(m, subset, 0.3) == marginal_diagonal(m, 2, 0.3));
    const std::vector<int> repeated{1, 1};
    CHECK_THROWS_AS(marginal_diagonal(m, repeated, 0.3), std::invalid_argument);
}

TEST_CASE("marginal diagonal equals the full cdf with ones plugged in", "[copulas]") {
    const std::vector<CopulaModel> models = {
        CopulaModel::independence(4), CopulaModel::comonotone(4), CopulaModel::fgm(4, -0.8),
        CopulaModel::clayton(4, 0.7), CopulaModel::cuadras_auge(4, 0.6),
    };
    for (const auto& m : models) {
        for (int size = 0; size <= m.dim; ++size) {
            for (double u : {0.05, 0.3, 0.55, 0.8, 1.0}) {
                std::vector<double> point(static_cast<std::size_t>(m.dim), 1.0);
                for (int i = 0; i < size; ++i) point[static_cast<std::size_t>(i)] = u;
                CHECK(std::abs(marginal_diagonal(m, size, u) - cdf(m, point)) < 1e-14);
            }
        }
    }
}

TEST_CASE("survival cdf", "[copulas]") {
    CHECK(std::abs(survival_cdf(CopulaModel::independence(2), pt({0.5, 0.5})) - 0.25) < 1e-15);
    for (double t : {0.1, 0.4, 0.9})
        CHECK(std::abs(survival_cdf(CopulaModel::comonotone(3), pt({t, t, t})) - t) < 1e-15);
    // The countermonotone pair is radially symmetric.
    for (double a : {0.2, 0.5, 0.8})
        for (double b : {0.3, 0.6, 0.95})
            CHECK(std::abs(survival_cdf(CopulaModel::countermonotone(), pt({a, b})) -
                           std::max(a + b - 1.0, 0.0)) < 1e-14);

    const auto m = CopulaModel::clayton(3, 2.0);
    CHECK(std::abs(survival_cdf(m, pt({1.0, 1.0, 1.0})) - 1.0) < 1e-14);
    CHECK(survival_cdf(m, pt({0.0, 0.0, 0.0})) == 0.0);
}

TEST_CASE("reflection identities", "[copulas]") {
    const auto pi3 = make_evaluator(CopulaModel::independence(3));
    CHECK(max_grid_gap(reflect(pi3, {0, 2}), pi3) < 1e-14);

    // Flipping k coordinates of an FGM model negates lambda k times.
    for (const auto& flip : {std::vector<int>{0}, std::vector<int>{1, 2}, std::vector<int>{0, 1, 2}}) {
        const double lambda = 0.6;
        const double flipped = (flip.size() % 2 == 0) ? lambda : -lambda;
        const auto lhs = reflect(make_evaluator(CopulaModel::fgm(3, lambda)), flip);
        const auto rhs = make_evaluator(CopulaModel::fgm(3, flipped));
        CHECK(max_grid_gap(lhs, rhs) < 1e-14);
    }

    // Involution and empty-set identity.
    const auto clayton = make_evaluator(CopulaModel::clayton(3, 2.0));
    CHECK(max_grid_gap(reflect(reflect(clayton, {0, 1}), {0, 1}), clayton) < 1e-13);
    CHECK(max_grid_gap(reflect(clayton, {}), clayton) == 0.0);

    // Reflecting every coordinate gives the survival copula.
    const auto m = CopulaModel::clayton(3, 2.0);
    const auto full = reflect(make_evaluator(m), {0, 1, 2});
    CHECK(max_grid_gap(full, survival_evaluator(m)) < 1e-13);

    CHECK_THROWS_AS(reflect(clayton, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(reflect(clayton, {5}), std::invalid_argument);
}

TEST_CASE("c-volume", "[copulas]") {
    const auto pi2 = make_evaluator(CopulaModel::independence(2));
    CHECK(std::abs(c_volume(pi2, Box(pt({0.0, 0.0}), pt({0.5, 0.5}))) - 0.25) < 1e-15);
    const auto m2 = make_evaluator(CopulaModel::comonotone(2));
    CHECK(c_volume(m2, Box(pt({0.0, 0.5}), pt({0.5, 1.0}))) == 0.0);
    CHECK(c_volume(m2, Box(pt({0.3, 0.4}), pt({0.3, 0.4}))) == 0.0);

    // Additivity over a partition.
    const auto clayton = make_evaluator(CopulaModel::clayton(2, 3.0));
    const double whole = c_volume(clayton, Box(pt({0.1, 0.2}), pt({0.9, 0.8})));
    double parts = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double x0 = 0.1 + 0.8 * i / 4, x1 = 0.1 + 0.8 * (i + 1) / 4;
            const double y0 = 0.2 + 0.6 * j / 4, y1 = 0.2 + 0.6 * (j + 1) / 4;
            parts += c_volume(clayton, Box(pt({x0, y0}), pt({x1, y1})));
        }
    CHECK(std::abs(whole - parts) < 1e-13);

    CHECK_THROWS_AS(Box(pt({0.5, 0.5}), pt({0.4, 0.6})), std::invalid_argument);
}

TEST_CASE("validate_copula accepts real families", "[copulas]") {
    auto report = validate_copula(make_evaluator(CopulaModel::clayton(3, 2.0)), 8);
    CHECK(report.passed());
    CHECK(report.worst < 1e-12);

    auto reflected = validate_copula(reflect(make_evaluator(CopulaModel::clayton(3, 2.0)), {0}), 8,
                                     1e-10);
    CHECK(reflected.passed());
}

TEST_CASE("validate_copula flags an out-of-range density", "[copulas]") {
    // FGM form with lambda = 3: not a copula, the mass goes negative.
    CopulaEvaluator bad(2, EvaluatorKind::custom, [](std::span<const double> u) {
        return u[0] * u[1] * (1.0 + 3.0 * (1.0 - u[0]) * (1.0 - u[1]));
    });
    auto report = validate_copula(bad, 8);
    CHECK_FALSE(report.passed());
    bool negative_cell = false;
    for (const auto& v : report.violations)
        negative_cell |= v.kind == CopulaViolation::Kind::negative_volume;
    CHECK(negative_cell);
}

TEST_CASE("reflected evaluations stay in range and validate", "[copulas]") {
    const auto base = make_evaluator(CopulaModel::cuadras_auge(3, 0.5));
    const auto refl = reflect(base, {1});
    std::vector<double> u(3);
    for (double a : {0.0, 0.3, 0.7, 1.0})
        for (double b : {0.0, 0.4, 1.0})
            for (double c : {0.0, 0.5, 0.9, 1.0}) {
                u = {a, b, c};
                const double v = refl(u);
                CHECK(v >= -1e-12);
                CHECK(v <= 1.0 + 1e-12);
            }
    CHECK(validate_copula(refl, 6, 1e-10).passed());
}
