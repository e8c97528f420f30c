#include <catch2/catch_amalgamated.hpp>

#include "footrule/direction.hpp"

using footrule::Direction;

TEST_CASE("Direction construction and index sets", "[direction]") {
    const auto alpha = Direction::parse("-++-");
    CHECK(alpha.dim() == 4);
    CHECK(alpha.negative_count() == 2);
    CHECK(alpha.positive_count() == 2);
    CHECK(alpha.negative_indices() == std::vector<int>{0, 3});
    CHECK(alpha.positive_indices() == std::vector<int>{1, 2});
    CHECK(alpha.str() == "-++-");
    CHECK(alpha.negated() == Direction::parse("+--+"));

    CHECK_THROWS_AS(Direction::parse("+"), std::invalid_argument);
    CHECK_THROWS_AS(Direction::parse("+x-"), std::invalid_argument);
    CHECK_THROWS_AS(Direction({1, 0, -1}), std::invalid_argument);
}

TEST_CASE("Direction enumeration is sign-string ordered and complete", "[direction]") {
    const auto all = Direction::enumerate(3);
    REQUIRE(all.size() == 8);
    CHECK(all.front().str() == "+++");
    CHECK(all.back().str() == "---");
    for (std::size_t i = 1; i < all.size(); ++i)
        CHECK(all[i - 1].str() < all[i].str());
}
