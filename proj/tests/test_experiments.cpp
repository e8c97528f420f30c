#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "footrule/experiments.hpp"

using namespace footrule;

TEST_CASE("independence cells center on zero", "[experiments]") {
    ExperimentConfig config{CopulaModel::independence(4),
                            {Direction::parse("-++-"), Direction::parse("++++")},
                            {500},
                            400,
                            1234,
                            0};
    const auto stats = run_experiment(config);
    REQUIRE(stats.size() == 2);
    for (const auto& s : stats) CHECK(s.exact.value == 0.0);
    // Mixed directions: negligible finite-n shift, plain 3-sigma check.
    CHECK(std::abs(stats[0].mean) <=
          3.0 * stats[0].sd / std::sqrt(static_cast<double>(stats[0].replications)));
    // Extreme directions carry a +1/(n+1) finite-n shift; the band absorbs it.
    CHECK(std::abs(stats[1].mean) <= acceptance_band(stats[1].sd, stats[1].replications));
    CHECK(stats[1].mean > 0.0);
}

TEST_CASE("summary identities", "[experiments]") {
    ExperimentConfig config{CopulaModel::clayton(3, 2.0),
                            {Direction::parse("---")},
                            {50, 200},
                            150,
                            99,
                            0};
    const auto stats = run_experiment(config);
    REQUIRE(stats.size() == 2);
    for (const auto& s : stats) {
        const double r = static_cast<double>(s.replications);
        // rmse^2 = bias^2 + variance (R-1)/R, computed from independent passes.
        CHECK(std::abs(s.rmse * s.rmse - (s.bias * s.bias + s.sd * s.sd * (r - 1.0) / r)) < 1e-12);
        CHECK(s.min <= s.q25);
        CHECK(s.q25 <= s.median);
        CHECK(s.median <= s.q75);
        CHECK(s.q75 <= s.max);
        CHECK(s.bias == s.mean - s.exact.value);
    }
    // Larger samples concentrate.
    CHECK(stats[1].sd < stats[0].sd);
}

TEST_CASE("thread count never changes the report", "[experiments]") {
    auto run = [](int threads) {
        ExperimentConfig config{CopulaModel::cuadras_auge(3, 0.5),
                                {},   // all directions
                                {30, 60},
                                64,
                                4242,
                                threads};
        return report_csv(make_report(config.model, run_experiment(config)));
    };
    const std::string serial = run(1);
    CHECK(serial == run(3));
    CHECK(serial == run(8));
}

TEST_CASE("replication streams are reproducible and distinct", "[experiments]") {
    ExperimentConfig config{CopulaModel::clayton(2, 1.0), {Direction::parse("--")}, {40}, 32, 7, 0};
    const auto once = run_experiment(config);
    const auto twice = run_experiment(config);
    CHECK(once[0].mean == twice[0].mean);
    CHECK(once[0].sd > 0.0);   // distinct replications actually vary

    config.master_seed = 8;
    CHECK(run_experiment(config)[0].mean != once[0].mean);
}

TEST_CASE("report CSV shape", "[experiments]") {
    ExperimentConfig config{CopulaModel::fgm(2, 1.0), {Direction::parse("++")}, {25}, 20, 5, 0};
    const auto rows = make_report(config.model, run_experiment(config));
    const std::string csv = report_csv(rows);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == report_csv_header());
    std::getline(in, line);
    CHECK(line.rfind("fgm,1,2,++,25,20,", 0) == 0);
    std::size_t commas = 0;
    for (char c : line) commas += c == ',';
    CHECK(commas == 16);
}

TEST_CASE("published-table grids have the right shape", "[experiments]") {
    // Tiny replication counts: structural checks only.
    const auto t1 = reproduce_table(StudyTable::t1, 1, 0, 8);
    CHECK(t1.rows.size() == 8);
    for (const auto& row : t1.rows) {
        CHECK(row.n == 500);
        CHECK(row.paper_ref_value.has_value());
        CHECK(row.d == 3);
    }

    const auto t3 = reproduce_table(StudyTable::t3, 1, 0, 4);
    CHECK(t3.rows.size() == 20);
    for (const auto& row : t3.rows) CHECK(row.alpha == "-++-");

    const auto t6 = reproduce_table(StudyTable::t6, 1, 0, 4);
    CHECK(t6.rows.size() == 32);

    CHECK(table_from_name("T4") == StudyTable::t4);
    CHECK(table_from_name("t6") == StudyTable::t6);
    CHECK_FALSE(table_from_name("T2").has_value());
}

TEST_CASE("convergence study shrinks with n", "[experiments]") {
    const auto stats = convergence_study(CopulaModel::cuadras_auge(3, 0.8),
                                         Direction::all_positive(3), {20, 100, 400}, 300, 2718);
    REQUIRE(stats.size() == 3);
    CHECK(stats[0].sd > stats[1].sd);
    CHECK(stats[1].sd > stats[2].sd);
    CHECK(std::abs(stats[2].median - stats[2].exact.value) < 0.05);
}

TEST_CASE("exact parameter sweeps", "[experiments]") {
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    const auto points = theta_sweep(Family::cuadras_auge, 4, grid);
    CHECK(points.size() == grid.size() * 5);   // one direction per reversed-count class
    for (const auto& p : points)
        if (p.theta == 0.0) CHECK(p.value.value == 0.0);

    // Clayton extreme-direction curves are nonnegative and nondecreasing.
    std::vector<double> thetas;
    for (int i = 0; i < 12; ++i) thetas.push_back(0.1 + i * (9.9 / 11.0));
    for (const auto& alpha : {Direction::all_positive(4), Direction::all_negative(4)}) {
        double previous = -1.0;
        for (double theta : thetas) {
            const double value =
                phi_dir(CopulaModel::clayton(4, theta), alpha).value;
            CHECK(value >= 0.0);
            CHECK(value >= previous - 1e-9);
            previous = value;
        }
    }

    const std::string csv = sweep_csv(Family::cuadras_auge, 4, points);
    CHECK(csv.rfind("family,theta,d,alpha,value,method,abs_error\n", 0) == 0);
}

TEST_CASE("singular-family extreme directions converge slowly but surely", "[experiments]") {
    // At the extreme directions of a family with a singular component the
    // rank estimate is consistent but its bias decays like 1/sqrt(n): on
    // shock-tied rows the column-wise minimum rank picks the most negative
    // of d independent empirical-CDF fluctuations.
    const auto model = CopulaModel::cuadras_auge(4, 0.4);
    const double exact = phi_dir(model, Direction::all_positive(4)).value;
    CHECK(std::abs(exact - 0.40283) < 1e-5);
    auto mean_at = [&](std::size_t n, std::size_t reps) {
        double sum = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            RngStream rng(606, r);
            sum += phi_hat(ranks(sample_model(model, n, rng)), Direction::all_positive(4)).value;
        }
        return sum / static_cast<double>(reps);
    };
    const double bias_small = mean_at(500, 300) - exact;
    const double bias_large = mean_at(8000, 60) - exact;
    CHECK(bias_small < -0.01);   // clearly visible at n=500
    CHECK(bias_large < 0.0);
    CHECK(std::abs(bias_large) < 0.5 * std::abs(bias_small));
}

TEST_CASE("acceptance band", "[experiments]") {
    CHECK(acceptance_band(0.0, 1000) == 0.01);
    CHECK(std::abs(acceptance_band(0.5, 400) - 0.1) < 1e-15);
}

TEST_CASE("config validation", "[experiments]") {
    ExperimentConfig bad{CopulaModel::independence(3), {Direction::parse("++")}, {10}, 5, 1, 0};
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
    ExperimentConfig tiny{CopulaModel::independence(3), {}, {1}, 5, 1, 0};
    CHECK_THROWS_AS(run_experiment(tiny), std::invalid_argument);
}
