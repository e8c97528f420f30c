#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "footrule/coefficients.hpp"
#include "footrule/csv.hpp"
#include "footrule/dataset.hpp"
#include "footrule/direction.hpp"

namespace footrule {

enum class TiePolicy { first_occurrence, strict };

class TieError : public std::runtime_error {
public:
    TieError(std::size_t column, std::size_t row_a, std::size_t row_b)
        : std::runtime_error("tie in column " + std::to_string(column + 1) + " between rows " +
                             std::to_string(row_a + 1) + " and " + std::to_string(row_b + 1)),
          column(column), row_a(row_a), row_b(row_b) {}

    std::size_t column, row_a, row_b;   // 0-based
};

/// Column-wise ranks of a dataset, 1 = smallest. Each column is a
/// permutation of 1..n.
struct RankMatrix {
    std::size_t n = 0, d = 0;
    std::vector<std::int32_t> ranks;   // row-major n x d
    bool had_ties = false;

    std::int32_t at(std::size_t row, std::size_t col) const { return ranks[row * d + col]; }
    std::int32_t& at(std::size_t row, std::size_t col) { return ranks[row * d + col]; }
};

/// Rank every column. Ties keep input order under first_occurrence and are
/// an error under strict.
inline RankMatrix ranks(const Dataset& data, TiePolicy policy = TiePolicy::first_occurrence) {
    const std::size_t n = data.rows();
    const std::size_t d = data.cols();
    if (n < 2) throw std::invalid_argument("ranks: need at least two rows");
    RankMatrix rm;
    rm.n = n;
    rm.d = d;
    rm.ranks.resize(n * d);
    std::vector<std::size_t> order(n);
    for (std::size_t col = 0; col < d; ++col) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return data.at(a, col) < data.at(b, col);
        });
        for (std::size_t pos = 0; pos + 1 < n; ++pos) {
            if (data.at(order[pos], col) == data.at(order[pos + 1], col)) {
                if (policy == TiePolicy::strict)
                    throw TieError(col, order[pos], order[pos + 1]);
                rm.had_ties = true;
            }
        }
        for (std::size_t pos = 0; pos < n; ++pos)
            rm.at(order[pos], col) = static_cast<std::int32_t>(pos + 1);
    }
    return rm;
}

struct EstimateValue {
    double value = 0.0;
    Direction alpha;
    std::size_t n = 0;
};

namespace detail {

inline void check_rank_alpha(const RankMatrix& rm, const Direction& alpha) {
    if (static_cast<std::size_t>(alpha.dim()) != rm.d)
        throw std::invalid_argument("estimator: direction dimension mismatch");
}

/// Per-row gap (min over J of R) - (max over I of R), clamped at 0, with the
/// empty-set conventions min = n+1 and max = 0. The gaps over all 2^d
/// directions partition [0, n+1] row by row, which is what makes the
/// direction sum cancel exactly.
inline std::int64_t gap_sum(const RankMatrix& rm, const Direction& alpha) {
    const auto n1 = static_cast<std::int64_t>(rm.n) + 1;
    std::int64_t total = 0;
    for (std::size_t row = 0; row < rm.n; ++row) {
        std::int64_t lo = 0, hi = n1;
        for (std::size_t col = 0; col < rm.d; ++col) {
            const std::int64_t r = rm.at(row, col);
            if (alpha.is_negative(static_cast<int>(col))) lo = std::max(lo, r);
            else hi = std::min(hi, r);
        }
        if (hi > lo) total += hi - lo;
    }
    return total;
}

/// Downward-index estimate on a column subset, computed on reversed ranks
/// n+1-R. Requires at least two columns in the subset.
inline double phi_minus_subset(const RankMatrix& rm, std::span<const int> cols) {
    const int m = static_cast<int>(cols.size());
    const auto n = static_cast<double>(rm.n);
    const auto n1 = static_cast<std::int64_t>(rm.n) + 1;
    std::int64_t total = 0;
    for (std::size_t row = 0; row < rm.n; ++row) {
        std::int64_t mn = n1;
        for (int c : cols)
            mn = std::min<std::int64_t>(mn, n1 - rm.at(row, static_cast<std::size_t>(c)));
        total += mn;
    }
    return (2.0 * (m + 1) * static_cast<double>(total) - 2.0 * n * static_cast<double>(n1)) /
           ((m - 1) * n * static_cast<double>(n1));
}

} // namespace detail

/// Rank-based directional estimate. The row gaps are summed in integers;
/// the arrangement below makes the comonotone extremes come out exactly 1.
inline EstimateValue phi_hat(const RankMatrix& rm, const Direction& alpha) {
    detail::check_rank_alpha(rm, alpha);
    const int d = static_cast<int>(rm.d);
    detail::check_dim(d);
    const auto n = static_cast<double>(rm.n);
    const double n1 = n + 1.0;
    const std::int64_t gaps = detail::gap_sum(rm, alpha);
    const double b = detail::binomial(d, alpha.positive_count());
    const double value = (2.0 * (d + 1) * static_cast<double>(gaps) - 2.0 * n * n1 / b) /
                         ((d - 1) * n * n1);
    return {value, alpha, rm.n};
}

/// All 2^d directional estimates in sign-string order.
inline std::vector<EstimateValue> phi_hat_all(const RankMatrix& rm) {
    const int d = static_cast<int>(rm.d);
    detail::check_dim(d);
    std::vector<EstimateValue> out;
    out.reserve(std::size_t{1} << d);
    for (const auto& alpha : Direction::enumerate(d)) out.push_back(phi_hat(rm, alpha));
    return out;
}

/// Directional empirical copula at a point: the fraction (out of n+1) of
/// pseudo-observations R/(n+1) lying in the orthant oriented by alpha.
inline double empirical_dir_copula(const RankMatrix& rm, const Direction& alpha,
                                   std::span<const double> u) {
    detail::check_rank_alpha(rm, alpha);
    if (u.size() != rm.d)
        throw std::invalid_argument("empirical_dir_copula: point dimension mismatch");
    for (double v : u)
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("empirical_dir_copula: coordinates must lie in [0, 1]");
    const double n1 = static_cast<double>(rm.n) + 1.0;
    std::size_t count = 0;
    for (std::size_t row = 0; row < rm.n; ++row) {
        bool inside = true;
        for (std::size_t col = 0; col < rm.d && inside; ++col) {
            const double pseudo = rm.at(row, col) / n1;
            inside = alpha.is_negative(static_cast<int>(col)) ? (pseudo >= u[col])
                                                              : (pseudo <= u[col]);
        }
        count += inside;
    }
    return static_cast<double>(count) / n1;
}

/// Directional estimate through the empirical-process identity: integrate
/// the reversed-direction empirical copula along the diagonal. The diagonal
/// is a step function with knots at t/(n+1), so a counting sweep over the
/// integer knots gives the integral exactly.
inline EstimateValue phi_hat_via_process(const RankMatrix& rm, const Direction& alpha) {
    detail::check_rank_alpha(rm, alpha);
    const int d = static_cast<int>(rm.d);
    detail::check_dim(d);
    const std::size_t n = rm.n;
    const auto n1 = static_cast<std::int64_t>(n) + 1;

    // Row `row` contributes to the level on (t/(n+1), (t+1)/(n+1)) exactly
    // when max_I R <= t < min_J R.
    std::vector<std::int64_t> delta(n + 2, 0);
    for (std::size_t row = 0; row < n; ++row) {
        std::int64_t lo = 0, hi = n1;
        for (std::size_t col = 0; col < rm.d; ++col) {
            const std::int64_t r = rm.at(row, col);
            if (alpha.is_negative(static_cast<int>(col))) lo = std::max(lo, r);
            else hi = std::min(hi, r);
        }
        if (hi > lo) {
            ++delta[static_cast<std::size_t>(lo)];
            --delta[static_cast<std::size_t>(hi)];
        }
    }
    std::int64_t level = 0, area_units = 0;
    for (std::size_t t = 0; t <= n; ++t) {
        level += delta[t];
        area_units += level;
    }
    const double nn = static_cast<double>(n);
    const double integral = static_cast<double>(area_units) /
                            (static_cast<double>(n1) * static_cast<double>(n1));
    const double pref = 2.0 * (d + 1) * static_cast<double>(n1) / ((d - 1) * nn);
    const double value =
        pref * integral - detail::mixed_constant(d, alpha.positive_count());
    return {value, alpha, n};
}

/// Directional estimate as the alternating combination of downward-index
/// estimates on column subsets; mirrors the population decomposition, with
/// the same empty/singleton conventions.
inline EstimateValue phi_hat_decompose(const RankMatrix& rm, const Direction& alpha) {
    detail::check_rank_alpha(rm, alpha);
    const int d = static_cast<int>(rm.d);
    detail::check_dim(d);
    const auto i_idx = alpha.negative_indices();
    const auto j_idx = alpha.positive_indices();
    const auto j_count = static_cast<std::uint32_t>(j_idx.size());

    double acc = 0.0;
    std::vector<int> subset;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << j_count); ++mask) {
        subset.assign(i_idx.begin(), i_idx.end());
        int k = 0;
        for (std::uint32_t b = 0; b < j_count; ++b)
            if ((mask >> b) & 1u) {
                subset.push_back(j_idx[b]);
                ++k;
            }
        const int m = static_cast<int>(subset.size());
        if (m <= 1) continue;
        const double weight = (m - 1) / (2.0 * (m + 1));
        const double term = weight * detail::phi_minus_subset(rm, subset);
        acc += (k % 2 == 0) ? term : -term;
    }
    return {detail::prefactor(d) * acc, alpha, rm.n};
}

/// Convenience path: CSV file -> ranks -> estimate.
inline EstimateValue phi_hat_from_csv(const std::string& path, const Direction& alpha,
                                      TiePolicy policy = TiePolicy::first_occurrence) {
    const Dataset data = read_dataset_csv_file(path);
    return phi_hat(ranks(data, policy), alpha);
}

} // namespace footrule
