#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "footrule/coefficients.hpp"
#include "footrule/csv.hpp"
#include "footrule/direction.hpp"
#include "footrule/estimators.hpp"
#include "footrule/rng.hpp"
#include "footrule/sampling.hpp"

namespace footrule {

// ============================================================================
// Configuration and summaries
// ============================================================================

/// A declarative Monte Carlo run: which model, which directions, which
/// sample sizes, how many replications, and the master seed.
struct ExperimentConfig {
    CopulaModel model;
    std::vector<Direction> directions;        // empty = all 2^d
    std::vector<std::size_t> sample_sizes;
    std::size_t replications = 1000;
    std::uint64_t master_seed = 0;
    int threads = 0;                          // 0 = auto; never changes results
};

/// Replicate summary for one (direction, n) cell, with the exact value the
/// replicates are estimating.
struct ReplicationStats {
    Direction alpha;
    std::size_t n = 0;
    std::size_t replications = 0;
    double mean = 0.0;
    double sd = 0.0;       // sample standard deviation (R-1 denominator)
    double bias = 0.0;     // mean - exact
    double rmse = 0.0;     // sqrt(mean of squared deviation from exact)
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
    CoefficientValue exact;
};

/// Acceptance band for a simulated mean: max(0.01, 4 sd / sqrt(R)).
inline double acceptance_band(double sd, std::size_t replications) {
    return std::max(0.01, 4.0 * sd / std::sqrt(static_cast<double>(replications)));
}

namespace detail {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FOOTRULE_DIR_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Replication bodies run concurrently; each writes only its own slots, so
/// the aggregate is independent of scheduling.
template <class Fn>
void for_each_replication(std::size_t count, int threads, Fn&& body) {
    threads = std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), count);
    if (threads <= 1) {
        for (std::size_t r = 0; r < count; ++r) body(r);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t r = next.fetch_add(1);
                if (r >= count) break;
                body(r);
            }
        });
    for (auto& th : pool) th.join();
}

/// Every (model, n) cell draws from its own seed domain; replication r then
/// uses stream index r inside it.
inline std::uint64_t cell_seed(std::uint64_t master, const CopulaModel& model, std::size_t n) {
    std::uint64_t param_bits = 0;
    std::memcpy(&param_bits, &model.param, sizeof(param_bits));
    std::uint64_t h = mix64(master ^ static_cast<std::uint64_t>(model.family));
    h = mix64(h ^ param_bits);
    h = mix64(h ^ static_cast<std::uint64_t>(model.dim));
    return mix64(h ^ static_cast<std::uint64_t>(n));
}

/// Interpolated quartile of a sorted sample (linear between order stats).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= n) return sorted[n - 1];
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline ReplicationStats summarize(const Direction& alpha, std::size_t n,
                                  const std::vector<double>& replicates,
                                  const CoefficientValue& exact) {
    ReplicationStats s{.alpha = alpha, .n = n, .replications = replicates.size(),
                       .exact = exact};
    const auto count = static_cast<double>(replicates.size());
    double sum = 0.0;
    for (double v : replicates) sum += v;
    s.mean = sum / count;
    double ss = 0.0, se = 0.0;
    for (double v : replicates) {
        ss += (v - s.mean) * (v - s.mean);
        se += (v - exact.value) * (v - exact.value);
    }
    s.sd = replicates.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
    s.bias = s.mean - exact.value;
    s.rmse = std::sqrt(se / count);
    std::vector<double> sorted = replicates;
    std::sort(sorted.begin(), sorted.end());
    s.min = sorted.front();
    s.max = sorted.back();
    s.q25 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.50);
    s.q75 = quantile_sorted(sorted, 0.75);
    return s;
}

} // namespace detail

// ============================================================================
// The harness
// ============================================================================

/// For every sample size and replication: sample with the replication's own
/// stream, rank once, estimate every requested direction. Returns one
/// summary per (n, direction), both in the order given.
inline std::vector<ReplicationStats> run_experiment(const ExperimentConfig& config) {
    if (config.replications < 1)
        throw std::invalid_argument("run_experiment: need at least one replication");
    for (std::size_t n : config.sample_sizes)
        if (n < 2) throw std::invalid_argument("run_experiment: sample sizes must be >= 2");

    const auto directions = config.directions.empty()
                                ? Direction::enumerate(config.model.dim)
                                : config.directions;
    for (const auto& alpha : directions)
        if (alpha.dim() != config.model.dim)
            throw std::invalid_argument("run_experiment: direction dimension mismatch");

    std::vector<CoefficientValue> exact;
    exact.reserve(directions.size());
    for (const auto& alpha : directions) exact.push_back(phi_dir(config.model, alpha));

    std::vector<ReplicationStats> out;
    for (std::size_t n : config.sample_sizes) {
        const std::uint64_t seed = detail::cell_seed(config.master_seed, config.model, n);
        const std::size_t reps = config.replications;
        std::vector<std::vector<double>> estimates(directions.size(),
                                                   std::vector<double>(reps, 0.0));
        detail::for_each_replication(reps, config.threads, [&](std::size_t r) {
            RngStream rng(seed, r);
            const Dataset data = sample_model(config.model, n, rng);
            const RankMatrix rm = ranks(data);
            for (std::size_t a = 0; a < directions.size(); ++a)
                estimates[a][r] = phi_hat(rm, directions[a]).value;
        });
        for (std::size_t a = 0; a < directions.size(); ++a)
            out.push_back(detail::summarize(directions[a], n, estimates[a], exact[a]));
    }
    return out;
}

/// One direction across growing sample sizes; feeds box-plot style summaries.
inline std::vector<ReplicationStats> convergence_study(const CopulaModel& model,
                                                       const Direction& alpha,
                                                       std::vector<std::size_t> sample_sizes,
                                                       std::size_t replications,
                                                       std::uint64_t master_seed,
                                                       int threads = 0) {
    ExperimentConfig config{model, {alpha}, std::move(sample_sizes), replications, master_seed,
                            threads};
    return run_experiment(config);
}

// ============================================================================
// Report rows
// ============================================================================

/// One line of the report CSV; `flag` is "ok", "unreconciled" (simulated mean
/// agrees with our exact value but not the published one), or
/// "exact_mismatch" (simulated mean outside the band of our exact value).
struct ReportRow {
    std::string family;
    std::optional<double> theta;
    int d = 0;
    std::string alpha;
    std::size_t n = 0;
    std::size_t replications = 0;
    double mean = 0.0, sd = 0.0, bias = 0.0, rmse = 0.0;
    double q25 = 0.0, median = 0.0, q75 = 0.0;
    double exact = 0.0;
    std::string exact_method;
    std::optional<double> paper_ref_value;
    std::string flag;
};

inline const char* report_csv_header() {
    return "family,theta,d,alpha,n,replications,mean,sd,bias,rmse,q25,median,q75,"
           "exact,exact_method,paper_ref_value,flag";
}

inline std::string report_csv(const std::vector<ReportRow>& rows) {
    std::string out = report_csv_header();
    out.push_back('\n');
    for (const auto& r : rows) {
        out += r.family;
        out.push_back(',');
        if (r.theta) out += format_double(*r.theta);
        out.push_back(',');
        out += std::to_string(r.d);
        out.push_back(',');
        out += r.alpha;
        out.push_back(',');
        out += std::to_string(r.n);
        out.push_back(',');
        out += std::to_string(r.replications);
        for (double v : {r.mean, r.sd, r.bias, r.rmse, r.q25, r.median, r.q75, r.exact}) {
            out.push_back(',');
            out += format_double(v);
        }
        out.push_back(',');
        out += r.exact_method;
        out.push_back(',');
        if (r.paper_ref_value) out += format_double(*r.paper_ref_value);
        out.push_back(',');
        out += r.flag;
        out.push_back('\n');
    }
    return out;
}

inline std::vector<ReportRow> make_report(const CopulaModel& model,
                                          const std::vector<ReplicationStats>& stats) {
    std::vector<ReportRow> rows;
    rows.reserve(stats.size());
    for (const auto& s : stats) {
        ReportRow row;
        row.family = std::string(family_name(model.family));
        if (model.has_param()) row.theta = model.param;
        row.d = model.dim;
        row.alpha = s.alpha.str();
        row.n = s.n;
        row.replications = s.replications;
        row.mean = s.mean;
        row.sd = s.sd;
        row.bias = s.bias;
        row.rmse = s.rmse;
        row.q25 = s.q25;
        row.median = s.median;
        row.q75 = s.q75;
        row.exact = s.exact.value;
        row.exact_method = std::string(method_name(s.exact.method));
        row.flag = std::abs(s.mean - s.exact.value) <= acceptance_band(s.sd, s.replications)
                       ? "ok"
                       : "exact_mismatch";
        rows.push_back(std::move(row));
    }
    return rows;
}

// ============================================================================
// Published-study reproduction
// ============================================================================

enum class StudyTable { t1, t3, t4, t6 };

inline std::string_view table_name(StudyTable id) {
    switch (id) {
        case StudyTable::t1: return "T1";
        case StudyTable::t3: return "T3";
        case StudyTable::t4: return "T4";
        case StudyTable::t6: return "T6";
    }
    return "?";
}

inline std::optional<StudyTable> table_from_name(std::string_view name) {
    if (name == "T1" || name == "t1") return StudyTable::t1;
    if (name == "T3" || name == "t3") return StudyTable::t3;
    if (name == "T4" || name == "t4") return StudyTable::t4;
    if (name == "T6" || name == "t6") return StudyTable::t6;
    return std::nullopt;
}

namespace detail {

struct PublishedCell {
    double theta;
    const char* alpha;
    std::size_t n;
    double value;
};

// Published simulation means (1000 replications each), kept verbatim as
// reference constants; comparisons against them only ever set a flag.
inline constexpr PublishedCell kPublishedT1[] = {
    {5.0, "---", 500, 0.68924},  {5.0, "-++", 500, -0.24848}, {5.0, "+-+", 500, -0.24889},
    {5.0, "++-", 500, -0.24874}, {5.0, "+--", 500, -0.22004}, {5.0, "--+", 500, -0.22030},
    {5.0, "-+-", 500, -0.22045}, {5.0, "+++", 500, 0.71768},
};

inline constexpr PublishedCell kPublishedT3[] = {
    {0.4, "-++-", 20, -0.02660}, {0.4, "-++-", 50, -0.02147}, {0.4, "-++-", 100, -0.02198},
    {0.4, "-++-", 500, -0.02036},
    {0.6, "-++-", 20, -0.03366}, {0.6, "-++-", 50, -0.02891}, {0.6, "-++-", 100, -0.02960},
    {0.6, "-++-", 500, -0.02816},
    {1.0, "-++-", 20, -0.04402}, {1.0, "-++-", 50, -0.04090}, {1.0, "-++-", 100, -0.04141},
    {1.0, "-++-", 500, -0.04029},
    {2.0, "-++-", 20, -0.06104}, {2.0, "-++-", 50, -0.05920}, {2.0, "-++-", 100, -0.06000},
    {2.0, "-++-", 500, -0.05915},
    {5.0, "-++-", 20, -0.08166}, {5.0, "-++-", 50, -0.08144}, {5.0, "-++-", 100, -0.08218},
    {5.0, "-++-", 500, -0.08213},
};

inline constexpr PublishedCell kPublishedT4[] = {
    {0.4, "+-+-+", 20, -0.01144}, {0.4, "+-+-+", 50, -0.01246}, {0.4, "+-+-+", 100, -0.01064},
    {0.4, "+-+-+", 500, -0.01125},
    {0.6, "+-+-+", 20, -0.01607}, {0.6, "+-+-+", 50, -0.01475}, {0.6, "+-+-+", 100, -0.01491},
    {0.6, "+-+-+", 500, -0.01475},
    {1.0, "+-+-+", 20, -0.02135}, {1.0, "+-+-+", 50, -0.02085}, {1.0, "+-+-+", 100, -0.02135},
    {1.0, "+-+-+", 500, -0.02055},
    {2.0, "+-+-+", 20, -0.02897}, {2.0, "+-+-+", 50, -0.02892}, {2.0, "+-+-+", 100, -0.02863},
    {2.0, "+-+-+", 500, -0.02865},
    {5.0, "+-+-+", 20, -0.03756}, {5.0, "+-+-+", 50, -0.03789}, {5.0, "+-+-+", 100, -0.03749},
    {5.0, "+-+-+", 500, -0.03817},
};

inline constexpr PublishedCell kPublishedT6[] = {
    {0.4, "----", 500, 0.38348},   {0.4, "+---", 500, -0.06336},  {0.4, "-+--", 500, -0.063197},
    {0.4, "++--", 500, -0.04292},  {0.4, "--+-", 500, -0.06376},  {0.4, "+-+-", 500, -0.04352},
    {0.4, "-++-", 500, -0.04279},  {0.4, "+++-", 500, -0.06392},  {0.4, "---+", 500, -0.06372},
    {0.4, "+--+", 500, -0.04319},  {0.4, "-+-+", 500, -0.04314},  {0.4, "++-+", 500, -0.06395},
    {0.4, "--++", 500, -0.04230},  {0.4, "+-++", 500, -0.06362},  {0.4, "-+++", 500, -0.06458},
    {0.4, "++++", 500, 0.38450},
    {0.8, "----", 500, 0.77980},   {0.8, "+---", 500, -0.12969},  {0.8, "-+--", 500, -0.12967},
    {0.8, "++--", 500, -0.08708},  {0.8, "--+-", 500, -0.12984},  {0.8, "+-+-", 500, -0.08672},
    {0.8, "-++-", 500, -0.08692},  {0.8, "+++-", 500, -0.12987},  {0.8, "---+", 500, -0.12956},
    {0.8, "+--+", 500, -0.08715},  {0.8, "-+-+", 500, -0.08731},  {0.8, "++-+", 500, -0.12933},
    {0.8, "--++", 500, -0.08718},  {0.8, "+-++", 500, -0.12965},  {0.8, "-+++", 500, -0.12932},
    {0.8, "++++", 500, 0.77950},
};

inline std::optional<double> published_value(StudyTable id, double theta, const std::string& alpha,
                                         std::size_t n) {
    auto lookup = [&](std::span<const PublishedCell> cells) -> std::optional<double> {
        for (const auto& c : cells)
            if (c.theta == theta && c.alpha == alpha && c.n == n) return c.value;
        return std::nullopt;
    };
    switch (id) {
        case StudyTable::t1: return lookup(kPublishedT1);
        case StudyTable::t3: return lookup(kPublishedT3);
        case StudyTable::t4: return lookup(kPublishedT4);
        case StudyTable::t6: return lookup(kPublishedT6);
    }
    return std::nullopt;
}

} // namespace detail

struct TableReproduction {
    StudyTable id = StudyTable::t1;
    std::vector<ReportRow> rows;

    bool any_flag(std::string_view value) const {
        for (const auto& r : rows)
            if (r.flag == value) return true;
        return false;
    }
};

/// Re-run one of the published study grids with our samplers and estimators.
/// Each row carries our simulated mean, our exact value, and the published
/// mean; disagreement with the published mean beyond the band flags the row
/// "unreconciled", disagreement with our own exact value "exact_mismatch".
inline TableReproduction reproduce_table(StudyTable id, std::uint64_t master_seed,
                                         int threads = 0, std::size_t replications = 1000) {
    struct Grid {
        std::vector<CopulaModel> models;
        std::vector<Direction> directions;   // empty = all
        std::vector<std::size_t> sample_sizes;
    };
    Grid grid;
    switch (id) {
        case StudyTable::t1:
            grid.models = {CopulaModel::clayton(3, 5.0)};
            grid.sample_sizes = {500};
            break;
        case StudyTable::t3:
            for (double theta : {0.4, 0.6, 1.0, 2.0, 5.0})
                grid.models.push_back(CopulaModel::clayton(4, theta));
            grid.directions = {Direction::parse("-++-")};
            grid.sample_sizes = {20, 50, 100, 500};
            break;
        case StudyTable::t4:
            for (double theta : {0.4, 0.6, 1.0, 2.0, 5.0})
                grid.models.push_back(CopulaModel::clayton(5, theta));
            grid.directions = {Direction::parse("+-+-+")};
            grid.sample_sizes = {20, 50, 100, 500};
            break;
        case StudyTable::t6:
            grid.models = {CopulaModel::cuadras_auge(4, 0.4), CopulaModel::cuadras_auge(4, 0.8)};
            grid.sample_sizes = {500};
            break;
    }

    TableReproduction table;
    table.id = id;
    for (const auto& model : grid.models) {
        ExperimentConfig config{model, grid.directions, grid.sample_sizes, replications,
                                master_seed, threads};
        auto rows = make_report(model, run_experiment(config));
        for (auto& row : rows) {
            row.paper_ref_value = detail::published_value(id, model.param, row.alpha, row.n);
            if (row.flag == "ok" && row.paper_ref_value) {
                const double band = acceptance_band(row.sd, row.replications);
                if (std::abs(row.mean - *row.paper_ref_value) > band) row.flag = "unreconciled";
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

// ============================================================================
// Exact parameter sweeps (no simulation)
// ============================================================================

struct SweepPoint {
    double theta = 0.0;
    Direction alpha;
    CoefficientValue value;
};

/// Exact coefficient curves over a parameter grid. With no directions given,
/// one representative per reversed-count class is used (the families here
/// are exchangeable, so classes determine the value).
inline std::vector<SweepPoint> theta_sweep(Family family, int d, std::span<const double> grid,
                                           std::vector<Direction> directions = {},
                                           const QuadratureSpec& spec = {}) {
    if (directions.empty()) {
        for (int k = 0; k <= d; ++k) {
            std::vector<int> signs(static_cast<std::size_t>(d), 1);
            for (int i = 0; i < k; ++i) signs[static_cast<std::size_t>(i)] = -1;
            directions.emplace_back(std::move(signs));
        }
    }
    std::vector<SweepPoint> out;
    out.reserve(grid.size() * directions.size());
    for (double theta : grid) {
        const CopulaModel model = CopulaModel::make(family, d, theta);
        for (const auto& alpha : directions)
            out.push_back({theta, alpha, phi_dir(model, alpha, spec)});
    }
    return out;
}

inline std::string sweep_csv(Family family, int d, const std::vector<SweepPoint>& points) {
    std::string out = "family,theta,d,alpha,value,method,abs_error\n";
    for (const auto& p : points) {
        out += std::string(family_name(family));
        out.push_back(',');
        out += format_double(p.theta);
        out.push_back(',');
        out += std::to_string(d);
        out.push_back(',');
        out += p.alpha.str();
        out.push_back(',');
        out += format_double(p.value.value);
        out.push_back(',');
        out += std::string(method_name(p.value.method));
        out.push_back(',');
        out += format_double(p.value.abs_error);
        out.push_back('\n');
    }
    return out;
}

} // namespace footrule
