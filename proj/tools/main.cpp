// Command-line front end: exact coefficients, rank-based estimation from CSV
// data, copula sampling, seeded simulation studies, and copula validation.
//
// Exit codes: 0 ok, 2 usage, 3 numerical failure, 4 data error,
// 5 reproduction policy (--strict-paper with flagged cells).

#include "footrule/footrule.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace footrule;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitData = 4;
constexpr int kExitPolicy = 5;

struct FamilyFlags {
    std::string family;
    std::optional<double> theta;
    std::optional<double> lambda;
    int d = 2;
};

void add_family_flags(CLI::App* cmd, FamilyFlags& flags, bool need_dim = true) {
    cmd->add_option("--family", flags.family,
                    "Copula family: independence|comonotone|countermonotone|fgm|clayton|ca")
        ->required();
    cmd->add_option("--theta", flags.theta, "Family parameter (clayton: >0, ca: [0,1])");
    cmd->add_option("--lambda", flags.lambda, "FGM parameter in [-1,1]");
    if (need_dim) cmd->add_option("--d", flags.d, "Dimension (>= 2)")->required();
}

CopulaModel model_from_flags(const FamilyFlags& flags) {
    const auto family = family_from_name(flags.family);
    if (!family) throw std::invalid_argument("unknown family '" + flags.family + "'");
    switch (*family) {
        case Family::fgm:
            if (!flags.lambda) throw std::invalid_argument("family fgm requires --lambda");
            return CopulaModel::fgm(flags.d, *flags.lambda);
        case Family::clayton:
        case Family::cuadras_auge:
            if (!flags.theta)
                throw std::invalid_argument("family " + flags.family + " requires --theta");
            return CopulaModel::make(*family, flags.d, *flags.theta);
        case Family::countermonotone:
            if (flags.d != 2)
                throw std::invalid_argument("countermonotone requires --d 2");
            return CopulaModel::countermonotone();
        default:
            return CopulaModel::make(*family, flags.d, 0.0);
    }
}

std::vector<Direction> parse_alpha(const std::string& text, int d) {
    if (text == "all") return Direction::enumerate(d);
    std::vector<Direction> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string token =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        Direction alpha = Direction::parse(token);
        if (alpha.dim() != d)
            throw std::invalid_argument("direction '" + token + "' has dimension " +
                                        std::to_string(alpha.dim()) + ", expected " +
                                        std::to_string(d));
        out.push_back(std::move(alpha));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
}

// ---------------------------------------------------------------------------
// phi-exact
// ---------------------------------------------------------------------------

int run_phi_exact(const FamilyFlags& flags, const std::string& alpha_text,
                  const std::string& method, double tol) {
    const CopulaModel model = model_from_flags(flags);
    QuadratureSpec spec;
    spec.abs_tol = tol;
    const auto directions = parse_alpha(alpha_text, model.dim);

    auto compute = [&](const Direction& alpha) -> CoefficientValue {
        if (method == "auto") return phi_dir(model, alpha, spec);
        if (method == "quadrature") return phi_dir_quadrature(model, alpha, spec);
        if (method == "decomposition") return phi_dir_decompose(model, alpha, spec);
        if (method == "closed") {
            auto value = phi_dir(model, alpha, spec);
            if (value.method != Method::closed_form && model.family != Family::clayton)
                throw std::invalid_argument("no closed form for family " + flags.family);
            return value;
        }
        throw std::invalid_argument("unknown method '" + method + "'");
    };

    std::cout << "family,param,d,alpha,method,value,abs_error\n";
    double sum = 0.0, sum_err = 0.0;
    for (const auto& alpha : directions) {
        const auto value = compute(alpha);
        sum += value.value;
        sum_err += value.abs_error;
        std::cout << family_name(model.family) << ','
                  << (model.has_param() ? format_double(model.param) : "") << ',' << model.dim
                  << ',' << alpha.str() << ',' << method_name(value.method) << ','
                  << format_double(value.value) << ',' << format_double(value.abs_error) << '\n';
    }
    if (directions.size() > 1)
        std::cout << family_name(model.family) << ','
                  << (model.has_param() ? format_double(model.param) : "") << ',' << model.dim
                  << ",sum,," << format_double(sum) << ',' << format_double(sum_err) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// phi-estimate
// ---------------------------------------------------------------------------

int run_phi_estimate(const std::string& input, const std::string& alpha_text,
                     const std::string& ties) {
    const Dataset data = read_dataset_csv_file(input);
    const TiePolicy policy =
        ties == "strict" ? TiePolicy::strict : TiePolicy::first_occurrence;
    if (ties != "strict" && ties != "first")
        throw std::invalid_argument("--ties must be first or strict");
    const RankMatrix rm = ranks(data, policy);
    if (rm.had_ties)
        std::cerr << "warning: ties broken by row order; use --ties strict to reject them\n";
    const auto directions = parse_alpha(alpha_text, static_cast<int>(data.cols()));

    std::cout << "alpha,d,n,value\n";
    double sum = 0.0;
    for (const auto& alpha : directions) {
        const auto estimate = phi_hat(rm, alpha);
        sum += estimate.value;
        std::cout << alpha.str() << ',' << rm.d << ',' << rm.n << ','
                  << format_double(estimate.value) << '\n';
    }
    if (directions.size() > 1)
        std::cout << "sum," << rm.d << ',' << rm.n << ',' << format_double(sum) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

int run_sample(const FamilyFlags& flags, std::size_t n, std::uint64_t seed,
               std::uint64_t stream, const std::string& out_path) {
    const CopulaModel model = model_from_flags(flags);
    RngStream rng(seed, stream);
    const Dataset data = sample_model(model, n, rng);
    if (out_path.empty()) {
        write_dataset_csv(std::cout, data);
    } else {
        write_dataset_csv_file(out_path, data);
        std::cerr << "wrote " << data.rows() << "x" << data.cols() << " dataset to " << out_path
                  << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

void write_convergence_chart(const std::string& path, const std::vector<ReplicationStats>& stats,
                             const std::string& title) {
    std::map<std::string, ChartSeries> by_alpha;
    for (const auto& s : stats) {
        auto& series = by_alpha[s.alpha.str()];
        series.label = "sd " + s.alpha.str();
        series.points.emplace_back(static_cast<double>(s.n), s.sd);
    }
    std::vector<ChartSeries> list;
    for (auto& [_, series] : by_alpha) list.push_back(std::move(series));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_polyline_chart(out, list, title, "sample size n", "replicate sd");
}

int run_simulate(const FamilyFlags& flags, const std::string& alpha_text,
                 std::vector<std::size_t> sizes, std::size_t reps, std::uint64_t seed,
                 int threads, const std::string& out_path, const std::string& chart_path) {
    const CopulaModel model = model_from_flags(flags);
    ExperimentConfig config{model, parse_alpha(alpha_text, model.dim), std::move(sizes), reps,
                            seed, threads};
    const auto stats = run_experiment(config);
    const std::string csv = report_csv(make_report(model, stats));
    if (out_path.empty()) std::cout << csv;
    else {
        write_text_file(out_path, csv);
        std::cerr << "wrote " << stats.size() << " cells to " << out_path << "\n";
    }
    if (!chart_path.empty()) {
        write_convergence_chart(chart_path, stats,
                                std::string(family_name(model.family)) + " estimator spread");
        std::cerr << "wrote chart to " << chart_path << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

int run_reproduce(const std::string& table_text, std::uint64_t seed, int threads,
                  std::size_t reps, const std::string& out_dir, bool strict_paper) {
    const auto id = table_from_name(table_text);
    if (!id) throw std::invalid_argument("unknown table '" + table_text + "' (T1|T3|T4|T6)");
    const TableReproduction table = reproduce_table(*id, seed, threads, reps);
    const std::string csv = report_csv(table.rows);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const auto path =
            (std::filesystem::path(out_dir) / (std::string(table_name(*id)) + ".csv")).string();
        write_text_file(path, csv);
        std::cerr << "wrote " << path << "\n";
    } else {
        std::cout << csv;
    }

    for (const auto& row : table.rows) {
        std::fprintf(stderr, "%s %s theta=%g d=%d alpha=%s n=%zu mean=%.5f exact=%.5f",
                     table_name(*id).data(), row.family.c_str(), row.theta.value_or(0.0), row.d,
                     row.alpha.c_str(), row.n, row.mean, row.exact);
        if (row.paper_ref_value) std::fprintf(stderr, " paper=%.5f", *row.paper_ref_value);
        std::fprintf(stderr, " flag=%s\n", row.flag.c_str());
    }
    if (strict_paper && (table.any_flag("unreconciled") || table.any_flag("exact_mismatch"))) {
        std::cerr << "strict-paper: flagged cells present\n";
        return kExitPolicy;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

std::vector<double> parse_grid(const std::string& text) {
    // "a:b:count" or comma list
    const auto c1 = text.find(':');
    if (c1 != std::string::npos) {
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) throw std::invalid_argument("grid must be lo:hi:count");
        const double lo = std::stod(text.substr(0, c1));
        const double hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        const int count = std::stoi(text.substr(c2 + 1));
        if (count < 2 || hi <= lo) throw std::invalid_argument("grid must be lo:hi:count, hi>lo");
        std::vector<double> grid(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i)
            grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
        return grid;
    }
    std::vector<double> grid;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        grid.push_back(std::stod(
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return grid;
}

int run_sweep(const FamilyFlags& flags, const std::string& grid_text,
              const std::string& alpha_text, double tol, const std::string& out_path,
              const std::string& chart_path) {
    const auto family = family_from_name(flags.family);
    if (!family) throw std::invalid_argument("unknown family '" + flags.family + "'");
    const auto grid = parse_grid(grid_text);
    std::vector<Direction> directions;
    if (alpha_text != "classes") directions = parse_alpha(alpha_text, flags.d);
    QuadratureSpec spec;
    spec.abs_tol = tol;
    const auto points = theta_sweep(*family, flags.d, grid, directions, spec);
    const std::string csv = sweep_csv(*family, flags.d, points);
    if (out_path.empty()) std::cout << csv;
    else {
        write_text_file(out_path, csv);
        std::cerr << "wrote " << points.size() << " rows to " << out_path << "\n";
    }
    if (!chart_path.empty()) {
        std::map<std::string, ChartSeries> by_alpha;
        for (const auto& p : points) {
            auto& series = by_alpha[p.alpha.str()];
            series.label = p.alpha.str();
            series.points.emplace_back(p.theta, p.value.value);
        }
        std::vector<ChartSeries> list;
        for (auto& [_, series] : by_alpha) list.push_back(std::move(series));
        std::ofstream out(chart_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open '" + chart_path + "' for writing");
        write_polyline_chart(out, list,
                             std::string(family_name(*family)) + " directional coefficients",
                             "theta", "phi");
        std::cerr << "wrote chart to " << chart_path << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int run_validate(const FamilyFlags& flags, int resolution, double tol) {
    const CopulaModel model = model_from_flags(flags);
    const auto report = validate_copula(make_evaluator(model), resolution, tol);
    std::cout << "family=" << family_name(model.family) << " d=" << model.dim
              << " resolution=" << resolution << " tolerance=" << format_double(tol, 3) << "\n";
    std::cout << "worst violation magnitude: " << format_double(report.worst, 6) << "\n";
    if (report.passed()) {
        std::cout << "zero violations\n";
        return kExitOk;
    }
    std::cout << report.violations.size() << " violations:\n";
    std::size_t shown = 0;
    for (const auto& v : report.violations) {
        if (++shown > 20) {
            std::cout << "  ...\n";
            break;
        }
        const char* kind = v.kind == CopulaViolation::Kind::grounded ? "grounded"
                           : v.kind == CopulaViolation::Kind::margin ? "margin"
                                                                     : "negative_volume";
        std::cout << "  " << kind << " at (";
        for (std::size_t i = 0; i < v.where.size(); ++i)
            std::cout << (i ? "," : "") << format_double(v.where[i], 4);
        std::cout << ") magnitude " << format_double(v.magnitude, 6) << "\n";
    }
    return kExitNumeric;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Directional multivariate Spearman footrule: exact coefficients, "
                 "rank-based estimates, copula sampling, and seeded simulation studies"};
    app.require_subcommand(1);
    app.option_defaults()->always_capture_default();
    app.set_config("--config", "", "Config file (key=value lines; command-line flags win)");

    // phi-exact
    FamilyFlags exact_flags;
    std::string exact_alpha = "all", exact_method = "auto";
    double exact_tol = 1e-10;
    auto* exact = app.add_subcommand("phi-exact", "Exact directional coefficients");
    add_family_flags(exact, exact_flags);
    exact->add_option("--alpha", exact_alpha, "Sign string like '+--+', a comma list, or 'all'");
    exact->add_option("--method", exact_method, "auto|closed|quadrature|decomposition");
    exact->add_option("--tol", exact_tol, "Quadrature absolute tolerance");

    // phi-estimate
    std::string est_input, est_alpha = "all", est_ties = "first";
    auto* estimate = app.add_subcommand("phi-estimate", "Rank-based estimates from a CSV dataset");
    estimate->add_option("--input", est_input, "Dataset CSV (header + numeric rows)")->required();
    estimate->add_option("--alpha", est_alpha, "Sign string, comma list, or 'all'");
    estimate->add_option("--ties", est_ties, "first|strict tie policy");

    // sample
    FamilyFlags sample_flags;
    std::size_t sample_n = 1000;
    std::uint64_t sample_seed = 0, sample_stream = 0;
    std::string sample_out;
    auto* sample = app.add_subcommand("sample", "Draw a dataset from a copula model");
    add_family_flags(sample, sample_flags);
    sample->add_option("--n", sample_n, "Number of rows")->required();
    sample->add_option("--seed", sample_seed, "Master seed");
    sample->add_option("--stream", sample_stream, "Stream index (replication id)");
    sample->add_option("--out", sample_out, "Output CSV path (default stdout)");

    // simulate
    FamilyFlags sim_flags;
    std::string sim_alpha = "all", sim_out, sim_chart;
    std::vector<std::size_t> sim_sizes{20, 50, 100, 500};
    std::size_t sim_reps = 1000;
    std::uint64_t sim_seed = 0;
    int sim_threads = 0;
    auto* simulate = app.add_subcommand("simulate", "Seeded Monte Carlo estimator study");
    add_family_flags(simulate, sim_flags);
    simulate->add_option("--alpha", sim_alpha, "Sign string, comma list, or 'all'");
    simulate->add_option("--n", sim_sizes, "Sample sizes, e.g. 20,50,100,500")->delimiter(',');
    simulate->add_option("--reps", sim_reps, "Replications per cell");
    simulate->add_option("--seed", sim_seed, "Master seed");
    simulate->add_option("--threads", sim_threads, "Worker threads (0 = auto; never changes results)")
        ->envname("FOOTRULE_DIR_THREADS");
    simulate->add_option("--out", sim_out, "Report CSV path (default stdout)");
    simulate->add_option("--chart", sim_chart, "Optional SVG chart path");

    // reproduce
    std::string rep_table, rep_out;
    std::uint64_t rep_seed = 0;
    std::size_t rep_reps = 1000;
    int rep_threads = 0;
    bool rep_strict = false;
    auto* reproduce = app.add_subcommand("reproduce", "Re-run a published study table");
    reproduce->add_option("--table", rep_table, "T1|T3|T4|T6")->required();
    reproduce->add_option("--seed", rep_seed, "Master seed");
    reproduce->add_option("--reps", rep_reps, "Replications per cell");
    reproduce->add_option("--threads", rep_threads, "Worker threads (0 = auto; never changes results)")
        ->envname("FOOTRULE_DIR_THREADS");
    reproduce->add_option("--out", rep_out, "Output directory for <table>.csv (default stdout)");
    reproduce->add_flag("--strict-paper", rep_strict,
                        "Exit 5 when any cell is flagged against the published values");

    // sweep
    FamilyFlags sweep_flags;
    std::string sweep_grid, sweep_alpha = "classes", sweep_out, sweep_chart;
    double sweep_tol = 1e-10;
    auto* sweep = app.add_subcommand("sweep", "Exact coefficient curves over a parameter grid");
    add_family_flags(sweep, sweep_flags);
    sweep->add_option("--grid", sweep_grid, "Parameter grid: lo:hi:count or comma list")
        ->required();
    sweep->add_option("--alpha", sweep_alpha,
                      "'classes' (one per reversed-count), 'all', or a comma list");
    sweep->add_option("--tol", sweep_tol, "Quadrature absolute tolerance");
    sweep->add_option("--out", sweep_out, "Output CSV path (default stdout)");
    sweep->add_option("--chart", sweep_chart, "Optional SVG chart path");

    // validate
    FamilyFlags val_flags;
    int val_resolution = 8;
    double val_tol = 1e-9;
    auto* validate = app.add_subcommand("validate", "Grid-check the copula axioms for a model");
    add_family_flags(validate, val_flags);
    validate->add_option("--resolution", val_resolution, "Grid cells per axis");
    validate->add_option("--tol", val_tol, "Violation tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (exact->parsed())
            return run_phi_exact(exact_flags, exact_alpha, exact_method, exact_tol);
        if (estimate->parsed()) return run_phi_estimate(est_input, est_alpha, est_ties);
        if (sample->parsed())
            return run_sample(sample_flags, sample_n, sample_seed, sample_stream, sample_out);
        if (simulate->parsed())
            return run_simulate(sim_flags, sim_alpha, sim_sizes, sim_reps, sim_seed, sim_threads,
                                sim_out, sim_chart);
        if (reproduce->parsed())
            return run_reproduce(rep_table, rep_seed, rep_threads, rep_reps, rep_out, rep_strict);
        if (sweep->parsed())
            return run_sweep(sweep_flags, sweep_grid, sweep_alpha, sweep_tol, sweep_out,
                             sweep_chart);
        if (validate->parsed()) return run_validate(val_flags, val_resolution, val_tol);
    } catch (const QuadratureError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const CsvError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const TieError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitUsage;
}
