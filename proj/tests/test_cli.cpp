#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "footrule/footrule.hpp"

namespace fs = std::filesystem;
using namespace footrule;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "footrule_cli_test";
        fs::create_directories(d);
        return d;
    }();
    const auto out_path = dir / "out.txt";
    const auto err_path = dir / "err.txt";
    const std::string cmd = std::string("\"") + FOOTRULE_CLI_PATH + "\" " + args + " > " +
                            out_path.string() + " 2> " + err_path.string();
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) fields.push_back(field);
    return fields;
}

} // namespace

TEST_CASE("phi-exact prints coefficient rows", "[cli]") {
    const auto r = run_cli("phi-exact --family clayton --theta 5 --d 3 --alpha ---");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "family,param,d,alpha,method,value,abs_error");
    const auto fields = fields_of(lines[1]);
    REQUIRE(fields.size() == 7);
    CHECK(fields[0] == "clayton");
    CHECK(fields[3] == "---");
    CHECK(std::abs(std::stod(fields[5]) - 0.68975) < 2e-4);
}

TEST_CASE("phi-exact FGM parity", "[cli]") {
    const auto r = run_cli("phi-exact --family fgm --lambda 1 --d 3 --alpha +++");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(std::abs(std::stod(fields_of(lines[1])[5]) + 0.0285714) < 1e-6);
}

TEST_CASE("phi-exact all emits every direction plus a sum row", "[cli]") {
    const auto r = run_cli("phi-exact --family independence --d 4 --alpha all");
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 1 + 16 + 1);
    for (std::size_t i = 1; i <= 16; ++i) CHECK(std::stod(fields_of(lines[i])[5]) == 0.0);
    const auto sum = fields_of(lines.back());
    CHECK(sum[3] == "sum");
    CHECK(std::stod(sum[5]) == 0.0);
}

TEST_CASE("sample then phi-estimate round trips bit for bit", "[cli]") {
    const auto dir = fs::temp_directory_path() / "footrule_cli_rt";
    fs::create_directories(dir);
    const auto csv = (dir / "sample.csv").string();
    const auto r1 = run_cli("sample --family ca --theta 0.7 --d 3 --n 300 --seed 9 --out " + csv);
    REQUIRE(r1.exit_code == 0);

    // Same model, same stream, in process.
    RngStream rng(9, 0);
    const Dataset data = sample_model(CopulaModel::cuadras_auge(3, 0.7), 300, rng);
    const Dataset loaded = read_dataset_csv_file(csv);
    CHECK(loaded == data);

    const auto r2 = run_cli("phi-estimate --input " + csv + " --alpha all");
    REQUIRE(r2.exit_code == 0);
    const auto lines = lines_of(r2.out);
    REQUIRE(lines.size() == 1 + 8 + 1);
    const auto rm = ranks(data);
    const auto all = Direction::enumerate(3);
    for (std::size_t i = 0; i < all.size(); ++i) {
        const auto fields = fields_of(lines[i + 1]);
        CHECK(fields[0] == all[i].str());
        // 17-significant-digit output round-trips exactly.
        CHECK(std::stod(fields[3]) == phi_hat(rm, all[i]).value);
    }
    CHECK(std::abs(std::stod(fields_of(lines.back())[3])) < 1e-10);
    fs::remove_all(dir);
}

TEST_CASE("phi-estimate of comonotone data is exactly one", "[cli]") {
    const auto dir = fs::temp_directory_path() / "footrule_cli_como";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "como.csv");
        out << "x,y,z\n";
        for (int i = 1; i <= 30; ++i)
            out << i << ',' << 2 * i << ',' << i * i << "\n";
    }
    const auto r = run_cli("phi-estimate --input " + (dir / "como.csv").string() +
                           " --alpha +++");
    REQUIRE(r.exit_code == 0);
    CHECK(std::stod(fields_of(lines_of(r.out)[1])[3]) == 1.0);
    fs::remove_all(dir);
}

TEST_CASE("exit codes", "[cli]") {
    const auto dir = fs::temp_directory_path() / "footrule_cli_errors";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "three.csv");
        out << "a,b,c\n1,2,3\n4,5,6\n";
        std::ofstream bad(dir / "bad.csv");
        bad << "a,b\n1,2\n3,oops\n";
    }
    // Dimension mismatch between data and direction: usage error.
    CHECK(run_cli("phi-estimate --input " + (dir / "three.csv").string() + " --alpha +-")
              .exit_code == 2);
    // Unknown family and missing required flags: usage errors.
    CHECK(run_cli("phi-exact --family nosuch --d 3 --alpha ++-").exit_code == 2);
    CHECK(run_cli("phi-exact --d 3").exit_code == 2);
    CHECK(run_cli("nosuchcommand").exit_code == 2);
    // Unparseable cell: data error.
    CHECK(run_cli("phi-estimate --input " + (dir / "bad.csv").string() + " --alpha ++")
              .exit_code == 4);
    // Strict tie policy on tied data: data error.
    {
        std::ofstream ties(dir / "ties.csv");
        ties << "a,b\n1,7\n1,8\n2,9\n";
    }
    CHECK(run_cli("phi-estimate --input " + (dir / "ties.csv").string() +
                  " --alpha ++ --ties strict")
              .exit_code == 4);
    // Help exits cleanly.
    CHECK(run_cli("--help").exit_code == 0);
    fs::remove_all(dir);
}

TEST_CASE("validate reports a clean grid for a real family", "[cli]") {
    const auto r = run_cli("validate --family clayton --theta 2 --d 3 --resolution 8");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("zero violations") != std::string::npos);
}

TEST_CASE("sweep writes parseable CSV and a chart", "[cli]") {
    const auto dir = fs::temp_directory_path() / "footrule_cli_sweep";
    fs::create_directories(dir);
    const auto csv = (dir / "sweep.csv").string();
    const auto svg = (dir / "sweep.svg").string();
    const auto r = run_cli("sweep --family ca --d 4 --grid 0:1:11 --out " + csv + " --chart " + svg);
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(slurp(csv));
    CHECK(lines.size() == 1 + 11 * 5);
    CHECK(slurp(svg).rfind("<svg", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("simulate writes the report schema and a chart", "[cli]") {
    const auto dir = fs::temp_directory_path() / "footrule_cli_sim";
    fs::create_directories(dir);
    const auto svg = (dir / "sim.svg").string();
    const auto r = run_cli(
        "simulate --family clayton --theta 2 --d 3 --alpha --- --n 20,50 --reps 40 --seed 3 "
        "--chart " + svg);
    REQUIRE(r.exit_code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 3);
    CHECK(lines[0] == report_csv_header());
    CHECK(fields_of(lines[1]).size() == 17);
    CHECK(slurp(svg).rfind("<svg", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("config file supplies defaults, flags win", "[cli]") {
    const auto dir = fs::temp_directory_path() / "footrule_cli_config";
    fs::create_directories(dir);
    const auto conf = (dir / "footrule.ini").string();
    {
        std::ofstream out(conf);
        out << "[phi-exact]\nfamily=fgm\nlambda=1\nd=3\nalpha=---\n";
    }
    const auto from_config = run_cli("--config " + conf + " phi-exact");
    REQUIRE(from_config.exit_code == 0);
    CHECK(std::abs(std::stod(fields_of(lines_of(from_config.out)[1])[5]) - 0.0285714) < 1e-6);

    // An explicit flag overrides the config value.
    const auto overridden = run_cli("--config " + conf + " phi-exact --lambda 0.5");
    REQUIRE(overridden.exit_code == 0);
    CHECK(std::abs(std::stod(fields_of(lines_of(overridden.out)[1])[5]) - 0.0142857) < 1e-6);
    fs::remove_all(dir);
}

TEST_CASE("reproduce at a tiny replication count is deterministic", "[cli]") {
    const auto dir = fs::temp_directory_path() / "footrule_cli_repro";
    fs::create_directories(dir);
    const auto a = dir / "a";
    const auto b = dir / "b";
    const auto r1 = run_cli("reproduce --table T1 --seed 42 --reps 16 --threads 1 --out " +
                            a.string());
    const auto r2 = run_cli("reproduce --table T1 --seed 42 --reps 16 --threads 4 --out " +
                            b.string());
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(a / "T1.csv") == slurp(b / "T1.csv"));
    CHECK(!slurp(a / "T1.csv").empty());
    fs::remove_all(dir);
}
