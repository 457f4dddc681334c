// End-to-end tests of the command line tool; the binary path arrives via the
// CHEMOPP_CLI environment variable (set by ctest).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
    const char* p = std::getenv("CHEMOPP_CLI");
    REQUIRE_MESSAGE(p != nullptr, "CHEMOPP_CLI must point at the chemopp binary");
    return p;
}

struct RunResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

RunResult run(const std::string& args) {
    const fs::path log = fs::temp_directory_path() / "chemopp_cli_test.log";
    const std::string cmd = cli_path() + " " + args + " > " + log.string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    std::ifstream is(log);
    std::stringstream ss;
    ss << is.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "chemopp_cli" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::vector<double>> read_csv_rows(const fs::path& file, int columns) {
    std::ifstream is(file);
    REQUIRE(is.good());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 't' || line[0] == 'p') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(cell.empty() ? NAN : std::stod(cell));
        if (static_cast<int>(row.size()) >= columns) rows.push_back(std::move(row));
    }
    return rows;
}

std::string slurp(const fs::path& file) {
    std::ifstream is(file);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("simulate reduced writes csv and svg with provenance") {
    const fs::path dir = fresh_dir("sim_reduced");
    const RunResult r = run("simulate --system reduced --eps 1 --beta 4 --mu 1 --lambda 0.05 "
                            "--xi0 0.5 --eta0 0.5 --t 300 --out " + dir.string());
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "trajectory.csv");
    CHECK(csv.find("# seed=") != std::string::npos);
    CHECK(csv.find("# lambda=0.05") != std::string::npos);
    CHECK(csv.find("t,xi,eta") != std::string::npos);
    CHECK(fs::exists(dir / "phase.svg"));
    const auto rows = read_csv_rows(dir / "trajectory.csv", 3);
    CHECK(rows.size() > 100);
    for (const auto& row : rows) {
        CHECK(std::isfinite(row[1]));
        CHECK(row[1] >= -1e-9);
        CHECK(row[2] >= -1e-9);
    }
    // The svg carries exactly one polyline with one point per csv row.
    const std::string svg = slurp(dir / "phase.svg");
    size_t pts = 0;
    for (size_t pos = svg.find("<circle"); pos != std::string::npos;
         pos = svg.find("<circle", pos + 1))
        ++pts;
    CHECK(svg.find("<polyline") != std::string::npos);
}

TEST_CASE("simulate chemostat emits an exponentially decaying H column") {
    const fs::path dir = fresh_dir("sim_chemo");
    const RunResult r = run("simulate --system chemostat --C 2 --D 1 --a 1 --b 0.1 --m 1 "
                            "--A 1 --B 0.1 --M 2 --state0 1,1,1 --t 30 --format csv --out " +
                            dir.string());
    CHECK(r.exit_code == 0);
    const std::string head = slurp(dir / "trajectory.csv");
    CHECK(head.find("t,s,x,y,H") != std::string::npos);
    const auto rows = read_csv_rows(dir / "trajectory.csv", 5);
    REQUIRE(rows.size() > 10);
    const double h0 = rows.front()[4];
    for (const auto& row : rows) {
        const double expected = h0 * std::exp(-1.0 * row[0]);  // D = 1
        CHECK(std::abs(row[4] - expected) <= 1e-6 * (1.0 + std::abs(h0)));
    }
}

TEST_CASE("missing required flag exits 2") {
    CHECK(run("simulate --system reduced").exit_code == 2);
}

TEST_CASE("planar chemostat-parameter systems simulate from --state0") {
    for (const std::string system : {"surface", "logistic", "classical"}) {
        const fs::path dir = fresh_dir("sim_" + system);
        const RunResult r = run("simulate --system " + system +
                                " --state0 1,0.5 --t 20 --format csv --out " + dir.string());
        CHECK(r.exit_code == 0);
        CHECK(slurp(dir / "trajectory.csv").find("t,x,y") != std::string::npos);
        const auto rows = read_csv_rows(dir / "trajectory.csv", 3);
        CHECK(rows.size() > 5);
        for (const auto& row : rows) CHECK(std::isfinite(row[1]));
    }
}

TEST_CASE("invalid parameters exit 2 and name the violated invariant") {
    const RunResult r = run("simulate --system reduced --beta -1 --t 10");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("beta >= 0") != std::string::npos);
}

TEST_CASE("analyze reports the regime per lambda") {
    const fs::path dir = fresh_dir("analyze");
    const RunResult stable = run("analyze --eps 1 --beta 4 --mu 1 --lambda 1.5 --out " +
                                 dir.string());
    CHECK(stable.exit_code == 0);
    CHECK(stable.output.find("boundary-equilibrium-globally-stable") != std::string::npos);
    const std::string report = slurp(dir / "report.json");
    CHECK(report.find("\"regime\": \"boundary-equilibrium-globally-stable\"") != std::string::npos);

    const RunResult cyc = run("analyze --eps 1 --beta 4 --mu 1 --lambda 0.05 --out " +
                              dir.string());
    CHECK(cyc.exit_code == 0);
    CHECK(cyc.output.find("unique-stable-limit-cycle") != std::string::npos);
    const std::string cyc_report = slurp(dir / "report.json");
    CHECK(cyc_report.find("\"cycle\"") != std::string::npos);
    CHECK(cyc_report.find("\"period\"") != std::string::npos);

    const RunResult mid = run("analyze --eps 1 --beta 4 --mu 1 --lambda 0.3 --verify --out " +
                              dir.string());
    CHECK(mid.exit_code == 0);
    CHECK(mid.output.find("interior-equilibrium-globally-stable") != std::string::npos);
    CHECK(slurp(dir / "report.json").find("\"certificate\"") != std::string::npos);

    // lambda sitting exactly on the threshold reports the boundary case.
    const RunResult edge = run("analyze --eps 1 --beta 4 --mu 1 --lambda 0.112372435695795 "
                               "--out " + dir.string());
    CHECK(edge.exit_code == 0);
    CHECK(edge.output.find("boundary case") != std::string::npos);
    CHECK(slurp(dir / "report.json").find("\"boundary_case\": true") != std::string::npos);
}

TEST_CASE("sweep writes csv, sidecar and svg; compare-eps0 adds the diff") {
    const fs::path dir = fresh_dir("sweep");
    const RunResult r = run("sweep --eps 1 --beta 4 --mu 1 --param lambda --from 0.06 --to 0.51 "
                            "--points 4 --compare-eps0 --out " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "sweep.csv"));
    CHECK(fs::exists(dir / "sweep_spec.json"));
    CHECK(fs::exists(dir / "sweep.svg"));
    CHECK(fs::exists(dir / "diff_eps0.csv"));
    const std::string csv = slurp(dir / "sweep.csv");
    CHECK(csv.find("param_value,kind,") != std::string::npos);
    CHECK(csv.find("limit-cycle") != std::string::npos);
    CHECK(csv.find("interior-equilibrium") != std::string::npos);
}

TEST_CASE("sweep with an empty range exits 2") {
    CHECK(run("sweep --from 0.5 --to 0.5 --points 3").exit_code == 2);
}

TEST_CASE("verify quick run passes and records the seed") {
    const fs::path dir = fresh_dir("verify");
    const RunResult r = run("verify --draw-scale 0.05 --seed 2024 --json " +
                            (dir / "verify.json").string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("all checks passed") != std::string::npos);
    const std::string j = slurp(dir / "verify.json");
    CHECK(j.find("\"seed\": 2024") != std::string::npos);
    CHECK(j.find("\"all_pass\": true") != std::string::npos);
}

TEST_CASE("forced below-threshold case behaves as flagged") {
    const RunResult expected =
        run("verify --lambda-below-threshold --expect-certificate-fail");
    CHECK(expected.exit_code == 0);
    CHECK(expected.output.find("PASS") != std::string::npos);
    // Without the expectation flag, the failing certificate fails the suite.
    const RunResult unexpected = run("verify --lambda-below-threshold");
    CHECK(unexpected.exit_code == 1);
}

TEST_CASE("loose tolerances warn but the suite still passes") {
    const RunResult r = run("verify --draw-scale 0.05 --rel-tol 1.0 --abs-tol 1.0");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("loose integrator tolerances") != std::string::npos);
    CHECK(r.output.find("all checks passed") != std::string::npos);
}

TEST_CASE("config file values are overridden by flags") {
    const fs::path dir = fresh_dir("config");
    {
        std::ofstream os(dir / "run.conf");
        os << "lambda=0.3\nbeta=4\neps=1\nmu=1\n";
    }
    const RunResult from_file = run("analyze --config " + (dir / "run.conf").string() +
                                    " --out " + dir.string());
    CHECK(from_file.exit_code == 0);
    CHECK(from_file.output.find("interior-equilibrium-globally-stable") != std::string::npos);
    const RunResult overridden = run("analyze --config " + (dir / "run.conf").string() +
                                     " --lambda 1.5 --out " + dir.string());
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.output.find("boundary-equilibrium-globally-stable") != std::string::npos);
}
