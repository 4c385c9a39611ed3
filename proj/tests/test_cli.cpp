#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "varjump/config.hpp"
#include "varjump/experiments.hpp"
#include "varjump/report.hpp"

using namespace varjump;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
    const ParsedConfig p = parse_config("");
    REQUIRE(p.ok());
    CHECK(p.config.grid_points == 256u);
    CHECK(p.config.seed == 7u);
    CHECK(p.config.kernel_spec == "sin");
    CHECK(p.config.formats == std::vector<std::string>{"csv"});
}

TEST_CASE("config round trips values and sections") {
    const std::string text =
        "[experiment]\n"
        "name = averaging-check\n"
        "seed = 11\n"
        "[grid]\n"
        "n = 2\n"
        "N = 128\n"
        "L = 1\n"
        "[sweep]\n"
        "lambda = 0.5, 1, 2\n"
        "q = 2, 3\n"
        "[output]\n"
        "dir = /tmp/x\n"
        "formats = csv,json\n";
    const ParsedConfig p = parse_config(text);
    REQUIRE(p.ok());
    CHECK(p.config.experiment == "averaging-check");
    CHECK(p.config.seed == 11u);
    CHECK(p.config.grid_points == 128u);
    CHECK(p.config.lambdas == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(p.config.qs == std::vector<double>{2.0, 3.0});
    CHECK(p.config.out_dir == "/tmp/x");
    REQUIRE(p.config.formats.size() == 2u);
}

TEST_CASE("non-power-of-two N is rejected with the constraint named") {
    const ParsedConfig p = parse_config("[grid]\nN = 100\n");
    REQUIRE_FALSE(p.ok());
    REQUIRE(p.errors.size() == 1u);
    CHECK(p.errors[0].line == 2);
    CHECK(p.errors[0].message.find("power of two") != std::string::npos);
}

TEST_CASE("duplicate keys report both line numbers") {
    const ParsedConfig p = parse_config("[grid]\nN = 64\nN = 128\n");
    REQUIRE_FALSE(p.ok());
    REQUIRE(p.errors.size() == 1u);
    CHECK(p.errors[0].line == 3);
    CHECK(p.errors[0].message.find("line 2") != std::string::npos);
}

TEST_CASE("unknown sections and keys are flagged") {
    const ParsedConfig p = parse_config("[bogus]\nx = 1\n[grid]\nfoo = 2\n");
    REQUIRE_FALSE(p.ok());
    CHECK(p.errors.size() == 3u);  // the section, its key, and grid.foo
    CHECK(p.errors[0].message.find("unknown section") != std::string::npos);
    CHECK(p.errors[2].message.find("unknown key 'grid.foo'") != std::string::npos);
}

TEST_CASE("kernel spec errors carry a position") {
    KernelSpecError err;
    parse_kernel_spec("twolevel:a=abc", 64, &err, true);
    CHECK(err.message.find("malformed") != std::string::npos);
    CHECK(err.position == 12);

    parse_kernel_spec("nosuch", 64, &err, true);
    CHECK(err.message.find("unknown kernel name") != std::string::npos);

    parse_kernel_spec("sin:oops=1", 64, &err, true);
    CHECK(err.message.find("unknown kernel parameter") != std::string::npos);

    const ParsedConfig p = parse_config("[kernel]\nspec = twolevel:a=abc\n");
    REQUIRE_FALSE(p.ok());
    CHECK(p.errors[0].line == 2);
    CHECK(p.errors[0].column > 0);
}

TEST_CASE("CLI two-level kernel matches the hand-evaluated decomposition") {
    SphereKernel k = parse_kernel_spec("twolevel:a=1.5,arc=0.5pi", 256, nullptr);
    CHECK(k.spherical_mean() == 0.0);
    const KernelDecomposition dec = omega_decomposition(k);
    REQUIRE(dec.pieces.size() == 1u);
    CHECK(dec.pieces[0].m == 1);
    CHECK(dec.pieces[0].coefficient == Catch::Approx(1.5 * kPi).epsilon(1e-12));
    for (std::size_t m = 0; m < k.node_count(); ++m)
        CHECK(dec.pieces[0].kernel.values[m] == Catch::Approx(k.values[m] / (1.5 * kPi)).margin(1e-13));
}

TEST_CASE("pi-suffixed numbers parse in kernel specs and lists") {
    SphereKernel k = parse_kernel_spec("atom:c=0,r=0.25pi", 256, nullptr);
    double sup = 0.0;
    for (double v : k.values) sup = std::max(sup, std::abs(v));
    CHECK(sup * (kPi / 2) <= 1.0 + 1e-12);

    const ParsedConfig p = parse_config("[sweep]\nlambda = 0.5pi\n");
    REQUIRE(p.ok());
    CHECK(p.config.lambdas == std::vector<double>{kPi / 2});
}

TEST_CASE("empty row set emits a header-only CSV and a 0-case summary") {
    ExperimentReport r;
    r.experiment = "dummy";
    r.columns = {"a", "b"};
    const std::string dir = "/tmp/varjump_test_empty";
    std::filesystem::remove_all(dir);
    emit_report(r, dir, {"csv"});
    CHECK(slurp(dir + "/dummy.csv") == "a,b\n");
    CHECK(slurp(dir + "/dummy_summary.txt").find("cases: 0") != std::string::npos);
}

TEST_CASE("svg plots contain data and envelope polylines") {
    SvgPlot plot{"decay", "R", "value", {}};
    plot.series.push_back({"measured", {1, 2, 4, 8}, {1.0, 0.5, 0.25, 0.125}});
    plot.series.push_back({"envelope", {1, 2, 4, 8}, {1.2, 0.6, 0.3, 0.15}, true});
    const std::string path = "/tmp/varjump_test_plot.svg";
    write_svg(plot, path);
    const std::string svg = slurp(path);
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++count;
        pos += 1;
    }
    CHECK(count == 2u);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("identical config and seed produce byte-identical reports") {
    ExperimentConfig cfg;
    cfg.experiment = "averaging-check";
    cfg.grid_points = 64;
    cfg.seed = 5;
    const ExperimentReport r1 = run_experiment(cfg);
    const ExperimentReport r2 = run_experiment(cfg);
    const std::string d1 = "/tmp/varjump_det_1", d2 = "/tmp/varjump_det_2";
    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
    emit_report(r1, d1, {"csv", "json"});
    emit_report(r2, d2, {"csv", "json"});
    CHECK(slurp(d1 + "/averaging-check.csv") == slurp(d2 + "/averaging-check.csv"));
    CHECK(slurp(d1 + "/averaging-check.json") == slurp(d2 + "/averaging-check.json"));
}

TEST_CASE("parallel sweeps are deterministic regardless of thread count") {
    ExperimentConfig cfg;
    cfg.experiment = "pointwise-check";
    cfg.trials = 500;
    cfg.seed = 3;
    const ExperimentReport r1 = run_experiment(cfg);
    setenv("VARJUMP_THREADS", "1", 1);
    const ExperimentReport r2 = run_experiment(cfg);
    unsetenv("VARJUMP_THREADS");
    REQUIRE(r1.rows.size() == r2.rows.size());
    CHECK(r1.rows == r2.rows);
}

TEST_CASE("under-resolved rotation is a deliberate negative control") {
    ExperimentConfig cfg;
    cfg.experiment = "rotation-check";
    cfg.grid_points = 64;
    cfg.rotation_nodes = 8;
    const ExperimentReport r = run_experiment(cfg);
    CHECK_FALSE(r.passed());
    REQUIRE_FALSE(r.verdicts.empty());
    CHECK_FALSE(r.verdicts[0].pass);  // measured residual reported either way
}

TEST_CASE("unknown experiment name is rejected in config validation") {
    const ParsedConfig p = parse_config("[experiment]\nname = not-an-experiment\n");
    REQUIRE_FALSE(p.ok());
    CHECK(p.errors[0].message.find("unknown experiment") != std::string::npos);
    CHECK_THROWS(run_experiment(ExperimentConfig{}));
}
