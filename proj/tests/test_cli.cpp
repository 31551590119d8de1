#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "loopsym/cli.hpp"
#include "loopsym/oracle.hpp"

using namespace loopsym;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("loopsym_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

cli::RunConfig small_oracle_config(const std::string& out) {
    cli::RunConfig cfg;
    cfg.input = "oracle";
    cfg.n_u = 17;
    cfg.n_v = 17;
    cfg.output_dir = out;
    return cfg;
}

}  // namespace

TEST_CASE("config files parse keys, comments, and tolerance overrides") {
    TempDir tmp;
    const fs::path cfg_path = tmp.path / "run.cfg";
    {
        std::ofstream out(cfg_path);
        out << "# a comment\n"
               "input = oracle\n"
               "c = 2.5\n"
               "N_u = 33\n"
               "n_v = 17\n"
               "lambda = 0.5 2 5\n"
               "lambda_raw = 1 0\n"
               "dstep = 1e-3\n"
               "tol.maurer-cartan = 0.125   # trailing comment\n"
               "out = somewhere\n";
    }
    const cli::RunConfig cfg = cli::load_config(cfg_path.string());
    CHECK(cfg.input == "oracle");
    CHECK(cfg.oracle_c == 2.5);
    CHECK(cfg.n_u == 33);
    CHECK(cfg.n_v == 17);
    CHECK(cfg.lambda_params == std::vector<double>{0.5, 2.0, 5.0});
    CHECK(cfg.lambda_raw.size() == 1);
    CHECK(cfg.lambda_raw[0] == cd(1.0, 0.0));
    CHECK(cfg.dstep == 1e-3);
    CHECK(cfg.tolerances.at("maurer-cartan") == 0.125);
    CHECK(cfg.output_dir == "somewhere");

    {
        std::ofstream out(cfg_path);
        out << "nonsense_key = 1\n";
    }
    CHECK_THROWS(cli::load_config(cfg_path.string()));
    {
        std::ofstream out(cfg_path);
        out << "c = notanumber\n";
    }
    CHECK_THROWS(cli::load_config(cfg_path.string()));
}

TEST_CASE("default tolerances exist for every report line") {
    for (const char* name : {"maurer-cartan", "constant-curvature", "normal-flatness", "path-independence",
                             "metric-agreement", "orthogonality", "quadric-constraint", "realness",
                             "sym-oracle-error", "transfer-oracle-error", "transfer-vs-sym"})
        CHECK(cli::default_tolerance(name, 0.03125) > 0.0);
    CHECK_THROWS(cli::default_tolerance("no-such-check", 0.1));
}

TEST_CASE("verify passes on the oracle and fails on a wrong-curvature file") {
    TempDir tmp;
    cli::RunConfig cfg = small_oracle_config(tmp.str());
    CHECK(cli::cmd_verify(cfg) == 0);
    CHECK(fs::exists(tmp.path / "verify_report.txt"));

    // component file whose header claims the wrong curvature
    const GridChart g = GridChart::make(-1.0, 1.0, -1.0, 1.0, 17, 17);
    ComponentForms cf = oracle::desitter_components(g);
    cf.spec.c = 2.0;  // data has curvature 1
    const fs::path file = tmp.path / "wrong_c.txt";
    write_components_file(file.string(), cf);

    cli::RunConfig file_cfg = cfg;
    file_cfg.input = file.string();
    CHECK(cli::cmd_verify(file_cfg) == 1);
    const std::string report = slurp(tmp.path / "verify_report.txt");
    CHECK(report.find("constant-curvature") != std::string::npos);
    CHECK(report.find("fail") != std::string::npos);
}

TEST_CASE("verify names the singular node of a zero-component file") {
    TempDir tmp;
    const GridChart g = GridChart::make(-1.0, 1.0, -1.0, 1.0, 5, 5);
    SpaceFormSpec sp;
    sp.m = 2; sp.k = 1; sp.r = 1; sp.s = 1; sp.epsilon = -1; sp.c = 1.0;
    const fs::path file = tmp.path / "zero.txt";
    write_components_file(file.string(), ComponentForms::zeros(sp, g));

    cli::RunConfig cfg = small_oracle_config(tmp.str());
    cfg.input = file.string();
    try {
        cli::cmd_verify(cfg);
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("coframe singular") != std::string::npos);
    }
}

TEST_CASE("sweep writes two meshes per lambda plus the diameter table") {
    TempDir tmp;
    cli::RunConfig cfg = small_oracle_config(tmp.str());
    cfg.lambda_params = {0.5, 2.0, 5.0};
    CHECK(cli::cmd_sweep(cfg) == 0);
    for (int i = 0; i < 3; ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "flambda_%02d_ambient.txt", i);
        CHECK(fs::exists(tmp.path / buf));
        std::snprintf(buf, sizeof buf, "flambda_%02d_snapshot.txt", i);
        CHECK(fs::exists(tmp.path / buf));
    }
    const std::string table = slurp(tmp.path / "collapse_diameters.txt");
    CHECK(std::count(table.begin(), table.end(), '\n') == 4);  // header + 3 rows

    // the exported ambient meshes read back as valid quadric meshes
    const ImmersionMesh mesh = read_mesh_file((tmp.path / "flambda_01_ambient.txt").string());
    CHECK(mesh.dim == 4);
    CHECK(mesh.target == TargetSpace::hyperbolic);
    CHECK(mesh.lambda.has_value());
}

TEST_CASE("sweep records off-locus rejections and keeps going") {
    TempDir tmp;
    cli::RunConfig cfg = small_oracle_config(tmp.str());
    cfg.lambda_raw = {cd(1.0, 0.0)};   // real lambda, but the locus is imaginary
    cfg.lambda_params = {2.0};
    CHECK(cli::cmd_sweep(cfg) == 0);
    CHECK(fs::exists(tmp.path / "flambda_00_ambient.txt"));
    CHECK(!fs::exists(tmp.path / "flambda_01_ambient.txt"));
    const std::string report = slurp(tmp.path / "sweep_report.txt");
    CHECK(report.find("rejected") != std::string::npos);

    // lambda = i: the ambient mesh degenerates to a point and only the
    // snapshot is rejected
    TempDir tmp3;
    cli::RunConfig collapse = small_oracle_config(tmp3.str());
    collapse.lambda_params = {1.0};
    CHECK(cli::cmd_sweep(collapse) == 0);
    CHECK(fs::exists(tmp3.path / "flambda_00_ambient.txt"));
    CHECK(!fs::exists(tmp3.path / "flambda_00_snapshot.txt"));
    const std::string table = slurp(tmp3.path / "collapse_diameters.txt");
    CHECK(table.find("0 1 ") != std::string::npos);  // diameter 0 at lambda = i

    // empty lambda list: no meshes, empty table, success
    TempDir tmp2;
    cli::RunConfig empty = small_oracle_config(tmp2.str());
    CHECK(cli::cmd_sweep(empty) == 0);
    CHECK(!fs::exists(tmp2.path / "flambda_00_ambient.txt"));
    const std::string empty_table = slurp(tmp2.path / "collapse_diameters.txt");
    CHECK(std::count(empty_table.begin(), empty_table.end(), '\n') == 1);
}

TEST_CASE("sym and transfer agree and their reports pass on the oracle") {
    TempDir tmp;
    cli::RunConfig cfg = small_oracle_config(tmp.str());
    cfg.n_u = 33;
    cfg.n_v = 33;
    // h is larger than the acceptance grids here; scale the oracle-error gates
    cfg.tolerances["sym-oracle-error"] = 5e-2;
    cfg.tolerances["transfer-oracle-error"] = 5e-2;
    cfg.tolerances["transfer-vs-sym"] = 1e-1;
    CHECK(cli::cmd_sym(cfg) == 0);
    CHECK(fs::exists(tmp.path / "sym_mesh.txt"));
    CHECK(cli::cmd_transfer(cfg) == 0);
    const std::string report = slurp(tmp.path / "transfer_report.txt");
    CHECK(report.find("transfer-vs-sym") != std::string::npos);
    CHECK(report.find("metric-agreement") != std::string::npos);
}

TEST_CASE("sym rejects an inadmissible curvature naming the interval") {
    TempDir tmp;
    const GridChart g = GridChart::make(-1.0, 1.0, -1.0, 1.0, 9, 9);
    SpaceFormSpec sp;
    sp.m = 2; sp.k = 1; sp.r = 0; sp.s = 0; sp.epsilon = 1; sp.c = 0.5;
    ComponentForms cf = ComponentForms::zeros(sp, g);
    for (std::size_t node = 0; node < g.count(); ++node) {
        cf.theta_u[node * 2 + 0] = 1.0;
        cf.theta_v[node * 2 + 1] = 1.0;
    }
    const fs::path file = tmp.path / "inadmissible.txt";
    write_components_file(file.string(), cf);

    cli::RunConfig cfg = small_oracle_config(tmp.str());
    cfg.input = file.string();
    try {
        cli::cmd_sym(cfg);
        CHECK(false);
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("(-inf,0) u (1,inf)") != std::string::npos);
    }
    CHECK_THROWS_AS(cli::cmd_transfer(cfg), std::domain_error);
}

TEST_CASE("identical configs produce byte-identical outputs") {
    TempDir a, b;
    cli::RunConfig ca = small_oracle_config(a.str());
    cli::RunConfig cb = small_oracle_config(b.str());
    CHECK(cli::cmd_sym(ca) == 0);
    CHECK(cli::cmd_sym(cb) == 0);
    CHECK(slurp(a.path / "sym_mesh.txt") == slurp(b.path / "sym_mesh.txt"));
    CHECK(slurp(a.path / "sym_report.txt") == slurp(b.path / "sym_report.txt"));
}

TEST_CASE("argv entry point dispatches subcommands and reports bad usage") {
    TempDir tmp;
    const std::string out = tmp.str();
    const char* ok[] = {"loopsym", "oracle-selftest", "--out", out.c_str(), "--grid", "9x9"};
    CHECK(cli::run(6, ok) == 0);
    CHECK(fs::exists(tmp.path / "oracle_selftest_report.txt"));

    const char* bad[] = {"loopsym", "no-such-command"};
    CHECK(cli::run(2, bad) != 0);

    const char* badgrid[] = {"loopsym", "verify", "--grid", "nonsense"};
    CHECK(cli::run(4, badgrid) == 2);
}
