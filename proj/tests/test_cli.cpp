#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

const char* kCli = TORICDING_CLI_PATH;
const char* kData = TORICDING_DATA_DIR;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    namespace fs = std::filesystem;
    auto out_file = fs::temp_directory_path() / "toricding_cli_out.txt";
    std::string cmd = std::string(kCli) + " " + args + " > " + out_file.string() + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(status);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    fs::remove(out_file);
    return r;
}

std::string data(const std::string& rel) { return std::string(kData) + "/" + rel; }

}  // namespace

TEST_CASE("analyze: stable polygon exits 0 with exact alpha") {
    auto r = run("analyze " + data("bundled/p2.poly"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"alpha\": \"0\"") != std::string::npos);
    CHECK(r.out.find("UNIFORM_STABLE") != std::string::npos);
}

TEST_CASE("analyze: raw boundary interval is advisory") {
    auto r = run("analyze --raw " + data("raw/interval_m1_2.poly"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"alpha\": \"1\"") != std::string::npos);
    CHECK(r.out.find("SEMISTABLE_BOUNDARY") != std::string::npos);
}

TEST_CASE("analyze: non-reflexive without --raw is an error") {
    auto r = run("analyze " + data("raw/interval_m1_2.poly"));
    CHECK(r.exit_code == 1);
}

TEST_CASE("analyze: missing file exits 1") {
    auto r = run("analyze /nonexistent/file.poly");
    CHECK(r.exit_code == 1);
}

TEST_CASE("analyze --csv emits the exact row") {
    auto r = run("analyze --csv " + data("bundled/p2.poly"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("p2,2,9/2,2/9,0,0,0,UNIFORM_STABLE") != std::string::npos);
}

TEST_CASE("survey: bundled directory, determinism across job counts") {
    namespace fs = std::filesystem;
    auto out1 = fs::temp_directory_path() / "toricding_s1.csv";
    auto out4 = fs::temp_directory_path() / "toricding_s4.csv";
    auto r1 = run("survey --format csv --jobs 1 --out " + out1.string() + " " + data("bundled"));
    auto r4 = run("survey --format csv --jobs 4 --out " + out4.string() + " " + data("bundled"));
    CHECK(r1.exit_code == 0);
    CHECK(r4.exit_code == 0);
    std::ifstream a(out1), b(out4);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().find("UNSTABLE") == std::string::npos);
    fs::remove(out1);
    fs::remove(out4);
}

TEST_CASE("survey: missing directory exits 1") {
    CHECK(run("survey /nonexistent_dir").exit_code == 1);
}

TEST_CASE("eval: zero potential on the segment gives -log 2") {
    namespace fs = std::filesystem;
    auto tmp = fs::temp_directory_path() / "toricding_p1.poly";
    {
        std::ofstream out(tmp);
        out << "1 2\n-1\n1\n";
    }
    auto r = run("eval --potential zero --h 1/8 --nhalf 256 " + tmp.string());
    CHECK(r.exit_code == 0);
    auto pos = r.out.find("\"nonlinear_term\": ");
    REQUIRE(pos != std::string::npos);
    double v = std::atof(r.out.c_str() + pos + 18);
    CHECK(v == doctest::Approx(-0.6931471805599453).epsilon(1e-8));
    fs::remove(tmp);
}

TEST_CASE("eval: guillemin potential on P2 reports finite values and positive J") {
    auto r = run("eval --potential guillemin --h 1/6 " + data("bundled/p2.poly"));
    CHECK(r.exit_code == 0);
    auto pos = r.out.find("\"j_toric\": ");
    REQUIRE(pos != std::string::npos);
    double j = std::atof(r.out.c_str() + pos + 11);
    CHECK(j > 0);
}

TEST_CASE("eval: bad grid spacing exits 1") {
    CHECK(run("eval --h 0 " + data("bundled/p2.poly")).exit_code == 1);
    CHECK(run("eval --h -1/4 " + data("bundled/p2.poly")).exit_code == 1);
}

TEST_CASE("unknown flags are errors") {
    CHECK(run("analyze --definitely-not-a-flag " + data("bundled/p2.poly")).exit_code != 0);
}

TEST_CASE("probe: spike family on the unstable interval diverges for small eps") {
    auto r = run("probe --raw --family spike --vertex 1 --eps 0.05 --h 1/16 " +
                 data("raw/interval_m1_3.poly"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("DIVERGING") != std::string::npos);
}

TEST_CASE("probe: config file drives the experiment") {
    namespace fs = std::filesystem;
    auto cfg = fs::temp_directory_path() / "toricding_probe.cfg";
    {
        std::ofstream out(cfg);
        out << "# scaling probe\nfamily = scaling\nh = 1/16\neps = 0.5, 0.25\nparams = "
               "1,2,3,4,5,6,7,8\n";
    }
    auto r = run("probe --config " + cfg.string() + " " + data("bundled/p1xp1.poly"));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("FINITE") != std::string::npos);
    fs::remove(cfg);
}

TEST_CASE("minimize: writes trace and potential, reports monotone descent") {
    namespace fs = std::filesystem;
    auto tmp = fs::temp_directory_path() / "toricding_p1.poly";
    {
        std::ofstream out(tmp);
        out << "1 2\n-1\n1\n";
    }
    auto prefix = (fs::temp_directory_path() / "toricding_min").string();
    auto r = run("minimize --h 1/16 --steps 25 --out-prefix " + prefix + " " + tmp.string());
    CHECK(r.exit_code == 0);
    std::ifstream trace(prefix + ".trace");
    REQUIRE(trace.good());
    double step, value, prev = 1e300;
    bool monotone = true;
    while (trace >> step >> value) {
        if (value > prev + 1e-6) monotone = false;
        prev = value;
    }
    CHECK(monotone);
    std::ifstream pot(prefix + ".potential");
    REQUIRE(pot.good());
    fs::remove(tmp);
    fs::remove(prefix + ".trace");
    fs::remove(prefix + ".potential");
}

TEST_CASE("gen-bundled round trips through the parser") {
    namespace fs = std::filesystem;
    auto dir = fs::temp_directory_path() / "toricding_gen";
    auto r = run("gen-bundled --dir " + dir.string());
    CHECK(r.exit_code == 0);
    std::size_t count = 0;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".poly") ++count;
    CHECK(count == 5);
    auto r2 = run("survey --format csv " + dir.string());
    CHECK(r2.exit_code == 0);
    fs::remove_all(dir);
}
