#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef HML_CLI_PATH
#error "HML_CLI_PATH must be defined"
#endif

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(HML_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("solve-u contract") {
    SECTION("default flags write the CSV and sidecar") {
        REQUIRE(run("solve-u --out /tmp/hml_u.csv") == 0);
        const std::string csv = slurp("/tmp/hml_u.csv");
        CHECK(csv.find("r,u,du_dr") != std::string::npos);
        // config comment + header + one row per node (default 4000)
        CHECK(count_lines(csv) == 4002);
        const std::string json = slurp("/tmp/hml_u.csv.json");
        CHECK(json.find("\"flagged\":false") != std::string::npos);
    }
    SECTION("rmax 3 cannot certify the asymptotic window and is flagged") {
        REQUIRE(run("solve-u --rmin 1e-4 --rmax 3 --nodes 1000 --out /tmp/hml_u3.csv") == 0);
        const std::string json = slurp("/tmp/hml_u3.csv.json");
        CHECK(json.find("\"flagged\":true") != std::string::npos);
    }
    SECTION("malformed flag exits 64") { CHECK(run("solve-u --nonsense 3") == 64); }
    SECTION("missing subcommand exits 64") { CHECK(run("") == 64); }
}

TEST_CASE("numeric-check subcommands succeed on their reference setups") {
    CHECK(run("identity-check --n 3 --count 20 --seed 5 --out /tmp/hml_id.json") == 0);
    CHECK(run("gauge-fix --n 4 --blocks 2 --seed 7 --out /tmp/hml_gf.json") == 0);
    CHECK(run("periods --q2 -1,0,1 --out /tmp/hml_per") == 0);
    CHECK(run("sf-consistency --pdot 1 --out /tmp/hml_sf.json") == 0);
    CHECK(run("stokes-check --pdot 1 --t 4 --nodes 3000 --out /tmp/hml_st.json") == 0);
    const std::string per = slurp("/tmp/hml_per.csv");
    CHECK(per.find("i,j,re_Z,im_Z,M_ij") != std::string::npos);
}

TEST_CASE("identical flags and seed give byte-identical output") {
    const std::string flags =
        "decay-scan --pdot 1 --tmin 4 --tmax 10 --tcount 6 --nr 80 --ntheta 32 --cells 800 "
        "--nodes 1200 ";
    REQUIRE(run(flags + "--out /tmp/hml_scan_a") == 0);
    REQUIRE(run(flags + "--out /tmp/hml_scan_b") == 0);
    CHECK(slurp("/tmp/hml_scan_a.json") == slurp("/tmp/hml_scan_b.json"));
    const std::string a = slurp("/tmp/hml_scan_a.csv");
    const std::string b = slurp("/tmp/hml_scan_b.csv");
    CHECK(a == b);
    CHECK(a.find("t,g_app,g_sf,diff,term_app_model,term_model_inf") != std::string::npos);
    // config block is echoed into both formats
    CHECK(a.find("# cmd=decay-scan") != std::string::npos);
    CHECK(slurp("/tmp/hml_scan_a.json").find("\"config\"") != std::string::npos);
}

TEST_CASE("complex coefficient parsing reaches the library") {
    CHECK(run("periods --q2 -1,0,0,0,1 --out /tmp/hml_per4") == 0);       // z^4 - 1
    CHECK(run("sf-consistency --pdot 0,1i --out /tmp/hml_sf_i.json") == 0);  // Pdot = i z
    const std::string json = slurp("/tmp/hml_sf_i.json");
    CHECK(json.find("\"rel_err\"") != std::string::npos);
}
