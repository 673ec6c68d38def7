#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

/** run the command-line tool with the given arguments, capturing standard output */
RunResult run(const std::string& args)
{
    const char* bin = std::getenv("CATSEYE_BIN");
    REQUIRE(bin != nullptr);
    std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t n;
    while((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int st = pclose(pipe);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

/** split CSV text (CRLF line endings) into rows of fields */
std::vector<std::vector<std::string>> parseCsv(const std::string& text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while(std::getline(in, line)) {
        if(!line.empty() && line.back() == '\r') line.pop_back();
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while(std::getline(ls, f, ',')) fields.push_back(f);
        if(!line.empty() && line.back() == ',') fields.push_back("");
        rows.push_back(fields);
    }
    return rows;
}

std::string valueOf(const std::vector<std::vector<std::string>>& rows, const std::string& key)
{
    for(const auto& r: rows)
        if(r.size() == 2 && r[0] == key) return r[1];
    return "";
}

}  // namespace

TEST_CASE("steady fields output") {
    RunResult r = run("steady --eps 0.5");
    REQUIRE(r.status == 0);
    auto rows = parseCsv(r.out);
    CHECK(rows.size() == 64 * 64 + 1);
    CHECK(r.out.find("\r\n") != std::string::npos);
    std::vector<std::string> header = {"x", "y", "psi", "omega", "u", "v", "eta", "gamma", "xi", "theta"};
    CHECK(rows[0] == header);
    double worst = 0;
    for(std::size_t i = 1; i < rows.size(); i++) {
        double eta = std::stod(rows[i][6]), gam = std::stod(rows[i][7]), xi = std::stod(rows[i][8]);
        worst = std::max(worst, std::fabs(eta * eta + gam * gam + xi * xi - 1));
    }
    CHECK(worst < 1e-12);
    // at eps = 0 the angle coordinate is x itself
    auto r0 = parseCsv(run("steady --eps 0 --nx 8 --ny 5").out);
    REQUIRE(r0.size() == 41);
    for(std::size_t i = 1; i < r0.size(); i++) {
        double x = std::stod(r0[i][0]), th = std::stod(r0[i][9]);
        double d = std::remainder(th - x, 2 * M_PI);
        CHECK(std::fabs(d) < 1e-12);
    }
}

TEST_CASE("exact spectrum listing") {
    auto rows = parseCsv(run("spectrum --exact --problem coperiodic --lmax 10").out);
    REQUIRE(rows.size() == 5);
    CHECK(std::stod(rows[1][0]) == 1);
    CHECK(std::stoi(rows[1][1]) == 3);
    CHECK(std::stod(rows[4][0]) == 10);
    CHECK(std::stoi(rows[4][1]) == 9);
    RunResult empty = run("spectrum --exact --problem coperiodic --lmax 0.5");
    CHECK(empty.status == 0);
    CHECK(parseCsv(empty.out).size() == 1);
}

TEST_CASE("Galerkin table") {
    // reference values for the first ten eigenvalues at eps = 0 .. 0.5
    const double ref[10][6] = {
        {0.0000, 0.0000, 0.0000, 0.0000, 0.0001, 0.0001},
        {0.0001, 0.0001, 0.0001, 0.0001, 0.0001, 0.0002},
        {0.0001, 0.0001, 0.0001, 0.0001, 0.0001, 0.0003},
        {0.6667, 0.6682, 0.6728, 0.6807, 0.6926, 0.7094},
        {0.8336, 0.8334, 0.8329, 0.8324, 0.8322, 0.8331},
        {0.9016, 0.9018, 0.9023, 0.9034, 0.9051, 0.9078},
        {0.9367, 0.9369, 0.9375, 0.9386, 0.9404, 0.9430},
        {0.9601, 0.9603, 0.9609, 0.9620, 0.9636, 0.9659},
        {0.9738, 0.9740, 0.9745, 0.9753, 0.9766, 0.9783},
        {0.9850, 0.9851, 0.9854, 0.9860, 0.9868, 0.9879}};
    RunResult r = run("spectrum --galerkin --problem coperiodic --N 7 --eps 0:0.5:0.1 --count 10");
    REQUIRE(r.status == 0);
    auto rows = parseCsv(r.out);
    REQUIRE(rows.size() == 11);
    CHECK(rows[0][1] == "eps=0");
    for(int i = 0; i < 10; i++)
        for(int j = 0; j < 6; j++)
            CHECK(std::fabs(std::stod(rows[i + 1][j + 1]) - ref[i][j]) < 5e-3);
}

TEST_CASE("quadratic-form verdicts") {
    auto even = parseCsv(run("forms --test even --k 1 --eps 0.5").out);
    CHECK(std::stod(valueOf(even, "total")) == doctest::Approx(-1.25 * M_PI * M_PI).epsilon(1e-8));
    CHECK(valueOf(even, "verdict") == "UNSTABLE(4pi)");
    auto coal = parseCsv(run("forms --coalescence --eps 0.7").out);
    CHECK(valueOf(coal, "verdict") == "COALESCENCE-UNSTABLE");
    auto half = parseCsv(run("forms --mod-half --eps 0.3").out);
    CHECK(std::stod(valueOf(half, "total")) == doctest::Approx(-0.625 * M_PI * M_PI).epsilon(1e-6));
    CHECK(valueOf(half, "verdict") == "UNSTABLE(modulational)");
}

TEST_CASE("JSON output schema and determinism") {
    RunResult a = run("spectrum --exact --problem multiperiodic --m 2 --lmax 3 --format json");
    REQUIRE(a.status == 0);
    auto j = nlohmann::json::parse(a.out);
    for(const char* key: {"program", "version", "command", "config", "tolerances"})
        CHECK(j["meta"].contains(key));
    CHECK(j["meta"]["command"] == "spectrum");
    REQUIRE(j["table"]["columns"].is_array());
    for(const auto& row: j["table"]["rows"])
        CHECK(row.size() == j["table"]["columns"].size());
    CHECK(run("spectrum --exact --problem multiperiodic --m 2 --lmax 3 --format json").out == a.out);
    CHECK(run("steady --eps 0.3 --nx 16 --ny 16").out == run("steady --eps 0.3 --nx 16 --ny 16").out);
}

TEST_CASE("output file") {
    std::string path = "catseye_cli_test_out.csv";
    std::remove(path.c_str());
    REQUIRE(run("spectrum --exact --problem coperiodic --lmax 3 -o " + path).status == 0);
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == run("spectrum --exact --problem coperiodic --lmax 3").out);
    std::remove(path.c_str());
}

TEST_CASE("usage errors") {
    CHECK(run("steady").status == 2);
    CHECK(run("steady --eps 1.5").status == 2);
    CHECK(run("spectrum --galerkin --problem coperiodic --eps 0.5:0.1:0.1").status == 2);
    CHECK(run("growth --alpha 0.5 --eps 0.3:0.1:0.1").status == 2);
    CHECK(run("forms --test sideways --eps 0.1").status == 2);
    CHECK(run("--no-such-flag").status == 2);
    CHECK(run("--help").status == 0);
}
