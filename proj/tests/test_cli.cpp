#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "lipext/cli.hpp"
#include "lipext/io.hpp"
#include "lipext/metric_core.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
    json doc() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = lipext::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("lipext_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') quoted = !quoted;
            else if (c == ',' && !quoted) cells.push_back(std::exchange(cell, {}));
            else cell += c;
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

} // namespace

TEST_CASE("walsh example values") {
    const Run r = run({"walsh", "--k", "2", "--p", "2", "--verify-bounds"});
    REQUIRE(r.code == 0);
    const json d = r.doc();
    CHECK(d["tool"] == "lipext");
    CHECK(d["command"] == "walsh");
    CHECK(d["seed"] == 0);
    CHECK(d["params"]["k"] == 2);
    const json& res = d["result"];
    CHECK(res["lip"].get<double>() == doctest::Approx(1.41421356).epsilon(1e-8));
    CHECK(res["lower"].get<double>() == doctest::Approx(1.22474487).epsilon(1e-8));
    CHECK(res["upper"].get<double>() == doctest::Approx(1.41421356).epsilon(1e-8));
    CHECK(res["lower_ok"] == true);
    CHECK(res["upper_ok"] == true);
    CHECK(res["certified"] == true);
}

TEST_CASE("identical invocations give byte-identical output") {
    const std::vector<std::string> a = {"--seed", "7", "walsh", "--k", "3", "--p", "2", "--verify-bounds"};
    CHECK(run(a).out == run(a).out);
    const std::vector<std::string> q = {"quadform", "--random", "3,3,2", "--check-oracle", "--seed", "11"};
    const Run q1 = run(q);
    CHECK(q1.code == 0);
    CHECK(q1.out == run(q).out);
    const std::vector<std::string> s = {"suite", "--only", "1,9,mmatrix"};
    const Run s1 = run(s);
    CHECK(s1.code == 0);
    CHECK(s1.out == run(s).out);
}

TEST_CASE("seed changes randomized content") {
    const json a = run({"quadform", "--random", "2,2,2", "--seed", "1"}).doc();
    const json b = run({"quadform", "--random", "2,2,2", "--seed", "2"}).doc();
    CHECK(a["result"]["instance"] != b["result"]["instance"]);
    CHECK(a["seed"] == 1);
}

TEST_CASE("extend-forest on the sharp path instance") {
    const Run r = run({"extend-forest", "--path-n", "5", "--subset", "0,5"});
    REQUIRE(r.code == 0);
    const json res = r.doc()["result"];
    CHECK(res["m"] == 4);
    CHECK(res["ratio"] == 5.0);
    CHECK(res["achieved_lip"] == 5.0);
    CHECK(res["certified"] == true);
    CHECK(res["values"] == json::parse("[0,0,0,0,0,5]"));
    CHECK(res["edges"].size() == 4);
}

TEST_CASE("extend-forest with space and map files, JSON and CSV agree") {
    const auto space = lipext::path_space(3);
    const std::string sj = write("space.json", lipext::io::space_to_json(space).dump());
    const std::string sc = write("space.csv", lipext::io::matrix_to_csv(space.distances()));
    const std::string map = write("map.json", R"({"target": {"n": 2, "dist": [[0, 3], [3, 0]]}, "images": [0, 1]})");
    const Run a = run({"extend-forest", "--space", sj, "--subset", "0,3", "--map", map});
    const Run b = run({"extend-forest", "--space", sc, "--subset", "0,3", "--map", map});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.doc()["result"] == b.doc()["result"]);
    CHECK(a.doc()["result"]["values"] == json::parse("[0,0,0,1]"));
    CHECK(a.doc()["result"]["achieved_lip"] == 3.0);

    const std::string coords = write("coords.json", R"({"target_p": "inf", "images": [[0, 0], [1, 2]]})");
    const Run c = run({"extend-forest", "--space", sj, "--subset", "0,3", "--map", coords, "--format", "csv"});
    REQUIRE(c.code == 0);
    const auto rows = parse_csv(c.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == std::vector<std::string>{"x", "c0", "c1"});
    CHECK(rows[4] == std::vector<std::string>{"3", "1", "2"});
}

TEST_CASE("validation errors exit 2 with one line") {
    const Run r = run({"extend-forest", "--path-n", "4", "--subset", "0,9"});
    CHECK(r.code == 2);
    CHECK(r.err == "error: index 9 out of range for n=5\n");
    CHECK(r.out.empty());

    const Run u = run({"frobnicate", "--k", "2"});
    CHECK(u.code == 2);
    CHECK(u.err.find("unknown subcommand 'frobnicate'") != std::string::npos);

    const std::string bad = write("bad.json", R"({"matrix": [[3, -1], [-1)");
    const Run m = run({"mmatrix", "verify", "--file", bad});
    CHECK(m.code == 2);
    CHECK(m.err.find("malformed JSON") != std::string::npos);
    CHECK(std::count(m.err.begin(), m.err.end(), '\n') == 1);

    CHECK(run({"walsh"}).code == 2);
    CHECK(run({"walsh", "--k", "2", "--format", "xml"}).code == 2);
    CHECK(run({"walsh", "--k", "0"}).code == 2);
    CHECK(run({"walsh", "--k", "8", "--verify-bounds"}).code == 2);
    CHECK(run({"lemma42", "--k", "4"}).code == 2);
    CHECK(run({"mmatrix", "verify", "--file", (work_dir() / "missing.json").string()}).code == 2);
    CHECK(run({"extend-forest", "--subset", "0"}).code == 2);
    CHECK(run({"extend-forest", "--path-n", "3", "--subset", "0,x"}).code == 2);
    CHECK(run({"suite", "--only", "nothing"}).code == 2);
    CHECK(run({"suite", "other-suite"}).code == 2);
    CHECK(run({"quadform", "--random", "2,2"}).code == 2);
    CHECK(run({"transform-index", "--family", "cubic"}).code == 2);
    CHECK(run({"--tolerance", "-1", "walsh", "--k", "1"}).code == 2);
    const std::string prob = write("dup.json", R"({"points": [[0],[1]], "s": [0, 1], "images": [[0],[1]], "t": [1]})");
    CHECK(run({"extend-hilbert", "--problem", prob}).code == 2);
    CHECK(run({"mmatrix"}).code == 2);
}

TEST_CASE("non-certified results exit 3") {
    const std::string prob =
        write("walsh2.json", R"({"points": [[1,1,1],[-1,1,-1],[1,-1,-1],[-1,-1,1],[0,0,0]],
                                "s": [0,1,2,3], "images": [[1,1,1],[-1,1,-1],[1,-1,-1],[-1,-1,1]], "t": [4]})");
    const Run ok = run({"extend-hilbert", "--problem", prob, "--target-p", "1"});
    CHECK(ok.code == 0);
    CHECK(ok.doc()["result"]["optimal_lip"].get<double>() == doctest::Approx(std::sqrt(3.0)).epsilon(1e-5));
    const Run capped = run({"extend-hilbert", "--problem", prob, "--target-p", "1", "--max-iterations", "3"});
    CHECK(capped.code == 3);
    CHECK(capped.doc()["result"]["certified"] == false);
    CHECK(capped.doc()["exit_code"] == 3);

    const std::string nm = write("notm.json", R"({"matrix": [[1, -3], [-3, 1]]})");
    const Run m = run({"mmatrix", "verify", "--file", nm, "--checks", "classify"});
    CHECK(m.code == 0);
    CHECK(m.doc()["result"]["classify"]["verdict"] == "not an M-matrix");
    CHECK(run({"mmatrix", "verify", "--file", nm, "--checks", "thm61"}).code == 2);
}

TEST_CASE("suite reports and exits 1 on failure") {
    const Run r = run({"suite", "--only", "mmatrix", "--format", "csv"});
    CHECK(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][2] == "mmatrix");
    const Run zero = run({"--tolerance", "0", "suite", "--only", "3,9"});
    CHECK(zero.code == 1);
    const json c = zero.doc()["result"]["criteria"];
    CHECK(c[0]["passed"] == false);
    CHECK(c[1]["passed"] == true);
    CHECK(zero.doc()["result"]["all_passed"] == false);
    const json t = run({"suite", "--only", "10", "--timings"}).doc();
    CHECK(t["result"]["criteria"][0].contains("seconds"));
}

TEST_CASE("mmatrix subcommands") {
    const json tri = run({"mmatrix", "tridiagonal", "--m", "6"}).doc()["result"];
    CHECK(tri["lhs"].get<double>() == doctest::Approx(tri["expected"].get<double>()).epsilon(1e-9));
    CHECK(tri["rhs"].get<double>() == doctest::Approx(tri["expected"].get<double>()).epsilon(1e-9));
    CHECK(tri["classify"]["verdict"] == "M-matrix");

    const std::string f = write("tri3.json", R"({"matrix": [[3, -1, 0], [-1, 3, -1], [0, -1, 3]]})");
    const Run v = run({"mmatrix", "verify", "--file", f, "--checks", "thm61,lemma64,jacobi,ordering", "--k", "1", "--l", "3"});
    REQUIRE(v.code == 0);
    const json res = v.doc()["result"];
    CHECK(res["thm61"].size() == 1);
    CHECK(res["thm61"][0]["k"] == 1);
    CHECK(res["thm61"][0]["l"] == 3);
    CHECK(res["thm61"][0]["lhs"].get<double>() == doctest::Approx(2.0 / 21.0));
    CHECK(res["jacobi"]["holds"] == true);
    CHECK(res["all_hold"] == true);
    const std::string bare = write("bare.json", "[[2, -1], [-1, 2]]");
    CHECK(run({"mmatrix", "verify", "--file", bare}).code == 0);
    CHECK(run({"mmatrix", "verify", "--file", f, "--k", "1"}).code == 2);
    CHECK(run({"mmatrix", "verify", "--file", f, "--k", "1", "--l", "4"}).code == 2);
}

TEST_CASE("quadform from an instance file") {
    const std::string inst = write("chain.json", R"({"points": [[9], [-4], [0], [1]],
        "lambda": [[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], "free_set": [0, 1]})");
    const Run r = run({"quadform", "--instance", inst, "--check-oracle"});
    REQUIRE(r.code == 0);
    const json res = r.doc()["result"];
    CHECK(res["closed_form"].get<double>() == doctest::Approx(2.0 / 3.0));
    CHECK(res["oracle"].get<double>() == doctest::Approx(2.0 / 3.0));
    CHECK(res["sum_to_one_max_residual"].get<double>() <= 1e-15);
    CHECK(res["routes_agree"] == true);
}

TEST_CASE("transforms commands") {
    const Run t = run({"transform-index", "--family", "power", "--theta", "0.5", "--grid-max", "1e12"});
    REQUIRE(t.code == 0);
    CHECK(std::abs(t.doc()["result"]["beta"].get<double>() - 0.5) <= 0.02);
    CHECK(t.doc()["result"].contains("diagnostic"));
    CHECK(run({"transform-index", "--transform", "power:0.25"}).code == 0);

    const Run csv = run({"cf-table", "--family", "power", "--theta", "0.5", "--n-max", "64", "--format", "csv"});
    REQUIRE(csv.code == 0);
    const auto rows = parse_csv(csv.out);
    REQUIRE(rows.size() == 65);
    CHECK(rows[0] == std::vector<std::string>{"m", "D_F", "bound"});
    CHECK(rows[16] == std::vector<std::string>{"16", "4", "4"});
    const json js = run({"cf-table", "--family", "power", "--theta", "0.5", "--n-max", "64"}).doc();
    for (std::size_t m = 1; m <= 64; ++m)
        CHECK(lipext::io::parse_double(rows[m][2]) == js["result"]["rows"][m - 1]["bound"].get<double>());
}

TEST_CASE("--output writes the same bytes as stdout") {
    const std::string path = (work_dir() / "out.json").string();
    const Run direct = run({"lemma42", "--k", "2"});
    const Run to_file = run({"--output", path, "lemma42", "--k", "2"});
    CHECK(to_file.code == 0);
    CHECK(to_file.out.empty());
    std::ifstream in(path);
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(text == direct.out);
    CHECK(direct.doc()["result"]["exact_zero"] == true);
}

TEST_CASE("help and version") {
    const Run h = run({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("extend-forest") != std::string::npos);
    CHECK(run({"walsh", "--help"}).code == 0);
    const Run v = run({"--version"});
    CHECK(v.code == 0);
    CHECK(v.out.find("0.1.0") != std::string::npos);
}
