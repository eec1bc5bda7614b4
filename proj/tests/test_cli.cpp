#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "stopdur/fullinfo.hpp"
#include "stopdur/noinfo.hpp"
#include "stopdur/randomhorizon.hpp"

using json = nlohmann::json;
using namespace stopdur;

namespace {

struct run_result {
    int exit_code = -1;
    std::string out;
};

// stdout captured, stderr dropped; the binary path comes from the build
run_result run_cli(const std::string& args) {
    const std::string cmd =
        std::string(STOPDUR_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0)
        out.append(buf, got);
    const int status = pclose(pipe);
    run_result r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = out;
    return r;
}

json run_json(const std::string& args) {
    const run_result r = run_cli(args);
    REQUIRE(r.exit_code == 0);
    return json::parse(r.out);
}

std::vector<std::pair<std::string, std::string>>
parse_csv(const std::string& text) {
    std::vector<std::pair<std::string, std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        REQUIRE(comma != std::string::npos);
        rows.emplace_back(line.substr(0, comma), line.substr(comma + 1));
    }
    return rows;
}

} // namespace

TEST_CASE("json outputs validate against the shipped schema") {
    std::ifstream schema_file(STOPDUR_SCHEMA_PATH);
    REQUIRE(schema_file.good());
    const json schema = json::parse(schema_file);
    REQUIRE(schema.at("type") == "object");
    const std::regex key_pattern(
        schema.at("propertyNames").at("pattern").get<std::string>());

    // allowed value shapes, read off the schema's oneOf list
    std::vector<std::string> allowed;
    for (const auto& alt : schema.at("additionalProperties").at("oneOf"))
        allowed.push_back(alt.at("type").get<std::string>());

    auto type_of = [](const json& v) -> std::string {
        if (v.is_number()) return "number";
        if (v.is_string()) return "string";
        if (v.is_boolean()) return "boolean";
        if (v.is_array()) return "array";
        return "other";
    };

    const std::vector<std::string> invocations = {
        "noinfo-bc --n 10",
        "noinfo-bc --n 10 --recall",
        "noinfo-cob --n 10",
        "noinfo-cob --n 9 --recall",
        "noinfo-best2 --n 25",
        "noinfo-discount --beta 0.8",
        "fidp --n 6 --grid 256",
        "fidp --n 6 --grid 256 --recall",
        "bcdp --n 6 --grid 256",
        "rh-prior --prior uniform --n 6",
        "rh-prior --prior degenerate --n 6",
        "rh-prior --prior truncated-geometric --n 6 --p 0.2",
        "rh-prior --prior censored-geometric --n 6 --p 0.2",
        "rh-geometric --p 0.3",
        "rh-geometric --p 0.3 --alt-maturity",
        "best2-fixed --n 6 --grid 512",
        "best2-geometric --p 0.25",
        "simulate --model noinfo-bc --n 10 --samples 2000",
        "constants",
    };
    for (const auto& args : invocations) {
        CAPTURE(args);
        const json doc = run_json(args);
        REQUIRE(doc.is_object());
        CHECK(doc.size() >= 1);
        for (const auto& [key, value] : doc.items()) {
            CAPTURE(key);
            CHECK(std::regex_match(key, key_pattern));
            const std::string t = type_of(value);
            CHECK(std::find(allowed.begin(), allowed.end(), t) !=
                  allowed.end());
            if (value.is_array())
                for (const auto& elem : value) CHECK(elem.is_number());
        }
    }
}

TEST_CASE("numeric output equals the library result at printed precision") {
    const json best2 = run_json("noinfo-best2 --n 50");
    const two_thresholds sol = solve_best2(50);
    CHECK(best2.at("k1").get<int>() == sol.k1);
    CHECK(best2.at("k2").get<int>() == sol.k2);
    CHECK(best2.at("value").get<double>() ==
          doctest::Approx(sol.value).epsilon(1e-11));

    const json fi = run_json("fidp --n 6");
    CHECK(fi.at("value").get<double>() ==
          doctest::Approx(fidp_value(6).value_at_zero).epsilon(1e-11));
    CHECK(fi.at("thresholds").size() == 6);
    CHECK(fi.at("thresholds")[0].get<double>() ==
          doctest::Approx(fidp_threshold(6)).epsilon(1e-11));
    CHECK(fi.at("thresholds")[5].get<double>() == 0.0);

    const json bc = run_json("bcdp --n 6");
    CHECK(bc.at("thresholds")[4].get<double>() ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-11));
    CHECK(bc.at("quoted_thresholds")[4].get<double>() ==
          doctest::Approx(0.5).epsilon(1e-11));

    const json geo = run_json("best2-geometric --p 0.1");
    const best2_geometric_solution g = best2_geometric(0.1);
    CHECK(geo.at("threshold").get<double>() ==
          doctest::Approx(g.threshold).epsilon(1e-11));
    CHECK(geo.at("value").get<double>() ==
          doctest::Approx(g.value).epsilon(1e-11));
    CHECK(geo.at("reduction_threshold").get<double>() ==
          doctest::Approx(best2_reduction_threshold(0.1)).epsilon(1e-11));
}

TEST_CASE("csv output is a parameter,value table") {
    const run_result r = run_cli("constants --format csv");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 1 + 3 * 11);
    CHECK(rows[0].first == "parameter");
    CHECK(rows[0].second == "value");
    int diffs = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].first.ends_with("_abs_diff")) {
            ++diffs;
            // every recomputed constant lands near its quoted figure; the
            // one documented misprint stays under 1e-3
            CHECK(std::stod(rows[i].second) < 1e-3);
        }
    }
    CHECK(diffs == 11);

    const run_result arr = run_cli("rh-prior --prior uniform --n 4 --format csv");
    REQUIRE(arr.exit_code == 0);
    const auto arows = parse_csv(arr.out);
    CHECK(arows.size() == 1 + 3 + 4);
    CHECK(arows[4].first == "thresholds_1");
    CHECK(arows[7].first == "thresholds_4");
}

TEST_CASE("fixed seed reruns are byte-identical") {
    const std::string args =
        "simulate --model fidp --n 20 --samples 1000000 --seed 7";
    const run_result a = run_cli(args);
    const run_result b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);

    // bare invocations use the fixed default seed
    const run_result c = run_cli("simulate --model noinfo-bc --n 10 --samples 5000");
    const run_result d = run_cli("simulate --model noinfo-bc --n 10 --samples 5000");
    CHECK(c.out == d.out);
    CHECK(json::parse(c.out).at("seed").get<std::uint64_t>() == 123456789ull);

    // thread count must not change the artifact
    const std::string sim = "simulate --model best2-fixed --n 10 --samples 200000";
    const run_result t1 = run_cli(sim + " --threads 1");
    const run_result t3 = run_cli(sim + " --threads 3");
    CHECK(t1.out == t3.out);
    const run_result env = run_cli("--threads 2 " + sim);
    CHECK(env.out == t1.out);
}

TEST_CASE("exit codes separate config errors from numerical failures") {
    CHECK(run_cli("noinfo-bc --n 0").exit_code == 2);
    CHECK(run_cli("noinfo-bc").exit_code == 2);          // missing --n
    CHECK(run_cli("noinfo-discount --beta 1.0").exit_code == 2);
    CHECK(run_cli("rh-geometric --p 0").exit_code == 2);
    CHECK(run_cli("rh-prior --prior uniform --n 6 --badflag").exit_code == 2);
    CHECK(run_cli("rh-prior --prior unknown --n 6").exit_code == 2);
    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("--format yaml constants").exit_code == 2);
    CHECK(run_cli("").exit_code == 2);                   // subcommand required

    // a horizon draw beyond the cap is a numerical failure, not a config one
    CHECK(run_cli("simulate --model rh-geometric --p 1e-9 --samples 100")
              .exit_code == 3);

    const run_result help = run_cli("--help");
    CHECK(help.exit_code == 0);
    CHECK(help.out.find("noinfo-best2") != std::string::npos);
}

TEST_CASE("--out writes the artifact to a file and keeps stdout quiet") {
    const std::string path = "/tmp/stopdur_test_out.json";
    std::remove(path.c_str());
    const run_result direct = run_cli("noinfo-best2 --n 25");
    const run_result filed = run_cli("--out " + path + " noinfo-best2 --n 25");
    REQUIRE(filed.exit_code == 0);
    CHECK(filed.out.empty());
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str() == direct.out);
    std::remove(path.c_str());

    CHECK(run_cli("--out /nonexistent-dir/out.json constants").exit_code == 2);
}
