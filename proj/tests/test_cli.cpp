#include "treeforms/cli.hpp"
#include "treeforms/errors.hpp"
#include "treeforms/selftest.hpp"

#include <doctest.h>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

using namespace treeforms;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json run_json(std::vector<std::string> args) {
    args.insert(args.begin(), {"--format", "json"});
    auto r = run(args);
    REQUIRE(r.code == exit_pass);
    return nlohmann::json::parse(r.out);
}

/// A file under the build tree, removed on scope exit.
struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content) : path("cli_test_" + name) {
        std::ofstream(path) << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("integer lists") {
    CHECK(parse_int_list("1,1", "--q") == std::vector<long long>{1, 1});
    CHECK(parse_int_list(" -2, 3 ", "--q") == std::vector<long long>{-2, 3});
    CHECK(parse_int_list("0,...,0", "--c", 4) == std::vector<long long>{0, 0, 0, 0});
    CHECK(parse_int_list("1,...,2", "--c", 3) == std::vector<long long>{1, 1, 2});
    CHECK_THROWS_AS(parse_int_list("1,x", "--q"), InvalidInput);
    CHECK_THROWS_AS(parse_int_list("1,2", "--q", 3), InvalidInput);
    CHECK_THROWS_AS(parse_int_list("0,...,0", "--c"), InvalidInput);
    CHECK_THROWS_AS(parse_int_list("...,0", "--c", 2), InvalidInput);
}

TEST_CASE("groups") {
    auto l12 = run_json({"groups", "--kind", "L", "--order", "1", "--labels", "2"});
    CHECK(l12["rank"] == 1);
    CHECK(l12["torsion"] == nlohmann::json::parse("[2, 2]"));
    CHECK(l12["generators"].size() == 4);
    CHECK(run_json({"groups", "--kind", "T", "--order", "0", "--labels", "2"})["rank"] == 3);
    CHECK(run_json({"groups", "--kind", "Tinf", "--order", "0", "--labels", "1"})["rank"] == 1);

    auto table = run({"groups", "--kind", "L", "--order", "1", "--labels", "2"});
    CHECK(table.code == exit_pass);
    CHECK(table.out.find("Z + Z2 + Z2") != std::string::npos);
}

TEST_CASE("usage errors and resource limits") {
    CHECK(run({}).code == exit_input);
    CHECK(run({"groups", "--kind", "X", "--order", "1", "--labels", "2"}).code == exit_input);
    CHECK(run({"groups", "--kind", "L", "--order", "1"}).code == exit_input);
    CHECK(run({"groups", "--kind", "L", "--order", "1", "--labels", "0"}).code == exit_input);
    CHECK(run({"--format", "xml", "groups", "--kind", "L", "--order", "0", "--labels", "1"}).code == exit_input);
    CHECK(run({"verify", "exact34"}).code == exit_input);
    auto limited = run({"--max-generators", "10", "groups", "--kind", "T", "--order", "3", "--labels", "3"});
    CHECK(limited.code == exit_resource);
    CHECK(limited.err.find("resource limit") != std::string::npos);
    CHECK(run({"--max-dimension", "5", "verify", "exact35", "--order", "1", "--labels", "2"}).code == exit_resource);
    CHECK(run({"--help"}).code == exit_pass);
}

TEST_CASE("verify") {
    auto exact = run({"verify", "exact35", "--order", "1", "--labels", "2"});
    CHECK(exact.code == exit_pass);
    CHECK(exact.out.rfind("PASS exact35", 0) == 0);
    CHECK(exact.out.find(" s)") != std::string::npos);

    CHECK(run({"verify", "cor420", "--order", "0", "--labels", "2"}).code == exit_pass);
    CHECK(run({"verify", "cor415", "--samples", "10"}).code == exit_pass);
    CHECK(run({"verify", "lemma41", "--labels", "2", "--samples", "20"}).code == exit_pass);
    CHECK(run({"verify", "exact35", "--order", "1"}).code == exit_input);

    auto j = run_json({"verify", "exact35", "--order", "0", "--labels", "1"});
    CHECK(j["pass"] == true);
    CHECK(j["certificate"][0]["detail"]["report"]["pass"] == true);
    // No timing in JSON, so repeated runs agree byte for byte.
    CHECK(run_json({"verify", "cor415", "--samples", "5", "--seed", "9"}).dump() ==
          run_json({"verify", "cor415", "--samples", "5", "--seed", "9"}).dump());
}

TEST_CASE("form invariants") {
    CHECK(run({"form", "tau", "--named", "E8", "--c", "0,...,0"}).out == "1\n");
    CHECK(run({"form", "tau", "--named", "E8"}).out == "1\n");
    CHECK(run({"form", "ks", "--named", "E8", "--tau", "0"}).out == "1\n");
    CHECK(run({"form", "tau", "--named", "diag(1)", "--c", "1"}).out == "0\n");
    CHECK(run({"form", "arf", "--dim", "2", "--q", "1,1"}).out == "1\n");
    CHECK(run({"form", "arf", "--q", "1,0,1,1"}).out == "1\n");
    CHECK(run({"form", "brown", "--mu", "1"}).out == "1\n");
    CHECK(run({"form", "brown", "--mu", "1,1"}).out == "2\n");
    CHECK(run({"form", "brown", "--q", "1,1"}).out == "4\n");

    auto j = run_json({"form", "tau", "--named", "diag(1,-1)"});
    CHECK(j["tau"] == 0);
    CHECK(j["signature"] == 0);

    CHECK(run({"form", "tau", "--named", "E8", "--c", "1,0"}).code == exit_input);
    CHECK(run({"form", "tau", "--named", "diag(1)", "--c", "0"}).code == exit_input);
    CHECK(run({"form", "tau", "--named", "diag(2)"}).code == exit_input);
    CHECK(run({"form", "arf", "--q", "1"}).code == exit_input);
    CHECK(run({"form", "brown", "--mu", "2"}).code == exit_input);
    CHECK(run({"form", "tau"}).code == exit_input);
}

TEST_CASE("form input files") {
    TempFile lattice("lattice.json", R"({"matrix": [[2, 1], [1, 1]]})");
    CHECK(run({"form", "tau", "--input", lattice.path}).code == exit_pass);

    TempFile arf("arf.json", R"({"form": [[0, 1], [1, 0]], "q": [1, 1]})");
    CHECK(run({"form", "arf", "--input", arf.path}).out == "1\n");

    TempFile brown("brown.json", R"({"form": [[1, 0], [0, 1]], "mu": [1, 3]})");
    CHECK(run({"form", "brown", "--input", brown.path}).out == "0\n");

    TempFile herm("form.json", R"({"A": {"generators": 1}, "M": {"generators": 1}, "lambda": [[[2]]]})");
    auto sym = run_json({"form", "universal", "--variant", "symmetric", "--input", herm.path});
    CHECK(sym["describe"] == "Z + Z2");
    CHECK(sym["refinement"]["group"]["rank"] == 1);
    CHECK(sym["exact_sequence"]["pass"] == true);
    auto com = run_json({"form", "universal", "--variant", "commutative", "--input", herm.path});
    CHECK(com["refinement"]["mu"].size() == 1);

    TempFile broken("broken.json", R"({"A": {"generators": 1}, "M": )");
    auto bad = run({"form", "universal", "--input", broken.path});
    CHECK(bad.code == exit_input);
    CHECK(bad.err.find("byte") != std::string::npos);

    TempFile missing("missing.json", R"({"A": {"generators": 1}, "M": {"generators": 1}})");
    auto m = run({"form", "universal", "--input", missing.path});
    CHECK(m.code == exit_input);
    CHECK(m.err.find("lambda") != std::string::npos);

    TempFile shape("shape.json", R"({"form": [[0, 1], [1, 0]]})");
    auto s = run({"form", "arf", "--input", shape.path});
    CHECK(s.code == exit_input);
    CHECK(s.err.find("'q'") != std::string::npos);

    CHECK(run({"form", "tau", "--input", "no_such_file.json"}).code == exit_input);
}

TEST_CASE("job runner keeps job order and honours the budget") {
    std::vector<Job> jobs;
    for (int i = 0; i < 6; ++i)
        jobs.push_back({"job " + std::to_string(i), [i] { return SuiteResult{"job " + std::to_string(i), i != 3, {}}; }});
    jobs.push_back({"limit", []() -> SuiteResult { throw ResourceLimit("too big"); }});
    auto out = run_jobs(jobs, 3);
    REQUIRE(out.size() == 7);
    for (int i = 0; i < 6; ++i) {
        CHECK(out[i].name == "job " + std::to_string(i));
        CHECK(out[i].pass() == (i != 3));
    }
    CHECK(out[6].status == JobOutcome::Status::resource_limit);

    std::vector<Job> slow{{"first", [] {
                               std::this_thread::sleep_for(std::chrono::milliseconds(50));
                               return SuiteResult{"first", true, {}};
                           }},
                          {"second", [] { return SuiteResult{"second", true, {}}; }}};
    auto budgeted = run_jobs(slow, 1, 0.01);
    CHECK(budgeted[0].pass());
    CHECK(budgeted[1].status == JobOutcome::Status::skipped);
}
