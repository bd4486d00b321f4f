#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kConfigDir = HSV_CONFIG_DIR;

std::string cli_path() {
    if (const char* env = std::getenv("HSV_CLI")) return env;
    return HSV_CLI_DEFAULT;
}

fs::path scratch_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("hsv_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path scratch_file(const std::string& stem) {
    static std::atomic<uint64_t> counter{0};
    return scratch_dir() / (stem + "_" + std::to_string(counter.fetch_add(1)));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    out << content;
}

struct CmdResult {
    int status = -1;
    std::string out;
    std::string err;
};

CmdResult run_cli(const std::string& args) {
    fs::path out = scratch_file("out");
    fs::path err = scratch_file("err");
    std::string cmd =
        cli_path() + " " + args + " >" + out.string() + " 2>" + err.string();
    int rc = std::system(cmd.c_str());
    CmdResult res;
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    res.status = WEXITSTATUS(rc);
    res.out = slurp(out);
    res.err = slurp(err);
    return res;
}

// operator[] with an empty json_pointer misbehaves; resolve the root by hand
json& node_at(json& j, const std::string& ptr) {
    return ptr.empty() ? j : j.at(json::json_pointer(ptr));
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

TEST_CASE("cli: greedy coloring of the 4-cycle") {
    CmdResult r = run_cli("color --graph " + kConfigDir + "/c4.txt");
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["n"] == 4);
    CHECK(j["num_classes"] == 2);
    CHECK(j["classes"] == json::parse("[[0,2],[1,3]]"));
    CHECK(j["valid"] == true);
    CHECK_FALSE(j.contains("gamma"));
}

TEST_CASE("cli: exact chromatic number of the triangle") {
    CmdResult r = run_cli("color --graph " + kConfigDir + "/k3.txt --exact");
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["gamma"] == 3);
    CHECK(j["num_classes"] == 3);

    CmdResult t = run_cli("color --graph " + kConfigDir + "/c4.txt --format text");
    REQUIRE(t.status == 0);
    CHECK(t.out.find("classes (2):") != std::string::npos);
    CHECK(t.out.find("class 0: 0 2") != std::string::npos);
}

TEST_CASE("cli: state amplitudes of the 4-cycle") {
    CmdResult r = run_cli("state --graph " + kConfigDir + "/c4.txt");
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    REQUIRE(j["amplitudes"].size() == 16);
    CHECK(j["phase_monomials"].size() == 4);
    // every amplitude is +-1/4, sign = parity of satisfied edges
    for (const auto& a : j["amplitudes"]) {
        REQUIRE(a.size() == 3);
        std::string bits = a[0].get<std::string>();
        REQUIRE(bits.size() == 4);
        double want = 0.25;
        int ones = 0;
        for (int e = 0; e < 4; ++e) {
            int u = e, v = (e + 1) % 4;
            if (bits[u] == '1' && bits[v] == '1') ++ones;
        }
        if (ones % 2 == 1) want = -0.25;
        CHECK(a[1].get<double>() == want);
        CHECK(a[2].get<double>() == 0.0);
    }
    CHECK(json::parse(r.out)["amplitudes"][0][0] == "0000");
}

TEST_CASE("cli: full-scale parameters print exactly") {
    CmdResult r = run_cli("params --n 9 --gamma 3 --r 2 --k 1 --format text");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("upsilon = 3\n") != std::string::npos);
    CHECK(r.out.find("epsilon = 1/729 (~") != std::string::npos);
    CHECK(r.out.find("k_j = 9565938 (~") != std::string::npos);
    CHECK(r.out.find("d = 20920706406*log(2) (~") != std::string::npos);

    CmdResult rj = run_cli("params --n 3 --gamma 3 --r 1 --k 1");
    REQUIRE(rj.status == 0);
    json j = json::parse(rj.out);
    CHECK(j["epsilon_exact"] == "1/27");
    CHECK(j["k_j_exact"] == "2187/2");
    CHECK(j["d_exact"] == "9565938*log(2)");
    CHECK(j["upsilon"] == 3);

    CmdResult r4 = run_cli("params --n 4 --gamma 3 --r 4 --k 2");
    REQUIRE(r4.status == 0);
    json j4 = json::parse(r4.out);
    CHECK(j4["epsilon_exact"] == "1/64");
    CHECK(j4["k_j_exact"] == "131072");
    CHECK(j4["d_exact"] == "286654464*log(2)");

    CmdResult r10 = run_cli("params --n 10 --gamma 3 --r 2 --k 1");
    REQUIRE(r10.status == 0);
    json j10 = json::parse(r10.out);
    CHECK(j10["epsilon_exact"] == "1/1000");
    CHECK(j10["epsilon_approx"].get<double>() == 0.001);
}

TEST_CASE("cli: class test on the honest state passes every trial") {
    CmdResult r = run_cli("test --graph " + kConfigDir +
                          "/k3.txt --class 0 --trials 200 --seed 3 --analytic");
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["passes"] == 200);
    CHECK(j["frequency"] == 1.0);
    CHECK(j["analytic"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["basis"] == "XZZ");

    CmdResult rc = run_cli("test --graph " + kConfigDir + "/c4.txt --cover " + kConfigDir +
                           "/c4_cover.json --class 1 --trials 50 --seed 1 --format csv");
    REQUIRE(rc.status == 0);
    auto lines = lines_of(rc.out);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "class,dual,basis,trials,passes,frequency,wilson_lo,wilson_hi,analytic");
    CHECK(lines[1].rfind("1,0,ZXZX,50,50,1,", 0) == 0);
}

TEST_CASE("cli: planted bad copy fools the case study at 1/7") {
    std::string base = "protocol --config " + kConfigDir + "/case_study.json";
    CmdResult r = run_cli(base);
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["protocol"] == "case_study");
    CHECK(j["trials"] == 1400);
    CHECK(j["seed"] == 20260814);
    CHECK(j["bad_elsewhere_accepts"] == 0);
    CHECK(j["bad_on_target_accepts"] == j["accepts"]);
    double accepts = j["accepts"].get<double>();
    // binomial(1400, 1/7): mean 200, sigma ~13.1
    CHECK(accepts > 200 - 66);
    CHECK(accepts < 200 + 66);

    // byte-identical rerun
    CmdResult r2 = run_cli(base);
    REQUIRE(r2.status == 0);
    CHECK(r2.out == r.out);
}

TEST_CASE("cli: transcripts are thread-count invariant and seed sensitive") {
    std::string base = "protocol --config " + kConfigDir +
                       "/case_study.json --trials 300 --seed 5";
    fs::path t1 = scratch_file("transcripts");
    fs::path t4 = scratch_file("transcripts");
    CmdResult r1 = run_cli(base + " --threads 1 --out " + t1.string());
    CmdResult r4 = run_cli(base + " --threads 4 --out " + t4.string());
    REQUIRE(r1.status == 0);
    REQUIRE(r4.status == 0);
    CHECK(slurp(t1) == slurp(t4));
    json j1 = json::parse(r1.out);
    json j4 = json::parse(r4.out);
    CHECK(j1["threads"] == 1);
    CHECK(j4["threads"] == 4);
    j1.erase("threads");
    j4.erase("threads");
    j1.erase("transcripts");
    j4.erase("transcripts");
    CHECK(j1.dump() == j4.dump());

    fs::path t5 = scratch_file("transcripts");
    CmdResult r5 = run_cli("protocol --config " + kConfigDir +
                           "/case_study.json --trials 300 --seed 6 --out " + t5.string());
    REQUIRE(r5.status == 0);
    CHECK(slurp(t5) != slurp(t1));
}

TEST_CASE("cli: transcript lines agree with the summary") {
    std::string cmd = "protocol --config " + kConfigDir +
                      "/case_study.json --trials 200 --out -";
    CmdResult r = run_cli(cmd);
    REQUIRE(r.status == 0);
    auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 201);  // one per trial plus the summary
    json summary = json::parse(lines.back());
    uint64_t accepts = 0;
    for (size_t i = 0; i + 1 < lines.size(); ++i) {
        json t = json::parse(lines[i]);
        REQUIRE(t["blocks"].size() == 6);
        REQUIRE(t["permutation"].size() == 7);
        bool all_pass = true;
        for (const auto& b : t["blocks"])
            if (b["pass"] == false) all_pass = false;
        CHECK(t["accept"] == all_pass);
        if (t["accept"] == true) ++accepts;
    }
    CHECK(summary["accepts"] == accepts);
    CHECK(summary["trials"] == 200);
}

TEST_CASE("cli: honest verification accepts with unit fidelity") {
    CmdResult r = run_cli("protocol --config " + kConfigDir + "/verification.json");
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["protocol"] == "verification");
    CHECK(j["accepts"] == 60);
    CHECK(j["frequency"] == 1.0);
    CHECK(j["threshold"] == doctest::Approx(0.6));
    CHECK(j["mean_target_fidelity"] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["mean_accepted_target_fidelity"] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cli: paper-scale configs are reported, never run") {
    CmdResult r = run_cli("protocol --config " + kConfigDir + "/paper.json");
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["rejected"] == true);
    CHECK(j["params"]["epsilon_exact"] == "1/729");
    CHECK(j["params"]["k_j_exact"] == "9565938");
    CHECK(j["params"]["d_exact"] == "20920706406*log(2)");
    CHECK(j["reason"].get<std::string>().find("not desk-executable") != std::string::npos);
}

TEST_CASE("cli: selftest passes") {
    CmdResult r = run_cli("selftest");
    REQUIRE(r.status == 0);
    CHECK(r.out.find("selftest ok") != std::string::npos);
}

TEST_CASE("cli: generator specs replace graph and cover files") {
    CmdResult r = run_cli("color --graph union_jack:2 --exact");
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["n"] == 13);
    CHECK(j["gamma"] == 3);
    CHECK(j["num_classes"] == 3);

    CmdResult t = run_cli(
        "test --graph union_jack:1 --cover union_jack:1 --class 2 --trials 40 --seed 5 "
        "--analytic");
    REQUIRE(t.status == 0);
    json tj = json::parse(t.out);
    CHECK(tj["passes"] == 40);
    CHECK(tj["analytic"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));

    CmdResult bad = run_cli("color --graph union_jack:0");
    CHECK(bad.status == 1);
    CHECK(bad.err.find("cells per side") != std::string::npos);
}

TEST_CASE("cli: an edge-free graph colors into a single class") {
    fs::path g = scratch_file("edgeless");
    spit(g, "5\n");
    CmdResult r = run_cli("color --graph " + g.string());
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["num_classes"] == 1);
    CHECK(j["classes"] == json::parse("[[0,1,2,3,4]]"));
}

TEST_CASE("cli: color output feeds back in as a cover file") {
    CmdResult color = run_cli("color --graph " + kConfigDir + "/c4.txt");
    REQUIRE(color.status == 0);
    fs::path cover = scratch_file("cover");
    spit(cover, color.out);
    CmdResult t = run_cli("test --graph " + kConfigDir + "/c4.txt --cover " + cover.string() +
                          " --class 0 --trials 30 --seed 2");
    REQUIRE(t.status == 0);
    json j = json::parse(t.out);
    CHECK(j["checked"] == json::parse("[0,2]"));
    CHECK(j["passes"] == 30);
}

TEST_CASE("cli: a Z error on a checked vertex fails its class test every trial") {
    CmdResult r = run_cli("test --graph " + kConfigDir + "/k3.txt --class 0 --state "
                          "'{\"kind\":\"z_error\",\"pattern\":\"100\"}' --trials 50 --seed 17 "
                          "--analytic");
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["passes"] == 0);
    CHECK(j["frequency"] == 0.0);
    CHECK(j["analytic"].get<double>() == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("cli: a fixed all-zeros prover decays with the group size") {
    auto acceptance = [&](uint64_t k_j) {
        fs::path cfg = scratch_file("decay");
        spit(cfg, R"({"protocol": "verification",
                      "hypergraph": {"n": 2, "edges": [[0, 1]]},
                      "cover": {"classes": [[0], [1]]},
                      "prover": {"kind": "fixed_state",
                                 "state": {"kind": "product", "string": "00"}},
                      "params": {"mode": "desk", "n_qubits": 2, "upsilon": 2,
                                 "k_j": )" + std::to_string(k_j) + R"(, "d": 0,
                                 "epsilon": 0.5, "r": 4},
                      "trials": 400, "seed": 101})");
        CmdResult r = run_cli("protocol --config " + cfg.string());
        REQUIRE(r.status == 0);
        return json::parse(r.out)["frequency"].get<double>();
    };
    double f4 = acceptance(4), f16 = acceptance(16), f64 = acceptance(64);
    CHECK(f4 > f16);
    CHECK(f16 >= f64);
    CHECK(f64 < 0.05);
}

TEST_CASE("cli: the maximally mixed ensemble passes a size-a class at 2^-a") {
    CmdResult one = run_cli("test --graph " + kConfigDir + "/k3.txt --class 0 --state "
                            "'{\"kind\":\"maximally_mixed\"}' --trials 600 --seed 31 "
                            "--analytic");
    REQUIRE(one.status == 0);
    json j1 = json::parse(one.out);
    CHECK(j1["analytic"].get<double>() == 0.5);
    CHECK(j1["frequency"].get<double>() > 0.4);
    CHECK(j1["frequency"].get<double>() < 0.6);

    CmdResult two = run_cli("test --graph " + kConfigDir + "/c4.txt --class 0 --state "
                            "'{\"kind\":\"maximally_mixed\"}' --trials 600 --seed 33 "
                            "--analytic");
    REQUIRE(two.status == 0);
    json j2 = json::parse(two.out);
    REQUIRE(j2["checked"].size() == 2);
    CHECK(j2["analytic"].get<double>() == 0.25);
    CHECK(j2["frequency"].get<double>() > 0.16);
    CHECK(j2["frequency"].get<double>() < 0.34);

    CmdResult bad = run_cli("test --graph " + kConfigDir + "/k3.txt --class 0 --state "
                            "'{\"kind\":\"maximally_mixed\",\"extra\":1}' --trials 5");
    CHECK(bad.status == 1);
}

TEST_CASE("cli: an honest case-study config accepts every trial") {
    fs::path cfg = scratch_file("honest");
    spit(cfg, R"({"protocol": "case_study",
                  "hypergraph": {"file": ")" + kConfigDir + R"(/k3.txt"},
                  "cover": {"greedy": true},
                  "k": 1, "trials": 300, "seed": 61})");
    CmdResult r = run_cli("protocol --config " + cfg.string());
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["accepts"] == 300);
    CHECK(j["frequency"] == 1.0);
    CHECK(j["single_bad_escape_rate"].get<double>() == doctest::Approx(1.0 / 7.0));
}

TEST_CASE("cli: trial tables carry per-trial decisions and counts") {
    fs::path table = scratch_file("table");
    CmdResult v = run_cli("protocol --config " + kConfigDir + "/verification.json --trials 8 "
                          "--trial-table " + table.string());
    REQUIRE(v.status == 0);
    std::vector<std::string> rows = lines_of(slurp(table));
    REQUIRE(rows.size() == 9);
    CHECK(rows[0] == "trial,accept,target_fidelity,k_0_0,k_0_2,k_1_1,k_1_3");
    for (size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].rfind(std::to_string(i - 1) + ",1,", 0) == 0);
        CHECK(rows[i].find(",4,4,4,4") != std::string::npos);  // honest: all K hit k_j
    }
    json vout = json::parse(v.out);
    CHECK(vout["completeness_bound"].get<double>() < 1.0);
    CHECK(vout["soundness_bound"].get<double>() == doctest::Approx(0.875));

    fs::path ctable = scratch_file("ctable");
    CmdResult c = run_cli("protocol --config " + kConfigDir + "/case_study.json --trials 10 "
                          "--trial-table " + ctable.string());
    REQUIRE(c.status == 0);
    std::vector<std::string> crows = lines_of(slurp(ctable));
    REQUIRE(crows.size() == 11);
    CHECK(crows[0] == "trial,accept,blocks_passed,bad_on_target");
    for (size_t i = 1; i < crows.size(); ++i) {
        CHECK(crows[i].rfind(std::to_string(i - 1) + ",", 0) == 0);
        CHECK(std::count(crows[i].begin(), crows[i].end(), ',') == 3);
    }
}

TEST_CASE("cli: register counts beyond the desk limit are refused cleanly") {
    fs::path big_k = scratch_file("bigk");
    spit(big_k, R"({"protocol": "case_study",
                    "hypergraph": {"n": 3, "edges": []},
                    "cover": {"classes": [[0], [1], [2]]},
                    "k": 4000000, "trials": 1, "seed": 1})");
    CmdResult r = run_cli("protocol --config " + big_k.string());
    CHECK(r.status == 1);
    CHECK(r.err.find("simulable limit") != std::string::npos);

    fs::path big_d = scratch_file("bigd");
    spit(big_d, R"({"protocol": "verification",
                    "hypergraph": {"n": 3, "edges": []},
                    "cover": {"classes": [[0], [1], [2]]},
                    "params": {"mode": "desk", "n_qubits": 3, "upsilon": 3, "k_j": 4,
                               "d": 99999999999, "epsilon": 0.8, "r": 2},
                    "trials": 1, "seed": 1})");
    CmdResult d = run_cli("protocol --config " + big_d.string());
    CHECK(d.status == 1);
    CHECK(d.err.find("simulable limit") != std::string::npos);
}

TEST_CASE("cli: bad invocations exit 1 with a message") {
    CmdResult none = run_cli("");
    CHECK(none.status == 1);

    CmdResult flag = run_cli("color --graph x --no-such-flag");
    CHECK(flag.status == 1);

    CmdResult missing = run_cli("color --graph " + kConfigDir + "/does_not_exist.txt");
    CHECK(missing.status == 1);
    CHECK(missing.err.rfind("error: ", 0) == 0);

    CmdResult malformed = run_cli("color --graph " + kConfigDir + "/bad_graph.txt");
    CHECK(malformed.status == 1);
    CHECK(malformed.err.find("is not an integer") != std::string::npos);

    CmdResult cls = run_cli("test --graph " + kConfigDir + "/k3.txt --class 7 --trials 10");
    CHECK(cls.status == 1);
    CHECK(cls.err.find("out of range") != std::string::npos);

    CmdResult fmt = run_cli("color --graph " + kConfigDir + "/c4.txt --format yaml");
    CHECK(fmt.status == 1);

    fs::path notjson = scratch_file("notjson");
    spit(notjson, "not json");
    CmdResult badcover = run_cli("test --graph " + kConfigDir + "/k3.txt --cover " +
                                 notjson.string() + " --class 0 --trials 2");
    CHECK(badcover.status == 1);
    CHECK(badcover.err.rfind("error: ", 0) == 0);

    CmdResult badset = run_cli("test --graph " + kConfigDir +
                               "/k3.txt --class 0 --s-set nope --trials 2");
    CHECK(badset.status == 1);
    CHECK(badset.err.rfind("error: ", 0) == 0);
}

// Frozen outputs for fixed configs: any byte drift in the CSV or JSON
// surfaces is a regression.
TEST_CASE("cli: golden files pin the output formats") {
    const std::string golden = HSV_GOLDEN_DIR;

    CmdResult csv = run_cli("test --graph " + kConfigDir + "/c4.txt --cover " + kConfigDir +
                            "/c4_cover.json --class 1 --trials 50 --seed 1 --analytic "
                            "--format csv");
    REQUIRE(csv.status == 0);
    CHECK(csv.out == slurp(golden + "/test_c4_class1.csv"));

    CmdResult summary = run_cli("protocol --config " + kConfigDir + "/case_study.json");
    REQUIRE(summary.status == 0);
    CHECK(summary.out == slurp(golden + "/case_study_summary.json"));

    fs::path table = scratch_file("goldtable");
    CmdResult v = run_cli("protocol --config " + kConfigDir + "/verification.json --trials 8 "
                          "--trial-table " + table.string());
    REQUIRE(v.status == 0);
    CHECK(slurp(table) == slurp(golden + "/verification_table.csv"));
}

// Every structural mutation of a valid config must be rejected with a
// path-tagged message (exit 1), never crash (exit 2). Dropping optional
// keys may legitimately still run, as may raw byte damage that lands on
// an unlucky digit.
TEST_CASE("cli: fuzzing the config schema never crashes the parser") {
    uint64_t total_mutants = 0;
    for (const char* name :
         {"case_study.json", "verification.json", "paper.json", "uj_generator.json"}) {
        std::string text = slurp(kConfigDir + "/" + std::string(name));
        json base = json::parse(text);

        std::vector<json> must_fail;
        std::vector<json> may_pass;

        // walk every object node by JSON pointer
        std::vector<std::string> object_ptrs;
        std::function<void(const json&, const std::string&)> walk =
            [&](const json& node, const std::string& ptr) {
                if (node.is_object()) {
                    object_ptrs.push_back(ptr);
                    for (auto it = node.begin(); it != node.end(); ++it)
                        walk(it.value(), ptr + "/" + it.key());
                } else if (node.is_array()) {
                    for (size_t i = 0; i < node.size(); ++i)
                        walk(node[i], ptr + "/" + std::to_string(i));
                }
            };
        walk(base, "");

        for (const std::string& ptr : object_ptrs) {
            json withextra = base;
            node_at(withextra, ptr)["zzz_unknown"] = 1;
            must_fail.push_back(withextra);
            const json& node = node_at(base, ptr);
            for (auto it = node.begin(); it != node.end(); ++it) {
                json nulled = base;
                node_at(nulled, ptr + "/" + it.key()) = nullptr;
                must_fail.push_back(nulled);
                json erased = base;
                node_at(erased, ptr).erase(it.key());
                may_pass.push_back(erased);
            }
        }
        // type confusion on every primitive leaf; strings become arrays
        // because some string fields legitimately also accept integers
        json flat = base.flatten();  // named: items() must not outlive its target
        for (const auto& [ptr, value] : flat.items()) {
            json flipped = base;
            node_at(flipped, ptr) = value.is_string() ? json::array({1, 2}) : json("x");
            must_fail.push_back(flipped);
            if (value.is_number()) {
                json neg = base;
                node_at(neg, ptr) = -1;
                must_fail.push_back(neg);
                // 2^40 overflows every count that is actually executed; the
                // register-limit guard has to turn it into a clean rejection
                json big = base;
                node_at(big, ptr) = 1099511627776ull;
                may_pass.push_back(big);
            }
        }

        uint64_t checked = 0;
        auto run_text = [&](const std::string& mutant, bool strict) {
            fs::path cfg = scratch_file("fuzz");
            spit(cfg, mutant);
            CmdResult r = run_cli("protocol --config " + cfg.string() + " --trials 2");
            ++checked;
            CAPTURE(name);
            CAPTURE(mutant);
            REQUIRE(r.status != 2);
            if (strict) {
                // schema rejections always carry a $-rooted path; runtime
                // refusals (register limits) surface on the may-pass side
                REQUIRE(r.status == 1);
                REQUIRE(r.err.find('$') != std::string::npos);
            }
            if (r.status == 1) REQUIRE(r.err.rfind("error: ", 0) == 0);
        };
        auto run_mutant = [&](const json& mutant, bool strict) {
            run_text(mutant.dump(), strict);
        };
        for (const json& m : must_fail) run_mutant(m, true);
        for (const json& m : may_pass) run_mutant(m, false);

        // raw byte damage: truncations and single-character substitutions.
        // These may still parse, so only the no-crash contract applies, and
        // error paths keep the $-tagged style.
        std::set<std::string> damaged;
        size_t len = text.size();
        REQUIRE(len > 0);
        for (size_t i = 1; i <= 80; ++i) damaged.insert(text.substr(0, len * i / 81));
        const char subs[] = {'{', '}', '"', ',', ':', 'x', '9', '-'};
        for (size_t i = 0; i < 120; ++i) {
            size_t pos = (i * 127 + 13) % len;
            std::string m = text;
            char c = subs[i % sizeof(subs)];
            if (m[pos] == c) c = 'q';
            m[pos] = c;
            damaged.insert(m);
        }
        for (const std::string& m : damaged) {
            fs::path cfg = scratch_file("fuzzraw");
            spit(cfg, m);
            CmdResult r = run_cli("protocol --config " + cfg.string() + " --trials 2");
            ++checked;
            CAPTURE(name);
            CAPTURE(m);
            REQUIRE(r.status != 2);
            if (r.status == 1) REQUIRE(r.err.rfind("error: ", 0) == 0);
        }

        CHECK(checked == must_fail.size() + may_pass.size() + damaged.size());
        total_mutants += checked;
    }
    CHECK(total_mutants >= 1000);
}
