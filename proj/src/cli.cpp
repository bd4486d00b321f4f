#include "hsv/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hsv/hypergraph.hpp"
#include "hsv/protocol.hpp"
#include "hsv/run_config.hpp"
#include "hsv/stabilizer.hpp"
#include "hsv/state_sim.hpp"
#include "hsv/stats.hpp"

namespace hsv {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Generator specs ("union_jack:<L>") stand in for files wherever a
// graph or cover source is accepted.
std::optional<uint32_t> parse_union_jack_spec(const std::string& spec) {
    const std::string prefix = "union_jack:";
    if (spec.rfind(prefix, 0) != 0) return std::nullopt;
    std::string arg = spec.substr(prefix.size());
    uint32_t cells = 0;
    try {
        size_t used = 0;
        unsigned long v = std::stoul(arg, &used);
        if (used != arg.size() || v == 0 || v > 64) throw std::invalid_argument("range");
        cells = static_cast<uint32_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("'" + spec + "': cells per side must lie in 1..64");
    }
    return cells;
}

Hypergraph load_graph(const std::string& spec) {
    if (auto cells = parse_union_jack_spec(spec)) return union_jack(*cells).graph;
    return parse_hypergraph(read_file(spec));
}

IndependenceCover load_cover(const Hypergraph& h, const std::string& spec) {
    IndependenceCover cover;
    if (spec == "greedy") {
        cover = greedy_coloring(h);
    } else if (auto cells = parse_union_jack_spec(spec)) {
        cover = union_jack(*cells).cover;
    } else {
        cover = cover_from_json(read_file(spec));
    }
    CoverCheck check = validate_cover(h, cover);
    if (!check.ok) throw ConfigError("cover: " + check.reason);
    return cover;
}

json classes_to_json(const IndependenceCover& cover) {
    json out = json::array();
    for (const auto& cls : cover.classes) out.push_back(cls);
    return out;
}

struct ColorArgs {
    std::string graph;
    std::string order;
    bool exact = false;
    std::string format = "json";
};

void run_color(const ColorArgs& a) {
    Hypergraph h = load_graph(a.graph);
    if (a.exact && !a.order.empty())
        throw ConfigError("--order only applies to the greedy strategy");
    IndependenceCover cover;
    std::optional<uint32_t> gamma;
    if (a.exact) {
        ExactColoring ec = exact_chromatic_number(h);
        cover = ec.cover;
        gamma = ec.gamma;
    } else {
        std::vector<uint32_t> order;
        if (!a.order.empty()) {
            std::stringstream ss(a.order);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                try {
                    order.push_back(static_cast<uint32_t>(std::stoul(tok)));
                } catch (const std::exception&) {
                    throw ConfigError("--order: '" + tok + "' is not a vertex index");
                }
            }
        }
        cover = greedy_coloring(h, order);
    }
    CoverCheck check = validate_cover(h, cover);
    if (!check.ok) throw std::logic_error("produced an invalid cover: " + check.reason);
    if (a.format == "json") {
        json out;
        out["n"] = h.n();
        out["edges"] = json::parse(h.to_json()).at("edges");
        out["num_classes"] = cover.classes.size();
        out["classes"] = classes_to_json(cover);
        if (gamma) out["gamma"] = *gamma;
        out["valid"] = true;
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "n = " << h.n() << "\n";
        std::cout << "edges = " << h.to_edge_list() << "\n";
        std::cout << "classes (" << cover.classes.size() << "):\n";
        for (size_t i = 0; i < cover.classes.size(); ++i) {
            std::cout << "  class " << i << ":";
            for (uint32_t v : cover.classes[i]) std::cout << " " << v;
            std::cout << "\n";
        }
        if (gamma) std::cout << "gamma = " << *gamma << "\n";
    }
}

struct StateArgs {
    std::string graph;
    std::string format = "json";
};

void run_state(const StateArgs& a) {
    Hypergraph h = load_graph(a.graph);
    StateVector s = build_state(h);
    PhasePolynomial poly = PhasePolynomial::from_hypergraph(h);
    if (a.format == "json") {
        json out;
        out["n"] = h.n();
        out["amplitudes"] = json::parse(state_to_json(s));
        out["phase_monomials"] = json::array();
        for (const auto& m : poly.monomials) out["phase_monomials"].push_back(m);
        std::cout << out.dump() << "\n";
    } else {
        for (uint64_t x = 0; x < s.amps.size(); ++x) {
            std::string bits(h.n(), '0');
            for (uint32_t i = 0; i < h.n(); ++i)
                if ((x >> i) & 1) bits[i] = '1';
            std::cout << bits << " " << fmt_double(s.amps[x].real()) << " "
                      << fmt_double(s.amps[x].imag()) << "\n";
        }
    }
}

struct TestArgs {
    std::string graph;
    std::string cover = "greedy";
    uint32_t class_index = 0;
    bool dual = false;
    std::string state;
    std::string noise;
    std::string s_set;
    uint64_t trials = 1000;
    uint64_t seed = 0;
    bool analytic = false;
    std::string format = "json";
};

void run_test(const TestArgs& a) {
    Hypergraph h = load_graph(a.graph);
    IndependenceCover cover = load_cover(h, a.cover);
    if (!a.state.empty() && !a.noise.empty())
        throw ConfigError("--state and --noise are mutually exclusive");
    CorrectableSet s_set = a.s_set.empty() ? CorrectableSet::exact_zero()
                                           : CorrectableSet::from_json(a.s_set);
    TestConfig cfg{a.class_index, a.dual};
    if (a.class_index >= cover.classes.size())
        throw ConfigError("--class: index out of range, the cover has " +
                          std::to_string(cover.classes.size()) + " classes");
    BasisAssignment basis = config_basis(h, cover, cfg);
    std::vector<uint32_t> checked =
        cfg.dual ? checkable_vertices(h, basis) : cover.classes[cfg.class_index];
    std::sort(checked.begin(), checked.end());

    std::optional<NoiseModel> noise;
    StateVector fixed;
    bool mixed = false;
    if (!a.noise.empty()) {
        noise = noise_from_spec(a.noise, h.n());
    } else if (!a.state.empty()) {
        // {"kind": "maximally_mixed"} is an ensemble, not a state vector:
        // trials draw uniform basis states, which realize the same density
        // matrix, and the analytic route diagonalizes it directly.
        json sv = json::parse(a.state, nullptr, false);
        if (sv.is_object() && sv.value("kind", "") == "maximally_mixed") {
            if (sv.size() != 1) throw ConfigError("$: maximally_mixed takes no other keys");
            mixed = true;
        } else {
            fixed = state_from_spec(a.state, h);
        }
    } else {
        fixed = build_state(h);
    }

    uint64_t dim = uint64_t{1} << h.n();
    uint64_t passes = 0;
    for (uint64_t t = 0; t < a.trials; ++t) {
        Rng rng = Rng::derived(a.seed, t);
        StateVector s = noise ? sample_noisy_state(h, *noise, rng)
                              : (mixed ? make_basis_state(h.n(), rng.below(dim)) : fixed);
        TestOutcome outcome = run_config_test(s, h, cover, cfg, s_set, rng);
        if (outcome.pass) ++passes;
    }
    FrequencyEstimate freq = make_frequency_estimate(passes, a.trials);

    std::optional<double> exact;
    if (a.analytic) {
        Ensemble rho = noise ? z_noise_ensemble(h, *noise)
                             : (mixed ? Ensemble::maximally_mixed(h.n()) : Ensemble::pure(fixed));
        exact = analytic_pass_probability(rho, h, cover, cfg, s_set);
    }

    if (a.format == "json") {
        json out;
        out["class"] = cfg.class_index;
        out["dual"] = cfg.dual;
        out["basis"] = basis.to_string();
        out["checked"] = checked;
        out["trials"] = a.trials;
        out["passes"] = passes;
        out["frequency"] = freq.point;
        out["wilson95"] = {freq.wilson95.lo, freq.wilson95.hi};
        if (exact) out["analytic"] = *exact;
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "class,dual,basis,trials,passes,frequency,wilson_lo,wilson_hi,analytic\n";
        std::cout << cfg.class_index << "," << (cfg.dual ? 1 : 0) << "," << basis.to_string()
                  << "," << a.trials << "," << passes << "," << fmt_double(freq.point) << ","
                  << fmt_double(freq.wilson95.lo) << "," << fmt_double(freq.wilson95.hi) << ","
                  << (exact ? fmt_double(*exact) : "") << "\n";
    }
}

struct ProtocolArgs {
    std::string config;
    std::optional<uint64_t> seed;
    std::optional<uint64_t> trials;
    std::optional<uint32_t> threads;
    std::optional<std::string> out;
    std::optional<std::string> table;
    std::string format = "json";
};

struct TrialResult {
    bool accept = false;
    int8_t bad_on_target = -1;  // -1 = not applicable
    double target_fidelity = 0.0;
    std::string line;
    std::string table_header;  // identical across trials
    std::string table_row;     // without the leading trial index
};

void run_protocol(const ProtocolArgs& a) {
    RunConfig cfg = parse_run_config(read_file(a.config));
    if (a.seed) cfg.seed = *a.seed;
    if (a.trials) cfg.trials = *a.trials;
    if (a.threads) cfg.threads = *a.threads;
    if (a.out) cfg.transcripts_path = *a.out;

    if (cfg.protocol == RunConfig::Protocol::Verification &&
        cfg.params.mode == ProtocolParams::Mode::Paper) {
        // Full-scale parameters are reported, never executed.
        json out;
        out["protocol"] = "verification";
        out["rejected"] = true;
        out["reason"] =
            "paper-scale parameters are not desk-executable; derived counts follow";
        out["params"] = json::parse(cfg.params.paper.to_json());
        std::cout << out.dump() << "\n";
        return;
    }

    bool case_study = cfg.protocol == RunConfig::Protocol::CaseStudy;
    bool want_lines = cfg.transcripts_path.has_value();
    bool want_table = a.table.has_value();
    std::vector<TrialResult> results(cfg.trials);
    std::atomic<uint64_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;

    auto worker = [&]() {
        while (true) {
            uint64_t t = next.fetch_add(1);
            if (t >= cfg.trials) break;
            try {
                Rng trial_rng = Rng::derived(cfg.seed, t);
                TrialResult res;
                if (case_study) {
                    CaseStudyTranscript tr = run_case_study(cfg.hypergraph, cfg.cover, cfg.k,
                                                            cfg.prover, cfg.s_set, trial_rng);
                    if (recount_case_study(tr, cfg.s_set) != tr.accept)
                        throw std::logic_error("transcript recount disagrees with accept");
                    res.accept = tr.accept;
                    if (tr.bad_on_target) res.bad_on_target = *tr.bad_on_target ? 1 : 0;
                    if (want_lines) res.line = tr.to_json_line();
                    if (want_table) {
                        uint64_t blocks_passed = 0;
                        for (const CaseStudyBlock& b : tr.blocks)
                            if (b.pass) ++blocks_passed;
                        res.table_header = "trial,accept,blocks_passed,bad_on_target";
                        res.table_row = std::to_string(tr.accept ? 1 : 0) + "," +
                                        std::to_string(blocks_passed) + "," +
                                        (tr.bad_on_target
                                             ? std::to_string(*tr.bad_on_target ? 1 : 0)
                                             : std::string());
                    }
                } else {
                    VerifierTranscript tr = run_verification(cfg.hypergraph, cfg.cover,
                                                             cfg.params.desk, cfg.prover,
                                                             trial_rng);
                    if (recount_verification(tr) != tr.accept)
                        throw std::logic_error("transcript recount disagrees with accept");
                    res.accept = tr.accept;
                    res.target_fidelity = tr.target_fidelity;
                    if (want_lines) res.line = tr.to_json_line();
                    if (want_table) {
                        std::string header = "trial,accept,target_fidelity";
                        std::string row = std::to_string(tr.accept ? 1 : 0) + "," +
                                          fmt_double(tr.target_fidelity);
                        for (const VerificationGroup& g : tr.groups)
                            for (size_t i = 0; i < g.checked.size(); ++i) {
                                header += ",k_" + std::to_string(g.group) + "_" +
                                          std::to_string(g.checked[i]);
                                row += "," + std::to_string(g.k_counts[i]);
                            }
                        res.table_header = std::move(header);
                        res.table_row = std::move(row);
                    }
                }
                results[t] = std::move(res);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
                break;
            }
        }
    };

    uint32_t threads = std::max<uint32_t>(1, cfg.threads);
    std::vector<std::thread> pool;
    for (uint32_t i = 0; i + 1 < threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    uint64_t accepts = 0, bad_on_target_accepts = 0, bad_elsewhere_accepts = 0;
    bool have_bad = false;
    double fid_sum = 0.0, accepted_fid_sum = 0.0;
    for (const TrialResult& r : results) {
        if (r.accept) ++accepts;
        if (r.bad_on_target >= 0) {
            have_bad = true;
            if (r.accept && r.bad_on_target == 1) ++bad_on_target_accepts;
            if (r.accept && r.bad_on_target == 0) ++bad_elsewhere_accepts;
        }
        fid_sum += r.target_fidelity;
        if (r.accept) accepted_fid_sum += r.target_fidelity;
    }
    FrequencyEstimate freq = make_frequency_estimate(accepts, cfg.trials);

    if (cfg.transcripts_path) {
        if (*cfg.transcripts_path == "-") {
            for (const TrialResult& r : results) std::cout << r.line << "\n";
        } else {
            std::ofstream out(*cfg.transcripts_path, std::ios::binary);
            if (!out) throw ConfigError("cannot write file: " + *cfg.transcripts_path);
            for (const TrialResult& r : results) out << r.line << "\n";
        }
    }

    if (want_table) {
        std::ofstream out(*a.table, std::ios::binary);
        if (!out) throw ConfigError("cannot write file: " + *a.table);
        out << results[0].table_header << "\n";
        for (uint64_t t = 0; t < results.size(); ++t)
            out << t << "," << results[t].table_row << "\n";
    }

    // Bounds the run is compared against: for the case study the planted
    // copy escapes exactly when it lands on the computation slot; for
    // verification the honest union bound and the trace-distance floor.
    double case_study_escape = case_study ? 1.0 / (6.0 * cfg.k + 1.0) : 0.0;
    double completeness_bound = 0.0, soundness_bound = 0.0;
    if (!case_study) {
        const DeskParams& dp = cfg.params.desk;
        completeness_bound = 1.0 - static_cast<double>(dp.upsilon) * dp.n_qubits *
                                       hoeffding_tail(dp.epsilon, dp.r, dp.k_j);
        soundness_bound =
            1.0 - 1.0 / (static_cast<double>(dp.n_qubits) * static_cast<double>(dp.upsilon));
    }

    if (a.format == "json") {
        json out;
        out["protocol"] = case_study ? "case_study" : "verification";
        out["seed"] = cfg.seed;
        out["threads"] = cfg.threads;
        out["trials"] = cfg.trials;
        out["accepts"] = accepts;
        out["frequency"] = freq.point;
        out["wilson95"] = {freq.wilson95.lo, freq.wilson95.hi};
        if (case_study) {
            out["k"] = cfg.k;
            out["single_bad_escape_rate"] = case_study_escape;
            if (have_bad) {
                out["bad_on_target_accepts"] = bad_on_target_accepts;
                out["bad_elsewhere_accepts"] = bad_elsewhere_accepts;
            }
        } else {
            out["threshold"] = cfg.params.desk.threshold();
            out["completeness_bound"] = completeness_bound;
            out["soundness_bound"] = soundness_bound;
            out["mean_target_fidelity"] = fid_sum / static_cast<double>(cfg.trials);
            out["mean_accepted_target_fidelity"] =
                accepts ? accepted_fid_sum / static_cast<double>(accepts) : 0.0;
        }
        if (cfg.transcripts_path && *cfg.transcripts_path != "-")
            out["transcripts"] = *cfg.transcripts_path;
        std::cout << out.dump() << "\n";
    } else {
        if (case_study) {
            std::cout << "protocol,k,seed,trials,accepts,frequency,wilson_lo,wilson_hi,"
                         "single_bad_escape_rate,bad_on_target_accepts,bad_elsewhere_accepts\n";
            std::cout << "case_study," << cfg.k << "," << cfg.seed << "," << cfg.trials << ","
                      << accepts << "," << fmt_double(freq.point) << ","
                      << fmt_double(freq.wilson95.lo) << "," << fmt_double(freq.wilson95.hi)
                      << "," << fmt_double(case_study_escape) << ",";
            if (have_bad)
                std::cout << bad_on_target_accepts << "," << bad_elsewhere_accepts;
            else
                std::cout << ",";
            std::cout << "\n";
        } else {
            std::cout << "protocol,seed,trials,accepts,frequency,wilson_lo,wilson_hi,"
                         "threshold,completeness_bound,soundness_bound,mean_target_fidelity,"
                         "mean_accepted_target_fidelity\n";
            std::cout << "verification," << cfg.seed << "," << cfg.trials << "," << accepts
                      << "," << fmt_double(freq.point) << "," << fmt_double(freq.wilson95.lo)
                      << "," << fmt_double(freq.wilson95.hi) << ","
                      << fmt_double(cfg.params.desk.threshold()) << ","
                      << fmt_double(completeness_bound) << "," << fmt_double(soundness_bound)
                      << ","
                      << fmt_double(fid_sum / static_cast<double>(cfg.trials)) << ","
                      << fmt_double(accepts ? accepted_fid_sum / static_cast<double>(accepts)
                                            : 0.0)
                      << "\n";
        }
    }
}

struct ParamsArgs {
    uint64_t n = 0;
    uint64_t gamma = 0;
    uint64_t r = 0;
    uint64_t k = 0;
    std::string format = "json";
};

void run_params(const ParamsArgs& a) {
    PaperParams p = derive_paper_params(a.n, a.gamma, a.r, a.k);
    if (a.format == "json") {
        std::cout << p.to_json() << "\n";
    } else {
        char buf[64];
        std::cout << "n_qubits = " << p.n_qubits << "\n";
        std::cout << "gamma = " << p.gamma << "\n";
        std::cout << "r = " << p.r << "\n";
        std::cout << "k = " << p.k << "\n";
        std::cout << "upsilon = " << p.upsilon << "\n";
        std::snprintf(buf, sizeof(buf), "%.6g", p.epsilon_approx);
        std::cout << "epsilon = " << p.epsilon_exact() << " (~" << buf << ")\n";
        std::snprintf(buf, sizeof(buf), "%.6g", p.kj_approx);
        std::cout << "k_j = " << p.kj_exact() << " (~" << buf << ")\n";
        std::snprintf(buf, sizeof(buf), "%.6g", p.d_approx);
        std::cout << "d = " << p.d_exact() << " (~" << buf << ")\n";
    }
}

void check(bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("selftest: ") + what);
}

void run_selftest() {
    // Edgeless 3-vertex graph: every configuration can catch the
    // all-qubit phase flip, so a single planted copy is accepted exactly
    // when it lands on the computation slot.
    Hypergraph h(3);
    IndependenceCover cover;
    cover.classes = {{0}, {1}, {2}};
    CorrectableSet zero = CorrectableSet::exact_zero();

    ProverModel honest = ProverModel::honest();
    for (uint64_t t = 0; t < 30; ++t) {
        Rng rng = Rng::derived(7, t);
        CaseStudyTranscript tr = run_case_study(h, cover, 1, honest, zero, rng);
        check(tr.accept, "honest case-study run rejected");
        check(recount_case_study(tr, zero), "honest recount rejected");
    }

    StateVector bad = build_state(h);
    apply_pauli(bad, "ZZZ");
    ProverModel planted = ProverModel::single_bad_copy(bad);
    uint64_t accepts = 0;
    for (uint64_t t = 0; t < 200; ++t) {
        Rng rng = Rng::derived(11, t);
        CaseStudyTranscript tr = run_case_study(h, cover, 1, planted, zero, rng);
        if (tr.accept) {
            ++accepts;
            check(tr.bad_on_target.value_or(false), "accepted with the bad copy tested");
        }
    }
    check(accepts > 0 && accepts < 200, "planted-copy acceptance rate degenerate");

    UnionJack uj = union_jack(1);
    DeskParams desk;
    desk.n_qubits = uj.graph.n();
    desk.upsilon = 3;
    desk.k_j = 8;
    desk.d = 2;
    desk.epsilon = 0.8;
    desk.r = 2.0;
    for (uint64_t t = 0; t < 10; ++t) {
        Rng rng = Rng::derived(13, t);
        VerifierTranscript tr = run_verification(uj.graph, uj.cover, desk, honest, rng);
        check(tr.accept, "honest verification run rejected");
        check(tr.target_fidelity > 1.0 - 1e-9, "honest target fidelity below 1");
    }

    Rng r1 = Rng::derived(21, 0);
    Rng r2 = Rng::derived(21, 0);
    CaseStudyTranscript t1 = run_case_study(h, cover, 2, planted, zero, r1);
    CaseStudyTranscript t2 = run_case_study(h, cover, 2, planted, zero, r2);
    check(t1.to_json_line() == t2.to_json_line(), "identical seeds diverged");

    PaperParams p = derive_paper_params(3, 3, 1, 1);
    check(p.upsilon == 3, "upsilon for gamma=3");
    check(p.epsilon_exact() == "1/27", "epsilon exact string");
    check(p.kj_exact() == "2187/2", "k_j exact string");
    check(p.d_exact() == "9565938*log(2)", "d exact string");

    std::cout << "selftest ok\n";
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"hypergraph-state stabilizer tests and verification protocols"};
    app.require_subcommand(1);

    ColorArgs color_args;
    auto* color = app.add_subcommand("color", "color the primal graph into test classes");
    color->add_option("--graph", color_args.graph, "hypergraph edge-list file or generator spec union_jack:<L>")->required();
    color->add_option("--order", color_args.order, "comma-separated vertex order for greedy");
    color->add_flag("--exact", color_args.exact, "exact chromatic number (small graphs)");
    color->add_option("--format", color_args.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));

    StateArgs state_args;
    auto* state = app.add_subcommand("state", "print the hypergraph state amplitudes");
    state->add_option("--graph", state_args.graph, "hypergraph edge-list file or generator spec union_jack:<L>")->required();
    state->add_option("--format", state_args.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));

    TestArgs test_args;
    auto* test = app.add_subcommand("test", "run one class test configuration repeatedly");
    test->add_option("--graph", test_args.graph, "hypergraph edge-list file or generator spec union_jack:<L>")->required();
    test->add_option("--cover", test_args.cover, "cover JSON file, 'greedy', or union_jack:<L>");
    test->add_option("--class", test_args.class_index, "class index")->required();
    test->add_flag("--dual", test_args.dual, "use the swapped-basis configuration");
    test->add_option("--state", test_args.state, "state spec JSON (default: the hypergraph state)");
    test->add_option("--noise", test_args.noise, "noise model JSON; draws a fresh state per trial");
    test->add_option("--s-set", test_args.s_set, "correctable syndrome set JSON (default: zero)");
    test->add_option("--trials", test_args.trials, "number of trials")
        ->check(CLI::PositiveNumber);
    test->add_option("--seed", test_args.seed, "master seed");
    test->add_flag("--analytic", test_args.analytic,
                   "also compute the exact pass probability (Z-only noise)");
    test->add_option("--format", test_args.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));

    ProtocolArgs protocol_args;
    uint64_t seed_opt = 0, trials_opt = 0;
    uint32_t threads_opt = 0;
    std::string out_opt, table_opt;
    auto* protocol = app.add_subcommand("protocol", "run a full protocol from a config file");
    protocol->add_option("--config", protocol_args.config, "run config JSON file")->required();
    auto* seed_o = protocol->add_option("--seed", seed_opt, "override the config seed");
    auto* trials_o = protocol->add_option("--trials", trials_opt, "override the config trials")
                         ->check(CLI::PositiveNumber);
    auto* threads_o = protocol->add_option("--threads", threads_opt, "override the config threads")
                          ->check(CLI::Range(1, 256));
    auto* out_o = protocol->add_option("--out", out_opt,
                                       "write per-trial transcript JSONL here ('-' = stdout)");
    auto* table_o = protocol->add_option(
        "--trial-table", table_opt, "write a per-trial CSV table (decision, counts, fidelity)");
    protocol->add_option("--format", protocol_args.format, "summary format")
        ->check(CLI::IsMember({"json", "csv"}));

    ParamsArgs params_args;
    auto* params = app.add_subcommand("params", "derive exact full-scale protocol parameters");
    params->add_option("--n", params_args.n, "number of qubits")->required();
    params->add_option("--gamma", params_args.gamma, "chromatic number")->required();
    params->add_option("--r", params_args.r, "robustness parameter")->required();
    params->add_option("--k", params_args.k, "soundness exponent")->required();
    params->add_option("--format", params_args.format, "output format")
        ->check(CLI::IsMember({"json", "text"}));

    auto* selftest = app.add_subcommand("selftest", "run built-in protocol invariant checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*color) {
            run_color(color_args);
        } else if (*state) {
            run_state(state_args);
        } else if (*test) {
            run_test(test_args);
        } else if (*protocol) {
            if (*seed_o) protocol_args.seed = seed_opt;
            if (*trials_o) protocol_args.trials = trials_opt;
            if (*threads_o) protocol_args.threads = threads_opt;
            if (*out_o) protocol_args.out = out_opt;
            if (*table_o) protocol_args.table = table_opt;
            run_protocol(protocol_args);
        } else if (*params) {
            run_params(params_args);
        } else if (*selftest) {
            run_selftest();
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        // malformed user-supplied JSON (covers, state specs, s-sets)
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace hsv
