#include "hsv/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace hsv {

using nlohmann::json;

std::string PaperParams::epsilon_exact() const { return "1/" + eps_den.to_string(); }

std::string PaperParams::kj_exact() const {
    BigUint half = kj_twice;
    uint32_t rem = half.halve();
    if (rem == 0) return half.to_string();
    return kj_twice.to_string() + "/2";
}

std::string PaperParams::d_exact() const { return d_coeff.to_string() + "*log(2)"; }

std::string PaperParams::to_json() const {
    json j;
    j["n_qubits"] = n_qubits;
    j["gamma"] = gamma;
    j["r"] = r;
    j["k"] = k;
    j["upsilon"] = upsilon;
    j["epsilon_exact"] = epsilon_exact();
    j["epsilon_approx"] = epsilon_approx;
    j["k_j_exact"] = kj_exact();
    j["k_j_approx"] = kj_approx;
    j["d_exact"] = d_exact();
    j["d_approx"] = d_approx;
    return j.dump();
}

PaperParams derive_paper_params(uint64_t n_qubits, uint64_t gamma, uint64_t r, uint64_t k) {
    if (n_qubits == 0 || gamma == 0 || r == 0 || k == 0)
        throw std::invalid_argument("derive_paper_params: all inputs must be positive");
    PaperParams p;
    p.n_qubits = n_qubits;
    p.gamma = gamma;
    p.r = r;
    p.k = k;
    p.upsilon = gamma * (gamma - 1) / 2;
    BigUint N(n_qubits);
    p.eps_den = BigUint::pow(N, 3);
    p.kj_twice = BigUint::pow(N, 7) * BigUint(r) * BigUint(r);
    p.d_coeff = BigUint(2) * BigUint::pow(N, 7) * BigUint::pow(BigUint(p.upsilon), 7) *
                BigUint(k) * BigUint(k);
    p.epsilon_approx = 1.0 / p.eps_den.to_double();
    p.kj_approx = p.kj_twice.to_double() / 2.0;
    p.d_approx = p.d_coeff.to_double() * std::log(2.0);
    return p;
}

void DeskParams::validate() const {
    if (n_qubits == 0) throw std::invalid_argument("params: n_qubits must be positive");
    if (upsilon == 0) throw std::invalid_argument("params: upsilon must be at least 1");
    if (k_j == 0) throw std::invalid_argument("params: k_j must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("params: epsilon must lie in (0,1)");
    if (!(r > 0.0)) throw std::invalid_argument("params: r must be positive");
    if (!(threshold() < 1.0))
        throw std::invalid_argument(
            "params: threshold 1/2 + (1-epsilon)/r must be below 1, or honest runs "
            "cannot accept");
}

ProverModel ProverModel::honest() { return {}; }

ProverModel ProverModel::iid_noisy(NoiseModel noise) {
    ProverModel m;
    m.kind = Kind::IidNoisy;
    m.noise = std::move(noise);
    return m;
}

ProverModel ProverModel::single_bad_copy(StateVector bad) {
    ProverModel m;
    m.kind = Kind::SingleBadCopy;
    m.bad_state = std::move(bad);
    return m;
}

ProverModel ProverModel::fixed_state(StateVector psi) {
    ProverModel m;
    m.kind = Kind::FixedState;
    m.fixed = std::move(psi);
    return m;
}

// Seed stream layout per trial: stream 0 is the adversary's, streams
// 1..total drive register preparation, total+1..2*total drive the
// measurements, and 2*total+1 drives the verifier's permutation. Each
// consumer owns a stream, so evaluation order never matters.
namespace {
constexpr uint64_t kAdversaryStream = 0;
// Each register holds a dense n-qubit state, so runs with more registers than
// this are not desk-executable and are refused up front.
constexpr uint64_t kMaxRegisters = 1'000'000;
uint64_t register_stream(uint64_t i) { return 1 + i; }
uint64_t measure_stream(uint64_t total, uint64_t i) { return 1 + total + i; }
uint64_t verifier_stream(uint64_t total) { return 2 * total + 1; }
}  // namespace

ProverSession::ProverSession(const ProverModel& model, const Hypergraph& h, uint64_t total,
                             uint64_t trial_seed)
    : model_(model), h_(h), total_(total), trial_seed_(trial_seed) {
    honest_ = build_state(h);
    switch (model.kind) {
        case ProverModel::Kind::SingleBadCopy: {
            if (model.bad_state.n != h.n())
                throw std::invalid_argument("prover: bad state size must match hypergraph");
            Rng adversary = Rng::derived(trial_seed, kAdversaryStream);
            bad_index_ = adversary.below(total);
            break;
        }
        case ProverModel::Kind::FixedState:
            if (model.fixed.n != h.n())
                throw std::invalid_argument("prover: fixed state size must match hypergraph");
            break;
        case ProverModel::Kind::IidNoisy:
            model.noise.validate(h.n());
            break;
        case ProverModel::Kind::Honest:
            break;
    }
}

StateVector ProverSession::state_at(uint64_t register_index) const {
    if (register_index >= total_)
        throw std::invalid_argument("ProverSession: register index out of range");
    switch (model_.kind) {
        case ProverModel::Kind::Honest:
            return honest_;
        case ProverModel::Kind::FixedState:
            return model_.fixed;
        case ProverModel::Kind::SingleBadCopy:
            return register_index == *bad_index_ ? model_.bad_state : honest_;
        case ProverModel::Kind::IidNoisy: {
            Rng reg_rng = Rng::derived(trial_seed_, register_stream(register_index));
            return sample_noisy_state(h_, model_.noise, reg_rng);
        }
    }
    throw std::logic_error("ProverSession: unreachable prover kind");
}

std::vector<TestConfig> config_schedule(uint32_t num_classes) {
    std::vector<TestConfig> schedule;
    for (uint32_t l = 0; l < num_classes; ++l) schedule.push_back({l, false});
    for (uint32_t l = 0; l < num_classes; ++l) schedule.push_back({l, true});
    return schedule;
}

namespace {

std::string bits_to_string(const std::vector<uint8_t>& bits) {
    std::string out(bits.size(), '0');
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out[i] = '1';
    return out;
}

json block_to_json(const CaseStudyBlock& b) {
    json j;
    j["register"] = b.register_index;
    j["group"] = b.group;
    j["class"] = b.config.class_index;
    j["dual"] = b.config.dual;
    j["pass"] = b.pass;
    j["checked"] = b.syndrome.vertices;
    j["syndrome"] = bits_to_string(b.syndrome.bits);
    return j;
}

}  // namespace

std::string CaseStudyTranscript::to_json_line() const {
    json j;
    j["seed"] = seed;
    j["k"] = k;
    j["permutation"] = permutation;
    j["target_register"] = target_register;
    j["accept"] = accept;
    if (bad_register) j["bad_register"] = *bad_register;
    if (bad_on_target) j["bad_on_target"] = *bad_on_target;
    j["blocks"] = json::array();
    for (const auto& b : blocks) j["blocks"].push_back(block_to_json(b));
    return j.dump();
}

CaseStudyTranscript run_case_study(const Hypergraph& h, const IndependenceCover& cover,
                                   uint32_t k, const ProverModel& prover,
                                   const CorrectableSet& s_set, Rng& rng) {
    if (cover.classes.size() != 3)
        throw std::invalid_argument("run_case_study: the cover must have exactly 3 classes");
    CoverCheck check = validate_cover(h, cover);
    if (!check.ok)
        throw std::invalid_argument("run_case_study: invalid cover: " + check.reason);
    if (k == 0) throw std::invalid_argument("run_case_study: k must be positive");
    if (6ull * k + 1 > kMaxRegisters)
        throw std::invalid_argument("run_case_study: register count 6k+1 exceeds the "
                                    "simulable limit of " + std::to_string(kMaxRegisters));

    CaseStudyTranscript t;
    t.k = k;
    t.seed = rng.next_u64();
    uint64_t total = 6ull * k + 1;
    ProverSession session(prover, h, total, t.seed);
    t.bad_register = session.bad_index();

    t.permutation.resize(total);
    std::iota(t.permutation.begin(), t.permutation.end(), 0);
    Rng verifier = Rng::derived(t.seed, verifier_stream(total));
    verifier.shuffle(t.permutation);
    t.target_register = t.permutation.back();
    if (t.bad_register) t.bad_on_target = (*t.bad_register == t.target_register);

    t.accept = true;
    for (uint64_t slot = 0; slot + 1 < total; ++slot) {
        CaseStudyBlock block;
        block.register_index = t.permutation[slot];
        block.group = static_cast<uint32_t>(slot / (2 * k));
        // Blocks of a group alternate the class's primary and dual
        // basis configuration.
        block.config = {block.group, (slot % 2) == 1};
        StateVector reg = session.state_at(block.register_index);
        Rng meas = Rng::derived(t.seed, measure_stream(total, block.register_index));
        TestOutcome outcome = run_config_test(reg, h, cover, block.config, s_set, meas);
        block.pass = outcome.pass;
        block.syndrome = outcome.syndrome;
        t.accept = t.accept && block.pass;
        t.blocks.push_back(std::move(block));
    }
    return t;
}

bool recount_case_study(const CaseStudyTranscript& t, const CorrectableSet& s_set) {
    bool accept = true;
    for (const auto& b : t.blocks) accept = accept && s_set.contains(b.syndrome.bits);
    return accept;
}

std::string VerifierTranscript::to_json_line() const {
    json j;
    j["seed"] = seed;
    j["n_qubits"] = params.n_qubits;
    j["upsilon"] = params.upsilon;
    j["k_j"] = params.k_j;
    j["d"] = params.d;
    j["epsilon"] = params.epsilon;
    j["r"] = params.r;
    j["threshold"] = threshold;
    j["discarded"] = discarded;
    j["target_register"] = target_register;
    j["accept"] = accept;
    j["target_fidelity"] = target_fidelity;
    j["groups"] = json::array();
    for (const auto& g : groups) {
        json gj;
        gj["group"] = g.group;
        gj["class"] = g.config.class_index;
        gj["dual"] = g.config.dual;
        gj["checked"] = g.checked;
        gj["k_counts"] = g.k_counts;
        gj["registers"] = g.registers;
        j["groups"].push_back(gj);
    }
    return j.dump();
}

VerifierTranscript run_verification(const Hypergraph& h, const IndependenceCover& cover,
                                    const DeskParams& params, const ProverModel& prover,
                                    Rng& rng) {
    params.validate();
    if (params.n_qubits != h.n())
        throw std::invalid_argument("run_verification: params.n_qubits must equal the "
                                    "hypergraph vertex count");
    CoverCheck check = validate_cover(h, cover);
    if (!check.ok)
        throw std::invalid_argument("run_verification: invalid cover: " + check.reason);

    // checked in __int128 so absurd inputs cannot wrap past the limit
    __int128 wide = static_cast<__int128>(params.upsilon) * params.k_j + params.d + 1;
    if (wide > static_cast<__int128>(kMaxRegisters))
        throw std::invalid_argument("run_verification: register count upsilon*k_j+d+1 "
                                    "exceeds the simulable limit of " +
                                    std::to_string(kMaxRegisters));
    uint64_t total = static_cast<uint64_t>(wide);

    VerifierTranscript t;
    t.params = params;
    t.threshold = params.threshold();
    t.seed = rng.next_u64();
    ProverSession session(prover, h, total, t.seed);

    std::vector<uint64_t> perm(total);
    std::iota(perm.begin(), perm.end(), 0);
    Rng verifier = Rng::derived(t.seed, verifier_stream(total));
    verifier.shuffle(perm);
    t.discarded.assign(perm.begin(), perm.begin() + params.d);
    t.target_register = perm[params.d];

    auto schedule = config_schedule(static_cast<uint32_t>(cover.classes.size()));
    StateVector honest = build_state(h);
    t.accept = true;
    for (uint32_t j = 0; j < params.upsilon; ++j) {
        VerificationGroup group;
        group.group = j;
        group.config = schedule[j % schedule.size()];
        BasisAssignment basis = config_basis(h, cover, group.config);
        if (!group.config.dual) {
            group.checked = cover.classes[group.config.class_index];
        } else {
            group.checked = checkable_vertices(h, basis);
        }
        std::sort(group.checked.begin(), group.checked.end());
        group.k_counts.assign(group.checked.size(), 0);
        uint64_t base = params.d + 1 + static_cast<uint64_t>(j) * params.k_j;
        for (uint64_t b = 0; b < params.k_j; ++b) {
            uint64_t reg = perm[base + b];
            group.registers.push_back(reg);
            StateVector state = session.state_at(reg);
            Rng meas = Rng::derived(t.seed, measure_stream(total, reg));
            TestOutcome outcome =
                run_config_test(state, h, cover, group.config, CorrectableSet::exact_zero(),
                                meas);
            for (size_t idx = 0; idx < group.checked.size(); ++idx)
                if (outcome.syndrome.bits[idx] == 0) ++group.k_counts[idx];
        }
        for (uint64_t count : group.k_counts) {
            double rate = static_cast<double>(count) / static_cast<double>(params.k_j);
            if (rate < t.threshold) t.accept = false;
        }
        t.groups.push_back(std::move(group));
    }
    t.target_fidelity = fidelity(session.state_at(t.target_register), honest);
    return t;
}

VerifierTranscript run_verification(const Hypergraph& h, const IndependenceCover& cover,
                                    const ProtocolParams& params, const ProverModel& prover,
                                    Rng& rng) {
    if (params.mode == ProtocolParams::Mode::Paper) {
        const PaperParams& p = params.paper;
        throw std::invalid_argument(
            "run_verification: paper-scale parameters are not desk-executable; derived "
            "counts: upsilon=" + std::to_string(p.upsilon) + ", epsilon=" +
            p.epsilon_exact() + ", k_j=" + p.kj_exact() + ", d=" + p.d_exact() +
            " (~" + std::to_string(p.d_approx) + " registers discarded alone)");
    }
    return run_verification(h, cover, params.desk, prover, rng);
}

bool recount_verification(const VerifierTranscript& t) {
    for (const auto& g : t.groups) {
        for (uint64_t count : g.k_counts) {
            double rate = static_cast<double>(count) / static_cast<double>(t.params.k_j);
            if (rate < t.threshold) return false;
        }
    }
    return true;
}

namespace {

// ||prod_{i in checked}(I+g_i)/2 |psi>||^2; the projection onto the
// simultaneous +1 eigenspace of the checked stabilizers.
double checked_subspace_projection(const StateVector& psi, const Hypergraph& h,
                                   const std::vector<uint32_t>& checked) {
    StateVector acc = psi;
    for (uint32_t i : checked) {
        StateVector g = acc;
        apply_stabilizer_g(g, h, i);
        for (uint64_t x = 0; x < acc.amps.size(); ++x)
            acc.amps[x] = 0.5 * (acc.amps[x] + g.amps[x]);
    }
    double norm2 = 0.0;
    for (const Amp& a : acc.amps) norm2 += std::norm(a);
    return norm2;
}

}  // namespace

std::string DetectabilityReport::to_json() const {
    json j;
    j["trials"] = trials;
    j["accepts"] = accepts;
    j["alpha"] = alpha;
    j["trace_bound"] = trace_bound;
    j["fidelity_bound"] = fidelity_bound;
    j["joint_below_trace"] = joint_below_trace;
    j["joint_below_fidelity"] = joint_below_fidelity;
    j["trace_ok"] = trace_ok;
    j["fidelity_ok"] = fidelity_ok;
    j["mean_accepted_projection"] = mean_accepted_projection;
    return j.dump();
}

DetectabilityReport detectability_check(const Hypergraph& h, const IndependenceCover& cover,
                                        uint32_t k, const ProverModel& prover,
                                        const CorrectableSet& s_set, double alpha,
                                        uint64_t trials, Rng& rng) {
    double floor_alpha = 1.0 / (6.0 * k + 1.0);
    if (!(alpha >= floor_alpha))
        throw std::invalid_argument(
            "detectability_check: alpha must be at least 1/(6k+1)");
    if (trials == 0) throw std::invalid_argument("detectability_check: trials must be positive");

    // Union of every vertex the schedule can check; with a partition
    // cover the primaries alone make this all of V, so the projector is
    // |H><H| itself.
    std::vector<uint32_t> checked_union;
    for (const TestConfig& cfg : config_schedule(static_cast<uint32_t>(cover.classes.size()))) {
        std::vector<uint32_t> checked;
        if (!cfg.dual) {
            checked = cover.classes[cfg.class_index];
        } else {
            checked = checkable_vertices(h, config_basis(h, cover, cfg));
        }
        checked_union.insert(checked_union.end(), checked.begin(), checked.end());
    }
    std::sort(checked_union.begin(), checked_union.end());
    checked_union.erase(std::unique(checked_union.begin(), checked_union.end()),
                        checked_union.end());

    DetectabilityReport rep;
    rep.trials = trials;
    rep.alpha = alpha;
    rep.trace_bound = 1.0 - 1.0 / (alpha * (6.0 * k + 1.0));
    rep.fidelity_bound = 1.0 / std::sqrt(alpha * (6.0 * k + 1.0));
    StateVector honest = build_state(h);
    double projection_sum = 0.0;
    for (uint64_t trial = 0; trial < trials; ++trial) {
        CaseStudyTranscript t = run_case_study(h, cover, k, prover, s_set, rng);
        if (!t.accept) continue;
        ++rep.accepts;
        ProverSession session(prover, h, 6ull * k + 1, t.seed);
        StateVector target = session.state_at(t.target_register);
        double proj = checked_subspace_projection(target, h, checked_union);
        double fid = fidelity(target, honest);
        projection_sum += proj;
        if (proj < rep.trace_bound) ++rep.joint_below_trace;
        if (fid < rep.fidelity_bound) ++rep.joint_below_fidelity;
    }
    rep.mean_accepted_projection =
        rep.accepts ? projection_sum / static_cast<double>(rep.accepts) : 0.0;
    // The bounds hold in joint form: Pr[accept AND below-bound] <= alpha.
    // Empirical frequencies get 3 sigma of counting slack.
    double sigma = std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(trials));
    rep.trace_ok =
        static_cast<double>(rep.joint_below_trace) / static_cast<double>(trials) <=
        alpha + 3.0 * sigma;
    rep.fidelity_ok =
        static_cast<double>(rep.joint_below_fidelity) / static_cast<double>(trials) <=
        alpha + 3.0 * sigma;
    return rep;
}

std::string CompletenessReport::to_json() const {
    json j;
    j["trials"] = trials;
    j["accepts"] = accepts;
    j["frequency"] = freq.point;
    j["wilson95"] = {freq.wilson95.lo, freq.wilson95.hi};
    j["bound"] = bound;
    j["pass"] = pass;
    return j.dump();
}

CompletenessReport completeness_experiment(const Hypergraph& h,
                                           const IndependenceCover& cover,
                                           const DeskParams& params, uint64_t trials,
                                           Rng& rng) {
    if (trials == 0)
        throw std::invalid_argument("completeness_experiment: trials must be positive");
    ProverModel honest = ProverModel::honest();
    CompletenessReport rep;
    rep.trials = trials;
    for (uint64_t trial = 0; trial < trials; ++trial) {
        VerifierTranscript t = run_verification(h, cover, params, honest, rng);
        if (t.accept) ++rep.accepts;
    }
    rep.freq = make_frequency_estimate(rep.accepts, trials);
    rep.bound = 1.0 - static_cast<double>(params.upsilon) *
                          static_cast<double>(params.n_qubits) *
                          hoeffding_tail(params.epsilon, params.r, params.k_j);
    double sigma = std::sqrt(rep.freq.point * (1.0 - rep.freq.point) /
                             static_cast<double>(trials));
    rep.pass = rep.freq.point >= rep.bound - 3.0 * sigma - 1e-12;
    return rep;
}

std::string SoundnessReport::to_json() const {
    json j;
    j["delta"] = delta;
    j["bound"] = bound;
    j["rows"] = json::array();
    for (const auto& row : rows) {
        json rj;
        rj["k_j"] = row.k_j;
        rj["trials"] = row.trials;
        rj["accepts"] = row.accepts;
        rj["joint_bad_accepts"] = row.joint_bad_accepts;
        rj["joint_freq"] = row.joint_freq;
        rj["mean_accepted_fidelity"] = row.mean_accepted_fidelity;
        j["rows"].push_back(rj);
    }
    return j.dump();
}

SoundnessReport soundness_experiment(const Hypergraph& h, const IndependenceCover& cover,
                                     DeskParams params, const std::vector<uint64_t>& kj_values,
                                     const ProverModel& prover, double delta, uint64_t trials,
                                     Rng& rng) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("soundness_experiment: delta must lie in (0,1)");
    SoundnessReport rep;
    rep.delta = delta;
    rep.bound = 1.0 - 1.0 / (static_cast<double>(params.n_qubits) *
                             static_cast<double>(params.upsilon));
    for (uint64_t kj : kj_values) {
        params.k_j = kj;
        SoundnessRow row;
        row.k_j = kj;
        row.trials = trials;
        double fid_sum = 0.0;
        for (uint64_t trial = 0; trial < trials; ++trial) {
            VerifierTranscript t = run_verification(h, cover, params, prover, rng);
            if (!t.accept) continue;
            ++row.accepts;
            fid_sum += t.target_fidelity;
            if (t.target_fidelity < 1.0 - delta) ++row.joint_bad_accepts;
        }
        row.joint_freq =
            static_cast<double>(row.joint_bad_accepts) / static_cast<double>(trials);
        row.mean_accepted_fidelity =
            row.accepts ? fid_sum / static_cast<double>(row.accepts) : 0.0;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace hsv
