#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsv/bignum.hpp"
#include "hsv/hypergraph.hpp"
#include "hsv/stabilizer.hpp"
#include "hsv/state_sim.hpp"
#include "hsv/stats.hpp"

namespace hsv {

// Full-scale parameters, kept exact: epsilon = 1/N^3, k_j = N^7 r^2 / 2,
// d = 2 N^7 upsilon^7 k^2 * log 2 with upsilon = gamma(gamma-1)/2.
// Rationals and the log-2 coefficient are reported as exact big
// integers; doubles are attached only as approximations.
struct PaperParams {
    uint64_t n_qubits = 0;
    uint64_t gamma = 0;
    uint64_t r = 0;
    uint64_t k = 0;

    uint64_t upsilon = 0;
    BigUint eps_den;    // epsilon = 1 / eps_den
    BigUint kj_twice;   // k_j = kj_twice / 2
    BigUint d_coeff;    // d = d_coeff * ln 2

    double epsilon_approx = 0.0;
    double kj_approx = 0.0;
    double d_approx = 0.0;

    std::string epsilon_exact() const;  // "1/125"
    std::string kj_exact() const;       // "1093" or "2187/2"
    std::string d_exact() const;        // "286654464*log(2)"
    std::string to_json() const;
};

PaperParams derive_paper_params(uint64_t n_qubits, uint64_t gamma, uint64_t r, uint64_t k);

// Desk-scale parameters: anything positive with upsilon >= 1 and
// threshold 1/2 + (1-epsilon)/r below 1.
struct DeskParams {
    uint32_t n_qubits = 0;
    uint32_t upsilon = 1;
    uint64_t k_j = 1;
    uint64_t d = 0;
    double epsilon = 0.5;
    double r = 2.0;

    double threshold() const { return 0.5 + (1.0 - epsilon) / r; }
    void validate() const;
};

struct ProtocolParams {
    enum class Mode { Desk, Paper };
    Mode mode = Mode::Desk;
    DeskParams desk;
    PaperParams paper;
};

struct ProverModel {
    enum class Kind { Honest, IidNoisy, SingleBadCopy, FixedState };
    Kind kind = Kind::Honest;
    NoiseModel noise;       // IidNoisy
    StateVector bad_state;  // SingleBadCopy
    StateVector fixed;      // FixedState

    static ProverModel honest();
    static ProverModel iid_noisy(NoiseModel noise);
    static ProverModel single_bad_copy(StateVector bad);
    static ProverModel fixed_state(StateVector psi);
};

// Registers for one protocol run. Register states derive from
// per-register seed streams, so they are reproducible regardless of the
// order the protocol consumes them.
class ProverSession {
public:
    ProverSession(const ProverModel& model, const Hypergraph& h, uint64_t total,
                  uint64_t trial_seed);
    StateVector state_at(uint64_t register_index) const;
    std::optional<uint64_t> bad_index() const { return bad_index_; }
    uint64_t total() const { return total_; }

private:
    ProverModel model_;  // copied: sessions outlive caller temporaries
    Hypergraph h_;
    StateVector honest_;
    uint64_t total_ = 0;
    uint64_t trial_seed_ = 0;
    std::optional<uint64_t> bad_index_;
};

// The scheduled configurations, primary of every class then dual of
// every class. Case-study groups alternate their class's pair;
// verification group j is bound to schedule[j mod 2m].
std::vector<TestConfig> config_schedule(uint32_t num_classes);

struct CaseStudyBlock {
    uint64_t register_index = 0;
    uint32_t group = 0;  // class index
    TestConfig config;
    bool pass = false;
    Syndrome syndrome;
};

struct CaseStudyTranscript {
    uint64_t seed = 0;
    uint32_t k = 0;
    std::vector<uint64_t> permutation;  // register index per slot; last slot = computation
    uint64_t target_register = 0;
    std::vector<CaseStudyBlock> blocks;  // 6k entries
    bool accept = false;
    std::optional<uint64_t> bad_register;  // single-bad-copy provers only
    std::optional<bool> bad_on_target;

    std::string to_json_line() const;
};

// One run of the 6k+1-register case study: a uniformly random
// permutation assigns 2k registers to each class group and one to the
// computation slot; group blocks alternate the class's primary and dual
// configuration; accept iff all 6k tests pass. Requires a validated
// cover with exactly three classes.
CaseStudyTranscript run_case_study(const Hypergraph& h, const IndependenceCover& cover,
                                   uint32_t k, const ProverModel& prover,
                                   const CorrectableSet& s_set, Rng& rng);

// Re-evaluates the accept decision from the recorded blocks; equals
// `accept` by construction.
bool recount_case_study(const CaseStudyTranscript& t, const CorrectableSet& s_set);

struct VerificationGroup {
    uint32_t group = 0;
    TestConfig config;
    std::vector<uint32_t> checked;            // stabilizer vertices i
    std::vector<uint64_t> k_counts;           // K_ij per checked vertex
    std::vector<uint64_t> registers;          // register indices used
};

struct VerifierTranscript {
    uint64_t seed = 0;
    DeskParams params;
    std::vector<uint64_t> discarded;
    uint64_t target_register = 0;
    std::vector<VerificationGroup> groups;
    double threshold = 0.0;
    bool accept = false;
    double target_fidelity = 0.0;  // oracle fidelity of the target register to |H>

    std::string to_json_line() const;
};

// One verification run with upsilon * k_j + d + 1 registers: d
// discarded, one target, the rest split into upsilon groups of k_j.
// Group j is bound to one scheduled configuration; K_ij counts
// registers in group j whose syndrome bit for stabilizer i is 0.
// Accept iff every K_ij / k_j >= 1/2 + (1-epsilon)/r. The target
// register's fidelity to |H> stands in for the target computation.
VerifierTranscript run_verification(const Hypergraph& h, const IndependenceCover& cover,
                                    const DeskParams& params, const ProverModel& prover,
                                    Rng& rng);

// Paper-mode execution is refused: the thrown message carries the
// derived register counts.
VerifierTranscript run_verification(const Hypergraph& h, const IndependenceCover& cover,
                                    const ProtocolParams& params, const ProverModel& prover,
                                    Rng& rng);

bool recount_verification(const VerifierTranscript& t);

// Detectability bounds, evaluated in joint form: over `trials` runs the
// frequency of (accept AND target projection/fidelity below the bound)
// must stay within alpha. The projection is onto the checked-stabilizer
// subspace prod_i (I+g_i)/2 over every vertex the schedule checks; when
// the schedule checks every vertex that projector is |H><H|.
struct DetectabilityReport {
    uint64_t trials = 0;
    uint64_t accepts = 0;
    double alpha = 0.0;
    double trace_bound = 0.0;     // 1 - 1/(alpha(6k+1))
    double fidelity_bound = 0.0;  // 1/sqrt(alpha(6k+1))
    uint64_t joint_below_trace = 0;
    uint64_t joint_below_fidelity = 0;
    bool trace_ok = false;     // joint freq <= alpha
    bool fidelity_ok = false;  // joint freq <= alpha
    double mean_accepted_projection = 0.0;

    std::string to_json() const;
};

DetectabilityReport detectability_check(const Hypergraph& h, const IndependenceCover& cover,
                                        uint32_t k, const ProverModel& prover,
                                        const CorrectableSet& s_set, double alpha,
                                        uint64_t trials, Rng& rng);

struct CompletenessReport {
    uint64_t trials = 0;
    uint64_t accepts = 0;
    FrequencyEstimate freq;
    double bound = 0.0;  // 1 - upsilon N exp(-2 eps^2 k_j / r^2)
    bool pass = false;   // freq >= bound - 3 sigma

    std::string to_json() const;
};

// Honest-prover acceptance against the union-bound completeness bound.
CompletenessReport completeness_experiment(const Hypergraph& h, const IndependenceCover& cover,
                                           const DeskParams& params, uint64_t trials, Rng& rng);

struct SoundnessRow {
    uint64_t k_j = 0;
    uint64_t trials = 0;
    uint64_t accepts = 0;
    uint64_t joint_bad_accepts = 0;  // accept AND target fidelity < 1 - delta
    double joint_freq = 0.0;
    double mean_accepted_fidelity = 0.0;
};

struct SoundnessReport {
    double delta = 0.0;
    double bound = 0.0;  // 1 - 1/(N upsilon), reported alongside
    std::vector<SoundnessRow> rows;

    std::string to_json() const;
};

// Joint frequency of acceptance-with-bad-target across growing k_j for
// an i.i.d. prover; the full-scale soundness constants are not desk
// executable, so the experiment verifies the operative decay.
SoundnessReport soundness_experiment(const Hypergraph& h, const IndependenceCover& cover,
                                     DeskParams params, const std::vector<uint64_t>& kj_values,
                                     const ProverModel& prover, double delta, uint64_t trials,
                                     Rng& rng);

}  // namespace hsv
