#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hsv/hypergraph.hpp"
#include "hsv/state_sim.hpp"

namespace hsv {

// Syndrome of one color-class test: bit s_i per checked vertex i, in
// the order of `vertices`. s_i = 0 iff the measured eigenvalue of g_i
// was +1.
struct Syndrome {
    std::vector<uint32_t> vertices;  // sorted checked vertices
    std::vector<uint8_t> bits;       // same length

    uint32_t weight() const;
    bool all_zero() const;
};

// Which syndromes count as a pass. Always contains the all-zero
// syndrome. Modes: exact-zero; weight-threshold(t) accepting weight <= t;
// explicit list (zero plus the listed bit patterns).
class CorrectableSet {
public:
    enum class Mode { Zero, Weight, List };

    static CorrectableSet exact_zero();
    static CorrectableSet weight_threshold(uint32_t t);
    static CorrectableSet explicit_list(std::vector<std::vector<uint8_t>> syndromes);

    Mode mode() const { return mode_; }
    uint32_t threshold() const { return t_; }
    const std::vector<std::vector<uint8_t>>& listed() const { return list_; }

    bool contains(const std::vector<uint8_t>& bits) const;

    // Every member with the given length, zero first. Used by the exact
    // pass-probability sum; sized sum_{w<=t} C(len, w) in weight mode.
    std::vector<std::vector<uint8_t>> enumerate(uint32_t len) const;

    std::string to_json() const;
    static CorrectableSet from_json(const std::string& json_text);

private:
    Mode mode_ = Mode::Zero;
    uint32_t t_ = 0;
    std::vector<std::vector<uint8_t>> list_;
};

// Test configuration: the primary configuration of class l measures X
// on A_l and Z elsewhere and checks {g_i : i in A_l}; the dual measures
// Z on A_l and X elsewhere and checks the complement-class stabilizers
// that are exactly measurable there, i.e. vertices whose whole edge
// neighborhood lies inside A_l (vertices with no edges always qualify).
struct TestConfig {
    uint32_t class_index = 0;
    bool dual = false;
};

BasisAssignment config_basis(const Hypergraph& h, const IndependenceCover& cover,
                             const TestConfig& cfg);

// Vertices whose stabilizer is diagonal in the given basis: X-measured
// vertices all of whose co-edge vertices are Z-measured.
std::vector<uint32_t> checkable_vertices(const Hypergraph& h, const BasisAssignment& basis);

// Parity bookkeeping for the primary configuration of class_vertices:
// s_i = b_i XOR sum_{e containing i} prod_{j in e minus i} z_j (mod 2),
// where b/z are the per-qubit outcome bits. Requires properness of the
// class (no hyperedge with two class vertices); otherwise throws, since
// some needed z_j would not have been measured.
Syndrome parity_check(const Hypergraph& h, const std::vector<uint32_t>& class_vertices,
                      const std::vector<uint8_t>& outcome_bits);

struct TestOutcome {
    bool pass = false;
    Syndrome syndrome;
    BasisAssignment basis;
    std::vector<uint8_t> outcome_bits;
};

// One color-class test: measure A_l in X and the complement in Z, then
// pass iff the syndrome lies in S.
TestOutcome run_color_test(const StateVector& state, const Hypergraph& h,
                           const IndependenceCover& cover, uint32_t class_index,
                           const CorrectableSet& s_set, Rng& rng);

// Same machinery for either configuration of the class.
TestOutcome run_config_test(const StateVector& state, const Hypergraph& h,
                            const IndependenceCover& cover, const TestConfig& cfg,
                            const CorrectableSet& s_set, Rng& rng);

// Measures X on vertex i and Z on every vertex sharing an edge with i
// (remaining qubits are measured too but never enter the check), and
// returns the eigenvalue (-1)^{s_i}: +1 with probability (1+<g_i>)/2.
int run_single_stabilizer_test(const StateVector& state, const Hypergraph& h,
                               uint32_t i, Rng& rng);

// Weighted ensemble of pure states; the stand-in for a density operator.
struct Ensemble {
    struct Member {
        double weight = 0.0;
        StateVector state;
    };
    std::vector<Member> members;

    static Ensemble pure(StateVector s);
    // I/2^n as the uniform mixture of computational basis states.
    static Ensemble maximally_mixed(uint32_t n);
};

inline constexpr uint32_t kAnalyticQubitLimit = 12;

// Exact pass probability sum_{s in S} Tr(rho Pi_s) with
// Pi_s = prod_{i in checked}(I + (-1)^{s_i} g_i)/2, evaluated by
// applying the projector product to each ensemble member (an algebraic
// route sharing nothing with the sampling path except the gate
// primitives). Refuses n above `limit`.
double analytic_pass_probability(const Ensemble& rho, const Hypergraph& h,
                                 const IndependenceCover& cover, const TestConfig& cfg,
                                 const CorrectableSet& s_set,
                                 uint32_t limit = kAnalyticQubitLimit);

double analytic_pass_probability(const Ensemble& rho, const Hypergraph& h,
                                 const IndependenceCover& cover, uint32_t class_index,
                                 const CorrectableSet& s_set,
                                 uint32_t limit = kAnalyticQubitLimit);

// Enumerates the exact noise ensemble of Z patterns over |H> (explicit
// list, or the product distribution when only z_flip is set). Refuses
// models with X or depolarizing components, which have no finite
// Z-pattern expansion. Used by exact acceptability computations.
Ensemble z_noise_ensemble(const Hypergraph& h, const NoiseModel& noise,
                          uint32_t limit = kAnalyticQubitLimit);

// k-th-power product of per-configuration pass probabilities over the
// full schedule (primary and dual configuration of every class):
// prod_c P_c(S)^k. Exact via the Z-pattern ensemble when n <= limit and
// the noise is Z-only; otherwise Monte Carlo with `mc_trials` draws per
// configuration.
double acceptability_probability(const Hypergraph& h, const IndependenceCover& cover,
                                 const NoiseModel& noise, const CorrectableSet& s_set,
                                 uint32_t k, Rng& rng, uint32_t mc_trials = 20000,
                                 uint32_t limit = kAnalyticQubitLimit);

}  // namespace hsv
