#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "hsv/hypergraph.hpp"
#include "hsv/stats.hpp"

namespace hsv {

using Amp = std::complex<double>;

// Dense statevector over n qubits; bit i of an amplitude index is
// qubit i. Norm stays 1 within 1e-10 across all operations here.
struct StateVector {
    uint32_t n = 0;
    std::vector<Amp> amps;  // size 2^n

    double norm() const;
};

inline constexpr uint32_t kDenseQubitLimit = 24;

StateVector make_basis_state(uint32_t n, uint64_t bits);
StateVector make_plus_state(uint32_t n);

// |H> = (prod_e CZ~_e) |+>^n. Refuses n above `limit`.
StateVector build_state(const Hypergraph& h, uint32_t limit = kDenseQubitLimit);

// Generalized CZ on vertex set e (|e| >= 1): negates every amplitude
// whose index has all bits of e set. Singleton e is a plain Z. An
// involution; any two such gates commute.
void apply_generalized_cz(StateVector& s, const Edge& e);

// Pauli string over {I, X, Z}, one letter per qubit, pauli[i] acts on
// qubit i. X permutes amplitude indices at bit i; Z negates amplitudes
// with bit i set.
void apply_pauli(StateVector& s, const std::string& pauli);

// g_i = X_i * prod_{e containing i} CZ~_{e minus i}, applied in place.
// Fixes build_state(h) exactly.
void apply_stabilizer_g(StateVector& s, const Hypergraph& h, uint32_t i);

// <psi| g_i |psi>; real up to rounding for the states used here.
double expectation_g(const StateVector& s, const Hypergraph& h, uint32_t i);

// Per-qubit measurement basis.
enum class Basis : uint8_t { X, Z };

struct BasisAssignment {
    std::vector<Basis> basis;  // size n

    static BasisAssignment all_z(uint32_t n);
    // X on the listed vertices, Z everywhere else.
    static BasisAssignment x_on(uint32_t n, const std::vector<uint32_t>& xs);
    std::string to_string() const;  // e.g. "XZZX"
};

// One destructive measurement: Hadamard on the X-basis qubits, then a
// single sample from the computational distribution. Returns one
// outcome bit per qubit (X qubits: 0 = |+>, 1 = |->). The input state
// is untouched; the result is a pure function of (state, basis, rng
// stream position). No post-measurement state is produced.
std::vector<uint8_t> measure(const StateVector& s, const BasisAssignment& basis, Rng& rng);

// Exact outcome distribution of `measure` (2^n probabilities).
std::vector<double> measure_distribution(const StateVector& s, const BasisAssignment& basis);

// f(x) = sum over monomials of prod_{i in monomial} x_i, mod 2.
// amp(x) = 2^{-n/2} (-1)^{f(x)} reproduces build_state exactly.
struct PhasePolynomial {
    uint32_t n = 0;
    std::vector<Edge> monomials;

    static PhasePolynomial from_hypergraph(const Hypergraph& h);
    uint8_t eval(uint64_t x) const;
    StateVector reconstruct() const;
};

// Stochastic Z/X/depolarizing noise on |H>. Mixed states are handled
// throughout as ensembles of pure states; density matrices never
// materialize outside small test oracles.
struct NoiseModel {
    std::vector<double> z_flip;        // per qubit; empty = 0
    std::vector<double> x_flip;        // per qubit; empty = 0
    std::vector<double> depolarizing;  // per qubit; empty = 0

    // Optional explicit distribution over Z-error bitstrings; when
    // nonempty it replaces z_flip and must sum to 1 within 1e-12.
    struct ZPattern {
        uint64_t pattern = 0;
        double prob = 0.0;
    };
    std::vector<ZPattern> explicit_z;

    static NoiseModel uniform_z(uint32_t n, double p);
    bool is_zero() const;
    void validate(uint32_t n) const;
};

// One draw: |H> with a sampled Z pattern, X flips, and depolarizing
// Paulis applied. Zero noise returns exactly |H>.
StateVector sample_noisy_state(const Hypergraph& h, const NoiseModel& noise, Rng& rng);

// |<a|b>|^2; throws on dimension mismatch.
double fidelity(const StateVector& a, const StateVector& b);

Amp inner_product(const StateVector& a, const StateVector& b);

// JSON array of [bitstring, re, im] triples; bitstrings print qubit 0
// first. Entry order is amplitude-index order.
std::string state_to_json(const StateVector& s);

}  // namespace hsv
