#include "hsv/state_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace hsv {

double StateVector::norm() const {
    double sum = 0.0;
    for (const Amp& a : amps) sum += std::norm(a);
    return std::sqrt(sum);
}

StateVector make_basis_state(uint32_t n, uint64_t bits) {
    if (n > kDenseQubitLimit)
        throw std::invalid_argument("make_basis_state: too many qubits");
    StateVector s{n, std::vector<Amp>(uint64_t{1} << n, Amp{0.0, 0.0})};
    s.amps[bits] = 1.0;
    return s;
}

StateVector make_plus_state(uint32_t n) {
    if (n > kDenseQubitLimit)
        throw std::invalid_argument("make_plus_state: too many qubits");
    uint64_t dim = uint64_t{1} << n;
    double a = std::pow(2.0, -0.5 * n);
    return {n, std::vector<Amp>(dim, Amp{a, 0.0})};
}

StateVector build_state(const Hypergraph& h, uint32_t limit) {
    if (h.n() > limit)
        throw std::invalid_argument("build_state: " + std::to_string(h.n()) +
                                    " qubits exceeds the dense limit " +
                                    std::to_string(limit));
    StateVector s = make_plus_state(h.n());
    for (const Edge& e : h.edges()) apply_generalized_cz(s, e);
    return s;
}

void apply_generalized_cz(StateVector& s, const Edge& e) {
    if (e.empty()) throw std::invalid_argument("apply_generalized_cz: empty vertex set");
    uint64_t mask = 0;
    for (uint32_t v : e) {
        if (v >= s.n) throw std::invalid_argument("apply_generalized_cz: vertex out of range");
        mask |= uint64_t{1} << v;
    }
    for (uint64_t x = 0; x < s.amps.size(); ++x) {
        if ((x & mask) == mask) s.amps[x] = -s.amps[x];
    }
}

void apply_pauli(StateVector& s, const std::string& pauli) {
    if (pauli.size() != s.n)
        throw std::invalid_argument("apply_pauli: string length must equal qubit count");
    uint64_t xmask = 0, zmask = 0;
    for (uint32_t i = 0; i < pauli.size(); ++i) {
        switch (pauli[i]) {
            case 'I': break;
            case 'X': xmask |= uint64_t{1} << i; break;
            case 'Z': zmask |= uint64_t{1} << i; break;
            default:
                throw std::invalid_argument("apply_pauli: letters must be I, X, or Z");
        }
    }
    // Z first, then the X index permutation: out[x ^ xmask] = (-1)^{x.zmask} in[x].
    std::vector<Amp> out(s.amps.size());
    for (uint64_t x = 0; x < s.amps.size(); ++x) {
        Amp a = s.amps[x];
        if (std::popcount(x & zmask) & 1) a = -a;
        out[x ^ xmask] = a;
    }
    s.amps = std::move(out);
}

void apply_stabilizer_g(StateVector& s, const Hypergraph& h, uint32_t i) {
    if (i >= h.n() || h.n() != s.n)
        throw std::invalid_argument("apply_stabilizer_g: bad vertex or state size");
    // The CZ factors commute with each other and act first; X_i last.
    for (uint32_t eidx : h.edges_at(i)) {
        Edge rest;
        for (uint32_t v : h.edges()[eidx])
            if (v != i) rest.push_back(v);
        apply_generalized_cz(s, rest);
    }
    std::string pauli(s.n, 'I');
    pauli[i] = 'X';
    apply_pauli(s, pauli);
}

double expectation_g(const StateVector& s, const Hypergraph& h, uint32_t i) {
    StateVector t = s;
    apply_stabilizer_g(t, h, i);
    return inner_product(s, t).real();
}

BasisAssignment BasisAssignment::all_z(uint32_t n) {
    return {std::vector<Basis>(n, Basis::Z)};
}

BasisAssignment BasisAssignment::x_on(uint32_t n, const std::vector<uint32_t>& xs) {
    BasisAssignment b = all_z(n);
    for (uint32_t v : xs) {
        if (v >= n) throw std::invalid_argument("BasisAssignment: vertex out of range");
        b.basis[v] = Basis::X;
    }
    return b;
}

std::string BasisAssignment::to_string() const {
    std::string out(basis.size(), 'Z');
    for (size_t i = 0; i < basis.size(); ++i)
        if (basis[i] == Basis::X) out[i] = 'X';
    return out;
}

namespace {

// Hadamard butterflies on every X-basis qubit.
StateVector rotated_for(const StateVector& s, const BasisAssignment& basis) {
    if (basis.basis.size() != s.n)
        throw std::invalid_argument("measure: basis size must equal qubit count");
    StateVector t = s;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (uint32_t q = 0; q < s.n; ++q) {
        if (basis.basis[q] != Basis::X) continue;
        uint64_t bit = uint64_t{1} << q;
        for (uint64_t x = 0; x < t.amps.size(); ++x) {
            if (x & bit) continue;
            Amp a0 = t.amps[x];
            Amp a1 = t.amps[x | bit];
            t.amps[x] = (a0 + a1) * inv_sqrt2;
            t.amps[x | bit] = (a0 - a1) * inv_sqrt2;
        }
    }
    return t;
}

}  // namespace

std::vector<double> measure_distribution(const StateVector& s, const BasisAssignment& basis) {
    StateVector t = rotated_for(s, basis);
    std::vector<double> p(t.amps.size());
    for (uint64_t x = 0; x < t.amps.size(); ++x) p[x] = std::norm(t.amps[x]);
    return p;
}

std::vector<uint8_t> measure(const StateVector& s, const BasisAssignment& basis, Rng& rng) {
    StateVector t = rotated_for(s, basis);
    double u = rng.next_unit();
    double cum = 0.0;
    uint64_t picked = t.amps.size() - 1;  // guards against rounding at u ~ 1
    for (uint64_t x = 0; x < t.amps.size(); ++x) {
        cum += std::norm(t.amps[x]);
        if (u < cum) {
            picked = x;
            break;
        }
    }
    std::vector<uint8_t> bits(s.n);
    for (uint32_t q = 0; q < s.n; ++q) bits[q] = (picked >> q) & 1;
    return bits;
}

PhasePolynomial PhasePolynomial::from_hypergraph(const Hypergraph& h) {
    return {h.n(), h.edges()};
}

uint8_t PhasePolynomial::eval(uint64_t x) const {
    uint8_t f = 0;
    for (const Edge& mono : monomials) {
        uint8_t term = 1;
        for (uint32_t v : mono) term &= static_cast<uint8_t>((x >> v) & 1);
        f ^= term;
    }
    return f;
}

StateVector PhasePolynomial::reconstruct() const {
    if (n > kDenseQubitLimit)
        throw std::invalid_argument("PhasePolynomial::reconstruct: too many qubits");
    uint64_t dim = uint64_t{1} << n;
    double mag = std::pow(2.0, -0.5 * n);
    StateVector s{n, std::vector<Amp>(dim)};
    for (uint64_t x = 0; x < dim; ++x) s.amps[x] = eval(x) ? Amp{-mag, 0.0} : Amp{mag, 0.0};
    return s;
}

NoiseModel NoiseModel::uniform_z(uint32_t n, double p) {
    NoiseModel m;
    m.z_flip.assign(n, p);
    return m;
}

bool NoiseModel::is_zero() const {
    auto all0 = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [](double p) { return p == 0.0; });
    };
    return all0(z_flip) && all0(x_flip) && all0(depolarizing) && explicit_z.empty();
}

void NoiseModel::validate(uint32_t n) const {
    auto check = [&](const std::vector<double>& v, const char* name) {
        if (!v.empty() && v.size() != n)
            throw std::invalid_argument(std::string(name) + ": needs one entry per qubit");
        for (double p : v) {
            if (!(p >= 0.0 && p <= 1.0))
                throw std::invalid_argument(std::string(name) + ": probability outside [0,1]");
        }
    };
    check(z_flip, "z_flip");
    check(x_flip, "x_flip");
    check(depolarizing, "depolarizing");
    if (!explicit_z.empty()) {
        if (!z_flip.empty() &&
            std::any_of(z_flip.begin(), z_flip.end(), [](double p) { return p != 0.0; }))
            throw std::invalid_argument("explicit_z replaces z_flip; set only one");
        double sum = 0.0;
        for (const auto& zp : explicit_z) {
            if (!(zp.prob >= 0.0)) throw std::invalid_argument("explicit_z: negative weight");
            if (n < 64 && (zp.pattern >> n) != 0)
                throw std::invalid_argument("explicit_z: pattern uses qubits beyond n");
            sum += zp.prob;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("explicit_z: probabilities must sum to 1");
    }
}

StateVector sample_noisy_state(const Hypergraph& h, const NoiseModel& noise, Rng& rng) {
    noise.validate(h.n());
    StateVector s = build_state(h);
    if (noise.is_zero()) return s;
    // Accumulate the sampled error as X/Z toggle masks; a depolarizing
    // Y is applied as X and Z together, the dropped phase being
    // invisible to every sampled-ensemble statistic.
    uint64_t xpat = 0, zpat = 0;
    if (!noise.explicit_z.empty()) {
        double u = rng.next_unit();
        double cum = 0.0;
        zpat = noise.explicit_z.back().pattern;
        for (const auto& zp : noise.explicit_z) {
            cum += zp.prob;
            if (u < cum) {
                zpat = zp.pattern;
                break;
            }
        }
    } else {
        for (uint32_t q = 0; q < noise.z_flip.size(); ++q)
            if (rng.bernoulli(noise.z_flip[q])) zpat ^= uint64_t{1} << q;
    }
    for (uint32_t q = 0; q < noise.x_flip.size(); ++q)
        if (rng.bernoulli(noise.x_flip[q])) xpat ^= uint64_t{1} << q;
    for (uint32_t q = 0; q < noise.depolarizing.size(); ++q) {
        if (!rng.bernoulli(noise.depolarizing[q])) continue;
        uint64_t pick = rng.below(3);  // X, Z, or both
        if (pick != 1) xpat ^= uint64_t{1} << q;
        if (pick != 0) zpat ^= uint64_t{1} << q;
    }
    std::string xs(h.n(), 'I'), zs(h.n(), 'I');
    for (uint32_t q = 0; q < h.n(); ++q) {
        if ((xpat >> q) & 1) xs[q] = 'X';
        if ((zpat >> q) & 1) zs[q] = 'Z';
    }
    apply_pauli(s, zs);
    apply_pauli(s, xs);
    return s;
}

Amp inner_product(const StateVector& a, const StateVector& b) {
    if (a.n != b.n) throw std::invalid_argument("inner_product: dimension mismatch");
    Amp sum{0.0, 0.0};
    for (uint64_t x = 0; x < a.amps.size(); ++x) sum += std::conj(a.amps[x]) * b.amps[x];
    return sum;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

std::string state_to_json(const StateVector& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (uint64_t x = 0; x < s.amps.size(); ++x) {
        std::string bits(s.n, '0');
        for (uint32_t q = 0; q < s.n; ++q)
            if ((x >> q) & 1) bits[q] = '1';
        arr.push_back({bits, s.amps[x].real(), s.amps[x].imag()});
    }
    return arr.dump();
}

}  // namespace hsv
