#include "hsv/stabilizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "json.hpp"

namespace hsv {

using nlohmann::json;

uint32_t Syndrome::weight() const {
    uint32_t w = 0;
    for (uint8_t b : bits) w += b;
    return w;
}

bool Syndrome::all_zero() const {
    return std::all_of(bits.begin(), bits.end(), [](uint8_t b) { return b == 0; });
}

CorrectableSet CorrectableSet::exact_zero() { return {}; }

CorrectableSet CorrectableSet::weight_threshold(uint32_t t) {
    CorrectableSet s;
    s.mode_ = Mode::Weight;
    s.t_ = t;
    return s;
}

CorrectableSet CorrectableSet::explicit_list(std::vector<std::vector<uint8_t>> syndromes) {
    CorrectableSet s;
    s.mode_ = Mode::List;
    for (auto& bits : syndromes) {
        for (uint8_t b : bits)
            if (b > 1) throw std::invalid_argument("CorrectableSet: syndromes are bit vectors");
    }
    s.list_ = std::move(syndromes);
    return s;
}

bool CorrectableSet::contains(const std::vector<uint8_t>& bits) const {
    bool zero = std::all_of(bits.begin(), bits.end(), [](uint8_t b) { return b == 0; });
    if (zero) return true;  // every mode keeps the zero syndrome
    switch (mode_) {
        case Mode::Zero:
            return false;
        case Mode::Weight: {
            uint32_t w = 0;
            for (uint8_t b : bits) w += b;
            return w <= t_;
        }
        case Mode::List:
            return std::find(list_.begin(), list_.end(), bits) != list_.end();
    }
    return false;
}

std::vector<std::vector<uint8_t>> CorrectableSet::enumerate(uint32_t len) const {
    std::vector<std::vector<uint8_t>> out;
    std::vector<uint8_t> zero(len, 0);
    out.push_back(zero);
    switch (mode_) {
        case Mode::Zero:
            break;
        case Mode::Weight: {
            // All bit vectors of weight 1..t, in weight-major order.
            uint32_t cap = std::min(t_, len);
            std::vector<uint32_t> idx;
            auto emit = [&]() {
                std::vector<uint8_t> bits(len, 0);
                for (uint32_t i : idx) bits[i] = 1;
                out.push_back(std::move(bits));
            };
            std::function<void(uint32_t, uint32_t)> rec = [&](uint32_t start, uint32_t left) {
                if (left == 0) {
                    emit();
                    return;
                }
                for (uint32_t i = start; i + left <= len; ++i) {
                    idx.push_back(i);
                    rec(i + 1, left - 1);
                    idx.pop_back();
                }
            };
            for (uint32_t w = 1; w <= cap; ++w) rec(0, w);
            break;
        }
        case Mode::List:
            for (const auto& bits : list_) {
                if (bits.size() != len) continue;
                if (std::find(out.begin(), out.end(), bits) == out.end()) out.push_back(bits);
            }
            break;
    }
    return out;
}

std::string CorrectableSet::to_json() const {
    json j;
    switch (mode_) {
        case Mode::Zero: j["mode"] = "zero"; break;
        case Mode::Weight:
            j["mode"] = "weight";
            j["t"] = t_;
            break;
        case Mode::List:
            j["mode"] = "list";
            j["syndromes"] = list_;
            break;
    }
    return j.dump();
}

CorrectableSet CorrectableSet::from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    std::string mode = j.at("mode").get<std::string>();
    if (mode == "zero") return exact_zero();
    if (mode == "weight") return weight_threshold(j.at("t").get<uint32_t>());
    if (mode == "list")
        return explicit_list(j.at("syndromes").get<std::vector<std::vector<uint8_t>>>());
    throw std::invalid_argument("CorrectableSet: mode must be zero, weight, or list");
}

BasisAssignment config_basis(const Hypergraph& h, const IndependenceCover& cover,
                             const TestConfig& cfg) {
    if (cfg.class_index >= cover.classes.size())
        throw std::invalid_argument("config_basis: class index out of range");
    const auto& cls = cover.classes[cfg.class_index];
    if (!cfg.dual) return BasisAssignment::x_on(h.n(), cls);
    BasisAssignment b{std::vector<Basis>(h.n(), Basis::X)};
    for (uint32_t v : cls) b.basis[v] = Basis::Z;
    return b;
}

std::vector<uint32_t> checkable_vertices(const Hypergraph& h, const BasisAssignment& basis) {
    if (basis.basis.size() != h.n())
        throw std::invalid_argument("checkable_vertices: basis size mismatch");
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < h.n(); ++i) {
        if (basis.basis[i] != Basis::X) continue;
        bool ok = true;
        for (uint32_t eidx : h.edges_at(i)) {
            for (uint32_t j : h.edges()[eidx]) {
                if (j != i && basis.basis[j] != Basis::Z) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
        }
        if (ok) out.push_back(i);
    }
    return out;
}

namespace {

// s_i = b_i XOR sum_e prod_{j in e\{i}} z_j; callers guarantee every
// needed z_j was Z-measured.
Syndrome syndrome_for(const Hypergraph& h, const std::vector<uint32_t>& vertices,
                      const std::vector<uint8_t>& outcome_bits) {
    if (outcome_bits.size() != h.n())
        throw std::invalid_argument("syndrome: outcome bit count must equal qubit count");
    Syndrome s;
    s.vertices = vertices;
    std::sort(s.vertices.begin(), s.vertices.end());
    for (uint32_t i : s.vertices) {
        uint8_t parity = outcome_bits[i];
        for (uint32_t eidx : h.edges_at(i)) {
            uint8_t term = 1;
            for (uint32_t j : h.edges()[eidx])
                if (j != i) term &= outcome_bits[j];
            parity ^= term;
        }
        s.bits.push_back(parity);
    }
    return s;
}

void require_proper_class(const Hypergraph& h, const std::vector<uint32_t>& cls) {
    for (const Edge& e : h.edges()) {
        uint32_t hits = 0;
        for (uint32_t v : e)
            if (std::find(cls.begin(), cls.end(), v) != cls.end()) ++hits;
        if (hits >= 2)
            throw std::invalid_argument(
                "parity_check: class has two vertices in one hyperedge, so the "
                "complement measurement cannot supply every needed Z outcome");
    }
}

}  // namespace

Syndrome parity_check(const Hypergraph& h, const std::vector<uint32_t>& class_vertices,
                      const std::vector<uint8_t>& outcome_bits) {
    for (uint32_t v : class_vertices)
        if (v >= h.n()) throw std::invalid_argument("parity_check: vertex out of range");
    require_proper_class(h, class_vertices);
    return syndrome_for(h, class_vertices, outcome_bits);
}

TestOutcome run_config_test(const StateVector& state, const Hypergraph& h,
                            const IndependenceCover& cover, const TestConfig& cfg,
                            const CorrectableSet& s_set, Rng& rng) {
    TestOutcome out;
    out.basis = config_basis(h, cover, cfg);
    out.outcome_bits = measure(state, out.basis, rng);
    if (!cfg.dual) {
        out.syndrome = parity_check(h, cover.classes[cfg.class_index], out.outcome_bits);
    } else {
        out.syndrome = syndrome_for(h, checkable_vertices(h, out.basis), out.outcome_bits);
    }
    out.pass = s_set.contains(out.syndrome.bits);
    return out;
}

TestOutcome run_color_test(const StateVector& state, const Hypergraph& h,
                           const IndependenceCover& cover, uint32_t class_index,
                           const CorrectableSet& s_set, Rng& rng) {
    return run_config_test(state, h, cover, {class_index, false}, s_set, rng);
}

int run_single_stabilizer_test(const StateVector& state, const Hypergraph& h, uint32_t i,
                               Rng& rng) {
    if (i >= h.n()) throw std::invalid_argument("run_single_stabilizer_test: bad vertex");
    BasisAssignment basis = BasisAssignment::x_on(h.n(), {i});
    std::vector<uint8_t> bits = measure(state, basis, rng);
    Syndrome s = syndrome_for(h, {i}, bits);
    return s.bits[0] ? -1 : +1;
}

Ensemble Ensemble::pure(StateVector s) {
    Ensemble e;
    e.members.push_back({1.0, std::move(s)});
    return e;
}

Ensemble Ensemble::maximally_mixed(uint32_t n) {
    Ensemble e;
    uint64_t dim = uint64_t{1} << n;
    for (uint64_t x = 0; x < dim; ++x)
        e.members.push_back({1.0 / static_cast<double>(dim), make_basis_state(n, x)});
    return e;
}

double analytic_pass_probability(const Ensemble& rho, const Hypergraph& h,
                                 const IndependenceCover& cover, const TestConfig& cfg,
                                 const CorrectableSet& s_set, uint32_t limit) {
    if (h.n() > limit)
        throw std::invalid_argument("analytic_pass_probability: " + std::to_string(h.n()) +
                                    " qubits exceeds the exact limit " +
                                    std::to_string(limit));
    BasisAssignment basis = config_basis(h, cover, cfg);
    std::vector<uint32_t> checked;
    if (!cfg.dual) {
        checked = cover.classes[cfg.class_index];
        require_proper_class(h, checked);
    } else {
        checked = checkable_vertices(h, basis);
    }
    std::sort(checked.begin(), checked.end());
    auto members_of_s = s_set.enumerate(static_cast<uint32_t>(checked.size()));
    double total = 0.0;
    for (const auto& member : rho.members) {
        if (member.state.n != h.n())
            throw std::invalid_argument("analytic_pass_probability: state size mismatch");
        for (const auto& s_bits : members_of_s) {
            // Pi_s = prod_i (I + (-1)^{s_i} g_i)/2; the class g_i commute,
            // so the product applies factor by factor.
            StateVector acc = member.state;
            for (size_t idx = 0; idx < checked.size(); ++idx) {
                StateVector g = acc;
                apply_stabilizer_g(g, h, checked[idx]);
                double sign = s_bits[idx] ? -1.0 : 1.0;
                for (uint64_t x = 0; x < acc.amps.size(); ++x)
                    acc.amps[x] = 0.5 * (acc.amps[x] + sign * g.amps[x]);
            }
            double norm2 = 0.0;
            for (const Amp& a : acc.amps) norm2 += std::norm(a);
            total += member.weight * norm2;
        }
    }
    return total;
}

double analytic_pass_probability(const Ensemble& rho, const Hypergraph& h,
                                 const IndependenceCover& cover, uint32_t class_index,
                                 const CorrectableSet& s_set, uint32_t limit) {
    return analytic_pass_probability(rho, h, cover, {class_index, false}, s_set, limit);
}

Ensemble z_noise_ensemble(const Hypergraph& h, const NoiseModel& noise, uint32_t limit) {
    noise.validate(h.n());
    if (h.n() > limit)
        throw std::invalid_argument("z_noise_ensemble: qubit count exceeds limit");
    auto is_nonzero = [](double p) { return p != 0.0; };
    if (std::any_of(noise.x_flip.begin(), noise.x_flip.end(), is_nonzero) ||
        std::any_of(noise.depolarizing.begin(), noise.depolarizing.end(), is_nonzero))
        throw std::invalid_argument(
            "z_noise_ensemble: only Z noise has a finite Z-pattern expansion");
    StateVector base = build_state(h);
    Ensemble out;
    if (!noise.explicit_z.empty()) {
        for (const auto& zp : noise.explicit_z) {
            if (zp.prob == 0.0) continue;
            StateVector s = base;
            for (uint64_t x = 0; x < s.amps.size(); ++x)
                if (std::popcount(x & zp.pattern) & 1) s.amps[x] = -s.amps[x];
            out.members.push_back({zp.prob, std::move(s)});
        }
        return out;
    }
    // Product Bernoulli Z noise: branch only on qubits with fractional
    // probability; p = 0 and p = 1 bits are forced.
    std::vector<uint32_t> fractional;
    uint64_t forced = 0;
    for (uint32_t q = 0; q < noise.z_flip.size(); ++q) {
        double p = noise.z_flip[q];
        if (p == 1.0)
            forced |= uint64_t{1} << q;
        else if (p > 0.0)
            fractional.push_back(q);
    }
    if (fractional.size() > 20)
        throw std::invalid_argument("z_noise_ensemble: too many fractional qubits to expand");
    uint64_t count = uint64_t{1} << fractional.size();
    for (uint64_t sel = 0; sel < count; ++sel) {
        uint64_t pattern = forced;
        double prob = 1.0;
        for (size_t b = 0; b < fractional.size(); ++b) {
            double p = noise.z_flip[fractional[b]];
            if ((sel >> b) & 1) {
                pattern |= uint64_t{1} << fractional[b];
                prob *= p;
            } else {
                prob *= 1.0 - p;
            }
        }
        StateVector s = base;
        for (uint64_t x = 0; x < s.amps.size(); ++x)
            if (std::popcount(x & pattern) & 1) s.amps[x] = -s.amps[x];
        out.members.push_back({prob, std::move(s)});
    }
    return out;
}

double acceptability_probability(const Hypergraph& h, const IndependenceCover& cover,
                                 const NoiseModel& noise, const CorrectableSet& s_set,
                                 uint32_t k, Rng& rng, uint32_t mc_trials, uint32_t limit) {
    std::vector<TestConfig> schedule;
    for (uint32_t l = 0; l < cover.classes.size(); ++l) schedule.push_back({l, false});
    for (uint32_t l = 0; l < cover.classes.size(); ++l) schedule.push_back({l, true});

    auto is_nonzero = [](double p) { return p != 0.0; };
    bool z_only = !std::any_of(noise.x_flip.begin(), noise.x_flip.end(), is_nonzero) &&
                  !std::any_of(noise.depolarizing.begin(), noise.depolarizing.end(),
                               is_nonzero);
    uint32_t fractional = 0;
    for (double p : noise.z_flip)
        if (p > 0.0 && p < 1.0) ++fractional;
    bool exact_ok = h.n() <= limit && z_only &&
                    (noise.explicit_z.empty() ? fractional <= 12 : true);

    double product = 1.0;
    if (exact_ok) {
        Ensemble rho = z_noise_ensemble(h, noise, limit);
        for (const TestConfig& cfg : schedule) {
            double p = analytic_pass_probability(rho, h, cover, cfg, s_set, limit);
            for (uint32_t rep = 0; rep < k; ++rep) product *= p;
        }
        return product;
    }
    for (const TestConfig& cfg : schedule) {
        uint64_t passes = 0;
        for (uint32_t t = 0; t < mc_trials; ++t) {
            StateVector s = sample_noisy_state(h, noise, rng);
            passes += run_config_test(s, h, cover, cfg, s_set, rng).pass ? 1 : 0;
        }
        double p = static_cast<double>(passes) / static_cast<double>(mc_trials);
        for (uint32_t rep = 0; rep < k; ++rep) product *= p;
    }
    return product;
}

}  // namespace hsv
