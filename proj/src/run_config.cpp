#include "hsv/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace hsv {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path + ": " + msg);
}

const json& require(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required key");
    return *it;
}

void require_object(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
}

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) known = true;
        if (!known) fail(path + "." + item.key(), "unknown key");
    }
}

uint64_t get_u64(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<uint64_t>();
    if (v.is_number_integer()) fail(path, "expected a non-negative integer");
    fail(path, "expected an integer");
}

uint32_t get_u32(const json& v, const std::string& path) {
    uint64_t x = get_u64(v, path);
    if (x > UINT32_MAX) fail(path, "value too large");
    return static_cast<uint32_t>(x);
}

double get_double(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

Hypergraph parse_hypergraph_node(const json& v, const std::string& path) {
    require_object(v, path);
    reject_unknown_keys(v, path, {"n", "edges", "file", "union_jack"});
    int forms = ((v.contains("n") || v.contains("edges")) ? 1 : 0) +
                (v.contains("file") ? 1 : 0) + (v.contains("union_jack") ? 1 : 0);
    if (forms != 1)
        fail(path, "expected exactly one of an inline n+edges pair, \"file\", or "
                   "\"union_jack\"");
    if (v.contains("file")) {
        std::string name = get_string(v.at("file"), path + ".file");
        std::ifstream in(name);
        if (!in) fail(path + ".file", "cannot open " + name);
        std::ostringstream text;
        text << in.rdbuf();
        try {
            return parse_hypergraph(text.str());
        } catch (const std::invalid_argument& ex) {
            fail(path + ".file", ex.what());
        }
    }
    if (v.contains("union_jack")) {
        uint32_t cells = get_u32(v.at("union_jack"), path + ".union_jack");
        if (cells == 0) fail(path + ".union_jack", "need at least one cell per side");
        if (cells > 64) fail(path + ".union_jack", "lattice too large");
        return union_jack(cells).graph;
    }
    uint32_t n = get_u32(require(v, path, "n"), path + ".n");
    if (n == 0) fail(path + ".n", "need at least one vertex");
    Hypergraph h(n);
    const json& edges = require(v, path, "edges");
    if (!edges.is_array()) fail(path + ".edges", "expected an array");
    for (size_t i = 0; i < edges.size(); ++i) {
        std::string epath = path + ".edges[" + std::to_string(i) + "]";
        const json& ev = edges[i];
        if (!ev.is_array()) fail(epath, "expected an array of vertices");
        Edge e;
        for (size_t j = 0; j < ev.size(); ++j)
            e.push_back(get_u32(ev[j], epath + "[" + std::to_string(j) + "]"));
        try {
            h.toggle_edge(std::move(e));
        } catch (const std::invalid_argument& ex) {
            fail(epath, ex.what());
        }
    }
    return h;
}

IndependenceCover parse_cover_node(const json& v, const std::string& path,
                                   const Hypergraph& h) {
    require_object(v, path);
    reject_unknown_keys(v, path, {"classes", "weights", "greedy", "union_jack"});
    int forms = (v.contains("classes") ? 1 : 0) + (v.contains("greedy") ? 1 : 0) +
                (v.contains("union_jack") ? 1 : 0);
    if (forms != 1)
        fail(path, "expected exactly one of \"classes\", \"greedy\", or \"union_jack\"");
    IndependenceCover cover;
    if (v.contains("greedy")) {
        const json& g = v.at("greedy");
        if (!g.is_boolean() || !g.get<bool>()) fail(path + ".greedy", "expected true");
        cover = greedy_coloring(h);
    } else if (v.contains("union_jack")) {
        uint32_t cells = get_u32(v.at("union_jack"), path + ".union_jack");
        if (cells == 0) fail(path + ".union_jack", "need at least one cell per side");
        if (cells > 64) fail(path + ".union_jack", "lattice too large");
        cover = union_jack(cells).cover;
    } else {
        const json& classes = v.at("classes");
        if (!classes.is_array() || classes.empty())
            fail(path + ".classes", "expected a non-empty array");
        for (size_t i = 0; i < classes.size(); ++i) {
            std::string cpath = path + ".classes[" + std::to_string(i) + "]";
            const json& cv = classes[i];
            if (!cv.is_array()) fail(cpath, "expected an array of vertices");
            std::vector<uint32_t> cls;
            for (size_t j = 0; j < cv.size(); ++j)
                cls.push_back(get_u32(cv[j], cpath + "[" + std::to_string(j) + "]"));
            std::sort(cls.begin(), cls.end());
            cover.classes.push_back(std::move(cls));
        }
    }
    if (v.contains("weights")) {
        const json& w = v.at("weights");
        if (!w.is_array()) fail(path + ".weights", "expected an array");
        for (size_t i = 0; i < w.size(); ++i)
            cover.weights.push_back(
                get_double(w[i], path + ".weights[" + std::to_string(i) + "]"));
    }
    return cover;
}

CorrectableSet parse_s_set_node(const json& v, const std::string& path) {
    require_object(v, path);
    std::string mode = get_string(require(v, path, "mode"), path + ".mode");
    if (mode == "zero") {
        reject_unknown_keys(v, path, {"mode"});
        return CorrectableSet::exact_zero();
    }
    if (mode == "weight") {
        reject_unknown_keys(v, path, {"mode", "t"});
        return CorrectableSet::weight_threshold(get_u32(require(v, path, "t"), path + ".t"));
    }
    if (mode == "list") {
        reject_unknown_keys(v, path, {"mode", "syndromes"});
        const json& syn = require(v, path, "syndromes");
        if (!syn.is_array()) fail(path + ".syndromes", "expected an array");
        std::vector<std::vector<uint8_t>> list;
        for (size_t i = 0; i < syn.size(); ++i) {
            std::string spath = path + ".syndromes[" + std::to_string(i) + "]";
            const json& sv = syn[i];
            if (!sv.is_array()) fail(spath, "expected an array of bits");
            std::vector<uint8_t> bits;
            for (size_t j = 0; j < sv.size(); ++j) {
                uint64_t b = get_u64(sv[j], spath + "[" + std::to_string(j) + "]");
                if (b > 1) fail(spath + "[" + std::to_string(j) + "]", "bits are 0 or 1");
                bits.push_back(static_cast<uint8_t>(b));
            }
            list.push_back(std::move(bits));
        }
        try {
            return CorrectableSet::explicit_list(std::move(list));
        } catch (const std::invalid_argument& ex) {
            fail(path + ".syndromes", ex.what());
        }
    }
    fail(path + ".mode", "expected \"zero\", \"weight\", or \"list\"");
}

uint64_t parse_bit_pattern(const json& v, const std::string& path, uint32_t n) {
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.size() != n) fail(path, "pattern needs one bit per qubit");
        uint64_t bits = 0;
        for (uint32_t i = 0; i < n; ++i) {
            if (s[i] == '1')
                bits |= uint64_t{1} << i;
            else if (s[i] != '0')
                fail(path, "pattern characters are 0 or 1");
        }
        return bits;
    }
    uint64_t bits = get_u64(v, path);
    if (n < 64 && bits >> n) fail(path, "pattern has bits beyond the qubit count");
    return bits;
}

std::vector<double> parse_per_qubit(const json& v, const std::string& path, uint32_t n) {
    if (v.is_number()) return std::vector<double>(n, get_double(v, path));
    if (!v.is_array()) fail(path, "expected a number or an array of per-qubit numbers");
    if (v.size() != n) fail(path, "need one entry per qubit");
    std::vector<double> out;
    for (size_t i = 0; i < v.size(); ++i)
        out.push_back(get_double(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

NoiseModel parse_noise_node(const json& v, const std::string& path, uint32_t n) {
    require_object(v, path);
    reject_unknown_keys(v, path, {"z_flip", "x_flip", "depolarizing", "explicit_z"});
    NoiseModel noise;
    if (v.contains("z_flip")) noise.z_flip = parse_per_qubit(v.at("z_flip"), path + ".z_flip", n);
    if (v.contains("x_flip")) noise.x_flip = parse_per_qubit(v.at("x_flip"), path + ".x_flip", n);
    if (v.contains("depolarizing"))
        noise.depolarizing = parse_per_qubit(v.at("depolarizing"), path + ".depolarizing", n);
    if (v.contains("explicit_z")) {
        const json& ez = v.at("explicit_z");
        if (!ez.is_array()) fail(path + ".explicit_z", "expected an array");
        for (size_t i = 0; i < ez.size(); ++i) {
            std::string epath = path + ".explicit_z[" + std::to_string(i) + "]";
            const json& item = ez[i];
            require_object(item, epath);
            reject_unknown_keys(item, epath, {"pattern", "prob"});
            NoiseModel::ZPattern zp;
            zp.pattern = parse_bit_pattern(require(item, epath, "pattern"), epath + ".pattern", n);
            zp.prob = get_double(require(item, epath, "prob"), epath + ".prob");
            noise.explicit_z.push_back(zp);
        }
    }
    try {
        noise.validate(n);
    } catch (const std::invalid_argument& ex) {
        fail(path, ex.what());
    }
    return noise;
}

StateVector parse_state_node(const json& v, const std::string& path, const Hypergraph& h) {
    require_object(v, path);
    std::string kind = get_string(require(v, path, "kind"), path + ".kind");
    try {
        if (kind == "hypergraph") {
            reject_unknown_keys(v, path, {"kind"});
            return build_state(h);
        }
        if (kind == "z_error") {
            reject_unknown_keys(v, path, {"kind", "pattern"});
            uint64_t bits =
                parse_bit_pattern(require(v, path, "pattern"), path + ".pattern", h.n());
            StateVector s = build_state(h);
            std::string pauli(h.n(), 'I');
            for (uint32_t i = 0; i < h.n(); ++i)
                if ((bits >> i) & 1) pauli[i] = 'Z';
            apply_pauli(s, pauli);
            return s;
        }
        if (kind == "product") {
            reject_unknown_keys(v, path, {"kind", "string"});
            std::string spec = get_string(require(v, path, "string"), path + ".string");
            if (spec.size() != h.n()) fail(path + ".string", "need one factor per qubit");
            StateVector s = make_basis_state(h.n(), 0);
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            for (uint64_t x = 0; x < s.amps.size(); ++x) {
                double a = 1.0;
                for (uint32_t i = 0; i < h.n(); ++i) {
                    bool bit = (x >> i) & 1;
                    switch (spec[i]) {
                        case '0': a *= bit ? 0.0 : 1.0; break;
                        case '1': a *= bit ? 1.0 : 0.0; break;
                        case '+': a *= inv_sqrt2; break;
                        case '-': a *= bit ? -inv_sqrt2 : inv_sqrt2; break;
                        default:
                            fail(path + ".string", "factors are one of 0, 1, +, -");
                    }
                }
                s.amps[x] = a;
            }
            return s;
        }
        if (kind == "amplitudes") {
            reject_unknown_keys(v, path, {"kind", "values"});
            const json& vals = require(v, path, "values");
            if (!vals.is_array()) fail(path + ".values", "expected an array");
            uint64_t dim = uint64_t{1} << h.n();
            if (vals.size() != dim)
                fail(path + ".values", "need exactly 2^n amplitudes, got " +
                                           std::to_string(vals.size()));
            StateVector s;
            s.n = h.n();
            s.amps.resize(dim);
            double norm2 = 0.0;
            for (uint64_t i = 0; i < dim; ++i) {
                std::string apath = path + ".values[" + std::to_string(i) + "]";
                const json& av = vals[i];
                double re = 0.0, im = 0.0;
                if (av.is_number()) {
                    re = av.get<double>();
                } else if (av.is_array() && av.size() == 2) {
                    re = get_double(av[0], apath + "[0]");
                    im = get_double(av[1], apath + "[1]");
                } else {
                    fail(apath, "expected a number or a [re, im] pair");
                }
                s.amps[i] = {re, im};
                norm2 += re * re + im * im;
            }
            if (std::abs(norm2 - 1.0) > 1e-9)
                fail(path + ".values", "state is not normalized (norm^2 = " +
                                           std::to_string(norm2) + ")");
            return s;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& ex) {
        fail(path, ex.what());
    }
    fail(path + ".kind",
         "expected \"hypergraph\", \"z_error\", \"product\", or \"amplitudes\"");
}

ProverModel parse_prover_node(const json& v, const std::string& path, const Hypergraph& h) {
    require_object(v, path);
    std::string kind = get_string(require(v, path, "kind"), path + ".kind");
    if (kind == "honest") {
        reject_unknown_keys(v, path, {"kind"});
        return ProverModel::honest();
    }
    if (kind == "iid_noisy") {
        reject_unknown_keys(v, path, {"kind", "noise"});
        return ProverModel::iid_noisy(
            parse_noise_node(require(v, path, "noise"), path + ".noise", h.n()));
    }
    if (kind == "single_bad_copy") {
        reject_unknown_keys(v, path, {"kind", "state"});
        return ProverModel::single_bad_copy(
            parse_state_node(require(v, path, "state"), path + ".state", h));
    }
    if (kind == "fixed_state") {
        reject_unknown_keys(v, path, {"kind", "state"});
        return ProverModel::fixed_state(
            parse_state_node(require(v, path, "state"), path + ".state", h));
    }
    fail(path + ".kind",
         "expected \"honest\", \"iid_noisy\", \"single_bad_copy\", or \"fixed_state\"");
}

ProtocolParams parse_params_node(const json& v, const std::string& path) {
    require_object(v, path);
    std::string mode = get_string(require(v, path, "mode"), path + ".mode");
    ProtocolParams params;
    if (mode == "desk") {
        reject_unknown_keys(v, path, {"mode", "n_qubits", "upsilon", "k_j", "d", "epsilon", "r"});
        params.mode = ProtocolParams::Mode::Desk;
        params.desk.n_qubits = get_u32(require(v, path, "n_qubits"), path + ".n_qubits");
        params.desk.upsilon = get_u32(require(v, path, "upsilon"), path + ".upsilon");
        params.desk.k_j = get_u64(require(v, path, "k_j"), path + ".k_j");
        params.desk.d = v.contains("d") ? get_u64(v.at("d"), path + ".d") : 0;
        params.desk.epsilon = get_double(require(v, path, "epsilon"), path + ".epsilon");
        params.desk.r = get_double(require(v, path, "r"), path + ".r");
        try {
            params.desk.validate();
        } catch (const std::invalid_argument& ex) {
            fail(path, ex.what());
        }
        return params;
    }
    if (mode == "paper") {
        reject_unknown_keys(v, path, {"mode", "n_qubits", "gamma", "r", "k"});
        params.mode = ProtocolParams::Mode::Paper;
        try {
            params.paper = derive_paper_params(
                get_u64(require(v, path, "n_qubits"), path + ".n_qubits"),
                get_u64(require(v, path, "gamma"), path + ".gamma"),
                get_u64(require(v, path, "r"), path + ".r"),
                get_u64(require(v, path, "k"), path + ".k"));
        } catch (const std::invalid_argument& ex) {
            fail(path, ex.what());
        }
        return params;
    }
    fail(path + ".mode", "expected \"desk\" or \"paper\"");
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json v;
    try {
        v = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ConfigError(std::string("$: invalid JSON: ") + ex.what());
    }
    const std::string path = "$";
    require_object(v, path);
    reject_unknown_keys(v, path,
                        {"protocol", "hypergraph", "cover", "s_set", "prover", "k", "params",
                         "trials", "seed", "threads", "transcripts"});

    RunConfig cfg;
    std::string protocol = get_string(require(v, path, "protocol"), path + ".protocol");
    if (protocol == "case_study") {
        cfg.protocol = RunConfig::Protocol::CaseStudy;
    } else if (protocol == "verification") {
        cfg.protocol = RunConfig::Protocol::Verification;
    } else {
        fail(path + ".protocol", "expected \"case_study\" or \"verification\"");
    }

    cfg.hypergraph = parse_hypergraph_node(require(v, path, "hypergraph"), path + ".hypergraph");
    cfg.cover = parse_cover_node(require(v, path, "cover"), path + ".cover", cfg.hypergraph);
    CoverCheck check = validate_cover(cfg.hypergraph, cfg.cover);
    if (!check.ok) fail(path + ".cover", check.reason);

    if (v.contains("s_set")) cfg.s_set = parse_s_set_node(v.at("s_set"), path + ".s_set");
    if (v.contains("prover"))
        cfg.prover = parse_prover_node(v.at("prover"), path + ".prover", cfg.hypergraph);

    if (cfg.protocol == RunConfig::Protocol::CaseStudy) {
        if (v.contains("params"))
            fail(path + ".params", "only valid for the verification protocol");
        cfg.k = get_u32(require(v, path, "k"), path + ".k");
        if (cfg.k == 0) fail(path + ".k", "k must be positive");
        if (cfg.cover.classes.size() != 3)
            fail(path + ".cover.classes", "the case study needs exactly 3 classes, got " +
                                              std::to_string(cfg.cover.classes.size()));
    } else {
        if (v.contains("k")) fail(path + ".k", "only valid for the case_study protocol");
        cfg.params = parse_params_node(require(v, path, "params"), path + ".params");
        if (cfg.params.mode == ProtocolParams::Mode::Desk &&
            cfg.params.desk.n_qubits != cfg.hypergraph.n())
            fail(path + ".params.n_qubits",
                 "must equal the hypergraph vertex count " + std::to_string(cfg.hypergraph.n()));
    }

    if (v.contains("trials")) {
        cfg.trials = get_u64(v.at("trials"), path + ".trials");
        if (cfg.trials == 0) fail(path + ".trials", "trials must be positive");
    }
    if (v.contains("seed")) cfg.seed = get_u64(v.at("seed"), path + ".seed");
    if (v.contains("threads")) {
        cfg.threads = get_u32(v.at("threads"), path + ".threads");
        if (cfg.threads == 0 || cfg.threads > 256)
            fail(path + ".threads", "threads must lie in 1..256");
    }
    if (v.contains("transcripts"))
        cfg.transcripts_path = get_string(v.at("transcripts"), path + ".transcripts");
    return cfg;
}

StateVector state_from_spec(const std::string& json_text, const Hypergraph& h) {
    json v;
    try {
        v = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ConfigError(std::string("$: invalid JSON: ") + ex.what());
    }
    return parse_state_node(v, "$", h);
}

NoiseModel noise_from_spec(const std::string& json_text, uint32_t n) {
    json v;
    try {
        v = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ConfigError(std::string("$: invalid JSON: ") + ex.what());
    }
    return parse_noise_node(v, "$", n);
}

}  // namespace hsv
