#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hsv/hypergraph.hpp"
#include "hsv/protocol.hpp"
#include "hsv/stabilizer.hpp"
#include "hsv/state_sim.hpp"

namespace hsv {

// Thrown for malformed configs; the message names the offending field
// by JSON-pointer-like path ("$.prover.kind: ...").
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Declarative run description for `hsv protocol` and `hsv test`.
// Strictly validated: wrong types, out-of-range values, and unknown
// keys are all rejected before anything executes.
struct RunConfig {
    enum class Protocol { CaseStudy, Verification };

    Protocol protocol = Protocol::CaseStudy;
    Hypergraph hypergraph;
    IndependenceCover cover;
    CorrectableSet s_set;
    ProverModel prover;
    uint32_t k = 1;  // case study
    ProtocolParams params;  // verification
    uint64_t trials = 1;
    uint64_t seed = 0;
    uint32_t threads = 1;
    std::optional<std::string> transcripts_path;
};

// Parses and validates a config JSON document (see README for the
// schema). Every error is a ConfigError naming the field.
RunConfig parse_run_config(const std::string& json_text);

// State specs used in configs: {"kind":"hypergraph"}, a Z-error pattern
// on |H>, a computational/plus-minus product string, or an explicit
// amplitude list.
StateVector state_from_spec(const std::string& json_text, const Hypergraph& h);

// Noise-model node of the config schema, validated for n qubits.
NoiseModel noise_from_spec(const std::string& json_text, uint32_t n);

}  // namespace hsv
