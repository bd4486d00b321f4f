#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hsv {

using Edge = std::vector<uint32_t>;  // sorted, duplicate-free, size >= 2

// Vertex set {0..n-1} plus a duplicate-free set of hyperedges. Inserting
// an edge that is already present removes it instead (symmetric
// difference), matching the involution of the generalized-CZ gates the
// edges stand for.
class Hypergraph {
public:
    explicit Hypergraph(uint32_t n = 0) : n_(n) {}

    uint32_t n() const { return n_; }
    const std::vector<Edge>& edges() const { return edges_; }

    // Symmetric-difference insertion. Vertices must be distinct, in
    // range, and at least two; the stored edge is sorted.
    void toggle_edge(Edge e);

    bool has_edge(const Edge& sorted_edge) const;

    // Edges through vertex v, as indices into edges().
    std::vector<uint32_t> edges_at(uint32_t v) const;

    bool is_two_uniform() const;

    std::string to_edge_list() const;
    std::string to_json() const;

private:
    uint32_t n_ = 0;
    std::vector<Edge> edges_;  // kept sorted lexicographically
};

// Edge-list text format: first non-empty line is n, every following
// non-empty line is one edge (>= 2 distinct vertex indices). Edge lines
// that repeat an earlier edge cancel pairwise. Errors carry the
// offending 1-based line number.
Hypergraph parse_hypergraph(const std::string& text);
Hypergraph hypergraph_from_json(const std::string& json_text);

struct IndependenceCover {
    std::vector<std::vector<uint32_t>> classes;  // each sorted, nonempty
    std::vector<double> weights;                 // empty or one per class

    std::string to_json() const;
};

IndependenceCover cover_from_json(const std::string& json_text);

struct ColorStats {
    uint32_t m = 0;                        // number of classes
    std::optional<uint32_t> gamma;         // chromatic number when known exact
    std::vector<uint32_t> class_sizes;
};

ColorStats cover_stats(const Hypergraph& h, const IndependenceCover& cover,
                       std::optional<uint32_t> exact_gamma = std::nullopt);

struct CoverCheck {
    bool ok = true;
    std::string reason;
    // First properness violation: edge index and class index.
    std::optional<uint32_t> witness_edge;
    std::optional<uint32_t> witness_class;
};

// A cover is valid when every class is a nonempty in-range vertex set,
// the classes jointly cover all vertices, no hyperedge contains two
// vertices of the same class, and the optional weights are nonnegative
// and sum to 1 within 1e-12. Overlapping classes are acceptable.
CoverCheck validate_cover(const Hypergraph& h, const IndependenceCover& cover);

// Two vertices are adjacent iff some hyperedge contains both.
// Returned as an adjacency list (sorted neighbor sets).
std::vector<std::vector<uint32_t>> primal_graph(const Hypergraph& h);

// F2 adjacency matrix of the primal graph; only defined when every edge
// has exactly two vertices (otherwise the linear syndrome form the
// matrix feeds does not exist). Throws std::invalid_argument otherwise.
std::vector<std::vector<uint8_t>> adjacency_matrix(const Hypergraph& h);

// First-fit coloring of the primal graph in the given vertex order
// (natural order when empty). Deterministic; classes come back sorted
// and form a partition.
IndependenceCover greedy_coloring(const Hypergraph& h,
                                  const std::vector<uint32_t>& order = {});

// Exact chromatic number of the primal graph by feasibility search with
// ascending class counts. Refuses instances with n > vertex_limit.
// Returns the chromatic number and a witness partition.
struct ExactColoring {
    uint32_t gamma = 0;
    IndependenceCover cover;
};
ExactColoring exact_chromatic_number(const Hypergraph& h, uint32_t vertex_limit = 20);

// Union Jack lattice with L x L cells: (L+1)^2 corner vertices then L^2
// center vertices; per cell one 3-vertex edge for each side of the cell
// (the side's two corners plus the center). Cover = checkerboard corner
// classes plus an all-centers class.
struct UnionJack {
    Hypergraph graph;
    IndependenceCover cover;
};
UnionJack union_jack(uint32_t cells_per_side);

}  // namespace hsv
