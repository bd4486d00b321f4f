#include "hsv/hypergraph.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hsv {

using nlohmann::json;

void Hypergraph::toggle_edge(Edge e) {
    std::sort(e.begin(), e.end());
    if (e.size() < 2) throw std::invalid_argument("edge needs at least 2 vertices");
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
        throw std::invalid_argument("edge repeats a vertex");
    if (e.back() >= n_) throw std::invalid_argument("edge vertex out of range");
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it != edges_.end() && *it == e)
        edges_.erase(it);  // second insertion cancels the first
    else
        edges_.insert(it, std::move(e));
}

bool Hypergraph::has_edge(const Edge& sorted_edge) const {
    return std::binary_search(edges_.begin(), edges_.end(), sorted_edge);
}

std::vector<uint32_t> Hypergraph::edges_at(uint32_t v) const {
    std::vector<uint32_t> out;
    for (uint32_t idx = 0; idx < edges_.size(); ++idx) {
        if (std::binary_search(edges_[idx].begin(), edges_[idx].end(), v)) out.push_back(idx);
    }
    return out;
}

bool Hypergraph::is_two_uniform() const {
    return std::all_of(edges_.begin(), edges_.end(),
                       [](const Edge& e) { return e.size() == 2; });
}

std::string Hypergraph::to_edge_list() const {
    std::ostringstream out;
    out << n_ << "\n";
    for (const Edge& e : edges_) {
        for (size_t i = 0; i < e.size(); ++i) out << (i ? " " : "") << e[i];
        out << "\n";
    }
    return out.str();
}

std::string Hypergraph::to_json() const {
    json j;
    j["n"] = n_;
    j["edges"] = edges_;
    return j.dump();
}

Hypergraph parse_hypergraph(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    uint32_t line_no = 0;
    bool have_n = false;
    Hypergraph h;
    auto fail = [&](const std::string& what) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::vector<long long> values;
        std::string tok;
        while (fields >> tok) {
            try {
                size_t used = 0;
                long long v = std::stoll(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
                values.push_back(v);
            } catch (const std::exception&) {
                fail("'" + tok + "' is not an integer");
            }
        }
        if (values.empty()) continue;  // blank line
        if (!have_n) {
            if (values.size() != 1) fail("expected a single vertex count");
            if (values[0] < 0) fail("vertex count must be nonnegative");
            h = Hypergraph(static_cast<uint32_t>(values[0]));
            have_n = true;
            continue;
        }
        if (values.size() < 2) fail("edge needs at least 2 vertices");
        Edge e;
        for (long long v : values) {
            if (v < 0 || static_cast<uint64_t>(v) >= h.n()) fail("vertex out of range");
            e.push_back(static_cast<uint32_t>(v));
        }
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end())
            fail("edge repeats a vertex");
        h.toggle_edge(std::move(e));  // duplicate lines cancel pairwise
    }
    if (!have_n) throw std::invalid_argument("line 1: missing vertex count");
    return h;
}

Hypergraph hypergraph_from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw std::invalid_argument("hypergraph JSON needs fields n and edges");
    Hypergraph h(j.at("n").get<uint32_t>());
    for (const auto& e : j.at("edges")) h.toggle_edge(e.get<Edge>());
    return h;
}

std::string IndependenceCover::to_json() const {
    json j;
    j["classes"] = classes;
    if (!weights.empty()) j["weights"] = weights;
    return j.dump();
}

IndependenceCover cover_from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    if (!j.is_object() || !j.contains("classes"))
        throw std::invalid_argument("cover JSON needs field classes");
    IndependenceCover cover;
    cover.classes = j.at("classes").get<std::vector<std::vector<uint32_t>>>();
    for (auto& cls : cover.classes) std::sort(cls.begin(), cls.end());
    if (j.contains("weights")) cover.weights = j.at("weights").get<std::vector<double>>();
    return cover;
}

ColorStats cover_stats(const Hypergraph& h, const IndependenceCover& cover,
                       std::optional<uint32_t> exact_gamma) {
    (void)h;
    ColorStats stats;
    stats.m = static_cast<uint32_t>(cover.classes.size());
    stats.gamma = exact_gamma;
    for (const auto& cls : cover.classes)
        stats.class_sizes.push_back(static_cast<uint32_t>(cls.size()));
    return stats;
}

CoverCheck validate_cover(const Hypergraph& h, const IndependenceCover& cover) {
    CoverCheck check;
    auto fail = [&](std::string reason) {
        check.ok = false;
        check.reason = std::move(reason);
        return check;
    };
    if (cover.classes.empty()) return fail("cover has no classes");
    std::vector<uint8_t> covered(h.n(), 0);
    for (uint32_t c = 0; c < cover.classes.size(); ++c) {
        const auto& cls = cover.classes[c];
        if (cls.empty()) return fail("class " + std::to_string(c) + " is empty");
        for (uint32_t v : cls) {
            if (v >= h.n())
                return fail("class " + std::to_string(c) + " names vertex " +
                            std::to_string(v) + " outside 0.." + std::to_string(h.n() - 1));
            covered[v] = 1;
        }
    }
    for (uint32_t v = 0; v < h.n(); ++v) {
        if (!covered[v]) return fail("vertex " + std::to_string(v) + " is uncovered");
    }
    // Properness: no hyperedge may contain two vertices of one class.
    const auto& edges = h.edges();
    for (uint32_t c = 0; c < cover.classes.size(); ++c) {
        const auto& cls = cover.classes[c];
        for (uint32_t eidx = 0; eidx < edges.size(); ++eidx) {
            uint32_t hits = 0;
            for (uint32_t v : edges[eidx]) {
                if (std::binary_search(cls.begin(), cls.end(), v)) ++hits;
            }
            if (hits >= 2) {
                check.ok = false;
                check.reason = "edge " + std::to_string(eidx) + " has " +
                               std::to_string(hits) + " vertices in class " +
                               std::to_string(c);
                check.witness_edge = eidx;
                check.witness_class = c;
                return check;
            }
        }
    }
    if (!cover.weights.empty()) {
        if (cover.weights.size() != cover.classes.size())
            return fail("weights count differs from class count");
        double sum = 0.0;
        for (uint32_t c = 0; c < cover.weights.size(); ++c) {
            if (cover.weights[c] < 0.0)
                return fail("weight " + std::to_string(c) + " is negative");
            sum += cover.weights[c];
        }
        if (std::abs(sum - 1.0) > 1e-12) return fail("weights do not sum to 1");
    }
    return check;
}

std::vector<std::vector<uint32_t>> primal_graph(const Hypergraph& h) {
    std::vector<std::set<uint32_t>> nbrs(h.n());
    for (const Edge& e : h.edges()) {
        for (size_t a = 0; a < e.size(); ++a) {
            for (size_t b = a + 1; b < e.size(); ++b) {
                nbrs[e[a]].insert(e[b]);
                nbrs[e[b]].insert(e[a]);
            }
        }
    }
    std::vector<std::vector<uint32_t>> out(h.n());
    for (uint32_t v = 0; v < h.n(); ++v) out[v].assign(nbrs[v].begin(), nbrs[v].end());
    return out;
}

std::vector<std::vector<uint8_t>> adjacency_matrix(const Hypergraph& h) {
    if (!h.is_two_uniform())
        throw std::invalid_argument(
            "adjacency matrix requires every edge to have exactly 2 vertices");
    std::vector<std::vector<uint8_t>> a(h.n(), std::vector<uint8_t>(h.n(), 0));
    for (const Edge& e : h.edges()) a[e[0]][e[1]] = a[e[1]][e[0]] = 1;
    return a;
}

IndependenceCover greedy_coloring(const Hypergraph& h, const std::vector<uint32_t>& order) {
    std::vector<uint32_t> seq = order;
    if (seq.empty()) {
        seq.resize(h.n());
        for (uint32_t v = 0; v < h.n(); ++v) seq[v] = v;
    }
    if (seq.size() != h.n())
        throw std::invalid_argument("greedy_coloring: order must list every vertex once");
    auto nbrs = primal_graph(h);
    std::vector<int64_t> color(h.n(), -1);
    uint32_t used = 0;
    for (uint32_t v : seq) {
        if (v >= h.n()) throw std::invalid_argument("greedy_coloring: vertex out of range");
        if (color[v] >= 0) throw std::invalid_argument("greedy_coloring: repeated vertex");
        std::vector<uint8_t> taken(used + 1, 0);
        for (uint32_t u : nbrs[v]) {
            if (color[u] >= 0 && static_cast<uint32_t>(color[u]) <= used)
                taken[static_cast<uint32_t>(color[u])] = 1;
        }
        uint32_t c = 0;
        while (c < taken.size() && taken[c]) ++c;
        color[v] = c;
        used = std::max(used, c + 1);
    }
    IndependenceCover cover;
    cover.classes.resize(used);
    for (uint32_t v = 0; v < h.n(); ++v)
        cover.classes[static_cast<uint32_t>(color[v])].push_back(v);
    return cover;
}

namespace {

// Feasibility of a proper k-coloring of the primal graph, by
// backtracking over vertices in descending-degree order. Colors above
// the number of already-colored vertices are never tried, which removes
// color-permutation symmetry.
bool k_colorable(const std::vector<std::vector<uint32_t>>& nbrs, uint32_t k,
                 std::vector<uint32_t>& order, size_t pos, std::vector<int64_t>& color,
                 uint32_t used) {
    if (pos == order.size()) return true;
    uint32_t v = order[pos];
    uint32_t tryable = std::min(k, used + 1);
    for (uint32_t c = 0; c < tryable; ++c) {
        bool clash = false;
        for (uint32_t u : nbrs[v]) {
            if (color[u] == static_cast<int64_t>(c)) {
                clash = true;
                break;
            }
        }
        if (clash) continue;
        color[v] = c;
        if (k_colorable(nbrs, k, order, pos + 1, color, std::max(used, c + 1))) return true;
        color[v] = -1;
    }
    return false;
}

}  // namespace

ExactColoring exact_chromatic_number(const Hypergraph& h, uint32_t vertex_limit) {
    if (h.n() > vertex_limit)
        throw std::invalid_argument("exact_chromatic_number: instance has " +
                                    std::to_string(h.n()) + " vertices, limit is " +
                                    std::to_string(vertex_limit));
    ExactColoring out;
    if (h.n() == 0) {
        out.gamma = 0;
        return out;
    }
    auto nbrs = primal_graph(h);
    std::vector<uint32_t> order(h.n());
    for (uint32_t v = 0; v < h.n(); ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        return nbrs[a].size() > nbrs[b].size();
    });
    for (uint32_t k = 1; k <= h.n(); ++k) {
        std::vector<int64_t> color(h.n(), -1);
        if (k_colorable(nbrs, k, order, 0, color, 0)) {
            out.gamma = k;
            out.cover.classes.assign(k, {});
            for (uint32_t v = 0; v < h.n(); ++v)
                out.cover.classes[static_cast<uint32_t>(color[v])].push_back(v);
            // The witness may use fewer classes than k on disconnected
            // leftovers; drop empties.
            std::erase_if(out.cover.classes,
                          [](const std::vector<uint32_t>& c) { return c.empty(); });
            out.gamma = static_cast<uint32_t>(out.cover.classes.size());
            return out;
        }
    }
    throw std::logic_error("exact_chromatic_number: no coloring found");  // unreachable
}

UnionJack union_jack(uint32_t cells_per_side) {
    uint32_t L = cells_per_side;
    if (L == 0) throw std::invalid_argument("union_jack: need at least one cell");
    uint32_t corners = (L + 1) * (L + 1);
    UnionJack uj{Hypergraph(corners + L * L), {}};
    auto corner = [&](uint32_t r, uint32_t c) { return r * (L + 1) + c; };
    auto center = [&](uint32_t i, uint32_t j) { return corners + i * L + j; };
    for (uint32_t i = 0; i < L; ++i) {
        for (uint32_t j = 0; j < L; ++j) {
            uint32_t cc = center(i, j);
            uint32_t a = corner(i, j), b = corner(i, j + 1);
            uint32_t c = corner(i + 1, j), d = corner(i + 1, j + 1);
            // One edge per cell side: side corners plus the center.
            uj.graph.toggle_edge({a, b, cc});
            uj.graph.toggle_edge({b, d, cc});
            uj.graph.toggle_edge({d, c, cc});
            uj.graph.toggle_edge({c, a, cc});
        }
    }
    // Checkerboard classes on corners; side-adjacent corners always
    // differ in (row+col) parity, and centers sit in their own class.
    std::vector<uint32_t> even, odd, cents;
    for (uint32_t r = 0; r <= L; ++r)
        for (uint32_t c = 0; c <= L; ++c)
            ((r + c) % 2 == 0 ? even : odd).push_back(corner(r, c));
    for (uint32_t i = 0; i < L; ++i)
        for (uint32_t j = 0; j < L; ++j) cents.push_back(center(i, j));
    uj.cover.classes = {even, odd, cents};
    return uj;
}

}  // namespace hsv
