#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "invmis/numtheory.hpp"

namespace invmis {

struct ParseError : std::runtime_error {
    int line;
    ParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

// Undirected simple graph. Adjacency lists are sorted, deduplicated and
// symmetric; a vertex never lists itself. Self-loops live in their own
// sorted vector so that degree() means "number of distinct neighbours".
struct Graph {
    int n = 0;
    std::vector<std::vector<int>> adj;
    std::vector<int> self_loops;

    Graph() = default;
    explicit Graph(int n_) : n(n_), adj(n_) {}

    void add_edge(int u, int v);       // ignores duplicates, routes u==v to self_loops
    bool has_edge(int u, int v) const; // false for u == v (use has_self_loop)
    bool has_self_loop(int v) const;
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    long edge_count() const;           // simple edges, self-loops excluded
    void check_consistent() const;     // throws std::logic_error on broken invariants
};

struct InverseGraph {
    nt::Prime p;
    Graph graph;
};

// Vertices 0..p-1; x is adjacent to x-1, x+1 and -x^{-1} (mod p), where the
// inverse of 0 is taken to be 0, which puts a self-loop on vertex 0.
// Coinciding neighbour rules collapse to a single edge, so degrees are 2 or 3.
InverseGraph build_inverse_graph(nt::Prime p);

// DIMACS text: "p edge <n> <m>" then one "e u v" line per edge, 1-indexed.
// Self-loops serialize as "e v v". Edge lines may repeat; duplicates merge.
std::string to_dimacs(const Graph& g);
Graph from_dimacs(std::string_view text);

// {"n": ..., "adjacency": [[...], ...], "self_loops": [...]}
std::string to_json_adjacency(const Graph& g);

// All simple cycles of length 3..max_len, each reported once as the vertex
// list rotated so the smallest vertex leads and its smaller neighbour comes
// second. Intended for modest n / short max_len; the search is exhaustive.
std::vector<std::vector<int>> enumerate_simple_cycles(const Graph& g, int max_len,
                                                      bool odd_only = false);

} // namespace invmis
