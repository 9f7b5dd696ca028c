#include "invmis/graph.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

namespace invmis {

void Graph::add_edge(int u, int v) {
    if (u < 0 || u >= n || v < 0 || v >= n)
        throw std::out_of_range("Graph::add_edge: vertex out of range");
    if (u == v) {
        auto it = std::lower_bound(self_loops.begin(), self_loops.end(), v);
        if (it == self_loops.end() || *it != v) self_loops.insert(it, v);
        return;
    }
    auto insert_sorted = [](std::vector<int>& lst, int x) {
        auto it = std::lower_bound(lst.begin(), lst.end(), x);
        if (it == lst.end() || *it != x) lst.insert(it, x);
    };
    insert_sorted(adj[u], v);
    insert_sorted(adj[v], u);
}

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || u >= n || v < 0 || v >= n || u == v) return false;
    return std::binary_search(adj[u].begin(), adj[u].end(), v);
}

bool Graph::has_self_loop(int v) const {
    return std::binary_search(self_loops.begin(), self_loops.end(), v);
}

long Graph::edge_count() const {
    long deg_sum = 0;
    for (const auto& l : adj) deg_sum += static_cast<long>(l.size());
    return deg_sum / 2;
}

void Graph::check_consistent() const {
    if (static_cast<int>(adj.size()) != n)
        throw std::logic_error("Graph: adjacency size mismatch");
    for (int u = 0; u < n; ++u) {
        if (!std::is_sorted(adj[u].begin(), adj[u].end()))
            throw std::logic_error("Graph: unsorted adjacency list");
        if (std::adjacent_find(adj[u].begin(), adj[u].end()) != adj[u].end())
            throw std::logic_error("Graph: duplicate neighbour");
        for (int v : adj[u]) {
            if (v < 0 || v >= n) throw std::logic_error("Graph: neighbour out of range");
            if (v == u) throw std::logic_error("Graph: self in adjacency list");
            if (!std::binary_search(adj[v].begin(), adj[v].end(), u))
                throw std::logic_error("Graph: asymmetric edge");
        }
    }
    for (int v : self_loops)
        if (v < 0 || v >= n) throw std::logic_error("Graph: self-loop out of range");
}

InverseGraph build_inverse_graph(nt::Prime p) {
    nt::u64 pv = p.value();
    if (pv > 50'000'000)
        throw std::invalid_argument("build_inverse_graph: p too large for an explicit graph");
    int n = static_cast<int>(pv);
    Graph g(n);
    for (int x = 0; x < n; ++x) {
        g.add_edge(x, (x + 1) % n);
        // -x^{-1} with the 0^{-1} = 0 convention; x = 0 contributes the loop.
        // Vertices fixed by the map (x^2 = -1 mod p) get no third edge.
        nt::u64 y = x == 0 ? 0 : (pv - nt::mod_inverse(static_cast<nt::u64>(x), p)) % pv;
        if (y == static_cast<nt::u64>(x) && x != 0) continue;
        g.add_edge(x, static_cast<int>(y));
    }
    return InverseGraph{p, std::move(g)};
}

std::string to_dimacs(const Graph& g) {
    std::ostringstream out;
    long m = g.edge_count() + static_cast<long>(g.self_loops.size());
    out << "p edge " << g.n << ' ' << m << '\n';
    for (int u = 0; u < g.n; ++u)
        for (int v : g.adj[u])
            if (u < v) out << "e " << u + 1 << ' ' << v + 1 << '\n';
    for (int v : g.self_loops) out << "e " << v + 1 << ' ' << v + 1 << '\n';
    return out.str();
}

Graph from_dimacs(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool have_header = false;
    long declared_edges = 0;
    Graph g;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == 'c') continue;
        std::istringstream ls(line);
        char kind;
        ls >> kind;
        if (kind == 'p') {
            if (have_header) throw ParseError(lineno, "duplicate problem line");
            std::string fmt;
            int n;
            if (!(ls >> fmt >> n >> declared_edges) || fmt != "edge")
                throw ParseError(lineno, "malformed problem line, expected 'p edge n m'");
            if (n < 0) throw ParseError(lineno, "negative vertex count");
            g = Graph(n);
            have_header = true;
        } else if (kind == 'e') {
            if (!have_header) throw ParseError(lineno, "edge before problem line");
            long u, v;
            if (!(ls >> u >> v)) throw ParseError(lineno, "malformed edge line");
            if (u < 1 || u > g.n || v < 1 || v > g.n)
                throw ParseError(lineno, "vertex id out of range");
            g.add_edge(static_cast<int>(u - 1), static_cast<int>(v - 1));
        } else {
            throw ParseError(lineno, std::string("unknown line type '") + kind + "'");
        }
    }
    if (!have_header) throw ParseError(lineno, "missing problem line");
    return g;
}

std::string to_json_adjacency(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.n;
    j["adjacency"] = g.adj;
    j["self_loops"] = g.self_loops;
    return j.dump();
}

namespace {

// Paths grow only through vertices larger than the root, and the second
// vertex stays below the final one, so each cycle appears exactly once.
void cycle_dfs(const Graph& g, int root, std::vector<int>& path, std::vector<char>& used,
               int max_len, bool odd_only, std::vector<std::vector<int>>& out) {
    int cur = path.back();
    for (int nxt : g.adj[cur]) {
        if (nxt == root && path.size() >= 3) {
            if (path[1] < path.back() && (!odd_only || path.size() % 2 == 1))
                out.push_back(path);
            continue;
        }
        if (nxt <= root || used[nxt] || static_cast<int>(path.size()) >= max_len) continue;
        used[nxt] = 1;
        path.push_back(nxt);
        cycle_dfs(g, root, path, used, max_len, odd_only, out);
        path.pop_back();
        used[nxt] = 0;
    }
}

} // namespace

std::vector<std::vector<int>> enumerate_simple_cycles(const Graph& g, int max_len,
                                                      bool odd_only) {
    if (max_len < 3) return {};
    std::vector<std::vector<int>> out;
    std::vector<char> used(g.n, 0);
    std::vector<int> path;
    for (int root = 0; root < g.n; ++root) {
        used[root] = 1;
        path.assign(1, root);
        cycle_dfs(g, root, path, used, max_len, odd_only, out);
        used[root] = 0;
    }
    return out;
}

} // namespace invmis
