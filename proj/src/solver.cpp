#include "invmis/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace invmis::solver {

namespace {

using Clock = std::chrono::steady_clock;

void insert_sorted(std::vector<int>& row, int v) {
    row.insert(std::lower_bound(row.begin(), row.end(), v), v);
}

void erase_sorted(std::vector<int>& row, int v) {
    row.erase(std::lower_bound(row.begin(), row.end(), v));
}

// Mutable adjacency with a LIFO undo trail. Rows of alive vertices list only
// alive vertices; a removed vertex keeps its row frozen so the matching undo
// knows exactly where to splice it back in.
struct Work {
    std::vector<std::vector<int>> adj;
    std::vector<char> alive;
    int alive_count;

    struct Undo {
        enum Kind { Remove, Row } kind;
        int v;
        std::vector<int> row;
    };
    std::vector<Undo> trail;

    explicit Work(const Graph& g)
        : adj(g.adj), alive(g.n, 1), alive_count(g.n) {}

    bool has_edge(int u, int v) const {
        const auto& row = adj[u].size() <= adj[v].size() ? adj[u] : adj[v];
        int t = adj[u].size() <= adj[v].size() ? v : u;
        return std::binary_search(row.begin(), row.end(), t);
    }

    void remove_vertex(int v) {
        trail.push_back({Undo::Remove, v, {}});
        for (int u : adj[v]) erase_sorted(adj[u], v);
        alive[v] = 0;
        --alive_count;
    }

    void set_row(int v, std::vector<int> next) {
        trail.push_back({Undo::Row, v, adj[v]});
        for (int s : adj[v]) erase_sorted(adj[s], v);
        adj[v] = std::move(next);
        for (int s : adj[v]) insert_sorted(adj[s], v);
    }

    std::size_t mark() const { return trail.size(); }

    void rewind(std::size_t m) {
        while (trail.size() > m) {
            Undo& op = trail.back();
            if (op.kind == Undo::Remove) {
                alive[op.v] = 1;
                ++alive_count;
                for (int u : adj[op.v]) insert_sorted(adj[u], op.v);
            } else {
                for (int s : adj[op.v]) erase_sorted(adj[s], op.v);
                adj[op.v] = std::move(op.row);
                for (int s : adj[op.v]) insert_sorted(adj[s], op.v);
            }
            trail.pop_back();
        }
    }
};

std::vector<int> witness_from_events(const std::vector<FoldEvent>& events, int n) {
    std::vector<char> in(n, 0);
    for (auto it = events.rbegin(); it != events.rend(); ++it) {
        if (it->u < 0) {
            in[it->v] = 1;
        } else if (in[it->v]) {
            in[it->v] = 0;
            in[it->u] = 1;
            in[it->w] = 1;
        } else {
            in[it->v] = 1;
        }
    }
    std::vector<int> out;
    for (int v = 0; v < n; ++v)
        if (in[v]) out.push_back(v);
    return out;
}

struct Searcher {
    Work w;
    int n;
    std::vector<FoldEvent> events;
    int gain = 0;
    int best = -1;
    std::vector<int> best_witness;
    std::uint64_t nodes = 0;
    std::uint64_t max_nodes = ~0ull;
    Clock::time_point deadline{};
    bool has_deadline = false;
    bool out_of_budget = false;
    std::atomic<int>* shared = nullptr;  // cross-worker incumbent, pruning only

    std::vector<std::uint32_t> stamp;
    std::uint32_t epoch = 0;

    explicit Searcher(const Graph& g) : w(g), n(g.n), stamp(g.n, 0) {}

    bool over_budget() {
        if (out_of_budget) return true;
        if (nodes > max_nodes ||
            (has_deadline && (nodes & 0x3F) == 0 && Clock::now() > deadline))
            out_of_budget = true;
        return out_of_budget;
    }

    // include v and drop its closed neighborhood
    void take(int v) {
        events.push_back({v, -1, -1});
        auto nbrs = w.adj[v];
        for (int u : nbrs) w.remove_vertex(u);
        w.remove_vertex(v);
        ++gain;
    }

    // degree-2 fold; neighbors must be non-adjacent. Returns the merged
    // neighborhood so the caller can requeue the touched vertices.
    std::vector<int> fold(int v) {
        int u = w.adj[v][0], x = w.adj[v][1];
        events.push_back({v, u, x});
        std::vector<int> merged;
        merged.reserve(w.adj[u].size() + w.adj[x].size());
        std::set_union(w.adj[u].begin(), w.adj[u].end(), w.adj[x].begin(), w.adj[x].end(),
                       std::back_inserter(merged));
        merged.erase(std::remove_if(merged.begin(), merged.end(),
                                    [&](int s) { return s == u || s == x || s == v; }),
                     merged.end());
        w.remove_vertex(u);
        w.remove_vertex(x);
        w.set_row(v, merged);
        ++gain;
        return merged;
    }

    void reduce_fixpoint() {
        std::vector<int> stack;
        for (int v = 0; v < n; ++v)
            if (w.alive[v]) stack.push_back(v);
        std::vector<int> affected;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (!w.alive[v]) continue;
            std::size_t d = w.adj[v].size();
            if (d >= 3) continue;
            affected.clear();
            if (d == 0) {
                take(v);
            } else if (d == 1) {
                int u = w.adj[v][0];
                for (int s : w.adj[u])
                    if (s != v) affected.push_back(s);
                take(v);
            } else {
                int u = w.adj[v][0], x = w.adj[v][1];
                if (w.has_edge(u, x)) {
                    for (int s : w.adj[u])
                        if (s != v && s != x) affected.push_back(s);
                    for (int s : w.adj[x])
                        if (s != v && s != u) affected.push_back(s);
                    take(v);
                } else {
                    affected = fold(v);
                    affected.push_back(v);
                }
            }
            for (int s : affected) stack.push_back(s);
        }
    }

    int matching_count() {
        ++epoch;
        int m = 0;
        for (int u = 0; u < n; ++u) {
            if (!w.alive[u] || stamp[u] == epoch) continue;
            for (int v : w.adj[u]) {
                if (stamp[v] != epoch) {
                    stamp[u] = stamp[v] = epoch;
                    ++m;
                    break;
                }
            }
        }
        return m;
    }

    int branch_vertex() const {
        int b = -1, bd = -1;
        for (int v = 0; v < n; ++v) {
            if (!w.alive[v]) continue;
            int d = static_cast<int>(w.adj[v].size());
            if (d > bd) { bd = d; b = v; }
        }
        return b;
    }

    void record_candidate() {
        if (gain <= best) return;
        best = gain;
        best_witness = witness_from_events(events, n);
        if (shared) {
            int cur = shared->load(std::memory_order_relaxed);
            while (cur < best &&
                   !shared->compare_exchange_weak(cur, best, std::memory_order_relaxed)) {
            }
        }
    }

    // precondition: reductions already at fixpoint
    void search() {
        ++nodes;
        if (over_budget()) return;
        if (w.alive_count == 0) {
            record_candidate();
            return;
        }
        int floor_best = best;
        if (shared)
            floor_best = std::max(floor_best, shared->load(std::memory_order_relaxed));
        if (gain + w.alive_count - matching_count() <= floor_best) return;

        int b = branch_vertex();
        std::size_t m = w.mark(), em = events.size();
        int gs = gain;

        take(b);
        reduce_fixpoint();
        search();
        w.rewind(m);
        events.resize(em);
        gain = gs;
        if (out_of_budget) return;

        w.remove_vertex(b);
        reduce_fixpoint();
        search();
        w.rewind(m);
        events.resize(em);
        gain = gs;
    }
};

void apply_policy(Searcher& s, const Graph& g, LoopPolicy policy) {
    if (policy != LoopPolicy::ExcludeLoopVertex) return;
    for (int v : g.self_loops)
        if (s.w.alive[v]) s.w.remove_vertex(v);
}

#ifdef _OPENMP

struct Subproblem {
    std::vector<std::pair<int, bool>> decisions;  // (vertex, include?)
};

// Replays a decision list on a copy of the root-reduced searcher. Returns
// false when the graph emptied along the way.
bool replay(Searcher& t, const Subproblem& sub) {
    for (auto [v, include] : sub.decisions) {
        if (include)
            t.take(v);
        else
            t.w.remove_vertex(v);
        t.reduce_fixpoint();
        if (t.w.alive_count == 0) return false;
    }
    return true;
}

#endif // _OPENMP

} // namespace

SolveResult solve_naive(const Graph& g, LoopPolicy policy) {
    if (g.n > 32)
        throw std::invalid_argument("solve_naive: need n <= 32, got " + std::to_string(g.n));
    auto t0 = Clock::now();
    g.check_consistent();

    int n = g.n;
    std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
    std::vector<std::uint32_t> nbr(n, 0);
    for (int v = 0; v < n; ++v)
        for (int u : g.adj[v]) nbr[v] |= 1u << u;
    std::uint32_t allowed0 = full;
    if (policy == LoopPolicy::ExcludeLoopVertex)
        for (int v : g.self_loops) allowed0 &= ~(1u << v);

    int best = -1;
    std::uint32_t best_set = 0;
    std::uint64_t nodes = 0;

    struct Rec {
        const std::vector<std::uint32_t>& nbr;
        int& best;
        std::uint32_t& best_set;
        std::uint64_t& nodes;
        void go(std::uint32_t allowed, std::uint32_t chosen, int cnt) {
            ++nodes;
            if (cnt + __builtin_popcount(allowed) <= best) return;
            if (!allowed) {
                best = cnt;
                best_set = chosen;
                return;
            }
            int v = __builtin_ctz(allowed);
            go(allowed & ~(nbr[v] | (1u << v)), chosen | (1u << v), cnt + 1);
            go(allowed & ~(1u << v), chosen, cnt);
        }
    } rec{nbr, best, best_set, nodes};
    rec.go(allowed0, 0, 0);

    SolveResult r;
    r.n_star = best;
    for (int v = 0; v < n; ++v)
        if (best_set & (1u << v)) r.witness.push_back(v);
    r.nodes = nodes;
    r.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

SolveResult solve_exact(const Graph& g, const SolveOptions& opts) {
    auto t0 = Clock::now();
    g.check_consistent();

    Searcher root(g);
    if (opts.max_nodes) root.max_nodes = opts.max_nodes;
    if (opts.budget_seconds > 0) {
        root.has_deadline = true;
        root.deadline = t0 + std::chrono::duration_cast<Clock::duration>(
                                 std::chrono::duration<double>(opts.budget_seconds));
    }
    apply_policy(root, g, opts.policy);
    root.reduce_fixpoint();
    // the reduction bank alone is already a feasible solution, so even a
    // budget that expires before the first leaf returns an honest incumbent
    root.record_candidate();

    SolveResult r;

#ifdef _OPENMP
    if (opts.threads > 1 && root.w.alive_count > 0) {
        // grow a small frontier of decision prefixes, then solve them in
        // parallel; the shared incumbent is used for pruning only, so n_star
        // is schedule-independent (witnesses need not be)
        std::deque<Subproblem> queue;
        queue.push_back({});
        std::vector<std::pair<int, std::vector<int>>> finished;  // (value, witness)
        std::uint64_t expand_nodes = 0;
        std::size_t want = static_cast<std::size_t>(4) * opts.threads;
        while (!queue.empty() && queue.size() < want && queue.size() + finished.size() < 512) {
            Subproblem sub = std::move(queue.front());
            queue.pop_front();
            Searcher t = root;
            ++expand_nodes;
            if (!replay(t, sub)) {
                finished.emplace_back(t.gain, witness_from_events(t.events, t.n));
                continue;
            }
            int b = t.branch_vertex();
            Subproblem inc = sub, exc = std::move(sub);
            inc.decisions.emplace_back(b, true);
            exc.decisions.emplace_back(b, false);
            queue.push_back(std::move(inc));
            queue.push_back(std::move(exc));
        }

        std::atomic<int> incumbent{-1};
        for (const auto& [val, wit] : finished) {
            int cur = incumbent.load();
            while (cur < val && !incumbent.compare_exchange_weak(cur, val)) {
            }
        }
        std::vector<Subproblem> frontier(queue.begin(), queue.end());
        std::vector<int> vals(frontier.size(), -1);
        std::vector<std::vector<int>> wits(frontier.size());
        std::vector<std::uint64_t> node_counts(frontier.size(), 0);
        std::vector<char> cut(frontier.size(), 0);

#pragma omp parallel for schedule(dynamic, 1) num_threads(opts.threads)
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            Searcher t = root;
            t.shared = &incumbent;
            if (replay(t, frontier[i]))
                t.search();
            else
                t.record_candidate();
            vals[i] = t.best;
            wits[i] = std::move(t.best_witness);
            node_counts[i] = t.nodes;
            cut[i] = t.out_of_budget;
        }

        int best = -1;
        const std::vector<int>* best_wit = nullptr;
        for (const auto& [val, wit] : finished)
            if (val > best) { best = val; best_wit = &wit; }
        for (std::size_t i = 0; i < frontier.size(); ++i)
            if (vals[i] > best) { best = vals[i]; best_wit = &wits[i]; }

        r.n_star = best;
        if (best_wit) r.witness = *best_wit;
        r.nodes = expand_nodes;
        for (auto c : node_counts) r.nodes += c;
        r.proven = std::find(cut.begin(), cut.end(), 1) == cut.end();
        r.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        return r;
    }
#endif

    root.search();
    r.n_star = root.best;
    r.witness = std::move(root.best_witness);
    r.nodes = root.nodes;
    r.proven = !root.out_of_budget;
    r.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

ReduceResult reduce(const Graph& g, LoopPolicy policy) {
    g.check_consistent();
    Searcher s(g);
    apply_policy(s, g, policy);
    s.reduce_fixpoint();

    ReduceResult r;
    r.gain = s.gain;
    r.log = std::move(s.events);
    std::vector<int> newid(g.n, -1);
    for (int v = 0; v < g.n; ++v) {
        if (!s.w.alive[v]) continue;
        newid[v] = static_cast<int>(r.kept.size());
        r.kept.push_back(v);
    }
    r.reduced = Graph(static_cast<int>(r.kept.size()));
    for (int v : r.kept)
        for (int u : s.w.adj[v])
            if (u > v) r.reduced.add_edge(newid[v], newid[u]);
    for (int v : g.self_loops)
        if (newid[v] >= 0) r.reduced.add_edge(newid[v], newid[v]);
    return r;
}

std::vector<int> unfold(const std::vector<FoldEvent>& log, std::vector<int> witness) {
    int top = -1;
    for (int v : witness) top = std::max(top, v);
    for (const auto& ev : log) top = std::max({top, ev.v, ev.u, ev.w});
    std::vector<char> in(top + 1, 0);
    for (int v : witness) {
        if (v < 0 || in[v]) throw std::invalid_argument("unfold: bad witness vertex");
        in[v] = 1;
    }
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
        if (it->u < 0) {
            if (in[it->v]) throw std::invalid_argument("unfold: witness collides with log");
            in[it->v] = 1;
        } else if (in[it->v]) {
            if (in[it->u] || in[it->w])
                throw std::invalid_argument("unfold: witness collides with log");
            in[it->v] = 0;
            in[it->u] = 1;
            in[it->w] = 1;
        } else {
            in[it->v] = 1;
        }
    }
    std::vector<int> out;
    for (int v = 0; v <= top; ++v)
        if (in[v]) out.push_back(v);
    return out;
}

bool verify_independent(const Graph& g, const std::vector<int>& s, LoopPolicy policy) {
    std::vector<char> in(g.n, 0);
    for (int v : s) {
        if (v < 0 || v >= g.n || in[v]) return false;
        in[v] = 1;
    }
    if (policy == LoopPolicy::ExcludeLoopVertex)
        for (int v : g.self_loops)
            if (in[v]) return false;
    for (int v : s)
        for (int u : g.adj[v])
            if (in[u]) return false;
    return true;
}

} // namespace invmis::solver
