#pragma once

#include <cstdint>
#include <vector>

#include "invmis/graph.hpp"

namespace invmis::solver {

// A self-looped vertex neighbors itself, so under the standard definition it
// can never be independent; ExcludeLoopVertex implements that reading and is
// the default everywhere. IgnoreLoops treats the graph as if loops were
// absent. The two differ by at most one vertex on the graphs built here.
enum class LoopPolicy { ExcludeLoopVertex, IgnoreLoops };

struct SolveResult {
    int n_star = 0;
    std::vector<int> witness;       // sorted vertex ids
    std::uint64_t nodes = 0;
    double wall_seconds = 0.0;
    bool proven = true;             // false when a budget cut the search short
};

struct SolveOptions {
    LoopPolicy policy = LoopPolicy::ExcludeLoopVertex;
    double budget_seconds = 0.0;    // 0 means unlimited
    std::uint64_t max_nodes = 0;    // 0 means unlimited
    int threads = 1;                // >1 splits the root frontier across workers
};

// One replayable solving step. u = w = -1 records "v was taken"; otherwise v
// was a degree-2 vertex folded with neighbors u and w, and the slot v stands
// for "either v, or both u and w" until unfold resolves it.
struct FoldEvent {
    int v;
    int u = -1;
    int w = -1;
};

struct ReduceResult {
    Graph reduced;                  // alive subgraph, compactly relabeled
    std::vector<int> kept;          // kept[i] = original id of reduced vertex i
    int gain = 0;                   // MIS size gained by the reductions
    std::vector<FoldEvent> log;     // in application order, original ids
};

// Exhaustive subset search. Oracle for everything else; rejects g.n > 32.
SolveResult solve_naive(const Graph& g, LoopPolicy policy = LoopPolicy::ExcludeLoopVertex);

// Branch and bound with isolated/leaf/degree-2 reductions and a matching
// upper bound. Equals solve_naive wherever both run; a budget ends the
// search early with proven = false and the best incumbent found.
SolveResult solve_exact(const Graph& g, const SolveOptions& opts = {});

// Applies the reductions to fixpoint without branching. gain + n_star(reduced)
// equals n_star(g) under the given policy; unfold completes a witness.
ReduceResult reduce(const Graph& g, LoopPolicy policy = LoopPolicy::ExcludeLoopVertex);

// Extends a witness of the reduced graph (already mapped back to original
// ids) to a witness of the original graph by replaying the log backwards.
// Throws std::invalid_argument if the witness collides with the log.
std::vector<int> unfold(const std::vector<FoldEvent>& log, std::vector<int> witness);

bool verify_independent(const Graph& g, const std::vector<int>& s,
                        LoopPolicy policy = LoopPolicy::ExcludeLoopVertex);

} // namespace invmis::solver
