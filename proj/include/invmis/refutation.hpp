#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "invmis/graph.hpp"
#include "invmis/rational.hpp"

namespace invmis::refutation {

// A multi-cover of the vertex set by odd cycles, chains (single edges) and
// singletons: every vertex appears in exactly m pieces. Any independent set
// hits an odd cycle of length 2k+1 at most k times, a chain at most once and
// a singleton at most once, which caps m * N* and yields an upper bound on
// the independence number. Even cycles carry no extra power; decompose them
// into chains before building a certificate.
struct Certificate {
    int multiplicity = 1;
    std::vector<std::vector<int>> odd_cycles;
    std::vector<std::pair<int, int>> chains;
    std::vector<int> singles;
};

struct CertificateError : std::runtime_error {
    enum class Kind { NonEdge, NonUniformCoverage, EvenCycle, BadCycle, BadVertex, BadMultiplicity };
    Kind kind;
    int vertex;  // offending vertex where meaningful, else -1
    CertificateError(Kind k, int v, const std::string& what_)
        : std::runtime_error(what_), kind(k), vertex(v) {}
};

struct RefutationBound {
    std::int64_t numerator;    // sum_k k * (#odd (2k+1)-cycles) + #chains + #singles
    std::int64_t denominator;  // total coverage = multiplicity * N
    Rational value;            // numerator / denominator * N, exact
    std::int64_t floored;      // floor(value): the certified bound on N*
};

// Checks every piece against the graph and the exact-m coverage, then
// evaluates the bound. Throws CertificateError on any violation.
RefutationBound verify_certificate(const Graph& g, const Certificate& cert);

// {"m": 2, "odd_cycles": [[...],...], "chains": [[u,v],...], "singles": [v,...]}
Certificate certificate_from_json(const std::string& text);
std::string certificate_to_json(const Certificate& cert);

// Splits an even cycle into floor(len/2) chains covering every vertex once.
// Odd input length throws std::invalid_argument.
std::vector<std::pair<int, int>> chains_from_even_cycle(const std::vector<int>& cycle);

struct SearchBudget {
    double seconds = 5.0;        // wall-clock cap for the exhaustive phase
    std::uint64_t max_nodes = 20'000'000;
    int restarts = 0;            // extra shuffled greedy passes
    std::uint64_t seed = 0;
};

// Best certificate found within budget: exhaustive branch-and-bound over
// covers for small graphs, greedy cycle packing plus matching elsewhere.
// Always returns a valid certificate (singletons as a last resort); makes no
// optimality claim.
Certificate search_certificate(const Graph& g, int m_max, int len_max,
                               const SearchBudget& budget = {});

// Analytic machinery. With cycles shorter than 2k' all counted, the worst
// split of N covered slots yields the closed forms
//   a(k') = sum_{k=1}^{k'-1} (2k+1) 4^k   (slots eaten by short cycles)
//   b(k') = sum_{k=1}^{k'-1} k 4^k        (independence those cycles admit)
// kp must be in 1..25 to keep the sums in 64 bits.
std::int64_t a_of(int kp);
std::int64_t b_of(int kp);

// Smallest k' with k'/(2k'+1) >= 1/2 - eps, i.e. k' >= (1/eps - 1)/2.
// eps must lie strictly between 0 and 1/2.
int choose_kprime(const Rational& eps);

// Primes above this threshold certify N_cc / N >= 1/2 - eps for the chosen
// k': a(k') + (a(k') - 2 b(k') + 2) / eps, rounded up.
std::int64_t p_threshold(const Rational& eps);

// Worst-case bound on the cycle-chain number of the inverse graph on p
// vertices, assuming only that odd cycles shorter than 2 kp are capped by
// the census bound: b(kp) + kp * (p - a(kp)) / (2 kp + 1) - 1, exact.
// Requires p > a_of(kp).
Rational ncc_lower_bound(nt::Prime p, int kp);

} // namespace invmis::refutation
