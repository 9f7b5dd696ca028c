#include "invmis/refutation.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

#include <json.hpp>

namespace invmis::refutation {

namespace {

using Kind = CertificateError::Kind;

void check_vertex(const Graph& g, int v) {
    if (v < 0 || v >= g.n)
        throw CertificateError(Kind::BadVertex, v,
                               "certificate names vertex " + std::to_string(v) +
                                   " outside 0.." + std::to_string(g.n - 1));
}

void check_edge(const Graph& g, int u, int v) {
    check_vertex(g, u);
    check_vertex(g, v);
    if (!g.has_edge(u, v))
        throw CertificateError(Kind::NonEdge, u,
                               "certificate uses non-edge (" + std::to_string(u) + "," +
                                   std::to_string(v) + ")");
}

} // namespace

RefutationBound verify_certificate(const Graph& g, const Certificate& cert) {
    if (cert.multiplicity < 1)
        throw CertificateError(Kind::BadMultiplicity, -1, "multiplicity must be >= 1");
    std::vector<int> cover(g.n, 0);
    std::int64_t numerator = 0;

    for (const auto& cyc : cert.odd_cycles) {
        int len = static_cast<int>(cyc.size());
        if (len < 3)
            throw CertificateError(Kind::BadCycle, len ? cyc[0] : -1,
                                   "cycle shorter than 3 vertices");
        if (len % 2 == 0)
            throw CertificateError(Kind::EvenCycle, cyc[0],
                                   "even cycle in certificate; split it into chains");
        std::vector<int> sorted = cyc;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw CertificateError(Kind::BadCycle, cyc[0], "cycle repeats a vertex");
        for (int i = 0; i < len; ++i) check_edge(g, cyc[i], cyc[(i + 1) % len]);
        for (int v : cyc) ++cover[v];
        numerator += (len - 1) / 2;  // a (2k+1)-cycle admits at most k chosen vertices
    }
    for (auto [u, v] : cert.chains) {
        if (u == v)
            throw CertificateError(Kind::BadCycle, u, "chain endpoints coincide");
        check_edge(g, u, v);
        ++cover[u];
        ++cover[v];
        numerator += 1;
    }
    for (int v : cert.singles) {
        check_vertex(g, v);
        ++cover[v];
        numerator += 1;
    }
    for (int v = 0; v < g.n; ++v)
        if (cover[v] != cert.multiplicity)
            throw CertificateError(Kind::NonUniformCoverage, v,
                                   "vertex " + std::to_string(v) + " covered " +
                                       std::to_string(cover[v]) + " times, expected " +
                                       std::to_string(cert.multiplicity));

    std::int64_t denominator = static_cast<std::int64_t>(cert.multiplicity) * g.n;
    Rational value = Rational::from_i128(__int128(numerator) * g.n, denominator);
    return RefutationBound{numerator, denominator, value, value.floor()};
}

Certificate certificate_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Certificate cert;
    cert.multiplicity = j.at("m").get<int>();
    for (const auto& c : j.at("odd_cycles")) cert.odd_cycles.push_back(c.get<std::vector<int>>());
    for (const auto& c : j.at("chains")) {
        auto v = c.get<std::vector<int>>();
        if (v.size() != 2) throw std::invalid_argument("certificate chain is not a pair");
        cert.chains.emplace_back(v[0], v[1]);
    }
    cert.singles = j.at("singles").get<std::vector<int>>();
    return cert;
}

std::string certificate_to_json(const Certificate& cert) {
    nlohmann::json j;
    j["m"] = cert.multiplicity;
    j["odd_cycles"] = cert.odd_cycles;
    auto chains = nlohmann::json::array();
    for (auto [u, v] : cert.chains) chains.push_back({u, v});
    j["chains"] = chains;
    j["singles"] = cert.singles;
    return j.dump();
}

std::vector<std::pair<int, int>> chains_from_even_cycle(const std::vector<int>& cycle) {
    if (cycle.size() % 2 != 0 || cycle.size() < 4)
        throw std::invalid_argument("chains_from_even_cycle: need an even cycle");
    std::vector<std::pair<int, int>> chains;
    for (std::size_t i = 0; i + 1 < cycle.size(); i += 2) chains.emplace_back(cycle[i], cycle[i + 1]);
    return chains;
}

namespace {

// Exhaustive cover search for one multiplicity. Branches on the lowest
// under-covered vertex v; candidate pieces covering v are the cycles whose
// minimum vertex is v (anything lower is already full), chains to an
// under-covered neighbour, and the singleton. Pieces covering v commute, so
// when v stays deficient the piece index is forced nondecreasing; that kills
// permuted duplicates while still allowing the same piece twice.
struct CoverSearch {
    const Graph& g;
    int m;
    std::vector<std::vector<const std::vector<int>*>> cycles_at;
    std::vector<int> cover;
    std::int64_t best_num;  // accept covers with numerator strictly below
    Certificate best, cur;
    std::uint64_t nodes = 0;
    std::uint64_t max_nodes;
    std::chrono::steady_clock::time_point deadline;
    bool out_of_budget = false;
    bool improved = false;

    CoverSearch(const Graph& g_, int m_, std::int64_t seed_num, std::uint64_t max_nodes_,
                std::chrono::steady_clock::time_point deadline_)
        : g(g_), m(m_), cycles_at(g_.n), cover(g_.n, 0), best_num(seed_num),
          max_nodes(max_nodes_), deadline(deadline_) {
        cur.multiplicity = m_;
    }

    bool timed_out() {
        if (out_of_budget) return true;
        if (nodes > max_nodes ||
            (nodes % 1024 == 0 && std::chrono::steady_clock::now() > deadline))
            out_of_budget = true;
        return out_of_budget;
    }

    void run(std::int64_t num, int prev_v, int min_idx) {
        ++nodes;
        if (timed_out()) return;
        int v = -1;
        std::int64_t deficit = 0;
        for (int u = 0; u < g.n; ++u) {
            if (v < 0 && cover[u] < m) v = u;
            deficit += m - cover[u];
        }
        if (v < 0) {
            if (num < best_num) {
                best_num = num;
                best = cur;
                improved = true;
            }
            return;
        }
        if (num + (deficit + 2) / 3 >= best_num) return;
        if (v != prev_v) min_idx = 0;

        int idx = 0;
        for (const auto* cyc : cycles_at[v]) {
            if (idx++ < min_idx) continue;
            bool fits = true;
            for (int u : *cyc)
                if (cover[u] >= m) { fits = false; break; }
            if (!fits) continue;
            for (int u : *cyc) ++cover[u];
            cur.odd_cycles.push_back(*cyc);
            run(num + static_cast<std::int64_t>(cyc->size() - 1) / 2, v, idx - 1);
            cur.odd_cycles.pop_back();
            for (int u : *cyc) --cover[u];
        }
        for (int u : g.adj[v]) {
            int this_idx = idx++;
            if (this_idx < min_idx || cover[u] >= m) continue;
            cover[v]++; cover[u]++;
            cur.chains.emplace_back(v, u);
            run(num + 1, v, this_idx);
            cur.chains.pop_back();
            cover[v]--; cover[u]--;
        }
        if (idx >= min_idx) {
            cover[v]++;
            cur.singles.push_back(v);
            run(num + 1, v, idx);
            cur.singles.pop_back();
            cover[v]--;
        }
    }
};

Certificate greedy_certificate(const Graph& g, int len_max, std::uint64_t shuffle_seed,
                               const std::vector<std::vector<int>>& cycles) {
    Certificate cert;
    cert.multiplicity = 1;
    std::vector<char> covered(g.n, 0);

    std::vector<int> order(cycles.size());
    std::iota(order.begin(), order.end(), 0);
    // short cycles first; the optional shuffle only reorders within a length
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return cycles[i].size() < cycles[j].size();
    });
    if (shuffle_seed != 0) {
        std::mt19937_64 rng(shuffle_seed);
        for (std::size_t i = order.size(); i > 1; --i) {
            std::size_t j = rng() % i;
            if (cycles[order[i - 1]].size() == cycles[order[j]].size())
                std::swap(order[i - 1], order[j]);
        }
    }
    for (int idx : order) {
        const auto& cyc = cycles[idx];
        if (static_cast<int>(cyc.size()) > len_max) continue;
        bool free = true;
        for (int v : cyc)
            if (covered[v]) { free = false; break; }
        if (!free) continue;
        cert.odd_cycles.push_back(cyc);
        for (int v : cyc) covered[v] = 1;
    }
    for (int u = 0; u < g.n; ++u) {
        if (covered[u]) continue;
        for (int v : g.adj[u]) {
            if (v > u && !covered[v]) {
                covered[u] = covered[v] = 1;
                cert.chains.emplace_back(u, v);
                break;
            }
        }
    }
    for (int v = 0; v < g.n; ++v)
        if (!covered[v]) cert.singles.push_back(v);
    return cert;
}

} // namespace

Certificate search_certificate(const Graph& g, int m_max, int len_max,
                               const SearchBudget& budget) {
    if (m_max < 1) throw std::invalid_argument("search_certificate: m_max must be >= 1");
    if (len_max < 3) len_max = 3;
    auto cycles = enumerate_simple_cycles(g, len_max, /*odd_only=*/true);

    Certificate best = greedy_certificate(g, len_max, 0, cycles);
    Rational best_value = verify_certificate(g, best).value;
    for (int r = 1; r <= budget.restarts; ++r) {
        Certificate c = greedy_certificate(g, len_max, budget.seed + r, cycles);
        Rational v = verify_certificate(g, c).value;
        if (v < best_value) { best = c; best_value = v; }
    }

    if (g.n <= 20) {
        auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(budget.seconds));
        for (int m = 1; m <= m_max; ++m) {
            // accept only covers whose value num/m beats the incumbent
            std::int64_t seed_num = (best_value * Rational(m)).ceil();
            CoverSearch s(g, m, seed_num, budget.max_nodes, deadline);
            for (const auto& cyc : cycles) s.cycles_at[cyc[0]].push_back(&cyc);
            s.run(0, -1, 0);
            if (s.improved) {
                Rational v = verify_certificate(g, s.best).value;
                if (v < best_value) { best = s.best; best_value = v; }
            }
            if (s.out_of_budget) break;
        }
    }
    return best;
}

std::int64_t a_of(int kp) {
    if (kp < 1 || kp > 25) throw std::invalid_argument("a_of: kp must be in 1..25");
    std::int64_t sum = 0, pow4 = 4;
    for (int k = 1; k < kp; ++k, pow4 *= 4) sum += (2 * k + 1) * pow4;
    return sum;
}

std::int64_t b_of(int kp) {
    if (kp < 1 || kp > 25) throw std::invalid_argument("b_of: kp must be in 1..25");
    std::int64_t sum = 0, pow4 = 4;
    for (int k = 1; k < kp; ++k, pow4 *= 4) sum += k * pow4;
    return sum;
}

int choose_kprime(const Rational& eps) {
    if (!(Rational(0) < eps && eps < Rational(1, 2)))
        throw std::invalid_argument("choose_kprime: eps must lie strictly in (0, 1/2)");
    Rational k = (Rational(1) / eps - Rational(1)) / Rational(2);
    std::int64_t kp = k.ceil();
    if (kp < 1) kp = 1;
    if (kp > 25) throw std::invalid_argument("choose_kprime: eps too small for 64-bit sums");
    return static_cast<int>(kp);
}

std::int64_t p_threshold(const Rational& eps) {
    int kp = choose_kprime(eps);
    Rational t = Rational(a_of(kp)) + Rational(a_of(kp) - 2 * b_of(kp) + 2) / eps;
    return t.ceil();
}

Rational ncc_lower_bound(nt::Prime p, int kp) {
    std::int64_t a = a_of(kp), b = b_of(kp);
    auto pv = static_cast<std::int64_t>(p.value());
    if (pv <= a)
        throw std::invalid_argument("ncc_lower_bound: requires p > a(kp) = " + std::to_string(a));
    // cycles shorter than 2 kp eat at most a(kp) slots and contribute at
    // most b(kp); every remaining slot sits on a piece no better than a
    // (2 kp + 1)-cycle
    return Rational(b) + Rational(kp) * Rational(pv - a, 2 * kp + 1) - Rational(1);
}

} // namespace invmis::refutation
