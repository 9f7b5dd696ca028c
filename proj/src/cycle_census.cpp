#include "invmis/cycle_census.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace invmis::census {

namespace {

bool forbidden_pair(char x, char y) {
    // immediate backtracking: +- and -+ undo a unit step, RR undoes R
    return (x == '+' && y == '-') || (x == '-' && y == '+') || (x == 'R' && y == 'R');
}

char reversed_symbol(char c) {
    if (c == '+') return '-';
    if (c == '-') return '+';
    return 'R';
}

} // namespace

bool is_legal_cycle_word(std::string_view w) {
    auto len = w.size();
    if (len < 3 || len % 2 == 0) return false;
    if (w.front() != '+' || w.back() != 'R') return false;
    for (char c : w)
        if (c != '+' && c != '-' && c != 'R') return false;
    for (std::size_t i = 0; i < len; ++i)
        if (forbidden_pair(w[i], w[(i + 1) % len])) return false;
    return true;
}

std::string canonical_form(std::string_view w) {
    if (!is_legal_cycle_word(w))
        throw std::invalid_argument("canonical_form: not a legal cycle word: " + std::string(w));
    auto len = w.size();
    std::string reversed(len, ' ');
    for (std::size_t i = 0; i < len; ++i) reversed[i] = reversed_symbol(w[len - 1 - i]);
    std::string best;
    for (const std::string& base : {std::string(w), reversed}) {
        for (std::size_t r = 0; r < len; ++r) {
            if (base[r] != '+' || base[(r + len - 1) % len] != 'R') continue;
            std::string rot = base.substr(r) + base.substr(0, r);
            if (best.empty() || rot < best) best = std::move(rot);
        }
    }
    // every legal word has at least one (+ ... R) rotation: some R is
    // cyclically followed by +, else the word could not contain both symbols
    return best;
}

CycleSequence CycleSequence::parse(std::string_view text) {
    std::string w(text);
    if (w.size() >= 2 && w.front() == '[' && w.back() == ']') w = w.substr(1, w.size() - 2);
    if (!is_legal_cycle_word(w))
        throw std::invalid_argument("CycleSequence: not a legal cycle word: " + w);
    if (canonical_form(w) != w)
        throw std::invalid_argument("CycleSequence: word not canonical: " + w +
                                    " (canonical form " + canonical_form(w) + ")");
    return CycleSequence(std::move(w));
}

namespace {

void enumerate_words(std::string& w, std::size_t pos, std::vector<CycleSequence>& out) {
    auto len = w.size();
    if (pos == len - 1) {
        if (!forbidden_pair(w[len - 2], 'R')) {
            w[pos] = 'R';
            if (canonical_form(w) == w) out.push_back(CycleSequence::parse(w));
        }
        return;
    }
    for (char c : {'+', '-', 'R'}) {
        if (forbidden_pair(w[pos - 1], c)) continue;
        w[pos] = c;
        enumerate_words(w, pos + 1, out);
    }
}

} // namespace

std::vector<CycleSequence> enumerate_sequences(int max_len) {
    if (max_len < 3 || max_len > 13 || max_len % 2 == 0)
        throw std::invalid_argument("enumerate_sequences: max_len must be odd, 3..13");
    std::vector<CycleSequence> out;
    for (int len = 3; len <= max_len; len += 2) {
        std::string w(len, '+');
        std::vector<CycleSequence> of_len;
        enumerate_words(w, 1, of_len);
        std::sort(of_len.begin(), of_len.end());
        out.insert(out.end(), of_len.begin(), of_len.end());
    }
    return out;
}

nt::u64 apply_symbol(char sym, nt::u64 x, nt::Prime p) {
    nt::u64 pv = p.value();
    switch (sym) {
        case '+': return (x + 1) % pv;
        case '-': return (x + pv - 1) % pv;
        case 'R': return x == 0 ? 0 : pv - nt::mod_inverse(x, p);
        default: throw std::invalid_argument(std::string("apply_symbol: bad symbol '") + sym + "'");
    }
}

MobiusMapZ mobius_of_word_z(std::string_view word) {
    // composition runs left to right along the path: later symbols multiply
    // from the left. Entries stay small (words are at most 13 long).
    MobiusMapZ m{1, 0, 0, 1};
    for (char sym : word) {
        nt::i64 ga, gb, gc, gd;
        switch (sym) {
            case '+': ga = 1; gb = 1; gc = 0; gd = 1; break;
            case '-': ga = 1; gb = -1; gc = 0; gd = 1; break;
            case 'R': ga = 0; gb = -1; gc = 1; gd = 0; break;
            default:
                throw std::invalid_argument(std::string("mobius_of_word_z: bad symbol '") + sym +
                                            "'");
        }
        m = MobiusMapZ{ga * m.a + gb * m.c, ga * m.b + gb * m.d,
                       gc * m.a + gd * m.c, gc * m.b + gd * m.d};
    }
    return m;
}

namespace {

nt::u64 reduce_z(nt::i64 v, nt::u64 p) {
    nt::i64 r = v % static_cast<nt::i64>(p);
    if (r < 0) r += static_cast<nt::i64>(p);
    return static_cast<nt::u64>(r);
}

nt::i64 squarefree_part(nt::i64 d) {
    nt::i64 sign = d < 0 ? -1 : 1;
    nt::i64 m = d < 0 ? -d : d;
    for (nt::i64 q = 2; q * q <= m; ++q)
        while (m % (q * q) == 0) m /= q * q;
    return sign * m;
}

} // namespace

MobiusMap mobius_of_word(std::string_view word, nt::Prime p) {
    MobiusMapZ z = mobius_of_word_z(word);
    nt::u64 pv = p.value();
    return MobiusMap{reduce_z(z.a, pv), reduce_z(z.b, pv), reduce_z(z.c, pv), reduce_z(z.d, pv)};
}

MobiusMap mobius_of(const CycleSequence& seq, nt::Prime p) {
    return mobius_of_word(seq.word(), p);
}

WalkResult walk(const CycleSequence& seq, int x0, const InverseGraph& g) {
    nt::u64 pv = g.p.value();
    if (x0 < 0 || static_cast<nt::u64>(x0) >= pv)
        throw std::invalid_argument("walk: start vertex out of range");
    const std::string& w = seq.word();
    WalkResult res{WalkOutcome::Success, {x0}};
    std::vector<char> seen(g.graph.n, 0);
    seen[x0] = 1;
    nt::u64 x = static_cast<nt::u64>(x0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        nt::u64 y = apply_symbol(w[i], x, g.p);
        if (y == x) {
            // R at a self-inverse vertex maps it to itself; no cycle step
            res.outcome = WalkOutcome::SelfInverseStep;
            return res;
        }
        if (!g.graph.has_edge(static_cast<int>(x), static_cast<int>(y)))
            throw std::logic_error("walk: generator step left the edge set");
        bool last = i + 1 == w.size();
        if (last) {
            if (y != static_cast<nt::u64>(x0)) {
                res.outcome = WalkOutcome::DoesNotClose;
                res.path.push_back(static_cast<int>(y));
                return res;
            }
            return res;  // closed simple cycle
        }
        if (seen[y]) {
            res.outcome = WalkOutcome::RevisitsVertex;
            res.path.push_back(static_cast<int>(y));
            return res;
        }
        seen[y] = 1;
        res.path.push_back(static_cast<int>(y));
        x = y;
    }
    return res;  // unreachable: loop always returns at the last symbol
}

CensusRow fixed_points(const CycleSequence& seq, const InverseGraph& g) {
    nt::u64 pv = g.p.value();
    MobiusMapZ mz = mobius_of_word_z(seq.word());
    CensusRow row{seq, RowKind::NoSolution, {}, {}, 0, std::nullopt, std::nullopt};

    if (mz.c != 0) {
        nt::i64 tr = mz.a + mz.d;
        nt::i64 disc = tr * tr - 4;
        if (disc != 0) {
            row.squarefree_disc = squarefree_part(disc);
        } else {
            nt::i64 num = mz.a - mz.d, den = 2 * mz.c;
            if (num % den == 0) row.forced_root = num / den;
        }
    }

    // fixed points of (a x + b) / (c x + d) == x
    nt::u64 A = reduce_z(mz.c, pv);
    nt::u64 B = reduce_z(mz.d - mz.a, pv);
    nt::u64 C = reduce_z(-mz.b, pv);
    nt::ResidueClassification cls;
    try {
        cls = nt::solve_quadratic(A, B, C, g.p);
    } catch (const nt::AllZeroError&) {
        row.kind = RowKind::Degenerate;
        return row;
    }
    switch (cls.kind) {
        case nt::ResidueKind::TwoSolutions: row.kind = RowKind::TwoSolutions; break;
        case nt::ResidueKind::NoSolution: row.kind = RowKind::NoSolution; break;
        case nt::ResidueKind::LinearUnique:
        case nt::ResidueKind::Degenerate: row.kind = RowKind::Unique; break;
    }
    for (nt::u64 r : cls.solutions) row.algebraic_roots.push_back(static_cast<int>(r));
    for (int r : row.algebraic_roots)
        if (walk(seq, r, g).outcome == WalkOutcome::Success) row.starts.push_back(r);
    row.count = static_cast<int>(row.starts.size());
    return row;
}

std::vector<CensusRow> census(const InverseGraph& g, int max_len, int threads) {
    auto seqs = enumerate_sequences(max_len);
    int nseq = static_cast<int>(seqs.size());
    std::vector<std::optional<CensusRow>> tmp(nseq);
#ifdef _OPENMP
    if (threads != 1) {
        int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
        for (int i = 0; i < nseq; ++i) tmp[i] = fixed_points(seqs[i], g);
    } else
#endif
    {
        for (int i = 0; i < nseq; ++i) tmp[i] = fixed_points(seqs[i], g);
    }
    std::vector<CensusRow> rows;
    rows.reserve(nseq);
    for (auto& r : tmp) rows.push_back(std::move(*r));
    return rows;
}

std::vector<CensusRow> census_serial(const InverseGraph& g, int max_len) {
    auto seqs = enumerate_sequences(max_len);
    std::vector<CensusRow> rows;
    rows.reserve(seqs.size());
    for (const auto& s : seqs) rows.push_back(fixed_points(s, g));
    return rows;
}

namespace {

// Symbols that could explain the step u -> w in the inverse graph. More than
// one applies when the reciprocal edge coincides with a unit step.
void step_symbols(const InverseGraph& g, const std::vector<int>& rimg, int u, int w,
                  std::array<char, 2>& syms, int& nsyms) {
    int n = g.graph.n;
    nsyms = 0;
    if ((u + 1) % n == w) syms[nsyms++] = '+';
    if ((u + n - 1) % n == w) syms[nsyms++] = '-';
    if (u != 0 && rimg[u] == w) syms[nsyms++] = 'R';
}

void traversal_words(const InverseGraph& g, const std::vector<int>& rimg,
                     const std::vector<int>& verts, std::string& word, std::size_t step,
                     const std::map<std::string, int>& index,
                     std::set<std::pair<int, int>>& found) {
    std::size_t len = verts.size() - 1;  // verts has the start repeated at the end
    if (step == len) {
        if (word.front() != '+' || word.back() != 'R') return;
        if (!is_legal_cycle_word(word)) return;
        auto it = index.find(word);
        if (it != index.end()) found.emplace(it->second, verts[0]);
        return;
    }
    std::array<char, 2> syms;
    int nsyms = 0;
    step_symbols(g, rimg, verts[step], verts[step + 1], syms, nsyms);
    for (int i = 0; i < nsyms; ++i) {
        word[step] = syms[i];
        traversal_words(g, rimg, verts, word, step + 1, index, found);
    }
}

} // namespace

std::vector<WalkCensusRow> walk_census(const InverseGraph& g, int max_len) {
    auto seqs = enumerate_sequences(max_len);
    std::map<std::string, int> index;
    for (int i = 0; i < static_cast<int>(seqs.size()); ++i) index[seqs[i].word()] = i;

    std::vector<int> rimg(g.graph.n, 0);
    for (int x = 1; x < g.graph.n; ++x)
        rimg[x] = static_cast<int>(apply_symbol('R', static_cast<nt::u64>(x), g.p));

    std::set<std::pair<int, int>> found;  // (sequence index, start vertex)
    auto cycles = enumerate_simple_cycles(g.graph, max_len, /*odd_only=*/true);
    for (const auto& cyc : cycles) {
        int len = static_cast<int>(cyc.size());
        std::string word(len, ' ');
        std::vector<int> verts(len + 1);
        for (int dir = 0; dir < 2; ++dir) {
            for (int s = 0; s < len; ++s) {
                for (int k = 0; k <= len; ++k) {
                    int idx = dir == 0 ? (s + k) % len : (s - k % len + len) % len;
                    verts[k] = cyc[idx];
                }
                traversal_words(g, rimg, verts, word, 0, index, found);
            }
        }
    }

    std::vector<WalkCensusRow> rows;
    rows.reserve(seqs.size());
    for (int i = 0; i < static_cast<int>(seqs.size()); ++i) rows.push_back({seqs[i], {}});
    for (auto [si, v] : found) rows[si].starts.push_back(v);
    for (auto& r : rows) std::sort(r.starts.begin(), r.starts.end());
    return rows;
}

std::string census_to_csv(const std::vector<CensusRow>& rows, nt::Prime p) {
    std::ostringstream out;
    out << "# invmis census v1 p=" << p.value() << '\n';
    out << "sequence,length,congruence,classification,count,starts\n";
    for (const auto& row : rows) {
        out << row.seq.bracketed() << ',' << row.seq.length() << ',';
        if (row.kind == RowKind::Degenerate) {
            out << "degenerate";
        } else if (row.squarefree_disc) {
            out << "y^2=" << *row.squarefree_disc;
        } else if (row.forced_root) {
            out << "x=" << *row.forced_root;
        } else {
            out << '-';
        }
        out << ',';
        switch (row.kind) {
            case RowKind::TwoSolutions: out << "two"; break;
            case RowKind::Unique: out << "unique"; break;
            case RowKind::NoSolution: out << "none"; break;
            case RowKind::Degenerate: out << "degenerate"; break;
        }
        out << ',' << row.count << ',';
        for (std::size_t i = 0; i < row.starts.size(); ++i) {
            if (i) out << ';';
            out << row.starts[i];
        }
        out << '\n';
    }
    return out.str();
}

} // namespace invmis::census
