#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "invmis/cycle_census.hpp"
#include "invmis/graph.hpp"
#include "test_util.hpp"

using namespace invmis;
using census::CycleSequence;

namespace {

const std::vector<std::string> kCanonicalWords = {
    "++R",
    "++++R", "++R+R", "++R-R",
    "++++++R", "++++R+R", "++++R-R", "+++R++R", "+++R--R", "++R+R+R", "++R+R-R", "++R-R+R",
    "++R-R-R",
    "++++++++R", "++++++R+R", "++++++R-R", "+++++R++R", "+++++R--R", "++++R+++R", "++++R+R+R",
    "++++R+R-R", "++++R---R", "++++R-R+R", "++++R-R-R", "+++R++R+R", "+++R++R-R", "+++R+R++R",
    "+++R+R--R", "+++R--R+R", "+++R--R-R", "+++R-R++R", "+++R-R--R", "++R++R++R", "++R++R--R",
    "++R+R+R+R", "++R+R+R-R", "++R+R-R+R", "++R+R-R-R", "++R-R+R+R", "++R-R+R-R", "++R-R-R+R",
    "++R-R-R-R",
};

// Reverse traversal: reverse the word and swap the chain directions.
std::string reversed_word(const std::string& w) {
    std::string r(w.rbegin(), w.rend());
    for (char& c : r)
        if (c == '+')
            c = '-';
        else if (c == '-')
            c = '+';
    return r;
}

std::vector<std::string> legal_spellings(const std::string& w) {
    std::vector<std::string> out;
    for (const std::string& base : {w, reversed_word(w)})
        for (std::size_t i = 0; i < base.size(); ++i) {
            std::string rot = base.substr(i) + base.substr(0, i);
            if (census::is_legal_cycle_word(rot)) out.push_back(rot);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

nt::i64 trace_of(const std::string& w) {
    auto m = census::mobius_of_word_z(w);
    return m.a + m.d;
}

} // namespace

TEST_CASE("canonical sequence enumeration is complete") {
    auto seqs = census::enumerate_sequences(9);
    REQUIRE(seqs.size() == kCanonicalWords.size());
    for (std::size_t i = 0; i < seqs.size(); ++i) CHECK(seqs[i].word() == kCanonicalWords[i]);

    std::map<int, int> by_len;
    for (const auto& s : seqs) ++by_len[s.length()];
    CHECK(by_len[3] == 1);
    CHECK(by_len[5] == 3);
    CHECK(by_len[7] == 9);
    CHECK(by_len[9] == 29);

    CHECK(census::enumerate_sequences(3).size() == 1);
    CHECK(census::enumerate_sequences(5).size() == 4);
    CHECK(census::enumerate_sequences(7).size() == 13);
    CHECK_THROWS_AS(census::enumerate_sequences(8), std::invalid_argument);
    CHECK_THROWS_AS(census::enumerate_sequences(15), std::invalid_argument);

    // longer enumerations stay canonical, sorted and duplicate-free
    auto long_seqs = census::enumerate_sequences(13);
    CHECK(long_seqs.size() > seqs.size());
    for (std::size_t i = 0; i < long_seqs.size(); ++i) {
        const auto& s = long_seqs[i];
        CHECK(census::is_legal_cycle_word(s.word()));
        CHECK(census::canonical_form(s.word()) == s.word());
        if (i) CHECK(long_seqs[i - 1] < s);
    }
}

TEST_CASE("legality check enforces the word grammar") {
    CHECK(census::is_legal_cycle_word("++R"));
    CHECK(census::is_legal_cycle_word("++R-R"));
    CHECK_FALSE(census::is_legal_cycle_word(""));
    CHECK_FALSE(census::is_legal_cycle_word("+R"));        // even length
    CHECK_FALSE(census::is_legal_cycle_word("++R+"));      // must end R
    CHECK_FALSE(census::is_legal_cycle_word("R++"));       // must start +
    CHECK_FALSE(census::is_legal_cycle_word("+-R"));       // backtracking chain step
    CHECK_FALSE(census::is_legal_cycle_word("+RR+R"));     // R is an involution
    CHECK_FALSE(census::is_legal_cycle_word("+++++"));     // no R at all
    // the cyclic wrap pair counts too: "...R" followed by leading "+" is fine,
    // but a word ending "-" never reaches here since the last symbol must be R
}

TEST_CASE("every legal spelling canonicalizes to its class representative") {
    bool saw_noncanonical_spelling = false;
    for (const auto& w : kCanonicalWords) {
        for (const auto& spelling : legal_spellings(w)) {
            CHECK(census::canonical_form(spelling) == w);
            if (spelling != w) saw_noncanonical_spelling = true;
            // the fixed-point classification is a class invariant: rotation
            // conjugates the matrix, and reversal gives (-1)^#R times the
            // inverse, so tr^2 - 4 is preserved even where the trace flips
            CHECK(std::abs(trace_of(spelling)) == std::abs(trace_of(w)));
        }
    }
    CHECK(saw_noncanonical_spelling);
    CHECK(census::canonical_form("++R---R") == "+++R--R");
}

TEST_CASE("parse accepts canonical words only") {
    CHECK(CycleSequence::parse("++R-R").word() == "++R-R");
    CHECK(CycleSequence::parse("[++R-R]").word() == "++R-R");
    CHECK(CycleSequence::parse("[++R]").bracketed() == "[++R]");
    CHECK(CycleSequence::parse("++R").length() == 3);
    CHECK_THROWS_AS(CycleSequence::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(CycleSequence::parse("+R"), std::invalid_argument);
    CHECK_THROWS_AS(CycleSequence::parse("xyz"), std::invalid_argument);
    CHECK_THROWS_AS(CycleSequence::parse("[++R"), std::invalid_argument);
    CHECK_THROWS_AS(CycleSequence::parse("++R---R"), std::invalid_argument);  // legal, not canonical
}

TEST_CASE("generator steps act as +1, -1 and negated inverse") {
    nt::Prime p(11);
    CHECK(census::apply_symbol('+', 5, p) == 6);
    CHECK(census::apply_symbol('+', 10, p) == 0);
    CHECK(census::apply_symbol('-', 0, p) == 10);
    CHECK(census::apply_symbol('R', 1, p) == 10);
    CHECK(census::apply_symbol('R', 4, p) == 8);  // 4^{-1} = 3, -3 = 8
    CHECK(census::apply_symbol('R', 0, p) == 0);  // 0^{-1} := 0
}

TEST_CASE("integer Mobius composition has unit determinant and known values") {
    for (const auto& w : kCanonicalWords) {
        auto m = census::mobius_of_word_z(w);
        CHECK(m.a * m.d - m.b * m.c == 1);
    }
    auto tri = census::mobius_of_word_z("++R");
    CHECK(tri.a == 0);
    CHECK(tri.b == -1);
    CHECK(tri.c == 1);
    CHECK(tri.d == 2);
    auto m7 = census::mobius_of_word_z("++++R-R");
    CHECK(m7.a == -1);
    CHECK(m7.b == -4);
    CHECK(m7.c == -1);
    CHECK(m7.d == -5);
    CHECK(trace_of("++++R-R") == -6);  // disc 32, squarefree part 2
    // the two length-9 words whose maps force the double root -1
    CHECK(trace_of("++R+R+R+R") == -2);
    CHECK(trace_of("++R+R-R+R") == -2);
}

TEST_CASE("fixed_points matches a brute-force congruence scan") {
    for (nt::u64 pv : {11ull, 13ull, 17ull}) {
        InverseGraph g = build_inverse_graph(nt::Prime(pv));
        for (const auto& seq : census::enumerate_sequences(9)) {
            auto m = census::mobius_of_word_z(seq.word());
            auto p = static_cast<nt::i64>(pv);
            std::vector<int> want;
            for (nt::i64 x = 0; x < p; ++x) {
                nt::i64 val = ((m.c * x * x + (m.d - m.a) * x - m.b) % p + p) % p;
                if (val == 0) want.push_back(static_cast<int>(x));
            }
            auto row = census::fixed_points(seq, g);
            CHECK(row.algebraic_roots == want);
            switch (row.kind) {
                case census::RowKind::TwoSolutions: CHECK(want.size() == 2); break;
                case census::RowKind::Unique: CHECK(want.size() == 1); break;
                case census::RowKind::NoSolution: CHECK(want.empty()); break;
                case census::RowKind::Degenerate: FAIL("identity map cannot arise here"); break;
            }
            // starts are exactly the roots whose walk closes into a simple cycle
            for (int s : row.starts) {
                CHECK(std::binary_search(want.begin(), want.end(), s));
                CHECK(census::walk(seq, s, g).outcome == census::WalkOutcome::Success);
            }
            CHECK(row.count == static_cast<int>(row.starts.size()));
        }
    }
}

TEST_CASE("census row congruence fields describe the integer matrix") {
    InverseGraph g = build_inverse_graph(nt::Prime(101));
    for (const auto& row : census::census(g, 9, 1)) {
        auto m = census::mobius_of_word_z(row.seq.word());
        nt::i64 tr = m.a + m.d;
        nt::i64 disc = tr * tr - 4;
        if (row.squarefree_disc) {
            REQUIRE(m.c != 0);
            REQUIRE(disc != 0);
            // same sign, square-free, and disc divided by it is a perfect square
            nt::i64 sf = *row.squarefree_disc;
            CHECK((sf > 0) == (disc > 0));
            CHECK(disc % sf == 0);
            nt::i64 q = disc / sf;
            CHECK(q > 0);
            nt::i64 r = static_cast<nt::i64>(std::sqrt(static_cast<double>(q)) + 0.5);
            CHECK(r * r == q);
            for (nt::i64 f = 2; f * f <= std::abs(sf); ++f) CHECK(sf % (f * f) != 0);
        }
        if (row.forced_root) {
            REQUIRE(m.c != 0);
            CHECK(disc == 0);
            CHECK((m.a - m.d) % (2 * m.c) == 0);
            CHECK(*row.forced_root == (m.a - m.d) / (2 * m.c));
        }
    }
}

TEST_CASE("hand-traced walks close where expected") {
    InverseGraph g11 = build_inverse_graph(nt::Prime(11));
    auto tri = CycleSequence::parse("++R");

    auto ok = census::walk(tri, 10, g11);
    CHECK(ok.outcome == census::WalkOutcome::Success);
    CHECK(ok.path == std::vector<int>{10, 0, 1});

    CHECK(census::walk(tri, 3, g11).outcome == census::WalkOutcome::DoesNotClose);
    CHECK(census::walk(tri, 9, g11).outcome == census::WalkOutcome::SelfInverseStep);

    // the degenerate length-9 word returns to its start three steps in
    auto deg = census::walk(CycleSequence::parse("++R+R+R+R"), 10, g11);
    CHECK(deg.outcome == census::WalkOutcome::RevisitsVertex);

    auto seven = census::walk(CycleSequence::parse("++R+R-R"), 2, g11);
    CHECK(seven.outcome == census::WalkOutcome::Success);
    CHECK(seven.path == std::vector<int>{2, 3, 4, 8, 9, 6, 5});

    InverseGraph g17 = build_inverse_graph(nt::Prime(17));
    auto mixed = census::walk(CycleSequence::parse("++++R-R"), 3, g17);
    CHECK(mixed.outcome == census::WalkOutcome::Success);
    CHECK(mixed.path == std::vector<int>{3, 4, 5, 6, 7, 12, 11});
}

TEST_CASE("algebraic census equals the exhaustive walk oracle") {
    for (nt::u64 pv : {11ull, 13ull, 31ull}) {
        InverseGraph g = build_inverse_graph(nt::Prime(pv));
        auto rows = census::census(g, 9, 1);
        auto oracle = census::walk_census(g, 9);
        REQUIRE(rows.size() == oracle.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            REQUIRE(rows[i].seq == oracle[i].seq);
            CHECK(rows[i].starts == oracle[i].starts);
        }
    }
}

TEST_CASE("parallel census is bitwise identical to the serial path") {
    InverseGraph g = build_inverse_graph(nt::Prime(61));
    auto serial = census::census_serial(g, 9);
    auto par = census::census(g, 9, 3);
    REQUIRE(serial.size() == par.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].seq == par[i].seq);
        CHECK(serial[i].kind == par[i].kind);
        CHECK(serial[i].algebraic_roots == par[i].algebraic_roots);
        CHECK(serial[i].starts == par[i].starts);
        CHECK(serial[i].count == par[i].count);
        CHECK(serial[i].squarefree_disc == par[i].squarefree_disc);
        CHECK(serial[i].forced_root == par[i].forced_root);
    }
}

TEST_CASE("census counts line up with geometric cycle counts") {
    // p = 11 has no coinciding neighbour rules, so (sequence, start) pairs and
    // geometric cycles are in bijection
    InverseGraph g11 = build_inverse_graph(nt::Prime(11));
    std::map<int, long> pair_count;
    for (const auto& row : census::census(g11, 9, 1)) pair_count[row.seq.length()] += row.count;
    std::map<int, long> geo_count;
    for (const auto& c : enumerate_simple_cycles(g11.graph, 9, true))
        ++geo_count[static_cast<int>(c.size())];
    CHECK(pair_count == std::map<int, long>{{3, 1}, {5, 4}, {7, 9}, {9, 6}});
    CHECK(geo_count == pair_count);

    // p = 13 has coincidence edges, so one cycle can carry several labels;
    // the pair count then strictly exceeds the geometric count
    InverseGraph g13 = build_inverse_graph(nt::Prime(13));
    long pairs = 0, geo = 0;
    std::map<int, long> pairs_by_len, geo_by_len;
    for (const auto& row : census::census(g13, 9, 1)) {
        pairs += row.count;
        pairs_by_len[row.seq.length()] += row.count;
    }
    for (const auto& c : enumerate_simple_cycles(g13.graph, 9, true)) {
        ++geo;
        ++geo_by_len[static_cast<int>(c.size())];
    }
    for (const auto& [len, n] : geo_by_len) CHECK(pairs_by_len[len] >= n);
    CHECK(pairs > geo);
}

TEST_CASE("census CSV matches the golden p=11 table") {
    InverseGraph g = build_inverse_graph(nt::Prime(11));
    const std::string golden =
        "# invmis census v1 p=11\n"
        "sequence,length,congruence,classification,count,starts\n"
        "[++R],3,x=-1,unique,1,10\n"
        "[++++R],5,y^2=3,two,2,3;4\n"
        "[++R+R],5,y^2=-1,none,0,\n"
        "[++R-R],5,y^2=3,two,2,4;5\n"
        "[++++++R],7,y^2=2,none,0,\n"
        "[++++R+R],7,x=-2,unique,1,9\n"
        "[++++R-R],7,y^2=2,none,0,\n"
        "[+++R++R],7,y^2=3,two,2,1;7\n"
        "[+++R--R],7,y^2=15,two,2,3;5\n"
        "[++R+R+R],7,-,none,0,\n"
        "[++R+R-R],7,y^2=3,two,2,2;8\n"
        "[++R-R+R],7,y^2=3,two,2,1;7\n"
        "[++R-R-R],7,-,none,0,\n"
        "[++++++++R],9,y^2=15,two,2,5;9\n"
        "[++++++R+R],9,y^2=3,two,0,\n"
        "[++++++R-R],9,y^2=15,two,0,\n"
        "[+++++R++R],9,y^2=15,two,0,\n"
        "[+++++R--R],9,y^2=35,none,0,\n"
        "[++++R+++R],9,y^2=6,none,0,\n"
        "[++++R+R+R],9,-,none,0,\n"
        "[++++R+R-R],9,y^2=15,two,0,\n"
        "[++++R---R],9,y^2=3,two,0,\n"
        "[++++R-R+R],9,y^2=15,two,0,\n"
        "[++++R-R-R],9,-,none,0,\n"
        "[+++R++R+R],9,y^2=-1,none,0,\n"
        "[+++R++R-R],9,y^2=6,none,0,\n"
        "[+++R+R++R],9,y^2=-1,none,0,\n"
        "[+++R+R--R],9,y^2=15,two,1,7\n"
        "[+++R--R+R],9,y^2=15,two,1,1\n"
        "[+++R--R-R],9,y^2=2,none,0,\n"
        "[+++R-R++R],9,y^2=6,none,0,\n"
        "[+++R-R--R],9,y^2=2,none,0,\n"
        "[++R++R++R],9,x=-1,unique,0,\n"
        "[++R++R--R],9,y^2=6,none,0,\n"
        "[++R+R+R+R],9,x=-1,unique,0,\n"
        "[++R+R+R-R],9,y^2=-1,none,0,\n"
        "[++R+R-R+R],9,x=-1,unique,0,\n"
        "[++R+R-R-R],9,y^2=3,two,1,6\n"
        "[++R-R+R+R],9,y^2=-1,none,0,\n"
        "[++R-R+R-R],9,y^2=6,none,0,\n"
        "[++R-R-R+R],9,y^2=3,two,1,3\n"
        "[++R-R-R-R],9,x=-1,unique,0,\n";
    CHECK(census::census_to_csv(census::census(g, 9, 1), g.p) == golden);
}
