#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "invmis/graph.hpp"
#include "invmis/numtheory.hpp"

namespace invmis::census {

// A cycle in the inverse graph is described by a word over {+, -, R}:
// + steps x -> x+1, - steps x -> x-1, R steps x -> -x^{-1}. Words are held
// in canonical form: starting with '+', ending with 'R', no "+-", "-+" or
// "RR" anywhere (cyclically), and lexicographically least with '+' < '-' <
// 'R' over all such rotations of the word and of its reversal (reversing a
// traversal swaps '+' with '-' and keeps 'R').
class CycleSequence {
  public:
    // Accepts "++R-R" or "[++R-R]". Throws std::invalid_argument unless the
    // word is already canonical.
    static CycleSequence parse(std::string_view text);

    const std::string& word() const { return word_; }
    int length() const { return static_cast<int>(word_.size()); }
    std::string bracketed() const { return "[" + word_ + "]"; }

    friend bool operator==(const CycleSequence& a, const CycleSequence& b) {
        return a.word_ == b.word_;
    }
    friend bool operator<(const CycleSequence& a, const CycleSequence& b) {
        if (a.word_.size() != b.word_.size()) return a.word_.size() < b.word_.size();
        return a.word_ < b.word_;
    }

  private:
    explicit CycleSequence(std::string w) : word_(std::move(w)) {}
    std::string word_;
    friend std::vector<CycleSequence> enumerate_sequences(int max_len);
};

// Structural check: odd length >= 3, starts '+', ends 'R', no forbidden
// adjacent pair cyclically. Does not require canonicity.
bool is_legal_cycle_word(std::string_view w);

// Lexicographically least legal representative over rotations and reversal.
// Requires w to be a legal cycle word.
std::string canonical_form(std::string_view w);

// All canonical sequences of odd lengths 3..max_len, ordered by length then
// lexicographically. max_len must be odd and between 3 and 13.
std::vector<CycleSequence> enumerate_sequences(int max_len);

// One generator step applied to a residue; the inverse of 0 is 0.
nt::u64 apply_symbol(char sym, nt::u64 x, nt::Prime p);

// 2x2 matrix acting on x as (a x + b) / (c x + d).
struct MobiusMap {
    nt::u64 a, b, c, d;
};

// Same matrix with integer entries, composed over the integers. Entries stay
// tiny for words up to length 13, and the determinant is exactly 1.
struct MobiusMapZ {
    nt::i64 a, b, c, d;
};

MobiusMapZ mobius_of_word_z(std::string_view word);
MobiusMap mobius_of_word(std::string_view word, nt::Prime p);
MobiusMap mobius_of(const CycleSequence& seq, nt::Prime p);

enum class WalkOutcome { Success, DoesNotClose, RevisitsVertex, SelfInverseStep };

struct WalkResult {
    WalkOutcome outcome;
    std::vector<int> path;  // vertices visited, starting at x0; full cycle on success
};

// Applies the word symbol by symbol starting from x0 and checks that every
// step moves along a real edge to an unvisited vertex and that the last step
// returns to x0. SelfInverseStep flags an R applied at vertex 0, whose only
// R-image is itself.
WalkResult walk(const CycleSequence& seq, int x0, const InverseGraph& g);

enum class RowKind {
    TwoSolutions,  // congruence had two roots
    Unique,        // exactly one root (linear congruence or a double root)
    NoSolution,
    Degenerate,    // map is the identity mod p: flagged, never counted
};

struct CensusRow {
    CycleSequence seq;
    RowKind kind;
    std::vector<int> algebraic_roots;      // before walking, ascending
    std::vector<int> starts;               // roots that survived the walk, ascending
    int count = 0;                         // == starts.size()
    // Congruence of the fixed-point equation in normal form, independent of
    // p: trace^2 - 4 of the integer matrix with square factors removed.
    // Present only when the equation is a true quadratic with nonzero
    // discriminant ("two solutions iff y^2 == disc has them").
    std::optional<nt::i64> squarefree_disc;
    // Signed representative of the unique root when the equation forces one
    // for every p (zero integer discriminant), e.g. -1 for the triangle word.
    std::optional<nt::i64> forced_root;
};

// Solves the fixed-point congruence of the sequence's Mobius map and walks
// each root. The congruence for (a x + b)/(c x + d) == x is
// c x^2 + (d - a) x - b == 0 (mod p).
CensusRow fixed_points(const CycleSequence& seq, const InverseGraph& g);

// Rows for every canonical sequence of odd length <= max_len, in enumeration
// order. threads == 1 forces the serial path; 0 lets the runtime decide.
std::vector<CensusRow> census(const InverseGraph& g, int max_len, int threads = 0);
std::vector<CensusRow> census_serial(const InverseGraph& g, int max_len);

// Independent cross-check: enumerate all simple odd cycles geometrically,
// then read every traversal of every cycle back into words. Returns, per
// canonical sequence, the sorted start vertices realized in the graph.
struct WalkCensusRow {
    CycleSequence seq;
    std::vector<int> starts;
};
std::vector<WalkCensusRow> walk_census(const InverseGraph& g, int max_len);

std::string census_to_csv(const std::vector<CensusRow>& rows, nt::Prime p);

} // namespace invmis::census
