#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace invmis::nt {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// Thrown by sqrt_mod when asked for a root of a quadratic non-residue.
struct NonResidueError : std::domain_error {
    using std::domain_error::domain_error;
};

// Thrown by solve_quadratic when a == b == c == 0 (mod p): every x solves the
// congruence and no sensible solution list exists. Callers own this case.
struct AllZeroError : std::domain_error {
    using std::domain_error::domain_error;
};

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);

// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 n);

// An odd prime >= 3, checked once at construction. Passing one of these
// around instead of a raw integer keeps "p is prime" out of every contract.
class Prime {
  public:
    explicit Prime(u64 v) : v_(v) {
        if (v < 3 || !is_prime(v))
            throw std::invalid_argument("Prime: " + std::to_string(v) + " is not an odd prime");
    }
    u64 value() const { return v_; }
    friend bool operator==(Prime a, Prime b) { return a.v_ == b.v_; }
    friend bool operator!=(Prime a, Prime b) { return a.v_ != b.v_; }

  private:
    u64 v_;
};

// Inverse of a mod p via extended Euclid; throws std::domain_error on a == 0.
u64 mod_inverse(u64 a, Prime p);

// Legendre symbol (a/p) in {-1, 0, +1} by Euler's criterion.
int legendre(i64 a, Prime p);

// Same symbol computed along an entirely different route: factor the residue,
// then recurse through quadratic reciprocity plus the two supplementary laws.
// Exists so the two implementations can police each other.
int legendre_reciprocity(i64 a, Prime p);

// Both square roots of a mod p, ascending. a == 0 yields {0}. Throws
// NonResidueError when (a/p) == -1. Tonelli-Shanks for p % 4 == 1, the
// exponent shortcut for p % 4 == 3.
std::vector<u64> sqrt_mod(u64 a, Prime p);

enum class ResidueKind {
    TwoSolutions,  // two distinct roots
    NoSolution,    // no roots
    LinearUnique,  // a == 0, b != 0: the single root of bx + c
    Degenerate,    // a != 0, zero discriminant: one double root
};

struct ResidueClassification {
    ResidueKind kind;
    std::vector<u64> solutions;  // ascending, canonical residues 0..p-1
};

// Solves a x^2 + b x + c == 0 (mod p). Inputs may be any residues; they are
// reduced mod p first. Throws AllZeroError when all three vanish.
ResidueClassification solve_quadratic(u64 a, u64 b, u64 c, Prime p);

} // namespace invmis::nt
