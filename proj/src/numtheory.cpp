#include "invmis/numtheory.hpp"

namespace invmis::nt {

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<__uint128_t>(a) * b) % m);
}

u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // This witness set decides primality exactly for every n < 2^64.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

u64 mod_inverse(u64 a, Prime p) {
    u64 m = p.value();
    a %= m;
    if (a == 0) throw std::domain_error("mod_inverse: 0 has no inverse");
    // Extended Euclid on (a, m); m prime so gcd is 1.
    i64 t = 0, newt = 1;
    i64 r = static_cast<i64>(m), newr = static_cast<i64>(a);
    while (newr != 0) {
        i64 q = r / newr;
        i64 tmp = t - q * newt; t = newt; newt = tmp;
        tmp = r - q * newr; r = newr; newr = tmp;
    }
    if (t < 0) t += static_cast<i64>(m);
    return static_cast<u64>(t);
}

namespace {

u64 reduce_signed(i64 a, u64 m) {
    i64 r = a % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

} // namespace

int legendre(i64 a, Prime p) {
    u64 m = p.value();
    u64 r = reduce_signed(a, m);
    if (r == 0) return 0;
    u64 e = powmod(r, (m - 1) / 2, m);
    return e == 1 ? 1 : -1;
}

namespace {

// (q/p) for odd primes q < p is flipped onto (p mod q / q) by reciprocity;
// the recursion bottoms out through the supplementary laws for -1 and 2.
int legendre_odd_prime(u64 q, u64 p);

int legendre_general(u64 a, u64 p) {
    a %= p;
    if (a == 0) return 0;
    int sign = 1;
    // strip factors of two with the second supplementary law
    while ((a & 1) == 0) {
        a >>= 1;
        u64 m8 = p % 8;
        if (m8 == 3 || m8 == 5) sign = -sign;
    }
    if (a == 1) return sign;
    // trial-divide the odd part; multiplicativity splits the symbol
    for (u64 q = 3; q * q <= a; q += 2) {
        while (a % q == 0) {
            a /= q;
            sign *= legendre_odd_prime(q, p);
        }
    }
    if (a > 1) sign *= legendre_odd_prime(a, p);
    return sign;
}

int legendre_odd_prime(u64 q, u64 p) {
    if (q == p) return 0;
    // reciprocity: (q/p)(p/q) = -1 exactly when both are 3 mod 4
    int flip = (q % 4 == 3 && p % 4 == 3) ? -1 : 1;
    return flip * legendre_general(p % q, q);
}

} // namespace

int legendre_reciprocity(i64 a, Prime p) {
    u64 m = p.value();
    i64 r = a % static_cast<i64>(m);
    int sign = 1;
    if (r < 0) {
        // first supplementary law for the sign
        r = -r;
        if (m % 4 == 3) sign = -1;
        u64 v = reduce_signed(a, m);
        if (v == 0) return 0;
        return sign * legendre_general(static_cast<u64>(r) % m, m);
    }
    return legendre_general(static_cast<u64>(r), m);
}

std::vector<u64> sqrt_mod(u64 a, Prime p) {
    u64 m = p.value();
    a %= m;
    if (a == 0) return {0};
    if (legendre(static_cast<i64>(a), p) != 1)
        throw NonResidueError("sqrt_mod: " + std::to_string(a) + " is not a residue mod " +
                              std::to_string(m));
    u64 r;
    if (m % 4 == 3) {
        r = powmod(a, (m + 1) / 4, m);
    } else {
        // Tonelli-Shanks. Factor m-1 = q * 2^s with q odd.
        u64 q = m - 1;
        int s = 0;
        while ((q & 1) == 0) { q >>= 1; ++s; }
        u64 z = 2;
        while (legendre(static_cast<i64>(z), p) != -1) ++z;
        u64 c = powmod(z, q, m);
        r = powmod(a, (q + 1) / 2, m);
        u64 t = powmod(a, q, m);
        int e = s;
        while (t != 1) {
            u64 tt = t;
            int i = 0;
            while (tt != 1) { tt = mulmod(tt, tt, m); ++i; }
            u64 b = powmod(c, u64(1) << (e - i - 1), m);
            r = mulmod(r, b, m);
            c = mulmod(b, b, m);
            t = mulmod(t, c, m);
            e = i;
        }
    }
    u64 r2 = m - r;
    if (r2 < r) std::swap(r, r2);
    return {r, r2};
}

ResidueClassification solve_quadratic(u64 a, u64 b, u64 c, Prime p) {
    u64 m = p.value();
    a %= m; b %= m; c %= m;
    if (a == 0) {
        if (b == 0) {
            if (c == 0)
                throw AllZeroError("solve_quadratic: all coefficients vanish mod " +
                                   std::to_string(m));
            return {ResidueKind::NoSolution, {}};
        }
        u64 x = mulmod((m - c) % m, mod_inverse(b, p), m);
        return {ResidueKind::LinearUnique, {x}};
    }
    // x = (-b +- sqrt(b^2 - 4ac)) / 2a
    u64 disc = (mulmod(b, b, m) + m - mulmod(4 % m, mulmod(a, c, m), m)) % m;
    u64 inv2a = mod_inverse(mulmod(2, a, m), p);
    u64 negb = (m - b) % m;
    if (disc == 0) {
        u64 x = mulmod(negb, inv2a, m);
        return {ResidueKind::Degenerate, {x}};
    }
    if (legendre(static_cast<i64>(disc), p) == -1) return {ResidueKind::NoSolution, {}};
    auto roots = sqrt_mod(disc, p);
    u64 x1 = mulmod((negb + roots[0]) % m, inv2a, m);
    u64 x2 = mulmod((negb + roots[1]) % m, inv2a, m);
    if (x2 < x1) std::swap(x1, x2);
    return {ResidueKind::TwoSolutions, {x1, x2}};
}

} // namespace invmis::nt
