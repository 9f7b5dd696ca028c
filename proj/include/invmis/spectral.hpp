#pragma once

#include <vector>

#include "invmis/graph.hpp"
#include "invmis/numtheory.hpp"
#include "invmis/rational.hpp"

namespace invmis::spectral {

struct SymMatrix {
    int n = 0;
    std::vector<double> a;  // row-major, n*n

    SymMatrix() = default;
    explicit SymMatrix(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

struct EigenExtremes {
    double lambda_1 = 0, lambda_2 = 0, lambda_n = 0;  // largest, second, smallest
    double residual_1 = 0, residual_2 = 0, residual_n = 0;  // ||Mv - lambda v||_2
};

struct SpectralReport {
    nt::u64 p = 0;
    int n = 0;
    int d = 0;
    bool regular = false;  // true iff every degree equals d (loops ignored)
    double lambda_1 = 0, lambda_2 = 0, lambda_n = 0;
    double lambda = 0;        // max(lambda_2, -lambda_n)
    double hoffman = 0;       // -lambda_n / (1 - lambda_n)
    double max_residual = 0;
    bool gap_ok = false;      // lambda < 1 - 1e-4; reported, never enforced
};

// Entries 1/d on edges, zero elsewhere and on the diagonal (self-loops are
// dropped). Rejects d below the maximum degree.
SymMatrix normalized_adjacency(const Graph& g, int d);

// Householder reduction to tridiagonal form. On return diag/sub hold the
// tridiagonal matrix (sub[i] couples i and i+1; sub[n-1] = 0), m's strict
// lower triangle holds the reflector vectors and beta[k] their scale factors,
// which back_transform consumes. threads > 1 parallelizes the row kernels;
// per-row arithmetic order is fixed, so the output is identical either way.
void tridiagonalize(SymMatrix& m, std::vector<double>& diag, std::vector<double>& sub,
                    std::vector<double>& beta, int threads = 1);

// All eigenvalues of a symmetric tridiagonal matrix, ascending.
// Implicit-shift QL; throws std::runtime_error if it fails to converge.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> sub);

// Maps an eigenvector of the tridiagonal form back to the original basis.
void back_transform(const SymMatrix& reduced, const std::vector<double>& beta,
                    std::vector<double>& v);

// Extremal eigenvalues with eigenvector residuals measured against the input
// matrix. Rejects matrices whose asymmetry exceeds 1e-12.
EigenExtremes eigen_extremes(const SymMatrix& m, int threads = 1);

// Independent set ratio bound for a d-regular graph, -lambda/(1 - lambda).
// Domain [-1, 0); the bipartite endpoint gives exactly 1/2.
double hoffman_bound(double lambda_n);
Rational hoffman_bound(const Rational& lambda_n);

// Full report for the inverse graph at p with d = 3. Dense solver, so p is
// capped at 4000; larger inputs are rejected with a pointer to iterative
// methods, which this toolkit does not ship.
SpectralReport spectral_report(nt::Prime p, int threads = 1);

} // namespace invmis::spectral
