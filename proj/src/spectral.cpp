#include "invmis/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace invmis::spectral {

namespace {

double dot_range(const double* a, const double* b, int len) {
    double s = 0.0;
    for (int i = 0; i < len; ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// One tridiagonal solve with partial pivoting; bands are copied because
// pivoting rewrites them. Returns false on an exactly singular pivot.
bool tridiag_solve(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                   std::vector<double>& rhs) {
    int n = static_cast<int>(diag.size());
    std::vector<double> sup2(n, 0.0);  // pivoting fills a second superdiagonal
    for (int i = 0; i + 1 < n; ++i) {
        if (std::fabs(sub[i + 1]) > std::fabs(diag[i])) {
            std::swap(diag[i], sub[i + 1]);
            std::swap(sup[i], diag[i + 1]);
            std::swap(sup2[i], sup[i + 1]);
            std::swap(rhs[i], rhs[i + 1]);
        }
        if (diag[i] == 0.0) return false;
        double f = sub[i + 1] / diag[i];
        diag[i + 1] -= f * sup[i];
        sup[i + 1] -= f * sup2[i];
        rhs[i + 1] -= f * rhs[i];
    }
    if (diag[n - 1] == 0.0) return false;
    rhs[n - 1] /= diag[n - 1];
    if (n >= 2) rhs[n - 2] = (rhs[n - 2] - sup[n - 2] * rhs[n - 1]) / diag[n - 2];
    for (int i = n - 3; i >= 0; --i)
        rhs[i] = (rhs[i] - sup[i] * rhs[i + 1] - sup2[i] * rhs[i + 2]) / diag[i];
    return true;
}

// Inverse iteration on the tridiagonal matrix near eigenvalue lambda. The
// start vector is a fixed pseudo-random sequence so runs are reproducible.
std::vector<double> tridiag_eigenvector(const std::vector<double>& d,
                                        const std::vector<double>& e, double lambda) {
    int n = static_cast<int>(d.size());
    std::vector<double> sub(n, 0.0), sup(n, 0.0);
    for (int i = 1; i < n; ++i) sub[i] = e[i - 1];
    for (int i = 0; i + 1 < n; ++i) sup[i] = e[i];
    double tnorm = 0.0;
    for (int i = 0; i < n; ++i)
        tnorm = std::max(tnorm, std::fabs(d[i]) + std::fabs(sub[i]) + std::fabs(sup[i]));
    if (tnorm == 0.0) tnorm = 1.0;

    std::vector<double> x(n);
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < n; ++i) {
        state = state * 6364136223846793005ull + 1442695040888963407ull;
        x[i] = static_cast<double>(state >> 11) * (1.0 / 9007199254740992.0) - 0.5;
    }
    double nx = norm2(x);
    for (double& xi : x) xi /= nx;

    for (int attempt = 0; attempt < 5; ++attempt) {
        double mu = lambda + tnorm * 1e-13 * attempt;
        std::vector<double> y = x;
        bool ok = true;
        for (int it = 0; it < 4 && ok; ++it) {
            std::vector<double> dm(n);
            for (int i = 0; i < n; ++i) dm[i] = d[i] - mu;
            std::vector<double> rhs = y;
            ok = tridiag_solve(sub, dm, sup, rhs);
            if (!ok) break;
            double r = norm2(rhs);
            if (!std::isfinite(r) || r == 0.0) {
                ok = false;
                break;
            }
            for (double& v : rhs) v /= r;
            y = std::move(rhs);
        }
        if (ok) return y;
    }
    return x;  // hopeless input; the residual check downstream will flag it
}

} // namespace

SymMatrix normalized_adjacency(const Graph& g, int d) {
    g.check_consistent();
    int maxdeg = 0;
    for (int v = 0; v < g.n; ++v) maxdeg = std::max(maxdeg, static_cast<int>(g.adj[v].size()));
    if (d < 1 || d < maxdeg)
        throw std::invalid_argument("normalized_adjacency: d must be >= the maximum degree " +
                                    std::to_string(maxdeg));
    SymMatrix m(g.n);
    double w = 1.0 / d;
    for (int v = 0; v < g.n; ++v)
        for (int u : g.adj[v]) m.at(v, u) = w;
    return m;
}

void tridiagonalize(SymMatrix& m, std::vector<double>& diag, std::vector<double>& sub,
                    std::vector<double>& beta, int threads) {
    int n = m.n;
    diag.assign(n, 0.0);
    sub.assign(n, 0.0);
    beta.assign(n, 0.0);
    if (n == 0) return;
    (void)threads;

    std::vector<double> v(n), p(n), w(n);
    for (int k = 0; k + 2 < n; ++k) {
        int lo = k + 1, len = n - lo;
        double alpha = m.at(lo, k);
        double rest = 0.0;
        for (int j = lo + 1; j < n; ++j) rest += m.at(j, k) * m.at(j, k);
        if (rest == 0.0) {
            sub[k] = alpha;
            continue;  // column already tridiagonal; beta stays 0
        }
        double sigma = std::sqrt(alpha * alpha + rest);
        double s = alpha >= 0.0 ? -sigma : sigma;
        v[lo] = alpha - s;
        for (int j = lo + 1; j < n; ++j) v[j] = m.at(j, k);
        double b = 2.0 / (v[lo] * v[lo] + rest);

        // p = b * A v on the trailing block; rows are independent, and the
        // per-row summation order is fixed, so threading changes nothing
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1 && len > 128)
#endif
        for (int i = lo; i < n; ++i)
            p[i] = b * dot_range(&m.a[static_cast<std::size_t>(i) * n + lo], &v[lo], len);

        double kscale = 0.5 * b * dot_range(&p[lo], &v[lo], len);
        for (int i = lo; i < n; ++i) w[i] = p[i] - kscale * v[i];

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads) if (threads > 1 && len > 128)
#endif
        for (int i = lo; i < n; ++i) {
            double vi = v[i], wi = w[i];
            double* row = &m.a[static_cast<std::size_t>(i) * n];
            for (int j = lo; j < n; ++j) row[j] -= vi * w[j] + wi * v[j];
        }

        sub[k] = s;
        beta[k] = b;
        m.at(lo, k) = v[lo];  // reflector lives in the spent column
    }
    if (n >= 2) sub[n - 2] = m.at(n - 1, n - 2);
    for (int i = 0; i < n; ++i) diag[i] = m.at(i, i);
}

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
    int n = static_cast<int>(d.size());
    if (n == 0) return {};
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0, m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == 60)
                    throw std::runtime_error("tridiagonal_eigenvalues: QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, pp = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i], bb = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= pp;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - pp;
                    r = (d[i] - g) * s + 2.0 * c * bb;
                    pp = s * r;
                    d[i + 1] = g + pp;
                    g = c * r - bb;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= pp;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

void back_transform(const SymMatrix& reduced, const std::vector<double>& beta,
                    std::vector<double>& v) {
    int n = reduced.n;
    for (int k = n - 3; k >= 0; --k) {
        if (beta[k] == 0.0) continue;
        double dot = 0.0;
        for (int j = k + 1; j < n; ++j) dot += reduced.at(j, k) * v[j];
        double f = beta[k] * dot;
        for (int j = k + 1; j < n; ++j) v[j] -= f * reduced.at(j, k);
    }
}

EigenExtremes eigen_extremes(const SymMatrix& m, int threads) {
    int n = m.n;
    if (n < 1) throw std::invalid_argument("eigen_extremes: empty matrix");
    if (m.a.size() != static_cast<std::size_t>(n) * n)
        throw std::invalid_argument("eigen_extremes: storage does not match n");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::fabs(m.at(i, j) - m.at(j, i)) > 1e-12)
                throw std::invalid_argument("eigen_extremes: matrix is not symmetric");

    SymMatrix red = m;
    std::vector<double> d, e, beta;
    tridiagonalize(red, d, e, beta, threads);
    std::vector<double> esub(e.begin(), e.end() - 1);  // couples i,i+1 for i<n-1
    auto evs = tridiagonal_eigenvalues(d, esub);

    EigenExtremes out;
    out.lambda_1 = evs[n - 1];
    out.lambda_2 = n >= 2 ? evs[n - 2] : evs[0];
    out.lambda_n = evs[0];

    auto residual_for = [&](double lambda) {
        std::vector<double> v = tridiag_eigenvector(d, esub, lambda);
        back_transform(red, beta, v);
        double nv = norm2(v);
        for (double& x : v) x /= nv;
        double rr = 0.0;
        for (int i = 0; i < n; ++i) {
            double mv = dot_range(&m.a[static_cast<std::size_t>(i) * n], v.data(), n);
            double diff = mv - lambda * v[i];
            rr += diff * diff;
        }
        return std::sqrt(rr);
    };
    out.residual_1 = residual_for(out.lambda_1);
    out.residual_2 = residual_for(out.lambda_2);
    out.residual_n = residual_for(out.lambda_n);
    return out;
}

double hoffman_bound(double lambda_n) {
    if (!(lambda_n >= -1.0 && lambda_n < 0.0))
        throw std::domain_error("hoffman_bound: lambda_n must lie in [-1, 0)");
    return -lambda_n / (1.0 - lambda_n);
}

Rational hoffman_bound(const Rational& lambda_n) {
    if (!(Rational(-1) <= lambda_n && lambda_n < Rational(0)))
        throw std::domain_error("hoffman_bound: lambda_n must lie in [-1, 0)");
    return (Rational(0) - lambda_n) / (Rational(1) - lambda_n);
}

SpectralReport spectral_report(nt::Prime p, int threads) {
    if (p.value() > 4000)
        throw std::invalid_argument(
            "spectral_report: dense eigensolver is capped at p <= 4000; larger p needs an "
            "iterative extremal-eigenvalue method");
    InverseGraph ig = build_inverse_graph(p);
    const Graph& g = ig.graph;

    SpectralReport rep;
    rep.p = p.value();
    rep.n = g.n;
    rep.d = 3;
    rep.regular = true;
    for (int v = 0; v < g.n; ++v)
        if (g.adj[v].size() != 3) rep.regular = false;

    SymMatrix m = normalized_adjacency(g, rep.d);
    EigenExtremes ex = eigen_extremes(m, threads);
    rep.lambda_1 = ex.lambda_1;
    rep.lambda_2 = ex.lambda_2;
    rep.lambda_n = ex.lambda_n;
    rep.lambda = std::max(ex.lambda_2, -ex.lambda_n);
    rep.hoffman = hoffman_bound(ex.lambda_n);
    rep.max_residual = std::max({ex.residual_1, ex.residual_2, ex.residual_n});
    rep.gap_ok = rep.lambda < 1.0 - 1e-4;
    return rep;
}

} // namespace invmis::spectral
