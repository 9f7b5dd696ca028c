// Compares the serial reference kernels against their OpenMP variants: the
// algebraic cycle census, Householder tridiagonalization, and the exact
// solver's root-split mode. Each comparison reports wall times and whether
// the parallel result matches the serial one exactly.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "invmis/cycle_census.hpp"
#include "invmis/graph.hpp"
#include "invmis/solver.hpp"
#include "invmis/spectral.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;
using invmis::InverseGraph;
namespace nt = invmis::nt;
namespace census = invmis::census;
namespace solver = invmis::solver;
namespace spectral = invmis::spectral;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double t1, double tk, bool same) {
    std::printf("%-22s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  match %s\n", name, t1,
                tk, tk > 0 ? t1 / tk : 0.0, same ? "yes" : "NO");
}

bool rows_equal(const std::vector<census::CensusRow>& a,
                const std::vector<census::CensusRow>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i].seq == b[i].seq) || a[i].kind != b[i].kind || a[i].count != b[i].count ||
            a[i].starts != b[i].starts || a[i].algebraic_roots != b[i].algebraic_roots)
            return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel kernel benchmark"};
    nt::u64 p_census = 10007, p_spectral = 1009, p_solve = 113;
    int threads =
#ifdef _OPENMP
        omp_get_max_threads();
#else
        1;
#endif
    app.add_option("--p-census", p_census);
    app.add_option("--p-spectral", p_spectral);
    app.add_option("--p-solve", p_solve);
    app.add_option("--threads", threads)->check(CLI::PositiveNumber);
    CLI11_PARSE(app, argc, argv);

    std::printf("threads: %d\n", threads);

    {
        InverseGraph ig = invmis::build_inverse_graph(nt::Prime(p_census));
        auto t0 = Clock::now();
        auto serial = census::census_serial(ig, 9);
        double t1 = seconds_since(t0);
        t0 = Clock::now();
        auto parallel = census::census(ig, 9, threads);
        double tk = seconds_since(t0);
        report("census", t1, tk, rows_equal(serial, parallel));
    }

    {
        InverseGraph ig = invmis::build_inverse_graph(nt::Prime(p_spectral));
        auto m = spectral::normalized_adjacency(ig.graph, 3);
        std::vector<double> d1, e1, b1, dk, ek, bk;
        auto m1 = m;
        auto t0 = Clock::now();
        spectral::tridiagonalize(m1, d1, e1, b1, 1);
        double t1 = seconds_since(t0);
        auto mk = m;
        t0 = Clock::now();
        spectral::tridiagonalize(mk, dk, ek, bk, threads);
        double tk = seconds_since(t0);
        report("tridiagonalize", t1, tk, d1 == dk && e1 == ek && b1 == bk && m1.a == mk.a);
    }

    {
        InverseGraph ig = invmis::build_inverse_graph(nt::Prime(p_solve));
        solver::SolveOptions o1;
        auto t0 = Clock::now();
        auto r1 = solver::solve_exact(ig.graph, o1);
        double t1 = seconds_since(t0);
        solver::SolveOptions ok;
        ok.threads = threads;
        t0 = Clock::now();
        auto rk = solver::solve_exact(ig.graph, ok);
        double tk = seconds_since(t0);
        report("solve_exact", t1, tk, r1.n_star == rk.n_star && r1.proven == rk.proven);
    }

    return 0;
}
