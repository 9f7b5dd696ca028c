// Command-line front end: generate inverse graphs, census their short odd
// cycles, verify or search cycle-chain certificates, solve for the exact
// independence number, report spectra, and sweep all of it over prime ranges.
//
// Everything written to stdout (or --out) is deterministic for a fixed
// command line with --threads 1; timing and progress notes go to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "invmis/cycle_census.hpp"
#include "invmis/graph.hpp"
#include "invmis/numtheory.hpp"
#include "invmis/rational.hpp"
#include "invmis/refutation.hpp"
#include "invmis/solver.hpp"
#include "invmis/spectral.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using invmis::Graph;
using invmis::InverseGraph;
using invmis::Rational;
namespace nt = invmis::nt;
namespace census = invmis::census;
namespace refutation = invmis::refutation;
namespace solver = invmis::solver;
namespace spectral = invmis::spectral;

constexpr int kExitValidation = 2;
constexpr int kExitNotProven = 3;

std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + out_path);
    f << text;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::pair<nt::u64, nt::u64> parse_range(const std::string& text) {
    auto pos = text.find("..");
    if (pos == std::string::npos)
        throw std::invalid_argument("range must look like A..B, got " + text);
    nt::u64 a = std::stoull(text.substr(0, pos));
    nt::u64 b = std::stoull(text.substr(pos + 2));
    if (a > b) throw std::invalid_argument("empty range " + text);
    return {a, b};
}

// Odd primes in [a, b]; everything else is skipped with one summary warning.
std::vector<nt::u64> primes_in(nt::u64 a, nt::u64 b) {
    std::vector<nt::u64> ps;
    nt::u64 skipped = 0;
    for (nt::u64 x = a; x <= b; ++x) {
        if (x >= 3 && x % 2 == 1 && nt::is_prime(x))
            ps.push_back(x);
        else
            ++skipped;
    }
    if (skipped)
        std::cerr << "note: skipped " << skipped << " non-prime values in " << a << ".." << b
                  << "\n";
    return ps;
}

solver::LoopPolicy parse_policy(const std::string& s) {
    return s == "ignore" ? solver::LoopPolicy::IgnoreLoops
                         : solver::LoopPolicy::ExcludeLoopVertex;
}

const char* policy_name(solver::LoopPolicy p) {
    return p == solver::LoopPolicy::IgnoreLoops ? "ignore" : "exclude";
}

const char* kind_name(census::RowKind k) {
    switch (k) {
        case census::RowKind::TwoSolutions: return "two";
        case census::RowKind::Unique: return "unique";
        case census::RowKind::NoSolution: return "none";
        default: return "degenerate";
    }
}

// ---------------------------------------------------------------- gen

int run_gen(nt::u64 p, const std::string& format, const std::string& out) {
    nt::Prime prime(p);
    InverseGraph ig = invmis::build_inverse_graph(prime);
    std::string text = format == "json" ? invmis::to_json_adjacency(ig.graph) + "\n"
                                        : invmis::to_dimacs(ig.graph);
    emit(text, out);
    return 0;
}

// ---------------------------------------------------------------- census

nlohmann::json census_rows_json(const std::vector<census::CensusRow>& rows) {
    auto arr = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json j;
        j["sequence"] = row.seq.bracketed();
        j["length"] = row.seq.length();
        j["classification"] = kind_name(row.kind);
        j["count"] = row.count;
        j["starts"] = row.starts;
        if (row.squarefree_disc)
            j["squarefree_disc"] = *row.squarefree_disc;
        else
            j["squarefree_disc"] = nullptr;
        if (row.forced_root)
            j["forced_root"] = *row.forced_root;
        else
            j["forced_root"] = nullptr;
        arr.push_back(std::move(j));
    }
    return arr;
}

int run_census(nt::u64 p, int max_len, bool cross_check, int threads,
               const std::string& format, const std::string& out) {
    nt::Prime prime(p);
    InverseGraph ig = invmis::build_inverse_graph(prime);
    auto rows = census::census(ig, max_len, threads);

    if (cross_check) {
        if (p > 101)
            throw std::invalid_argument("--cross-check walks every simple cycle; capped at p <= 101");
        auto walked = census::walk_census(ig, max_len);
        if (walked.size() != rows.size())
            throw std::runtime_error("cross-check failed: row counts differ");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!(rows[i].seq == walked[i].seq) || rows[i].starts != walked[i].starts) {
                std::cerr << "cross-check mismatch at " << rows[i].seq.bracketed() << "\n";
                return kExitValidation;
            }
        }
        std::cerr << "cross-check ok: " << rows.size() << " sequences agree with the walk oracle\n";
    }

    if (format == "json") {
        nlohmann::json j;
        j["p"] = p;
        j["max_len"] = max_len;
        j["rows"] = census_rows_json(rows);
        emit(j.dump(2) + "\n", out);
    } else {
        emit(census::census_to_csv(rows, prime), out);
    }
    return 0;
}

// ---------------------------------------------------------------- refute

nlohmann::json bound_json(const refutation::RefutationBound& b) {
    nlohmann::json j;
    j["numerator"] = b.numerator;
    j["denominator"] = b.denominator;
    j["value"] = b.value.str();
    j["value_real"] = b.value.to_double();
    j["bound"] = b.floored;
    return j;
}

int run_bound_formula(nt::u64 p, int kp, const std::string& out) {
    nt::Prime prime(p);
    Rational bound = refutation::ncc_lower_bound(prime, kp);
    nlohmann::json j;
    j["p"] = p;
    j["kp"] = kp;
    j["a"] = refutation::a_of(kp);
    j["b"] = refutation::b_of(kp);
    j["bound"] = bound.str();
    j["bound_real"] = bound.to_double();
    j["bound_over_p"] = fmt12(bound.to_double() / static_cast<double>(p));
    emit(j.dump(2) + "\n", out);
    return 0;
}

int run_refute(const std::optional<nt::u64>& p, const std::string& graph_file,
               const std::string& cert_file, bool do_search, int m_max, int max_len,
               double budget_secs, std::uint64_t seed, int restarts, const std::string& out) {
    Graph g;
    if (p) {
        g = invmis::build_inverse_graph(nt::Prime(*p)).graph;
    } else if (!graph_file.empty()) {
        g = invmis::from_dimacs(read_file(graph_file));
    } else {
        throw std::invalid_argument("refute needs --p or --graph (or --bound-formula)");
    }

    if (do_search) {
        refutation::SearchBudget budget;
        budget.seconds = budget_secs;
        budget.seed = seed;
        budget.restarts = restarts;
        auto cert = refutation::search_certificate(g, m_max, max_len, budget);
        auto b = refutation::verify_certificate(g, cert);
        nlohmann::json j;
        j["n"] = g.n;
        j["certificate"] = nlohmann::json::parse(refutation::certificate_to_json(cert));
        j["report"] = bound_json(b);
        emit(j.dump(2) + "\n", out);
        return 0;
    }

    if (cert_file.empty())
        throw std::invalid_argument("refute needs --cert FILE or --search");
    auto cert = refutation::certificate_from_json(read_file(cert_file));
    auto b = refutation::verify_certificate(g, cert);  // throws CertificateError if broken
    nlohmann::json j;
    j["n"] = g.n;
    j["m"] = cert.multiplicity;
    j["valid"] = true;
    j["report"] = bound_json(b);
    emit(j.dump(2) + "\n", out);
    return 0;
}

// ---------------------------------------------------------------- solve

int run_solve(const std::optional<nt::u64>& p, const std::string& graph_file,
              const std::string& policy_str, bool naive, bool witness, double budget_secs,
              std::uint64_t max_nodes, int threads, const std::string& format,
              const std::string& out) {
    Graph g;
    if (p) {
        g = invmis::build_inverse_graph(nt::Prime(*p)).graph;
    } else if (!graph_file.empty()) {
        g = invmis::from_dimacs(read_file(graph_file));
    } else {
        throw std::invalid_argument("solve needs --p or --graph");
    }
    auto policy = parse_policy(policy_str);

    solver::SolveOptions opts;
    opts.policy = policy;
    opts.budget_seconds = budget_secs;
    opts.max_nodes = max_nodes;
    opts.threads = threads;
    auto res = solver::solve_exact(g, opts);
    std::cerr << "solve: n_star=" << res.n_star << " nodes=" << res.nodes << " wall="
              << fmt12(res.wall_seconds) << "s\n";

    if (!solver::verify_independent(g, res.witness, policy))
        throw std::runtime_error("internal error: witness failed verification");
    if (static_cast<int>(res.witness.size()) != res.n_star)
        throw std::runtime_error("internal error: witness size disagrees with n_star");

    if (naive) {
        auto oracle = solver::solve_naive(g, policy);
        if (oracle.n_star != res.n_star) {
            std::cerr << "oracle mismatch: naive=" << oracle.n_star << " exact=" << res.n_star
                      << "\n";
            return kExitValidation;
        }
        std::cerr << "oracle agreement at n_star=" << oracle.n_star << "\n";
    }

    double ratio = static_cast<double>(res.n_star) / g.n;
    if (format == "csv") {
        std::ostringstream os;
        os << "# invmis solve v1\n";
        os << "p,n,policy,n_star,ratio,proven,nodes\n";
        os << (p ? std::to_string(*p) : "") << ',' << g.n << ',' << policy_name(policy) << ','
           << res.n_star << ',' << fmt12(ratio) << ',' << (res.proven ? 1 : 0) << ','
           << res.nodes << '\n';
        emit(os.str(), out);
    } else {
        nlohmann::json j;
        if (p) j["p"] = *p;
        j["n"] = g.n;
        j["policy"] = policy_name(policy);
        j["n_star"] = res.n_star;
        j["ratio"] = fmt12(ratio);
        j["proven"] = res.proven;
        j["nodes"] = res.nodes;
        if (witness) j["witness"] = res.witness;
        emit(j.dump(2) + "\n", out);
    }
    return res.proven ? 0 : kExitNotProven;
}

// ---------------------------------------------------------------- spectral

int run_spectral(const std::vector<nt::u64>& ps, int threads, const std::string& format,
                 const std::string& out) {
    std::vector<spectral::SpectralReport> reports;
    for (nt::u64 p : ps) {
        auto rep = spectral::spectral_report(nt::Prime(p), threads);
        if (!rep.gap_ok)
            std::cerr << "note: p=" << p << " lambda=" << fmt12(rep.lambda)
                      << " does not clear 1-1e-4\n";
        if (rep.max_residual > 1e-8)
            std::cerr << "warning: p=" << p << " eigen residual " << fmt12(rep.max_residual)
                      << " above 1e-8\n";
        reports.push_back(rep);
    }

    if (format == "json") {
        auto arr = nlohmann::json::array();
        for (const auto& r : reports) {
            nlohmann::json j;
            j["p"] = r.p;
            j["n"] = r.n;
            j["d"] = r.d;
            j["regular"] = r.regular;
            j["lambda_1"] = fmt12(r.lambda_1);
            j["lambda_2"] = fmt12(r.lambda_2);
            j["lambda_n"] = fmt12(r.lambda_n);
            j["lambda"] = fmt12(r.lambda);
            j["hoffman"] = fmt12(r.hoffman);
            j["max_residual"] = fmt12(r.max_residual);
            j["gap_ok"] = r.gap_ok;
            arr.push_back(std::move(j));
        }
        emit(arr.dump(2) + "\n", out);
    } else {
        std::ostringstream os;
        os << "# invmis spectral v1\n";
        os << "p,n,d,regular,lambda_1,lambda_2,lambda_n,lambda,hoffman,max_residual,gap_ok\n";
        for (const auto& r : reports)
            os << r.p << ',' << r.n << ',' << r.d << ',' << (r.regular ? 1 : 0) << ','
               << fmt12(r.lambda_1) << ',' << fmt12(r.lambda_2) << ',' << fmt12(r.lambda_n)
               << ',' << fmt12(r.lambda) << ',' << fmt12(r.hoffman) << ','
               << fmt12(r.max_residual) << ',' << (r.gap_ok ? 1 : 0) << '\n';
        emit(os.str(), out);
    }
    return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepRow {
    nt::u64 p = 0;
    int n = 0;
    int n_star = 0;
    bool proven = false;
    double ratio = 0;
    std::int64_t c3 = 0, c5 = 0, c7 = 0, c9 = 0;
    int ncc_kp = 1;
    Rational ncc_bound;
    std::optional<Rational> ncc5;
    std::optional<double> lambda_n, hoffman;
};

SweepRow sweep_one(nt::u64 pv, int max_len, solver::LoopPolicy policy, double budget_secs) {
    nt::Prime prime(pv);
    InverseGraph ig = invmis::build_inverse_graph(prime);
    SweepRow row;
    row.p = pv;
    row.n = ig.graph.n;

    auto rows = census::census_serial(ig, max_len);
    for (const auto& r : rows) {
        switch (r.seq.length()) {
            case 3: row.c3 += r.count; break;
            case 5: row.c5 += r.count; break;
            case 7: row.c7 += r.count; break;
            case 9: row.c9 += r.count; break;
            default: break;
        }
    }

    solver::SolveOptions opts;
    opts.policy = policy;
    opts.budget_seconds = budget_secs;
    auto res = solver::solve_exact(ig.graph, opts);
    row.n_star = res.n_star;
    row.proven = res.proven;
    row.ratio = static_cast<double>(res.n_star) / row.n;

    int kp = 1;
    while (kp + 1 <= 25 && refutation::a_of(kp + 1) < static_cast<std::int64_t>(pv)) ++kp;
    row.ncc_kp = kp;
    row.ncc_bound = refutation::ncc_lower_bound(prime, kp);
    if (refutation::a_of(5) < static_cast<std::int64_t>(pv))
        row.ncc5 = refutation::ncc_lower_bound(prime, 5);

    if (pv <= 4000) {
        auto rep = spectral::spectral_report(prime, 1);
        row.lambda_n = rep.lambda_n;
        row.hoffman = rep.hoffman;
    }
    return row;
}

int run_sweep(const std::vector<nt::u64>& ps, int max_len, const std::string& policy_str,
              double budget_secs, int threads, const std::string& out) {
    auto policy = parse_policy(policy_str);
    std::vector<SweepRow> rows(ps.size());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
#endif
    for (std::size_t i = 0; i < ps.size(); ++i)
        rows[i] = sweep_one(ps[i], max_len, policy, budget_secs);

    std::ostringstream os;
    os << "# invmis sweep v1 policy=" << policy_name(policy) << " max_len=" << max_len << "\n";
    os << "p,n,n_star,proven,ratio,c3,c5,c7,c9,ncc_kp,ncc_bound,ncc_over_p,ncc5_bound,"
          "ncc5_over_p,lambda_n,hoffman\n";
    bool all_proven = true;
    for (const auto& r : rows) {
        all_proven = all_proven && r.proven;
        os << r.p << ',' << r.n << ',' << r.n_star << ',' << (r.proven ? 1 : 0) << ','
           << fmt12(r.ratio) << ',' << r.c3 << ',' << r.c5 << ',' << r.c7 << ',' << r.c9 << ','
           << r.ncc_kp << ',' << fmt12(r.ncc_bound.to_double()) << ','
           << fmt12(r.ncc_bound.to_double() / static_cast<double>(r.p)) << ',';
        if (r.ncc5)
            os << fmt12(r.ncc5->to_double()) << ','
               << fmt12(r.ncc5->to_double() / static_cast<double>(r.p));
        else
            os << ',';
        os << ',';
        if (r.lambda_n) os << fmt12(*r.lambda_n);
        os << ',';
        if (r.hoffman) os << fmt12(*r.hoffman);
        os << '\n';
    }
    emit(os.str(), out);
    return all_proven ? 0 : kExitNotProven;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"inverse-graph toolkit: hard maximum-independent-set instances, their "
                 "short-cycle censuses, cycle-chain refutation bounds, exact solutions, "
                 "and spectra"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "emit the inverse graph for a prime");
    nt::u64 gen_p = 0;
    std::string gen_format = "dimacs", gen_out;
    gen->add_option("p,--p", gen_p, "odd prime >= 3")->required();
    gen->add_option("--format", gen_format)->check(CLI::IsMember({"dimacs", "json"}));
    gen->add_option("--out", gen_out, "output file (default stdout)");

    // census
    auto* cen = app.add_subcommand("census", "classify short odd cycles algebraically");
    nt::u64 cen_p = 0;
    int cen_max_len = 9, cen_threads = 1;
    bool cen_cross = false;
    std::string cen_format = "csv", cen_out;
    cen->add_option("p,--p", cen_p, "odd prime >= 3")->required();
    cen->add_option("--max-len", cen_max_len, "largest odd cycle length, 3..13")
        ->check(CLI::Range(3, 13));
    cen->add_flag("--cross-check", cen_cross, "verify against the explicit walk oracle (p <= 101)");
    cen->add_option("--threads", cen_threads)->check(CLI::PositiveNumber);
    cen->add_option("--format", cen_format)->check(CLI::IsMember({"csv", "json"}));
    cen->add_option("--out", cen_out);

    // refute
    auto* ref = app.add_subcommand("refute", "verify or search cycle-chain certificates");
    std::optional<nt::u64> ref_p;
    std::string ref_graph, ref_cert, ref_out;
    bool ref_search = false;
    int ref_mmax = 2, ref_maxlen = 9, ref_restarts = 32;
    double ref_budget = 5.0;
    std::uint64_t ref_seed = 1;
    std::vector<nt::u64> ref_formula;
    ref->add_option("--p", ref_p, "build the inverse graph for this prime");
    ref->add_option("--graph", ref_graph, "DIMACS graph file");
    ref->add_option("--cert", ref_cert, "certificate JSON file to verify");
    ref->add_flag("--search", ref_search, "search for a certificate");
    ref->add_option("--m-max", ref_mmax)->check(CLI::PositiveNumber);
    ref->add_option("--max-len", ref_maxlen)->check(CLI::Range(3, 13));
    ref->add_option("--budget-secs", ref_budget);
    ref->add_option("--seed", ref_seed);
    ref->add_option("--restarts", ref_restarts);
    ref->add_option("--bound-formula", ref_formula, "P KP: evaluate the analytic lower bound")
        ->expected(2);
    ref->add_option("--out", ref_out);

    // solve
    auto* sol = app.add_subcommand("solve", "exact independence number");
    std::optional<nt::u64> sol_p;
    std::string sol_graph, sol_policy = "exclude", sol_format = "json", sol_out;
    bool sol_naive = false, sol_witness = false;
    double sol_budget = 0.0;
    std::uint64_t sol_max_nodes = 0;
    int sol_threads = 1;
    sol->add_option("--p", sol_p, "build the inverse graph for this prime");
    sol->add_option("--graph", sol_graph, "DIMACS graph file");
    sol->add_option("--loop-policy", sol_policy)->check(CLI::IsMember({"exclude", "ignore"}));
    sol->add_flag("--naive", sol_naive, "cross-check against exhaustive enumeration (n <= 32)");
    sol->add_flag("--witness", sol_witness, "include the witness set in the output");
    sol->add_option("--budget-secs", sol_budget, "0 disables the budget");
    sol->add_option("--max-nodes", sol_max_nodes, "0 disables the node cap");
    sol->add_option("--threads", sol_threads)->check(CLI::PositiveNumber);
    sol->add_option("--format", sol_format)->check(CLI::IsMember({"csv", "json"}));
    sol->add_option("--out", sol_out);

    // spectral
    auto* spe = app.add_subcommand("spectral", "normalized adjacency spectrum report");
    std::optional<nt::u64> spe_p;
    std::string spe_range, spe_format = "csv", spe_out;
    int spe_threads = 1;
    spe->add_option("--p", spe_p);
    spe->add_option("--range", spe_range, "A..B, primes only");
    spe->add_option("--threads", spe_threads)->check(CLI::PositiveNumber);
    spe->add_option("--format", spe_format)->check(CLI::IsMember({"csv", "json"}));
    spe->add_option("--out", spe_out);

    // sweep
    auto* swe = app.add_subcommand("sweep", "census + solve + bounds, one CSV row per prime");
    std::string swe_range, swe_policy = "exclude", swe_out;
    int swe_maxlen = 9, swe_threads = 1;
    double swe_budget = 0.0;
    swe->add_option("--range", swe_range, "A..B, primes only")->required();
    swe->add_option("--max-len", swe_maxlen)->check(CLI::Range(3, 13));
    swe->add_option("--loop-policy", swe_policy)->check(CLI::IsMember({"exclude", "ignore"}));
    swe->add_option("--budget-secs", swe_budget, "per-prime solver budget, 0 disables");
    swe->add_option("--threads", swe_threads)->check(CLI::PositiveNumber);
    swe->add_option("--out", swe_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*gen) return run_gen(gen_p, gen_format, gen_out);
        if (*cen) return run_census(cen_p, cen_max_len, cen_cross, cen_threads, cen_format, cen_out);
        if (*ref) {
            if (!ref_formula.empty())
                return run_bound_formula(ref_formula[0], static_cast<int>(ref_formula[1]), ref_out);
            return run_refute(ref_p, ref_graph, ref_cert, ref_search, ref_mmax, ref_maxlen,
                              ref_budget, ref_seed, ref_restarts, ref_out);
        }
        if (*sol)
            return run_solve(sol_p, sol_graph, sol_policy, sol_naive, sol_witness, sol_budget,
                             sol_max_nodes, sol_threads, sol_format, sol_out);
        if (*spe) {
            std::vector<nt::u64> ps;
            if (spe_p)
                ps.push_back(*spe_p);
            else if (!spe_range.empty()) {
                auto [a, b] = parse_range(spe_range);
                ps = primes_in(a, b);
            } else {
                throw std::invalid_argument("spectral needs --p or --range");
            }
            return run_spectral(ps, spe_threads, spe_format, spe_out);
        }
        if (*swe) {
            auto [a, b] = parse_range(swe_range);
            return run_sweep(primes_in(a, b), swe_maxlen, swe_policy, swe_budget, swe_threads,
                             swe_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
