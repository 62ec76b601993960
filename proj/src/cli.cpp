#include "divchain/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <new>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "divchain/certify.hpp"
#include "divchain/error.hpp"
#include "divchain/hitting.hpp"
#include "divchain/io.hpp"
#include "divchain/parallel.hpp"
#include "divchain/primitive.hpp"
#include "divchain/stochastic.hpp"

namespace divchain {

namespace {

struct OutputOpts {
    std::string path;
    std::string format = "csv";
    bool hex = false;
};

struct ChainOpts {
    std::string name = "von_mangoldt";
    int k = 1;
    std::string Q;
};

void add_output(CLI::App* s, OutputOpts& o)
{
    s->add_option("--out", o.path, "Output path (default: standard output)");
    s->add_option("--format", o.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl", "json-lines"}));
    s->add_flag("--hex", o.hex, "Write floats as hexadecimal");
}

void add_chain(CLI::App* s, ChainOpts& c)
{
    s->add_option("--chain", c.name, "random_prime, mertens, von_mangoldt (vm), eps_modified (eps), odd_banks_martin (obm)");
    s->add_option("--k", c.k, "Absorbing layer of odd_banks_martin");
    s->add_option("--Q", c.Q, "Comma-separated odd primes of odd_banks_martin");
}

template <class T>
std::vector<T> parse_list(const std::string& text)
{
    std::vector<T> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        if (tok.find_first_not_of("0123456789") != std::string::npos)
            throw domain_error("expected a comma-separated list of integers, got '" + text + "'");
        out.push_back(static_cast<T>(std::stoull(tok)));
    }
    return out;
}

ChainId make_chain(const ChainOpts& c) { return parse_chain(c.name, c.k, parse_list<u32>(c.Q)); }

std::vector<u64> read_set_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open '" + path + "'");
    return read_integer_set(in);
}

void emit(const Table& t, const OutputOpts& o, std::ostream& out)
{
    const Format f = parse_format(o.format);
    if (o.path.empty()) {
        write_table(out, t, f, o.hex);
        return;
    }
    std::ofstream file(o.path);
    if (!file) throw resource_error("cannot write '" + o.path + "'");
    write_table(file, t, f, o.hex);
}

std::pair<u64, u64> parse_range(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw domain_error("range must look like lo:hi");
    const auto lo = parse_list<u64>(text.substr(0, colon)), hi = parse_list<u64>(text.substr(colon + 1));
    if (lo.size() != 1 || hi.size() != 1 || lo[0] > hi[0]) throw domain_error("range must look like lo:hi with lo <= hi");
    return {lo[0], hi[0]};
}

Table estimate_record(const std::string& estimator, const std::string& params, const Estimate& e, u64 seed)
{
    Table t;
    t.columns = {"estimator", "params", "p_hat", "stderr", "bias_bound", "hits", "trials", "seed"};
    t.add({estimator, params, e.p_hat, e.stderr_, e.bias_bound, e.hits, e.trials, seed});
    return t;
}

std::string join_states(const ChainPath& p)
{
    std::string s;
    for (u64 n : p.states) s += (s.empty() ? "" : " ") + std::to_string(n);
    if (p.end == PathEnd::infinity) s += " inf";
    return s;
}

std::string path_end(PathEnd e)
{
    switch (e) {
    case PathEnd::absorbed: return "absorbed";
    case PathEnd::infinity: return "infinity";
    default: return "cap";
    }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Markov chains on the divisibility poset"};
    app.require_subcommand(1);
    int threads = default_threads();
    u64 seed = 1;
    app.add_option("--threads", threads, "Worker threads (default from DIVCHAIN_THREADS)");
    app.add_option("--seed", seed, "Seed for every stochastic output");

    std::function<int()> action;
    auto on = [&](CLI::App* s, std::function<int()> f) { s->callback([&action, f] { action = f; }); };

    // sieve
    OutputOpts o_sieve;
    u64 sieve_limit = 0;
    bool sieve_list = false;
    auto* sieve = app.add_subcommand("sieve", "Smallest-prime-factor sieve summary or per-n listing");
    sieve->add_option("--limit", sieve_limit, "Sieve up to this bound")->required();
    sieve->add_flag("--list", sieve_list, "One row per n with spf, Omega, omega and Lambda");
    add_output(sieve, o_sieve);
    on(sieve, [&] {
        FactorTable t(sieve_limit);
        Table tab;
        if (sieve_list) {
            tab.columns = {"n", "spf", "big_omega", "small_omega", "lambda"};
            for (u64 n = 2; n <= sieve_limit; ++n) {
                FactorStats f = factor_stats(n, t);
                tab.add({n, u64(t.spf(n)), u64(f.big_omega), u64(f.small_omega), lambda(n, t)});
            }
        } else {
            tab.columns = {"limit", "primes", "theta", "psi"};
            tab.add({sieve_limit, u64(t.primes().size()), chebyshev_theta(sieve_limit, t), chebyshev_psi(sieve_limit, t)});
        }
        emit(tab, o_sieve, out);
        return 0;
    });

    // weight
    OutputOpts o_weight;
    std::string weight_name = "nu0";
    u64 weight_n = 2, weight_to = 0;
    auto* weight = app.add_subcommand("weight", "Evaluate a weight at n or over [n, to]");
    weight->add_option("--w,--weight", weight_name, "nu0, nu_mertens, nu_lambda, nu_shifted<p>");
    weight->add_option("--n", weight_n, "First argument")->required();
    weight->add_option("--to", weight_to, "Last argument of a range");
    add_output(weight, o_weight);
    on(weight, [&] {
        const WeightId w = parse_weight(weight_name);
        const u64 last = std::max(weight_n, weight_to);
        FactorTable t(std::max<u64>(last, 2));
        Table tab;
        tab.columns = {"n", w.name(), "error_bound"};
        for (u64 n = weight_n; n <= last; ++n) {
            if (w.kind == WeightKind::nu_lambda && n >= 2) {
                QuadEstimate q = nu_lambda_quadrature(n, w.quad_tol);
                tab.add({n, q.value, q.error_bound});
            } else {
                tab.add({n, evaluate(w, n, t), 0.0});
            }
        }
        emit(tab, o_weight, out);
        return 0;
    });

    // chain
    OutputOpts o_chain;
    ChainOpts c_chain;
    u64 chain_n = 0;
    auto* chain = app.add_subcommand("chain", "Print the downward transition list of a state");
    add_chain(chain, c_chain);
    chain->add_option("--n", chain_n, "State")->required();
    add_output(chain, o_chain);
    on(chain, [&] {
        FactorTable t(std::max<u64>(chain_n, 2));
        TransitionList l = transitions_down(make_chain(c_chain), chain_n, t);
        Table tab;
        tab.columns = {"source", "target", "prob"};
        for (const Transition& tr : l.entries) tab.add({l.source, tr.target, tr.prob});
        emit(tab, o_chain, out);
        return 0;
    });

    // subinv
    OutputOpts o_sub;
    ChainOpts c_sub;
    std::string sub_weight = "nu0";
    u64 sub_from = 2, sub_to = 100, sub_Q = 100000;
    auto* subinv = app.add_subcommand("subinv", "Sub-invariance margins with certified tails");
    add_chain(subinv, c_sub);
    subinv->add_option("--w,--weight", sub_weight, "Weight");
    subinv->add_option("--from", sub_from, "First state");
    subinv->add_option("--to", sub_to, "Last state");
    subinv->add_option("--trunc-Q", sub_Q, "Direct summation cutoff for parents");
    add_output(subinv, o_sub);
    on(subinv, [&] {
        const ChainId c = make_chain(c_sub);
        FactorTable t(std::max(sub_to, sub_Q) + 1);
        const Weight w(parse_weight(sub_weight), t);
        const ParentCache cache = make_parent_cache(sub_Q, t);
        Table tab;
        tab.columns = {"n", "weight", "head", "tail_lo", "tail_hi", "lower", "upper"};
        double worst = std::numeric_limits<double>::infinity();
        for (u64 n = sub_from; n <= sub_to; ++n) {
            if (!in_state_space(c, n, t)) continue;
            SubinvarianceReport r = subinvariance_margin(c, w, n, cache);
            worst = std::min(worst, r.lower);
            tab.add({n, r.weight, r.head, r.tail_lo, r.tail_hi, r.lower, r.upper});
        }
        emit(tab, o_sub, out);
        if (worst < -1e-9) {
            err << "sub-invariance margin below -1e-9: " << worst << '\n';
            return 2;
        }
        return 0;
    });

    // hitdown
    OutputOpts o_hd;
    ChainOpts c_hd;
    u64 hd_n0 = 0, hd_X = 0;
    std::string hd_mass;
    bool hd_all = false;
    auto* hitdown = app.add_subcommand("hitdown", "Exact downward hitting masses");
    add_chain(hitdown, c_hd);
    hitdown->add_option("--n0", hd_n0, "Unit initial mass at n0");
    hitdown->add_option("--mass", hd_mass, "Initial mass file with lines 'n value'");
    hitdown->add_option("--X", hd_X, "Truncation (default n0)");
    hitdown->add_flag("--all", hd_all, "Also print zero masses");
    add_output(hitdown, o_hd);
    on(hitdown, [&] {
        const ChainId c = make_chain(c_hd);
        const u64 X = hd_X ? hd_X : hd_n0;
        if (X < 1) throw domain_error("give --X or --n0");
        FactorTable t(std::max<u64>(X, 2));
        MassVector b = MassVector::zeros(X);
        if (!hd_mass.empty()) {
            std::ifstream in(hd_mass);
            if (!in) throw domain_error("cannot open '" + hd_mass + "'");
            u64 n;
            double v;
            while (in >> n >> v) b.at(n) += v;
        } else {
            b.at(hd_n0) = 1.0;
        }
        MassVector h = hitting_down(c, b, X, t);
        Table tab;
        tab.columns = {"n", "h"};
        for (u64 n = 1; n <= X; ++n)
            if (hd_all || h[n] != 0) tab.add({n, h[n]});
        emit(tab, o_hd, out);
        return 0;
    });

    // hitup
    OutputOpts o_hu;
    std::string hu_setup = "nu2";
    u64 hu_X = 1000;
    auto* hitup = app.add_subcommand("hitup", "Exact upward hitting masses for a named setup");
    hitup->add_option("--setup", hu_setup, "eps, obm or nu2")->check(CLI::IsMember({"eps", "obm", "nu2"}));
    hitup->add_option("--X", hu_X, "Truncation");
    add_output(hitup, o_hu);
    on(hitup, [&] {
        FactorTable t(std::max<u64>(hu_X, 2));
        AdjointSetup s = adjoint_setup(hu_setup, hu_X, t);
        const Weight w(s.weight, t);
        MassVector h = hitting_up(s.chain, w, s.b, hu_X);
        Table tab;
        tab.columns = {"n", "h", s.weight.name(), "abs_diff"};
        for (u64 n = 1; n <= hu_X; ++n) {
            if (h[n] == 0) continue;
            const double wn = (n == 1 && s.weight.kind == WeightKind::nu0) ? NAN : w(n);
            tab.add({n, h[n], wn, std::abs(h[n] - wn)});
        }
        emit(tab, o_hu, out);
        return 0;
    });

    // mass1196
    OutputOpts o_mass;
    u64 m_x = 0, m_X = 0;
    auto* mass = app.add_subcommand("mass1196", "Initial mass on [x, X] whose downward hitting mass is nu0");
    mass->add_option("--x", m_x)->required();
    mass->add_option("--X", m_X)->required();
    add_output(mass, o_mass);
    on(mass, [&] {
        FactorTable t(std::max<u64>(m_X, 2));
        MassVector b = mass_1196(m_x, m_X, t);
        Table tab;
        tab.columns = {"n", "b"};
        for (u64 n = m_x; n <= m_X; ++n) tab.add({n, b[n]});
        emit(tab, o_mass, out);
        return 0;
    });

    // bound1196
    OutputOpts o_bound;
    u64 b_x = 0, b_X = 0;
    auto* bound = app.add_subcommand("bound1196", "Upper bound on f(A) for primitive A in [x, X]");
    bound->add_option("--x", b_x)->required();
    bound->add_option("--X", b_X)->required();
    add_output(bound, o_bound);
    on(bound, [&] {
        FactorTable t(std::max<u64>(b_X, 2));
        const double v = bound_1196(b_x, b_X, t);
        Table tab;
        tab.columns = {"x", "X", "bound", "threshold"};
        tab.add({b_x, b_X, v, 1 + 10 / std::log(double(b_x))});
        emit(tab, o_bound, out);
        return 0;
    });

    // lym
    OutputOpts o_lym;
    u64 lym_n0 = 30;
    auto* lym = app.add_subcommand("lym", "Exact random-prime hitting masses below a squarefree n0");
    lym->add_option("--n0", lym_n0)->required();
    add_output(lym, o_lym);
    on(lym, [&] {
        FactorTable t(std::max<u64>(lym_n0, 2));
        Table tab;
        tab.columns = {"n", "big_omega", "h", "h_float"};
        for (auto& [n, h] : lym_masses(lym_n0, t)) {
            std::ostringstream r;
            r << h.numerator() << '/' << h.denominator();
            tab.add({n, u64(factorize(n, t).big_omega()), r.str(), boost::rational_cast<double>(h)});
        }
        emit(tab, o_lym, out);
        return 0;
    });

    // cut
    OutputOpts o_cut;
    ChainOpts c_cut;
    std::string cut_weight = "nu0", cut_S, cut_A;
    auto* cut = app.add_subcommand("cut", "Cut-capacity inequality for a region S and primitive A");
    add_chain(cut, c_cut);
    cut->add_option("--w,--weight", cut_weight, "Weight");
    cut->add_option("--S", cut_S, "Region as lo:hi or a file of integers")->required();
    cut->add_option("--A", cut_A, "Primitive set file")->required();
    add_output(cut, o_cut);
    on(cut, [&] {
        std::vector<u64> S;
        if (cut_S.find(':') != std::string::npos) {
            auto [lo, hi] = parse_range(cut_S);
            for (u64 n = lo; n <= hi; ++n) S.push_back(n);
        } else {
            S = read_set_file(cut_S);
        }
        const std::vector<u64> A = read_set_file(cut_A);
        u64 top = 2;
        for (u64 n : S) top = std::max(top, n);
        for (u64 n : A) top = std::max(top, n);
        FactorTable t(top);
        const Weight w(parse_weight(cut_weight), t);
        CutCapacity r = cut_capacity(make_chain(c_cut), w, S, A);
        Table tab;
        tab.columns = {"lhs", "rhs", "holds"};
        tab.add({r.lhs, r.rhs, u64(r.lhs <= r.rhs + 1e-10)});
        emit(tab, o_cut, out);
        return r.lhs <= r.rhs + 1e-10 ? 0 : 2;
    });

    // flowdiv
    OutputOpts o_flow;
    u64 f_n = 2, f_Q = 100000;
    auto* flow = app.add_subcommand("flowdiv", "Inflow bracket and outflow of the weighted von Mangoldt flow");
    flow->add_option("--n", f_n)->required();
    flow->add_option("--trunc-Q", f_Q);
    add_output(flow, o_flow);
    on(flow, [&] {
        FactorTable t(std::max(f_n, f_Q));
        FlowDivergence d = flow_divergence(f_n, f_Q, t);
        Table tab;
        tab.columns = {"n", "outflow", "inflow_lo", "inflow_hi"};
        tab.add({f_n, d.outflow, d.inflow_lo, d.inflow_hi});
        emit(tab, o_flow, out);
        return 0;
    });

    // prim
    auto* prim = app.add_subcommand("prim", "Primitive sets");
    prim->require_subcommand(1);
    OutputOpts o_prim;
    int pg_k = 1;
    u64 pg_X = 100;
    std::string pg_Q, p_in;
    double pr_density = 1.0;
    auto* pgen = prim->add_subcommand("generate", "N_k (optionally over Q) up to X");
    pgen->add_option("--k", pg_k)->required();
    pgen->add_option("--X", pg_X)->required();
    pgen->add_option("--Q", pg_Q, "Comma-separated primes");
    add_output(pgen, o_prim);
    auto set_table = [](const std::vector<u64>& A) {
        Table tab;
        tab.columns = {"n"};
        for (u64 a : A) tab.add({a});
        return tab;
    };
    on(pgen, [&] {
        FactorTable t(std::max<u64>(pg_X, 2));
        std::optional<std::vector<u32>> Q;
        if (!pg_Q.empty()) Q = parse_list<u32>(pg_Q);
        emit(set_table(generate_layer(pg_k, pg_X, Q, t).elements), o_prim, out);
        return 0;
    });
    auto* pval = prim->add_subcommand("validate", "Check primitivity of a set file");
    pval->add_option("--in", p_in)->required();
    add_output(pval, o_prim);
    on(pval, [&] {
        const std::vector<u64> A = read_set_file(p_in);
        const bool ok = is_primitive(A);
        Table tab;
        tab.columns = {"size", "primitive"};
        tab.add({u64(normalize_set(A).size()), u64(ok)});
        emit(tab, o_prim, out);
        return ok ? 0 : 2;
    });
    auto* ppeel = prim->add_subcommand("peel", "Split a set into primitive layers");
    ppeel->add_option("--in", p_in)->required();
    add_output(ppeel, o_prim);
    on(ppeel, [&] {
        Table tab;
        tab.columns = {"layer", "n"};
        const auto layers = peel_layers(read_set_file(p_in));
        for (std::size_t i = 0; i < layers.size(); ++i)
            for (u64 a : layers[i].elements) tab.add({u64(i + 1), a});
        emit(tab, o_prim, out);
        return 0;
    });
    auto* prand = prim->add_subcommand("random", "Random greedy antichain in [2, X]");
    prand->add_option("--X", pg_X)->required();
    prand->add_option("--density", pr_density);
    add_output(prand, o_prim);
    on(prand, [&] {
        emit(set_table(random_antichain(pg_X, pr_density, seed).elements), o_prim, out);
        return 0;
    });

    // simulate
    auto* sim = app.add_subcommand("simulate", "Monte Carlo samplers");
    sim->require_subcommand(1);
    OutputOpts o_sim;
    ChainOpts c_sim;
    u64 s_n0 = 12, s_trials = 0, s_cap = 1000000, s_Q = 10000;
    std::string s_target, s_weight = "nu0";
    auto* sdown = sim->add_subcommand("down", "Downward path, or hitting estimate with --target");
    add_chain(sdown, c_sim);
    sdown->add_option("--n0", s_n0);
    sdown->add_option("--target", s_target, "Comma-separated target set");
    sdown->add_option("--trials", s_trials);
    add_output(sdown, o_sim);
    on(sdown, [&] {
        const ChainId c = make_chain(c_sim);
        FactorTable t(std::max<u64>(s_n0, 2));
        if (!s_target.empty()) {
            const Estimate e = estimate_hit(c, s_n0, parse_list<u64>(s_target), s_trials ? s_trials : 100000, seed, t, threads);
            emit(estimate_record("hit_down", c.name() + " n0=" + std::to_string(s_n0) + " target=" + s_target, e, seed), o_sim, out);
            return 0;
        }
        Table tab;
        tab.columns = {"trial", "states", "end"};
        for (u64 i = 0; i < std::max<u64>(s_trials, 1); ++i) {
            const ChainPath p = sample_down(c, s_n0, seed, t, i);
            tab.add({i, join_states(p), path_end(p.end)});
        }
        emit(tab, o_sim, out);
        return 0;
    });
    auto* sup = sim->add_subcommand("up", "Upward path of the adjoint chain");
    add_chain(sup, c_sim);
    sup->add_option("--w,--weight", s_weight);
    sup->add_option("--n0", s_n0);
    sup->add_option("--cap", s_cap);
    sup->add_option("--trunc-Q", s_Q);
    sup->add_option("--trials", s_trials);
    add_output(sup, o_sim);
    on(sup, [&] {
        const ChainId c = make_chain(c_sim);
        FactorTable t(std::max({s_n0, s_Q, u64(2)}));
        const Weight w(parse_weight(s_weight), t);
        const ParentCache cache = make_parent_cache(s_Q, t);
        Table tab;
        tab.columns = {"trial", "states", "end"};
        for (u64 i = 0; i < std::max<u64>(s_trials, 1); ++i) {
            const ChainPath p = sample_up(c, w, s_n0, s_cap, cache, seed, i);
            tab.add({i, join_states(p), path_end(p.end)});
        }
        emit(tab, o_sim, out);
        return 0;
    });
    double z_s = 2.0;
    u64 z_P = 10000, z_draws = 100000, z_nmax = 10, z_hit = 0;
    auto* szeta = sim->add_subcommand("zeta", "Zeta process: law of Z_s, or visit frequency of --hit n");
    szeta->add_option("--s", z_s);
    szeta->add_option("--P", z_P, "Prime cutoff");
    szeta->add_option("--draws,--trials", z_draws);
    szeta->add_option("--n-max", z_nmax);
    szeta->add_option("--hit", z_hit, "Estimate the probability that the path visits this n");
    add_output(szeta, o_sim);
    on(szeta, [&] {
        if (z_hit) {
            FactorTable t(std::max<u64>(z_hit, 2));
            const Estimate e = zeta_process_hitting(z_hit, z_P, z_draws, seed, t, threads);
            emit(estimate_record("zeta_hit", "n=" + std::to_string(z_hit) + " P=" + std::to_string(z_P), e, seed), o_sim, out);
            return 0;
        }
        const ZetaProcessConfig cfg = make_zeta_config(z_s, z_P);
        const std::vector<u64> counts = zeta_process_counts(cfg, z_nmax, z_draws, seed, threads);
        const double zs = zeta(z_s);
        Table tab;
        tab.columns = {"n", "count", "freq", "zeta_law", "bias_bound"};
        for (u64 n = 1; n <= z_nmax; ++n)
            tab.add({n, counts[n], double(counts[n]) / double(z_draws), std::pow(double(n), -z_s) / zs, cfg.bias_bound});
        emit(tab, o_sim, out);
        return 0;
    });
    u64 w_x = 10000, w_paths = 0, w_start = 1, w_cap = 1000000000;
    double w_s = 0;
    auto* smsrw = sim->add_subcommand("msrw", "Multiplicative simple random walk law, or sample paths with --paths");
    smsrw->add_option("--x", w_x);
    smsrw->add_option("--s", w_s, "Exponent (default 1 - 1/(10 log x))");
    smsrw->add_option("--paths", w_paths, "Number of sample paths to print instead of the law");
    smsrw->add_option("--m", w_start, "Start of the sample paths");
    smsrw->add_option("--cap", w_cap, "Sample paths stop before exceeding this");
    add_output(smsrw, o_sim);
    on(smsrw, [&] {
        const MsrwLaw law = msrw_transitions(w_x, w_s > 0 ? w_s : msrw_default_s(w_x));
        Table tab;
        if (w_paths > 0) {
            tab.columns = {"trial", "states"};
            for (u64 i = 0; i < w_paths; ++i) tab.add({i, join_states(sample_msrw(law, w_start, w_cap, seed, i))});
            emit(tab, o_sim, out);
            return 0;
        }
        tab.columns = {"x", "s", "Z", "log_log_x", "higher_power_mass", "truncated_mass", "support"};
        tab.add({law.x, law.s, law.Z, std::log(std::log(double(law.x))), law.higher_power_mass, law.truncated_mass,
                 u64(law.steps.entries.size())});
        emit(tab, o_sim, out);
        return 0;
    });
    std::string d_x = "1000,10000";
    u64 d_trunc = 10000;
    auto* sdens = sim->add_subcommand("density", "X_j statistics of the upward von Mangoldt chain from 1");
    sdens->add_option("--x-list", d_x);
    sdens->add_option("--trunc-X", d_trunc);
    sdens->add_option("--trials", s_trials);
    add_output(sdens, o_sim);
    on(sdens, [&] {
        FactorTable t(std::max<u64>(d_trunc, 2));
        const DensityStats st = chain_density_stats([](u64) { return true; }, parse_list<u64>(d_x),
                                                    s_trials ? s_trials : 10000, d_trunc, seed, t, {}, threads);
        Table tab;
        tab.columns = {"x", "mean_X", "second_moment_X", "stderr", "exact_mean_X", "trials", "seed"};
        for (std::size_t j = 0; j < st.x_list.size(); ++j)
            tab.add({st.x_list[j], st.mean_X[j], st.second_moment_X[j], st.stderr_[j], st.exact_mean_X[j], st.trials, seed});
        emit(tab, o_sim, out);
        return 0;
    });

    // certify
    auto* cert = app.add_subcommand("certify", "Interval certificates and grid checks");
    cert->require_subcommand(1);
    OutputOpts o_cert;
    int c_depth = 40;
    double c_scale = 1.0;
    u64 c_Pcut = 1000000;
    std::string g_id, g_grid;
    auto* can = cert->add_subcommand("analytic", "Certify the prime-sum inequality on (0, 1/log 3]");
    can->add_option("--max-depth", c_depth)->check(CLI::Range(1, 60));
    can->add_option("--rhs-scale", c_scale, "Scale the right side (mutation testing)");
    can->add_option("--P-cut", c_Pcut);
    can->add_option("--out", o_cert.path);
    on(can, [&] {
        CertifyOptions opt;
        opt.P_cut = c_Pcut;
        opt.rhs_scale = c_scale;
        const Certificate c = certify_analytic(c_depth, opt);
        if (o_cert.path.empty()) {
            write_certificate(out, c);
        } else {
            std::ofstream f(o_cert.path);
            if (!f) throw resource_error("cannot write '" + o_cert.path + "'");
            write_certificate(f, c);
        }
        err << "verdict " << to_string(c.verdict) << " leaves " << c.leaves.size() << '\n';
        return c.verdict == Verdict::proved ? 0 : 2;
    });
    auto* cC = cert->add_subcommand("constantC", "Enclosure of sum_{p>7} log p/((p-1)(p-2))");
    cC->add_option("--P-cut", c_Pcut);
    add_output(cC, o_cert);
    on(cC, [&] {
        const Interval C = enclose_constant_C(c_Pcut);
        Table tab;
        tab.columns = {"P_cut", "C_lo", "C_hi", "width"};
        tab.add({c_Pcut, C.lo, C.hi, C.width()});
        emit(tab, o_cert, out);
        return 0;
    });
    auto* cgrid = cert->add_subcommand("grid", "Floating-point grid check of an inequality");
    cgrid->add_option("--id", g_id, "phi_ineq, eta_monotone, sharp, sharp2, om2, analytic, p_rough")->required();
    cgrid->add_option("--grid", g_grid, "lo:hi:points");
    add_output(cgrid, o_cert);
    auto run_grid = [&](const std::string& id) {
        const GridSpec g = g_grid.empty() ? default_grid(id) : parse_grid(g_grid);
        const GridReport r = grid_check(id, g);
        Table tab;
        tab.columns = r.columns;
        for (const auto& row : r.rows) tab.add(std::vector<Cell>(row.begin(), row.end()));
        emit(tab, o_cert, out);
        err << id << " max_violation " << format_double(r.max_violation) << " violations " << r.violations << '\n';
        return r.violations == 0 ? 0 : 2;
    };
    on(cgrid, [&] { return run_grid(g_id); });

    // figure
    std::string fig_name;
    auto* fig = app.add_subcommand("figure", "Figure data: phi, eta, mangoldt, mangoldt2, primesum2, primesum3");
    fig->add_option("name", fig_name)->required()->check(CLI::IsMember(figure_names()));
    fig->add_option("--grid", g_grid, "lo:hi:points");
    add_output(fig, o_cert);
    on(fig, [&] { return run_grid(figure_inequality(fig_name)); });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }
    if (!action) {
        err << app.help();
        return 1;
    }
    return action();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        return dispatch(args, out, err);
    } catch (const resource_error& e) {
        err << "resource error: " << e.what() << '\n';
        return 3;
    } catch (const std::bad_alloc&) {
        err << "resource error: out of memory\n";
        return 3;
    } catch (const verification_error& e) {
        err << "verification failure: " << e.what() << '\n';
        return 2;
    } catch (const domain_error& e) {
        err << "domain error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace divchain
