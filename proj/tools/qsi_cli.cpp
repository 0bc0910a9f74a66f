// qsi: batch front end for module specs, solvers and structure checks.
// Exit codes: 0 pass, 2 property fails, 3 refusal, 1 input error.

#include <CLI11.hpp>

#include <iostream>

#include "qsi/jobs.hpp"

int main(int argc, char** argv) {
    qsi::JobConfig cfg;
    CLI::App app{"Quantum difference-differential Galois computations"};
    app.require_subcommand(1);

    std::string q;
    int degree_bound = 0;
    bool json_stdout = false;
    app.add_option("--q", q, "field descriptor: p/r, indeterminate, root_of_unity:N");
    app.add_option("--order", cfg.order, "series truncation order D");
    app.add_option("--degree-bound,--degree", degree_bound, "degree bound for relations, axioms or windows");
    app.add_option("--seed", cfg.seed, "seed for randomized checks");
    app.add_option("--json-out", cfg.json_out, "write the machine-readable report to PATH");
    app.add_flag("--json", json_stdout, "print the JSON report instead of text");

    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };
    auto* validate = sub("validate", "check a module spec");
    validate->add_option("spec", cfg.input, "module-spec JSON")->required();
    auto* solve = sub("solve", "fundamental system Y and trivializing matrix Z");
    solve->add_option("spec", cfg.input, "module-spec JSON")->required();
    auto* gg = sub("galois-group", "co-representation Hopf algebra of a module");
    gg->add_option("spec", cfg.input, "module-spec JSON")->required();
    auto* hc = sub("hopf-check", "Hopf axioms of a built-in algebra");
    hc->add_option("--builtin", cfg.builtin, "Hq, GHq, frakH, taftN, galois_rank3, galois_param")->required();
    hc->add_option("--l", cfg.param_l, "parameter of galois_param");
    sub("torsor", "coaction of the Hopf algebra GHq on R");
    auto* taft = sub("taft", "Taft torsors R_lambda");
    taft->add_option("--N", cfg.N, "order of the root of unity");
    taft->add_option("--lambda", cfg.lambda, "value of t'^N");
    taft->add_option("--check", cfg.check, "torsor, cleft, trivialize, hopf or all");
    auto* cs = sub("constants", "constants of R or C[Q, Q^-1] in a degree window");
    cs->add_option("--algebra", cfg.algebra, "R or laurent");
    cs->add_option("--window", cfg.window, "degree bound per generator");
    auto* nz = sub("normalize", "normalize a fundamental system (a, b, c, d) of R");
    nz->add_option("--gamma", cfg.gamma, "input (Q, tau + gamma Q, 0, 1)");
    nz->add_option("--a", cfg.a);
    nz->add_option("--b", cfg.b);
    nz->add_option("--c", cfg.cc);
    nz->add_option("--d", cfg.d);
    nz->add_option("--mix", cfg.mix, "constant column mixing p,r,s,u");
    auto* hull = sub("hull", "universal Hopf morphism of C(t) and its Galois hull");
    hull->add_option("--check", cfg.check, "stability, morphism, expand or all");
    hull->add_option("--element", cfg.element, "rational function in t");
    hull->add_option("--element2", cfg.element2, "second rational function for morphism");
    hull->add_option("--c", cfg.c, "constant c of the generator (c + tQ + X)^-1");
    auto* simp = sub("simplicity", "certificate that a nonzero element generates R");
    simp->add_option("--element", cfg.element, "element of R in Q, Q^-1, tau");
    simp->add_option("--count", cfg.count, "number of seeded random elements");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : qsi::kInputError;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    if (!q.empty()) cfg.q = q;
    if (degree_bound > 0) cfg.degree_bound = degree_bound;
    else if (app.count("--degree-bound")) cfg.degree_bound = degree_bound;

    qsi::JobResult r = qsi::run_job(cfg);
    if (json_stdout) std::cout << r.json.dump(2) << "\n";
    else std::cout << r.text();
    try {
        qsi::write_json_twin(cfg, r);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return qsi::kInputError;
    }
    return r.exit_code;
}
