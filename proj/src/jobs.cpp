#include "qsi/jobs.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "qsi/corepr.hpp"
#include "qsi/hopf.hpp"
#include "qsi/hull.hpp"
#include "qsi/pvt.hpp"

namespace qsi {

using nlohmann::json;

namespace {

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) throw std::invalid_argument("matrix entries must be integers or strings, got " + v.dump());
    throw std::invalid_argument("expected a scalar, got " + v.dump());
}

Field field_from(const std::string& desc) { return Field::from_descriptor(desc); }

std::string field_descriptor(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_object() && v.contains("root_of_unity")) return "root_of_unity:" + std::to_string(v.at("root_of_unity").get<int>());
    throw std::invalid_argument("bad q descriptor " + v.dump());
}

Mat<Scalar> matrix_from(const json& rows, const Field& f, const std::map<std::string, Scalar>& params, const char* what) {
    if (!rows.is_array() || rows.empty()) throw std::invalid_argument(std::string(what) + " must be a non-empty array of rows");
    int n = static_cast<int>(rows.size());
    Mat<Scalar> m(n, n);
    for (int i = 0; i < n; ++i) {
        const json& r = rows[i];
        if (!r.is_array() || static_cast<int>(r.size()) != n)
            throw std::invalid_argument(std::string(what) + " must be square");
        for (int j = 0; j < n; ++j) m(i, j) = parse_scalar(scalar_text(r[j]), f, params);
    }
    return m;
}

json report_json(const Report& r) {
    return {{"ok", r.ok}, {"checked", r.checked}, {"failures", r.failures}, {"notes", r.notes}};
}

template <class T>
std::vector<std::string> strs(const std::vector<T>& xs) {
    std::vector<std::string> out;
    for (auto& x : xs) out.push_back(x.str());
    return out;
}

std::string field_default(const JobConfig& cfg, const std::string& fallback) { return cfg.q.value_or(fallback); }

// ---------------------------------------------------------------- commands

int cmd_validate(const JobConfig& cfg, json& res, Report& rep) {
    auto m = load_module_spec(cfg.input, cfg.q);
    rep = validate(m);
    res = {{"module", m.name}, {"field", m.field.describe()}, {"dim", m.dim()}, {"A", m.A.str()}, {"B", m.B.str()}};
    return rep.ok ? kPass : kPropertyFail;
}

int cmd_solve(const JobConfig& cfg, json& res, Report& rep) {
    auto m = load_module_spec(cfg.input, cfg.q);
    Report v = validate(m);
    if (!v.ok) {
        rep = v;
        res = {{"module", m.name}};
        return kPropertyFail;
    }
    auto s = solve(m, cfg.order);
    rep = verify_solution(s);
    auto t = trivializing_matrix(s);
    rep.merge(t.report, "Z: ");
    auto names = m.naming();
    res = {{"module", m.name},
           {"field", m.field.describe()},
           {"Y", ymat_str(s.Y, names)},
           {"Z", ymat_str(t.Z, names)},
           {"exact", s.exact},
           {"truncation", s.truncation},
           {"notes", s.notes}};
    return rep.ok ? kPass : kPropertyFail;
}

int cmd_galois_group(const JobConfig& cfg, json& res, Report& rep) {
    auto m = load_module_spec(cfg.input, cfg.q);
    Report v = validate(m);
    if (!v.ok) {
        rep = v;
        return kPropertyFail;
    }
    CoreprOptions opt;
    opt.relation_degree = cfg.degree_bound.value_or(2);
    auto D = corepresentation_hopf(m, opt);
    rep = D.report;
    res["module"] = m.name;
    res["field"] = m.field.describe();
    res["generators"] = D.generator_names();
    res["relations"] = D.relations;
    res["graded_dim_presentation"] = D.graded_presented;
    res["graded_dim_functionals"] = D.graded_functional;
    res["complete"] = D.complete;
    res["antipode_orbit_depth"] = D.orbit_depth;
    json witnesses = json::array(), structure = json::array();
    auto names = m.naming();
    auto gens = D.generator_names();
    for (size_t k = 0; k < D.witnesses.size() && k < gens.size(); ++k)
        witnesses.push_back({{"generator", gens[k]}, {"functional", D.witnesses[k].str(names)}});
    if (D.hopf)
        for (int g = 0; g < D.hopf->algebra()->num_generators(); ++g)
            structure.push_back({{"generator", D.hopf->algebra()->name(g)},
                                 {"coproduct", D.hopf->coproduct_of(g).str()},
                                 {"counit", D.hopf->counit_of(g).str()},
                                 {"antipode", D.hopf->antipode_of(g).str()}});
    res["witnesses"] = witnesses;
    res["hopf_structure"] = structure;
    if (!D.complete) rep.fail("graded dimensions of presentation and functional image disagree");
    return rep.ok ? kPass : kPropertyFail;
}

int cmd_hopf_check(const JobConfig& cfg, json& res, Report& rep) {
    if (cfg.builtin.empty()) throw std::invalid_argument("hopf-check needs --builtin");
    std::string fallback = "indeterminate";
    if (cfg.builtin.rfind("taft", 0) == 0 || cfg.builtin.rfind("Taft", 0) == 0) {
        std::string digits;
        for (char ch : cfg.builtin)
            if (std::isdigit(static_cast<unsigned char>(ch))) digits.push_back(ch);
        fallback = "root_of_unity:" + digits;
    }
    Field f = field_from(field_default(cfg, fallback));
    auto H = builtin_hopf(cfg.builtin, f, parse_scalar(cfg.param_l, f));
    int bound = cfg.degree_bound.value_or(4);
    rep = H->verify_bialgebra();
    rep.merge(H->verify_hopf_axioms(bound));
    json structure = json::array();
    for (int g = 0; g < H->algebra()->num_generators(); ++g)
        structure.push_back({{"generator", H->algebra()->name(g)},
                             {"coproduct", H->coproduct_of(g).str()},
                             {"counit", H->counit_of(g).str()},
                             {"antipode", H->antipode_of(g).str()}});
    res = {{"hopf", H->name()},
           {"field", f.describe()},
           {"degree_bound", bound},
           {"monomials", H->test_monomials(bound).size()},
           {"structure", structure}};
    return rep.ok ? kPass : kPropertyFail;
}

int cmd_torsor(const JobConfig& cfg, json& res, Report& rep) {
    Field f = field_from(field_default(cfg, "indeterminate"));
    auto ca = coaction_R(f);
    int bound = cfg.degree_bound.value_or(4);
    rep.merge(ca.verify(), "coaction: ");
    rep.merge(ca.verify_qsi_equivariance(std::min(bound, 3)), "equivariance: ");
    rep.merge(galois_map_check(ca, bound), "galois map: ");
    json rho = json::object();
    for (int g = 0; g < ca.alg->num_generators(); ++g) rho[ca.alg->name(g)] = ca.rho[g].str();
    res = {{"comodule_algebra", ca.name}, {"hopf", ca.hopf->name()}, {"field", f.describe()},
           {"degree_bound", bound}, {"rho", rho}};
    return rep.ok ? kPass : kPropertyFail;
}

int cmd_taft(const JobConfig& cfg, json& res, Report& rep) {
    if (cfg.N < 2) throw std::invalid_argument("--N must be at least 2");
    Field f = field_from(field_default(cfg, "root_of_unity:" + std::to_string(cfg.N)));
    Scalar lambda = parse_scalar(cfg.lambda, f);
    auto t = taft_torsor(f, cfg.N, lambda);
    const std::string& c = cfg.check;
    if (c != "all" && c != "torsor" && c != "cleft" && c != "trivialize" && c != "hopf")
        throw std::invalid_argument("unknown --check '" + c + "' for taft");
    bool all = c == "all";
    res = {{"N", cfg.N}, {"lambda", lambda.str()}, {"field", f.describe()}, {"check", c},
           {"dimension", t.alg->finite_basis()->size()}};
    if (all || c == "hopf") rep.merge(t.hopf->verify_hopf_axioms(cfg.degree_bound.value_or(4)), "hopf: ");
    if (all || c == "torsor") {
        rep.merge(t.verify(), "comodule algebra: ");
        Report g = galois_map_check(t);
        res["galois_map_rank_checked"] = g.checked;
        rep.merge(g, "galois map: ");
    }
    if (all || c == "cleft" || c == "trivialize") {
        auto phi = generator_renaming(t);
        auto cl = cleft_check(t, phi);
        rep.merge(cl.report, "cleft: ");
        if (cl.inverse) {
            json inv = json::object();
            for (size_t i = 0; i < cl.basis.size(); ++i)
                inv[t.hopf->algebra()->word_str(cl.basis[i])] = (*cl.inverse)[i].str();
            res["convolution_inverse"] = inv;
        }
        if ((all || c == "trivialize") && cl.inverse) {
            auto M = MatrixComodule::taft_standard(t.hopf);
            rep.merge(M.verify(), "comodule: ");
            rep.merge(cleft_trivialize(M, t, phi, cl), "trivialization: ");
            int rank = trace_form_rank(t.alg);
            res["trace_form_rank"] = rank;
            res["semisimple"] = rank == cfg.N * cfg.N;
        }
    }
    return rep.ok ? kPass : kPropertyFail;
}

int cmd_constants(const JobConfig& cfg, json& res, Report& rep) {
    Field f = field_from(field_default(cfg, "indeterminate"));
    if (cfg.window < 1) throw std::invalid_argument("--window must be positive");
    QsiPtr A;
    Window w;
    if (cfg.algebra == "R") {
        A = builtin_R(f);
        w.max_length = 2 * cfg.window;
        w.max_count = {{"Q", cfg.window}, {"Q^-1", cfg.window}, {"tau", cfg.window}};
    } else if (cfg.algebra == "laurent") {
        A = laurent_difference(f);
        w.max_length = cfg.window;
    } else {
        throw std::invalid_argument("unknown --algebra '" + cfg.algebra + "'");
    }
    auto words = window_words(A->algebra(), w);
    auto cs = constants(*A, w);
    bool ground = cs.size() == 1 && cs[0].is_scalar();
    rep.checked = static_cast<int>(words.size());
    if (!ground) rep.fail("constants in the window are not the ground field");
    res = {{"algebra", A->name()}, {"field", f.describe()}, {"window", w.str()}, {"monomials", words.size()},
           {"constants", strs(cs)}, {"equals_ground_field", ground}};
    return rep.ok ? kPass : kPropertyFail;
}

int cmd_normalize(const JobConfig& cfg, json& res, Report& rep) {
    Field f = field_from(field_default(cfg, "indeterminate"));
    auto R = builtin_R(f);
    const PresPtr& p = R->algebra();
    auto E = [&](const std::string& s) { return parse_element(p, s); };
    NCElement a, b, c, d;
    if (!cfg.a.empty()) {
        a = E(cfg.a), b = E(cfg.b.empty() ? "tau" : cfg.b), c = E(cfg.cc.empty() ? "0" : cfg.cc),
        d = E(cfg.d.empty() ? "1" : cfg.d);
    } else {
        Scalar g = parse_scalar(cfg.gamma, f);
        a = E("Q"), b = E("tau") + g * E("Q"), c = NCElement(p), d = E("1");
    }
    if (!cfg.mix.empty()) {
        std::vector<Scalar> k;
        std::stringstream ss(cfg.mix);
        std::string item;
        while (std::getline(ss, item, ',')) k.push_back(parse_scalar(item, f));
        if (k.size() != 4) throw std::invalid_argument("--mix needs four entries p,r,s,u");
        if ((k[0] * k[3] - k[1] * k[2]).is_zero()) throw std::invalid_argument("--mix matrix is singular");
        // columns (a, c), (b, d) times [[p, r], [s, u]]
        NCElement a2 = k[0] * a + k[2] * b, b2 = k[1] * a + k[3] * b;
        NCElement c2 = k[0] * c + k[2] * d, d2 = k[1] * c + k[3] * d;
        a = a2, b = b2, c = c2, d = d2;
    }
    res["input"] = {{"a", a.str()}, {"b", b.str()}, {"c", c.str()}, {"d", d.str()}};
    auto n = normalize_fundamental_system(*R, a, b, c, d);
    rep = n.report;
    res["field"] = f.describe();
    res["a"] = n.a.str();
    res["b"] = n.b.str();
    res["f"] = n.f.str();
    res["g"] = n.g.str();
    return rep.ok ? kPass : kPropertyFail;
}

int cmd_hull(const JobConfig& cfg, json& res, Report& rep) {
    Field f = field_from(field_default(cfg, "2"));
    const std::string& c = cfg.check;
    if (c != "all" && c != "stability" && c != "morphism" && c != "expand")
        throw std::invalid_argument("unknown --check '" + c + "' for hull");
    bool all = c == "all";
    int D = cfg.order;
    res = {{"field", f.describe()}, {"order", D}, {"check", c}};
    if (all || c == "stability") {
        Scalar cst = parse_scalar(cfg.c, f);
        rep.merge(hull_stability_check(f, cst, D), "stability: ");
    }
    RatFunc1 a = parse_ratfunc(cfg.element.empty() ? "t" : cfg.element, f);
    if (all || c == "morphism") {
        RatFunc1 b = parse_ratfunc(cfg.element2.empty() ? "1/(t+1)" : cfg.element2, f);
        rep.merge(verify_qsi_morphism(f, a, b, D), "morphism: ");
    }
    if (all || c == "expand") {
        res["element"] = a.str();
        res["image"] = universal_hopf(f, a, D).str();
        ++rep.checked;
    }
    return rep.ok ? kPass : kPropertyFail;
}

int cmd_simplicity(const JobConfig& cfg, json& res, Report& rep) {
    Field f = field_from(field_default(cfg, "indeterminate"));
    auto R = builtin_R(f);
    const PresPtr& p = R->algebra();
    if (cfg.element.empty() && cfg.count <= 0) throw std::invalid_argument("simplicity needs --element or --count");
    res["field"] = f.describe();
    if (!cfg.element.empty()) {
        NCElement x = parse_element(p, cfg.element);
        if (x.is_zero()) throw std::invalid_argument("the zero element generates the zero ideal");
        auto cert = simplicity_reduce(*R, x);
        bool ok = replay_certificate(*R, x, cert);
        ++rep.checked;
        if (!ok) rep.fail("certificate replay does not end at 1");
        json moves = json::array();
        for (size_t i = 0; i < cert.moves.size(); ++i)
            moves.push_back({{"move", cert.moves[i].str()}, {"result", cert.trail[i].str()}});
        res["element"] = x.str();
        res["certificate_length"] = cert.moves.size();
        res["certificate"] = moves;
        res["replay_verified"] = ok;
    }
    if (cfg.count > 0) {
        std::mt19937 rng(static_cast<std::mt19937::result_type>(cfg.seed));
        int deg = cfg.degree_bound.value_or(3), verified = 0;
        size_t longest = 0;
        for (int k = 0; k < cfg.count; ++k) {
            NCElement x = random_R_element(p, rng, deg);
            auto cert = simplicity_reduce(*R, x);
            ++rep.checked;
            longest = std::max(longest, cert.moves.size());
            if (replay_certificate(*R, x, cert)) ++verified;
            else rep.fail("certificate for " + x.str() + " does not replay");
        }
        res["random_elements"] = cfg.count;
        res["degree_bound"] = deg;
        res["replay_verified_count"] = verified;
        res["longest_certificate"] = longest;
    }
    return rep.ok ? kPass : kPropertyFail;
}

void render(std::ostringstream& os, const json& j, int indent) {
    std::string pad(indent, ' ');
    for (auto it = j.begin(); it != j.end(); ++it) {
        const json& v = it.value();
        if (v.is_object()) {
            os << pad << it.key() << ":\n";
            render(os, v, indent + 2);
        } else if (v.is_array() && std::any_of(v.begin(), v.end(), [](const json& e) { return e.is_structured(); })) {
            os << pad << it.key() << ":\n";
            for (auto& e : v) {
                if (e.is_object()) {
                    std::ostringstream inner;
                    render(inner, e, indent + 4);
                    std::string s = inner.str();
                    s.replace(indent, 2, "- ");
                    os << s;
                } else {
                    os << pad << "  - " << e.dump() << "\n";
                }
            }
        } else if (v.is_array()) {
            os << pad << it.key() << ": [";
            bool first = true;
            for (auto& e : v) {
                os << (first ? "" : ", ") << (e.is_string() ? e.get<std::string>() : e.dump());
                first = false;
            }
            os << "]\n";
        } else {
            os << pad << it.key() << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
        }
    }
}

}  // namespace

json JobConfig::to_json() const {
    json j = {{"command", command}, {"q", q ? json(*q) : json(nullptr)}, {"order", order},
              {"degree_bound", degree_bound ? json(*degree_bound) : json(nullptr)}, {"seed", seed}};
    if (!input.empty()) j["input"] = input;
    if (!json_out.empty()) j["json_out"] = json_out;
    if (command == "hopf-check") j["builtin"] = builtin, j["l"] = param_l;
    if (command == "taft") j["N"] = N, j["lambda"] = lambda, j["check"] = check;
    if (command == "hull") j["check"] = check, j["element"] = element, j["element2"] = element2, j["c"] = c;
    if (command == "simplicity") j["element"] = element, j["count"] = count;
    if (command == "constants") j["algebra"] = algebra, j["window"] = window;
    if (command == "normalize") j["gamma"] = gamma, j["a"] = a, j["b"] = b, j["c"] = cc, j["d"] = d, j["mix"] = mix;
    return j;
}

std::string JobResult::text() const { return render_text(json); }

std::string render_text(const json& j) {
    std::ostringstream os;
    render(os, j, 0);
    return os.str();
}

QsiModuleSpec module_spec_from_json(const json& doc, const std::optional<std::string>& q_override) {
    if (!doc.is_object()) throw std::invalid_argument("module spec must be a JSON object");
    for (const char* k : {"A", "B"})
        if (!doc.contains(k)) throw std::invalid_argument(std::string("module spec is missing \"") + k + "\"");
    Field f = field_from(q_override ? *q_override : field_descriptor(doc.value("q", json("indeterminate"))));
    std::map<std::string, Scalar> params;
    if (doc.contains("params"))
        for (auto it = doc.at("params").begin(); it != doc.at("params").end(); ++it)
            params[it.key()] = parse_scalar(scalar_text(it.value()), f, params);
    Mat<Scalar> A = matrix_from(doc.at("A"), f, params, "A"), B = matrix_from(doc.at("B"), f, params, "B");
    if (A.rows() != B.rows()) throw std::invalid_argument("A and B have different sizes");
    std::string conv = doc.value("convention", std::string("module"));
    Convention c;
    if (conv == "module") c = Convention::Module;
    else if (conv == "difference-system") c = Convention::DifferenceSystem;
    else throw std::invalid_argument("unknown convention '" + conv + "'");
    auto m = QsiModuleSpec::make(f, A, B, c, params);
    m.name = doc.value("name", std::string("module"));
    return m;
}

QsiModuleSpec load_module_spec(const std::string& path, const std::optional<std::string>& q_override) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read '" + path + "'");
    json doc = json::parse(in);  // throws parse_error on malformed input
    return module_spec_from_json(doc, q_override);
}

JobResult run_job(const JobConfig& cfg) {
    JobResult r;
    json res = json::object();
    Report rep;
    try {
        const std::string& c = cfg.command;
        if (cfg.order < 1) throw std::invalid_argument("--order must be positive");
        if (cfg.degree_bound && *cfg.degree_bound < 1) throw std::invalid_argument("--degree-bound must be positive");
        if (c == "validate") r.exit_code = cmd_validate(cfg, res, rep);
        else if (c == "solve") r.exit_code = cmd_solve(cfg, res, rep);
        else if (c == "galois-group") r.exit_code = cmd_galois_group(cfg, res, rep);
        else if (c == "hopf-check") r.exit_code = cmd_hopf_check(cfg, res, rep);
        else if (c == "torsor") r.exit_code = cmd_torsor(cfg, res, rep);
        else if (c == "taft") r.exit_code = cmd_taft(cfg, res, rep);
        else if (c == "constants") r.exit_code = cmd_constants(cfg, res, rep);
        else if (c == "normalize") r.exit_code = cmd_normalize(cfg, res, rep);
        else if (c == "hull") r.exit_code = cmd_hull(cfg, res, rep);
        else if (c == "simplicity") r.exit_code = cmd_simplicity(cfg, res, rep);
        else throw std::invalid_argument("unknown command '" + c + "'");
    } catch (const Refusal& e) {
        r.exit_code = kRefusal;
        rep = Report{};
        rep.fail(std::string("refused: ") + e.what());
    } catch (const std::exception& e) {
        r.exit_code = kInputError;
        rep = Report{};
        rep.fail(std::string("input error: ") + e.what());
    }
    static const char* status[] = {"pass", "input-error", "fail", "refused"};
    r.json = {{"command", cfg.command}, {"status", status[r.exit_code]}, {"exit_code", r.exit_code},
              {"config", cfg.to_json()}, {"result", res}, {"report", report_json(rep)}};
    return r;
}

void write_json_twin(const JobConfig& cfg, const JobResult& r) {
    std::string path = cfg.json_out;
    if (path.empty() && cfg.command == "solve" && !cfg.input.empty()) {
        std::filesystem::path in(cfg.input);
        path = in.stem().string() + ".solve.json";
    }
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << r.json.dump(2) << "\n";
}

}  // namespace qsi
