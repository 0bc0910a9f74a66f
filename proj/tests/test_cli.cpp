#include "doctest.h"
#include "qsi/jobs.hpp"

#include <filesystem>
#include <fstream>

using namespace qsi;

namespace {

std::string data(const std::string& name) { return std::string(QSI_DATA_DIR) + "/" + name; }

JobConfig job(const std::string& command, const std::string& input = "") {
    JobConfig c;
    c.command = command;
    c.input = input.empty() ? "" : data(input);
    return c;
}

// Every scalar leaf of the JSON report appears as "key: value" in the text rendering.
void check_text_agrees(const nlohmann::json& j, const std::string& text) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& v = it.value();
        if (v.is_object()) {
            check_text_agrees(v, text);
        } else if (!v.is_array()) {
            std::string shown = v.is_string() ? v.get<std::string>() : v.dump();
            CHECK_MESSAGE(text.find(it.key() + ": " + shown) != std::string::npos, it.key());
        }
    }
}

}  // namespace

TEST_CASE("validate exit codes") {
    CHECK(run_job(job("validate", "first_example.json")).exit_code == kPass);
    CHECK(run_job(job("validate", "rank3_module.json")).exit_code == kPass);
    auto bad = run_job(job("validate", "identity_invalid.json"));
    CHECK(bad.exit_code == kPropertyFail);
    CHECK(bad.json["status"] == "fail");
    auto trunc = run_job(job("validate", "truncated.json"));
    CHECK(trunc.exit_code == kInputError);
    CHECK(trunc.json["report"]["failures"][0].get<std::string>().find("input error") == 0);
    CHECK(run_job(job("validate", "missing.json")).exit_code == kInputError);
    auto unknown = run_job(job("frobnicate"));
    CHECK(unknown.exit_code == kInputError);
}

TEST_CASE("module spec parsing") {
    nlohmann::json doc = {{"q", "indeterminate"}, {"convention", "difference-system"},
                          {"A", {{"q", 1, 0}, {0, "q", 0}, {0, 0, 1}}}, {"B", {{0, 0, 1}, {0, 0, 0}, {0, 0, 0}}}};
    auto sys = module_spec_from_json(doc);
    auto mod = load_module_spec(data("rank3_module.json"));
    CHECK(sys.A == mod.A);
    CHECK(sys.B == mod.B);
    auto two = module_spec_from_json(doc, std::string("2"));
    CHECK(two.A(0, 0) == Scalar(2));
    doc["q"] = {{"root_of_unity", 3}};
    CHECK(module_spec_from_json(doc).field.root_of_unity_order() == 3);
    doc["convention"] = "sideways";
    CHECK_THROWS_AS(module_spec_from_json(doc), std::invalid_argument);
    CHECK_THROWS_AS(module_spec_from_json(nlohmann::json{{"A", {{1}}}}), std::invalid_argument);
    CHECK_THROWS_AS(module_spec_from_json(nlohmann::json{{"A", {{1, 0}}}, {"B", {{0}}}}), std::invalid_argument);
    CHECK_THROWS_AS(module_spec_from_json(nlohmann::json{{"A", {{1.5}}}, {"B", {{0}}}}), std::invalid_argument);
}

TEST_CASE("solve prints the fundamental system") {
    auto r = run_job(job("solve", "rank3_system.json"));
    CHECK(r.exit_code == kPass);
    CHECK(r.json["result"]["Y"] == "[[Q, (1/q)*Z*Q, X], [0, Q, 0], [0, 0, 1]]");
    auto d = run_job(job("solve", "diagonal.json"));
    CHECK(d.exit_code == kPass);
    CHECK(d.json["result"]["Y"] == "[[Q^2, 0], [0, Q^-1]]");
    auto root = job("solve", "first_example.json");
    root.q = "root_of_unity:3";
    CHECK(run_job(root).exit_code == kPass);  // B nilpotent of index 2 <= order
    nlohmann::json swap = {{"q", "-1"}, {"A", {{1, 0}, {0, -1}}}, {"B", {{0, 1}, {1, 0}}}};
    auto path = std::filesystem::temp_directory_path() / "qsi_swap.json";
    std::ofstream(path) << swap.dump();
    auto s = job("solve");
    s.input = path.string();
    auto rs = run_job(s);
    CHECK(rs.exit_code == kRefusal);
    CHECK(rs.json["status"] == "refused");
}

TEST_CASE("galois-group presentations") {
    auto r = run_job(job("galois-group", "first_example.json"));
    CHECK(r.exit_code == kPass);
    CHECK(r.json["result"]["generators"] == std::vector<std::string>{"e", "e^-1", "g"});
    CHECK(r.json["result"]["complete"] == true);
    auto t = run_job(job("galois-group", "trivial.json"));
    CHECK(t.exit_code == kPass);
    CHECK(t.json["result"]["generators"].empty());
    auto root = job("galois-group", "first_example.json");
    root.q = "root_of_unity:3";
    CHECK(run_job(root).exit_code == kRefusal);
}

TEST_CASE("remaining commands") {
    auto h = job("hopf-check");
    h.builtin = "GHq";
    h.degree_bound = 4;
    CHECK(run_job(h).exit_code == kPass);
    h.builtin = "nonsense";
    CHECK(run_job(h).exit_code == kInputError);

    auto tf = job("taft");
    tf.N = 2;
    tf.lambda = "1";
    tf.check = "torsor";
    auto rt = run_job(tf);
    CHECK(rt.exit_code == kPass);
    CHECK(rt.json["result"]["galois_map_rank_checked"] == 16);
    tf.q = "2";
    CHECK(run_job(tf).exit_code == kInputError);

    auto simp = job("simplicity");
    simp.element = "1+Q";
    auto rs = run_job(simp);
    CHECK(rs.exit_code == kPass);
    CHECK(rs.json["result"]["certificate_length"] == 1);
    simp.element = "0";
    CHECK(run_job(simp).exit_code == kInputError);

    auto cs = job("constants");
    CHECK(run_job(cs).exit_code == kPass);
    cs.algebra = "laurent";
    cs.q = "-1";
    CHECK(run_job(cs).exit_code == kPropertyFail);

    auto nz = job("normalize");
    nz.gamma = "1/2";
    auto rn = run_job(nz);
    CHECK(rn.exit_code == kPass);
    CHECK(rn.json["result"]["g"] == "-1/2");
    nz.q = "1";
    CHECK(run_job(nz).exit_code == kRefusal);

    auto hull = job("hull");
    hull.order = 4;
    CHECK(run_job(hull).exit_code == kPass);
    hull.q = "root_of_unity:4";
    CHECK(run_job(hull).exit_code == kRefusal);

    CHECK(run_job(job("torsor")).exit_code == kPass);
}

TEST_CASE("reports are deterministic and agree with the text rendering") {
    auto a = job("simplicity");
    a.count = 20;
    a.q = "2";
    a.seed = 7;
    auto r1 = run_job(a), r2 = run_job(a);
    CHECK(r1.json == r2.json);
    CHECK(r1.json["config"]["seed"] == 7);
    for (auto& r : {r1, run_job(job("solve", "rank2_parameter.json")), run_job(job("galois-group", "rank3_module.json"))})
        check_text_agrees(r.json, r.text());
}

TEST_CASE("JSON twin") {
    auto dir = std::filesystem::temp_directory_path();
    auto s = job("solve", "first_example.json");
    s.json_out = (dir / "qsi_twin.json").string();
    auto r = run_job(s);
    write_json_twin(s, r);
    std::ifstream in(s.json_out);
    auto back = nlohmann::json::parse(in);
    CHECK(back == r.json);
}
