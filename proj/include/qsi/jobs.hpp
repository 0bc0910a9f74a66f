#pragma once
// Batch commands shared by the command-line tool, the acceptance runner and
// the Python bindings. Each command returns a JSON report plus an exit code:
// 0 pass, 2 property fails, 3 refusal, 1 input error.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qsi/qsimod.hpp"

namespace qsi {

enum ExitCode : int { kPass = 0, kInputError = 1, kPropertyFail = 2, kRefusal = 3 };

struct JobConfig {
    std::string command;
    std::string input;                 // module-spec JSON path
    std::optional<std::string> q;      // field descriptor override: "2", "3/2", "indeterminate", "root_of_unity:3"
    int order = 8;                     // truncation D
    std::optional<int> degree_bound;   // command-specific default when unset
    std::uint64_t seed = 0;
    std::string json_out;
    // command-specific
    std::string builtin;               // hopf-check: Hq, GHq, frakH, taft2, galois_rank3, galois_param
    std::string param_l = "2";         // galois_param parameter
    int N = 2;                         // taft
    std::string lambda = "1";          // taft
    std::string check = "all";         // taft: torsor | cleft | trivialize | hopf | all; hull: stability | morphism | deformation | expand | all
    std::string element;               // simplicity: element of R; hull: rational function in t
    std::string element2;              // hull morphism: second rational function
    std::string c = "1";               // hull constant
    int count = 0;                     // simplicity: random elements
    int window = 4;                    // constants: degree bound per generator
    std::string algebra = "R";         // constants: R | laurent
    std::string gamma = "1";           // normalize: (Q, tau + gamma Q, 0, 1)
    std::string a, b, cc, d;           // normalize: explicit (a, b, c, d) overriding gamma
    std::string mix;                   // normalize: "p,r,s,u" column mixing matrix entries

    nlohmann::json to_json() const;
};

struct JobResult {
    int exit_code = kPass;
    nlohmann::json json;
    std::string text() const;  // human-readable rendering of json, field for field
};

// Parses a module-spec document; q_override replaces the document's "q".
QsiModuleSpec module_spec_from_json(const nlohmann::json& doc, const std::optional<std::string>& q_override = {});
QsiModuleSpec load_module_spec(const std::string& path, const std::optional<std::string>& q_override = {});

JobResult run_job(const JobConfig& cfg);
// Writes the JSON twin when cfg.json_out is set (solve: defaults next to the input).
void write_json_twin(const JobConfig& cfg, const JobResult& r);

std::string render_text(const nlohmann::json& j);

}  // namespace qsi
