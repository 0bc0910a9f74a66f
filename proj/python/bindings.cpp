// Python access to the batch commands: a config dict in, a JSON report out.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsi/jobs.hpp"

namespace py = pybind11;

namespace {

qsi::JobConfig config_from(const std::string& command, const py::dict& kw) {
    qsi::JobConfig c;
    c.command = command;
    for (auto item : kw) {
        auto key = py::cast<std::string>(item.first);
        py::handle v = item.second;
        if (v.is_none()) continue;
        auto str = [&] { return py::cast<std::string>(py::str(v)); };
        if (key == "input" || key == "spec") c.input = str();
        else if (key == "q") c.q = str();
        else if (key == "order") c.order = py::cast<int>(v);
        else if (key == "degree_bound") c.degree_bound = py::cast<int>(v);
        else if (key == "seed") c.seed = py::cast<std::uint64_t>(v);
        else if (key == "json_out") c.json_out = str();
        else if (key == "builtin") c.builtin = str();
        else if (key == "l") c.param_l = str();
        else if (key == "N") c.N = py::cast<int>(v);
        else if (key == "lambda_") c.lambda = str();
        else if (key == "check") c.check = str();
        else if (key == "element") c.element = str();
        else if (key == "element2") c.element2 = str();
        else if (key == "c") c.c = str();
        else if (key == "count") c.count = py::cast<int>(v);
        else if (key == "window") c.window = py::cast<int>(v);
        else if (key == "algebra") c.algebra = str();
        else if (key == "gamma") c.gamma = str();
        else if (key == "a") c.a = str();
        else if (key == "b") c.b = str();
        else if (key == "cc") c.cc = str();
        else if (key == "d") c.d = str();
        else if (key == "mix") c.mix = str();
        else throw py::key_error("unknown option '" + key + "'");
    }
    return c;
}

}  // namespace

PYBIND11_MODULE(_qsi, m) {
    m.doc() = "Exact quantum difference-differential Galois computations";
    m.attr("PASS") = static_cast<int>(qsi::kPass);
    m.attr("INPUT_ERROR") = static_cast<int>(qsi::kInputError);
    m.attr("PROPERTY_FAIL") = static_cast<int>(qsi::kPropertyFail);
    m.attr("REFUSAL") = static_cast<int>(qsi::kRefusal);
    m.def(
        "run_json",
        [](const std::string& command, const py::kwargs& kw) {
            auto cfg = config_from(command, kw);
            qsi::JobResult r;
            {
                py::gil_scoped_release release;
                r = qsi::run_job(cfg);
            }
            qsi::write_json_twin(cfg, r);
            return py::make_tuple(r.exit_code, r.json.dump());
        },
        py::arg("command"), "Runs a command; returns (exit_code, JSON report text).");
    m.def(
        "render_text", [](const std::string& report) { return qsi::render_text(nlohmann::json::parse(report)); },
        py::arg("report"), "Text rendering of a JSON report.");
}
