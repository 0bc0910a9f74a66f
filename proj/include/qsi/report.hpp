#pragma once
// Pass/fail report shared by the checking operations.

#include <stdexcept>
#include <string>
#include <vector>

namespace qsi {

struct Report {
    bool ok = true;
    int checked = 0;
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    void fail(const std::string& what) {
        ok = false;
        if (failures.size() < 20) failures.push_back(what);
    }
    void note(const std::string& what) { notes.push_back(what); }
    void merge(const Report& o, const std::string& prefix = "") {
        if (!o.ok) ok = false;
        checked += o.checked;
        for (auto& f : o.failures)
            if (failures.size() < 20) failures.push_back(prefix + f);
        for (auto& n : o.notes) notes.push_back(prefix + n);
    }
};

// A request outside the supported hypotheses (e.g. a root-of-unity q where [n]_q! vanishes).
struct Refusal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qsi
