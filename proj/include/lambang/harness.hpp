#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lambang/syntax.hpp"

namespace lambang {

struct EnumSpec {
    int max_constructors = 6;
    std::vector<std::string> var_pool{"x", "y", "z"};
    Calculus calculus = Calculus::LambdaES;
    bool closed_only = false;
};

// Every term with at most max_constructors nodes over the pool, once per alpha class,
// ordered by size and then by construction order.
std::vector<Term> enumerate(const EnumSpec& spec);

struct Failure {
    std::string term;
    std::string expected;
    std::string got;
};

struct TheoremReport {
    std::string theorem;
    long tested = 0;
    long skipped = 0;
    std::vector<std::string> skip_notes;  // first few skipped terms with the reason
    long failed = 0;
    std::vector<Failure> failures;  // the first few, verbatim
    bool pass() const { return failed == 0; }
};

struct VerifyOptions {
    int max_size = 6;   // λES bound; bang terms use bang_max_size
    int bang_max_size = 6;
    int fuel = 50;
    int path_cap = 10000;
    std::size_t max_failures = 20;  // failures kept verbatim; the count is always exact
};

const std::vector<std::string>& theorem_ids();
bool known_theorem(const std::string& id);

TheoremReport verify(const std::string& theorem, const VerifyOptions& opt = {});

std::string report_text(const TheoremReport& r);
nlohmann::json report_json(const TheoremReport& r);

}  // namespace lambang
