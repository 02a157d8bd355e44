#include <doctest.h>

#include <set>
#include <vector>

#include "lambang/harness.hpp"

using namespace lambang;

namespace {

// Independent generator: raw named terms over the pool, canonicalized to de Bruijn form.
struct Raw {
    enum K { V, A, P, E, Bg, D } k;
    int name = 0;
    std::vector<Raw> kids;
};

std::vector<std::vector<Raw>> raw_terms(int max, int pool, bool bang) {
    std::vector<std::vector<Raw>> by(max + 1);
    for (int n = 1; n <= max; ++n) {
        if (n == 1)
            for (int x = 0; x < pool; ++x) by[1].push_back({Raw::V, x, {}});
        if (n < 2) continue;
        for (auto& b : by[n - 1]) {
            for (int x = 0; x < pool; ++x) by[n].push_back({Raw::A, x, {b}});
            if (bang) {
                by[n].push_back({Raw::Bg, 0, {b}});
                by[n].push_back({Raw::D, 0, {b}});
            }
        }
        for (int i = 1; i + 1 < n; ++i)
            for (auto& l : by[i])
                for (auto& r : by[n - 1 - i]) {
                    by[n].push_back({Raw::P, 0, {l, r}});
                    for (int x = 0; x < pool; ++x) by[n].push_back({Raw::E, x, {l, r}});
                }
    }
    return by;
}

std::string db(const Raw& t, std::vector<int>& env) {
    auto name = [](int x) { return std::string(1, char('a' + x)); };
    switch (t.k) {
    case Raw::V:
        for (int i = int(env.size()) - 1; i >= 0; --i)
            if (env[i] == t.name) return "#" + std::to_string(env.size() - 1 - i);
        return name(t.name);
    case Raw::A: {
        env.push_back(t.name);
        auto s = "L(" + db(t.kids[0], env) + ")";
        env.pop_back();
        return s;
    }
    case Raw::P: return "P(" + db(t.kids[0], env) + "," + db(t.kids[1], env) + ")";
    case Raw::E: {
        auto arg = db(t.kids[1], env);
        env.push_back(t.name);
        auto body = db(t.kids[0], env);
        env.pop_back();
        return "E(" + body + "," + arg + ")";
    }
    case Raw::Bg: return "B(" + db(t.kids[0], env) + ")";
    case Raw::D: return "D(" + db(t.kids[0], env) + ")";
    }
    return "";
}

std::size_t oracle_count(int max, int pool, bool bang, bool closed = false) {
    std::set<std::string> seen;
    auto by = raw_terms(max, pool, bang);
    for (auto& bucket : by)
        for (auto& t : bucket) {
            std::vector<int> env;
            auto k = db(t, env);
            if (closed && k.find_first_of("abc") != std::string::npos) continue;
            seen.insert(k);
        }
    return seen.size();
}

std::vector<std::string> pool_of(int n) {
    std::vector<std::string> p;
    for (int i = 0; i < n; ++i) p.push_back(std::string(1, "xyz"[i]));
    return p;
}

}  // namespace

TEST_CASE("enumeration of the smallest bounds") {
    auto one = enumerate({1, {"x"}, Calculus::LambdaES, false});
    REQUIRE(one.size() == 1);
    CHECK(print(one[0]) == "x");
    CHECK(enumerate({1, {"x"}, Calculus::LambdaES, true}).empty());

    // every constructor counts one node, variables included
    auto two = enumerate({2, {"x"}, Calculus::LambdaES, false});
    REQUIRE(two.size() == 2);
    std::set<std::string> keys;
    for (auto& t : two) keys.insert(alpha_key(t));
    for (const char* s : {"x", "\\x.x"}) CHECK(keys.count(alpha_key(parse(s, Calculus::LambdaES))) == 1);

    auto three = enumerate({3, {"x"}, Calculus::LambdaES, false});
    keys.clear();
    for (auto& t : three) keys.insert(alpha_key(t));
    CHECK(three.size() == 5);
    for (const char* s : {"x", "\\x.x", "\\x.\\x.x", "x x", "x[x := x]"})
        CHECK(keys.count(alpha_key(parse(s, Calculus::LambdaES))) == 1);
}

TEST_CASE("enumeration counts agree with an independent generator") {
    for (int pool = 1; pool <= 3; ++pool)
        for (int max = 1; max <= 6; ++max) {
            CAPTURE(pool);
            CAPTURE(max);
            auto terms = enumerate({max, pool_of(pool), Calculus::LambdaES, false});
            CHECK(terms.size() == oracle_count(max, pool, false));
            std::set<std::string> keys;
            for (auto& t : terms) keys.insert(alpha_key(t));
            CHECK(keys.size() == terms.size());
        }
    for (int max = 1; max <= 6; ++max) {
        CAPTURE(max);
        CHECK(enumerate({max, pool_of(2), Calculus::Bang, false}).size() == oracle_count(max, 2, true));
        CHECK(enumerate({max, pool_of(2), Calculus::Bang, true}).size() == oracle_count(max, 2, true, true));
    }
}

TEST_CASE("enumeration is ordered by size and deterministic") {
    EnumSpec spec{4, {"x", "y"}, Calculus::Bang, false};
    auto a = enumerate(spec);
    auto b = enumerate(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(print(a[i]) == print(b[i]));
    for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1]->nodes <= a[i]->nodes);
}

TEST_CASE("theorem ids") {
    CHECK(theorem_ids().size() == 13);
    CHECK(known_theorem("completeness-N"));
    CHECK_FALSE(known_theorem("soundness-Q"));
}

TEST_CASE("verify at a small bound") {
    VerifyOptions opt;
    opt.max_size = 4;
    opt.bang_max_size = 4;
    for (auto& id : theorem_ids()) {
        if (id == "translation-V") continue;
        CAPTURE(id);
        auto r = verify(id, opt);
        CHECK(r.pass());
        CHECK(r.tested > 0);
    }
}

TEST_CASE("terms that run out of fuel are skipped, not failed") {
    VerifyOptions opt;
    opt.max_size = 6;
    opt.fuel = 1;
    auto r = verify("completeness-N", opt);
    CHECK(r.pass());
    CHECK(r.skipped > 0);
    CHECK(r.tested + r.skipped == 3650);
}

TEST_CASE("report formats") {
    VerifyOptions opt;
    opt.max_size = 3;
    auto r = verify("census", opt);
    auto j = report_json(r);
    CHECK(j.at("theorem") == "census");
    CHECK(j.at("tested").get<long>() == r.tested);
    CHECK(j.at("failed").is_array());
    CHECK(j.at("skipped").get<long>() == r.skipped);
    CHECK(j.at("pass").get<bool>());
    CHECK(report_text(r).find("census") != std::string::npos);
}
