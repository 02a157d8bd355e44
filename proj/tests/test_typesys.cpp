#include <doctest.h>

#include <map>

#include "fixtures.hpp"
#include "lambang/typesys.hpp"

using namespace lambang;

namespace {

// Rule tallies read straight off a derivation tree.
std::map<std::string, int> tally(const Derivation& d) {
    std::map<std::string, int> k;
    for_each_node(d, [&](const Derivation& n) { ++k[n.rule]; });
    return k;
}

std::tuple<int, int, int> census_oracle(const Derivation& d, System s) {
    auto k = tally(d);
    switch (s) {
    case System::N: return {k["app_c"], k["app_c"] + k["es_c"], k["app_p"] + k["abs_p"]};
    case System::V:
        return {k["app_c"] + k["appt_c"], k["var_c"] + k["abs_c"] - k["app_c"] - k["appt_c"], k["app_p"]};
    case System::B: return {k["app_c"] + k["appt_c"], k["bg_c"], k["app_p"] + k["abs_p"]};
    }
    return {};
}

}  // namespace

TEST_CASE("tightness of types and contexts") {
    CHECK(tight(Multitype{ty_n()}, System::N));
    CHECK_FALSE(is_tight_const(ty_arrow({}, ty_n()), System::N));
    CHECK(tight(Context{{"z", {ty_n()}}}, System::N));
    CHECK(tight(Multitype{ty_vr()}, System::V));
    CHECK_FALSE(tight(Multitype{ty_vr()}, System::N));
    CHECK(tight(Multitype{}, System::B));
}

TEST_CASE("multitypes are multisets") {
    Multitype a{ty_n(), ty_a()}, b{ty_a(), ty_n()};
    CHECK(mt_eq(canonical(a), canonical(b)));
    CHECK(msum({ty_n()}, {ty_n()}).size() == 2);
    auto c = ctx_sum(Context{{"x", {ty_n()}}}, Context{{"x", {ty_n()}}, {"y", {ty_a()}}});
    CHECK(ctx_get(c, "x").size() == 2);
    CHECK(ctx_minus(c, "x").count("x") == 0);
}

TEST_CASE("validity of types per system") {
    CHECK(valid(ty_vr(), System::V));
    CHECK_FALSE(valid(ty_vr(), System::N));
    CHECK(valid(ty_mult({ty_n()}), System::B));
}

TEST_CASE("worked-example derivations check with the printed counters") {
    struct Row { Derivation d; System s; std::tuple<int, int, int> k; bool tight; };
    std::vector<Row> rows{
        {fx::t0_n(), System::N, {2, 2, 1}, true},
        {fx::t0p_b(), System::B, {2, 2, 1}, true},
        {fx::t0_v(), System::V, {3, 2, 1}, true},
        {fx::cbv_t0_b(), System::B, {3, 4, 1}, false},
        {fx::pair_v(), System::V, {1, 1, 0}, true},
        {fx::pair_b(), System::B, {1, 2, 0}, false},
    };
    for (auto& r : rows) {
        CAPTURE(print(r.d.term));
        auto res = check_derivation(r.d, r.s);
        CHECK_MESSAGE(res.ok, res.path << ": " << res.reason);
        CHECK(fx::counters(r.d) == r.k);
        CHECK(tight(r.d, r.s) == r.tight);
        CHECK(rule_census_counters(r.d, r.s) == census_oracle(r.d, r.s));
    }
}

TEST_CASE("census values on the tight examples") {
    CHECK(census_oracle(fx::t0_n(), System::N) == std::tuple{2, 2, 1});
    CHECK(census_oracle(fx::t0p_b(), System::B) == std::tuple{2, 2, 1});
    CHECK(census_oracle(fx::t0_v(), System::V) == std::tuple{3, 2, 1});
    auto k = tally(fx::t0_v());
    CHECK(k["var_c"] == 1);
    CHECK(k["abs_c"] == 4);
}

TEST_CASE("counter mutations are rejected") {
    auto d = fx::t0_n();
    d.e = 3;
    auto r = check_derivation(d, System::N);
    CHECK_FALSE(r.ok);
    CHECK(r.path == "root");

    auto v = fx::t0_v();
    v.premises[1].m = 0;
    auto rv = check_derivation(v, System::V);
    CHECK_FALSE(rv.ok);
}

TEST_CASE("structural mutations are rejected") {
    auto d = fx::t0_n();
    d.type = ty_a();
    CHECK_FALSE(check_derivation(d, System::N).ok);

    auto c = fx::t0_n();
    c.ctx.clear();
    CHECK_FALSE(check_derivation(c, System::N).ok);

    auto r = fx::t0_n();
    r.premises[0].rule = "app_p";
    CHECK_FALSE(check_derivation(r, System::N).ok);

    // a V derivation is not an N derivation
    CHECK_FALSE(check_derivation(fx::t0_v(), System::N).ok);
}

TEST_CASE("derivation JSON round-trips") {
    for (auto [d, c] : {std::pair{fx::t0_v(), Calculus::LambdaES}, std::pair{fx::cbv_t0_b(), Calculus::Bang}}) {
        auto back = from_json(to_json(d), c);
        CHECK(deriv_eq(back, d));
    }
}

TEST_CASE("derivation equality is up to alpha") {
    auto a = fx::pair_v();
    auto b = from_json(nlohmann::json::parse(R"({"rule":"app_c","ctx":{"y":["vr"]},"term":"(\\u.u) y","type":"vr",
        "counters":[1,1,0],"premises":[
          {"rule":"abs_c","ctx":{},"term":"\\u.u","type":{"mult":[{"arrow":{"dom":["vr"],"cod":"vr"}}]},
           "counters":[0,1,0],"premises":[{"rule":"var_p","ctx":{"u":["vr"]},"term":"u","type":"vr","counters":[0,0,0],"premises":[]}]},
          {"rule":"var_c","ctx":{"y":["vr"]},"term":"y","type":{"mult":["vr"]},"counters":[0,1,0],"premises":[]}]})"),
                       Calculus::LambdaES);
    CHECK(check_derivation(b, System::V).ok);
    CHECK(deriv_eq(a, b));
    b.premises[1].ctx = Context{{"w", {ty_vr()}}};
    CHECK_FALSE(deriv_eq(a, b));
}
