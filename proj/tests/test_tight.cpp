#include <doctest.h>

#include "fixtures.hpp"
#include "lambang/tight.hpp"

using namespace lambang;

namespace {
Term L(const std::string& s) { return parse(s, Calculus::LambdaES); }
Term B(const std::string& s) { return parse(s, Calculus::Bang); }

void ok(const Derivation& d, System s) {
    auto r = check_derivation(d, s);
    CHECK_MESSAGE(r.ok, r.path << ": " << r.reason);
}

std::string code_of(auto&& f) {
    try {
        f();
    } catch (const TightError& e) {
        return e.code;
    }
    return "";
}
}  // namespace

TEST_CASE("typing normal forms") {
    auto n = type_normal_form(L("z (\\w.w)"), System::N);
    ok(n, System::N);
    CHECK(ctx_eq(n.ctx, Context{{"z", {ty_n()}}}));
    CHECK(type_eq(n.type, ty_n()));
    CHECK(fx::counters(n) == std::tuple{0, 0, 1});

    auto v = type_normal_form(L("x"), System::V);
    ok(v, System::V);
    CHECK(v.rule == "val_p");
    CHECK(v.ctx.empty());
    CHECK(type_eq(v.type, ty_vl()));
    CHECK(fx::counters(v) == std::tuple{0, 0, 0});

    auto b = type_normal_form(B("z !(\\w.w)"), System::B);
    ok(b, System::B);
    CHECK(ctx_eq(b.ctx, Context{{"z", {ty_n()}}}));
    CHECK(fx::counters(b) == std::tuple{0, 0, 1});
    CHECK(b.rule == "app_p");
    CHECK(b.premises[1].rule == "bg_p");

    CHECK(code_of([] { type_normal_form(L("(\\x.x) y"), System::N); }) == "NotNormal");
    CHECK(code_of([] { type_normal_form(B("(!x) y"), System::B); }) == "ClashNormalForm");
}

TEST_CASE("normal form typing is tight with size as the third counter") {
    struct Row { const char* t; System s; Flavor f; };
    for (auto r : {Row{"x (\\y.y z) w", System::N, Flavor::n}, Row{"\\x.x (\\y.y)", System::N, Flavor::n},
                   Row{"x[x := y z] (\\u.u)", System::V, Flavor::v}, Row{"\\x.x x", System::V, Flavor::v}}) {
        auto t = L(r.t);
        auto d = type_normal_form(t, r.s);
        ok(d, r.s);
        CHECK(tight(d, r.s));
        CHECK(d.m == 0);
        CHECK(d.e == 0);
        CHECK(d.s == size(t, r.f));
    }
}

TEST_CASE("substitution in N") {
    auto dx = var_axiom("x", ty_n());
    auto du = type_normal_form(L("y z"), System::N);
    auto r = substitute_derivation(dx, "x", L("y z"), {du}, System::N);
    CHECK(deriv_eq(r, du));

    auto dy = var_axiom("y", ty_n());
    auto same = substitute_derivation(dy, "x", L("\\w.w"), {}, System::N);
    CHECK(deriv_eq(same, dy));
}

TEST_CASE("substituting an empty-typed value into val_p gives abs_p") {
    auto I = L("\\w.w");
    auto dI = merge_value({}, I);
    CHECK(fx::counters(dI) == std::tuple{0, 1, 0});
    auto r = substitute_derivation(val_p("x"), "x", I, {dI}, System::V);
    ok(r, System::V);
    CHECK(r.rule == "abs_p");
    CHECK(type_eq(r.type, ty_vl()));
    CHECK(fx::counters(r) == std::tuple{0, 0, 0});
}

TEST_CASE("anti-substitution") {
    auto d = type_normal_form(L("y z"), System::N);
    auto [dt, du] = anti_substitute(d, L("x"), "x", L("y z"), System::N);
    CHECK(dt.rule == "var_c");
    REQUIRE(du.size() == 1);
    CHECK(deriv_eq(du[0], d));

    auto dy = var_axiom("y", ty_n());
    auto [dt2, du2] = anti_substitute(dy, L("y"), "x", L("\\w.w"), System::N);
    CHECK(deriv_eq(dt2, dy));
    CHECK(du2.empty());
}

TEST_CASE("anti-substitution inverts substitution") {
    auto syn = synthesize_tight(L("(\\u.u (u x)) (\\v.v)"), System::N);
    auto es = reduce_step(syn.derivation, syn.trace.steps[0], System::N);
    REQUIRE(es.rule == "es_c");
    REQUIRE(es.premises.size() == 3);
    auto& body = es.premises[0];
    CHECK(ctx_get(body.ctx, "u").size() == 2);
    auto I = L("\\v.v");
    auto filled = substitute_derivation(body, "u", I, {es.premises[1], es.premises[2]}, System::N);
    ok(filled, System::N);
    CHECK(alpha_eq(filled.term, L("(\\v.v) ((\\v.v) x)")));
    auto [dt, du] = anti_substitute(filled, body.term, "u", I, System::N);
    CHECK(deriv_eq(dt, body));
    REQUIRE(du.size() == 2);
    CHECK(deriv_eq(du[0], es.premises[1]));
    CHECK(deriv_eq(du[1], es.premises[2]));
}

TEST_CASE("split and merge value derivations") {
    auto d = var_c_v("x", {ty_vr(), ty_vr()});
    CHECK(fx::counters(d) == std::tuple{0, 1, 0});
    auto parts = split_value(d, {{ty_vr()}, {ty_vr()}});
    REQUIRE(parts.size() == 2);
    for (auto& p : parts) {
        ok(p, System::V);
        CHECK(fx::counters(p) == std::tuple{0, 1, 0});
    }
    CHECK(d.e == 1 + parts[0].e + parts[1].e - 2);
    CHECK(deriv_eq(merge_value(parts, var("x")), d));

    auto lamx = L("\\x.t");
    auto empty = merge_value({}, lamx);
    ok(empty, System::V);
    CHECK(empty.rule == "abs_c");
    CHECK(empty.premises.empty());
    CHECK(type_eq(empty.type, ty_mult({})));
    CHECK(fx::counters(empty) == std::tuple{0, 1, 0});

    auto I = L("\\x.x");
    auto full = conclude(System::V, "abs_c", I, {var_p("x"), var_c_v("x", {})});
    ok(full, System::V);
    auto a1 = ty_arrow({ty_vr()}, ty_vr());
    auto a2 = ty_arrow({}, ty_mult({}));
    CHECK(type_eq(full.type, ty_mult({a1, a2})));
    auto sp = split_value(full, {{a1}, {a2}});
    REQUIRE(sp.size() == 2);
    int esum = 0;
    for (auto& p : sp) {
        ok(p, System::V);
        esum += p.e;
    }
    CHECK(full.e == 1 + esum - 2);
    CHECK(deriv_eq(merge_value(sp, I), full));
    CHECK(code_of([&] { split_value(full, {{a1}}); }) == "ArityMismatch");
}

TEST_CASE("expansion over an N substitution step") {
    auto t = L("x[x := y]");
    auto st = step(t, Strategy::dn);
    REQUIRE(st);
    auto after = var_axiom("y", ty_n());
    auto d = expand_step(after, TraceStep{st->pos, st->rule, t, st->result}, System::N);
    ok(d, System::N);
    CHECK(d.rule == "es_c");
    CHECK(fx::counters(d) == std::tuple{0, 1, 0});
}

TEST_CASE("the hand-built V derivation of t0 is recovered by expanding along the dv trace") {
    auto zI = L("z (\\w.w)");
    auto dzI = conclude(System::V, "app_p", zI, {var_p("z"), abs_p_v(L("\\w.w"))});
    auto nf = L("x[x := z (\\w.w)]");
    auto d = conclude(System::V, "es_p", nf, {var_p("x"), dzI});
    ok(d, System::V);
    CHECK(fx::counters(d) == std::tuple{0, 0, 1});
    CHECK(type_eq(d.type, ty_vr()));

    auto nr = normalize(L(fx::t0), Strategy::dv, 10);
    REQUIRE(nr.normal);
    REQUIRE(nr.trace.steps.size() == 5);
    REQUIRE(alpha_eq(nr.nf(), nf));
    for (auto it = nr.trace.steps.rbegin(); it != nr.trace.steps.rend(); ++it) {
        d = expand_step(d, *it, System::V);
        ok(d, System::V);
    }
    CHECK(fx::counters(d) == std::tuple{3, 2, 1});
    CHECK(deriv_eq(d, fx::t0_v()));
}

TEST_CASE("expansion over a d! step") {
    auto t = B("der(!(x !y))");
    auto st = step(t, Strategy::fdet);
    REQUIRE(st);
    CHECK(st->rule == Rule::dBang);
    auto after = type_normal_form(st->result, System::B);
    auto d = expand_step(after, TraceStep{st->pos, st->rule, t, st->result}, System::B);
    ok(d, System::B);
    CHECK((d.rule == "dr_c" || d.rule == "dr_p"));
    CHECK(d.e == after.e + 1);
    CHECK(d.m == after.m);
    CHECK(d.s == after.s);
}

TEST_CASE("reduction steps") {
    auto t = L("(\\x.x) y");
    auto syn = synthesize_tight(t, System::N);
    REQUIRE(syn.trace.steps.size() == 2);
    auto& s0 = syn.trace.steps[0];
    CHECK(s0.rule == Rule::dB);
    auto r = reduce_step(syn.derivation, s0, System::N);
    ok(r, System::N);
    CHECK(r.rule == "es_c");
    CHECK(r.m == syn.derivation.m - 1);

    auto sv = L("x[x := \\w.w]");
    auto dv = synthesize_tight(sv, System::V);
    REQUIRE(dv.trace.steps.size() == 1);
    auto r2 = reduce_step(dv.derivation, dv.trace.steps[0], System::V);
    ok(r2, System::V);
    CHECK(dv.derivation.rule == "es_c");
    CHECK(r2.e == dv.derivation.e - 1);
}

TEST_CASE("expansion and reduction are mutually inverse along traces") {
    struct Row { const char* t; System s; Calculus c; };
    for (auto r : {Row{fx::t0, System::N, Calculus::LambdaES}, Row{fx::t0, System::V, Calculus::LambdaES},
                   Row{fx::t0p, System::B, Calculus::Bang},
                   Row{"der((\\x.!(\\y.!x)) (z !(\\w.!w))) ((\\w.!w) !(\\w.!w))", System::B, Calculus::Bang}}) {
        auto syn = synthesize_tight(parse(r.t, r.c), r.s);
        auto d = syn.derivation;
        for (auto& st : syn.trace.steps) {
            auto next = reduce_step(d, st, r.s);
            ok(next, r.s);
            CHECK(deriv_eq(expand_step(next, st, r.s), d));
            d = next;
        }
        CHECK(d.m == 0);
        CHECK(d.e == 0);
    }
}

TEST_CASE("synthesis of the worked examples") {
    auto n = synthesize_tight(L(fx::t0), System::N);
    CHECK(fx::counters(n.derivation) == std::tuple{2, 2, 1});
    CHECK(deriv_eq(n.derivation, fx::t0_n()));

    auto v = synthesize_tight(L(fx::t0), System::V);
    ok(v.derivation, System::V);
    CHECK(tight(v.derivation, System::V));
    CHECK(fx::counters(v.derivation) == std::tuple{3, 2, 1});

    auto b = synthesize_tight(B(fx::t0p), System::B);
    CHECK(fx::counters(b.derivation) == std::tuple{2, 2, 1});
    CHECK(deriv_eq(b.derivation, fx::t0p_b()));

    auto p = synthesize_tight(L("(\\x.x) y"), System::V);
    CHECK(fx::counters(p.derivation) == std::tuple{1, 1, 0});
}

TEST_CASE("synthesis failures") {
    CHECK(code_of([] { synthesize_tight(L("(\\x.x x) (\\x.x x)"), System::N, 30); }) == "NotNormalizing");
    CHECK(code_of([] { synthesize_tight(B("der(\\x.x)"), System::B); }) == "ClashNormalForm");
}
