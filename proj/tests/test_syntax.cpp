#include <doctest.h>

#include "lambang/syntax.hpp"

using namespace lambang;

namespace {
Term L(const std::string& s) { return parse(s, Calculus::LambdaES); }
Term B(const std::string& s) { return parse(s, Calculus::Bang); }
}  // namespace

TEST_CASE("parse builds the expected trees") {
    CHECK(alpha_eq(L("\\x.x"), lam("x", var("x"))));
    auto es = L("x[x := y]");
    REQUIRE(is_esub(es));
    CHECK(es->name == "x");
    CHECK(es->a->name == "x");
    CHECK(es->b->name == "y");
    auto d = B("der((\\x.!x) !y)");
    CHECK(print(d) == print(der(app(lam("x", bang(var("x"))), bang(var("y"))))));
}

TEST_CASE("application is left associative and binds tighter than lambda") {
    CHECK(print(L("x y z")) == print(app(app(var("x"), var("y")), var("z"))));
    CHECK(print(L("\\x.x y")) == print(lam("x", app(var("x"), var("y")))));
}

TEST_CASE("print then parse is the identity") {
    for (const char* s : {"\\x.x", "x[x := y]", "(\\x.\\y.x) (z (\\w.w)) ((\\w.w) (\\w.w))",
                          "x[y := z][z := \\w.w w]", "(x y)[x := \\u.u] z"}) {
        auto t = L(s);
        CHECK(alpha_eq(parse(print(t), Calculus::LambdaES), t));
    }
    for (const char* s : {"der((\\x.!x) !y)", "!(!x)", "der(der(x)) !(y z)", "x[x := !y] !x"}) {
        auto t = B(s);
        CHECK(alpha_eq(parse(print(t), Calculus::Bang), t));
    }
}

TEST_CASE("parse errors and calculus mismatch") {
    CHECK_THROWS_AS(L("(\\x.x"), ParseError);
    CHECK_THROWS_AS(L("\\.x"), ParseError);
    CHECK_THROWS_AS(L("!x"), CalculusMismatch);
    CHECK_THROWS_AS(L("der(x)"), CalculusMismatch);
}

TEST_CASE("free variables") {
    CHECK(free_vars(L("\\x.x")).empty());
    CHECK(free_vars(L("x[x := y]")) == std::set<std::string>{"y"});
    CHECK(free_vars(L("z z")) == std::set<std::string>{"z"});
    CHECK(free_vars(L("(\\x.x y)[y := w] x")) == std::set<std::string>{"w", "x"});
}

TEST_CASE("alpha equivalence") {
    CHECK(alpha_eq(L("\\x.x"), L("\\y.y")));
    CHECK(alpha_eq(L("\\x.\\y.x"), L("\\y.\\x.y")));
    CHECK_FALSE(alpha_eq(L("\\x.\\y.x"), L("\\x.\\y.y")));
    CHECK(alpha_eq(L("x[x := y]"), L("z[z := y]")));
    CHECK_FALSE(alpha_eq(L("x[x := y]"), L("x[z := y]")));
    CHECK(alpha_key(L("\\x.x z")) == alpha_key(L("\\y.y z")));
    CHECK(alpha_key(L("\\x.x z")) != alpha_key(L("\\x.x y")));
}

TEST_CASE("meta-level substitution avoids capture") {
    CHECK(alpha_eq(subst_meta(L("x"), "x", L("\\y.y")), L("\\y.y")));
    auto r = subst_meta(L("\\y.x"), "x", L("y"));
    REQUIRE(is_abs(r));
    CHECK(r->name != "y");
    CHECK(alpha_eq(r, L("\\u.y")));
    CHECK(alpha_eq(subst_meta(L("x[y := x]"), "x", L("z")), L("z[y := z]")));
    CHECK(alpha_eq(subst_meta(L("\\x.x"), "x", L("z")), L("\\x.x")));
}

TEST_CASE("positions address subterms") {
    auto t = L("(\\x.x y) z");
    auto p = parse_position("fun.body.arg");
    REQUIRE(p);
    CHECK(print(subterm(t, *p)) == "y");
    CHECK(to_string(*p) == "fun.body.arg");
    CHECK(print(replace_at(t, *p, var("w"))) == print(L("(\\x.x w) z")));
}

TEST_CASE("list contexts peel and plug") {
    auto t = L("(\\x.x)[y := a][z := b]");
    auto lc = peel(t);
    CHECK(lc.layers.size() == 2);
    CHECK(is_abs(lc.core));
    CHECK(alpha_eq(plug(lc.layers, lc.core), t));
}

TEST_CASE("fresh names") {
    CHECK(fresh("x", {"y"}) == "x");
    auto f = fresh("x", {"x", "x'"});
    CHECK(f != "x");
    CHECK(f != "x'");
}
