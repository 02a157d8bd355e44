#include "lambang/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>

namespace lambang {

namespace {

std::vector<std::string> merge_fv(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<std::string> minus(const std::vector<std::string>& a, const std::string& x) {
    std::vector<std::string> out;
    out.reserve(a.size());
    for (auto& y : a)
        if (y != x) out.push_back(y);
    return out;
}

Term make(Kind k, std::string name, Term a, Term b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->name = std::move(name);
    n->a = std::move(a);
    n->b = std::move(b);
    switch (k) {
    case Kind::Var: n->fv = {n->name}; break;
    case Kind::Abs: n->fv = minus(n->a->fv, n->name); break;
    case Kind::App: n->fv = merge_fv(n->a->fv, n->b->fv); break;
    case Kind::ESub: n->fv = merge_fv(minus(n->a->fv, n->name), n->b->fv); break;
    case Kind::Bang:
    case Kind::Der: n->fv = n->a->fv; break;
    }
    n->nodes = 1 + (n->a ? n->a->nodes : 0) + (n->b ? n->b->nodes : 0);
    n->bangs = k == Kind::Bang || k == Kind::Der || (n->a && n->a->bangs) || (n->b && n->b->bangs);
    return n;
}

}  // namespace

Term var(std::string x) { return make(Kind::Var, std::move(x), nullptr, nullptr); }
Term lam(std::string x, Term body) { return make(Kind::Abs, std::move(x), std::move(body), nullptr); }
Term app(Term f, Term a) { return make(Kind::App, {}, std::move(f), std::move(a)); }
Term esub(Term body, std::string x, Term arg) { return make(Kind::ESub, std::move(x), std::move(body), std::move(arg)); }
Term bang(Term t) { return make(Kind::Bang, {}, std::move(t), nullptr); }
Term der(Term t) { return make(Kind::Der, {}, std::move(t), nullptr); }

Term app_spine(Term f, std::vector<Term> args) {
    for (auto& a : args) f = app(f, a);
    return f;
}

Calculus calculus_of(const Term& t) { return t->bangs ? Calculus::Bang : Calculus::LambdaES; }

std::set<std::string> free_vars(const Term& t) { return {t->fv.begin(), t->fv.end()}; }

bool has_free(const Term& t, const std::string& x) {
    return std::binary_search(t->fv.begin(), t->fv.end(), x);
}

namespace {

using Env = std::vector<const std::string*>;

int lookup(const Env& env, const std::string& x) {
    for (int i = static_cast<int>(env.size()) - 1; i >= 0; --i)
        if (*env[i] == x) return static_cast<int>(env.size()) - 1 - i;
    return -1;
}

bool aeq(const Term& t, const Term& u, Env& et, Env& eu) {
    if (t->kind != u->kind) return false;
    switch (t->kind) {
    case Kind::Var: {
        int i = lookup(et, t->name), j = lookup(eu, u->name);
        if (i != j) return false;
        return i >= 0 || t->name == u->name;
    }
    case Kind::Abs: {
        et.push_back(&t->name);
        eu.push_back(&u->name);
        bool r = aeq(t->a, u->a, et, eu);
        et.pop_back();
        eu.pop_back();
        return r;
    }
    case Kind::App: return aeq(t->a, u->a, et, eu) && aeq(t->b, u->b, et, eu);
    case Kind::ESub: {
        if (!aeq(t->b, u->b, et, eu)) return false;
        et.push_back(&t->name);
        eu.push_back(&u->name);
        bool r = aeq(t->a, u->a, et, eu);
        et.pop_back();
        eu.pop_back();
        return r;
    }
    case Kind::Bang:
    case Kind::Der: return aeq(t->a, u->a, et, eu);
    }
    return false;
}

void key(const Term& t, Env& env, std::string& out) {
    switch (t->kind) {
    case Kind::Var: {
        int i = lookup(env, t->name);
        if (i >= 0) {
            out += '#';
            out += std::to_string(i);
        } else {
            out += t->name;
        }
        out += ' ';
        return;
    }
    case Kind::Abs:
        out += "L(";
        env.push_back(&t->name);
        key(t->a, env, out);
        env.pop_back();
        out += ')';
        return;
    case Kind::App:
        out += "A(";
        key(t->a, env, out);
        key(t->b, env, out);
        out += ')';
        return;
    case Kind::ESub:
        out += "S(";
        key(t->b, env, out);
        env.push_back(&t->name);
        key(t->a, env, out);
        env.pop_back();
        out += ')';
        return;
    case Kind::Bang:
        out += "!(";
        key(t->a, env, out);
        out += ')';
        return;
    case Kind::Der:
        out += "D(";
        key(t->a, env, out);
        out += ')';
        return;
    }
}

}  // namespace

bool alpha_eq(const Term& t, const Term& u) {
    if (t == u) return true;
    Env a, b;
    return aeq(t, u, a, b);
}

std::string alpha_key(const Term& t) {
    std::string out;
    Env env;
    key(t, env, out);
    return out;
}

std::string fresh(const std::string& base, const std::set<std::string>& avoid) {
    std::string y = base;
    while (avoid.count(y)) y += '\'';
    return y;
}

std::optional<std::string> capture_rename(const std::string& y, const Term& body,
                                          const std::string& x, const Term& u) {
    if (y == x || !has_free(body, x) || !has_free(u, y)) return std::nullopt;
    std::set<std::string> avoid(u->fv.begin(), u->fv.end());
    avoid.insert(body->fv.begin(), body->fv.end());
    avoid.insert(x);
    return fresh(y, avoid);
}

Term subst_meta(const Term& t, const std::string& x, const Term& u) {
    if (!has_free(t, x)) return t;
    switch (t->kind) {
    case Kind::Var: return u;
    case Kind::Abs: {
        std::string y = t->name;
        Term body = t->a;
        if (auto r = capture_rename(y, body, x, u)) {
            body = subst_meta(body, y, var(*r));
            y = *r;
        }
        return lam(y, subst_meta(body, x, u));
    }
    case Kind::App: return app(subst_meta(t->a, x, u), subst_meta(t->b, x, u));
    case Kind::ESub: {
        std::string y = t->name;
        Term body = t->a;
        if (auto r = capture_rename(y, body, x, u)) {
            body = subst_meta(body, y, var(*r));
            y = *r;
        }
        Term nb = y == x ? body : subst_meta(body, x, u);
        return esub(nb, y, subst_meta(t->b, x, u));
    }
    case Kind::Bang: return bang(subst_meta(t->a, x, u));
    case Kind::Der: return der(subst_meta(t->a, x, u));
    }
    return t;
}

Term rename_free(const Term& t, const std::string& from, const std::string& to) {
    if (from == to) return t;
    return subst_meta(t, from, var(to));
}

std::string to_string(const Position& p) {
    if (p.empty()) return "root";
    std::string out;
    for (auto s : p) {
        if (!out.empty()) out += '.';
        switch (s) {
        case Sel::Fun: out += "fun"; break;
        case Sel::Arg: out += "arg"; break;
        case Sel::Body: out += "body"; break;
        case Sel::SubBody: out += "sbody"; break;
        case Sel::SubArg: out += "sarg"; break;
        case Sel::BangBody: out += "bang"; break;
        case Sel::DerBody: out += "der"; break;
        }
    }
    return out;
}

std::optional<Position> parse_position(const std::string& s) {
    Position p;
    if (s == "root") return p;
    std::size_t i = 0;
    while (i <= s.size()) {
        auto j = s.find('.', i);
        if (j == std::string::npos) j = s.size();
        auto w = s.substr(i, j - i);
        if (w == "fun") p.push_back(Sel::Fun);
        else if (w == "arg") p.push_back(Sel::Arg);
        else if (w == "body") p.push_back(Sel::Body);
        else if (w == "sbody") p.push_back(Sel::SubBody);
        else if (w == "sarg") p.push_back(Sel::SubArg);
        else if (w == "bang") p.push_back(Sel::BangBody);
        else if (w == "der") p.push_back(Sel::DerBody);
        else return std::nullopt;
        i = j + 1;
    }
    return p;
}

namespace {

Term child(const Term& t, Sel s) {
    switch (s) {
    case Sel::Fun: return is_app(t) ? t->a : nullptr;
    case Sel::Arg: return is_app(t) ? t->b : nullptr;
    case Sel::Body: return is_abs(t) ? t->a : nullptr;
    case Sel::SubBody: return is_esub(t) ? t->a : nullptr;
    case Sel::SubArg: return is_esub(t) ? t->b : nullptr;
    case Sel::BangBody: return is_bang(t) ? t->a : nullptr;
    case Sel::DerBody: return is_der(t) ? t->a : nullptr;
    }
    return nullptr;
}

}  // namespace

Term subterm(const Term& t, const Position& p) {
    Term cur = t;
    for (auto s : p) {
        cur = child(cur, s);
        if (!cur) throw std::invalid_argument("invalid position " + to_string(p));
    }
    return cur;
}

Term replace_at(const Term& t, const Position& p, std::size_t depth, const Term& r) {
    if (depth == p.size()) return r;
    Term c = child(t, p[depth]);
    if (!c) throw std::invalid_argument("invalid position " + to_string(p));
    Term nc = replace_at(c, p, depth + 1, r);
    switch (p[depth]) {
    case Sel::Fun: return app(nc, t->b);
    case Sel::Arg: return app(t->a, nc);
    case Sel::Body: return lam(t->name, nc);
    case Sel::SubBody: return esub(nc, t->name, t->b);
    case Sel::SubArg: return esub(t->a, t->name, nc);
    case Sel::BangBody: return bang(nc);
    case Sel::DerBody: return der(nc);
    }
    return t;
}

ListCtx peel(const Term& t) {
    ListCtx out;
    Term cur = t;
    while (is_esub(cur)) {
        out.layers.push_back({cur->name, cur->b});
        cur = cur->a;
    }
    out.core = cur;
    return out;
}

Term plug(const std::vector<ListCtx::Layer>& layers, Term core) {
    for (auto it = layers.rbegin(); it != layers.rend(); ++it) core = esub(core, it->x, it->arg);
    return core;
}

// ---------------------------------------------------------------- parsing

ParseError::ParseError(std::size_t off, const std::string& msg)
    : std::runtime_error("syntax error at offset " + std::to_string(off) + ": " + msg), offset(off) {}

CalculusMismatch::CalculusMismatch(std::size_t off, const std::string& msg)
    : std::runtime_error("calculus mismatch at offset " + std::to_string(off) + ": " + msg), offset(off) {}

namespace {

struct Parser {
    const std::string& s;
    Calculus calc;
    std::size_t i = 0;

    void ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool peek(char c) {
        ws();
        return i < s.size() && s[i] == c;
    }
    void expect(char c) {
        ws();
        if (i >= s.size() || s[i] != c) throw ParseError(i, std::string("expected '") + c + "'");
        ++i;
    }
    static bool id_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
    static bool id_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
    }
    bool at_ident() {
        ws();
        return i < s.size() && id_start(s[i]);
    }
    std::string ident() {
        ws();
        if (i >= s.size() || !id_start(s[i])) throw ParseError(i, "expected identifier");
        std::size_t st = i;
        while (i < s.size() && id_char(s[i])) ++i;
        return s.substr(st, i - st);
    }
    bool at_der() {
        ws();
        if (s.compare(i, 3, "der") != 0) return false;
        std::size_t j = i + 3;
        if (j < s.size() && id_char(s[j])) return false;
        while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        return j < s.size() && s[j] == '(';
    }
    bool at_atom() {
        ws();
        if (i >= s.size()) return false;
        char c = s[i];
        return id_start(c) || c == '(' || c == '!';
    }

    Term term() {
        ws();
        if (peek('\\')) {
            ++i;
            std::string x = ident();
            expect('.');
            return lam(x, term());
        }
        Term t = atom();
        while (at_atom()) t = app(t, atom());
        return t;
    }

    Term primary() {
        ws();
        if (i >= s.size()) throw ParseError(i, "unexpected end of input");
        char c = s[i];
        if (c == '(') {
            ++i;
            Term t = term();
            expect(')');
            return t;
        }
        if (c == '!') {
            if (calc == Calculus::LambdaES) throw CalculusMismatch(i, "'!' is not part of the lambda-es calculus");
            ++i;
            return bang(atom());
        }
        if (at_der()) {
            if (calc == Calculus::LambdaES) throw CalculusMismatch(i, "'der' is not part of the lambda-es calculus");
            i += 3;
            expect('(');
            Term t = term();
            expect(')');
            return der(t);
        }
        if (id_start(c)) return var(ident());
        throw ParseError(i, std::string("unexpected character '") + c + "'");
    }

    Term atom() {
        Term t = primary();
        while (peek('[')) {
            ++i;
            std::string x = ident();
            ws();
            if (s.compare(i, 2, ":=") != 0) throw ParseError(i, "expected ':='");
            i += 2;
            Term u = term();
            expect(']');
            t = esub(t, x, u);
        }
        return t;
    }
};

// level 0: anywhere; 1: function position; 2: argument / ES body
void pr(const Term& t, int level, std::string& out) {
    switch (t->kind) {
    case Kind::Var: out += t->name; return;
    case Kind::Abs:
        if (level > 0) out += '(';
        out += '\\';
        out += t->name;
        out += '.';
        pr(t->a, 0, out);
        if (level > 0) out += ')';
        return;
    case Kind::App:
        if (level > 1) out += '(';
        pr(t->a, 1, out);
        out += ' ';
        pr(t->b, 2, out);
        if (level > 1) out += ')';
        return;
    case Kind::ESub: {
        bool paren = is_abs(t->a) || is_app(t->a) || is_bang(t->a);
        if (paren) out += '(';
        pr(t->a, 0, out);
        if (paren) out += ')';
        out += '[';
        out += t->name;
        out += " := ";
        pr(t->b, 0, out);
        out += ']';
        return;
    }
    case Kind::Bang:
        out += '!';
        pr(t->a, 2, out);
        return;
    case Kind::Der:
        out += "der(";
        pr(t->a, 0, out);
        out += ')';
        return;
    }
}

}  // namespace

Term parse(const std::string& src, Calculus c) {
    Parser p{src, c};
    Term t = p.term();
    p.ws();
    if (p.i != src.size()) throw ParseError(p.i, "trailing input");
    return t;
}

std::string print(const Term& t) {
    std::string out;
    pr(t, 0, out);
    return out;
}

}  // namespace lambang
