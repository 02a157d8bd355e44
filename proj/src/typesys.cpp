#include "lambang/typesys.hpp"

#include <algorithm>

namespace lambang {

std::string to_string(System s) {
    switch (s) {
    case System::N: return "N";
    case System::V: return "V";
    case System::B: return "B";
    }
    return "?";
}

namespace {

Type make_const(TyKind k) {
    auto n = std::make_shared<TypeNode>();
    n->kind = k;
    return n;
}

}  // namespace

Type ty_n() {
    static const Type t = make_const(TyKind::N);
    return t;
}
Type ty_a() {
    static const Type t = make_const(TyKind::A);
    return t;
}
Type ty_vl() {
    static const Type t = make_const(TyKind::Vl);
    return t;
}
Type ty_vr() {
    static const Type t = make_const(TyKind::Vr);
    return t;
}

Type ty_mult(Multitype m) {
    auto n = std::make_shared<TypeNode>();
    n->kind = TyKind::Mult;
    n->ms = canonical(std::move(m));
    return n;
}

Type ty_arrow(Multitype dom, Type cod) {
    auto n = std::make_shared<TypeNode>();
    n->kind = TyKind::Arrow;
    n->ms = canonical(std::move(dom));
    n->cod = std::move(cod);
    return n;
}

int compare(const Multitype& a, const Multitype& b) {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
        if (int c = compare(a[i], b[i])) return c;
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

int compare(const Type& a, const Type& b) {
    if (a == b) return 0;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    if (int c = compare(a->ms, b->ms)) return c;
    if (a->kind == TyKind::Arrow) return compare(a->cod, b->cod);
    return 0;
}

Multitype canonical(Multitype m) {
    std::sort(m.begin(), m.end(), [](const Type& x, const Type& y) { return compare(x, y) < 0; });
    return m;
}

Multitype msum(const Multitype& a, const Multitype& b) {
    Multitype out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
               [](const Type& x, const Type& y) { return compare(x, y) < 0; });
    return out;
}

std::string to_string(const Multitype& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i) out += ", ";
        out += to_string(m[i]);
    }
    return out + "]";
}

std::string to_string(const Type& t) {
    switch (t->kind) {
    case TyKind::N: return "n";
    case TyKind::A: return "a";
    case TyKind::Vl: return "vl";
    case TyKind::Vr: return "vr";
    case TyKind::Mult: return to_string(t->ms);
    case TyKind::Arrow: {
        std::string c = to_string(t->cod);
        if (t->cod->kind == TyKind::Arrow) c = "(" + c + ")";
        return to_string(t->ms) + " -> " + c;
    }
    }
    return "?";
}

bool is_const(const Type& t) { return t->kind != TyKind::Mult && t->kind != TyKind::Arrow; }

bool is_tight_const(const Type& t, System s) {
    switch (t->kind) {
    case TyKind::N: return true;
    case TyKind::A: return s != System::V;
    case TyKind::Vl: return s != System::N;
    case TyKind::Vr: return s == System::V;
    default: return false;
    }
}

bool tight(const Multitype& m, System s) {
    return std::all_of(m.begin(), m.end(), [&](const Type& t) { return is_tight_const(t, s); });
}

bool valid(const Type& t, System s) {
    if (is_const(t)) return is_tight_const(t, s);
    for (auto& x : t->ms)
        if (!valid(x, s)) return false;
    return t->kind != TyKind::Arrow || valid(t->cod, s);
}

Context ctx_sum(const Context& a, const Context& b) {
    Context out = a;
    for (auto& [x, m] : b) {
        auto& slot = out[x];
        slot = msum(slot, m);
    }
    return out;
}

Context ctx_minus(const Context& c, const std::string& x) {
    Context out = c;
    out.erase(x);
    return out;
}

Multitype ctx_get(const Context& c, const std::string& x) {
    auto it = c.find(x);
    return it == c.end() ? Multitype{} : it->second;
}

Context ctx_single(const std::string& x, Multitype m) {
    Context c;
    if (!m.empty()) c[x] = canonical(std::move(m));
    return c;
}

bool ctx_eq(const Context& a, const Context& b) {
    if (a.size() != b.size()) return false;
    for (auto ia = a.begin(), ib = b.begin(); ia != a.end(); ++ia, ++ib)
        if (ia->first != ib->first || !mt_eq(ia->second, ib->second)) return false;
    return true;
}

bool tight(const Context& c, System s) {
    for (auto& [x, m] : c)
        if (!tight(m, s)) return false;
    return true;
}

std::string to_string(const Context& c) {
    std::string out;
    for (auto& [x, m] : c) {
        if (!out.empty()) out += ", ";
        out += x + ":" + to_string(m);
    }
    return out;
}

bool tight(const Derivation& d, System s) { return tight(d.ctx, s) && is_tight_const(d.type, s); }

// ---------------------------------------------------------------- checker

namespace {

struct Fail {
    std::string reason;
};

struct Checker {
    System sys;

    static void need(bool c, const std::string& why) {
        if (!c) throw Fail{why};
    }

    static void arity(const Derivation& d, std::size_t n) {
        need(d.premises.size() == n, d.rule + " expects " + std::to_string(n) + " premise(s)");
    }

    static void subject(const Derivation& p, const Term& t, const char* what) {
        need(alpha_eq(p.term, t), std::string("premise subject is not the ") + what);
    }

    static void counters(const Derivation& d, int m, int e, int s) {
        need(d.m == m && d.e == e && d.s == s,
             "counter arithmetic: expected (" + std::to_string(m) + "," + std::to_string(e) + "," +
                 std::to_string(s) + ")");
    }

    static void ctx(const Derivation& d, const Context& c) {
        need(ctx_eq(d.ctx, c), "context mismatch: expected {" + to_string(c) + "}");
    }

    static void type(const Derivation& d, const Type& t) {
        need(type_eq(d.type, t), "type mismatch: expected " + to_string(t));
    }

    static Multitype premise_types(const Derivation& d, std::size_t from) {
        Multitype m;
        for (std::size_t i = from; i < d.premises.size(); ++i) m.push_back(d.premises[i].type);
        return canonical(m);
    }

    static Context premise_ctx(const Derivation& d, std::size_t from) {
        Context c;
        for (std::size_t i = from; i < d.premises.size(); ++i) c = ctx_sum(c, d.premises[i].ctx);
        return c;
    }

    static std::tuple<int, int, int> sums(const Derivation& d, std::size_t from) {
        int m = 0, e = 0, s = 0;
        for (std::size_t i = from; i < d.premises.size(); ++i) {
            m += d.premises[i].m;
            e += d.premises[i].e;
            s += d.premises[i].s;
        }
        return {m, e, s};
    }

    void node(const Derivation& d) {
        need(d.term && d.type, "incomplete judgement");
        need(valid(d.type, sys), "type " + to_string(d.type) + " not valid in system " + to_string(sys));
        for (auto& [x, m] : d.ctx) {
            need(!m.empty(), "context lists an empty multitype");
            for (auto& t : m) need(valid(t, sys), "context type not valid in system");
        }
        if (d.e < 0) throw Fail{"NegativeCounter: e < 0"};
        need(d.m >= 0 && d.s >= 0, "NegativeCounter");
        if (sys != System::B) need(!d.term->bangs, "subject outside the lambda-es calculus");

        const Term& t = d.term;
        const auto& P = d.premises;
        const std::string& r = d.rule;
        auto [M, E, S] = sums(d, 0);

        if (sys == System::N) {
            if (r == "app_p") {
                need(is_app(t), "app_p on non-application");
                arity(d, 1);
                subject(P[0], t->a, "function");
                need(P[0].type->kind == TyKind::N, "app_p premise must have type n");
                type(d, ty_n());
                ctx(d, P[0].ctx);
                counters(d, M, E, S + 1);
            } else if (r == "abs_p") {
                abs_p(d);
            } else if (r == "var_c") {
                var_axiom(d);
            } else if (r == "abs_c") {
                abs_c_single(d);
            } else if (r == "app_c") {
                need(is_app(t), "app_c on non-application");
                need(!P.empty(), "app_c needs a function premise");
                subject(P[0], t->a, "function");
                for (std::size_t i = 1; i < P.size(); ++i) subject(P[i], t->b, "argument");
                need(P[0].type->kind == TyKind::Arrow, "app_c function premise must have an arrow type");
                need(mt_eq(P[0].type->ms, premise_types(d, 1)), "argument premises do not match the arrow domain");
                type(d, P[0].type->cod);
                ctx(d, ctx_sum(P[0].ctx, premise_ctx(d, 1)));
                counters(d, M + 1, E + 1, S);
            } else if (r == "es_c") {
                need(is_esub(t), "es_c on non-closure");
                need(!P.empty(), "es_c needs a body premise");
                subject(P[0], t->a, "closure body");
                for (std::size_t i = 1; i < P.size(); ++i) subject(P[i], t->b, "closure argument");
                need(mt_eq(ctx_get(P[0].ctx, t->name), premise_types(d, 1)),
                     "argument premises do not match the binder's multitype");
                type(d, P[0].type);
                ctx(d, ctx_sum(ctx_minus(P[0].ctx, t->name), premise_ctx(d, 1)));
                counters(d, M, E + 1, S);
            } else {
                throw Fail{"unknown rule " + r + " for system N"};
            }
            return;
        }

        if (sys == System::V) {
            if (r == "var_p") {
                need(is_var(t), "var_p on non-variable");
                arity(d, 0);
                type(d, ty_vr());
                ctx(d, ctx_single(t->name, {ty_vr()}));
                counters(d, 0, 0, 0);
            } else if (r == "val_p") {
                need(is_var(t), "val_p on non-variable");
                arity(d, 0);
                type(d, ty_vl());
                ctx(d, {});
                counters(d, 0, 0, 0);
            } else if (r == "abs_p") {
                need(is_abs(t), "abs_p on non-abstraction");
                arity(d, 0);
                type(d, ty_vl());
                ctx(d, {});
                counters(d, 0, 0, 0);
            } else if (r == "app_p") {
                need(is_app(t), "app_p on non-application");
                arity(d, 2);
                subject(P[0], t->a, "function");
                subject(P[1], t->b, "argument");
                auto k0 = P[0].type->kind, k1 = P[1].type->kind;
                need(k0 == TyKind::N || k0 == TyKind::Vr, "app_p function premise must have type n or vr");
                need(k1 == TyKind::N || k1 == TyKind::Vl, "app_p argument premise must have type n or vl");
                type(d, ty_n());
                ctx(d, ctx_sum(P[0].ctx, P[1].ctx));
                counters(d, M, E, S + 1);
            } else if (r == "es_p") {
                es_p(d);
            } else if (r == "var_c") {
                need(is_var(t), "var_c on non-variable");
                arity(d, 0);
                need(d.type->kind == TyKind::Mult, "var_c must assign a multitype");
                ctx(d, ctx_single(t->name, d.type->ms));
                counters(d, 0, 1, 0);
            } else if (r == "app_c" || r == "appt_c") {
                need(is_app(t), r + " on non-application");
                arity(d, 2);
                subject(P[0], t->a, "function");
                subject(P[1], t->b, "argument");
                const Type& f = P[0].type;
                need(f->kind == TyKind::Mult && f->ms.size() == 1 && f->ms[0]->kind == TyKind::Arrow,
                     r + " function premise must have type [M -> t]");
                const Type& arr = f->ms[0];
                if (r == "app_c") {
                    need(P[1].type->kind == TyKind::Mult && mt_eq(P[1].type->ms, arr->ms),
                         "app_c argument type must equal the arrow domain");
                } else {
                    need(tight(arr->ms, sys), "appt_c needs a tight arrow domain");
                    need(P[1].type->kind == TyKind::N, "appt_c argument must have type n");
                }
                type(d, arr->cod);
                ctx(d, ctx_sum(P[0].ctx, P[1].ctx));
                counters(d, M + 1, E - 1, S);
            } else if (r == "abs_c") {
                need(is_abs(t), "abs_c on non-abstraction");
                Multitype arrows;
                Context c;
                for (auto& p : P) {
                    subject(p, t->a, "abstraction body");
                    arrows.push_back(ty_arrow(ctx_get(p.ctx, t->name), p.type));
                    c = ctx_sum(c, ctx_minus(p.ctx, t->name));
                }
                type(d, ty_mult(arrows));
                ctx(d, c);
                counters(d, M, E + 1, S);
            } else if (r == "es_c") {
                es_c_mult(d);
            } else {
                throw Fail{"unknown rule " + r + " for system V"};
            }
            return;
        }

        // System B
        if (r == "app_p") {
            need(is_app(t), "app_p on non-application");
            arity(d, 2);
            subject(P[0], t->a, "function");
            subject(P[1], t->b, "argument");
            need(P[0].type->kind == TyKind::N, "app_p function premise must have type n");
            auto k1 = P[1].type->kind;
            need(k1 == TyKind::N || k1 == TyKind::Vl, "app_p argument premise must have type n or vl");
            type(d, ty_n());
            ctx(d, ctx_sum(P[0].ctx, P[1].ctx));
            counters(d, M, E, S + 1);
        } else if (r == "abs_p") {
            abs_p(d);
        } else if (r == "bg_p") {
            need(is_bang(t), "bg_p on non-bang");
            arity(d, 0);
            type(d, ty_vl());
            ctx(d, {});
            counters(d, 0, 0, 0);
        } else if (r == "dr_p") {
            need(is_der(t), "dr_p on non-dereliction");
            arity(d, 1);
            subject(P[0], t->a, "dereliction body");
            need(P[0].type->kind == TyKind::N, "dr_p premise must have type n");
            type(d, ty_n());
            ctx(d, P[0].ctx);
            counters(d, M, E, S);
        } else if (r == "es_p") {
            es_p(d);
        } else if (r == "var_c") {
            var_axiom(d);
        } else if (r == "app_c" || r == "appt_c") {
            need(is_app(t), r + " on non-application");
            arity(d, 2);
            subject(P[0], t->a, "function");
            subject(P[1], t->b, "argument");
            const Type& arr = P[0].type;
            need(arr->kind == TyKind::Arrow, r + " function premise must have an arrow type");
            if (r == "app_c") {
                need(P[1].type->kind == TyKind::Mult && mt_eq(P[1].type->ms, arr->ms),
                     "app_c argument type must equal the arrow domain");
            } else {
                need(tight(arr->ms, sys), "appt_c needs a tight arrow domain");
                need(P[1].type->kind == TyKind::N, "appt_c argument must have type n");
            }
            type(d, arr->cod);
            ctx(d, ctx_sum(P[0].ctx, P[1].ctx));
            counters(d, M + 1, E, S);
        } else if (r == "abs_c") {
            abs_c_single(d);
        } else if (r == "bg_c") {
            need(is_bang(t), "bg_c on non-bang");
            for (auto& p : P) subject(p, t->a, "bang body");
            type(d, ty_mult(premise_types(d, 0)));
            ctx(d, premise_ctx(d, 0));
            counters(d, M, E + 1, S);
        } else if (r == "dr_c") {
            need(is_der(t), "dr_c on non-dereliction");
            arity(d, 1);
            subject(P[0], t->a, "dereliction body");
            need(P[0].type->kind == TyKind::Mult && P[0].type->ms.size() == 1,
                 "dr_c premise must have a singleton multitype");
            type(d, P[0].type->ms[0]);
            ctx(d, P[0].ctx);
            counters(d, M, E, S);
        } else if (r == "es_c") {
            es_c_mult(d);
        } else {
            throw Fail{"unknown rule " + r + " for system B"};
        }
    }

    void var_axiom(const Derivation& d) {
        need(is_var(d.term), "var_c on non-variable");
        arity(d, 0);
        ctx(d, ctx_single(d.term->name, {d.type}));
        counters(d, 0, 0, 0);
    }

    void abs_p(const Derivation& d) {
        const Term& t = d.term;
        need(is_abs(t), "abs_p on non-abstraction");
        arity(d, 1);
        const auto& p = d.premises[0];
        subject(p, t->a, "abstraction body");
        need(is_tight_const(p.type, sys), "abs_p premise must have a tight type");
        need(tight(ctx_get(p.ctx, t->name), sys), "abs_p binder multitype must be tight");
        type(d, ty_a());
        ctx(d, ctx_minus(p.ctx, t->name));
        counters(d, p.m, p.e, p.s + 1);
    }

    void abs_c_single(const Derivation& d) {
        const Term& t = d.term;
        need(is_abs(t), "abs_c on non-abstraction");
        arity(d, 1);
        const auto& p = d.premises[0];
        subject(p, t->a, "abstraction body");
        type(d, ty_arrow(ctx_get(p.ctx, t->name), p.type));
        ctx(d, ctx_minus(p.ctx, t->name));
        counters(d, p.m, p.e, p.s);
    }

    void es_p(const Derivation& d) {
        const Term& t = d.term;
        need(is_esub(t), "es_p on non-closure");
        arity(d, 2);
        const auto& P = d.premises;
        subject(P[0], t->a, "closure body");
        subject(P[1], t->b, "closure argument");
        need(P[1].type->kind == TyKind::N, "es_p argument must have type n");
        need(tight(ctx_get(P[0].ctx, t->name), sys), "es_p binder multitype must be tight");
        type(d, P[0].type);
        ctx(d, ctx_sum(ctx_minus(P[0].ctx, t->name), P[1].ctx));
        counters(d, P[0].m + P[1].m, P[0].e + P[1].e, P[0].s + P[1].s);
    }

    void es_c_mult(const Derivation& d) {
        const Term& t = d.term;
        need(is_esub(t), "es_c on non-closure");
        arity(d, 2);
        const auto& P = d.premises;
        subject(P[0], t->a, "closure body");
        subject(P[1], t->b, "closure argument");
        need(P[1].type->kind == TyKind::Mult && mt_eq(P[1].type->ms, ctx_get(P[0].ctx, t->name)),
             "es_c argument type must equal the binder's multitype");
        type(d, P[0].type);
        ctx(d, ctx_sum(ctx_minus(P[0].ctx, t->name), P[1].ctx));
        counters(d, P[0].m + P[1].m, P[0].e + P[1].e, P[0].s + P[1].s);
    }

    bool run(const Derivation& d, std::string& path, std::string& reason) {
        for (std::size_t i = 0; i < d.premises.size(); ++i) {
            std::string sub;
            if (!run(d.premises[i], sub, reason)) {
                path = std::to_string(i) + (sub.empty() ? "" : "." + sub);
                return false;
            }
        }
        try {
            node(d);
        } catch (const Fail& f) {
            path.clear();
            reason = d.rule + ": " + f.reason;
            return false;
        }
        return true;
    }
};

void census(const Derivation& d, std::map<std::string, int>& n) {
    n[d.rule]++;
    for (auto& p : d.premises) census(p, n);
}

}  // namespace

CheckResult check_derivation(const Derivation& d, System s) {
    CheckResult r;
    Checker c{s};
    std::string path, reason;
    if (!c.run(d, path, reason)) {
        r.ok = false;
        r.path = path.empty() ? "root" : path;
        r.reason = reason;
    }
    return r;
}

std::tuple<int, int, int> rule_census_counters(const Derivation& d, System s) {
    std::map<std::string, int> n;
    census(d, n);
    switch (s) {
    case System::N: return {n["app_c"], n["app_c"] + n["es_c"], n["app_p"] + n["abs_p"]};
    case System::V:
        return {n["app_c"] + n["appt_c"], n["var_c"] + n["abs_c"] - n["app_c"] - n["appt_c"], n["app_p"]};
    case System::B: return {n["app_c"] + n["appt_c"], n["bg_c"], n["app_p"] + n["abs_p"]};
    }
    return {0, 0, 0};
}

namespace {

// bound names in scope, outermost first
using Env = std::vector<std::string>;

std::string scoped_key(const Term& t, const Env& env) {
    Term w = t;
    for (auto it = env.rbegin(); it != env.rend(); ++it) w = lam(*it, w);
    return alpha_key(w);
}

Context scoped_ctx(const Context& c, const Env& env) {
    Context out;
    for (auto& [x, m] : c) {
        std::string k = x;
        for (std::size_t i = env.size(); i-- > 0;) {
            if (env[i] == x) {
                k = "#" + std::to_string(i);
                break;
            }
        }
        out[k] = m;
    }
    return out;
}

bool deriv_eq_in(const Derivation& a, const Derivation& b, const Env& ea, const Env& eb) {
    if (a.rule != b.rule || a.m != b.m || a.e != b.e || a.s != b.s) return false;
    if (!type_eq(a.type, b.type)) return false;
    if (!ctx_eq(scoped_ctx(a.ctx, ea), scoped_ctx(b.ctx, eb))) return false;
    if (scoped_key(a.term, ea) != scoped_key(b.term, eb)) return false;
    if (a.premises.size() != b.premises.size()) return false;
    bool abs = is_abs(a.term), es = is_esub(a.term);
    for (std::size_t i = 0; i < a.premises.size(); ++i) {
        if (abs || (es && i == 0)) {
            Env na = ea, nb = eb;
            na.push_back(a.term->name);
            nb.push_back(b.term->name);
            if (!deriv_eq_in(a.premises[i], b.premises[i], na, nb)) return false;
        } else if (!deriv_eq_in(a.premises[i], b.premises[i], ea, eb)) {
            return false;
        }
    }
    return true;
}

}  // namespace

bool deriv_eq(const Derivation& a, const Derivation& b) { return deriv_eq_in(a, b, {}, {}); }

// ---------------------------------------------------------------- json

nlohmann::json type_to_json(const Type& t) {
    using nlohmann::json;
    switch (t->kind) {
    case TyKind::N: return "n";
    case TyKind::A: return "a";
    case TyKind::Vl: return "vl";
    case TyKind::Vr: return "vr";
    case TyKind::Mult: {
        json arr = json::array();
        for (auto& x : t->ms) arr.push_back(type_to_json(x));
        return json{{"mult", arr}};
    }
    case TyKind::Arrow: {
        json dom = json::array();
        for (auto& x : t->ms) dom.push_back(type_to_json(x));
        return json{{"arrow", {{"dom", dom}, {"cod", type_to_json(t->cod)}}}};
    }
    }
    return nullptr;
}

Type type_from_json(const nlohmann::json& j) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "n") return ty_n();
        if (s == "a") return ty_a();
        if (s == "vl") return ty_vl();
        if (s == "vr") return ty_vr();
        throw std::invalid_argument("unknown type constant " + s);
    }
    auto list = [](const nlohmann::json& a) {
        Multitype m;
        for (auto& x : a) m.push_back(type_from_json(x));
        return m;
    };
    if (j.contains("mult")) return ty_mult(list(j.at("mult")));
    if (j.contains("arrow")) {
        auto& a = j.at("arrow");
        return ty_arrow(list(a.at("dom")), type_from_json(a.at("cod")));
    }
    throw std::invalid_argument("malformed type: " + j.dump());
}

nlohmann::json to_json(const Derivation& d) {
    using nlohmann::json;
    json ctx = json::object();
    for (auto& [x, m] : d.ctx) {
        json arr = json::array();
        for (auto& t : m) arr.push_back(type_to_json(t));
        ctx[x] = arr;
    }
    json prem = json::array();
    for (auto& p : d.premises) prem.push_back(to_json(p));
    return json{{"rule", d.rule},
                {"ctx", ctx},
                {"term", print(d.term)},
                {"type", type_to_json(d.type)},
                {"counters", {d.m, d.e, d.s}},
                {"premises", prem}};
}

Derivation from_json(const nlohmann::json& j, Calculus c) {
    Derivation d;
    d.rule = j.at("rule").get<std::string>();
    for (auto& [x, arr] : j.at("ctx").items()) {
        Multitype m;
        for (auto& t : arr) m.push_back(type_from_json(t));
        if (!m.empty()) d.ctx[x] = canonical(m);
    }
    d.term = parse(j.at("term").get<std::string>(), c);
    d.type = type_from_json(j.at("type"));
    auto& k = j.at("counters");
    d.m = k.at(0).get<int>();
    d.e = k.at(1).get<int>();
    d.s = k.at(2).get<int>();
    for (auto& p : j.at("premises")) d.premises.push_back(from_json(p, c));
    return d;
}

}  // namespace lambang
