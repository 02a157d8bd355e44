#include "lambang/tight.hpp"

#include <algorithm>
#include <functional>

namespace lambang {

Strategy strategy_for(System s) {
    switch (s) {
    case System::N: return Strategy::dn;
    case System::V: return Strategy::dv;
    case System::B: return Strategy::fdet;
    }
    return Strategy::fdet;
}

Flavor flavor_for(System s) {
    switch (s) {
    case System::N: return Flavor::n;
    case System::V: return Flavor::v;
    case System::B: return Flavor::f;
    }
    return Flavor::f;
}

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& msg) { throw TightError(code, msg); }

Derivation leaf(std::string rule, Term t, Context ctx, Type ty, int m, int e, int s) {
    Derivation d;
    d.rule = std::move(rule);
    d.term = std::move(t);
    d.ctx = std::move(ctx);
    d.type = std::move(ty);
    d.m = m;
    d.e = e;
    d.s = s;
    return d;
}

bool is_axiom(const Derivation& d, System sys) {
    if (!d.premises.empty()) return false;
    return d.rule == "var_c" || d.rule == "var_p" || d.rule == "val_p" || d.rule == "bg_p" ||
           (sys == System::V && d.rule == "abs_p");
}

bool is_binder(const Term& t) { return is_abs(t) || is_esub(t); }

// which child of t premise i types: 0 -> t->a, 1 -> t->b
int child_index(const Term& t, std::size_t i) { return (is_app(t) || is_esub(t)) && i > 0 ? 1 : 0; }

std::vector<Derivation> tail(const std::vector<Derivation>& P, std::size_t from) {
    return {P.begin() + static_cast<std::ptrdiff_t>(std::min(from, P.size())), P.end()};
}

}  // namespace

Derivation conclude(System sys, const std::string& rule, Term t, std::vector<Derivation> P) {
    auto need = [&](bool c) {
        if (!c) fail("NonExpandableShape", "cannot conclude " + rule + " on " + print(t));
    };
    int M = 0, E = 0, S = 0;
    Context all;
    for (auto& p : P) {
        M += p.m;
        E += p.e;
        S += p.s;
        all = ctx_sum(all, p.ctx);
    }
    Derivation d;
    d.rule = rule;
    d.term = t;
    d.m = M;
    d.e = E;
    d.s = S;
    if (rule == "app_p") {
        need(is_app(t) && !P.empty());
        d.type = ty_n();
        d.ctx = all;
        d.s += 1;
    } else if (rule == "abs_p") {
        need(sys != System::V && is_abs(t) && P.size() == 1);
        d.type = ty_a();
        d.ctx = ctx_minus(P[0].ctx, t->name);
        d.s += 1;
    } else if (rule == "abs_c") {
        need(is_abs(t));
        if (sys == System::V) {
            Multitype arrows;
            Context c;
            for (auto& p : P) {
                arrows.push_back(ty_arrow(ctx_get(p.ctx, t->name), p.type));
                c = ctx_sum(c, ctx_minus(p.ctx, t->name));
            }
            d.type = ty_mult(arrows);
            d.ctx = c;
            d.e += 1;
        } else {
            need(P.size() == 1);
            d.type = ty_arrow(ctx_get(P[0].ctx, t->name), P[0].type);
            d.ctx = ctx_minus(P[0].ctx, t->name);
        }
    } else if (rule == "app_c" || rule == "appt_c") {
        need(is_app(t) && !P.empty());
        const Type& f = P[0].type;
        d.ctx = all;
        d.m += 1;
        if (sys == System::V) {
            need(f->kind == TyKind::Mult && f->ms.size() == 1 && f->ms[0]->kind == TyKind::Arrow);
            d.type = f->ms[0]->cod;
            d.e -= 1;
        } else {
            need(f->kind == TyKind::Arrow);
            d.type = f->cod;
            if (sys == System::N) d.e += 1;
        }
    } else if (rule == "es_c" || rule == "es_p") {
        need(is_esub(t) && !P.empty());
        d.type = P[0].type;
        Context c = ctx_minus(P[0].ctx, t->name);
        for (std::size_t i = 1; i < P.size(); ++i) c = ctx_sum(c, P[i].ctx);
        d.ctx = c;
        if (sys == System::N && rule == "es_c") d.e += 1;
    } else if (rule == "bg_c") {
        need(is_bang(t));
        Multitype m;
        for (auto& p : P) m.push_back(p.type);
        d.type = ty_mult(m);
        d.ctx = all;
        d.e += 1;
    } else if (rule == "dr_p") {
        need(is_der(t) && P.size() == 1);
        d.type = ty_n();
        d.ctx = P[0].ctx;
    } else if (rule == "dr_c") {
        need(is_der(t) && P.size() == 1 && P[0].type->kind == TyKind::Mult && P[0].type->ms.size() == 1);
        d.type = P[0].type->ms[0];
        d.ctx = P[0].ctx;
    } else {
        fail("NonExpandableShape", "no schema to conclude rule " + rule);
    }
    d.premises = std::move(P);
    return d;
}

Derivation var_axiom(const std::string& x, Type sigma) {
    return leaf("var_c", var(x), ctx_single(x, {sigma}), sigma, 0, 0, 0);
}
Derivation var_c_v(const std::string& x, Multitype m) {
    m = canonical(std::move(m));
    return leaf("var_c", var(x), ctx_single(x, m), ty_mult(m), 0, 1, 0);
}
Derivation var_p(const std::string& x) { return leaf("var_p", var(x), ctx_single(x, {ty_vr()}), ty_vr(), 0, 0, 0); }
Derivation val_p(const std::string& x) { return leaf("val_p", var(x), {}, ty_vl(), 0, 0, 0); }
Derivation abs_p_v(Term abs) { return leaf("abs_p", std::move(abs), {}, ty_vl(), 0, 0, 0); }
Derivation bg_p(Term b) { return leaf("bg_p", std::move(b), {}, ty_vl(), 0, 0, 0); }

Derivation rename_deriv(const Derivation& d, const std::string& from, const std::string& to, System sys) {
    if (from == to || !has_free(d.term, from)) return d;
    Term nt = rename_free(d.term, from, to);
    if (d.premises.empty()) {
        Derivation out = d;
        out.term = nt;
        auto it = out.ctx.find(from);
        if (it != out.ctx.end()) {
            Multitype m = it->second;
            out.ctx.erase(it);
            out.ctx = ctx_sum(out.ctx, ctx_single(to, m));
        }
        return out;
    }
    const Term& t = d.term;
    std::vector<Derivation> P;
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        const auto& p = d.premises[i];
        if (is_binder(t) && child_index(t, i) == 0) {
            if (t->name == from) {
                P.push_back(p);
                continue;
            }
            auto y2 = capture_rename(t->name, t->a, from, var(to));
            Derivation q = y2 ? rename_deriv(p, t->name, *y2, sys) : p;
            P.push_back(rename_deriv(q, from, to, sys));
        } else {
            P.push_back(rename_deriv(p, from, to, sys));
        }
    }
    return conclude(sys, d.rule, nt, std::move(P));
}

// ---------------------------------------------------------------- normal forms

namespace {

Derivation tnf_n(const Term& p) {
    if (is_var(p)) return var_axiom(p->name, ty_n());
    if (is_app(p) && ne_n(p)) return conclude(System::N, "app_p", p, {tnf_n(p->a)});
    if (is_abs(p)) return conclude(System::N, "abs_p", p, {tnf_n(p->a)});
    fail("NotNormal", print(p) + " is not in no_n");
}

Derivation tnf_v_ne(const Term& p);
Derivation tnf_v_no(const Term& p);

Derivation tnf_v_vr(const Term& p) {
    if (is_var(p)) return var_p(p->name);
    if (is_esub(p)) return conclude(System::V, "es_p", p, {tnf_v_vr(p->a), tnf_v_ne(p->b)});
    fail("NotNormal", print(p) + " is not in vr_v");
}

Derivation tnf_v_ne(const Term& p) {
    if (is_app(p)) {
        Derivation head = vr_v(p->a) ? tnf_v_vr(p->a) : tnf_v_ne(p->a);
        return conclude(System::V, "app_p", p, {head, tnf_v_no(p->b)});
    }
    if (is_esub(p)) return conclude(System::V, "es_p", p, {tnf_v_ne(p->a), tnf_v_ne(p->b)});
    fail("NotNormal", print(p) + " is not in ne_v");
}

Derivation tnf_v_no(const Term& p) {
    if (is_abs(p)) return abs_p_v(p);
    if (is_var(p)) return val_p(p->name);
    if (ne_v(p)) return tnf_v_ne(p);
    if (is_esub(p)) return conclude(System::V, "es_p", p, {tnf_v_no(p->a), tnf_v_ne(p->b)});
    fail("NotNormal", print(p) + " is not in no_v");
}


Derivation tnf_b_no(const Term& p);

Derivation tnf_b_ne(const Term& p) {
    switch (p->kind) {
    case Kind::Var: return var_axiom(p->name, ty_n());
    case Kind::App: return conclude(System::B, "app_p", p, {tnf_b_ne(p->a), tnf_b_no(p->b)});
    case Kind::Der: return conclude(System::B, "dr_p", p, {tnf_b_ne(p->a)});
    case Kind::ESub: return conclude(System::B, "es_p", p, {tnf_b_ne(p->a), tnf_b_ne(p->b)});
    default: fail("ClashNormalForm", print(p) + " is not in ne_scf");
    }
}

// n for ne, vl for na, a for nb
Derivation tnf_b_no(const Term& p) {
    if (ne_scf(p)) return tnf_b_ne(p);
    if (is_bang(p)) return bg_p(p);
    if (is_abs(p)) return conclude(System::B, "abs_p", p, {tnf_b_no(p->a)});
    if (is_esub(p) && (na_scf(p) || nb_scf(p)))
        return conclude(System::B, "es_p", p, {tnf_b_no(p->a), tnf_b_ne(p->b)});
    fail("ClashNormalForm", print(p) + " is not in no_scf");
}

}  // namespace

Derivation type_normal_form(const Term& p, System s) {
    if (step(p, strategy_for(s))) fail("NotNormal", print(p) + " is reducible");
    switch (s) {
    case System::N: return tnf_n(p);
    case System::V: return tnf_v_no(p);
    case System::B:
        if (!no_scf(p)) fail("ClashNormalForm", print(p) + " is not in no_scf");
        return tnf_b_no(p);
    }
    fail("NotNormal", "unknown system");
}

// ---------------------------------------------------------------- substitution, N and B

namespace {

Derivation anti_nb(const Derivation& d, const Term& s, const std::string& x, const Term& u, System sys,
                   std::vector<Derivation>& out) {
    if (!has_free(s, x)) return d;
    if (is_var(s)) {
        out.push_back(d);
        return var_axiom(x, d.type);
    }
    if (d.term->kind != s->kind) fail("SkeletonMismatch", print(d.term) + " vs skeleton " + print(s));
    if (d.premises.empty()) {
        if (d.rule == "bg_p") return bg_p(s);
        if (d.rule == "bg_c") return conclude(sys, "bg_c", s, {});
        fail("SkeletonMismatch", "axiom " + d.rule + " over skeleton " + print(s));
    }
    std::vector<Derivation> P;
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        const auto& p = d.premises[i];
        int c = child_index(s, i);
        if (is_binder(s) && c == 0) {
            const std::string& y = s->name;
            if (y == x) {
                P.push_back(p);
                continue;
            }
            const std::string& y2 = d.term->name;
            Term b2 = y2 == y ? s->a : rename_free(s->a, y, y2);
            Derivation q = anti_nb(p, b2, x, u, sys, out);
            P.push_back(y2 == y ? q : rename_deriv(q, y2, y, sys));
        } else {
            P.push_back(anti_nb(p, c == 0 ? s->a : s->b, x, u, sys, out));
        }
    }
    return conclude(sys, d.rule, s, std::move(P));
}

Derivation subst_nb(const Derivation& d, const std::string& x, const Term& u, const std::vector<Derivation>& pool,
                    std::vector<bool>& used, System sys) {
    const Term& s = d.term;
    if (!has_free(s, x)) return d;
    if (is_var(s)) {
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!used[i] && type_eq(pool[i].type, d.type)) {
                used[i] = true;
                return pool[i];
            }
        }
        fail("ArityMismatch", "no argument derivation of type " + to_string(d.type));
    }
    Term nt = subst_meta(s, x, u);
    if (d.premises.empty()) {
        if (d.rule == "bg_p") return bg_p(nt);
        if (d.rule == "bg_c") return conclude(sys, "bg_c", nt, {});
        fail("SkeletonMismatch", "axiom " + d.rule + " over " + print(s));
    }
    std::vector<Derivation> P;
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        const auto& p = d.premises[i];
        if (is_binder(s) && child_index(s, i) == 0) {
            if (s->name == x) {
                P.push_back(p);
                continue;
            }
            auto y2 = capture_rename(s->name, s->a, x, u);
            Derivation q = y2 ? rename_deriv(p, s->name, *y2, sys) : p;
            P.push_back(subst_nb(q, x, u, pool, used, sys));
        } else {
            P.push_back(subst_nb(p, x, u, pool, used, sys));
        }
    }
    return conclude(sys, d.rule, nt, std::move(P));
}

// ---------------------------------------------------------------- substitution, V

Derivation empty_value(const Term& v) {
    if (is_var(v)) return var_c_v(v->name, {});
    if (is_abs(v)) return conclude(System::V, "abs_c", v, {});
    fail("NotAValue", print(v));
}

// body premises of an abs_c value derivation, with the binder aligned to v's
std::vector<Derivation> aligned_premises(const Derivation& d, const Term& v) {
    if (d.term->name == v->name) return d.premises;
    std::vector<Derivation> out;
    for (auto& p : d.premises) out.push_back(rename_deriv(p, d.term->name, v->name, System::V));
    return out;
}

Derivation anti_v(const Derivation& d, const Term& s, const std::string& x, const Term& v,
                  std::vector<Derivation>& out) {
    const System sys = System::V;
    if (!has_free(s, x)) return d;
    if (is_var(s)) {
        if (d.rule == "var_p") {
            if (!is_var(v)) fail("NotAValue", "var_p over a non-variable");
            out.push_back(var_c_v(v->name, {ty_vr()}));
            return var_p(x);
        }
        if (d.rule == "val_p" || d.rule == "abs_p") return val_p(x);
        if (d.rule == "var_c" || d.rule == "abs_c") {
            out.push_back(d);
            return var_c_v(x, d.type->ms);
        }
        fail("SkeletonMismatch", "rule " + d.rule + " types a substituted value");
    }
    if (d.term->kind != s->kind) fail("SkeletonMismatch", print(d.term) + " vs skeleton " + print(s));
    if (d.premises.empty()) {
        if (d.rule == "abs_p") return abs_p_v(s);
        if (d.rule == "abs_c") return conclude(sys, "abs_c", s, {});
        fail("SkeletonMismatch", "axiom " + d.rule + " over skeleton " + print(s));
    }
    std::vector<Derivation> P;
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        const auto& p = d.premises[i];
        int c = child_index(s, i);
        if (is_binder(s) && c == 0) {
            const std::string& y = s->name;
            if (y == x) {
                P.push_back(p);
                continue;
            }
            const std::string& y2 = d.term->name;
            Term b2 = y2 == y ? s->a : rename_free(s->a, y, y2);
            Derivation q = anti_v(p, b2, x, v, out);
            P.push_back(y2 == y ? q : rename_deriv(q, y2, y, sys));
        } else {
            P.push_back(anti_v(p, c == 0 ? s->a : s->b, x, v, out));
        }
    }
    return conclude(sys, d.rule, s, std::move(P));
}

using OccFn = std::function<Derivation(const Derivation&)>;

Derivation walk_v(const Derivation& d, const std::string& x, const Term& v, const OccFn& at_occ) {
    const System sys = System::V;
    const Term& s = d.term;
    if (!has_free(s, x)) return d;
    if (is_var(s)) return at_occ(d);
    Term nt = subst_meta(s, x, v);
    if (d.premises.empty()) {
        if (d.rule == "abs_p") return abs_p_v(nt);
        if (d.rule == "abs_c") return conclude(sys, "abs_c", nt, {});
        fail("SkeletonMismatch", "axiom " + d.rule + " over " + print(s));
    }
    std::vector<Derivation> P;
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        const auto& p = d.premises[i];
        if (is_binder(s) && child_index(s, i) == 0) {
            if (s->name == x) {
                P.push_back(p);
                continue;
            }
            auto y2 = capture_rename(s->name, s->a, x, v);
            Derivation q = y2 ? rename_deriv(p, s->name, *y2, sys) : p;
            P.push_back(walk_v(q, x, v, at_occ));
        } else {
            P.push_back(walk_v(p, x, v, at_occ));
        }
    }
    return conclude(sys, d.rule, nt, std::move(P));
}

Derivation subst_v(const Derivation& ds, const std::string& x, const Term& v, const Derivation& dv) {
    std::vector<Multitype> demand;
    walk_v(ds, x, v, [&](const Derivation& occ) {
        if (occ.rule == "var_p") demand.push_back({ty_vr()});
        else if (occ.rule == "val_p") demand.push_back({});
        else if (occ.rule == "var_c") demand.push_back(occ.type->ms);
        else fail("SkeletonMismatch", "occurrence typed by " + occ.rule);
        return occ;
    });
    std::vector<Derivation> parts = split_value(dv, demand);
    std::size_t k = 0;
    return walk_v(ds, x, v, [&](const Derivation& occ) -> Derivation {
        const Derivation& part = parts[k++];
        if (occ.rule == "var_p") {
            if (!is_var(v)) fail("NotAValue", "var_p occurrence replaced by an abstraction");
            return var_p(v->name);
        }
        if (occ.rule == "val_p") return is_var(v) ? val_p(v->name) : abs_p_v(v);
        return part;
    });
}

}  // namespace

std::vector<Derivation> split_value(const Derivation& d, const std::vector<Multitype>& parts) {
    const Term& v = d.term;
    Multitype total;
    for (auto& p : parts) total = msum(total, canonical(p));
    if (d.type->kind != TyKind::Mult || !mt_eq(d.type->ms, total))
        fail("ArityMismatch", "partition does not sum to " + to_string(d.type));
    std::vector<Derivation> out;
    if (is_var(v)) {
        if (d.rule != "var_c") fail("NotAValue", "variable typed by " + d.rule);
        for (auto& p : parts) out.push_back(var_c_v(v->name, p));
        return out;
    }
    if (!is_abs(v) || d.rule != "abs_c") fail("NotAValue", print(v));
    std::vector<bool> used(d.premises.size(), false);
    for (auto& part : parts) {
        Multitype need = canonical(part);
        std::vector<Derivation> taken;
        for (std::size_t i = 0; i < d.premises.size() && !need.empty(); ++i) {
            if (used[i]) continue;
            Type arr = ty_arrow(ctx_get(d.premises[i].ctx, v->name), d.premises[i].type);
            auto it = std::find_if(need.begin(), need.end(), [&](const Type& t) { return type_eq(t, arr); });
            if (it == need.end()) continue;
            need.erase(it);
            used[i] = true;
            taken.push_back(d.premises[i]);
        }
        if (!need.empty()) fail("ArityMismatch", "cannot split value derivation");
        out.push_back(conclude(System::V, "abs_c", v, std::move(taken)));
    }
    return out;
}

Derivation merge_value(const std::vector<Derivation>& ds, const Term& v) {
    if (ds.empty()) return empty_value(v);
    if (is_var(v)) {
        Multitype m;
        for (auto& d : ds) {
            if (d.rule != "var_c") fail("NotAValue", "variable typed by " + d.rule);
            m = msum(m, d.type->ms);
        }
        return var_c_v(v->name, m);
    }
    if (!is_abs(v)) fail("NotAValue", print(v));
    std::vector<Derivation> P;
    for (auto& d : ds) {
        if (d.rule != "abs_c") fail("NotAValue", "abstraction typed by " + d.rule);
        for (auto& p : aligned_premises(d, v)) P.push_back(p);
    }
    return conclude(System::V, "abs_c", v, std::move(P));
}

Derivation substitute_derivation(const Derivation& dt, const std::string& x, const Term& u,
                                 const std::vector<Derivation>& du, System s) {
    if (s == System::V) {
        if (du.size() != 1) fail("ArityMismatch", "V substitution takes one value derivation");
        return subst_v(dt, x, u, du[0]);
    }
    std::vector<bool> used(du.size(), false);
    Derivation r = subst_nb(dt, x, u, du, used, s);
    if (std::find(used.begin(), used.end(), false) != used.end())
        fail("ArityMismatch", "unused argument derivations");
    return r;
}

std::pair<Derivation, std::vector<Derivation>> anti_substitute(const Derivation& d, const Term& skeleton,
                                                               const std::string& x, const Term& u, System s) {
    std::vector<Derivation> out;
    if (s == System::V) {
        Derivation ds = anti_v(d, skeleton, x, u, out);
        return {ds, {merge_value(out, u)}};
    }
    Derivation ds = anti_nb(d, skeleton, x, u, s, out);
    return {ds, out};
}

// ---------------------------------------------------------------- root expansion / reduction

namespace {

struct DbParts {
    Derivation df;
    std::vector<Derivation> du;
    std::string mode;
};

// dc types the dB contractum of f u
DbParts exp_db(const Derivation& dc, const Term& f, const Term& u, System sys) {
    if (!is_esub(dc.term)) fail("StepMismatch", "dB contractum is not a closure");
    if (is_abs(f)) {
        Derivation body = dc.premises.at(0);
        if (dc.term->name != f->name) body = rename_deriv(body, dc.term->name, f->name, sys);
        DbParts r;
        r.df = conclude(sys, "abs_c", f, {body});
        r.du = tail(dc.premises, 1);
        if (sys == System::N) {
            if (dc.rule != "es_c") fail("NonExpandableShape", "N closure typed by " + dc.rule);
            r.mode = "app_c";
        } else {
            r.mode = dc.rule == "es_p" ? "appt_c" : "app_c";
        }
        return r;
    }
    if (!is_esub(f)) fail("StepMismatch", "dB redex without abstraction");
    const std::string& y = f->name;
    const std::string& y2 = dc.term->name;
    Term body2 = y2 == y ? f->a : rename_free(f->a, y, y2);
    DbParts inner = exp_db(dc.premises.at(0), body2, u, sys);
    Derivation db = y2 == y ? inner.df : rename_deriv(inner.df, y2, y, sys);
    std::vector<Derivation> P{db};
    for (auto& p : tail(dc.premises, 1)) P.push_back(p);
    inner.df = conclude(sys, dc.rule, f, std::move(P));
    return inner;
}

Derivation red_db(const Derivation& df, const Term& u, const std::vector<Derivation>& du, const std::string& mode,
                  System sys) {
    const Term& f = df.term;
    if (is_abs(f)) {
        if (df.rule != "abs_c" || df.premises.size() != 1)
            fail("NonExpandableShape", "dB redex abstraction typed by " + df.rule);
        std::string rule = sys == System::N ? "es_c" : (mode == "appt_c" ? "es_p" : "es_c");
        std::vector<Derivation> P{df.premises[0]};
        for (auto& p : du) P.push_back(p);
        return conclude(sys, rule, esub(f->a, f->name, u), std::move(P));
    }
    if (!is_esub(f)) fail("StepMismatch", "dB redex without abstraction");
    std::string y = f->name;
    Derivation body = df.premises.at(0);
    if (has_free(u, y)) {
        std::set<std::string> avoid(u->fv.begin(), u->fv.end());
        avoid.insert(f->a->fv.begin(), f->a->fv.end());
        std::string y2 = fresh(y, avoid);
        body = rename_deriv(body, y, y2, sys);
        y = y2;
    }
    Derivation inner = red_db(body, u, du, mode, sys);
    std::vector<Derivation> P{inner};
    for (auto& p : tail(df.premises, 1)) P.push_back(p);
    return conclude(sys, df.rule, esub(inner.term, y, f->b), std::move(P));
}

// dc types s{x := value} under the list context of a; returns derivations of s and a
std::pair<Derivation, Derivation> exp_sub(const Derivation& dc, const Term& s, const std::string& x, const Term& a,
                                          System sys) {
    if (!is_esub(a)) {
        if (sys == System::V) {
            std::vector<Derivation> out;
            Derivation ds = anti_v(dc, s, x, a, out);
            return {ds, merge_value(out, a)};
        }
        if (!is_bang(a)) fail("StepMismatch", "s! argument is not a bang");
        std::vector<Derivation> out;
        Derivation ds = anti_nb(dc, s, x, a->a, sys, out);
        return {ds, conclude(sys, "bg_c", a, std::move(out))};
    }
    if (!is_esub(dc.term)) fail("StepMismatch", "substitution contractum lost its list context");
    const std::string& y = a->name;
    const std::string& y2 = dc.term->name;
    Term inner2 = y2 == y ? a->a : rename_free(a->a, y, y2);
    auto [ds, dinner] = exp_sub(dc.premises.at(0), s, x, inner2, sys);
    Derivation di = y2 == y ? dinner : rename_deriv(dinner, y2, y, sys);
    std::vector<Derivation> P{di};
    for (auto& p : tail(dc.premises, 1)) P.push_back(p);
    return {ds, conclude(sys, dc.rule, a, std::move(P))};
}

Derivation red_sub(const Derivation& ds, const std::string& x, const Derivation& da, System sys) {
    const Term& a = da.term;
    const Term& s = ds.term;
    if (!is_esub(a)) {
        if (sys == System::V) return subst_v(ds, x, a, da);
        if (da.rule != "bg_c") fail("NonExpandableShape", "s! argument typed by " + da.rule);
        std::vector<bool> used(da.premises.size(), false);
        Derivation r = subst_nb(ds, x, a->a, da.premises, used, sys);
        if (std::find(used.begin(), used.end(), false) != used.end())
            fail("ArityMismatch", "unused argument derivations");
        return r;
    }
    std::string y = a->name;
    Derivation inner = da.premises.at(0);
    if (y != x && has_free(s, y)) {
        std::set<std::string> avoid(s->fv.begin(), s->fv.end());
        avoid.insert(a->a->fv.begin(), a->a->fv.end());
        avoid.insert(x);
        std::string y2 = fresh(y, avoid);
        inner = rename_deriv(inner, y, y2, sys);
        y = y2;
    }
    Derivation body = red_sub(ds, x, inner, sys);
    std::vector<Derivation> P{body};
    for (auto& p : tail(da.premises, 1)) P.push_back(p);
    return conclude(sys, da.rule, esub(body.term, y, a->b), std::move(P));
}

// dc types L<s>; a = L<!s>
Derivation exp_der(const Derivation& dc, const Term& a) {
    if (is_bang(a)) return conclude(System::B, "bg_c", a, {dc});
    if (!is_esub(a) || !is_esub(dc.term)) fail("StepMismatch", "d! list context mismatch");
    Derivation body = dc.premises.at(0);
    if (dc.term->name != a->name) body = rename_deriv(body, dc.term->name, a->name, System::B);
    std::vector<Derivation> P{exp_der(body, a->a)};
    for (auto& p : tail(dc.premises, 1)) P.push_back(p);
    return conclude(System::B, dc.rule, a, std::move(P));
}

Derivation red_der(const Derivation& da) {
    const Term& a = da.term;
    if (is_bang(a)) {
        if (da.rule != "bg_c" || da.premises.size() != 1) fail("NonExpandableShape", "d! bang typed by " + da.rule);
        return da.premises[0];
    }
    Derivation inner = red_der(da.premises.at(0));
    std::vector<Derivation> P{inner};
    for (auto& p : tail(da.premises, 1)) P.push_back(p);
    return conclude(System::B, da.rule, esub(inner.term, a->name, a->b), std::move(P));
}

Derivation expand_root(const Derivation& dc, const Term& r, Rule rule, System sys) {
    switch (rule) {
    case Rule::dB: {
        if (!is_app(r)) fail("StepMismatch", "dB on non-application");
        DbParts parts = exp_db(dc, r->a, r->b, sys);
        std::vector<Derivation> P{parts.df};
        for (auto& p : parts.du) P.push_back(p);
        return conclude(sys, parts.mode, r, std::move(P));
    }
    case Rule::sn: {
        if (!is_esub(r)) fail("StepMismatch", "sn on non-closure");
        std::vector<Derivation> out;
        Derivation ds = anti_nb(dc, r->a, r->name, r->b, sys, out);
        std::vector<Derivation> P{ds};
        for (auto& p : out) P.push_back(p);
        return conclude(sys, "es_c", r, std::move(P));
    }
    case Rule::sv:
    case Rule::sBang: {
        if (!is_esub(r)) fail("StepMismatch", "substitution on non-closure");
        auto [ds, da] = exp_sub(dc, r->a, r->name, r->b, sys);
        return conclude(sys, "es_c", r, {ds, da});
    }
    case Rule::dBang:
        if (!is_der(r)) fail("StepMismatch", "d! on non-dereliction");
        return conclude(System::B, "dr_c", r, {exp_der(dc, r->a)});
    }
    fail("StepMismatch", "unknown rule");
}

Derivation reduce_root(const Derivation& d, Rule rule, System sys) {
    switch (rule) {
    case Rule::dB:
        if (d.rule != "app_c" && d.rule != "appt_c") fail("NonExpandableShape", "dB redex typed by " + d.rule);
        return red_db(d.premises.at(0), d.term->b, tail(d.premises, 1), d.rule, sys);
    case Rule::sn: {
        if (d.rule != "es_c") fail("NonExpandableShape", "sn redex typed by " + d.rule);
        std::vector<Derivation> pool = tail(d.premises, 1);
        std::vector<bool> used(pool.size(), false);
        Derivation r = subst_nb(d.premises.at(0), d.term->name, d.term->b, pool, used, sys);
        if (std::find(used.begin(), used.end(), false) != used.end())
            fail("ArityMismatch", "unused argument derivations");
        return r;
    }
    case Rule::sv:
    case Rule::sBang:
        if (d.rule != "es_c") fail("NonExpandableShape", "substitution redex typed by " + d.rule);
        return red_sub(d.premises.at(0), d.term->name, d.premises.at(1), sys);
    case Rule::dBang:
        if (d.rule != "dr_c") fail("NonExpandableShape", "d! redex typed by " + d.rule);
        return red_der(d.premises.at(0));
    }
    fail("StepMismatch", "unknown rule");
}

Term child_of(const Term& t, Sel s) { return subterm(t, Position{s}); }

std::vector<std::size_t> premises_at(const Derivation& d, Sel s) {
    std::vector<std::size_t> out;
    std::size_t n = d.premises.size();
    switch (s) {
    case Sel::Fun:
    case Sel::SubBody:
    case Sel::DerBody:
        if (n > 0) out.push_back(0);
        break;
    case Sel::Arg:
    case Sel::SubArg:
        for (std::size_t i = 1; i < n; ++i) out.push_back(i);
        break;
    case Sel::Body:
    case Sel::BangBody:
        for (std::size_t i = 0; i < n; ++i) out.push_back(i);
        break;
    }
    return out;
}

using RootFn = std::function<Derivation(const Derivation&, const Term&)>;

Derivation at_pos(const Derivation& d, const Position& p, std::size_t depth, const Term& target, System sys,
                  const RootFn& root) {
    if (depth == p.size()) return root(d, target);
    if (is_axiom(d, sys) || (d.premises.empty() && d.rule != "abs_c" && d.rule != "bg_c")) {
        Derivation out = d;
        out.term = target;
        return out;
    }
    Sel sel = p[depth];
    Term ct = child_of(target, sel);
    std::vector<Derivation> P = d.premises;
    for (auto i : premises_at(d, sel)) P[i] = at_pos(P[i], p, depth + 1, ct, sys, root);
    return conclude(sys, d.rule, target, std::move(P));
}

}  // namespace

Derivation expand_step(const Derivation& after, const TraceStep& st, System s) {
    if (!alpha_eq(after.term, st.after)) fail("StepMismatch", "derivation subject is not the step's target");
    Term contractum = subterm(st.after, st.pos);
    return at_pos(after, st.pos, 0, st.before, s, [&](const Derivation& dc, const Term& r) {
        auto c = root_rule(r, st.rule);
        if (!c || !alpha_eq(*c, contractum)) fail("StepMismatch", "recorded step does not fire at its position");
        return expand_root(dc, r, st.rule, s);
    });
}

Derivation reduce_step(const Derivation& before, const TraceStep& st, System s) {
    if (!alpha_eq(before.term, st.before)) fail("StepMismatch", "derivation subject is not the step's source");
    return at_pos(before, st.pos, 0, st.after, s,
                  [&](const Derivation& d, const Term&) { return reduce_root(d, st.rule, s); });
}

SynthesisResult synthesize_tight(const Term& t, System s, int fuel) {
    NormResult nr = normalize(t, strategy_for(s), fuel);
    if (!nr.normal) fail("NotNormalizing", "fuel exhausted after " + std::to_string(fuel) + " steps");
    Term nf = nr.nf();
    Derivation d = type_normal_form(nf, s);
    for (auto it = nr.trace.steps.rbegin(); it != nr.trace.steps.rend(); ++it) d = expand_step(d, *it, s);
    return {std::move(d), std::move(nr.trace), nf};
}

}  // namespace lambang
