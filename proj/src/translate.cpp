#include "lambang/translate.hpp"

#include <optional>

#include "lambang/rewriting.hpp"
#include "lambang/tight.hpp"

namespace lambang {

Term cbn_term(const Term& t) {
    switch (t->kind) {
    case Kind::Var: return t;
    case Kind::Abs: return lam(t->name, cbn_term(t->a));
    case Kind::App: return app(cbn_term(t->a), bang(cbn_term(t->b)));
    case Kind::ESub: return esub(cbn_term(t->a), t->name, bang(cbn_term(t->b)));
    default: throw TranslateError("cbn: not a λES term: " + print(t));
    }
}

Term cbv_term(const Term& t) {
    switch (t->kind) {
    case Kind::Var: return bang(t);
    case Kind::Abs: return bang(lam(t->name, cbv_term(t->a)));
    case Kind::App: {
        Term f = cbv_term(t->a);
        ListCtx l = peel(f);
        if (is_bang(l.core)) return app(plug(l.layers, l.core->a), cbv_term(t->b));
        return app(der(f), cbv_term(t->b));
    }
    case Kind::ESub: return esub(cbv_term(t->a), t->name, cbv_term(t->b));
    default: throw TranslateError("cbv: not a λES term: " + print(t));
    }
}

// ---------------------------------------------------------------- types

Type cbn_type(const Type& t) { return t; }
Multitype cbn_type(const Multitype& m) { return m; }

Multitype cbv_type(const Multitype& m) {
    Multitype out;
    for (auto& s : m) out.push_back(cbv_type_neg(s));
    return canonical(out);
}

Type cbv_type_neg(const Type& t) {
    switch (t->kind) {
    case TyKind::Vr: return ty_n();
    case TyKind::Arrow: return ty_arrow(cbv_type(t->ms), cbv_type_pos(t->cod));
    case TyKind::Mult: return ty_mult(cbv_type(t->ms));
    default: return t;
    }
}

Type cbv_type_pos(const Type& t) {
    if (t->kind == TyKind::Vr) return ty_mult({ty_n()});
    return cbv_type_neg(t);
}

Context cbn_ctx(const Context& c) { return c; }

Context cbv_ctx(const Context& c) {
    Context out;
    for (auto& [x, m] : c) out[x] = cbv_type(m);
    return out;
}

// ---------------------------------------------------------------- derivations

Derivation translate_derivation_n(const Derivation& d) {
    const Term& t = d.term;
    Term bt = cbn_term(t);
    auto tr = [](const std::vector<Derivation>& P, std::size_t from) {
        std::vector<Derivation> out;
        for (std::size_t i = from; i < P.size(); ++i) out.push_back(translate_derivation_n(P[i]));
        return out;
    };
    const std::string& r = d.rule;
    if (r == "var_c") return var_axiom(t->name, d.type);
    if (r == "app_p") return conclude(System::B, "app_p", bt, {translate_derivation_n(d.premises.at(0)), bg_p(bt->b)});
    if (r == "abs_p" || r == "abs_c") return conclude(System::B, r, bt, tr(d.premises, 0));
    if (r == "app_c" || r == "es_c") {
        Term arg = bt->b;
        Derivation bg = conclude(System::B, "bg_c", arg, tr(d.premises, 1));
        return conclude(System::B, r, bt, {translate_derivation_n(d.premises.at(0)), bg});
    }
    throw TranslateError("no N rule " + r);
}

namespace {

// L<!s> : [σ] by bg_c at the base  ->  L<s> : σ
Derivation strip_bang(const Derivation& d) {
    if (d.rule == "bg_c") {
        if (d.premises.size() != 1) throw TranslateError("cannot strip a bang typed by several premises");
        return d.premises[0];
    }
    if (d.rule != "es_c" && d.rule != "es_p") throw TranslateError("cannot strip bang under " + d.rule);
    Derivation inner = strip_bang(d.premises.at(0));
    std::vector<Derivation> P{inner};
    for (std::size_t i = 1; i < d.premises.size(); ++i) P.push_back(d.premises[i]);
    return conclude(System::B, d.rule, esub(inner.term, d.term->name, d.term->b), std::move(P));
}

}  // namespace

Derivation translate_derivation_v(const Derivation& d) {
    const Term& t = d.term;
    const std::string& r = d.rule;
    if (r == "var_p") return conclude(System::B, "bg_c", bang(t), {var_axiom(t->name, ty_n())});
    if (r == "val_p" || r == "abs_p") return bg_p(cbv_term(t));
    if (r == "var_c") {
        std::vector<Derivation> P;
        for (auto& s : d.type->ms) P.push_back(var_axiom(t->name, cbv_type_neg(s)));
        return conclude(System::B, "bg_c", bang(t), std::move(P));
    }
    if (r == "abs_c") {
        Term body = cbv_term(t->a);
        Term l = lam(t->name, body);
        std::vector<Derivation> P;
        for (auto& p : d.premises) P.push_back(conclude(System::B, "abs_c", l, {translate_derivation_v(p)}));
        return conclude(System::B, "bg_c", bang(l), std::move(P));
    }
    if (r == "es_p" || r == "es_c")
        return conclude(System::B, r, cbv_term(t),
                        {translate_derivation_v(d.premises.at(0)), translate_derivation_v(d.premises.at(1))});
    if (r == "app_p" || r == "app_c" || r == "appt_c") {
        Derivation f = translate_derivation_v(d.premises.at(0));
        Derivation u = translate_derivation_v(d.premises.at(1));
        Term bt = cbv_term(t);
        if (is_value(t->a)) {
            f = strip_bang(f);
        } else {
            bool neg = f.type->kind == TyKind::N;
            f = conclude(System::B, neg ? "dr_p" : "dr_c", der(f.term), {f});
        }
        return conclude(System::B, r, bt, {f, u});
    }
    throw TranslateError("no V rule " + r);
}

// ---------------------------------------------------------------- measures

int countvr(const Derivation& d) {
    int sum = 0;
    for (auto& p : d.premises) sum += countvr(p);
    if (d.rule == "var_p") return 1;
    if (d.rule == "app_p" && is_value(d.term->a)) return sum - 1;
    if ((d.rule == "app_c" || d.rule == "appt_c") && !is_value(d.term->a)) return sum + 1;
    return sum;
}

namespace {

// r: the judgement sits in result position
int inverse_at(const Derivation& d, bool r) {
    const std::string& k = d.rule;
    if (k == "bg_c") {
        if (r && d.premises.size() == 1 && d.premises[0].rule == "var_c" && d.premises[0].type->kind == TyKind::N)
            return 1;
        int sum = 0;
        for (auto& p : d.premises) sum += inverse_at(p, r);
        return sum;
    }
    if (k == "abs_c" || k == "abs_p") return inverse_at(d.premises.at(0), true);
    if (k == "es_c" || k == "es_p") {
        int sum = inverse_at(d.premises.at(0), r);
        for (std::size_t i = 1; i < d.premises.size(); ++i) sum += inverse_at(d.premises[i], false);
        return sum;
    }
    int sum = 0;
    for (auto& p : d.premises) sum += inverse_at(p, false);
    if ((k == "app_c" || k == "appt_c") && is_der(peel(d.term->a).core)) sum += 1;
    return sum;
}

bool cbn_image(const Type& t) {
    switch (t->kind) {
    case TyKind::N:
    case TyKind::A: return true;
    case TyKind::Vl:
    case TyKind::Vr: return false;
    case TyKind::Arrow:
        for (auto& s : t->ms) if (!cbn_image(s)) return false;
        return cbn_image(t->cod);
    case TyKind::Mult:
        for (auto& s : t->ms) if (!cbn_image(s)) return false;
        return true;
    }
    return false;
}

bool cbv_image(const Type& t) {
    switch (t->kind) {
    case TyKind::N:
    case TyKind::Vl: return true;
    case TyKind::A:
    case TyKind::Vr: return false;
    case TyKind::Arrow:
    case TyKind::Mult:
        for (auto& s : t->ms) if (!cbv_image(s)) return false;
        return t->kind == TyKind::Mult || cbv_image(t->cod);
    }
    return false;
}

template <class F>
RelevanceReport scan(const Derivation& d, const std::string& path, F&& bad) {
    if (auto why = bad(d)) return {false, path.empty() ? "root" : path, *why};
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        auto r = scan(d.premises[i], path.empty() ? std::to_string(i) : path + "." + std::to_string(i), bad);
        if (!r) return r;
    }
    return {};
}

std::optional<std::string> ctx_outside(const Context& c, bool (*img)(const Type&)) {
    for (auto& [x, m] : c)
        for (auto& s : m)
            if (!img(s)) return "context type of " + x + " outside the image: " + to_string(s);
    return std::nullopt;
}

}  // namespace

int inversevr(const Derivation& d) { return inverse_at(d, true); }

RelevanceReport cbn_relevant(const Derivation& d) {
    return scan(d, "", [](const Derivation& n) -> std::optional<std::string> {
        if (auto w = ctx_outside(n.ctx, cbn_image)) return w;
        if (n.rule == "bg_p") return std::nullopt;
        if (!cbn_image(n.type)) return "judgement type outside the image: " + to_string(n.type);
        return std::nullopt;
    });
}

RelevanceReport cbv_relevant(const Derivation& d) {
    return scan(d, "", [](const Derivation& n) -> std::optional<std::string> {
        if (auto w = ctx_outside(n.ctx, cbv_image)) return w;
        if (!cbv_image(n.type)) return "judgement type outside the image: " + to_string(n.type);
        if (n.rule == "dr_c") {
            const Type& p = n.premises.at(0).type;
            if (p->kind != TyKind::Mult || p->ms.size() != 1 || p->ms[0]->kind != TyKind::Arrow)
                return "dr_c on " + to_string(p);
        }
        return std::nullopt;
    });
}

RelevanceReport bang_relevant(const Derivation& d) {
    if (d.type->kind == TyKind::Vr) return {false, "root", "derives vr"};
    return {};
}

bool has_adjacent_bangs(const Term& t) {
    if (is_bang(t) && is_bang(t->a)) return true;
    if (t->a && has_adjacent_bangs(t->a)) return true;
    if (t->b && has_adjacent_bangs(t->b)) return true;
    return false;
}

}  // namespace lambang
