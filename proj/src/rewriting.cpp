#include "lambang/rewriting.hpp"

#include <sstream>

namespace lambang {

std::string to_string(Rule r) {
    switch (r) {
    case Rule::dB: return "dB";
    case Rule::sn: return "sn";
    case Rule::sv: return "sv";
    case Rule::sBang: return "s!";
    case Rule::dBang: return "d!";
    }
    return "?";
}

std::optional<Rule> parse_rule(const std::string& s) {
    if (s == "dB") return Rule::dB;
    if (s == "sn") return Rule::sn;
    if (s == "sv") return Rule::sv;
    if (s == "s!") return Rule::sBang;
    if (s == "d!") return Rule::dBang;
    return std::nullopt;
}

bool is_abs_ctx(const Term& t) { return is_abs(peel(t).core); }

bool is_value(const Term& t) {
    const Term& c = peel(t).core;
    return is_var(c) || is_abs(c);
}

namespace {

// L<\x.s> u  ->  L<s[x := u]>, renaming L binders free in u
Term db_distance(const Term& f, const Term& u) {
    if (is_abs(f)) return esub(f->a, f->name, u);
    std::string y = f->name;
    Term body = f->a;
    if (has_free(u, y)) {
        std::set<std::string> avoid(u->fv.begin(), u->fv.end());
        avoid.insert(body->fv.begin(), body->fv.end());
        std::string y2 = fresh(y, avoid);
        body = rename_free(body, y, y2);
        y = y2;
    }
    return esub(db_distance(body, u), y, f->b);
}

// s[x := L<c>]  ->  L<s{x := val}>, renaming L binders free in s
Term subst_distance(const Term& s, const std::string& x, const Term& a, const Term& val) {
    if (!is_esub(a)) return subst_meta(s, x, val);
    std::string y = a->name;
    Term inner = a->a;
    if (y != x && has_free(s, y)) {
        std::set<std::string> avoid(s->fv.begin(), s->fv.end());
        avoid.insert(inner->fv.begin(), inner->fv.end());
        avoid.insert(x);
        std::string y2 = fresh(y, avoid);
        inner = rename_free(inner, y, y2);
        y = y2;
    }
    // the peeled core may have been renamed along with inner
    Term c = peel(inner).core;
    Term v = is_bang(c) ? c->a : c;
    return esub(subst_distance(s, x, inner, v), y, a->b);
}

}  // namespace

std::optional<Term> root_rule(const Term& t, Rule r) {
    switch (r) {
    case Rule::dB:
        if (is_app(t) && is_abs_ctx(t->a)) return db_distance(t->a, t->b);
        return std::nullopt;
    case Rule::sn:
        if (is_esub(t)) return subst_meta(t->a, t->name, t->b);
        return std::nullopt;
    case Rule::sv: {
        if (!is_esub(t)) return std::nullopt;
        Term c = peel(t->b).core;
        if (!is_var(c) && !is_abs(c)) return std::nullopt;
        return subst_distance(t->a, t->name, t->b, c);
    }
    case Rule::sBang: {
        if (!is_esub(t)) return std::nullopt;
        Term c = peel(t->b).core;
        if (!is_bang(c)) return std::nullopt;
        return subst_distance(t->a, t->name, t->b, c->a);
    }
    case Rule::dBang: {
        if (!is_der(t)) return std::nullopt;
        auto l = peel(t->a);
        if (!is_bang(l.core)) return std::nullopt;
        return plug(l.layers, l.core->a);
    }
    }
    return std::nullopt;
}

namespace {

std::optional<Step> wrap(std::optional<Step> s, Sel sel, const Term& t) {
    if (!s) return s;
    s->pos.insert(s->pos.begin(), sel);
    switch (sel) {
    case Sel::Fun: s->result = app(s->result, t->b); break;
    case Sel::Arg: s->result = app(t->a, s->result); break;
    case Sel::Body: s->result = lam(t->name, s->result); break;
    case Sel::SubBody: s->result = esub(s->result, t->name, t->b); break;
    case Sel::SubArg: s->result = esub(t->a, t->name, s->result); break;
    case Sel::BangBody: s->result = bang(s->result); break;
    case Sel::DerBody: s->result = der(s->result); break;
    }
    return s;
}

std::optional<Step> at_root(const Term& t, Rule r) {
    if (auto u = root_rule(t, r)) return Step{*u, r, {}};
    return std::nullopt;
}

std::optional<Step> step_dn(const Term& t) {
    switch (t->kind) {
    case Kind::Abs: return wrap(step_dn(t->a), Sel::Body, t);
    case Kind::App:
        if (is_abs_ctx(t->a)) return at_root(t, Rule::dB);
        return wrap(step_dn(t->a), Sel::Fun, t);
    case Kind::ESub: return at_root(t, Rule::sn);
    default: return std::nullopt;
    }
}

std::optional<Step> step_dv(const Term& t) {
    switch (t->kind) {
    case Kind::App: {
        if (is_abs_ctx(t->a)) return at_root(t, Rule::dB);
        if (auto s = step_dv(t->a)) return wrap(s, Sel::Fun, t);
        return wrap(step_dv(t->b), Sel::Arg, t);
    }
    case Kind::ESub: {
        if (is_value(t->b)) return at_root(t, Rule::sv);
        if (auto s = step_dv(t->b)) return wrap(s, Sel::SubArg, t);
        return wrap(step_dv(t->a), Sel::SubBody, t);
    }
    default: return std::nullopt;
    }
}

std::optional<Step> step_f(const Term& t) {
    switch (t->kind) {
    case Kind::App: {
        if (auto s = at_root(t, Rule::dB)) return s;
        if (auto s = step_f(t->a)) return wrap(s, Sel::Fun, t);
        return wrap(step_f(t->b), Sel::Arg, t);
    }
    case Kind::Abs: return wrap(step_f(t->a), Sel::Body, t);
    case Kind::Der: {
        if (auto s = at_root(t, Rule::dBang)) return s;
        return wrap(step_f(t->a), Sel::DerBody, t);
    }
    case Kind::ESub: {
        if (auto s = at_root(t, Rule::sBang)) return s;
        if (auto s = step_f(t->a)) return wrap(s, Sel::SubBody, t);
        return wrap(step_f(t->b), Sel::SubArg, t);
    }
    default: return std::nullopt;
    }
}

void add(std::vector<Step>& out, std::optional<Step> s) {
    if (s) out.push_back(std::move(*s));
}

void under(std::vector<Step>& out, std::vector<Step> inner, Sel sel, const Term& t) {
    for (auto& s : inner) out.push_back(*wrap(std::move(s), sel, t));
}

std::vector<Step> red(const Term& t, Relation r) {
    std::vector<Step> out;
    switch (t->kind) {
    case Kind::Var: break;
    case Kind::Abs:
        if (r != Relation::v) under(out, red(t->a, r), Sel::Body, t);
        break;
    case Kind::App:
        add(out, at_root(t, Rule::dB));
        under(out, red(t->a, r), Sel::Fun, t);
        if (r != Relation::n) under(out, red(t->b, r), Sel::Arg, t);
        break;
    case Kind::ESub:
        add(out, at_root(t, r == Relation::n ? Rule::sn : r == Relation::v ? Rule::sv : Rule::sBang));
        under(out, red(t->a, r), Sel::SubBody, t);
        if (r != Relation::n) under(out, red(t->b, r), Sel::SubArg, t);
        break;
    case Kind::Bang: break;
    case Kind::Der:
        if (r == Relation::f) {
            add(out, at_root(t, Rule::dBang));
            under(out, red(t->a, r), Sel::DerBody, t);
        }
        break;
    }
    return out;
}

}  // namespace

std::optional<Step> step(const Term& t, Strategy s) {
    switch (s) {
    case Strategy::dn: return step_dn(t);
    case Strategy::dv: return step_dv(t);
    case Strategy::fdet: return step_f(t);
    }
    return std::nullopt;
}

std::vector<Step> reducts(const Term& t, Relation r) { return red(t, r); }

NormResult normalize(const Term& t, Strategy s, int fuel) {
    NormResult res;
    res.trace.initial = t;
    Term cur = t;
    for (int i = 0; i < fuel; ++i) {
        auto st = step(cur, s);
        if (!st) {
            res.normal = true;
            return res;
        }
        res.trace.steps.push_back({st->pos, st->rule, cur, st->result});
        (is_mult(st->rule) ? res.trace.m : res.trace.e)++;
        cur = st->result;
    }
    res.normal = !step(cur, s);
    return res;
}

std::string trace_log(const Trace& tr) {
    std::ostringstream os;
    for (auto& s : tr.steps)
        os << to_string(s.pos) << ' ' << to_string(s.rule) << ' ' << print(s.before) << " ~> " << print(s.after)
           << '\n';
    os << "m=" << tr.m << " e=" << tr.e << '\n';
    return os.str();
}

int size(const Term& t, Flavor fl) {
    switch (t->kind) {
    case Kind::Var: return 0;
    case Kind::Abs: return fl == Flavor::v ? 0 : 1 + size(t->a, fl);
    case Kind::App: return fl == Flavor::n ? size(t->a, fl) + 1 : 1 + size(t->a, fl) + size(t->b, fl);
    case Kind::ESub: return fl == Flavor::n ? size(t->a, fl) : size(t->a, fl) + size(t->b, fl);
    case Kind::Bang: return 0;
    case Kind::Der: return size(t->a, fl);
    }
    return 0;
}

bool ne_n(const Term& t) { return is_var(t) || (is_app(t) && ne_n(t->a)); }
bool no_n(const Term& t) { return ne_n(t) || (is_abs(t) && no_n(t->a)); }

bool vr_v(const Term& t) { return is_var(t) || (is_esub(t) && vr_v(t->a) && ne_v(t->b)); }
bool ne_v(const Term& t) {
    if (is_app(t)) return (vr_v(t->a) || ne_v(t->a)) && no_v(t->b);
    if (is_esub(t)) return ne_v(t->a) && ne_v(t->b);
    return false;
}
bool no_v(const Term& t) {
    if (is_abs(t) || vr_v(t) || ne_v(t)) return true;
    return is_esub(t) && no_v(t->a) && ne_v(t->b);
}

bool ne_scf(const Term& t) {
    switch (t->kind) {
    case Kind::Var: return true;
    case Kind::App: return ne_scf(t->a) && na_scf(t->b);
    case Kind::Der: return ne_scf(t->a);
    case Kind::ESub: return ne_scf(t->a) && ne_scf(t->b);
    default: return false;
    }
}
bool na_scf(const Term& t) {
    if (is_bang(t) || ne_scf(t)) return true;
    return is_esub(t) && na_scf(t->a) && ne_scf(t->b);
}
bool nb_scf(const Term& t) {
    if (ne_scf(t)) return true;
    if (is_abs(t)) return no_scf(t->a);
    return is_esub(t) && nb_scf(t->a) && ne_scf(t->b);
}

std::string to_string(NormClass c) {
    switch (c) {
    case NormClass::NeutralN: return "NeutralN";
    case NormClass::NormalN: return "NormalN";
    case NormClass::VarV: return "VarV";
    case NormClass::NeutralV: return "NeutralV";
    case NormClass::NormalV: return "NormalV";
    case NormClass::NeScf: return "NeScf";
    case NormClass::NaScf: return "NaScf";
    case NormClass::NbScf: return "NbScf";
    case NormClass::NoScf: return "NoScf";
    case NormClass::ClashNormal: return "ClashNormal";
    case NormClass::Reducible: return "Reducible";
    }
    return "?";
}

NormClass classify(const Term& t, ClassFlavor fl) {
    switch (fl) {
    case ClassFlavor::n:
        if (ne_n(t)) return NormClass::NeutralN;
        if (no_n(t)) return NormClass::NormalN;
        return NormClass::Reducible;
    case ClassFlavor::v:
        if (vr_v(t)) return NormClass::VarV;
        if (ne_v(t)) return NormClass::NeutralV;
        if (no_v(t)) return NormClass::NormalV;
        return NormClass::Reducible;
    case ClassFlavor::scf:
        if (step(t, Strategy::fdet)) return NormClass::Reducible;
        if (ne_scf(t)) return NormClass::NeScf;
        if (na_scf(t)) return NormClass::NaScf;
        if (nb_scf(t)) return NormClass::NbScf;
        return NormClass::ClashNormal;
    }
    return NormClass::Reducible;
}

bool is_clash(const Term& b) {
    switch (b->kind) {
    case Kind::App: return is_bang(peel(b->a).core) || is_abs(peel(b->b).core);
    case Kind::ESub: return is_abs(peel(b->b).core);
    case Kind::Der: return is_abs(peel(b->a).core);
    default: return false;
    }
}

}  // namespace lambang
