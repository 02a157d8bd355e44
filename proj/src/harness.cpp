#include "lambang/harness.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "lambang/rewriting.hpp"
#include "lambang/tight.hpp"
#include "lambang/translate.hpp"

namespace lambang {

std::vector<Term> enumerate(const EnumSpec& spec) {
    const bool bang_calc = spec.calculus == Calculus::Bang;
    std::vector<std::vector<Term>> by_size(spec.max_constructors + 1);
    auto add = [](std::vector<Term>& bucket, std::unordered_set<std::string>& seen, Term t) {
        if (seen.insert(alpha_key(t)).second) bucket.push_back(std::move(t));
    };
    for (int n = 1; n <= spec.max_constructors; ++n) {
        std::unordered_set<std::string> seen;
        auto& out = by_size[n];
        if (n == 1) {
            for (auto& x : spec.var_pool) add(out, seen, var(x));
            continue;
        }
        for (auto& b : by_size[n - 1]) {
            for (auto& x : spec.var_pool) add(out, seen, lam(x, b));
            if (bang_calc) {
                add(out, seen, bang(b));
                add(out, seen, der(b));
            }
        }
        for (int i = 1; i < n - 1; ++i) {
            for (auto& f : by_size[i]) {
                for (auto& a : by_size[n - 1 - i]) {
                    add(out, seen, app(f, a));
                    for (auto& x : spec.var_pool) add(out, seen, esub(f, x, a));
                }
            }
        }
    }
    std::vector<Term> all;
    for (auto& bucket : by_size)
        for (auto& t : bucket)
            if (!spec.closed_only || t->fv.empty()) all.push_back(t);
    return all;
}

const std::vector<std::string>& theorem_ids() {
    static const std::vector<std::string> ids{
        "completeness-N", "completeness-V", "completeness-B", "confluence-f",  "simulation-cbn",
        "simulation-cbv", "translation-N",  "translation-V",  "census",        "counters-V",
        "expand-reduce",  "cbv-image",      "tight-transfer",
    };
    return ids;
}

bool known_theorem(const std::string& id) {
    const auto& ids = theorem_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

namespace {

std::string triple(int m, int e, int s) {
    return "(" + std::to_string(m) + "," + std::to_string(e) + "," + std::to_string(s) + ")";
}
std::string triple(const Derivation& d) { return triple(d.m, d.e, d.s); }

struct Run {
    TheoremReport rep;
    const VerifyOptions& opt;

    void fail(const Term& t, std::string expected, std::string got) {
        ++rep.failed;
        if (rep.failures.size() < opt.max_failures) rep.failures.push_back({print(t), std::move(expected), std::move(got)});
    }
    void skip(const Term& t, const std::string& why) {
        ++rep.skipped;
        if (rep.skip_notes.size() < 5) rep.skip_notes.push_back(print(t) + ": " + why);
    }
};

std::vector<Term> lambda_terms(const VerifyOptions& o) {
    return enumerate({o.max_size, {"x", "y", "z"}, Calculus::LambdaES, false});
}
std::vector<Term> bang_terms(const VerifyOptions& o) {
    return enumerate({o.bang_max_size, {"x", "y"}, Calculus::Bang, false});
}

// Normalizes and synthesizes; nullopt when the term is skipped or already failed.
std::optional<SynthesisResult> synth(Run& run, const Term& t, System s) {
    NormResult nr = normalize(t, strategy_for(s), run.opt.fuel);
    if (!nr.normal) {
        run.skip(t, "fuel exhausted");
        return std::nullopt;
    }
    if (s == System::B && !no_scf(nr.nf())) {
        run.skip(t, "clash normal form " + print(nr.nf()));
        return std::nullopt;
    }
    try {
        return synthesize_tight(t, s, run.opt.fuel);
    } catch (const TightError& e) {
        run.fail(t, "tight derivation", e.what());
    }
    return std::nullopt;
}

std::vector<Term> terms_for(System s, const VerifyOptions& o) {
    return s == System::B ? bang_terms(o) : lambda_terms(o);
}

void completeness(Run& run, System s) {
    for (auto& t : terms_for(s, run.opt)) {
        auto r = synth(run, t, s);
        if (!r) continue;
        ++run.rep.tested;
        const Derivation& d = r->derivation;
        std::string want = triple(r->trace.m, r->trace.e, size(r->nf, flavor_for(s)));
        auto ck = check_derivation(d, s);
        if (!ck) run.fail(t, "checker Ok", "at " + ck.path + ": " + ck.reason);
        else if (!tight(d, s)) run.fail(t, "tight", to_string(d.ctx) + " |- " + to_string(d.type));
        else if (triple(d) != want) run.fail(t, want, triple(d));
        else if (!alpha_eq(d.term, t)) run.fail(t, print(t), print(d.term));
    }
}

// (normal form key, m, e) for every maximal path
using Ends = std::set<std::tuple<std::string, int, int>>;

struct PathSearch {
    int cap;
    int guard;
    std::unordered_map<std::string, Ends> memo;
    bool capped = false;
    bool too_long = false;

    Ends go(const Term& t, int depth) {
        std::string k = alpha_key(t);
        if (auto it = memo.find(k); it != memo.end()) return it->second;
        if (depth > guard) {
            too_long = true;
            return {};
        }
        if (static_cast<int>(memo.size()) >= cap) {
            capped = true;
            return {};
        }
        Ends out;
        auto rs = reducts(t, Relation::f);
        if (rs.empty()) out.insert({k, 0, 0});
        for (auto& st : rs) {
            for (auto [nf, m, e] : go(st.result, depth + 1)) {
                if (is_mult(st.rule)) ++m;
                else ++e;
                out.insert({nf, m, e});
            }
            if (capped || too_long) return {};
        }
        memo.emplace(k, out);
        return out;
    }
};

void confluence(Run& run) {
    for (auto& t : bang_terms(run.opt)) {
        NormResult nr = normalize(t, Strategy::fdet, run.opt.fuel);
        if (!nr.normal) {
            run.skip(t, "fuel exhausted");
            continue;
        }
        PathSearch ps{run.opt.path_cap, nr.trace.m + nr.trace.e + 1, {}, false, false};
        Ends ends = ps.go(t, 0);
        if (ps.capped) {
            run.skip(t, "path cap reached");
            continue;
        }
        ++run.rep.tested;
        std::string want =
            print(nr.nf()) + " m=" + std::to_string(nr.trace.m) + " e=" + std::to_string(nr.trace.e);
        if (ps.too_long) {
            run.fail(t, want, "a path longer than the deterministic one");
            continue;
        }
        if (ends.size() != 1) {
            std::ostringstream got;
            got << ends.size() << " outcomes";
            for (auto& [k, m, e] : ends) got << " [m=" << m << " e=" << e << "]";
            run.fail(t, want, got.str());
            continue;
        }
        auto [k, m, e] = *ends.begin();
        if (k != alpha_key(nr.nf()) || m != nr.trace.m || e != nr.trace.e)
            run.fail(t, want, "m=" + std::to_string(m) + " e=" + std::to_string(e));
    }
}

bool has_reduct(const Term& from, const Term& to) {
    for (auto& st : reducts(from, Relation::f))
        if (alpha_eq(st.result, to)) return true;
    return false;
}

void simulation_cbn(Run& run) {
    for (auto& t : lambda_terms(run.opt)) {
        NormResult nr = normalize(t, Strategy::dn, run.opt.fuel);
        if (!nr.normal) {
            run.skip(t, "fuel exhausted");
            continue;
        }
        ++run.rep.tested;
        NormResult br = normalize(cbn_term(t), Strategy::fdet, run.opt.fuel);
        Term want = cbn_term(nr.nf());
        if (!br.normal) {
            run.fail(t, print(want), "image does not normalize");
            continue;
        }
        if (!alpha_eq(br.nf(), want) || br.trace.m != nr.trace.m || br.trace.e != nr.trace.e) {
            run.fail(t, print(want) + " m=" + std::to_string(nr.trace.m) + " e=" + std::to_string(nr.trace.e),
                     print(br.nf()) + " m=" + std::to_string(br.trace.m) + " e=" + std::to_string(br.trace.e));
            continue;
        }
        for (auto& st : nr.trace.steps) {
            if (!has_reduct(cbn_term(st.before), cbn_term(st.after))) {
                run.fail(t, "one f-step " + print(cbn_term(st.before)) + " ~> " + print(cbn_term(st.after)), "none");
                break;
            }
        }
    }
}

void simulation_cbv(Run& run) {
    for (auto& t : lambda_terms(run.opt)) {
        NormResult nr = normalize(t, Strategy::dv, run.opt.fuel);
        if (!nr.normal) {
            run.skip(t, "fuel exhausted");
            continue;
        }
        ++run.rep.tested;
        NormResult br = normalize(cbv_term(t), Strategy::fdet, run.opt.fuel);
        Term want = cbv_term(nr.nf());
        if (!br.normal) {
            run.fail(t, print(want), "image does not normalize");
            continue;
        }
        int ders = 0;
        for (auto& st : br.trace.steps)
            if (st.rule == Rule::dBang) ++ders;
        if (!alpha_eq(br.nf(), want) || br.trace.m != nr.trace.m || br.trace.e - nr.trace.e != ders) {
            run.fail(t,
                     print(want) + " m=" + std::to_string(nr.trace.m) + " e=" + std::to_string(nr.trace.e) + "+d!",
                     print(br.nf()) + " m=" + std::to_string(br.trace.m) + " e=" + std::to_string(br.trace.e) +
                         " d!=" + std::to_string(ders));
        }
    }
}

void translation_n(Run& run) {
    for (auto& t : lambda_terms(run.opt)) {
        auto r = synth(run, t, System::N);
        if (!r) continue;
        ++run.rep.tested;
        const Derivation& d = r->derivation;
        Derivation b;
        try {
            b = translate_derivation_n(d);
        } catch (const std::exception& e) {
            run.fail(t, "translation", e.what());
            continue;
        }
        auto ck = check_derivation(b, System::B);
        auto rel = cbn_relevant(b);
        if (!ck) run.fail(t, "checker Ok", "at " + ck.path + ": " + ck.reason);
        else if (!rel) run.fail(t, "cbn-relevant", "at " + rel.path + ": " + rel.reason);
        else if (triple(b) != triple(d)) run.fail(t, triple(d), triple(b));
        else if (!alpha_eq(b.term, cbn_term(t)) || !ctx_eq(b.ctx, cbn_ctx(d.ctx)) || !type_eq(b.type, cbn_type(d.type)))
            run.fail(t, "image judgement", to_string(b.ctx) + " |- " + print(b.term) + " : " + to_string(b.type));
    }
}

void translation_v(Run& run) {
    for (auto& t : lambda_terms(run.opt)) {
        auto r = synth(run, t, System::V);
        if (!r) continue;
        ++run.rep.tested;
        const Derivation& d = r->derivation;
        Derivation b;
        try {
            b = translate_derivation_v(d);
        } catch (const std::exception& e) {
            run.fail(t, "translation", e.what());
            continue;
        }
        int cv = countvr(d);
        std::vector<std::string> bad;
        if (auto ck = check_derivation(b, System::B); !ck) bad.push_back("checker at " + ck.path + ": " + ck.reason);
        if (auto rel = cbv_relevant(b); !rel) bad.push_back("not cbv-relevant at " + rel.path + ": " + rel.reason);
        std::string want = triple(d.m, d.e + cv, d.s);
        if (triple(b) != want) bad.push_back("counters " + triple(b) + " for " + want);
        if (inversevr(b) != cv)
            bad.push_back("inversevr " + std::to_string(inversevr(b)) + " for countvr " + std::to_string(cv));
        if (!alpha_eq(b.term, cbv_term(t)) || !ctx_eq(b.ctx, cbv_ctx(d.ctx)) || !type_eq(b.type, cbv_type_pos(d.type)))
            bad.push_back("image judgement " + to_string(b.ctx) + " |- " + print(b.term) + " : " + to_string(b.type));
        if (bad.empty()) continue;
        std::string got = bad[0];
        for (std::size_t i = 1; i < bad.size(); ++i) got += "; " + bad[i];
        run.fail(t, "checker Ok, cbv-relevant, " + want + ", inversevr " + std::to_string(cv), got);
    }
}

void census(Run& run) {
    for (System s : {System::N, System::V, System::B}) {
        for (auto& t : terms_for(s, run.opt)) {
            auto r = synth(run, t, s);
            if (!r) continue;
            ++run.rep.tested;
            bool ok = true;
            for_each_node(r->derivation, [&](const Derivation& n) {
                auto [m, e, sz] = rule_census_counters(n, s);
                if (ok && triple(m, e, sz) != triple(n)) {
                    ok = false;
                    run.fail(t, to_string(s) + " " + n.rule + " " + triple(n), triple(m, e, sz));
                }
            });
        }
    }
}

void counters_v(Run& run) {
    for (auto& t : lambda_terms(run.opt)) {
        auto r = synth(run, t, System::V);
        if (!r) continue;
        ++run.rep.tested;
        bool ok = true;
        for_each_node(r->derivation, [&](const Derivation& n) {
            if (!ok) return;
            if (n.e < 0 || (n.type->kind == TyKind::Mult && n.e <= 0)) {
                ok = false;
                run.fail(t, "e >= 0, and e > 0 on multitypes", n.rule + " " + to_string(n.type) + " e=" + std::to_string(n.e));
            }
        });
    }
}

void expand_reduce(Run& run) {
    for (System s : {System::N, System::V, System::B}) {
        for (auto& t : terms_for(s, run.opt)) {
            NormResult nr = normalize(t, strategy_for(s), run.opt.fuel);
            if (!nr.normal) {
                run.skip(t, "fuel exhausted");
                continue;
            }
            if (s == System::B && !no_scf(nr.nf())) {
                run.skip(t, "clash normal form");
                continue;
            }
            ++run.rep.tested;
            try {
                Derivation after = type_normal_form(nr.nf(), s);
                for (auto it = nr.trace.steps.rbegin(); it != nr.trace.steps.rend(); ++it) {
                    Derivation before = expand_step(after, *it, s);
                    Derivation back = reduce_step(before, *it, s);
                    int dm = is_mult(it->rule) ? 1 : 0;
                    if (!deriv_eq(back, after)) {
                        run.fail(t, to_string(s) + " reduce(expand(D)) = D at " + to_string(it->pos), "differs");
                        break;
                    }
                    if (before.m != after.m + dm || before.e != after.e + 1 - dm || before.s != after.s) {
                        run.fail(t, to_string(s) + " counters drop by one step", triple(before) + " -> " + triple(after));
                        break;
                    }
                    after = before;
                }
            } catch (const std::exception& e) {
                run.fail(t, to_string(s) + " expansion", e.what());
            }
        }
    }
}

void cbv_image(Run& run) {
    for (auto& t : lambda_terms(run.opt)) {
        ++run.rep.tested;
        Term v = cbv_term(t), n = cbn_term(t);
        if (has_adjacent_bangs(v)) run.fail(t, "no !!", print(v));
        else if (v->fv != t->fv || n->fv != t->fv) run.fail(t, "free variables preserved", print(n) + " / " + print(v));
    }
}

void tight_transfer(Run& run) {
    for (auto k : {TyKind::N, TyKind::A, TyKind::Vl, TyKind::Vr}) {
        Type c = std::make_shared<TypeNode>(TypeNode{k, {}, nullptr});
        ++run.rep.tested;
        if (k != TyKind::Vl && k != TyKind::Vr && is_tight_const(c, System::N) != is_tight_const(cbn_type(c), System::B))
            run.fail(var(to_string(c)), "N constant tightness kept", "changed");
        if (k != TyKind::A && is_tight_const(c, System::V) != is_tight_const(cbv_type_neg(c), System::B))
            run.fail(var(to_string(c)), "V constant tightness kept", "changed");
    }
    for (System s : {System::N, System::V}) {
        for (auto& t : lambda_terms(run.opt)) {
            auto r = synth(run, t, s);
            if (!r) continue;
            ++run.rep.tested;
            bool ok = true;
            for_each_node(r->derivation, [&](const Derivation& n) {
                if (!ok) return;
                bool src = tight(n.ctx, s);
                bool img = tight(s == System::N ? cbn_ctx(n.ctx) : cbv_ctx(n.ctx), System::B);
                if (src != img) {
                    ok = false;
                    run.fail(t, to_string(s) + " context " + to_string(n.ctx) + (src ? " tight" : " not tight"),
                             "image differs");
                }
            });
        }
    }
}

}  // namespace

TheoremReport verify(const std::string& theorem, const VerifyOptions& opt) {
    Run run{{}, opt};
    run.rep.theorem = theorem;
    if (theorem == "completeness-N") completeness(run, System::N);
    else if (theorem == "completeness-V") completeness(run, System::V);
    else if (theorem == "completeness-B") completeness(run, System::B);
    else if (theorem == "confluence-f") confluence(run);
    else if (theorem == "simulation-cbn") simulation_cbn(run);
    else if (theorem == "simulation-cbv") simulation_cbv(run);
    else if (theorem == "translation-N") translation_n(run);
    else if (theorem == "translation-V") translation_v(run);
    else if (theorem == "census") census(run);
    else if (theorem == "counters-V") counters_v(run);
    else if (theorem == "expand-reduce") expand_reduce(run);
    else if (theorem == "cbv-image") cbv_image(run);
    else if (theorem == "tight-transfer") tight_transfer(run);
    else throw std::invalid_argument("unknown theorem " + theorem);
    return run.rep;
}

std::string report_text(const TheoremReport& r) {
    std::ostringstream o;
    o << r.theorem << ": " << (r.pass() ? "PASS" : "FAIL") << " tested=" << r.tested << " skipped=" << r.skipped
      << " failed=" << r.failed << "\n";
    for (auto& f : r.failures) o << "  " << f.term << "\n    expected: " << f.expected << "\n    got:      " << f.got << "\n";
    if (r.failed > static_cast<long>(r.failures.size()))
        o << "  ... " << (r.failed - static_cast<long>(r.failures.size())) << " more\n";
    for (auto& s : r.skip_notes) o << "  skipped " << s << "\n";
    return o.str();
}

nlohmann::json report_json(const TheoremReport& r) {
    nlohmann::json failed = nlohmann::json::array();
    for (auto& f : r.failures) failed.push_back({{"term", f.term}, {"expected", f.expected}, {"got", f.got}});
    return {{"theorem", r.theorem}, {"tested", r.tested}, {"failed", failed}, {"failed_count", r.failed},
            {"skipped", r.skipped}, {"pass", r.pass()}};
}

}  // namespace lambang
