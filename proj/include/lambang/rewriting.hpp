#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lambang/syntax.hpp"

namespace lambang {

enum class Rule { dB, sn, sv, sBang, dBang };
inline bool is_mult(Rule r) { return r == Rule::dB; }
std::string to_string(Rule r);
std::optional<Rule> parse_rule(const std::string& s);

// Applies r at the root, through the list context. nullopt when the root is no r-redex.
std::optional<Term> root_rule(const Term& t, Rule r);

enum class Strategy { dn, dv, fdet };
enum class Relation { n, v, f };

struct Step {
    Term result;
    Rule rule;
    Position pos;
};

std::optional<Step> step(const Term& t, Strategy s);
std::vector<Step> reducts(const Term& t, Relation r);

struct TraceStep {
    Position pos;
    Rule rule;
    Term before;
    Term after;
};

struct Trace {
    Term initial;
    std::vector<TraceStep> steps;
    int m = 0;
    int e = 0;
    const Term& last() const { return steps.empty() ? initial : steps.back().after; }
};

struct NormResult {
    bool normal = false;  // false: fuel exhausted
    Trace trace;
    const Term& nf() const { return trace.last(); }
};

NormResult normalize(const Term& t, Strategy s, int fuel = 1000);

// `<pos> <kind> <before> ~> <after>` per step, then `m=<> e=<>`.
std::string trace_log(const Trace& tr);

enum class Flavor { n, v, f };
int size(const Term& t, Flavor fl);

enum class NormClass {
    NeutralN, NormalN,
    VarV, NeutralV, NormalV,
    NeScf, NaScf, NbScf, NoScf, ClashNormal,
    Reducible
};
enum class ClassFlavor { n, v, scf };
std::string to_string(NormClass c);
NormClass classify(const Term& t, ClassFlavor fl);

// grammar predicates
bool ne_n(const Term& t);
bool no_n(const Term& t);
bool vr_v(const Term& t);
bool ne_v(const Term& t);
bool no_v(const Term& t);
bool ne_scf(const Term& t);
bool na_scf(const Term& t);
bool nb_scf(const Term& t);
inline bool no_scf(const Term& t) { return na_scf(t) || nb_scf(t); }

// val(t): t = L<v> with v a variable or abstraction
bool is_value(const Term& t);
// abs(t): t = L<\x.u>
bool is_abs_ctx(const Term& t);

bool is_clash(const Term& b);

}  // namespace lambang
