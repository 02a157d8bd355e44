#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lambang/rewriting.hpp"
#include "lambang/typesys.hpp"

namespace lambang {

struct TightError : std::runtime_error {
    std::string code;  // NotNormal, ClashNormalForm, NotNormalizing, StepMismatch, ...
    TightError(std::string c, const std::string& msg) : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

Strategy strategy_for(System s);
Flavor flavor_for(System s);

// Rebuilds a non-axiom node from its premises per the rule schema.
Derivation conclude(System sys, const std::string& rule, Term t, std::vector<Derivation> premises);

// axioms
Derivation var_axiom(const std::string& x, Type sigma);         // N, B var_c
Derivation var_c_v(const std::string& x, Multitype m);          // V var_c
Derivation var_p(const std::string& x);
Derivation val_p(const std::string& x);
Derivation abs_p_v(Term abs);
Derivation bg_p(Term b);

// Renames the free variable `from` to `to` in subjects and contexts.
Derivation rename_deriv(const Derivation& d, const std::string& from, const std::string& to, System sys);

Derivation type_normal_form(const Term& p, System s);

// N/B: one d_u per typed occurrence of x, consumed in preorder.
// V: du holds exactly one derivation of the value u.
Derivation substitute_derivation(const Derivation& dt, const std::string& x, const Term& u,
                                 const std::vector<Derivation>& du, System s);

// Inverse of substitute_derivation. For V the list holds exactly one (merged) value derivation.
std::pair<Derivation, std::vector<Derivation>> anti_substitute(const Derivation& d, const Term& skeleton,
                                                               const std::string& x, const Term& u, System s);

std::vector<Derivation> split_value(const Derivation& d, const std::vector<Multitype>& parts);
Derivation merge_value(const std::vector<Derivation>& ds, const Term& v);

Derivation expand_step(const Derivation& after, const TraceStep& st, System s);
Derivation reduce_step(const Derivation& before, const TraceStep& st, System s);

struct SynthesisResult {
    Derivation derivation;
    Trace trace;
    Term nf;
};

SynthesisResult synthesize_tight(const Term& t, System s, int fuel = 1000);

}  // namespace lambang
