#pragma once

#include <string>

#include "lambang/typesys.hpp"

namespace lambang {

// embeddings of the λES calculus into λ!
Term cbn_term(const Term& t);
Term cbv_term(const Term& t);

Type cbn_type(const Type& t);
Multitype cbn_type(const Multitype& m);
Type cbv_type_neg(const Type& t);
Type cbv_type_pos(const Type& t);
Multitype cbv_type(const Multitype& m);  // neg and pos agree on multitypes
Context cbn_ctx(const Context& c);
Context cbv_ctx(const Context& c);

struct TranslateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// N derivation of t  ->  B derivation of cbn(t), same counters
Derivation translate_derivation_n(const Derivation& d);
// V derivation of t  ->  B derivation of cbv(t), e' = e + countvr
Derivation translate_derivation_v(const Derivation& d);

int countvr(const Derivation& d);    // V
int inversevr(const Derivation& d);  // B

struct RelevanceReport {
    bool relevant = true;
    std::string path;  // first offending node, premise indices from the root
    std::string reason;
    explicit operator bool() const { return relevant; }
};

RelevanceReport cbn_relevant(const Derivation& d);
RelevanceReport cbv_relevant(const Derivation& d);
RelevanceReport bang_relevant(const Derivation& d);

// true when the bang term contains !!t
bool has_adjacent_bangs(const Term& t);

}  // namespace lambang
