#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lambang {

enum class Kind { Var, Abs, App, ESub, Bang, Der };
enum class Calculus { LambdaES, Bang };

struct Node;
using Term = std::shared_ptr<const Node>;

// Immutable term node. ESub(body, x, arg) is body[x := arg].
struct Node {
    Kind kind;
    std::string name;  // variable or binder
    Term a;            // body / fun / ESub body / bang body / der body
    Term b;            // arg / ESub arg
    std::vector<std::string> fv;  // sorted free variables
    int nodes = 1;
    bool bangs = false;           // contains ! or der
};

Term var(std::string x);
Term lam(std::string x, Term body);
Term app(Term f, Term a);
Term esub(Term body, std::string x, Term arg);
Term bang(Term t);
Term der(Term t);

Term app_spine(Term f, std::vector<Term> args);

inline bool is_var(const Term& t) { return t->kind == Kind::Var; }
inline bool is_abs(const Term& t) { return t->kind == Kind::Abs; }
inline bool is_app(const Term& t) { return t->kind == Kind::App; }
inline bool is_esub(const Term& t) { return t->kind == Kind::ESub; }
inline bool is_bang(const Term& t) { return t->kind == Kind::Bang; }
inline bool is_der(const Term& t) { return t->kind == Kind::Der; }

Calculus calculus_of(const Term& t);

std::set<std::string> free_vars(const Term& t);
bool has_free(const Term& t, const std::string& x);

bool alpha_eq(const Term& t, const Term& u);
// Nameless rendering: alpha-equivalent terms and only those share a key.
std::string alpha_key(const Term& t);

// Appends primes to base until it avoids every name in avoid.
std::string fresh(const std::string& base, const std::set<std::string>& avoid);

// Binder renaming performed when pushing {x:=u} under a binder y scoping over body.
// Returns the new binder name if y would capture a free variable of u.
std::optional<std::string> capture_rename(const std::string& y, const Term& body,
                                          const std::string& x, const Term& u);

Term subst_meta(const Term& t, const std::string& x, const Term& u);
Term rename_free(const Term& t, const std::string& from, const std::string& to);

// Child selectors
enum class Sel : unsigned char { Fun, Arg, Body, SubBody, SubArg, BangBody, DerBody };
using Position = std::vector<Sel>;

std::string to_string(const Position& p);
std::optional<Position> parse_position(const std::string& s);
Term subterm(const Term& t, const Position& p);
Term replace_at(const Term& t, const Position& p, std::size_t depth, const Term& r);
inline Term replace_at(const Term& t, const Position& p, const Term& r) { return replace_at(t, p, 0, r); }

// List contexts L ::= [] | L[x := u]. Peels ESubs off the top.
struct ListCtx {
    struct Layer { std::string x; Term arg; };
    std::vector<Layer> layers;  // outermost first
    Term core;
};
ListCtx peel(const Term& t);
Term plug(const std::vector<ListCtx::Layer>& layers, Term core);

struct ParseError : std::runtime_error {
    std::size_t offset;
    ParseError(std::size_t off, const std::string& msg);
};
struct CalculusMismatch : std::runtime_error {
    std::size_t offset;
    CalculusMismatch(std::size_t off, const std::string& msg);
};

Term parse(const std::string& src, Calculus c);
std::string print(const Term& t);

}  // namespace lambang
