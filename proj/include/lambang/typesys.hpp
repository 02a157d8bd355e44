#pragma once

#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "lambang/syntax.hpp"

namespace lambang {

enum class System { N, V, B };
std::string to_string(System s);

enum class TyKind { N, A, Vl, Vr, Mult, Arrow };  // declaration order is the constant order

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;
using Multitype = std::vector<Type>;  // kept sorted

struct TypeNode {
    TyKind kind;
    Multitype ms;  // Mult elements or Arrow domain
    Type cod;      // Arrow codomain
};

Type ty_n();
Type ty_a();
Type ty_vl();
Type ty_vr();
Type ty_mult(Multitype m);
Type ty_arrow(Multitype dom, Type cod);

int compare(const Type& a, const Type& b);
inline bool type_eq(const Type& a, const Type& b) { return compare(a, b) == 0; }
int compare(const Multitype& a, const Multitype& b);
inline bool mt_eq(const Multitype& a, const Multitype& b) { return compare(a, b) == 0; }

Multitype canonical(Multitype m);
Multitype msum(const Multitype& a, const Multitype& b);

std::string to_string(const Type& t);
std::string to_string(const Multitype& m);

bool is_const(const Type& t);
bool is_tight_const(const Type& t, System s);
bool tight(const Multitype& m, System s);
bool valid(const Type& t, System s);

// name -> non-empty multitype
using Context = std::map<std::string, Multitype>;
Context ctx_sum(const Context& a, const Context& b);
Context ctx_minus(const Context& c, const std::string& x);
Multitype ctx_get(const Context& c, const std::string& x);
Context ctx_single(const std::string& x, Multitype m);
bool ctx_eq(const Context& a, const Context& b);
bool tight(const Context& c, System s);
std::string to_string(const Context& c);

struct Derivation {
    std::string rule;
    Context ctx;
    Term term;
    Type type;
    int m = 0, e = 0, s = 0;
    std::vector<Derivation> premises;
};

bool tight(const Derivation& d, System s);

struct CheckResult {
    bool ok = true;
    std::string path;    // premise indices from the root, e.g. "0.1"
    std::string reason;
    explicit operator bool() const { return ok; }
};

CheckResult check_derivation(const Derivation& d, System s);
std::tuple<int, int, int> rule_census_counters(const Derivation& d, System s);

// structural equality of derivations; subjects compared up to alpha
bool deriv_eq(const Derivation& a, const Derivation& b);

// walks every judgement, preorder
template <class F>
void for_each_node(const Derivation& d, F&& f) {
    f(d);
    for (auto& p : d.premises) for_each_node(p, f);
}

nlohmann::json type_to_json(const Type& t);
Type type_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Derivation& d);
Derivation from_json(const nlohmann::json& j, Calculus c);

}  // namespace lambang
