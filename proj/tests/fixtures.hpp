#pragma once

#include <fstream>
#include <string>
#include <tuple>

#include <json.hpp>

#include "lambang/typesys.hpp"

#ifndef LAMBANG_TEST_DATA
#define LAMBANG_TEST_DATA "tests/data"
#endif

namespace fx {

// Hand-transcribed derivations from the worked examples.
inline lambang::Derivation load(const std::string& name, lambang::Calculus c) {
    std::ifstream in(std::string(LAMBANG_TEST_DATA) + "/" + name + ".json");
    if (!in) throw std::runtime_error("missing fixture " + name);
    return lambang::from_json(nlohmann::json::parse(in), c);
}

inline lambang::Derivation t0_n() { return load("t0_n", lambang::Calculus::LambdaES); }
inline lambang::Derivation t0p_b() { return load("t0p_b", lambang::Calculus::Bang); }
inline lambang::Derivation t0_v() { return load("t0_v", lambang::Calculus::LambdaES); }
inline lambang::Derivation cbv_t0_b() { return load("cbv_t0_b", lambang::Calculus::Bang); }
inline lambang::Derivation pair_v() { return load("pair_v", lambang::Calculus::LambdaES); }
inline lambang::Derivation pair_b() { return load("pair_b", lambang::Calculus::Bang); }

inline const char* t0 = R"((\x.\y.x) (z (\w.w)) ((\w.w) (\w.w)))";
inline const char* t0p = R"((\x.\y.x) !(z !(\w.w)) !((\w.w) !(\w.w)))";

inline std::tuple<int, int, int> counters(const lambang::Derivation& d) { return {d.m, d.e, d.s}; }

}  // namespace fx
