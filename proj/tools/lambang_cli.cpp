#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "lambang/harness.hpp"
#include "lambang/rewriting.hpp"
#include "lambang/tight.hpp"
#include "lambang/translate.hpp"

using namespace lambang;

namespace {

enum Exit { Ok = 0, Failed = 1, Usage = 2, Fuel = 3 };

std::string read_all(std::istream& in) { return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()}; }

// `-` reads the term from stdin
std::string source(const std::string& arg) {
    if (arg != "-") return arg;
    std::string s = read_all(std::cin);
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    return s;
}

System parse_system(const std::string& s) {
    if (s == "N") return System::N;
    if (s == "V") return System::V;
    return System::B;
}

Calculus calculus_of_system(System s) { return s == System::B ? Calculus::Bang : Calculus::LambdaES; }

std::string triple(const Derivation& d) {
    return "(" + std::to_string(d.m) + "," + std::to_string(d.e) + "," + std::to_string(d.s) + ")";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tight typing and step-counted reduction for CBN, CBV and the bang calculus"};
    app.require_subcommand(1);

    std::string term_arg;
    int fuel = 1000;

    auto* norm = app.add_subcommand("norm", "normalize a term and count steps");
    std::string calc = "cbn";
    bool trace = false;
    norm->add_option("--calculus", calc, "cbn (dn), cbv (dv) or bang (fdet)")
        ->check(CLI::IsMember({"cbn", "cbv", "bang"}));
    norm->add_flag("--trace", trace, "print every step");
    norm->add_option("--fuel", fuel, "step budget")->check(CLI::PositiveNumber);
    norm->add_option("term", term_arg, "term, or - for stdin")->required();

    auto* type = app.add_subcommand("type", "synthesize a tight derivation");
    std::string sys = "N";
    bool emit_json = false;
    type->add_option("--system", sys, "N, V or B")->check(CLI::IsMember({"N", "V", "B"}));
    type->add_flag("--emit-json", emit_json, "print the derivation as JSON");
    type->add_option("--fuel", fuel, "step budget")->check(CLI::PositiveNumber);
    type->add_option("term", term_arg, "term, or - for stdin")->required();

    auto* tr = app.add_subcommand("translate", "embed a λES term into the bang calculus");
    std::string mode = "cbn";
    tr->add_option("--mode", mode, "cbn or cbv")->check(CLI::IsMember({"cbn", "cbv"}));
    tr->add_option("term", term_arg, "term, or - for stdin")->required();

    auto* check = app.add_subcommand("check", "validate a derivation JSON file");
    std::string file;
    check->add_option("--system", sys, "N, V or B")->check(CLI::IsMember({"N", "V", "B"}));
    check->add_option("file", file, "derivation JSON, or - for stdin")->required();

    auto* ver = app.add_subcommand("verify", "machine-check a theorem over enumerated terms");
    std::string theorem = "all";
    VerifyOptions vopt;
    bool vjson = false;
    ver->add_option("--theorem", theorem, "theorem id or all");
    ver->add_option("--max-size", vopt.max_size, "constructor bound")->check(CLI::PositiveNumber);
    ver->add_option("--fuel", vopt.fuel, "step budget")->check(CLI::PositiveNumber);
    ver->add_flag("--json", vjson, "print reports as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return Usage;
    }

    try {
        if (*norm) {
            Calculus c = calc == "bang" ? Calculus::Bang : Calculus::LambdaES;
            Strategy s = calc == "cbn" ? Strategy::dn : calc == "cbv" ? Strategy::dv : Strategy::fdet;
            Flavor fl = calc == "cbn" ? Flavor::n : calc == "cbv" ? Flavor::v : Flavor::f;
            Term t = parse(source(term_arg), c);
            NormResult r = normalize(t, s, fuel);
            if (trace) std::cout << trace_log(r.trace);
            if (!r.normal) {
                std::cerr << "fuel exhausted after " << fuel << " steps at " << print(r.nf()) << "\n";
                return Fuel;
            }
            std::cout << print(r.nf()) << "\n";
            std::cout << "m=" << r.trace.m << " e=" << r.trace.e << " size=" << size(r.nf(), fl) << "\n";
            return Ok;
        }
        if (*type) {
            System s = parse_system(sys);
            Term t = parse(source(term_arg), calculus_of_system(s));
            try {
                SynthesisResult r = synthesize_tight(t, s, fuel);
                // with JSON, stdout stays re-ingestable by `check`
                (emit_json ? std::cerr : std::cout) << triple(r.derivation) << "\n";
                if (emit_json) std::cout << to_json(r.derivation).dump(2) << "\n";
                return Ok;
            } catch (const TightError& e) {
                std::cerr << e.what() << "\n";
                return e.code == "NotNormalizing" ? Fuel : Failed;
            }
        }
        if (*tr) {
            Term t = parse(source(term_arg), Calculus::LambdaES);
            std::cout << print(mode == "cbn" ? cbn_term(t) : cbv_term(t)) << "\n";
            return Ok;
        }
        if (*check) {
            System s = parse_system(sys);
            std::string text;
            if (file == "-") {
                text = read_all(std::cin);
            } else {
                std::ifstream in(file);
                if (!in) {
                    std::cerr << "cannot open " << file << "\n";
                    return Usage;
                }
                text = read_all(in);
            }
            Derivation d;
            try {
                d = from_json(nlohmann::json::parse(text), calculus_of_system(s));
            } catch (const std::exception& e) {
                std::cerr << "malformed derivation: " << e.what() << "\n";
                return Usage;
            }
            CheckResult r = check_derivation(d, s);
            if (!r) {
                std::cerr << "invalid at " << (r.path.empty() ? "root" : r.path) << ": " << r.reason << "\n";
                return Failed;
            }
            std::cout << "ok " << triple(d) << (tight(d, s) ? " tight" : "") << "\n";
            return Ok;
        }
        if (*ver) {
            vopt.bang_max_size = vopt.max_size;
            std::vector<std::string> ids;
            if (theorem == "all") ids = theorem_ids();
            else if (known_theorem(theorem)) ids = {theorem};
            else {
                std::cerr << "unknown theorem " << theorem << "; known:";
                for (auto& id : theorem_ids()) std::cerr << " " << id;
                std::cerr << "\n";
                return Usage;
            }
            bool all_pass = true;
            nlohmann::json arr = nlohmann::json::array();
            for (auto& id : ids) {
                TheoremReport r = verify(id, vopt);
                all_pass = all_pass && r.pass();
                if (vjson) arr.push_back(report_json(r));
                else std::cout << report_text(r) << std::flush;
            }
            if (vjson) std::cout << (arr.size() == 1 ? arr[0] : arr).dump(2) << "\n";
            return all_pass ? Ok : Failed;
        }
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return Usage;
    } catch (const CalculusMismatch& e) {
        std::cerr << e.what() << "\n";
        return Usage;
    }
    return Usage;
}
