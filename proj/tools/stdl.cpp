#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stdl/search.hpp"
#include "stdl/translate.hpp"
#include "stdl/oracles.hpp"

using namespace stdl;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write " + path);
    out << text;
}

Propagation parse_mode(const std::string& s) {
    if (s == "lazy") return Propagation::Lazy;
    if (s == "eager") return Propagation::Eager;
    throw UsageError("--propagate must be lazy or eager");
}

int report(const Verdict& v, const char* yes, const char* no) {
    switch (v.kind) {
        case Verdict::Sat:
            std::cout << yes << "\n";
            return 0;
        case Verdict::Unsat:
            std::cout << no << "\n";
            return 1;
        case Verdict::Resource:
            std::cout << "RESOURCE\n";
            return 3;
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Satisfiability of spatio-temporal description logic concepts"};
    app.require_subcommand(1, 1);

    std::string tbox_path, concept_text, witness_path, scenario_path, mode = "lazy";
    size_t max_nodes = 0;
    auto* sat = app.add_subcommand("check-sat", "Decide satisfiability of a concept w.r.t. a TBox");
    sat->add_option("--tbox", tbox_path, "TBox file")->required();
    sat->add_option("--concept", concept_text, "Concept")->required();
    sat->add_option("--witness", witness_path, "Write the witness tree as DOT");
    sat->add_option("--scenario", scenario_path, "Write the witness scenario");
    sat->add_option("--propagate", mode, "lazy or eager");
    sat->add_option("--max-nodes", max_nodes, "Cap on unmarked witness nodes");

    std::string sub_text, super_text;
    auto* sub = app.add_subcommand("check-subsume", "Decide whether --sub is subsumed by --super");
    sub->add_option("--tbox", tbox_path, "TBox file")->required();
    sub->add_option("--sub", sub_text, "Subsumee")->required();
    sub->add_option("--super", super_text, "Subsumer")->required();
    sub->add_option("--propagate", mode, "lazy or eager");
    sub->add_option("--max-nodes", max_nodes, "Cap on unmarked witness nodes");

    std::string logic, formula;
    auto* tr = app.add_subcommand("translate", "Translate a PLTL or CTL formula into a TBox");
    tr->add_option("--logic", logic, "pltl or ctl")->required()->check(CLI::IsMember({"pltl", "ctl"}));
    tr->add_option("--formula", formula, "Formula")->required();

    bool show_automaton = false;
    auto* norm = app.add_subcommand("normalize", "Print the closed TBox and its metrics");
    norm->add_option("--tbox", tbox_path, "TBox file")->required();
    norm->add_option("--concept", concept_text, "Concept")->required();
    norm->add_flag("--automaton", show_automaton, "Also print the transition function");

    std::string qsp_path;
    auto* csp = app.add_subcommand("solve-csp", "Solve a qualitative constraint network");
    csp->add_option("file", qsp_path, "QSP file")->required();

    bool regen = false;
    std::string out_dir;
    auto* tables = app.add_subcommand("tables", "Composition tables");
    tables->add_flag("--regen", regen, "Rebuild the tables from the oracles and diff against the shipped ones");
    tables->add_option("--out", out_dir, "Directory to write regenerated tables to");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*sat || *sub) {
            TBox t = parse_tbox(slurp(tbox_path));
            SearchOptions opts{parse_mode(mode), max_nodes};
            if (*sub) {
                Concept c = Concept::conj({parse_concept(sub_text, t), Concept::neg(parse_concept(super_text, t))});
                Verdict v = decide_sat(t, c, opts);
                if (v.kind == Verdict::Resource) return report(v, "", "");
                std::cout << (v.kind == Verdict::Unsat ? "SUBSUMES" : "NOT-SUBSUMES") << "\n";
                return v.kind == Verdict::Unsat ? 0 : 1;
            }
            if (auto bad = validate_weakly_cyclic(t)) throw ValidationError(*bad);
            Automaton a = build_automaton(close_tbox(t, parse_concept(concept_text, t)));
            Verdict v = decide(a, opts);
            if (v.witness) {
                if (!witness_path.empty()) spit(witness_path, witness_dot(a, *v.witness));
                if (!scenario_path.empty()) spit(scenario_path, scenario_text(a, *v.witness));
            }
            return report(v, "SAT", "UNSAT");
        }
        if (*tr) {
            Formula f = parse_formula(formula);
            Translation out = logic == "pltl" ? pltl_to_tbox(f) : ctl_to_tbox(f);
            std::cout << "; root " << out.root << "\n" << out.tbox.str();
            return 0;
        }
        if (*norm) {
            TBox t = parse_tbox(slurp(tbox_path));
            if (auto bad = validate_weakly_cyclic(t)) throw ValidationError(*bad);
            ClosedTBox ct = close_tbox(t, parse_concept(concept_text, t));
            std::cout << ct.str() << "\n" << closure_metrics(ct).str();
            if (show_automaton) std::cout << "\n" << build_automaton(ct).dump();
            return 0;
        }
        if (*csp) {
            Qsp q = parse_qsp(slurp(qsp_path));
            auto s = solve_scenario(q);
            if (!s) {
                std::cout << "UNSAT\n";
                return 1;
            }
            std::cout << "SAT\n" << s->str();
            return 0;
        }
        if (*tables) {
            if (!regen) throw UsageError("tables needs --regen");
            int diffs = 0;
            auto fresh = oracle::generate_tables();
            for (auto& f : fresh) {
                if (!out_dir.empty()) spit(out_dir + "/" + f.name, f.text);
                const TableFile* shipped = nullptr;
                for (auto& s : shipped_tables())
                    if (s.name == f.name) shipped = &s;
                bool same = shipped && shipped->text == f.text;
                diffs += !same;
                std::cout << f.name << ": " << (same ? "identical" : "DIFFERS") << "\n";
            }
            return diffs ? 1 : 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
