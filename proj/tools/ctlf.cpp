// ============================================================================
// ctlf: command-line front end
// ============================================================================
//
//   ctlf sat [--engine E] [--max-worlds N] [--witness FILE] [FORMULA...]
//   ctlf mc STRUCTURE FORMULA
//   ctlf reduce qbf-af|qbf-ag [QBF]        (stdin when omitted)
//   ctlf reduce atm MACHINE INPUT --variant ag_ax|ag_af|au|ar
//   ctlf gen FAMILY [--m M] [--k K] [--n N]
//   ctlf translate base|s1 --target FILE FORMULA
//   ctlf translate ag FORMULA
//   ctlf measure size|extent --cap N FORMULA
//   ctlf quasi from-model STRUCTURE FORMULA
//   ctlf quasi check QUASI FORMULA [--q7]
//
// Global: --format text|json|dot, --base FILE, --no-timing.
// Exit status: 0 definitive answer, 2 unknown or budget exhausted, 1 usage
// or input error.
//
// ============================================================================

#include "ctlf/clones.hpp"
#include "ctlf/measure.hpp"
#include "ctlf/reductions.hpp"
#include "ctlf/sat.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace ctlf;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kUnknown = 2 };

struct Globals {
    std::string format = "text";
    std::string base_file;
    bool no_timing = false;
    Base base = standard_base();
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("io", "cannot write '" + path + "'");
    out << text;
}

/// Non-empty, non-comment lines of standard input.
std::vector<std::string> stdin_lines() {
    std::vector<std::string> lines;
    for (std::string line; std::getline(std::cin, line);) {
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        lines.push_back(line);
    }
    return lines;
}

std::string stdin_all() {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
}

void emit(const Globals& g, const json& j, const std::string& text) {
    if (g.format == "json")
        std::cout << j.dump() << '\n';
    else
        std::cout << text << '\n';
}

json stats_json(const Globals& g, std::size_t nodes, double millis) {
    json s;
    s["nodes"] = nodes;
    if (!g.no_timing) s["millis"] = millis;
    return s;
}

// ── commands ────────────────────────────────────────────────────────────────

int cmd_sat(const Globals& g, std::vector<std::string> formulas, const std::string& engine, int max_worlds,
            const std::string& witness) {
    if (formulas.empty()) formulas = stdin_lines();
    if (formulas.empty()) throw Error("usage", "no formula given");
    if (!witness.empty() && formulas.size() > 1) throw Error("usage", "--witness needs a single formula");
    Engine e = parse_engine(engine);
    int code = kOk;
    for (auto& text : formulas) {
        Formula f = parse_formula(text, g.base);
        SatResult r = run_engine(e, f, Budget::from_env(), max_worlds);
        if (r.sat() && !witness_confirms(r, f)) throw std::logic_error("witness fails model check");
        if (r.unknown()) code = kUnknown;
        if (r.sat() && !witness.empty()) write_file(witness, write_structure(*r.witness));
        if (g.format == "dot") {
            std::cout << (r.sat() ? to_dot(*r.witness) : std::string("// ") + to_string(r.status) + "\n");
            continue;
        }
        json j;
        j["status"] = to_string(r.status);
        j["engine"] = r.engine;
        j["stats"] = stats_json(g, r.stats.nodes, r.stats.millis);
        if (r.sat()) {
            j["size"] = r.witness->size();
            j["extent"] = extent(*r.witness);
            if (!witness.empty()) j["witness"] = witness;
        }
        if (r.unsat()) j["exhaustive"] = r.exhaustive;
        if (!r.reason.empty()) j["reason"] = r.reason;
        emit(g, j, to_string(r.status));
    }
    return code;
}

int cmd_mc(const Globals& g, const std::string& structure, const std::string& formula) {
    Model m = parse_structure(read_file(structure));
    Formula f = parse_formula(formula, g.base);
    bool holds = model_check(m, f);
    if (g.format == "dot") {
        std::cout << to_dot(m);
        return kOk;
    }
    json j;
    j["result"] = holds;
    emit(g, j, holds ? "true" : "false");
    return kOk;
}

int emit_formula(const Globals& g, Formula f) {
    json j;
    j["formula"] = render(f);
    j["size"] = f->size;
    j["depth"] = temporal_depth(f);
    emit(g, j, render(f));
    return kOk;
}

int cmd_reduce(const Globals& g, const std::string& kind, std::vector<std::string> args, const std::string& variant) {
    if (kind == "qbf-af" || kind == "qbf-ag") {
        std::string text;
        for (auto& a : args) text += (text.empty() ? "" : " ") + a;
        if (text.empty()) text = stdin_all();
        Qbf q = parse_qbf(text);
        return emit_formula(g, kind == "qbf-af" ? reduce_qbf_af(q) : reduce_qbf_ag(q));
    }
    if (kind == "atm") {
        if (args.size() != 2) throw Error("usage", "reduce atm needs MACHINE and INPUT");
        Atm m = parse_atm(read_file(args[0]));
        std::string input = args[1] == "-" ? "" : args[1];
        return emit_formula(g, encode_atm(m, input, parse_atm_variant(variant)));
    }
    throw Error("usage", "unknown reduction '" + kind + "'");
}

int cmd_translate(const Globals& g, const std::string& kind, const std::string& formula, const std::string& target) {
    Formula f = parse_formula(formula, g.base);
    if (kind == "ag") return emit_formula(g, ag_translate(f));
    if (target.empty()) throw Error("usage", "translate " + kind + " needs --target FILE");
    Base t = parse_base(read_file(target));
    if (kind == "base") return emit_formula(g, base_translate(f, t));
    if (kind == "s1") return emit_formula(g, s1_transform(f, t));
    throw Error("usage", "unknown translation '" + kind + "'");
}

int cmd_measure(const Globals& g, const std::string& kind, const std::string& formula, int cap,
                const std::string& witness) {
    Formula f = parse_formula(formula, g.base);
    BruteOptions opt;
    MeasureResult r;
    if (kind == "size")
        r = min_model_size(f, cap, opt);
    else if (kind == "extent")
        r = min_model_extent(f, cap, opt);
    else
        throw Error("usage", "unknown measure '" + kind + "'");
    if (r.witness && !witness.empty()) write_file(witness, write_structure(*r.witness));
    if (g.format == "dot" && r.witness) {
        std::cout << to_dot(*r.witness);
        return kOk;
    }
    json j;
    j["measure"] = kind;
    j["minimum"] = r.minimum ? json(*r.minimum) : json(nullptr);
    j["bound"] = r.bound;
    j["exhaustive"] = r.exhaustive;
    if (r.witness && !witness.empty()) j["witness"] = witness;
    if (r.budget_exceeded) j["reason"] = r.reason;
    std::string text = r.budget_exceeded ? "unknown"
                       : r.minimum       ? std::to_string(*r.minimum)
                                         : "none up to " + std::to_string(cap) + " worlds";
    emit(g, j, text);
    return r.budget_exceeded ? kUnknown : kOk;
}

// Quasi-model file: the structure format plus `label <world> <formula>` lines.
std::string write_quasi(const QuasiModel& q) {
    Model frame;
    for (int w = 0; w < q.size(); ++w) frame.add_world(q.names[w]);
    frame.succ = q.succ;
    std::ostringstream out;
    std::string s = write_structure(frame);
    out << s.substr(0, s.rfind("root "));
    for (auto& [f, set] : q.labeling)
        for (int w = 0; w < q.size(); ++w)
            if (set[w]) out << "label " << q.names[w] << ' ' << render(f) << '\n';
    return out.str();
}

QuasiModel read_quasi(const std::string& text, const Globals& g) {
    std::istringstream in(text);
    std::string structure, line;
    std::vector<std::pair<std::string, std::string>> labels;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string kw, world;
        ls >> kw;
        if (kw == "label") {
            if (!(ls >> world)) throw Error("quasi", "label needs a world");
            std::string rest;
            std::getline(ls, rest);
            labels.emplace_back(world, rest);
        } else {
            structure += line + '\n';
        }
    }
    // the quasi format has no root line; any world serves for parsing
    std::string first;
    {
        std::istringstream s(structure);
        std::string kw;
        while (std::getline(s, line)) {
            std::istringstream ls(line);
            if (ls >> kw && kw == "world" && ls >> first) break;
        }
    }
    if (first.empty()) throw Error("quasi", "no worlds");
    Model frame = parse_structure(structure + "root " + first + "\n");
    QuasiModel q;
    q.names = frame.names;
    q.succ = frame.succ;
    std::map<std::string, int> idx;
    for (int w = 0; w < frame.size(); ++w) idx[frame.names[w]] = w;
    for (auto& [world, text] : labels) {
        if (!idx.count(world)) throw Error("quasi", "label references unknown world '" + world + "'");
        Formula f = parse_formula(text, g.base);
        auto& set = q.labeling[f];
        set.resize(frame.size(), false);
        set[idx[world]] = true;
    }
    return q;
}

int cmd_quasi(const Globals& g, const std::string& kind, const std::string& file, const std::string& formula,
              bool q7) {
    Formula f = parse_formula(formula, g.base);
    if (kind == "from-model") {
        QuasiModel q = quasi_from_model(parse_structure(read_file(file)), f);
        std::cout << write_quasi(q);
        return kOk;
    }
    if (kind == "check") {
        QuasiModel q = read_quasi(read_file(file), g);
        auto diags = quasi_check(q, f, q7);
        json j;
        j["ok"] = diags.empty();
        j["violations"] = diags;
        std::string text = diags.empty() ? "ok" : "violations";
        for (auto& d : diags) text += "\n  " + d;
        emit(g, j, text);
        return kOk;
    }
    throw Error("usage", "unknown quasi command '" + kind + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ctlf: satisfiability, model checking and reductions for CTL fragments"};
    app.require_subcommand(1, 1);
    Globals g;
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"text", "json", "dot"}))
        ->multi_option_policy(CLI::MultiOptionPolicy::Throw);
    app.add_option("--base", g.base_file, "Base file for parsing formulas");
    app.add_flag("--no-timing", g.no_timing, "Omit wall-clock fields from json output");

    std::vector<std::string> formulas, args;
    std::string engine = "auto", witness, kind, file, formula, target, variant = "ag_ax";
    int max_worlds = 5, cap = 4, fm = 2, fk = 2, fn = 1;
    bool q7 = false;

    auto* sat = app.add_subcommand("sat", "Decide satisfiability");
    sat->add_option("--engine", engine, "auto|general|flat|ax|balloon|brute")
        ->multi_option_policy(CLI::MultiOptionPolicy::Throw);
    sat->add_option("--max-worlds", max_worlds, "World cap for the brute-force engine");
    sat->add_option("--witness", witness, "Write the witness structure to FILE");
    sat->add_option("formula", formulas, "Formulas (stdin lines when omitted)");

    auto* mc = app.add_subcommand("mc", "Model-check a structure file");
    mc->add_option("structure", file)->required();
    mc->add_option("formula", formula)->required();

    auto* reduce = app.add_subcommand("reduce", "Generate a reduction formula");
    reduce->add_option("kind", kind, "qbf-af|qbf-ag|atm")->required();
    reduce->add_option("args", args, "QBF text, or MACHINE INPUT for atm");
    reduce->add_option("--variant", variant, "ag_ax|ag_af|au|ar");

    auto* gen = app.add_subcommand("gen", "Generate a formula family member");
    gen->add_option("family", kind)->required();
    gen->add_option("--m", fm);
    gen->add_option("--k", fk);
    gen->add_option("--n", fn);

    auto* translate = app.add_subcommand("translate", "Translate between bases");
    translate->add_option("kind", kind, "base|s1|ag")->required();
    translate->add_option("formula", formula)->required();
    translate->add_option("--target", target, "Target base file");

    auto* measure = app.add_subcommand("measure", "Minimal model size or extent");
    measure->add_option("kind", kind, "size|extent")->required();
    measure->add_option("formula", formula)->required();
    measure->add_option("--cap", cap, "World cap");
    measure->add_option("--witness", witness, "Write the witness structure to FILE");

    auto* quasi = app.add_subcommand("quasi", "Quasi-model conversion and checking");
    quasi->add_option("kind", kind, "check|from-model")->required();
    quasi->add_option("file", file)->required();
    quasi->add_option("formula", formula)->required();
    quasi->add_flag("--q7", q7, "Also check the negative downward closure condition");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (!g.base_file.empty()) g.base = parse_base(read_file(g.base_file));
        if (sat->parsed()) return cmd_sat(g, formulas, engine, max_worlds, witness);
        if (mc->parsed()) return cmd_mc(g, file, formula);
        if (reduce->parsed()) return cmd_reduce(g, kind, args, variant);
        if (gen->parsed()) return emit_formula(g, generate_family(kind, fm, fk, fn).formula);
        if (translate->parsed()) return cmd_translate(g, kind, formula, target);
        if (measure->parsed()) return cmd_measure(g, kind, formula, cap, witness);
        if (quasi->parsed()) return cmd_quasi(g, kind, file, formula, q7);
    } catch (const Error& e) {
        if (e.kind == "budget") {
            std::cerr << "ctlf: " << e.what() << '\n';
            return kUnknown;
        }
        std::cerr << "ctlf: " << e.kind << ": " << e.what() << '\n';
        return kUsage;
    } catch (const BudgetExceeded& e) {
        std::cerr << "ctlf: " << e.what() << '\n';
        return kUnknown;
    }
    return kUsage;
}
