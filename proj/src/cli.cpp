#include "lifepre/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "lifepre/circuit.hpp"
#include "lifepre/compiler.hpp"
#include "lifepre/error.hpp"
#include "lifepre/preimage.hpp"
#include "lifepre/search.hpp"

namespace lifepre {

namespace {

const char* cell_word(bool ok) { return ok ? "pass" : "fail"; }

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << text;
    if (!f) throw Error("cannot write " + path);
}

}  // namespace

// ---------------------------------------------------------------------------
// Library verification

bool VerifyReport::any_failure() const {
    return std::any_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.verdict == Verdict::Fail; });
}

std::string VerifyReport::table() const {
    std::ostringstream os;
    std::size_t name_w = 6;
    for (auto& r : rows) name_w = std::max(name_w, r.name.size());
    auto line = [&](const std::string& name, const std::string& role, const std::string& ch, const std::string& rel,
                    const std::string& zb, const std::string& comp, const std::string& verdict) {
        os << std::left << std::setw(static_cast<int>(name_w) + 2) << name << std::setw(7) << role << std::setw(14)
           << ch << std::setw(14) << rel << std::setw(14) << zb << std::setw(11) << comp << verdict << '\n';
    };
    line("gadget", "role", "charging", "relation", "zero-bound", "composite", "verdict");
    for (auto& r : rows) {
        line(r.name, r.role, r.charging, r.relation, r.zero_boundary, r.composite, to_string(r.verdict));
        for (auto& n : r.notes) os << "    " << n << '\n';
    }
    return os.str();
}

VerifyRow verify_entry(const LibraryEntry& e, const VerifyOptions& opts) {
    VerifyRow row;
    row.name = e.gadget.name;
    row.role = e.role;
    row.composite = "-";
    if (e.role != "basic") {
        auto errs = check_composite(e);
        row.composite = cell_word(errs.empty());
        row.notes.insert(row.notes.end(), errs.begin(), errs.end());
    }

    GadgetReport rep = verify_gadget(e.gadget, opts);
    if (!rep.structure_errors.empty()) {
        row.charging = row.relation = row.zero_boundary = "-";
        row.notes.insert(row.notes.end(), rep.structure_errors.begin(), rep.structure_errors.end());
        row.verdict = Verdict::Fail;
        return row;
    }

    bool charging_ok = true;
    for (auto& c : rep.charging) {
        if (c.holds) continue;
        charging_ok = false;
        row.notes.push_back("charging rule " + c.rule.to_string() + " fails");
    }
    row.charging = e.gadget.spec.charge_rules.empty() ? "-" : cell_word(charging_ok);

    Verdict rel = rep.relation.verdict(e.gadget.spec.relation);
    row.relation = to_string(rel);
    if (rel == Verdict::Fail) {
        std::string seen;
        for (auto& t : rep.relation.observed) seen += " " + t;
        row.notes.push_back("observed relation:" + (seen.empty() ? std::string(" (none)") : seen));
    }

    row.zero_boundary = cell_word(rep.nonzero_forced_cells.empty());
    for (auto& c : rep.nonzero_forced_cells)
        row.notes.push_back("forced-zero cell (" + std::to_string(c.x) + "," + std::to_string(c.y) + ") can be 1");

    row.verdict = rep.verdict(e.gadget.spec);
    if (row.composite == "fail") row.verdict = Verdict::Fail;
    return row;
}

VerifyReport verify_library(const GadgetLibrary& lib, const VerifyOptions& opts, unsigned jobs) {
    VerifyReport report;
    report.rows.resize(lib.entries.size());
    std::vector<std::exception_ptr> errors(lib.entries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < lib.entries.size(); i = next++) {
            try {
                report.rows[i] = verify_entry(lib.entries[i], opts);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(lib.entries.size())));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return report;
}

VerifyReport verify_all(const std::string& lib_dir, EncodingKind encoding, unsigned jobs, SatBackend* backend) {
    VerifyOptions opts;
    opts.encoding = encoding;
    opts.backend = backend;
    return verify_library(load_library(lib_dir), opts, jobs);
}

std::size_t encoding_mismatches(EncodingKind kind, SatBackend* backend) {
    std::size_t bad = 0;
    std::array<Lit, 9> in{};
    for (int i = 0; i < 9; ++i) in[static_cast<std::size_t>(i)] = i + 1;
    const Lit out = 10;
    CnfInstance cnf;
    cnf.num_vars = 10;
    VarAllocator fresh(10);
    cnf.add_all(encode_cell(kind, in, out, fresh));
    cnf.sync(fresh);

    for (std::uint16_t bits = 0; bits < 512; ++bits) {
        bool expected = step_cell(Neighborhood{bits});
        for (bool polarity : {false, true}) {
            std::vector<Lit> assume;
            for (int i = 0; i < 9; ++i) assume.push_back(((bits >> i) & 1) ? i + 1 : -(i + 1));
            assume.push_back(polarity ? out : -out);
            bool sat = solve(cnf, assume, backend).sat;
            if (sat != (polarity == expected)) ++bad;
        }
    }
    return bad;
}

// ---------------------------------------------------------------------------
// Command line

namespace {

struct Globals {
    std::string solver;
    unsigned jobs = 1;
};

Pattern zero_embedded(const Pattern& p, int margin) {
    return Pattern::filled(p.bounds().expanded(margin), false).overlaid(p);
}

int cmd_step(const std::string& in, const std::string& out_path, int generations, std::ostream& err) {
    Pattern p = read_pattern_file(in);
    Rect window = p.bounds();
    for (int g = 0; g < generations; ++g) {
        window = window.expanded(1);
        p = step(zero_embedded(p, 2), window);
    }
    write_rle_file(out_path, p);
    err << "wrote " << window.width << "x" << window.height << " generation " << generations << " to " << out_path
        << '\n';
    return kExitOk;
}

int cmd_preimage(const std::string& in, const std::string& mode, const std::string& force, Cell force_at,
                 const std::string& enc, const std::string& out_path, std::ostream& out) {
    PreimageQuery q;
    q.image = read_pattern_file(in);
    q.mode = BoundaryMode::parse(mode);
    q.encoding = parse_encoding(enc);
    if (!force.empty()) q.constraints = TriPattern(read_pattern_file(force).shifted({-force_at.x, -force_at.y}));
    auto pre = find_preimage(q);
    out << (pre ? "SAT" : "UNSAT") << '\n';
    if (pre && !out_path.empty()) write_rle_file(out_path, *pre);
    return pre ? kExitOk : kExitNegative;
}

int cmd_orphan(const std::string& in, const std::string& enc, std::ostream& out) {
    bool orphan = is_orphan(read_pattern_file(in), parse_encoding(enc));
    out << (orphan ? "orphan" : "not an orphan") << '\n';
    return orphan ? kExitOk : kExitNegative;
}

int cmd_verify(const std::string& lib, const std::string& enc, const std::string& report_path, const Globals& g,
               std::ostream& out, std::ostream& err) {
    GadgetLibrary library = load_library(lib);
    err << "verifying " << library.entries.size() << " gadget(s) from " << lib << '\n';
    std::vector<EncodingKind> kinds;
    if (enc == "all")
        kinds.assign(kAllEncodings.begin(), kAllEncodings.end());
    else
        kinds.push_back(parse_encoding(enc));

    VerifyReport first;
    bool agree = true;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        VerifyOptions opts;
        opts.encoding = kinds[i];
        err << "encoding " << to_string(kinds[i]) << '\n';
        VerifyReport rep = verify_library(library, opts, g.jobs);
        if (i == 0)
            first = rep;
        else if (rep.rows != first.rows) {
            agree = false;
            err << "report under " << to_string(kinds[i]) << " differs from " << to_string(kinds[0]) << '\n';
        }
    }
    std::string table = first.table();
    if (report_path.empty())
        out << table;
    else
        write_text_file(report_path, table);
    return first.any_failure() || !agree ? kExitNegative : kExitOk;
}

int cmd_search_hill(const std::string& problem, std::uint64_t seed, std::size_t budget, const std::string& checkpoint,
                    bool resume, const std::string& out_path, std::ostream& out, std::ostream& err) {
    HillProblem prob = read_hill_problem(problem);
    HillOptions opts;
    opts.seed = seed;
    opts.budget = budget;
    opts.checkpoint_dir = checkpoint;
    opts.resume = resume;
    opts.on_event = [&err](const TraceEvent& e) {
        err << "round " << e.round << ' ' << to_string(e.kind) << ' ' << e.score_before << " -> " << e.score_after
            << " domains " << e.domains;
        if (!e.detail.empty()) err << " (" << e.detail << ')';
        err << '\n';
    };
    HillResult r = hill_climb(prob, opts);
    err << "rounds " << r.rounds << ", evaluations " << r.evaluations << '\n';
    out << (r.success ? "found" : "not found") << " score " << r.score << '\n';
    if (!out_path.empty() && !r.pattern.empty()) write_rle_file(out_path, r.pattern);
    return r.success ? kExitOk : kExitNegative;
}

int cmd_search_genetic(int width, int height, std::uint64_t seed, std::size_t budget,
                       const std::vector<std::string>& seed_files, const std::string& out_path, std::ostream& out,
                       std::ostream& err) {
    if (width % 2 != 0) throw Error("--width must be even");
    GeneticProblem prob;
    prob.half_width = width / 2;
    prob.height = height;
    prob.validate();
    GeneticOptions opts;
    opts.seed = seed;
    opts.generations = budget;
    for (auto& f : seed_files) opts.seeds.push_back(read_pattern_file(f));
    opts.on_generation = [&err](std::size_t gen, double best) {
        err << "generation " << gen << " best " << best << '\n';
    };
    GeneticResult r = genetic_charger(prob, opts);
    out << (r.found ? "found" : "not found") << " best " << r.best_score << " at generation " << r.generation << '\n';
    if (!out_path.empty()) {
        if (r.found)
            write_rle_file(out_path, *r.found);
        else if (!r.best.empty())
            write_rle_file(out_path, r.best);
    }
    return r.found ? kExitOk : kExitNegative;
}

struct LibraryChoice {
    MacrotileSet set;
    bool mock = false;
};

LibraryChoice choose_library(const std::string& lib) {
    if (lib == "mock") return {mock_macrotiles(), true};
    return {macrotiles_from_library(load_library(lib)), false};
}

int cmd_compile(const std::string& circuit, const std::string& lib, int scale, bool torus, const std::string& out_path,
                std::ostream& err) {
    CircuitGrid c = read_circuit_file(circuit);
    LibraryChoice choice = choose_library(lib);
    Layout layout = choice.mock ? Layout::Bare : layout_for_scale(scale, choice.set.block);
    Pattern p = compile_circuit(choice.set, c, layout, torus ? Topology::Torus : Topology::Plane);
    write_rle_file(out_path, p);
    err << "compiled " << c.width() << "x" << c.height() << " circuit to " << p.bounds().width << "x"
        << p.bounds().height << " cells in " << out_path << '\n';
    return kExitOk;
}

int cmd_blueprint(const std::string& wang, const std::string& out_path, std::ostream& err) {
    CircuitGrid c = wang_blueprint(read_wang_file(wang));
    write_text_file(out_path, emit_circuit(c));
    err << "blueprint " << c.width() << "x" << c.height() << " written to " << out_path << '\n';
    return kExitOk;
}

int cmd_np_instance(const std::string& dnf, const std::string& lib, int scale, const std::string& out_path,
                    const std::string& circuit_out, std::ostream& err) {
    Dnf f = read_dnf_file(dnf);
    if (!circuit_out.empty()) write_text_file(circuit_out, emit_circuit(formula_circuit(f)));
    LibraryChoice choice = choose_library(lib);
    Layout layout = choice.mock ? Layout::Bare : layout_for_scale(scale, choice.set.block);
    Pattern p = formula_to_pattern(f, choice.set, layout);
    write_rle_file(out_path, p);
    err << f.size() << " clause(s) compiled to " << p.bounds().width << "x" << p.bounds().height << " cells in "
        << out_path << '\n';
    return kExitOk;
}

int cmd_jeandel_rao(const std::string& lib, const std::string& wang, const std::string& out_path, std::ostream& out,
                    std::ostream& err) {
    WangTileSet tiles = read_wang_file(wang);
    Dimensions d = jeandel_rao_dimensions(tiles);
    out << d.width << " x " << d.height << '\n';
    if (out_path.empty()) return kExitOk;
    MacrotileSet set = macrotiles_from_library(load_library(lib));
    err << "rendering " << d.width << "x" << d.height << " torus pattern\n";
    write_rle_file(out_path, jeandel_rao_instance(set, tiles));
    err << "wrote " << out_path << '\n';
    return kExitOk;
}

int cmd_encodings_check(std::ostream& out, std::ostream& err) {
    std::size_t total = 0;
    for (auto k : kAllEncodings) {
        std::size_t bad = encoding_mismatches(k);
        err << to_string(k) << ": " << 1024 - bad << "/1024 agree\n";
        total += bad;
    }
    out << (total == 0 ? "PASS" : "FAIL") << '\n';
    return total == 0 ? kExitOk : kExitNegative;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Game of Life preimage toolkit"};
    app.name("lifepre");
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    Globals g;
    app.add_option("--solver", g.solver, "External DIMACS solver binary (default: $LIFEPRE_SOLVER or internal)");
    app.add_option("--jobs", g.jobs, "Worker threads for independent verifications")->check(CLI::PositiveNumber);

    std::string in, out_path, mode = "free", force, enc = "dc", lib = "gadgets", wang, problem, checkpoint,
                                 circuit, dnf, report, circuit_out;
    int generations = 1, scale = 450, width = 12, height = 10;
    std::uint64_t seed = 1;
    std::size_t budget = 10000;
    bool torus = false, resume = false;
    std::vector<std::string> seed_files;
    std::vector<int> force_at = {0, 0};

    auto* step_cmd = app.add_subcommand("step", "Advance a pattern (zeros outside) by some generations");
    step_cmd->add_option("--in", in, "Input .rle or .cells")->required();
    step_cmd->add_option("--out", out_path, "Output .rle")->required();
    step_cmd->add_option("--generations", generations, "Generations")->check(CLI::NonNegativeNumber);

    auto* pre_cmd = app.add_subcommand("preimage", "Find a preimage; exit 0 if one exists, 1 if not");
    pre_cmd->add_option("--in", in, "Image pattern")->required();
    pre_cmd->add_option("--mode", mode, "free | zero:<t> | torus:<px>x<py>");
    pre_cmd->add_option("--force", force, "Pattern whose cells constrain the preimage");
    pre_cmd->add_option("--force-at", force_at, "Image coordinates of the forced pattern's top-left cell")
        ->expected(2);
    pre_cmd->add_option("--encoding", enc, "dc | sort | merge");
    pre_cmd->add_option("--out", out_path, "Write the preimage here");

    auto* orphan_cmd = app.add_subcommand("orphan", "Decide whether a pattern is an orphan; exit 0 if it is");
    orphan_cmd->add_option("--in", in, "Rectangular pattern")->required();
    orphan_cmd->add_option("--encoding", enc, "dc | sort | merge");

    auto* verify_cmd = app.add_subcommand("verify", "Verify every gadget of a library directory");
    verify_cmd->add_option("--lib", lib, "Directory of gadget .json files")->required();
    verify_cmd->add_option("--encoding", enc, "dc | sort | merge | all");
    verify_cmd->add_option("--report", report, "Write the table to this file instead of stdout");

    auto* hill_cmd = app.add_subcommand("search-hill", "Hill-climbing gadget search");
    hill_cmd->add_option("--problem", problem, "Problem file")->required();
    hill_cmd->add_option("--seed", seed, "Random seed");
    hill_cmd->add_option("--budget", budget, "Score evaluations");
    hill_cmd->add_option("--checkpoint", checkpoint, "Checkpoint directory");
    hill_cmd->add_flag("--resume", resume, "Continue from the checkpoint directory");
    hill_cmd->add_option("--out", out_path, "Write the final pattern here");

    auto* ga_cmd = app.add_subcommand("search-genetic", "Genetic search for wire chargers");
    ga_cmd->add_option("--width", width, "Pattern width 2n")->check(CLI::PositiveNumber);
    ga_cmd->add_option("--height", height, "m: the pattern spans rows 0..m")->check(CLI::PositiveNumber);
    ga_cmd->add_option("--seed", seed, "Random seed");
    ga_cmd->add_option("--budget", budget, "Generations");
    ga_cmd->add_option("--seed-pattern", seed_files, "Initial population member (repeatable)");
    ga_cmd->add_option("--out", out_path, "Write the charger (or best pattern) here");

    auto* compile_cmd = app.add_subcommand("compile", "Compile a gate-tile circuit into a pattern");
    compile_cmd->add_option("--circuit", circuit, "Circuit text file")->required();
    compile_cmd->add_option("--lib", lib, "Gadget library directory, or \"mock\"");
    compile_cmd->add_option("--scale", scale, "Cells per tile: 450 or 270")->check(CLI::IsMember({450, 270}));
    compile_cmd->add_flag("--torus", torus, "Treat the circuit as a torus");
    compile_cmd->add_option("--out", out_path, "Output .rle")->required();

    auto* bp_cmd = app.add_subcommand("blueprint", "Circuit whose periodic solutions are Wang tilings");
    bp_cmd->add_option("--wang", wang, "Wang tiles, E N W S per line")->required();
    bp_cmd->add_option("--out", out_path, "Output circuit file")->required();

    auto* np_cmd = app.add_subcommand("np-instance", "Pattern with a preimage iff a DNF formula is satisfiable");
    np_cmd->add_option("--dnf", dnf, "DNF file")->required();
    np_cmd->add_option("--lib", lib, "Gadget library directory, or \"mock\"");
    np_cmd->add_option("--scale", scale, "Cells per tile: 450 or 270")->check(CLI::IsMember({450, 270}));
    np_cmd->add_option("--circuit-out", circuit_out, "Also write the intermediate circuit");
    np_cmd->add_option("--out", out_path, "Output .rle")->required();

    auto* jr_cmd = app.add_subcommand("jeandel-rao", "Torus instance from an 11-tile aperiodic Wang set");
    jr_cmd->add_option("--wang", wang, "The 11 Wang tiles, E N W S per line")->required();
    jr_cmd->add_option("--lib", lib, "Gadget library directory");
    jr_cmd->add_option("--out", out_path, "Output .rle; without it only the dimensions are printed");

    app.add_subcommand("encodings-check", "Check the three local-rule encodings exhaustively");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (!g.solver.empty() || std::getenv(kSolverEnvVar)) set_default_backend(make_backend(g.solver));
        if (*step_cmd) return cmd_step(in, out_path, generations, err);
        if (*pre_cmd) return cmd_preimage(in, mode, force, {force_at[0], force_at[1]}, enc, out_path, out);
        if (*orphan_cmd) return cmd_orphan(in, enc, out);
        if (*verify_cmd) return cmd_verify(lib, enc, report, g, out, err);
        if (*hill_cmd) return cmd_search_hill(problem, seed, budget, checkpoint, resume, out_path, out, err);
        if (*ga_cmd) return cmd_search_genetic(width, height, seed, budget, seed_files, out_path, out, err);
        if (*compile_cmd) return cmd_compile(circuit, lib, scale, torus, out_path, err);
        if (*bp_cmd) return cmd_blueprint(wang, out_path, err);
        if (*np_cmd) return cmd_np_instance(dnf, lib, scale, out_path, circuit_out, err);
        if (*jr_cmd) return cmd_jeandel_rao(lib, wang, out_path, out, err);
        return cmd_encodings_check(out, err);
    } catch (const BackendError& e) {
        err << "solver failure: " << e.what() << '\n';
        return kExitBackend;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace lifepre
