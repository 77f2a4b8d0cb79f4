// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Each check compares the library against a
// reference computed here or in oracles.hpp.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "circuit_samples.hpp"
#include "lifepre/circuit.hpp"
#include "lifepre/compiler.hpp"
#include "lifepre/error.hpp"
#include "lifepre/gadget.hpp"
#include "lifepre/grid.hpp"
#include "lifepre/lifestep.hpp"
#include "lifepre/preimage.hpp"
#include "lifepre/sat.hpp"
#include "lifepre/search.hpp"
#include "oracles.hpp"

using namespace lifepre;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

Pattern image_from_mask(std::uint32_t mask, int w, int h, Cell origin = {1, 1}) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w * h));
    for (int i = 0; i < w * h; ++i) bits[static_cast<std::size_t>(i)] = mask >> i & 1;
    return Pattern::from_bits(Rect(origin.x, origin.y, w, h), bits);
}

std::vector<std::vector<int>> grid_of(std::uint32_t mask, int w, int h) {
    std::vector<std::vector<int>> g(static_cast<std::size_t>(h), std::vector<int>(static_cast<std::size_t>(w)));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) g[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = mask >> (x + y * w) & 1;
    return g;
}

// ---------------------------------------------------------------------------
// 1. Local rule encodings

Outcome rule_encodings() {
    std::size_t pos = 0, neg = 0, bad = 0;
    for (auto kind : kAllEncodings) {
        std::array<Lit, 9> in{};
        for (int i = 0; i < 9; ++i) in[static_cast<std::size_t>(i)] = i + 1;
        CnfInstance cnf;
        cnf.num_vars = 10;
        VarAllocator fresh(10);
        cnf.add_all(encode_cell(kind, in, 10, fresh));
        cnf.sync(fresh);
        for (int bits = 0; bits < 512; ++bits) {
            // Neighborhood bit i sits at (i % 3, i / 3).
            std::vector<std::vector<int>> g(3, std::vector<int>(3));
            for (int i = 0; i < 9; ++i) g[static_cast<std::size_t>(i / 3)][static_cast<std::size_t>(i % 3)] = bits >> i & 1;
            bool next = oracle::life(g, 1, 1);
            for (bool out : {false, true}) {
                std::vector<Lit> assume;
                for (int i = 0; i < 9; ++i) assume.push_back((bits >> i & 1) ? i + 1 : -(i + 1));
                assume.push_back(out ? 10 : -10);
                bool sat = solve(cnf, assume).sat;
                bool expect = out == next;
                (expect ? pos : neg)++;
                if (sat != expect) ++bad;
            }
        }
    }
    return {bad == 0 && pos == 1536 && neg == 1536,
            std::to_string(pos) + " positive + " + std::to_string(neg) + " negative, " + std::to_string(bad) +
                " mismatches"};
}

// ---------------------------------------------------------------------------
// 2. Preimage existence against brute force

Outcome preimage_oracle() {
    std::size_t bad = 0;
    auto by = oracle::preimages_by_image(2, 2);
    for (std::uint32_t m = 0; m < 16; ++m)
        for (auto kind : kAllEncodings) {
            PreimageQuery q{image_from_mask(m, 2, 2), BoundaryMode::free(), {}, kind};
            if (has_preimage(q) != !by[m].empty()) ++bad;
        }
    std::size_t dp_checked = 0;
    for (std::uint32_t m = 0; m < 512; ++m) {
        bool expect = oracle::has_preimage_dp(grid_of(m, 3, 3));
        for (auto kind : kAllEncodings) {
            PreimageQuery q{image_from_mask(m, 3, 3), BoundaryMode::free(), {}, kind};
            if (has_preimage(q) != expect) ++bad;
            ++dp_checked;
        }
    }
    return {bad == 0, "16 2x2 images by full enumeration, 512 3x3 images by row DP, 3 encodings, " +
                          std::to_string(bad) + " mismatches"};
}

// ---------------------------------------------------------------------------
// 3, 4. Wire forcing

// Preimage cells of the 4 x 2 signal window whose "leading" line sits at
// offset `pos` along the wire. Vertical wires run along y; the window spans
// rows pos, pos + 1 and columns 0..3. Horizontal ones are the transpose.
std::map<Cell, bool> signal_cells(int phase, Orientation o, int pos) {
    std::map<Cell, bool> out;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 2; ++b) {
            bool alive = (phase == 0 && b == 0) || (phase == 1 && b == 1);
            Cell c = o == Orientation::Vertical ? Cell{a, pos + b} : Cell{pos + b, a};
            out[c] = alive;
        }
    return out;
}

bool forbid_and_solve(const PreimageQuery& q, const std::map<Cell, bool>& forbidden) {
    CnfInstance cnf = build(q);
    Clause block;
    for (auto& [c, v] : forbidden) {
        int var = cnf.annotations.at(c);
        block.push_back(v ? -var : var);
    }
    cnf.add(block);
    return solve(cnf).sat;
}

Outcome wire_lemma() {
    int unsat = 0, checks = 0, sane = 0;
    for (auto o : {Orientation::Vertical, Orientation::Horizontal})
        for (int i = 0; i < 3; ++i) {
            // A 2 x 2 image of ones at (1,1); W_i on preimage lines 2, 3 forces
            // W_{i+1} on lines 1, 2.
            PreimageQuery q;
            q.image = Pattern::filled(Rect(1, 1, 2, 2), true);
            q.constraints = TriPattern(Pattern::from_cells(signal_cells(i, o, 2)));
            if (has_preimage(q)) ++sane;
            ++checks;
            if (!forbid_and_solve(q, signal_cells((i + 1) % 3, o, 1))) ++unsat;
        }
    return {unsat == 6 && sane == 6,
            std::to_string(unsat) + "/" + std::to_string(checks) + " negations UNSAT, " + std::to_string(sane) +
                "/6 premises satisfiable"};
}

Outcome wire_distance() {
    const int length = 30;
    int exact = 0, total = 0;
    for (auto o : {Orientation::Vertical, Orientation::Horizontal}) {
        // Image ones on lines 1..30; W_0 on the last two preimage lines.
        Rect img = o == Orientation::Vertical ? Rect(1, 1, 2, length) : Rect(1, 1, length, 2);
        PreimageQuery q;
        q.image = Pattern::filled(img, true);
        q.constraints = TriPattern(Pattern::from_cells(signal_cells(0, o, length)));
        for (int d = 0; d <= length; ++d) {
            auto expect = signal_cells(d % 3, o, length - d);
            std::vector<Cell> window;
            for (auto& [c, v] : expect) window.push_back(c);
            auto seen = enumerate_restrictions(q, window, 2);
            ++total;
            if (seen.size() == 1 && seen[0] == Pattern::from_cells(expect)) ++exact;
        }
    }
    return {exact == total, std::to_string(exact) + "/" + std::to_string(total) +
                                " offsets (0..30, both orientations) carry exactly W_(d mod 3)"};
}

// ---------------------------------------------------------------------------
// 5. Circuit semantics

// Exhaustive search over edge bits with each tile checked once all of its
// edges are assigned. Returns the number of satisfying assignments.
long long circuit_brute_force(const std::vector<std::string>& rows) {
    int h = static_cast<int>(rows.size()), w = static_cast<int>(rows[0].size());
    auto stubs_of = [](char c) -> unsigned {  // E=1 N=2 W=4 S=8
        switch (c) {
            case '-': case 'N': return 5;
            case '|': return 10;
            case 'L': return 3;
            case 'J': return 6;
            case '7': return 12;
            case 'r': return 9;
            case 'T': return 1;
            case 'S': case 'O': return 11;
            case 'X': return 15;
        }
        return 0;
    };
    std::map<std::pair<Cell, int>, int> edge_of;  // (cell, side) -> edge index
    int n = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            unsigned s = stubs_of(rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)]);
            if (s & 1) {
                edge_of[{{x, y}, 0}] = n;
                edge_of[{{x + 1, y}, 2}] = n++;
            }
            if (s & 8) {
                edge_of[{{x, y}, 3}] = n;
                edge_of[{{x, y + 1}, 1}] = n++;
            }
        }
    struct TileCheck {
        char t;
        std::array<int, 4> e;  // edge per side, -1 if none
        int last;              // largest edge index involved
    };
    std::vector<std::vector<TileCheck>> at_edge(static_cast<std::size_t>(std::max(n, 1)));
    std::vector<TileCheck> no_edges;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            TileCheck tc{rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)], {-1, -1, -1, -1}, -1};
            for (int s = 0; s < 4; ++s) {
                auto it = edge_of.find({{x, y}, s});
                if (it != edge_of.end()) {
                    tc.e[static_cast<std::size_t>(s)] = it->second;
                    tc.last = std::max(tc.last, it->second);
                }
            }
            if (tc.last >= 0) at_edge[static_cast<std::size_t>(tc.last)].push_back(tc);
        }
    std::vector<int> v(static_cast<std::size_t>(n));
    auto ok = [&](const TileCheck& tc) {
        auto b = [&](int s) { return v[static_cast<std::size_t>(tc.e[static_cast<std::size_t>(s)])]; };
        switch (tc.t) {
            case '-': return b(0) == b(2);
            case '|': return b(1) == b(3);
            case 'L': return b(0) == b(1);
            case 'J': return b(1) == b(2);
            case '7': return b(2) == b(3);
            case 'r': return b(0) == b(3);
            case 'N': return b(0) != b(2);
            case 'T': return b(0) == 1;
            case 'S': return b(0) == b(1) && b(1) == b(3);
            case 'X': return b(0) == b(2) && b(1) == b(3);
            case 'O': return b(0) == (b(1) | b(3));
        }
        return true;
    };
    std::function<long long(int)> go = [&](int i) -> long long {
        if (i == n) return 1;
        long long total = 0;
        for (int bit = 0; bit < 2; ++bit) {
            v[static_cast<std::size_t>(i)] = bit;
            bool good = true;
            for (auto& tc : at_edge[static_cast<std::size_t>(i)]) good = good && ok(tc);
            if (good) total += go(i + 1);
        }
        return total;
    };
    return go(0);
}

CircuitGrid grid(const std::vector<std::string>& rows) {
    std::string text;
    for (auto& r : rows) text += r + "\n";
    return parse_circuit(text);
}

Outcome circuit_semantics() {
    std::mt19937_64 rng(2024);
    std::vector<std::vector<std::string>> cases;
    std::uniform_real_distribution<double> density(0.3, 0.9);
    for (int i = 0; i < 1000; ++i) cases.push_back(samples::random_circuit(4, 4, density(rng), rng));
    auto loops = samples::closed_loops(4, 4, 12);
    cases.insert(cases.end(), loops.begin(), loops.end());
    std::size_t bad = 0, skipped = 0, sat = 0;
    for (auto& rows : cases) {
        auto c = grid(rows);
        if (!is_well_formed(c)) {
            ++skipped;
            continue;
        }
        long long expect = circuit_brute_force(rows);
        auto a = satisfy(c);
        if (a.has_value() != (expect > 0)) ++bad;
        if (a && !satisfies_tiles(c, *a)) ++bad;
        if (static_cast<long long>(count_satisfying(c, 1u << 20)) != expect) ++bad;
        sat += a.has_value();
    }
    return {bad == 0 && skipped == 0, std::to_string(cases.size()) + " circuits (" + std::to_string(loops.size()) +
                                          " closed loops), " + std::to_string(sat) + " satisfiable, " +
                                          std::to_string(bad) + " mismatches"};
}

// ---------------------------------------------------------------------------
// 6. Blueprint arithmetic

WangTileSet random_tiles(int k, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> color(0, 3);
    WangTileSet out;
    for (int i = 0; i < k; ++i) out.push_back({color(rng), color(rng), color(rng), color(rng)});
    return out;
}

Outcome blueprint_arithmetic() {
    std::mt19937_64 rng(6);
    bool ok = true;
    std::string note;
    for (int k = 2; k <= 11; ++k) {
        auto c = wang_blueprint(random_tiles(k, rng));
        int expect = 17 + 12 * (k - 2) + 15;
        if (c.height() != expect || c.width() != 23) {
            ok = false;
            note += " k=" + std::to_string(k) + ":" + std::to_string(c.width()) + "x" + std::to_string(c.height());
        }
    }
    auto eleven = random_tiles(11, rng);
    auto c11 = wang_blueprint(eleven);
    auto d = jeandel_rao_dimensions(eleven);
    ok = ok && c11.height() == 140 && c11.width() == 23 && d.width == 6210 && d.height == 37800;
    return {ok, "rows 17+12(k-2)+15 for k=2..11; k=11 blueprint " + std::to_string(c11.width()) + "x" +
                    std::to_string(c11.height()) + ", instance " + std::to_string(d.width) + "x" +
                    std::to_string(d.height) + note};
}

// ---------------------------------------------------------------------------
// 7. Compiler at desk scale

Outcome compiler_equivalence() {
    std::mt19937_64 rng(77);
    MacrotileSet mock = mock_macrotiles();
    std::uniform_int_distribution<int> side(1, 3);
    std::uniform_real_distribution<double> density(0.4, 0.9);
    // Half the draws are closed loops with random inverters, which are
    // unsatisfiable about half the time.
    std::vector<std::vector<std::string>> loops;
    for (int w = 2; w <= 3; ++w)
        for (int h = 2; h <= 3; ++h)
            for (auto& l : samples::closed_loops(w, h, 9))
                for (auto& v : samples::with_nots(l)) loops.push_back(v);
    std::uniform_int_distribution<std::size_t> pick(0, loops.size() - 1);
    int bad = 0, sat = 0;
    for (int i = 0; i < 200; ++i) {
        auto rows = i % 2 ? loops[pick(rng)] : samples::random_circuit(side(rng), side(rng), density(rng), rng);
        auto c = grid(rows);
        Pattern p = compile_circuit(mock, c, Layout::Bare);
        bool expect = satisfy(c).has_value();
        if (mock_has_preimage(p, mock) != expect) ++bad;
        if (decode_mock(p, mock) != c) ++bad;
        sat += expect;
    }
    return {bad == 0, "200 circuits up to 3x3, " + std::to_string(sat) + " satisfiable, " + std::to_string(bad) +
                          " mismatches"};
}

// ---------------------------------------------------------------------------
// 8. Hill climber score and monotone acceptance

Pattern on_cells(const std::vector<Cell>& cells, const std::vector<bool>& bits) {
    std::map<Cell, bool> m;
    for (std::size_t i = 0; i < cells.size(); ++i) m[cells[i]] = bits[i];
    return Pattern::from_cells(m);
}

Outcome hill_climber() {
    // D = two cells, the context fixes the first to 1, and 11 is forced.
    // The only stray restriction is 10, which agrees with 11 on one cell:
    // M = (1 + 1) / 2, so s = ln(1 + 1) / 2.
    std::vector<Cell> D = {{0, 0}, {1, 0}};
    HillProblem hand;
    hand.domains = {D};
    hand.contexts = {TriPattern(Pattern::from_cells({{{0, 0}, true}}))};
    hand.forced = {{on_cells(D, {true, true})}};
    auto s = score(Pattern(), hand);
    double expect = std::log(2.0) / 2.0;
    bool score_ok = s.validity.valid && std::abs(s.value - expect) < 1e-12 && s.stray[0][0] == 1;

    // A 100-round run. F is every window restriction of the preimages of a
    // small image, minus one. Each restriction set a candidate can produce
    // either misses a member of F or keeps the dropped one as a stray, so
    // score 0 is out of reach and the climber uses all its rounds.
    Pattern target = Pattern::from_rows({".o.", "..o"});
    std::vector<Cell> T = Rect(0, 0, 3, 2).cells();
    auto F = preimage_restrictions(target, TriPattern(), T, 64);
    F.pop_back();
    HillProblem prob;
    prob.domains = {{T[0], T[1], T[2]}, {T[3], T[4], T[5]}};
    prob.contexts = {TriPattern()};
    prob.forced = {F};
    prob.params.region = Rect(-2, -2, 7, 6);
    prob.params.max_extension = 2;

    auto dir = fs::temp_directory_path() / "lifepre_acceptance_hill";
    fs::remove_all(dir);
    HillOptions opts;
    opts.seed = 8;
    opts.budget = 1u << 30;
    opts.max_rounds = 100;
    opts.checkpoint_dir = dir.string();
    auto r = hill_climb(prob, opts);

    // Replay the journal: every accepted extension must not raise the score.
    std::ifstream journal(dir / "journal.log");
    std::string line;
    int accepts = 0, violations = 0, lines = 0;
    for (auto& e : r.trace)
        if (e.kind == TraceEvent::Kind::Accept) {
            ++accepts;
            if (!(e.score_after <= e.score_before)) ++violations;
        }
    while (std::getline(journal, line)) ++lines;
    bool run_ok = (r.rounds >= 100 || r.success) && accepts > 0 && violations == 0 &&
                  lines >= static_cast<int>(r.trace.size());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15f", s.value);
    return {score_ok && run_ok, std::string("s = ") + buf + " (hand ln2/2); run of " + std::to_string(r.rounds) +
                                    " rounds, " + std::to_string(accepts) + " accepts, " +
                                    std::to_string(violations) + " score increases, " + std::to_string(lines) +
                                    " journal lines"};
}

// ---------------------------------------------------------------------------
// 9. Diamonds against double enumeration

Outcome diamonds() {
    std::mt19937 rng(31);
    struct Shape {
        int w, h;
    };
    int bad = 0, checked = 0, found = 0;
    for (Shape s : {Shape{1, 1}, Shape{2, 1}, Shape{1, 2}, Shape{3, 1}, Shape{1, 3}, Shape{2, 2}, Shape{3, 2},
                    Shape{2, 3}}) {
        int W = s.w + 2, H = s.h + 2;
        auto by = oracle::preimages_by_image(s.w, s.h);
        std::vector<Cell> ring;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < W; ++x)
                if (x == 0 || y == 0 || x == W - 1 || y == H - 1) ring.push_back({x, y});
        std::vector<Cell> window = Rect(1, 1, s.w, s.h).cells();
        auto bit_of = [&](std::uint32_t pre, Cell c) { return pre >> (c.x + c.y * W) & 1u; };
        for (std::uint32_t m = 0; m < by.size(); ++m) {
            int nwin = static_cast<int>(window.size());
            std::set<std::uint32_t> forced_codes;
            for (std::uint32_t code = 0; code < (1u << nwin); ++code)
                if (rng() % 3 == 0) forced_codes.insert(code);
            std::vector<Pattern> forced;
            for (auto code : forced_codes) {
                std::map<Cell, bool> cells;
                for (int i = 0; i < nwin; ++i) cells[window[static_cast<std::size_t>(i)]] = code >> i & 1;
                forced.push_back(Pattern::from_cells(cells));
            }
            // Group preimages by their outer ring; a diamond is a ring shared
            // by a forced and an unforced window content.
            std::map<std::uint32_t, std::pair<bool, bool>> groups;
            for (auto pre : by[m]) {
                std::uint32_t rk = 0, wk = 0;
                for (std::size_t i = 0; i < ring.size(); ++i) rk |= bit_of(pre, ring[i]) << i;
                for (std::size_t i = 0; i < window.size(); ++i) wk |= bit_of(pre, window[i]) << i;
                auto& g = groups[rk];
                (forced_codes.count(wk) ? g.first : g.second) = true;
            }
            bool expect = false;
            for (auto& [k, g] : groups) expect = expect || (g.first && g.second);
            auto got = find_diamond(image_from_mask(m, s.w, s.h), {}, forced, window, 1);
            ++checked;
            found += expect;
            if (got.has_value() != expect) ++bad;
        }
    }
    return {bad == 0, std::to_string(checked) + " images up to 2x3 (both orientations), " + std::to_string(found) +
                          " with diamonds, " + std::to_string(bad) + " mismatches"};
}

// ---------------------------------------------------------------------------
// 10. Genetic search contract

Outcome genetic_contract(const std::string& charger_path) {
    if (charger_path.empty() || !fs::exists(charger_path))
        return {false, "no known-valid charger pattern available to seed the search"};
    Pattern seed = read_pattern_file(charger_path);
    GeneticProblem prob;
    prob.half_width = seed.bounds().width / 2;
    prob.height = seed.bounds().height - 1;
    auto seed_errors = check_charger(seed, prob);
    if (!seed_errors.empty()) return {false, "seed fails the independent check: " + seed_errors.front()};

    GeneticOptions opts;
    opts.seed = 10;
    opts.generations = 5;
    opts.seeds = {seed};
    auto r = genetic_charger(prob, opts);
    bool gen0 = r.found && r.generation == 0 && r.best_score == 0;
    bool verified = r.found && check_charger(*r.found, prob).empty();

    // Unseeded runs: whatever they return must pass the same check.
    int returned = 0, rejected = 0;
    for (std::uint64_t s = 1; s <= 3; ++s) {
        GeneticOptions o;
        o.seed = s;
        o.generations = 2;
        auto rr = genetic_charger(prob, o);
        if (rr.found) {
            ++returned;
            if (!check_charger(*rr.found, prob).empty()) ++rejected;
        }
    }
    return {gen0 && verified && rejected == 0,
            std::string(gen0 ? "score 0 in generation 0" : "seeded run did not stop in generation 0") + ", " +
                std::to_string(returned) + " unseeded result(s), " + std::to_string(rejected) + " failing the check"};
}

// ---------------------------------------------------------------------------
// 11. Verifier mutation test

Outcome verifier_mutations() {
    PatternWriter w(Rect(0, 0, 6, 6));
    for (int y = 0; y < 6; ++y) {
        w.set({2, y}, true);
        w.set({3, y}, true);
    }
    Gadget g;
    g.name = "wire6";
    g.pattern = std::move(w).freeze();
    g.spec.ports = {{Side::N, 2, {0, 1}}, {Side::S, 2, {0, 1}}};
    g.spec.charge_rules = {ChargeRule::parse("N |- S"), ChargeRule::parse("S |- N")};
    g.spec.relation = {"00", "11"};
    g.spec.forced_zero_cells = {{1, 1}, {4, 4}};
    g.spec.normalize();

    auto caught = [](const Gadget& x) {
        for (auto& rule : x.spec.charge_rules)
            if (!verify_charging(x, rule).holds) return true;
        if (verify_relation(x).verdict(x.spec.relation) != Verdict::Pass) return true;
        return !check_forced_zero(x).empty();
    };
    if (caught(g)) return {false, "the unmodified gadget does not verify"};

    int flips = 0, detected = 0;
    std::string missed;
    for (Cell c : g.pattern.bounds().cells()) {
        Gadget m = g;
        m.pattern = g.pattern.with(c, !g.pattern.bit(c));
        ++flips;
        if (caught(m))
            ++detected;
        else
            missed += " (" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
    }
    double rate = static_cast<double>(detected) / flips;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100 * rate);
    return {rate >= 0.95, std::to_string(detected) + "/" + std::to_string(flips) + " flips detected (" + buf + ")" +
                              (missed.empty() ? "" : "; undetected:" + missed)};
}

// ---------------------------------------------------------------------------
// 12. RLE round trip

Outcome rle_round_trip() {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> side(1, 64);
    std::uniform_real_distribution<double> density(0.0, 1.0);
    int bad = 0;
    for (int i = 0; i < 10000; ++i) {
        int w = side(rng), h = side(rng);
        std::bernoulli_distribution alive(density(rng));
        std::vector<std::uint8_t> bits(static_cast<std::size_t>(w * h));
        for (auto& b : bits) b = alive(rng);
        Pattern p = Pattern::from_bits(Rect(0, 0, w, h), bits);
        RleOptions opts;
        opts.rule_tag = i % 2 == 0;
        if (parse_rle(emit_rle(p, p.bounds(), opts)) != p) ++bad;
    }
    return {bad == 0, "10000 patterns up to 64x64, " + std::to_string(bad) + " differ"};
}

}  // namespace

int main(int argc, char** argv) {
    std::string charger = argc > 1 ? argv[1] : "";
    struct Criterion {
        int id;
        const char* name;
        double limit_s;  // 0: no time bound
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all = {
        {1, "rule encodings exhaustive", 10, rule_encodings},
        {2, "preimage oracle equivalence", 120, preimage_oracle},
        {3, "wire lemma", 10, wire_lemma},
        {4, "wire propagation at distance", 60, wire_distance},
        {5, "circuit semantics oracle", 120, circuit_semantics},
        {6, "blueprint arithmetic", 60, blueprint_arithmetic},
        {7, "compiler equivalence (mock library)", 300, compiler_equivalence},
        {8, "hill-climber score and acceptance", 0, hill_climber},
        {9, "diamond detection", 0, diamonds},
        {10, "genetic search contract", 0, [&] { return genetic_contract(charger); }},
        {11, "gadget verifier mutation test", 0, verifier_mutations},
        {12, "RLE round trip", 0, rle_round_trip},
    };
    int failed = 0;
    for (auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0 && secs > c.limit_s) {
            o.pass = false;
            o.detail += "; over the time limit";
        }
        char t[32];
        std::snprintf(t, sizeof t, "%.1f s", secs);
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail << " [" << t
                  << "]" << std::endl;
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
