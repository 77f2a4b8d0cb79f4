#include "lifepre/gadget.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lifepre/error.hpp"
#include "lifepre/preimage.hpp"

namespace lifepre {

char side_char(Side s) { return "ENWS"[static_cast<int>(s)]; }

Side parse_side(char c) {
    switch (c) {
        case 'E': return Side::E;
        case 'N': return Side::N;
        case 'W': return Side::W;
        case 'S': return Side::S;
        default: throw Error(std::string("unknown side '") + c + "'");
    }
}

Side rotate_ccw(Side s) { return static_cast<Side>((static_cast<int>(s) + 1) % 4); }

namespace {
Side rotate_cw(Side s) { return static_cast<Side>((static_cast<int>(s) + 3) % 4); }
}  // namespace

Pattern wire_signal_pattern(WireSignal s, Cell anchor) {
    int phase = ((s.phase % 3) + 3) % 3;
    if (s.orientation == Orientation::Vertical) {
        PatternWriter w(Rect(anchor.x, anchor.y, 4, 2));
        if (phase < 2)
            for (int x = 0; x < 4; ++x) w.set({anchor.x + x, anchor.y + phase}, true);
        return std::move(w).freeze();
    }
    PatternWriter w(Rect(anchor.x, anchor.y, 2, 4));
    if (phase < 2)
        for (int y = 0; y < 4; ++y) w.set({anchor.x + phase, anchor.y + y}, true);
    return std::move(w).freeze();
}

std::optional<int> decode_signal(const Pattern& window, Orientation o, Cell anchor) {
    for (int phase = 0; phase < 3; ++phase) {
        auto sig = wire_signal_pattern({phase, o}, anchor);
        bool match = true;
        for (Cell c : sig.domain())
            if (window.at(c) != sig.at(c)) {
                match = false;
                break;
            }
        if (match) return phase;
    }
    return std::nullopt;
}

Orientation port_orientation(const WirePort& p) {
    return is_vertical_port(p.side) ? Orientation::Vertical : Orientation::Horizontal;
}

Rect port_window(const WirePort& p, int width, int height) {
    switch (p.side) {
        case Side::N: return Rect(p.offset - 1, -1, 4, 2);
        case Side::S: return Rect(p.offset - 1, height - 1, 4, 2);
        case Side::W: return Rect(-1, p.offset - 1, 2, 4);
        case Side::E: return Rect(width - 1, p.offset - 1, 2, 4);
    }
    return {};
}

Pattern port_signal(const WirePort& p, int width, int height, bool bit) {
    Rect r = port_window(p, width, height);
    return wire_signal_pattern({p.operating_phases[bit ? 1 : 0], port_orientation(p)}, {r.x0, r.y0});
}

Affinity affinity_of(const WirePort& p, bool bit) {
    // Phase 1 puts the live cells on the south (east) half of the window.
    bool live_on_far_half = p.operating_phases[bit ? 1 : 0] == 1;
    bool inside_is_far_half = p.side == Side::N || p.side == Side::W;
    return live_on_far_half == inside_is_far_half ? Affinity::Near : Affinity::Far;
}

bool bit_of(const WirePort& p, Affinity a) { return affinity_of(p, true) == a; }

// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::set<Side> parse_side_list(const std::string& s) {
    std::set<Side> out;
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t') continue;
        out.insert(parse_side(c));
    }
    return out;
}

std::string side_list(const std::set<Side>& sides) {
    std::string out;
    for (Side s : kSides)
        if (sides.count(s)) {
            if (!out.empty()) out += ',';
            out += side_char(s);
        }
    return out;
}

}  // namespace

ChargeRule ChargeRule::parse(const std::string& s) {
    auto pos = s.find("|-");
    if (pos == std::string::npos) throw Error("charge rule '" + s + "' lacks '|-'");
    ChargeRule r;
    r.premise = parse_side_list(trim(s.substr(0, pos)));
    r.conclusion = parse_side_list(trim(s.substr(pos + 2)));
    return r;
}

std::string ChargeRule::to_string() const {
    std::string p = side_list(premise), c = side_list(conclusion);
    return (p.empty() ? "" : p + " ") + "|-" + (c.empty() ? "" : " " + c);
}

void GadgetSpec::normalize() {
    std::sort(ports.begin(), ports.end(),
              [](const WirePort& a, const WirePort& b) { return static_cast<int>(a.side) < static_cast<int>(b.side); });
    for (std::size_t i = 1; i < ports.size(); ++i)
        if (ports[i].side == ports[i - 1].side) throw Error("two ports on side " + std::string(1, side_char(ports[i].side)));
    for (auto& p : ports) {
        auto [a, b] = p.operating_phases;
        if (a == b || a < 0 || b < 0 || a > 1 || b > 1)
            throw Error("operating phases of port " + std::string(1, side_char(p.side)) +
                        " must be two distinct phases other than the blank phase 2");
    }
    for (auto& rule : charge_rules)
        for (Side s : rule.conclusion)
            if (!port(s)) throw Error("charge rule " + rule.to_string() + " names a side without a port");
    for (auto& t : relation)
        if (t.size() != ports.size() || t.find_first_not_of("01") != std::string::npos)
            throw Error("relation tuple '" + t + "' does not match the " + std::to_string(ports.size()) + " ports");
}

const WirePort* GadgetSpec::port(Side s) const {
    for (auto& p : ports)
        if (p.side == s) return &p;
    return nullptr;
}

Relation to_affinity(const GadgetSpec& spec, const Relation& r) {
    Relation out;
    for (auto& t : r) {
        std::string a;
        for (std::size_t i = 0; i < t.size(); ++i)
            a += affinity_of(spec.ports[i], t[i] == '1') == Affinity::Near ? 'N' : 'F';
        out.insert(a);
    }
    return out;
}

Relation from_affinity(const GadgetSpec& spec, const Relation& a) {
    Relation out;
    for (auto& t : a) {
        std::string b;
        for (std::size_t i = 0; i < t.size(); ++i)
            b += bit_of(spec.ports[i], t[i] == 'N' ? Affinity::Near : Affinity::Far) ? '1' : '0';
        out.insert(b);
    }
    return out;
}

Relation rotate_relation(const Relation& r, const std::vector<WirePort>& ports) {
    // Index of each old side in the old tuple.
    std::map<Side, std::size_t> old_index;
    for (std::size_t i = 0; i < ports.size(); ++i) old_index[ports[i].side] = i;
    Relation out;
    for (auto& t : r) {
        std::string nt;
        for (Side ns : kSides) {
            Side old = rotate_cw(ns);
            auto it = old_index.find(old);
            if (it == old_index.end()) continue;
            char c = t[it->second];
            if (old == Side::E || old == Side::W) c = c == '1' ? '0' : '1';
            nt += c;
        }
        out.insert(nt);
    }
    return out;
}

GadgetSpec rotate_spec(const GadgetSpec& spec, int width, int height) {
    (void)height;
    GadgetSpec out;
    out.frame = spec.frame;
    for (auto p : spec.ports) {
        WirePort q = p;
        q.side = rotate_ccw(p.side);
        if (p.side == Side::N || p.side == Side::S) q.offset = width - 2 - p.offset;
        out.ports.push_back(q);
    }
    for (auto& rule : spec.charge_rules) {
        ChargeRule r;
        for (Side s : rule.premise) r.premise.insert(rotate_ccw(s));
        for (Side s : rule.conclusion) r.conclusion.insert(rotate_ccw(s));
        out.charge_rules.push_back(r);
    }
    auto sorted = spec;
    sorted.normalize();
    out.relation = rotate_relation(spec.relation, sorted.ports);
    for (Cell c : spec.forced_zero_cells) out.forced_zero_cells.push_back({c.y, width - 1 - c.x});
    out.normalize();
    return out;
}

Pattern rotate_pattern_ccw(const Pattern& p) {
    if (p.empty()) return p;
    const Rect& b = p.bounds();
    std::map<Cell, bool> cells;
    for (Cell c : p.domain()) {
        int x = c.x - b.x0, y = c.y - b.y0;
        cells[{b.x0 + y, b.y0 + (b.width - 1 - x)}] = p.bit(c);
    }
    return Pattern::from_cells(cells);
}

Gadget rotate_gadget(const Gadget& g) {
    Gadget r;
    r.name = g.name + "-ccw";
    r.pattern = rotate_pattern_ccw(g.pattern);
    r.spec = rotate_spec(g.spec, g.width(), g.height());
    return r;
}

// ---------------------------------------------------------------------------
// Verification

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

Pattern verification_image(const Gadget& g) {
    const int f = g.spec.frame, w = g.width(), h = g.height();
    PatternWriter out(Rect(-f, -f, w + 2 * f, h + 2 * f));
    out.paste(g.pattern, {0, 0});
    for (auto& p : g.spec.ports)
        for (int k = 1; k <= f; ++k)
            for (int d = 0; d < 2; ++d) switch (p.side) {
                    case Side::N: out.set({p.offset + d, -k}, true); break;
                    case Side::S: out.set({p.offset + d, h - 1 + k}, true); break;
                    case Side::W: out.set({-k, p.offset + d}, true); break;
                    case Side::E: out.set({w - 1 + k, p.offset + d}, true); break;
                }
    return std::move(out).freeze();
}

std::vector<Cell> zero_band(const Gadget& g) {
    const int w = g.width(), h = g.height();
    std::vector<Rect> windows;
    for (auto& p : g.spec.ports) windows.push_back(port_window(p, w, h));
    std::vector<Cell> out;
    for (Cell c : Rect(-1, -1, w + 2, h + 2).cells()) {
        bool ring = c.x <= 0 || c.y <= 0 || c.x >= w - 1 || c.y >= h - 1;
        if (!ring) continue;
        bool in_window = std::any_of(windows.begin(), windows.end(), [&](const Rect& r) { return r.contains(c); });
        if (!in_window) out.push_back(c);
    }
    return out;
}

namespace {

// Preimage instance for the verification context plus per-port selectors:
// sel[i][b] true forces port i to carry bit b.
struct Harness {
    CnfInstance cnf;
    std::vector<std::array<int, 2>> sel;

    int var(Cell c) const {
        auto it = cnf.annotations.find(c);
        if (it == cnf.annotations.end())
            throw Error("cell (" + std::to_string(c.x) + "," + std::to_string(c.y) + ") is outside the preimage");
        return it->second;
    }
    std::vector<Lit> equal_lits(const Pattern& sig) const {
        std::vector<Lit> out;
        for (Cell c : sig.domain()) out.push_back(sig.bit(c) ? var(c) : -var(c));
        return out;
    }
};

Harness make_harness(const Gadget& g, const VerifyOptions& opts) {
    Harness h;
    PreimageQuery q{verification_image(g), BoundaryMode::free(), {}, opts.encoding};
    h.cnf = build(q);
    for (auto& p : g.spec.ports) {
        std::array<int, 2> s{};
        for (int b = 0; b < 2; ++b) {
            s[static_cast<std::size_t>(b)] = h.cnf.new_var();
            for (Lit l : h.equal_lits(port_signal(p, g.width(), g.height(), b == 1)))
                h.cnf.add({-s[static_cast<std::size_t>(b)], l});
        }
        h.sel.push_back(s);
    }
    return h;
}

std::size_t port_index(const Gadget& g, Side s) {
    for (std::size_t i = 0; i < g.spec.ports.size(); ++i)
        if (g.spec.ports[i].side == s) return i;
    throw Error("gadget " + g.name + " has no port on side " + std::string(1, side_char(s)));
}

void require_charged(Harness& h, std::size_t i) { h.cnf.add({h.sel[i][0], h.sel[i][1]}); }

Pattern decode(const Harness& h, const SolveResult& r) {
    std::map<Cell, bool> cells;
    for (auto& [c, v] : h.cnf.annotations) cells[c] = r.value(v);
    return Pattern::from_cells(cells);
}

Gadget normalized(const Gadget& g) {
    Gadget n = g;
    n.spec.normalize();
    if (!n.pattern.is_rectangular() || n.pattern.bounds().x0 != 0 || n.pattern.bounds().y0 != 0)
        throw Error("gadget " + g.name + ": pattern must be rectangular and anchored at (0,0)");
    return n;
}

}  // namespace

ChargingResult verify_charging(const Gadget& gadget, const ChargeRule& rule, const VerifyOptions& opts) {
    Gadget g = normalized(gadget);
    ChargingResult out{rule, true, std::nullopt};
    if (rule.conclusion.empty()) return out;
    Harness h = make_harness(g, opts);
    for (Side s : rule.premise) require_charged(h, port_index(g, s));
    // Some conclusion port carries neither operating signal.
    Clause some_uncharged;
    for (Side s : rule.conclusion) {
        std::size_t i = port_index(g, s);
        int u = h.cnf.new_var();
        some_uncharged.push_back(u);
        for (int b = 0; b < 2; ++b) {
            Clause differs = {-u};
            for (Lit l : h.equal_lits(port_signal(g.spec.ports[i], g.width(), g.height(), b == 1))) differs.push_back(-l);
            h.cnf.add(std::move(differs));
        }
    }
    h.cnf.add(std::move(some_uncharged));
    auto r = solve(h.cnf, {}, opts.backend);
    if (r.sat) {
        out.holds = false;
        out.counterexample = decode(h, r);
    }
    return out;
}

Verdict RelationResult::verdict(const Relation& claimed) const {
    if (inconclusive) return Verdict::Inconclusive;
    return observed == claimed && realizable_with_zero_boundary == claimed ? Verdict::Pass : Verdict::Fail;
}

RelationResult verify_relation(const Gadget& gadget, const VerifyOptions& opts) {
    Gadget g = normalized(gadget);
    RelationResult out;
    Harness h = make_harness(g, opts);
    for (std::size_t i = 0; i < g.spec.ports.size(); ++i) require_charged(h, i);
    std::vector<int> proj;
    for (auto& s : h.sel) proj.push_back(s[1]);
    auto models = enumerate(h.cnf, proj, opts.enumeration_limit + 1, opts.backend);
    if (models.size() > opts.enumeration_limit) {
        out.inconclusive = true;
        return out;
    }
    if (proj.empty() && !models.empty()) out.observed.insert("");
    for (auto& m : models) {
        if (proj.empty()) break;
        std::string t;
        for (bool b : m) t += b ? '1' : '0';
        out.observed.insert(t);
    }
    std::vector<Lit> band;
    for (Cell c : zero_band(g)) band.push_back(-h.var(c));
    for (auto& t : out.observed) {
        std::vector<Lit> assume = band;
        for (std::size_t i = 0; i < t.size(); ++i) assume.push_back(t[i] == '1' ? h.sel[i][1] : h.sel[i][0]);
        if (solve(h.cnf, assume, opts.backend).sat) out.realizable_with_zero_boundary.insert(t);
    }
    return out;
}

std::vector<Cell> check_forced_zero(const Gadget& gadget, const VerifyOptions& opts) {
    Gadget g = normalized(gadget);
    std::vector<Cell> bad;
    if (g.spec.forced_zero_cells.empty()) return bad;
    Harness h = make_harness(g, opts);
    for (std::size_t i = 0; i < g.spec.ports.size(); ++i) require_charged(h, i);
    for (Cell c : g.spec.forced_zero_cells) {
        Lit assume[] = {h.var(c)};
        if (solve(h.cnf, assume, opts.backend).sat) bad.push_back(c);
    }
    return bad;
}

std::vector<std::string> check_structure(const Gadget& g) {
    std::vector<std::string> errs;
    if (!g.pattern.is_rectangular() || g.pattern.bounds().x0 != 0 || g.pattern.bounds().y0 != 0) {
        errs.push_back("pattern is not a rectangle anchored at (0,0)");
        return errs;
    }
    const int w = g.width(), h = g.height();
    for (Side s : kSides) {
        const WirePort* p = g.spec.port(s);
        int len = is_vertical_port(s) ? w : h;
        std::set<int> live;
        for (int i = 0; i < len; ++i) {
            Cell c = s == Side::N ? Cell{i, 0} : s == Side::S ? Cell{i, h - 1} : s == Side::W ? Cell{0, i} : Cell{w - 1, i};
            if (g.pattern.bit(c)) live.insert(i);
        }
        std::string name(1, side_char(s));
        if (!p) {
            if (!live.empty()) errs.push_back("side " + name + " has live boundary cells but no port");
            continue;
        }
        if (p->offset < 1 || p->offset + 2 > len - 1) {
            errs.push_back("port " + name + " offset " + std::to_string(p->offset) + " leaves no room for its window");
            continue;
        }
        if (live != std::set<int>{p->offset, p->offset + 1})
            errs.push_back("side " + name + " boundary is not exactly the port wire");
    }
    return errs;
}

Verdict GadgetReport::verdict(const GadgetSpec& spec) const {
    if (!structure_errors.empty() || !nonzero_forced_cells.empty()) return Verdict::Fail;
    for (auto& c : charging)
        if (!c.holds) return Verdict::Fail;
    return relation.verdict(spec.relation);
}

GadgetReport verify_gadget(const Gadget& g, const VerifyOptions& opts) {
    GadgetReport rep;
    rep.name = g.name;
    rep.structure_errors = check_structure(g);
    if (!rep.structure_errors.empty()) return rep;
    for (auto& rule : g.spec.charge_rules) rep.charging.push_back(verify_charging(g, rule, opts));
    rep.relation = verify_relation(g, opts);
    rep.nonzero_forced_cells = check_forced_zero(g, opts);
    return rep;
}

// ---------------------------------------------------------------------------
// Library files

using json = nlohmann::ordered_json;

LibraryEntry parse_library_entry(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(std::string("library entry is not valid JSON: ") + e.what());
    }
    try {
        LibraryEntry e;
        e.gadget.name = j.at("name").get<std::string>();
        e.gadget.pattern = parse_rle(j.at("rle").get<std::string>());
        e.role = j.value("role", "basic");
        e.tile = j.value("tile", "");
        e.from = j.value("from", "");
        e.to = j.value("to", "");
        e.orientation = j.value("orientation", "");
        e.note = j.value("note", "");
        if (j.contains("alignment"))
            for (auto& [k, v] : j["alignment"].items()) e.alignment[k] = v.get<std::string>();
        auto& spec = e.gadget.spec;
        spec.frame = j.value("frame", 4);
        for (auto& p : j.value("ports", json::array())) {
            WirePort wp;
            auto side = p.at("side").get<std::string>();
            if (side.size() != 1) throw Error("bad port side '" + side + "'");
            wp.side = parse_side(side[0]);
            wp.offset = p.at("offset").get<int>();
            if (p.contains("phases")) {
                auto ph = p["phases"].get<std::vector<int>>();
                if (ph.size() != 2) throw Error("port phases need exactly two entries");
                wp.operating_phases = {ph[0], ph[1]};
            }
            spec.ports.push_back(wp);
        }
        for (auto& r : j.value("charge_rules", json::array())) spec.charge_rules.push_back(ChargeRule::parse(r.get<std::string>()));
        for (auto& t : j.value("relation", json::array())) spec.relation.insert(t.get<std::string>());
        for (auto& c : j.value("forced_zero_cells", json::array())) {
            auto xy = c.get<std::vector<int>>();
            if (xy.size() != 2) throw Error("forced_zero_cells entries are [x, y] pairs");
            spec.forced_zero_cells.push_back({xy[0], xy[1]});
        }
        spec.normalize();
        return e;
    } catch (const json::exception& ex) {
        throw Error(std::string("malformed library entry: ") + ex.what());
    }
}

std::string emit_library_entry(const LibraryEntry& e) {
    json j;
    const auto& g = e.gadget;
    j["name"] = g.name;
    j["role"] = e.role;
    if (!e.tile.empty()) j["tile"] = e.tile;
    if (!e.alignment.empty()) j["alignment"] = e.alignment;
    if (!e.orientation.empty()) j["orientation"] = e.orientation;
    if (!e.from.empty()) j["from"] = e.from;
    if (!e.to.empty()) j["to"] = e.to;
    j["frame"] = g.spec.frame;
    j["ports"] = json::array();
    for (auto& p : g.spec.ports)
        j["ports"].push_back(
            {{"side", std::string(1, side_char(p.side))}, {"offset", p.offset}, {"phases", {p.operating_phases[0], p.operating_phases[1]}}});
    j["charge_rules"] = json::array();
    for (auto& r : g.spec.charge_rules) j["charge_rules"].push_back(r.to_string());
    j["relation"] = json::array();
    for (auto& t : g.spec.relation) j["relation"].push_back(t);
    if (!g.spec.forced_zero_cells.empty()) {
        j["forced_zero_cells"] = json::array();
        for (Cell c : g.spec.forced_zero_cells) j["forced_zero_cells"].push_back({c.x, c.y});
    }
    if (!e.note.empty()) j["note"] = e.note;
    j["rle"] = emit_rle(g.pattern, g.pattern.bounds(), {true, 70});
    return j.dump(2) + "\n";
}

const LibraryEntry* GadgetLibrary::find(const std::string& name) const {
    for (auto& e : entries)
        if (e.gadget.name == name) return &e;
    return nullptr;
}

GadgetLibrary load_library(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw Error("gadget library '" + dir + "' is not a directory");
    std::vector<fs::path> files;
    for (auto& ent : fs::directory_iterator(dir))
        if (ent.is_regular_file() && ent.path().extension() == ".json") files.push_back(ent.path());
    std::sort(files.begin(), files.end());
    GadgetLibrary lib;
    for (auto& f : files) {
        std::ifstream in(f);
        std::stringstream ss;
        ss << in.rdbuf();
        try {
            lib.entries.push_back(parse_library_entry(ss.str()));
        } catch (const Error& e) {
            throw Error(f.string() + ": " + e.what());
        }
    }
    return lib;
}

void save_library_entry(const std::string& dir, const LibraryEntry& e) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / (e.gadget.name + ".json"));
    out << emit_library_entry(e);
    if (!out) throw Error("cannot write library entry " + e.gadget.name);
}

}  // namespace lifepre
