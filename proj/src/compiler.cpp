#include "lifepre/compiler.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "lifepre/error.hpp"

namespace lifepre {

std::string to_string(Alignment a, Orientation o) {
    bool h = o == Orientation::Horizontal;
    switch (a) {
        case Alignment::Neutral: return "neutral";
        case Alignment::Plus: return h ? "east" : "south";
        case Alignment::Minus: return h ? "west" : "north";
    }
    return "?";
}

Alignment parse_alignment(const std::string& s) {
    if (s == "neutral") return Alignment::Neutral;
    if (s == "east" || s == "south") return Alignment::Plus;
    if (s == "west" || s == "north") return Alignment::Minus;
    throw Error("unknown phase alignment '" + s + "'");
}

int blocks_per_tile(Layout l) {
    switch (l) {
        case Layout::Reset: return 5;
        case Layout::Direct: return 3;
        case Layout::Bare: return 1;
    }
    return 1;
}

Layout layout_for_scale(int scale, int block) {
    if (scale == 5 * block) return Layout::Reset;
    if (scale == 3 * block) return Layout::Direct;
    if (scale == block) return Layout::Bare;
    throw Error("scale " + std::to_string(scale) + " is not 5, 3 or 1 times the block size " + std::to_string(block));
}

const TileBlock& MacrotileSet::tile(GateTile t) const {
    auto it = tiles.find(t);
    if (it == tiles.end()) throw Error("macrotile set has no block for gate tile " + tile_name(t));
    return it->second;
}

const Pattern& MacrotileSet::wire(const WireKey& k) const {
    auto it = wires.find(k);
    if (it == wires.end())
        throw Error("macrotile set has no " + std::string(k.orientation == Orientation::Horizontal ? "horizontal" : "vertical") +
                    " wire block from " + to_string(k.from, k.orientation) + " to " + to_string(k.to, k.orientation));
    return it->second;
}

namespace {

GateTile tile_by_name(const std::string& s) {
    if (s.size() == 1) return parse_tile(s[0]);
    for (GateTile t : kGateTiles)
        if (tile_name(t) == s) return t;
    throw Error("unknown gate tile '" + s + "'");
}

std::vector<std::string> check_ports(const LibraryEntry& e, StubMask want, int port_offset) {
    std::vector<std::string> errs;
    const auto& spec = e.gadget.spec;
    for (Side s : kSides) {
        const WirePort* p = spec.port(s);
        bool wanted = want & stub_bit(s);
        std::string side(1, side_char(s));
        if (wanted && !p) errs.push_back("missing port on side " + side);
        if (!wanted && p) errs.push_back("unexpected port on side " + side);
        if (wanted && p && p->offset != port_offset)
            errs.push_back("port " + side + " at offset " + std::to_string(p->offset) + ", expected " +
                           std::to_string(port_offset));
    }
    return errs;
}

// Writes src at `at`, wrapping modulo the canvas on the torus.
void paste_wrapped(PatternWriter& out, const Pattern& src, Cell at, long long W, long long H, bool wrap) {
    if (!wrap) {
        out.paste(src, at);
        return;
    }
    const Rect& b = src.bounds();
    for (Cell c : src.support()) {
        long long x = (static_cast<long long>(at.x) + c.x - b.x0) % W;
        long long y = (static_cast<long long>(at.y) + c.y - b.y0) % H;
        out.set({static_cast<int>(x), static_cast<int>(y)}, true);
    }
}

}  // namespace

std::vector<std::string> check_composite(const LibraryEntry& e, int block, int port_offset) {
    std::vector<std::string> errs;
    const int w = e.gadget.width(), h = e.gadget.height();
    auto want_size = [&](int ww, int hh) {
        if (w != ww || h != hh)
            errs.push_back("size " + std::to_string(w) + "x" + std::to_string(h) + ", expected " + std::to_string(ww) +
                           "x" + std::to_string(hh));
    };
    if (e.role == "tile") {
        want_size(block, block);
        try {
            auto t = tile_by_name(e.tile);
            for (auto& m : check_ports(e, stubs(t), port_offset)) errs.push_back(m);
            for (auto& [side, a] : e.alignment) {
                if (side.size() != 1) throw Error("bad alignment side '" + side + "'");
                parse_side(side[0]);
                parse_alignment(a);
            }
        } catch (const Error& ex) {
            errs.push_back(ex.what());
        }
    } else if (e.role == "hwire" || e.role == "vwire") {
        bool horiz = e.role == "hwire";
        if (horiz)
            want_size(2 * block, block);
        else
            want_size(block, 2 * block);
        StubMask want = horiz ? stub_bit(Side::E) | stub_bit(Side::W) : stub_bit(Side::N) | stub_bit(Side::S);
        for (auto& m : check_ports(e, want, port_offset)) errs.push_back(m);
        std::string expect_orient = horiz ? "horizontal" : "vertical";
        if (!e.orientation.empty() && e.orientation != expect_orient)
            errs.push_back("orientation '" + e.orientation + "' contradicts role " + e.role);
        try {
            parse_alignment(e.from);
            parse_alignment(e.to);
        } catch (const Error& ex) {
            errs.push_back(ex.what());
        }
    } else {
        return errs;
    }
    for (auto& m : check_structure(e.gadget)) errs.push_back(m);
    return errs;
}

MacrotileSet macrotiles_from_library(const GadgetLibrary& lib, int block, int port_offset) {
    MacrotileSet set;
    set.block = block;
    set.port_offset = port_offset;
    for (auto& e : lib.entries) {
        if (e.role != "tile" && e.role != "hwire" && e.role != "vwire") continue;
        auto errs = check_composite(e, block, port_offset);
        if (!errs.empty()) throw Error("library entry " + e.gadget.name + ": " + errs.front());
        if (e.role == "tile") {
            GateTile t = tile_by_name(e.tile);
            TileBlock tb;
            tb.pattern = e.gadget.pattern;
            for (auto& [side, a] : e.alignment) tb.alignment[static_cast<std::size_t>(parse_side(side[0]))] = parse_alignment(a);
            if (!set.tiles.emplace(t, tb).second) throw Error("two library blocks for gate tile " + tile_name(t));
        } else {
            WireKey k{e.role == "hwire" ? Orientation::Horizontal : Orientation::Vertical, parse_alignment(e.from),
                      parse_alignment(e.to)};
            if (!set.wires.emplace(k, e.gadget.pattern).second)
                throw Error("duplicate wire block " + e.gadget.name);
        }
    }
    return set;
}

MacrotileSet mock_macrotiles(int block) {
    if (block < 2) throw Error("mock blocks need at least 2 x 2 cells");
    MacrotileSet set;
    set.block = block;
    set.port_offset = 0;
    for (GateTile t : kGateTiles) {
        int id = static_cast<int>(t);
        PatternWriter w(Rect(0, 0, block, block));
        for (int j = 0; j < 4; ++j)
            if (id >> j & 1) w.set({j % block, j / block}, true);
        set.tiles[t] = TileBlock{std::move(w).freeze(), {}};
    }
    return set;
}

CircuitGrid decode_mock(const Pattern& p, const MacrotileSet& mock) {
    const int b = mock.block;
    if (!p.is_rectangular() || p.bounds().width % b || p.bounds().height % b)
        throw Error("mock pattern is not a whole number of blocks");
    const Rect& r = p.bounds();
    CircuitGrid c(r.width / b, r.height / b);
    for (int ty = 0; ty < c.height(); ++ty)
        for (int tx = 0; tx < c.width(); ++tx) {
            bool found = false;
            for (auto& [t, blk] : mock.tiles) {
                bool same = true;
                for (int y = 0; y < b && same; ++y)
                    for (int x = 0; x < b && same; ++x)
                        same = p.bit({r.x0 + tx * b + x, r.y0 + ty * b + y}) == blk.pattern.bit({x, y});
                if (same) {
                    c.set(tx, ty, t);
                    found = true;
                    break;
                }
            }
            if (!found) throw Error("mock block at tile (" + std::to_string(tx) + "," + std::to_string(ty) + ") is no glyph");
        }
    return c;
}

bool mock_has_preimage(const Pattern& p, const MacrotileSet& mock) {
    auto c = decode_mock(p, mock);
    if (!is_well_formed(c)) return false;
    return satisfy(c).has_value();
}

Pattern assemble_macrotile(const MacrotileSet& set, GateTile t) {
    const int b = set.block;
    PatternWriter out(Rect(0, 0, 5 * b, 5 * b));
    if (t == GateTile::Blank) return std::move(out).freeze();
    const TileBlock& tb = set.tile(t);
    out.paste(tb.pattern, {2 * b, 2 * b});
    auto align = [&](Side s) { return tb.alignment[static_cast<std::size_t>(s)]; };
    const auto H = Orientation::Horizontal, V = Orientation::Vertical;
    const auto neutral = Alignment::Neutral;
    if (has_stub(t, Side::E)) out.paste(set.wire({H, align(Side::E), neutral}), {3 * b, 2 * b});
    if (has_stub(t, Side::W)) out.paste(set.wire({H, neutral, align(Side::W)}), {0, 2 * b});
    if (has_stub(t, Side::N)) out.paste(set.wire({V, neutral, align(Side::N)}), {2 * b, 0});
    if (has_stub(t, Side::S)) out.paste(set.wire({V, align(Side::S), neutral}), {2 * b, 3 * b});
    return std::move(out).freeze();
}

Dimensions compiled_dimensions(const CircuitGrid& c, Layout layout, int block) {
    long long s = static_cast<long long>(blocks_per_tile(layout)) * block;
    return {c.width() * s, c.height() * s};
}

Pattern compile_circuit(const MacrotileSet& set, const CircuitGrid& c, Layout layout, Topology topo) {
    if (auto v = well_formedness_violation(c, topo)) throw Error("cannot compile an ill-formed circuit: " + *v);
    const int b = set.block;
    auto dims = compiled_dimensions(c, layout, b);
    if (dims.width > (1 << 30) / std::max<long long>(1, dims.height))
        throw Error("compiled pattern would be too large");
    if (dims.width == 0 || dims.height == 0) return Pattern();
    PatternWriter out(Rect(0, 0, static_cast<int>(dims.width), static_cast<int>(dims.height)));
    const bool wrap = topo == Topology::Torus;

    if (layout == Layout::Bare) {
        for (int y = 0; y < c.height(); ++y)
            for (int x = 0; x < c.width(); ++x)
                if (c.at(x, y) != GateTile::Blank) out.paste(set.tile(c.at(x, y)).pattern, {x * b, y * b});
        return std::move(out).freeze();
    }
    if (layout == Layout::Reset) {
        std::map<GateTile, Pattern> cache;
        for (int y = 0; y < c.height(); ++y)
            for (int x = 0; x < c.width(); ++x) {
                GateTile t = c.at(x, y);
                if (t == GateTile::Blank) continue;
                auto it = cache.find(t);
                if (it == cache.end()) it = cache.emplace(t, assemble_macrotile(set, t)).first;
                out.paste(it->second, {x * 5 * b, y * 5 * b});
            }
        return std::move(out).freeze();
    }

    // Direct: a wire block straddles each pair of joined tiles.
    auto align = [&](int x, int y, Side s) {
        return set.tile(c.at(x, y)).alignment[static_cast<std::size_t>(s)];
    };
    for (int y = 0; y < c.height(); ++y)
        for (int x = 0; x < c.width(); ++x) {
            GateTile t = c.at(x, y);
            if (t == GateTile::Blank) continue;
            const int ox = 3 * b * x, oy = 3 * b * y;
            out.paste(set.tile(t).pattern, {ox + b, oy + b});
            if (has_stub(t, Side::E)) {
                int nx = (x + 1) % c.width();
                WireKey k{Orientation::Horizontal, align(x, y, Side::E), align(nx, y, Side::W)};
                paste_wrapped(out, set.wire(k), {ox + 2 * b, oy + b}, dims.width, dims.height, wrap);
            }
            if (has_stub(t, Side::S)) {
                int ny = (y + 1) % c.height();
                WireKey k{Orientation::Vertical, align(x, y, Side::S), align(x, ny, Side::N)};
                paste_wrapped(out, set.wire(k), {ox + b, oy + 2 * b}, dims.width, dims.height, wrap);
            }
        }
    return std::move(out).freeze();
}

// ---------------------------------------------------------------------------
// Wang tiles

WangTileSet parse_wang(std::string_view text) {
    WangTileSet out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<int> v;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                v.push_back(std::stoi(tok, &used));
                if (used != tok.size()) throw Error("");
            } catch (const std::exception&) {
                throw ParseError("bad color '" + tok + "'", lineno, 1);
            }
        }
        if (v.empty()) continue;
        if (v.size() != 4) throw ParseError("a Wang tile needs four colors (E N W S)", lineno, 1);
        out.push_back({v[0], v[1], v[2], v[3]});
    }
    return out;
}

WangTileSet read_wang_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open tile file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_wang(ss.str());
}

std::array<bool, 9> wang_bits(const WangTile& t) {
    for (int c : {t.e, t.n, t.w, t.s})
        if (c < 0 || c > 3) throw Error("Wang color " + std::to_string(c) + " does not fit in two bits");
    std::array<bool, 9> x{};
    x[2] = t.w >> 1 & 1;
    x[1] = t.w & 1;
    x[3] = t.n >> 1 & 1;
    x[4] = t.n & 1;
    x[5] = t.e >> 1 & 1;
    x[6] = t.e & 1;
    x[8] = t.s >> 1 & 1;
    x[7] = t.s & 1;
    return x;
}

WangTile wang_from_bits(const std::array<bool, 9>& x) {
    return {2 * x[5] + x[6], 2 * x[3] + x[4], 2 * x[2] + x[1], 2 * x[8] + x[7]};
}

int blueprint_rows(int k) {
    if (k < 2) throw Error("the blueprint needs at least two tiles");
    return 17 + 12 * (k - 2) + 15;
}

namespace {

// One literal of a clause as it enters the OR tree: either a tap on a
// vertical bus or the constant 0. The tree computes the OR of mismatches,
// so `invert` is set when the literal is satisfied by a 1 on the bus.
struct ClauseInput {
    int bus_col = -1;
    bool invert = false;
};

struct ClauseLayout {
    int height = 0;      // rows per clause block
    int width = 0;       // columns used, counted from 0
    std::map<int, std::vector<int>> taps;  // bus column -> tap rows
};

int input_row(int slot) { return 3 * (slot / 2) + (slot % 2) * 2; }

// Draws k clause blocks starting at top_row. Each block takes its inputs
// to column q_col (where a Not inverts when needed), ORs them with a
// binary tree, negates the result, and feeds a running OR down the right
// side whose final value must be 1.
ClauseLayout lay_out_clauses(CircuitCanvas& cv, const std::vector<std::vector<ClauseInput>>& clauses, int top_row,
                             int q_col, int arity) {
    ClauseLayout out;
    const int k = static_cast<int>(clauses.size());
    out.height = 3 * arity / 2;
    int levels = 0;
    while ((1 << levels) < arity) ++levels;
    const int not_col = q_col + 1 + levels;
    const int acc = not_col + 2;
    out.width = acc + 3;

    for (int t = 0; t < k; ++t) {
        const int top = top_row + t * out.height;
        std::vector<int> rows;
        for (int s = 0; s < arity; ++s) {
            int r = top + input_row(s);
            rows.push_back(r);
            ClauseInput in = s < static_cast<int>(clauses[static_cast<std::size_t>(t)].size())
                                 ? clauses[static_cast<std::size_t>(t)][static_cast<std::size_t>(s)]
                                 : ClauseInput{};
            if (in.bus_col >= 0) {
                cv.line({in.bus_col, r}, {q_col + 1, r});
                if (in.invert) cv.mark({q_col, r}, GateTile::Not);
                out.taps[in.bus_col].push_back(r);
            } else {
                cv.line({q_col - 1, r}, {q_col + 1, r});
                cv.mark({q_col - 1, r}, GateTile::True);
                cv.mark({q_col, r}, GateTile::Not);
            }
        }
        int col = q_col + 1;
        while (rows.size() > 1) {
            std::vector<int> next;
            for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
                int a = rows[i], b = rows[i + 1], m = (a + b) / 2;
                cv.line({col, a}, {col, b});
                cv.mark({col, m}, GateTile::Or);
                cv.line({col, m}, {col + 1, m});
                next.push_back(m);
            }
            rows = next;
            ++col;
        }
        const int o = rows.front();
        cv.mark({not_col, o}, GateTile::Not);
        cv.line({not_col, o}, {acc, o});

        const int next_or = o + out.height - 1;  // Or row of the following block
        if (k == 1) {
            cv.line({acc, o}, {acc, o + 1});
            cv.line({acc, o + 1}, {acc - 1, o + 1});
            cv.mark({acc - 1, o + 1}, GateTile::True);
        } else if (t == 0) {
            cv.line({acc, o}, {acc, next_or});
        } else {
            cv.mark({acc, o - 1}, GateTile::Or);
            cv.line({acc, o - 1}, {acc, o});
            cv.line({acc, o - 1}, {acc + 1, o - 1});
            if (t < k - 1) {
                cv.line({acc + 1, o - 1}, {acc + 1, o + 1});
                cv.line({acc + 1, o + 1}, {acc, o + 1});
                cv.line({acc, o + 1}, {acc, next_or});
            } else {
                cv.line({acc + 1, o - 1}, {acc + 2, o - 1});
                cv.line({acc + 2, o - 1}, {acc + 2, o + 1});
                cv.line({acc + 2, o + 1}, {acc, o + 1});
                cv.mark({acc, o + 1}, GateTile::True);
            }
        }
    }
    for (auto& [col, rows] : out.taps) std::sort(rows.begin(), rows.end());
    return out;
}

}  // namespace

CircuitGrid wang_blueprint(const WangTileSet& tiles_in) {
    if (tiles_in.empty()) throw Error("empty Wang tile set");
    WangTileSet tiles = tiles_in;
    if (tiles.size() == 1) tiles.push_back(tiles.front());
    const int k = static_cast<int>(tiles.size());
    const int rows = blueprint_rows(k);
    CircuitCanvas cv(kBlueprintColumns, rows);

    // Bus column of each color bit x1..x8.
    const std::array<int, 9> bus = {-1, 6, 5, 4, 3, 7, 8, 9, 10};
    std::vector<std::vector<ClauseInput>> clauses;
    for (auto& t : tiles) {
        auto x = wang_bits(t);
        std::vector<ClauseInput> c(8);
        for (int i = 1; i <= 8; ++i) c[static_cast<std::size_t>(bus[static_cast<std::size_t>(i)] - 3)] = {bus[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)]};
        clauses.push_back(c);
    }
    const int top = 5;
    auto lay = lay_out_clauses(cv, clauses, top, 11, 8);
    const int f0 = top + k * lay.height, f1 = f0 + 1, f2 = f0 + 2;
    auto last_tap = [&](int col) { return lay.taps.at(col).back(); };
    auto first_tap = [&](int col) { return lay.taps.at(col).front(); };

    // North edge: x4 in column 3, x3 in column 4, running down.
    for (int col : {3, 4}) {
        cv.edge({col, 0}, Side::N);
        cv.line({col, 0}, {col, last_tap(col)});
    }
    // West edge: x2 on row 2, x1 on row 3.
    cv.edge({0, 2}, Side::W);
    cv.line({0, 2}, {5, 2});
    cv.line({5, 2}, {5, last_tap(5)});
    cv.edge({0, 3}, Side::W);
    cv.line({0, 3}, {6, 3});
    cv.line({6, 3}, {6, last_tap(6)});
    // East edge: x5 on row 2, x6 on row 3.
    const int east = kBlueprintColumns - 1;
    cv.edge({east, 2}, Side::E);
    cv.line({east, 2}, {7, 2});
    cv.line({7, 2}, {7, last_tap(7)});
    cv.edge({east, 3}, Side::E);
    cv.line({east, 3}, {8, 3});
    cv.line({8, 3}, {8, last_tap(8)});
    // South edge: x7 in column 3, x8 in column 4, running up.
    cv.edge({3, f2}, Side::S);
    cv.line({3, f2}, {3, f1});
    cv.line({3, f1}, {9, f1});
    cv.line({9, f1}, {9, first_tap(9)});
    cv.edge({4, f2}, Side::S);
    cv.line({4, f2}, {4, f0});
    cv.line({4, f0}, {10, f0});
    cv.line({10, f0}, {10, first_tap(10)});
    return cv.finish();
}

Dimensions jeandel_rao_dimensions(const WangTileSet& tiles) {
    if (tiles.size() != 11) throw Error("the Jeandel-Rao instance expects an 11-tile set");
    for (auto& t : tiles) wang_bits(t);
    long long s = 3LL * kBlockSize;
    return {kBlueprintColumns * s, blueprint_rows(11) * s};
}

Pattern jeandel_rao_instance(const MacrotileSet& set, const WangTileSet& tiles) {
    jeandel_rao_dimensions(tiles);
    return compile_circuit(set, wang_blueprint(tiles), Layout::Direct, Topology::Torus);
}

// ---------------------------------------------------------------------------
// DNF

Dnf parse_dnf(std::string_view text) {
    Dnf f;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok[0] == '#' || tok == "c" || tok == "p") continue;
        std::vector<int> clause;
        do {
            int v;
            try {
                std::size_t used = 0;
                v = std::stoi(tok, &used);
                if (used != tok.size()) throw Error("");
            } catch (const std::exception&) {
                throw ParseError("bad literal '" + tok + "'", lineno, 1);
            }
            if (v == 0) break;
            clause.push_back(v);
        } while (ls >> tok);
        f.push_back(clause);
    }
    if (f.empty()) throw Error("empty formula");
    return f;
}

Dnf read_dnf_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open formula file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dnf(ss.str());
}

bool evaluate_dnf(const Dnf& f, const std::vector<bool>& x) {
    for (auto& clause : f) {
        bool all = true;
        for (int l : clause) {
            bool v = x.at(static_cast<std::size_t>(std::abs(l) - 1));
            if (v != (l > 0)) all = false;
        }
        if (all) return true;
    }
    return false;
}

CircuitGrid formula_circuit(const Dnf& f) {
    if (f.empty()) throw Error("empty formula");
    int n = 0;
    std::size_t widest = 0;
    for (auto& c : f) {
        widest = std::max(widest, c.size());
        for (int l : c) {
            if (l == 0) throw Error("literal 0 in formula");
            n = std::max(n, std::abs(l));
        }
    }
    int arity = 2;
    while (arity < static_cast<int>(widest)) arity *= 2;
    // Variable v has its bus in column 2v - 1 and a source loop in columns
    // 2v - 1 and 2v on rows 0 and 1.
    auto bus_of = [](int v) { return 2 * v - 1; };
    const int q_col = 2 * n + 2;
    std::vector<std::vector<ClauseInput>> clauses;
    for (auto& c : f) {
        std::vector<ClauseInput> in;
        for (int l : c) in.push_back({bus_of(std::abs(l)), l > 0});
        clauses.push_back(in);
    }
    const int top = 2;
    const int k = static_cast<int>(f.size());
    const int height = top + k * 3 * arity / 2;
    int levels = 0;
    while ((1 << levels) < arity) ++levels;
    const int width = q_col + 1 + levels + 2 + 3;
    CircuitCanvas cv(width, height);
    auto lay = lay_out_clauses(cv, clauses, top, q_col, arity);
    for (auto& [col, rows] : lay.taps) {
        cv.line({col, 0}, {col + 1, 0});
        cv.line({col + 1, 0}, {col + 1, 1});
        cv.line({col + 1, 1}, {col, 1});
        cv.line({col, 1}, {col, 0});
        cv.line({col, 1}, {col, rows.back()});
    }
    return cv.finish();
}

Pattern formula_to_pattern(const Dnf& f, const MacrotileSet& set, Layout layout) {
    return compile_circuit(set, formula_circuit(f), layout, Topology::Plane);
}

}  // namespace lifepre
