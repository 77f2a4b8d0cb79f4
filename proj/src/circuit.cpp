#include "lifepre/circuit.hpp"

#include <fstream>
#include <sstream>

#include "lifepre/error.hpp"

namespace lifepre {

namespace {

constexpr StubMask E = stub_bit(Side::E), N = stub_bit(Side::N), W = stub_bit(Side::W), S = stub_bit(Side::S);

Side opposite(Side s) { return static_cast<Side>((static_cast<int>(s) + 2) % 4); }

Cell step(Cell c, Side s) {
    switch (s) {
        case Side::E: return {c.x + 1, c.y};
        case Side::N: return {c.x, c.y - 1};
        case Side::W: return {c.x - 1, c.y};
        case Side::S: return {c.x, c.y + 1};
    }
    return c;
}

std::string cell_str(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

}  // namespace

StubMask stubs(GateTile t) {
    switch (t) {
        case GateTile::Blank: return 0;
        case GateTile::WireH: return E | W;
        case GateTile::WireV: return N | S;
        case GateTile::TurnEN: return E | N;
        case GateTile::TurnNW: return N | W;
        case GateTile::TurnWS: return W | S;
        case GateTile::TurnES: return E | S;
        case GateTile::Not: return E | W;
        case GateTile::True: return E;
        case GateTile::Split: return E | N | S;
        case GateTile::Cross: return E | N | W | S;
        case GateTile::Or: return E | N | S;
    }
    return 0;
}

bool has_stub(GateTile t, Side s) { return stubs(t) & stub_bit(s); }

char tile_char(GateTile t) { return ".-|LJ7rNTSXO"[static_cast<int>(t)]; }

GateTile parse_tile(char c) {
    static const std::string chars = ".-|LJ7rNTSXO";
    auto pos = chars.find(c);
    if (pos == std::string::npos) throw Error(std::string("unknown gate tile character '") + c + "'");
    return static_cast<GateTile>(pos);
}

std::string tile_name(GateTile t) {
    static const char* names[] = {"Blank",  "WireH", "WireV", "TurnEN", "TurnNW", "TurnWS",
                                  "TurnES", "Not",   "True",  "Split",  "Cross",  "Or"};
    return names[static_cast<int>(t)];
}

CircuitGrid::CircuitGrid(int width, int height, GateTile fill) : width_(width), height_(height) {
    if (width < 0 || height < 0) throw Error("circuit dimensions must be non-negative");
    tiles_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

std::size_t CircuitGrid::index(int x, int y) const {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) throw Error("circuit cell " + cell_str({x, y}) + " out of range");
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
}

CircuitGrid parse_circuit(std::string_view text) {
    std::vector<std::string> rows;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!rows.empty() && line.size() != rows.front().size())
            throw ParseError("circuit row has " + std::to_string(line.size()) + " tiles, expected " +
                                 std::to_string(rows.front().size()),
                             lineno, 1);
        for (std::size_t i = 0; i < line.size(); ++i) try {
                parse_tile(line[i]);
            } catch (const Error& e) {
                throw ParseError(e.what(), lineno, static_cast<int>(i) + 1);
            }
        rows.push_back(line);
    }
    int h = static_cast<int>(rows.size());
    int w = h ? static_cast<int>(rows.front().size()) : 0;
    CircuitGrid c(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) c.set(x, y, parse_tile(rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)]));
    return c;
}

std::string emit_circuit(const CircuitGrid& c) {
    std::string out;
    for (int y = 0; y < c.height(); ++y) {
        for (int x = 0; x < c.width(); ++x) out += tile_char(c.at(x, y));
        out += '\n';
    }
    return out;
}

CircuitGrid read_circuit_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open circuit file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_circuit(ss.str());
}

namespace {

// Neighbor across `side`, wrapped on the torus; nullopt off the plane.
std::optional<Cell> neighbor(const CircuitGrid& c, Cell cell, Side side, Topology topo) {
    Cell n = step(cell, side);
    if (topo == Topology::Torus) {
        n.x = (n.x % c.width() + c.width()) % c.width();
        n.y = (n.y % c.height() + c.height()) % c.height();
        return n;
    }
    if (n.x < 0 || n.y < 0 || n.x >= c.width() || n.y >= c.height()) return std::nullopt;
    return n;
}

}  // namespace

std::optional<std::string> well_formedness_violation(const CircuitGrid& c, Topology topo) {
    for (int y = 0; y < c.height(); ++y)
        for (int x = 0; x < c.width(); ++x) {
            GateTile t = c.at(x, y);
            for (Side s : {Side::E, Side::S, Side::W, Side::N}) {
                auto n = neighbor(c, {x, y}, s, topo);
                bool here = has_stub(t, s);
                if (!n) {
                    if (here)
                        return "tile " + tile_name(t) + " at " + cell_str({x, y}) + " has a stub on side " +
                               side_char(s) + " at the circuit boundary";
                    continue;
                }
                bool there = has_stub(c.at(n->x, n->y), opposite(s));
                if (here != there)
                    return "edge between " + cell_str({x, y}) + " and " + cell_str(*n) + " has a wire on one side only";
            }
        }
    return std::nullopt;
}

EdgeKey canonical_edge(const CircuitGrid& c, Cell cell, Side side, Topology topo) {
    if (side == Side::E || side == Side::S) return {cell, side};
    auto n = neighbor(c, cell, side, topo);
    if (!n) throw Error("edge " + cell_str(cell) + std::string(1, side_char(side)) + " lies on the boundary");
    return {*n, opposite(side)};
}

std::vector<EdgeKey> wire_edges(const CircuitGrid& c, Topology topo) {
    std::vector<EdgeKey> out;
    for (int y = 0; y < c.height(); ++y)
        for (int x = 0; x < c.width(); ++x)
            for (Side s : {Side::E, Side::S})
                if (has_stub(c.at(x, y), s) && neighbor(c, {x, y}, s, topo)) out.push_back({{x, y}, s});
    return out;
}

CircuitCnf encode_circuit(const CircuitGrid& c, Topology topo) {
    if (auto v = well_formedness_violation(c, topo)) throw Error("ill-formed circuit: " + *v);
    CircuitCnf out;
    for (auto& e : wire_edges(c, topo)) out.edge_var[e] = out.cnf.new_var();
    auto var = [&](int x, int y, Side s) { return out.edge_var.at(canonical_edge(c, {x, y}, s, topo)); };
    auto equal = [&](int a, int b) {
        out.cnf.add({-a, b});
        out.cnf.add({a, -b});
    };
    for (int y = 0; y < c.height(); ++y)
        for (int x = 0; x < c.width(); ++x) {
            GateTile t = c.at(x, y);
            switch (t) {
                case GateTile::Blank: break;
                case GateTile::WireH: equal(var(x, y, Side::E), var(x, y, Side::W)); break;
                case GateTile::WireV: equal(var(x, y, Side::N), var(x, y, Side::S)); break;
                case GateTile::TurnEN: equal(var(x, y, Side::E), var(x, y, Side::N)); break;
                case GateTile::TurnNW: equal(var(x, y, Side::N), var(x, y, Side::W)); break;
                case GateTile::TurnWS: equal(var(x, y, Side::W), var(x, y, Side::S)); break;
                case GateTile::TurnES: equal(var(x, y, Side::E), var(x, y, Side::S)); break;
                case GateTile::Not: {
                    int a = var(x, y, Side::E), b = var(x, y, Side::W);
                    out.cnf.add({a, b});
                    out.cnf.add({-a, -b});
                    break;
                }
                case GateTile::True: out.cnf.add({var(x, y, Side::E)}); break;
                case GateTile::Split:
                    equal(var(x, y, Side::E), var(x, y, Side::N));
                    equal(var(x, y, Side::E), var(x, y, Side::S));
                    break;
                case GateTile::Cross:
                    equal(var(x, y, Side::N), var(x, y, Side::S));
                    equal(var(x, y, Side::E), var(x, y, Side::W));
                    break;
                case GateTile::Or: {
                    int e = var(x, y, Side::E), n = var(x, y, Side::N), s = var(x, y, Side::S);
                    out.cnf.add({-e, n, s});
                    out.cnf.add({e, -n});
                    out.cnf.add({e, -s});
                    break;
                }
            }
        }
    return out;
}

std::optional<SignalAssignment> satisfy(const CircuitGrid& c, Topology topo, SatBackend* backend) {
    auto enc = encode_circuit(c, topo);
    auto r = solve(enc.cnf, {}, backend);
    if (!r.sat) return std::nullopt;
    SignalAssignment a;
    for (auto& [e, v] : enc.edge_var) a[e] = r.value(v);
    return a;
}

std::size_t count_satisfying(const CircuitGrid& c, std::size_t limit, Topology topo, SatBackend* backend) {
    auto enc = encode_circuit(c, topo);
    std::vector<int> proj;
    for (auto& [e, v] : enc.edge_var) proj.push_back(v);
    if (proj.empty()) return solve(enc.cnf, {}, backend).sat ? 1 : 0;
    return enumerate(enc.cnf, proj, limit, backend).size();
}

bool satisfies_tiles(const CircuitGrid& c, const SignalAssignment& a, Topology topo) {
    auto sig = [&](int x, int y, Side s) { return a.at(canonical_edge(c, {x, y}, s, topo)); };
    for (int y = 0; y < c.height(); ++y)
        for (int x = 0; x < c.width(); ++x) {
            bool ok = true;
            switch (c.at(x, y)) {
                case GateTile::Blank: break;
                case GateTile::WireH: ok = sig(x, y, Side::E) == sig(x, y, Side::W); break;
                case GateTile::WireV: ok = sig(x, y, Side::N) == sig(x, y, Side::S); break;
                case GateTile::TurnEN: ok = sig(x, y, Side::E) == sig(x, y, Side::N); break;
                case GateTile::TurnNW: ok = sig(x, y, Side::N) == sig(x, y, Side::W); break;
                case GateTile::TurnWS: ok = sig(x, y, Side::W) == sig(x, y, Side::S); break;
                case GateTile::TurnES: ok = sig(x, y, Side::E) == sig(x, y, Side::S); break;
                case GateTile::Not: ok = sig(x, y, Side::E) != sig(x, y, Side::W); break;
                case GateTile::True: ok = sig(x, y, Side::E); break;
                case GateTile::Split:
                    ok = sig(x, y, Side::E) == sig(x, y, Side::N) && sig(x, y, Side::E) == sig(x, y, Side::S);
                    break;
                case GateTile::Cross:
                    ok = sig(x, y, Side::N) == sig(x, y, Side::S) && sig(x, y, Side::E) == sig(x, y, Side::W);
                    break;
                case GateTile::Or: ok = sig(x, y, Side::E) == (sig(x, y, Side::N) || sig(x, y, Side::S)); break;
            }
            if (!ok) return false;
        }
    return true;
}

std::optional<GateTile> rotate_tile_ccw(GateTile t) {
    switch (t) {
        case GateTile::Blank: return GateTile::Blank;
        case GateTile::WireH: return GateTile::WireV;
        case GateTile::WireV: return GateTile::WireH;
        case GateTile::TurnEN: return GateTile::TurnNW;
        case GateTile::TurnNW: return GateTile::TurnWS;
        case GateTile::TurnWS: return GateTile::TurnES;
        case GateTile::TurnES: return GateTile::TurnEN;
        case GateTile::Cross: return GateTile::Cross;
        default: return std::nullopt;
    }
}

std::optional<CircuitGrid> rotate_circuit_ccw(const CircuitGrid& c) {
    CircuitGrid r(c.height(), c.width());
    for (int y = 0; y < c.height(); ++y)
        for (int x = 0; x < c.width(); ++x) {
            auto t = rotate_tile_ccw(c.at(x, y));
            if (!t) return std::nullopt;
            r.set(y, c.width() - 1 - x, *t);
        }
    return r;
}

// ---------------------------------------------------------------------------

StubMask& CircuitCanvas::at(Cell c) {
    if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_) throw Error("canvas cell " + cell_str(c) + " out of range");
    return mask_[static_cast<std::size_t>(c.y * width_ + c.x)];
}

void CircuitCanvas::line(Cell a, Cell b) {
    if (a.x != b.x && a.y != b.y) throw Error("canvas line " + cell_str(a) + "-" + cell_str(b) + " is not straight");
    Side dir = a.x < b.x ? Side::E : a.x > b.x ? Side::W : a.y < b.y ? Side::S : Side::N;
    for (Cell c = a; c != b; c = step(c, dir)) {
        at(c) |= stub_bit(dir);
        at(step(c, dir)) |= stub_bit(opposite(dir));
    }
}

void CircuitCanvas::edge(Cell c, Side s) { at(c) |= stub_bit(s); }

void CircuitCanvas::mark(Cell c, GateTile t) {
    at(c);
    marks_[c] = t;
}

CircuitGrid CircuitCanvas::finish() const {
    CircuitGrid g(width_, height_);
    for (int y = 0; y < height_; ++y)
        for (int x = 0; x < width_; ++x) {
            StubMask m = mask_[static_cast<std::size_t>(y * width_ + x)];
            auto mk = marks_.find({x, y});
            if (mk != marks_.end()) {
                if (stubs(mk->second) != m)
                    throw Error("canvas cell " + cell_str({x, y}) + " marked " + tile_name(mk->second) +
                                " but its wires do not match");
                g.set(x, y, mk->second);
                continue;
            }
            std::optional<GateTile> t;
            for (GateTile cand : {GateTile::Blank, GateTile::WireH, GateTile::WireV, GateTile::TurnEN, GateTile::TurnNW,
                                  GateTile::TurnWS, GateTile::TurnES, GateTile::True, GateTile::Split, GateTile::Cross})
                if (stubs(cand) == m) t = cand;
            if (!t) throw Error("canvas cell " + cell_str({x, y}) + " has a wire junction no tile implements");
            g.set(x, y, *t);
        }
    return g;
}

}  // namespace lifepre
