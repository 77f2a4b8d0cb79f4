#pragma once
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lifepre/gadget.hpp"
#include "lifepre/grid.hpp"
#include "lifepre/sat.hpp"

namespace lifepre {

enum class GateTile { Blank, WireH, WireV, TurnEN, TurnNW, TurnWS, TurnES, Not, True, Split, Cross, Or };
inline constexpr std::array<GateTile, 12> kGateTiles = {
    GateTile::Blank,  GateTile::WireH, GateTile::WireV, GateTile::TurnEN, GateTile::TurnNW, GateTile::TurnWS,
    GateTile::TurnES, GateTile::Not,   GateTile::True,  GateTile::Split,  GateTile::Cross,  GateTile::Or};

// Stub sets as bitmasks over Side (bit 1 << int(side)).
using StubMask = unsigned;
inline constexpr StubMask stub_bit(Side s) { return 1u << static_cast<int>(s); }
StubMask stubs(GateTile t);
bool has_stub(GateTile t, Side s);

// Text form: . - | L J 7 r N T S X O
char tile_char(GateTile t);
GateTile parse_tile(char c);
std::string tile_name(GateTile t);

enum class Topology { Plane, Torus };

class CircuitGrid {
public:
    CircuitGrid() = default;
    CircuitGrid(int width, int height, GateTile fill = GateTile::Blank);

    int width() const { return width_; }
    int height() const { return height_; }
    GateTile at(int x, int y) const { return tiles_[index(x, y)]; }
    void set(int x, int y, GateTile t) { tiles_[index(x, y)] = t; }

    friend bool operator==(const CircuitGrid&, const CircuitGrid&) = default;

private:
    std::size_t index(int x, int y) const;
    int width_ = 0;
    int height_ = 0;
    std::vector<GateTile> tiles_;
};

// One row of tile characters per line; blank lines and lines starting with
// '#' are skipped. All rows must have the same length.
CircuitGrid parse_circuit(std::string_view text);
std::string emit_circuit(const CircuitGrid& c);
CircuitGrid read_circuit_file(const std::string& path);

// nullopt when well-formed, otherwise a description of the first violation
// in row-major order. On the plane no stub may touch the outer boundary; on
// the torus opposite boundaries are glued.
std::optional<std::string> well_formedness_violation(const CircuitGrid& c, Topology topo = Topology::Plane);
inline bool is_well_formed(const CircuitGrid& c, Topology topo = Topology::Plane) {
    return !well_formedness_violation(c, topo);
}

// A wire edge: the boundary between tile `cell` and its neighbor on `side`.
// Each physical edge has a single canonical key (the E or S side of a tile).
struct EdgeKey {
    Cell cell;
    Side side = Side::E;
    friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};
EdgeKey canonical_edge(const CircuitGrid& c, Cell cell, Side side, Topology topo);

using SignalAssignment = std::map<EdgeKey, bool>;

// Edges carrying a wire, in a fixed order.
std::vector<EdgeKey> wire_edges(const CircuitGrid& c, Topology topo = Topology::Plane);

// One variable per wire edge plus the per-tile constraints. Throws Error on
// an ill-formed circuit.
struct CircuitCnf {
    CnfInstance cnf;
    std::map<EdgeKey, int> edge_var;
};
CircuitCnf encode_circuit(const CircuitGrid& c, Topology topo = Topology::Plane);

std::optional<SignalAssignment> satisfy(const CircuitGrid& c, Topology topo = Topology::Plane,
                                        SatBackend* backend = nullptr);
std::size_t count_satisfying(const CircuitGrid& c, std::size_t limit, Topology topo = Topology::Plane,
                             SatBackend* backend = nullptr);
// Checks an assignment against the tile semantics directly.
bool satisfies_tiles(const CircuitGrid& c, const SignalAssignment& a, Topology topo = Topology::Plane);

// Quarter turn counterclockwise of a tile (nullopt for tiles whose rotation
// is not in the tile set) and of a whole grid.
std::optional<GateTile> rotate_tile_ccw(GateTile t);
std::optional<CircuitGrid> rotate_circuit_ccw(const CircuitGrid& c);

// Builds a circuit by drawing wire segments; tiles are inferred from the
// stubs each cell ends up with. Cells whose stub set is ambiguous ({E,N,S}
// is Split or Or, {E,W} is WireH or Not) take the explicit mark if any, or
// Split / WireH by default.
class CircuitCanvas {
public:
    CircuitCanvas(int width, int height) : width_(width), height_(height), mask_(static_cast<std::size_t>(width * height), 0) {}

    // Straight segment between two cells in the same row or column.
    void line(Cell a, Cell b);
    // A stub leaving the canvas (for torus-glued boundaries).
    void edge(Cell c, Side s);
    void mark(Cell c, GateTile t);

    int width() const { return width_; }
    int height() const { return height_; }
    // Throws Error if a stub set matches no tile or contradicts a mark.
    CircuitGrid finish() const;

private:
    StubMask& at(Cell c);
    int width_, height_;
    std::vector<StubMask> mask_;
    std::map<Cell, GateTile> marks_;
};

}  // namespace lifepre
