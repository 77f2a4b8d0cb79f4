#pragma once
#include <array>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "lifepre/circuit.hpp"
#include "lifepre/gadget.hpp"
#include "lifepre/grid.hpp"

namespace lifepre {

// Which pair of phases a block uses for bits at one of its ports. Plus is
// shifted east (horizontal wires) or south (vertical wires).
enum class Alignment { Neutral, Plus, Minus };
std::string to_string(Alignment a, Orientation o);
Alignment parse_alignment(const std::string& s);  // neutral | east | west | south | north

inline constexpr int kBlockSize = 90;
inline constexpr int kPortOffset = 28;  // wires occupy rows/columns 28 and 29 of a block

// How much space each gate tile gets in the compiled pattern, in blocks:
// Reset surrounds every tile with wire blocks that return all ports to the
// neutral alignment (5 x 5 blocks), Direct joins neighbors with a single
// wire block chosen for their alignments (3 x 3 blocks), Bare pastes tile
// blocks edge to edge (1 x 1, used by the mock library).
enum class Layout { Reset, Direct, Bare };
int blocks_per_tile(Layout l);
// 450 -> Reset, 270 -> Direct for 90-cell blocks.
Layout layout_for_scale(int scale, int block = kBlockSize);

struct TileBlock {
    Pattern pattern;                       // block x block
    std::array<Alignment, 4> alignment{};  // per Side, meaningful on stub sides
};

struct WireKey {
    Orientation orientation = Orientation::Horizontal;
    Alignment from = Alignment::Neutral;  // west or north end
    Alignment to = Alignment::Neutral;    // east or south end
    friend auto operator<=>(const WireKey&, const WireKey&) = default;
};

struct MacrotileSet {
    int block = kBlockSize;
    int port_offset = kPortOffset;
    std::map<GateTile, TileBlock> tiles;   // Blank may be absent: it is all zero
    std::map<WireKey, Pattern> wires;      // 2b x b horizontal, b x 2b vertical

    const TileBlock& tile(GateTile t) const;
    const Pattern& wire(const WireKey& k) const;
};

// Dimension and port checks for library entries with role tile, hwire or
// vwire. Empty when the entry is fine (or has another role).
std::vector<std::string> check_composite(const LibraryEntry& e, int block = kBlockSize, int port_offset = kPortOffset);
// Collects the composite entries of a library. Throws Error on entries
// that fail check_composite or are duplicated.
MacrotileSet macrotiles_from_library(const GadgetLibrary& lib, int block = kBlockSize, int port_offset = kPortOffset);

// Symbolic stand-ins: every tile becomes a distinct b x b glyph (Blank is
// all zero) and there are no wire blocks. Use with Layout::Bare.
MacrotileSet mock_macrotiles(int block = 3);
// Reads a Bare-compiled mock pattern back into its circuit.
CircuitGrid decode_mock(const Pattern& p, const MacrotileSet& mock);
// Preimage oracle for mock patterns: the pattern (surrounded by zeros) has
// a preimage iff its circuit is satisfiable.
bool mock_has_preimage(const Pattern& p, const MacrotileSet& mock);

// One gate tile with its wire blocks, (5b) x (5b), all ports neutral.
Pattern assemble_macrotile(const MacrotileSet& set, GateTile t);

struct Dimensions {
    long long width = 0;
    long long height = 0;
};
Dimensions compiled_dimensions(const CircuitGrid& c, Layout layout, int block = kBlockSize);
// Substitutes every tile. Direct layout picks each wire block from the
// alignments of the two tiles it joins; on the torus, blocks crossing the
// period boundary wrap around.
Pattern compile_circuit(const MacrotileSet& set, const CircuitGrid& c, Layout layout, Topology topo = Topology::Plane);

// ---------------------------------------------------------------------------
// Wang tiles

struct WangTile {
    int e = 0, n = 0, w = 0, s = 0;
    friend bool operator==(const WangTile&, const WangTile&) = default;
};
using WangTileSet = std::vector<WangTile>;

// One tile per line: four integers in E N W S order. '#' starts a comment.
WangTileSet parse_wang(std::string_view text);
WangTileSet read_wang_file(const std::string& path);

// Bits x1..x8 (index 0 unused): west = (x2, x1), north = (x3, x4),
// east = (x5, x6), south = (x8, x7), each pair read high bit first.
std::array<bool, 9> wang_bits(const WangTile& t);
WangTile wang_from_bits(const std::array<bool, 9>& x);

// Rows of the blueprint for k tiles (k >= 2): 17 + 12 (k - 2) + 15.
int blueprint_rows(int k);
inline constexpr int kBlueprintColumns = 23;

// Circuit whose torus-periodic satisfying assignments are exactly the valid
// tilings: each copy reads its color bits from wires crossing its four
// edges and checks them against one clause per tile. A single tile is
// listed twice.
CircuitGrid wang_blueprint(const WangTileSet& tiles);

// Blueprint of an 11-tile set compiled at 270 on the torus. The tile set is
// an input; see jeandel_rao_dimensions for the size without rendering.
Dimensions jeandel_rao_dimensions(const WangTileSet& tiles);
Pattern jeandel_rao_instance(const MacrotileSet& set, const WangTileSet& tiles);

// ---------------------------------------------------------------------------
// DNF formulas: each clause is a conjunction of signed variable indices.

using Dnf = std::vector<std::vector<int>>;
// One clause per line of whitespace-separated nonzero integers; a trailing
// 0 is allowed. '#' and 'c' lines are comments.
Dnf parse_dnf(std::string_view text);
Dnf read_dnf_file(const std::string& path);
bool evaluate_dnf(const Dnf& f, const std::vector<bool>& x);  // x[v - 1]

// Closed circuit that is satisfiable iff f is.
CircuitGrid formula_circuit(const Dnf& f);
Pattern formula_to_pattern(const Dnf& f, const MacrotileSet& set, Layout layout);

}  // namespace lifepre
