#pragma once
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lifepre/grid.hpp"
#include "lifepre/lifestep.hpp"
#include "lifepre/sat.hpp"

namespace lifepre {

// Sides in the canonical E, N, W, S order used by relation tuples.
enum class Side { E = 0, N = 1, W = 2, S = 3 };
inline constexpr std::array<Side, 4> kSides = {Side::E, Side::N, Side::W, Side::S};
char side_char(Side s);
Side parse_side(char c);
// Counterclockwise quarter turn: E -> N -> W -> S -> E.
Side rotate_ccw(Side s);
inline bool is_vertical_port(Side s) { return s == Side::N || s == Side::S; }

enum class Orientation { Horizontal, Vertical };

// Vertical signals are 4 wide and 2 tall: W0 has its top row alive, W1 its
// bottom row, W2 is blank. Horizontal signals are the counterclockwise
// rotations (2 wide, 4 tall; W0 has its left column alive).
//
// Along a vertical wire, W_i on rows [r, r+1] forces W_{i+1} on rows
// [r-1, r]; along a horizontal wire W_i on columns [c, c+1] forces W_{i+1}
// on columns [c-1, c].
struct WireSignal {
    int phase = 0;
    Orientation orientation = Orientation::Vertical;
};
Pattern wire_signal_pattern(WireSignal s, Cell anchor = {0, 0});
// Phase of a 4x2 (or 2x4) window content, or nullopt if it is no signal.
std::optional<int> decode_signal(const Pattern& window, Orientation o, Cell anchor);

// A wire of width two meeting one side of a w x h gadget. offset is the
// first of the two wire columns (N/S) or rows (E/W).
struct WirePort {
    Side side = Side::N;
    int offset = 0;
    std::array<int, 2> operating_phases = {0, 1};  // phase for bit 0, bit 1

    friend bool operator==(const WirePort&, const WirePort&) = default;
};

// The 4x2 (2x4) preimage window of a port. It straddles the gadget border:
// one row (column) lies outside the gadget, one inside.
Rect port_window(const WirePort& p, int width, int height);
Orientation port_orientation(const WirePort& p);
// The signal pattern carrying `bit` at this port.
Pattern port_signal(const WirePort& p, int width, int height, bool bit);

enum class Affinity { Near, Far };
Affinity affinity_of(const WirePort& p, bool bit);
bool bit_of(const WirePort& p, Affinity a);

struct ChargeRule {
    std::set<Side> premise;
    std::set<Side> conclusion;

    // "N,S |- E,N,S"; either side may be empty ("|- N").
    static ChargeRule parse(const std::string& s);
    std::string to_string() const;
    friend bool operator==(const ChargeRule&, const ChargeRule&) = default;
};

// Bit tuples are strings of '0'/'1', one character per port in ENWS order.
using Relation = std::set<std::string>;

struct GadgetSpec {
    std::vector<WirePort> ports;  // at most one per side; kept in ENWS order
    std::vector<ChargeRule> charge_rules;
    Relation relation;
    std::vector<Cell> forced_zero_cells;  // preimage cells that must always be 0
    int frame = 4;                        // zero image frame used as context

    void normalize();  // sorts ports, validates sides
    const WirePort* port(Side s) const;
    friend bool operator==(const GadgetSpec&, const GadgetSpec&) = default;
};

// Near/far spelling of a relation ('N'/'F' per port).
Relation to_affinity(const GadgetSpec& spec, const Relation& r);
Relation from_affinity(const GadgetSpec& spec, const Relation& a);

struct Gadget {
    std::string name;
    Pattern pattern;  // rectangular, anchored at (0,0)
    GadgetSpec spec;

    int width() const { return pattern.bounds().width; }
    int height() const { return pattern.bounds().height; }
};

// Quarter turn counterclockwise. Pattern cell (x, y) of a w x h gadget moves
// to (y, w - 1 - x). Relation tuple abcd (ENWS) becomes d, not a, b, not c.
GadgetSpec rotate_spec(const GadgetSpec& spec, int width, int height);
Relation rotate_relation(const Relation& r, const std::vector<WirePort>& ports);
Pattern rotate_pattern_ccw(const Pattern& p);
Gadget rotate_gadget(const Gadget& g);

// ---------------------------------------------------------------------------
// Verification

struct VerifyOptions {
    EncodingKind encoding = EncodingKind::DivideConquer;
    std::size_t enumeration_limit = 4096;
    SatBackend* backend = nullptr;
};

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct ChargingResult {
    ChargeRule rule;
    bool holds = false;
    std::optional<Pattern> counterexample;  // preimage violating the rule
};

struct RelationResult {
    Relation observed;
    Relation realizable_with_zero_boundary;
    bool inconclusive = false;
    Verdict verdict(const Relation& claimed) const;
};

struct GadgetReport {
    std::string name;
    std::vector<ChargingResult> charging;
    RelationResult relation;
    std::vector<Cell> nonzero_forced_cells;  // forced-zero cells that can be 1
    std::vector<std::string> structure_errors;
    Verdict verdict(const GadgetSpec& spec) const;
};

// The boundary context: the gadget inside a zero image frame of
// spec.frame cells, with every port wire continued through the frame.
Pattern verification_image(const Gadget& g);
// Preimage cells on the two rings straddling the gadget border, minus the
// port windows. Zero-boundary realizability forces these to 0.
std::vector<Cell> zero_band(const Gadget& g);

ChargingResult verify_charging(const Gadget& g, const ChargeRule& rule, const VerifyOptions& opts = {});
RelationResult verify_relation(const Gadget& g, const VerifyOptions& opts = {});
std::vector<Cell> check_forced_zero(const Gadget& g, const VerifyOptions& opts = {});
std::vector<std::string> check_structure(const Gadget& g);
GadgetReport verify_gadget(const Gadget& g, const VerifyOptions& opts = {});

// ---------------------------------------------------------------------------
// Library files: one JSON object per gadget.

struct LibraryEntry {
    Gadget gadget;
    std::string role = "basic";  // basic | tile | hwire | vwire
    std::string tile;            // gate tile name for role "tile"
    std::map<std::string, std::string> alignment;  // per side, role "tile"
    std::string from, to;                          // wire blocks
    std::string orientation;                       // wire blocks: horizontal | vertical
    std::string note;
};

LibraryEntry parse_library_entry(const std::string& json_text);
std::string emit_library_entry(const LibraryEntry& e);

struct GadgetLibrary {
    std::vector<LibraryEntry> entries;
    const LibraryEntry* find(const std::string& name) const;
};
// Reads every *.json file in dir, in name order.
GadgetLibrary load_library(const std::string& dir);
void save_library_entry(const std::string& dir, const LibraryEntry& e);

}  // namespace lifepre
