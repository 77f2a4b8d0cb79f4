#pragma once
#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lifepre/grid.hpp"

namespace lifepre {

// DIMACS-style literal: +v is variable v true, -v is v false. Variables start at 1.
using Lit = int;
using Clause = std::vector<Lit>;

// Hands out fresh variable ids in increasing order.
class VarAllocator {
public:
    explicit VarAllocator(int last_used = 0) : last_(last_used) {}
    int fresh() { return ++last_; }
    int last() const { return last_; }

private:
    int last_;
};

// Nine bits of a Moore neighborhood. Bit i is the cell at
// (dx, dy) = (i % 3 - 1, i / 3 - 1), so bit 4 is the center.
struct Neighborhood {
    std::uint16_t bits = 0;

    static constexpr int kCenter = 4;
    static constexpr int index_of(int dx, int dy) { return (dy + 1) * 3 + (dx + 1); }
    constexpr bool at(int i) const { return (bits >> i) & 1; }
    constexpr bool center() const { return at(kCenter); }
    constexpr int sum() const { return std::popcount(static_cast<unsigned>(bits & 0x1ff)); }
};

// B3/S23 written with the sum over the whole 3x3 block: a dead cell is born
// at sum 3, a live cell survives at sum 3 or 4.
constexpr bool step_cell(Neighborhood n) {
    int s = n.sum();
    return n.center() ? (s == 3 || s == 4) : (s == 3);
}

// One generation on `window`. Every cell of window expanded by one must be in
// the domain of p; the caller pads explicitly.
Pattern step(const Pattern& p, const Rect& window);

enum class EncodingKind { DivideConquer, SortingNetwork, Merge };
inline constexpr std::array<EncodingKind, 3> kAllEncodings = {EncodingKind::DivideConquer,
                                                              EncodingKind::SortingNetwork,
                                                              EncodingKind::Merge};

std::string to_string(EncodingKind k);
// Accepts "dc", "sort", "merge" and the long names.
EncodingKind parse_encoding(const std::string& s);

// Clauses forcing `out` to equal step_cell of the nine inputs (ordered as in
// Neighborhood). DivideConquer uses no auxiliary variables; the other two
// draw from `fresh`.
std::vector<Clause> encode_cell(EncodingKind kind, std::span<const Lit, 9> in, Lit out, VarAllocator& fresh);

}  // namespace lifepre
