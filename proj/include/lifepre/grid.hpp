#pragma once
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lifepre {

// Coordinates: x grows to the right, y grows downward. This matches RLE row
// order. Figures drawn in mathematical orientation (y up) are flipped at the
// I/O boundary only, never inside the library.
struct Cell {
    int x = 0;
    int y = 0;

    friend constexpr bool operator==(Cell, Cell) = default;
    friend constexpr auto operator<=>(const Cell& a, const Cell& b) {
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }
    friend constexpr Cell operator+(Cell a, Cell b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Cell operator-(Cell a, Cell b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Cell operator-(Cell a) { return {-a.x, -a.y}; }
};

struct Rect {
    int x0 = 0;
    int y0 = 0;
    int width = 1;
    int height = 1;

    Rect() = default;
    Rect(int x0_, int y0_, int width_, int height_);

    int x1() const { return x0 + width; }   // exclusive
    int y1() const { return y0 + height; }  // exclusive
    long long area() const { return static_cast<long long>(width) * height; }
    bool contains(Cell c) const { return c.x >= x0 && c.x < x1() && c.y >= y0 && c.y < y1(); }
    bool contains(const Rect& r) const {
        return r.x0 >= x0 && r.y0 >= y0 && r.x1() <= x1() && r.y1() <= y1();
    }
    // Grows (or shrinks, for negative r) by r cells on every side.
    Rect expanded(int r) const;
    Rect translated(Cell v) const { return Rect(x0 + v.x, y0 + v.y, width, height); }
    std::vector<Cell> cells() const;

    friend bool operator==(const Rect&, const Rect&) = default;
};

// Smallest rectangle containing both.
Rect bounding_union(const Rect& a, const Rect& b);

// A finite partial map from cells to {0,1}. Immutable value: every edit
// returns a new pattern. Storage is dense over a bounding rectangle; cells of
// the rectangle outside the domain are marked absent.
class Pattern {
public:
    Pattern() = default;  // empty domain

    static Pattern filled(const Rect& r, bool value);
    // Row-major bits over r; size must equal r.area().
    static Pattern from_bits(const Rect& r, const std::vector<std::uint8_t>& bits);
    static Pattern from_cells(const std::map<Cell, bool>& cells);
    // Rows of '.'/'0' (dead), 'o'/'O'/'1'/'*' (alive), '?' (outside domain); row 0 on top.
    static Pattern from_rows(const std::vector<std::string>& rows, Cell origin = {0, 0});

    bool empty() const { return size_ == 0; }
    std::size_t size() const { return size_; }
    // Bounding box of the domain. Meaningless for an empty pattern.
    const Rect& bounds() const { return bounds_; }
    bool is_rectangular() const { return size_ > 0 && static_cast<long long>(size_) == bounds_.area(); }

    bool in_domain(Cell c) const;
    // nullopt when c is outside the domain.
    std::optional<bool> at(Cell c) const;
    // Requires c in the domain.
    bool bit(Cell c) const;

    std::vector<Cell> domain() const;
    std::vector<Cell> support() const;

    Pattern with(Cell c, bool value) const;
    Pattern with(const std::map<Cell, bool>& cells) const;
    // Restriction to cells inside r.
    Pattern restricted(const Rect& r) const;
    // Copies src over this pattern (src wins where both are defined).
    Pattern overlaid(const Pattern& src) const;

    // shift(p, v): the pattern Q with Q[w - v] = P[w].
    Pattern shifted(Cell v) const;

    // '.', 'o' and ' ' (outside domain) rows over the bounding box.
    std::string to_string() const;

    friend bool operator==(const Pattern& a, const Pattern& b);

private:
    Rect bounds_{0, 0, 1, 1};
    std::vector<std::uint8_t> cells_;  // 0, 1, or kAbsent; row-major over bounds_
    std::size_t size_ = 0;
    static constexpr std::uint8_t kAbsent = 2;

    std::size_t index(Cell c) const {
        return static_cast<std::size_t>(c.y - bounds_.y0) * bounds_.width + (c.x - bounds_.x0);
    }
    void grow_to(const Rect& r);
    friend class PatternWriter;
};

inline Pattern shift(const Pattern& p, Cell v) { return p.shifted(v); }

// Mutable builder for large rectangular patterns; freeze() yields the value.
class PatternWriter {
public:
    explicit PatternWriter(const Rect& r, bool fill = false);
    void set(Cell c, bool value);
    // Pastes src translated by offset (only src's domain cells are written).
    void paste(const Pattern& src, Cell offset);
    Pattern freeze() &&;

private:
    Pattern p_;
};

// Cells constrained to 0/1; every other cell is unconstrained. Deliberately
// not a Pattern so that code requiring committed bits cannot receive one.
class TriPattern {
public:
    TriPattern() = default;
    explicit TriPattern(Pattern committed) : committed_(std::move(committed)) {}
    static TriPattern from_rows(const std::vector<std::string>& rows, Cell origin = {0, 0}) {
        return TriPattern(Pattern::from_rows(rows, origin));
    }

    std::optional<bool> constraint(Cell c) const { return committed_.at(c); }
    bool unconstrained() const { return committed_.empty(); }
    const Pattern& committed() const { return committed_; }
    std::vector<Cell> constrained_cells() const { return committed_.domain(); }
    TriPattern with(Cell c, bool value) const { return TriPattern(committed_.with(c, value)); }
    TriPattern merged(const TriPattern& other) const {
        return TriPattern(committed_.overlaid(other.committed_));
    }

    friend bool operator==(const TriPattern&, const TriPattern&) = default;

private:
    Pattern committed_;
};

// Golly RLE. The parsed pattern is rectangular, anchored at (0,0), with
// cells missing from a row read as dead.
Pattern parse_rle(std::string_view text);

struct RleOptions {
    bool rule_tag = false;  // append ", rule = B3/S23" to the header
    int line_width = 70;
};
// Throws Error if bounds does not cover the domain. Cells inside bounds but
// outside the domain are written as dead.
std::string emit_rle(const Pattern& p, const Rect& bounds, const RleOptions& opts = {});
inline std::string emit_rle(const Pattern& p) { return emit_rle(p, p.bounds()); }

// Plaintext .cells: '!' comment lines, '.' dead, 'O' alive.
Pattern parse_cells(std::string_view text);

Pattern read_pattern_file(const std::string& path);  // by extension: .rle or .cells
void write_rle_file(const std::string& path, const Pattern& p, const RleOptions& opts = {true, 70});

}  // namespace lifepre
