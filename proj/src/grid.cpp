#include "lifepre/grid.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "lifepre/error.hpp"

namespace lifepre {

Rect::Rect(int x0_, int y0_, int width_, int height_) : x0(x0_), y0(y0_), width(width_), height(height_) {
    if (width < 1 || height < 1) throw Error("Rect: width and height must be positive");
}

Rect Rect::expanded(int r) const { return Rect(x0 - r, y0 - r, width + 2 * r, height + 2 * r); }

std::vector<Cell> Rect::cells() const {
    std::vector<Cell> out;
    out.reserve(static_cast<std::size_t>(area()));
    for (int y = y0; y < y1(); ++y)
        for (int x = x0; x < x1(); ++x) out.push_back({x, y});
    return out;
}

Rect bounding_union(const Rect& a, const Rect& b) {
    int x0 = std::min(a.x0, b.x0), y0 = std::min(a.y0, b.y0);
    int x1 = std::max(a.x1(), b.x1()), y1 = std::max(a.y1(), b.y1());
    return Rect(x0, y0, x1 - x0, y1 - y0);
}

// ---------------------------------------------------------------------------
// Pattern

Pattern Pattern::filled(const Rect& r, bool value) {
    Pattern p;
    p.bounds_ = r;
    p.cells_.assign(static_cast<std::size_t>(r.area()), value ? 1 : 0);
    p.size_ = p.cells_.size();
    return p;
}

Pattern Pattern::from_bits(const Rect& r, const std::vector<std::uint8_t>& bits) {
    if (static_cast<long long>(bits.size()) != r.area()) throw Error("Pattern::from_bits: size mismatch");
    Pattern p;
    p.bounds_ = r;
    p.cells_.resize(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) p.cells_[i] = bits[i] ? 1 : 0;
    p.size_ = bits.size();
    return p;
}

Pattern Pattern::from_cells(const std::map<Cell, bool>& cells) { return Pattern().with(cells); }

Pattern Pattern::from_rows(const std::vector<std::string>& rows, Cell origin) {
    std::map<Cell, bool> cells;
    for (std::size_t y = 0; y < rows.size(); ++y) {
        for (std::size_t x = 0; x < rows[y].size(); ++x) {
            char ch = rows[y][x];
            Cell c{origin.x + static_cast<int>(x), origin.y + static_cast<int>(y)};
            switch (ch) {
                case '.': case '0': cells[c] = false; break;
                case 'o': case 'O': case '1': case '*': cells[c] = true; break;
                case '?': case ' ': break;
                default: throw Error(std::string("Pattern::from_rows: bad character '") + ch + "'");
            }
        }
    }
    return from_cells(cells);
}

bool Pattern::in_domain(Cell c) const {
    return size_ > 0 && bounds_.contains(c) && cells_[index(c)] != kAbsent;
}

std::optional<bool> Pattern::at(Cell c) const {
    if (size_ == 0 || !bounds_.contains(c)) return std::nullopt;
    std::uint8_t v = cells_[index(c)];
    if (v == kAbsent) return std::nullopt;
    return v == 1;
}

bool Pattern::bit(Cell c) const {
    auto v = at(c);
    if (!v) throw Error("Pattern::bit: cell outside domain");
    return *v;
}

std::vector<Cell> Pattern::domain() const {
    std::vector<Cell> out;
    if (size_ == 0) return out;
    out.reserve(size_);
    for (int y = bounds_.y0; y < bounds_.y1(); ++y)
        for (int x = bounds_.x0; x < bounds_.x1(); ++x)
            if (cells_[index({x, y})] != kAbsent) out.push_back({x, y});
    return out;
}

std::vector<Cell> Pattern::support() const {
    std::vector<Cell> out;
    if (size_ == 0) return out;
    for (int y = bounds_.y0; y < bounds_.y1(); ++y)
        for (int x = bounds_.x0; x < bounds_.x1(); ++x)
            if (cells_[index({x, y})] == 1) out.push_back({x, y});
    return out;
}

void Pattern::grow_to(const Rect& r) {
    if (size_ == 0) {
        bounds_ = r;
        cells_.assign(static_cast<std::size_t>(r.area()), kAbsent);
        return;
    }
    if (bounds_.contains(r)) return;
    Rect nb = bounding_union(bounds_, r);
    std::vector<std::uint8_t> nc(static_cast<std::size_t>(nb.area()), kAbsent);
    for (int y = bounds_.y0; y < bounds_.y1(); ++y) {
        auto src = cells_.begin() + static_cast<std::ptrdiff_t>(index({bounds_.x0, y}));
        auto dst = nc.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(y - nb.y0) * nb.width +
                                                            (bounds_.x0 - nb.x0));
        std::copy(src, src + bounds_.width, dst);
    }
    bounds_ = nb;
    cells_ = std::move(nc);
}

Pattern Pattern::with(Cell c, bool value) const {
    Pattern p = *this;
    p.grow_to(Rect(c.x, c.y, 1, 1));
    auto& slot = p.cells_[p.index(c)];
    if (slot == kAbsent) ++p.size_;
    slot = value ? 1 : 0;
    return p;
}

Pattern Pattern::with(const std::map<Cell, bool>& cells) const {
    if (cells.empty()) return *this;
    int x0 = cells.begin()->first.x, x1 = x0, y0 = cells.begin()->first.y, y1 = y0;
    for (auto& [c, v] : cells) {
        x0 = std::min(x0, c.x);
        x1 = std::max(x1, c.x);
        y0 = std::min(y0, c.y);
        y1 = std::max(y1, c.y);
    }
    Pattern p = *this;
    p.grow_to(Rect(x0, y0, x1 - x0 + 1, y1 - y0 + 1));
    for (auto& [c, v] : cells) {
        auto& slot = p.cells_[p.index(c)];
        if (slot == kAbsent) ++p.size_;
        slot = v ? 1 : 0;
    }
    return p;
}

Pattern Pattern::restricted(const Rect& r) const {
    std::map<Cell, bool> cells;
    if (size_ == 0) return {};
    int xa = std::max(r.x0, bounds_.x0), xb = std::min(r.x1(), bounds_.x1());
    int ya = std::max(r.y0, bounds_.y0), yb = std::min(r.y1(), bounds_.y1());
    for (int y = ya; y < yb; ++y)
        for (int x = xa; x < xb; ++x) {
            auto v = cells_[index({x, y})];
            if (v != kAbsent) cells[{x, y}] = v == 1;
        }
    return from_cells(cells);
}

Pattern Pattern::overlaid(const Pattern& src) const {
    if (src.empty()) return *this;
    Pattern p = *this;
    p.grow_to(src.bounds_);
    for (int y = src.bounds_.y0; y < src.bounds_.y1(); ++y)
        for (int x = src.bounds_.x0; x < src.bounds_.x1(); ++x) {
            auto v = src.cells_[src.index({x, y})];
            if (v == kAbsent) continue;
            auto& slot = p.cells_[p.index({x, y})];
            if (slot == kAbsent) ++p.size_;
            slot = v;
        }
    return p;
}

Pattern Pattern::shifted(Cell v) const {
    Pattern p = *this;
    if (size_ > 0) p.bounds_ = bounds_.translated(-v);
    return p;
}

std::string Pattern::to_string() const {
    std::string s;
    if (size_ == 0) return s;
    for (int y = bounds_.y0; y < bounds_.y1(); ++y) {
        for (int x = bounds_.x0; x < bounds_.x1(); ++x) {
            auto v = cells_[index({x, y})];
            s += v == kAbsent ? ' ' : (v ? 'o' : '.');
        }
        s += '\n';
    }
    return s;
}

bool operator==(const Pattern& a, const Pattern& b) {
    if (a.size_ != b.size_) return false;
    if (a.size_ == 0) return true;
    if (a.bounds_ == b.bounds_) return a.cells_ == b.cells_;
    for (Cell c : a.domain())
        if (a.at(c) != b.at(c)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// PatternWriter

PatternWriter::PatternWriter(const Rect& r, bool fill) : p_(Pattern::filled(r, fill)) {}

void PatternWriter::set(Cell c, bool value) {
    if (!p_.bounds_.contains(c)) throw Error("PatternWriter::set: cell outside rectangle");
    p_.cells_[p_.index(c)] = value ? 1 : 0;
}

void PatternWriter::paste(const Pattern& src, Cell offset) {
    if (src.empty()) return;
    const Rect& sb = src.bounds();
    Rect target = sb.translated(offset);
    if (!p_.bounds_.contains(target)) throw Error("PatternWriter::paste: source does not fit");
    for (int y = sb.y0; y < sb.y1(); ++y) {
        const std::uint8_t* in = &src.cells_[src.index({sb.x0, y})];
        std::uint8_t* out = &p_.cells_[p_.index({sb.x0 + offset.x, y + offset.y})];
        for (int x = 0; x < sb.width; ++x)
            if (in[x] != Pattern::kAbsent) out[x] = in[x];
    }
}

Pattern PatternWriter::freeze() && { return std::move(p_); }

// ---------------------------------------------------------------------------
// RLE

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;
    int line = 1;
    int column = 1;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char next() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
        return c;
    }
};

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

int parse_positive(const std::string& s, int line, int column) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError("malformed RLE header: expected a positive integer, got '" + s + "'", line, column);
    long long v = std::stoll(s);
    if (v < 1 || v > (1LL << 30)) throw ParseError("malformed RLE header: dimension out of range", line, column);
    return static_cast<int>(v);
}

}  // namespace

Pattern parse_rle(std::string_view text) {
    Cursor cur{text};
    // Skip comment lines and blank lines until the header.
    std::string header;
    int header_line = 0;
    while (!cur.done()) {
        std::size_t eol = text.find('\n', cur.pos);
        std::string_view raw = text.substr(cur.pos, eol == std::string_view::npos ? text.size() - cur.pos : eol - cur.pos);
        std::string line = trim(raw);
        int line_no = cur.line;
        while (!cur.done() && cur.pos < (eol == std::string_view::npos ? text.size() : eol + 1)) cur.next();
        if (line.empty() || line[0] == '#') continue;
        header = line;
        header_line = line_no;
        break;
    }
    if (header.empty()) throw ParseError("missing RLE header", cur.line, cur.column);

    int width = 0, height = 0;
    {
        std::stringstream ss(header);
        std::string item;
        int seen = 0;
        while (std::getline(ss, item, ',')) {
            auto eq = item.find('=');
            if (eq == std::string::npos) throw ParseError("malformed RLE header item '" + trim(item) + "'", header_line, 1);
            std::string key = trim(item.substr(0, eq));
            std::string value = trim(item.substr(eq + 1));
            for (auto& ch : key) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
            if (key == "x") {
                width = parse_positive(value, header_line, 1);
                seen |= 1;
            } else if (key == "y") {
                height = parse_positive(value, header_line, 1);
                seen |= 2;
            } else if (key == "rule") {
                std::string r = value;
                for (auto& ch : r) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
                if (r != "B3/S23" && r != "23/3" && r != "LIFE")
                    throw ParseError("unsupported rule '" + value + "' (only B3/S23)", header_line, 1);
            } else {
                throw ParseError("unknown RLE header key '" + key + "'", header_line, 1);
            }
        }
        if (seen != 3) throw ParseError("malformed RLE header: need x and y", header_line, 1);
    }

    std::vector<std::uint8_t> bits(static_cast<std::size_t>(width) * height, 0);
    int x = 0, y = 0;
    long long run = 0;
    bool have_run = false;
    bool terminated = false;
    while (!cur.done()) {
        int line = cur.line, column = cur.column;
        char c = cur.next();
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (have_run) throw ParseError("whitespace inside run count", line, column);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            run = run * 10 + (c - '0');
            if (run > (1LL << 31)) throw ParseError("run count too large", line, column);
            have_run = true;
            continue;
        }
        long long count = have_run ? run : 1;
        if (have_run && run == 0) throw ParseError("run count 0", line, column);
        run = 0;
        have_run = false;
        if (c == '!') {
            terminated = true;
            break;
        } else if (c == '$') {
            y += static_cast<int>(count);
            x = 0;
            if (y > height) throw ParseError("body exceeds declared height", line, column);
        } else if (c == 'b' || c == 'o') {
            if (y >= height || x + count > width) throw ParseError("body exceeds declared width", line, column);
            if (c == 'o')
                for (long long i = 0; i < count; ++i) bits[static_cast<std::size_t>(y) * width + x + i] = 1;
            x += static_cast<int>(count);
        } else if (c == '#') {
            // comment line inside the body
            while (!cur.done() && cur.peek() != '\n') cur.next();
        } else {
            throw ParseError(std::string("unexpected character '") + c + "' in RLE body", line, column);
        }
    }
    if (!terminated) throw ParseError("missing '!' terminator", cur.line, cur.column);
    return Pattern::from_bits(Rect(0, 0, width, height), bits);
}

std::string emit_rle(const Pattern& p, const Rect& bounds, const RleOptions& opts) {
    if (!p.empty() && !bounds.contains(p.bounds())) {
        for (Cell c : p.domain())
            if (!bounds.contains(c)) throw Error("emit_rle: bounds do not cover the pattern domain");
    }
    std::string out = "x = " + std::to_string(bounds.width) + ", y = " + std::to_string(bounds.height);
    if (opts.rule_tag) out += ", rule = B3/S23";
    out += '\n';

    std::vector<std::string> tokens;
    auto push = [&](long long n, char tag) {
        if (n <= 0) return;
        tokens.push_back((n > 1 ? std::to_string(n) : std::string()) + tag);
    };
    long long pending_rows = 0;  // row ends not yet written
    bool any_live = false;
    for (int y = bounds.y0; y < bounds.y1(); ++y) {
        std::vector<std::pair<long long, char>> runs;
        for (int x = bounds.x0; x < bounds.x1(); ++x) {
            auto v = p.at({x, y});
            char tag = (v && *v) ? 'o' : 'b';
            if (!runs.empty() && runs.back().second == tag)
                ++runs.back().first;
            else
                runs.push_back({1, tag});
        }
        if (!runs.empty() && runs.back().second == 'b') runs.pop_back();
        if (!runs.empty()) {
            if (any_live) push(pending_rows, '$');
            else if (pending_rows > 0) push(pending_rows, '$');
            pending_rows = 0;
            for (auto& [n, tag] : runs) push(n, tag);
            any_live = true;
        }
        ++pending_rows;
    }
    if (!any_live) push(bounds.width, 'b');
    tokens.push_back("!");

    std::string line;
    for (auto& t : tokens) {
        if (!line.empty() && static_cast<int>(line.size() + t.size()) > opts.line_width) {
            out += line;
            out += '\n';
            line.clear();
        }
        line += t;
    }
    out += line;
    return out;
}

Pattern parse_cells(std::string_view text) {
    std::vector<std::string> rows;
    std::stringstream ss{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line[0] == '!') continue;
        for (std::size_t i = 0; i < line.size(); ++i)
            if (line[i] != '.' && line[i] != 'O')
                throw ParseError(std::string("unexpected character '") + line[i] + "' in .cells", line_no,
                                 static_cast<int>(i) + 1);
        rows.push_back(line);
    }
    std::size_t width = 1;
    for (auto& r : rows) width = std::max(width, r.size());
    if (rows.empty()) rows.push_back("");
    std::vector<std::uint8_t> bits(width * rows.size(), 0);
    for (std::size_t y = 0; y < rows.size(); ++y)
        for (std::size_t x = 0; x < rows[y].size(); ++x) bits[y * width + x] = rows[y][x] == 'O';
    return Pattern::from_bits(Rect(0, 0, static_cast<int>(width), static_cast<int>(rows.size())), bits);
}

Pattern read_pattern_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    if (path.size() >= 6 && path.substr(path.size() - 6) == ".cells") return parse_cells(buf.str());
    return parse_rle(buf.str());
}

void write_rle_file(const std::string& path, const Pattern& p, const RleOptions& opts) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << emit_rle(p, p.empty() ? Rect(0, 0, 1, 1) : p.bounds(), opts) << '\n';
    if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace lifepre
