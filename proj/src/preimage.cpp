#include "lifepre/preimage.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "lifepre/error.hpp"

namespace lifepre {

BoundaryMode BoundaryMode::zero_padded(int t) {
    if (t < 0) throw Error("zero padding thickness must be non-negative");
    BoundaryMode m;
    m.kind = Kind::ZeroPadded;
    m.thickness = t;
    return m;
}

BoundaryMode BoundaryMode::torus(int px, int py) {
    if (px < 1 || py < 1) throw Error("torus periods must be positive");
    BoundaryMode m;
    m.kind = Kind::Torus;
    m.px = px;
    m.py = py;
    return m;
}

BoundaryMode BoundaryMode::parse(const std::string& s) {
    if (s == "free") return free();
    try {
        if (s.rfind("zero:", 0) == 0) return zero_padded(std::stoi(s.substr(5)));
        if (s == "zero") return zero_padded(0);
        if (s.rfind("torus:", 0) == 0) {
            auto rest = s.substr(6);
            auto x = rest.find('x');
            if (x == std::string::npos) throw Error("");
            return torus(std::stoi(rest.substr(0, x)), std::stoi(rest.substr(x + 1)));
        }
    } catch (const std::exception&) {
    }
    throw Error("bad boundary mode '" + s + "' (expected free, zero:<t> or torus:<px>x<py>)");
}

std::string BoundaryMode::to_string() const {
    switch (kind) {
        case Kind::Free: return "free";
        case Kind::ZeroPadded: return "zero:" + std::to_string(thickness);
        case Kind::Torus: return "torus:" + std::to_string(px) + "x" + std::to_string(py);
    }
    return "?";
}

namespace {

void require_rectangular(const PreimageQuery& q) {
    if (!q.image.is_rectangular()) throw Error("boundary mode " + q.mode.to_string() + " needs a rectangular image");
}

// Dense cell -> variable table over a rectangle; 0 means no variable.
class VarTable {
public:
    VarTable() = default;
    explicit VarTable(const Rect& r) : rect_(r), vars_(static_cast<std::size_t>(r.area()), 0) {}
    int get(Cell c) const { return rect_.contains(c) ? vars_[index(c)] : 0; }
    void set(Cell c, int v) { vars_[index(c)] = v; }
    const Rect& rect() const { return rect_; }

private:
    std::size_t index(Cell c) const {
        return static_cast<std::size_t>(c.y - rect_.y0) * static_cast<std::size_t>(rect_.width) + static_cast<std::size_t>(c.x - rect_.x0);
    }
    Rect rect_;
    std::vector<int> vars_;
};

std::vector<Cell> dilate(const Pattern& p) {
    if (p.empty()) return {};
    Rect r = p.bounds().expanded(1);
    std::vector<Cell> out;
    for (int y = r.y0; y < r.y1(); ++y)
        for (int x = r.x0; x < r.x1(); ++x) {
            bool hit = false;
            for (int dy = -1; dy <= 1 && !hit; ++dy)
                for (int dx = -1; dx <= 1 && !hit; ++dx) hit = p.in_domain({x + dx, y + dy});
            if (hit) out.push_back({x, y});
        }
    return out;
}

// Adds the clauses of encode_cell with a constant successor. The constant
// is expressed through `truth`, a variable fixed to 1, and then folded away.
void add_rule(CnfInstance& cnf, EncodingKind kind, const std::array<Lit, 9>& in, bool successor, int truth) {
    VarAllocator alloc = cnf.allocator();
    Lit out = successor ? truth : -truth;
    auto clauses = encode_cell(kind, in, out, alloc);
    cnf.sync(alloc);
    for (auto& c : clauses) {
        Clause kept;
        bool satisfied = false;
        for (Lit l : c) {
            if (l == truth) {
                satisfied = true;
                break;
            }
            if (l != -truth) kept.push_back(l);
        }
        if (!satisfied) cnf.add(std::move(kept));
    }
}

}  // namespace

std::vector<Cell> preimage_cells(const PreimageQuery& q) {
    switch (q.mode.kind) {
        case BoundaryMode::Kind::Free:
            return dilate(q.image);
        case BoundaryMode::Kind::ZeroPadded:
            require_rectangular(q);
            return q.image.bounds().expanded(q.mode.thickness + 1).cells();
        case BoundaryMode::Kind::Torus:
            require_rectangular(q);
            if (q.image.bounds().width != q.mode.px || q.image.bounds().height != q.mode.py)
                throw Error("torus mode needs an image of exactly one period (" + std::to_string(q.mode.px) + "x" +
                            std::to_string(q.mode.py) + ")");
            return q.image.bounds().cells();
    }
    return {};
}

std::vector<Cell> image_cells(const PreimageQuery& q) {
    if (q.mode.kind == BoundaryMode::Kind::ZeroPadded) {
        require_rectangular(q);
        return q.image.bounds().expanded(q.mode.thickness).cells();
    }
    return q.image.domain();
}

CnfInstance build(const PreimageQuery& q) {
    CnfInstance cnf;
    auto cells = preimage_cells(q);
    if (cells.empty()) return cnf;
    Rect box(cells.front().x, cells.front().y, 1, 1);
    for (Cell c : cells) box = bounding_union(box, Rect(c.x, c.y, 1, 1));
    VarTable vars(box);
    for (Cell c : cells) {
        int v = cnf.new_var();
        vars.set(c, v);
        cnf.annotations[c] = v;
    }
    int truth = cnf.new_var();
    cnf.add({truth});

    const bool torus = q.mode.kind == BoundaryMode::Kind::Torus;
    const Rect& ib = q.image.bounds();
    auto wrap = [&](Cell c) {
        if (!torus) return c;
        int x = ((c.x - ib.x0) % ib.width + ib.width) % ib.width + ib.x0;
        int y = ((c.y - ib.y0) % ib.height + ib.height) % ib.height + ib.y0;
        return Cell{x, y};
    };

    for (Cell c : image_cells(q)) {
        bool successor = q.image.at(c).value_or(false);  // padding cells are 0
        std::array<Lit, 9> in{};
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                int v = vars.get(wrap({c.x + dx, c.y + dy}));
                if (v == 0) throw Error("internal: neighborhood outside preimage window");
                in[static_cast<std::size_t>(Neighborhood::index_of(dx, dy))] = v;
            }
        add_rule(cnf, q.encoding, in, successor, truth);
    }

    if (q.mode.kind == BoundaryMode::Kind::ZeroPadded) {
        Rect outer = ib.expanded(q.mode.thickness + 1);
        for (Cell c : cells)
            if (c.x == outer.x0 || c.y == outer.y0 || c.x == outer.x1() - 1 || c.y == outer.y1() - 1)
                cnf.add({-vars.get(c)});
    }

    for (Cell c : q.constraints.constrained_cells()) {
        int v = vars.get(c);
        if (v == 0)
            throw Error("preimage constraint at (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                        ") lies outside the preimage window");
        cnf.add({*q.constraints.constraint(c) ? v : -v});
    }
    return cnf;
}

bool has_preimage(const PreimageQuery& q, SatBackend* backend) { return solve(build(q), {}, backend).sat; }

std::optional<Pattern> find_preimage(const PreimageQuery& q, SatBackend* backend) {
    auto cnf = build(q);
    auto r = solve(cnf, {}, backend);
    if (!r.sat) return std::nullopt;
    std::map<Cell, bool> cells;
    for (auto [c, v] : cnf.annotations) cells[c] = r.value(v);
    return Pattern::from_cells(cells);
}

std::vector<Pattern> enumerate_restrictions(const PreimageQuery& q, const std::vector<Cell>& window, std::size_t limit,
                                            SatBackend* backend) {
    auto cnf = build(q);
    std::vector<int> proj;
    for (Cell c : window) {
        auto it = cnf.annotations.find(c);
        if (it == cnf.annotations.end())
            throw Error("restriction window cell (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                        ") is not a preimage cell");
        proj.push_back(it->second);
    }
    std::vector<Pattern> out;
    for (auto& m : enumerate(cnf, proj, limit, backend)) {
        std::map<Cell, bool> cells;
        for (std::size_t i = 0; i < window.size(); ++i) cells[window[i]] = m[i];
        out.push_back(Pattern::from_cells(cells));
    }
    return out;
}

std::size_t count_restrictions(const PreimageQuery& q, const std::vector<Cell>& window, std::size_t limit,
                               SatBackend* backend) {
    return enumerate_restrictions(q, window, limit, backend).size();
}

std::size_t count_restrictions(const PreimageQuery& q, const Rect& window, std::size_t limit, SatBackend* backend) {
    return count_restrictions(q, window.cells(), limit, backend);
}

bool is_orphan(const Pattern& p, EncodingKind encoding, SatBackend* backend) {
    if (!p.is_rectangular()) throw Error("is_orphan needs a rectangular pattern");
    PreimageQuery q{p, BoundaryMode::free(), {}, encoding};
    return !has_preimage(q, backend);
}

std::vector<Cell> border_cells(const std::vector<Cell>& preimage_domain, int depth) {
    std::set<Cell> dom(preimage_domain.begin(), preimage_domain.end());
    std::vector<Cell> out;
    for (Cell c : preimage_domain) {
        bool near = false;
        for (int dy = -depth; dy <= depth && !near; ++dy)
            for (int dx = -depth; dx <= depth && !near; ++dx) near = !dom.count({c.x + dx, c.y + dy});
        if (near) out.push_back(c);
    }
    return out;
}

std::optional<Diamond> find_diamond(const Pattern& p, const TriPattern& q_i, const std::vector<Pattern>& forced,
                                    const std::vector<Cell>& window, int border_depth, EncodingKind encoding,
                                    SatBackend* backend) {
    if (forced.empty()) return std::nullopt;
    CnfInstance a = build(PreimageQuery{p, BoundaryMode::free(), q_i, encoding});
    std::vector<Cell> domain;
    for (auto& [c, v] : a.annotations) domain.push_back(c);
    return find_diamond(a, border_cells(domain, border_depth), forced, window, backend);
}

std::optional<Diamond> find_diamond(const CnfInstance& a, const std::vector<Cell>& agree, const std::vector<Pattern>& forced,
                                    const std::vector<Cell>& window, SatBackend* backend) {
    if (forced.empty()) return std::nullopt;
    const int n = a.num_vars;

    // Second copy: every variable v becomes v + n.
    CnfInstance both = a;
    both.num_vars = 2 * n;
    for (const auto& c : a.clauses) {
        Clause shifted;
        for (Lit l : c) shifted.push_back(l > 0 ? l + n : l - n);
        both.add(std::move(shifted));
    }
    auto var_a = [&](Cell c) {
        auto it = a.annotations.find(c);
        if (it == a.annotations.end())
            throw Error("diamond window cell (" + std::to_string(c.x) + "," + std::to_string(c.y) +
                        ") is not a preimage cell");
        return it->second;
    };

    for (Cell c : agree) {
        int x = var_a(c), y = x + n;
        both.add({-x, y});
        both.add({x, -y});
    }

    Clause some_forced;
    for (const Pattern& f : forced) {
        int sel = both.new_var();
        some_forced.push_back(sel);
        Clause differs;
        for (Cell c : window) {
            auto bit = f.at(c);
            if (!bit) throw Error("forced pattern does not cover the diamond window");
            int x = var_a(c);
            both.add({-sel, *bit ? x : -x});
            int y = x + n;
            differs.push_back(*bit ? -y : y);
        }
        both.add(std::move(differs));
    }
    both.add(std::move(some_forced));

    auto r = solve(both, {}, backend);
    if (!r.sat) return std::nullopt;
    std::map<Cell, bool> qa, rb;
    for (auto& [c, v] : a.annotations) {
        qa[c] = r.value(v);
        rb[c] = r.value(v + n);
    }
    return Diamond{Pattern::from_cells(qa), Pattern::from_cells(rb)};
}

}  // namespace lifepre
