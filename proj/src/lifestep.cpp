#include "lifepre/lifestep.hpp"

#include <functional>

#include "lifepre/error.hpp"

namespace lifepre {

Pattern step(const Pattern& p, const Rect& window) {
    for (int y = window.y0 - 1; y <= window.y1(); ++y)
        for (int x = window.x0 - 1; x <= window.x1(); ++x)
            if (!p.in_domain({x, y}))
                throw Error("step: cell (" + std::to_string(x) + "," + std::to_string(y) +
                            ") of the padded window is outside the pattern domain");
    std::vector<std::uint8_t> out(static_cast<std::size_t>(window.area()));
    std::size_t k = 0;
    for (int y = window.y0; y < window.y1(); ++y)
        for (int x = window.x0; x < window.x1(); ++x) {
            Neighborhood n;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if (p.bit({x + dx, y + dy})) n.bits |= 1u << Neighborhood::index_of(dx, dy);
            out[k++] = step_cell(n);
        }
    return Pattern::from_bits(window, out);
}

std::string to_string(EncodingKind k) {
    switch (k) {
        case EncodingKind::DivideConquer: return "dc";
        case EncodingKind::SortingNetwork: return "sort";
        case EncodingKind::Merge: return "merge";
    }
    return "?";
}

EncodingKind parse_encoding(const std::string& s) {
    if (s == "dc" || s == "divide-conquer") return EncodingKind::DivideConquer;
    if (s == "sort" || s == "sorting-network") return EncodingKind::SortingNetwork;
    if (s == "merge" || s == "totalizer") return EncodingKind::Merge;
    throw Error("unknown encoding '" + s + "' (expected dc, sort or merge)");
}

namespace {

// Split on the center first, then on the neighbors in index order. A branch
// stops as soon as every completion of the partial assignment has the same
// successor state; it then contributes one clause.
struct DcClause {
    unsigned mask;   // fixed inputs
    unsigned value;  // their values
    bool out;        // forced successor
};

std::vector<DcClause> divide_conquer_template() {
    static constexpr std::array<int, 9> order = {4, 0, 1, 2, 3, 5, 6, 7, 8};
    std::vector<DcClause> result;
    std::function<void(int, unsigned, unsigned)> rec = [&](int depth, unsigned mask, unsigned value) {
        unsigned free_mask = 0x1ff & ~mask;
        bool seen0 = false, seen1 = false;
        for (unsigned sub = free_mask;; sub = (sub - 1) & free_mask) {
            bool r = step_cell(Neighborhood{static_cast<std::uint16_t>(value | sub)});
            (r ? seen1 : seen0) = true;
            if (seen0 && seen1) break;
            if (sub == 0) break;
        }
        if (!(seen0 && seen1)) {
            result.push_back({mask, value, seen1});
            return;
        }
        int v = order[static_cast<std::size_t>(depth)];
        rec(depth + 1, mask | 1u << v, value);
        rec(depth + 1, mask | 1u << v, value | 1u << v);
    };
    rec(0, 0, 0);
    return result;
}

void divide_conquer(std::span<const Lit, 9> in, Lit out, std::vector<Clause>& clauses) {
    static const std::vector<DcClause> tmpl = divide_conquer_template();
    for (const auto& t : tmpl) {
        Clause c;
        for (int i = 0; i < 9; ++i)
            if (t.mask >> i & 1) c.push_back((t.value >> i & 1) ? -in[static_cast<std::size_t>(i)] : in[static_cast<std::size_t>(i)]);
        c.push_back(t.out ? out : -out);
        clauses.push_back(std::move(c));
    }
}

// max/min of two bits with both implication directions.
void comparator(Lit a, Lit b, Lit hi, Lit lo, std::vector<Clause>& clauses) {
    clauses.push_back({-a, hi});
    clauses.push_back({-b, hi});
    clauses.push_back({-hi, a, b});
    clauses.push_back({-lo, a});
    clauses.push_back({-lo, b});
    clauses.push_back({-a, -b, lo});
}

void batcher_merge(int lo, int n, int r, std::vector<std::pair<int, int>>& net) {
    int stride = r * 2;
    if (stride < n) {
        batcher_merge(lo, n, stride, net);
        batcher_merge(lo + r, n, stride, net);
        for (int i = lo + r; i + r < lo + n; i += stride) net.push_back({i, i + r});
    } else {
        net.push_back({lo, lo + r});
    }
}

void batcher_sort(int lo, int n, std::vector<std::pair<int, int>>& net) {
    if (n <= 1) return;
    int m = n / 2;
    batcher_sort(lo, m, net);
    batcher_sort(lo + m, m, net);
    batcher_merge(lo, n, 1, net);
}

// Unary counters: result[k-1] is "at least k of the inputs are 1".
std::vector<Lit> sorting_network_counter(std::span<const Lit> bits, VarAllocator& fresh, std::vector<Clause>& clauses) {
    std::vector<Lit> wires(bits.begin(), bits.end());
    std::vector<std::pair<int, int>> net;
    batcher_sort(0, static_cast<int>(wires.size()), net);
    for (auto [i, j] : net) {
        Lit hi = fresh.fresh(), lo = fresh.fresh();
        comparator(wires[i], wires[j], hi, lo, clauses);
        wires[i] = hi;
        wires[j] = lo;
    }
    return wires;
}

std::vector<Lit> totalizer(std::span<const Lit> bits, int cap, VarAllocator& fresh, std::vector<Clause>& clauses) {
    if (bits.size() == 1) return {bits[0]};
    std::size_t half = bits.size() / 2;
    auto a = totalizer(bits.subspan(0, half), cap, fresh, clauses);
    auto b = totalizer(bits.subspan(half), cap, fresh, clauses);
    int p = static_cast<int>(a.size()), q = static_cast<int>(b.size());
    int len = std::min(p + q, cap);
    std::vector<Lit> c(static_cast<std::size_t>(len));
    for (auto& l : c) l = fresh.fresh();
    for (int i = 0; i <= p; ++i)
        for (int j = 0; j <= q; ++j) {
            if (i + j >= 1) {
                Clause cl;
                if (i > 0) cl.push_back(-a[i - 1]);
                if (j > 0) cl.push_back(-b[j - 1]);
                cl.push_back(c[std::min(i + j, cap) - 1]);
                clauses.push_back(std::move(cl));
            }
            int k = i + j + 1;
            if (k <= len) {
                Clause cl;
                if (i + 1 <= p) cl.push_back(a[i]);
                if (j + 1 <= q) cl.push_back(b[j]);
                cl.push_back(-c[k - 1]);
                clauses.push_back(std::move(cl));
            }
        }
    return c;
}

// out <-> (n == 3) or (center and n == 2), n = live neighbors excluding center.
void rule_from_counters(Lit center, Lit ge2, Lit ge3, Lit ge4, Lit out, std::vector<Clause>& clauses) {
    clauses.push_back({-out, -ge4});
    clauses.push_back({-out, ge2});
    clauses.push_back({-out, ge3, center});
    clauses.push_back({-ge3, ge4, out});
    clauses.push_back({-center, -ge2, ge3, out});
}

}  // namespace

std::vector<Clause> encode_cell(EncodingKind kind, std::span<const Lit, 9> in, Lit out, VarAllocator& fresh) {
    std::vector<Clause> clauses;
    std::array<Lit, 8> neighbors{};
    for (int i = 0, k = 0; i < 9; ++i)
        if (i != Neighborhood::kCenter) neighbors[k++] = in[i];
    switch (kind) {
        case EncodingKind::DivideConquer:
            divide_conquer(in, out, clauses);
            break;
        case EncodingKind::SortingNetwork: {
            auto s = sorting_network_counter(neighbors, fresh, clauses);
            rule_from_counters(in[Neighborhood::kCenter], s[1], s[2], s[3], out, clauses);
            break;
        }
        case EncodingKind::Merge: {
            auto s = totalizer(neighbors, 4, fresh, clauses);
            rule_from_counters(in[Neighborhood::kCenter], s[1], s[2], s[3], out, clauses);
            break;
        }
    }
    return clauses;
}

}  // namespace lifepre
