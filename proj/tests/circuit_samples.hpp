#pragma once
// Generators of well-formed circuits for randomized and exhaustive tests.
#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace samples {

inline std::string stub_tiles(unsigned mask) {
    // mask bits: E=1, N=2, W=4, S=8
    switch (mask) {
        case 0: return ".";
        case 1: return "T";
        case 1 | 4: return "-N";
        case 2 | 8: return "|";
        case 1 | 2: return "L";
        case 2 | 4: return "J";
        case 4 | 8: return "7";
        case 1 | 8: return "r";
        case 1 | 2 | 8: return "SO";
        case 15: return "X";
    }
    return "";
}

// A random closed circuit on a w x h plane grid: random wire edges are
// pruned until every cell's stub set belongs to some tile, then each cell
// picks uniformly among the matching tiles.
inline std::vector<std::string> random_circuit(int w, int h, double density, std::mt19937_64& rng) {
    std::vector<unsigned> mask(static_cast<std::size_t>(w * h), 0);
    auto m = [&](int x, int y) -> unsigned& { return mask[static_cast<std::size_t>(y * w + x)]; };
    std::bernoulli_distribution coin(density);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (x + 1 < w && coin(rng)) {
                m(x, y) |= 1;
                m(x + 1, y) |= 4;
            }
            if (y + 1 < h && coin(rng)) {
                m(x, y) |= 8;
                m(x, y + 1) |= 2;
            }
        }
    for (bool changed = true; changed;) {
        changed = false;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                if (!stub_tiles(m(x, y)).empty()) continue;
                std::vector<int> sides;
                for (int s = 0; s < 4; ++s)
                    if (m(x, y) >> s & 1) sides.push_back(s);
                int s = sides[std::uniform_int_distribution<std::size_t>(0, sides.size() - 1)(rng)];
                int dx[] = {1, 0, -1, 0}, dy[] = {0, -1, 0, 1};
                m(x, y) &= ~(1u << s);
                m(x + dx[s], y + dy[s]) &= ~(1u << ((s + 2) % 4));
                changed = true;
            }
    }
    std::vector<std::string> rows(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), '.'));
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            auto opts = stub_tiles(m(x, y));
            rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] =
                opts[std::uniform_int_distribution<std::size_t>(0, opts.size() - 1)(rng)];
        }
    return rows;
}

// Every simple cycle of grid cells (4-neighbor) in a w x h box with length
// at most max_len, drawn as wires and turns. Each cycle is reported once.
inline std::vector<std::vector<std::string>> closed_loops(int w, int h, int max_len) {
    std::vector<std::vector<std::string>> out;
    int n = w * h;
    std::vector<int> path;
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    auto emit = [&] {
        std::vector<std::string> rows(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), '.'));
        std::size_t L = path.size();
        for (std::size_t i = 0; i < L; ++i) {
            int c = path[i], a = path[(i + L - 1) % L], b = path[(i + 1) % L];
            unsigned mask = 0;
            for (int o : {a, b}) {
                int dx = o % w - c % w, dy = o / w - c / w;
                mask |= dx == 1 ? 1u : dx == -1 ? 4u : dy == -1 ? 2u : 8u;
            }
            rows[static_cast<std::size_t>(c / w)][static_cast<std::size_t>(c % w)] = stub_tiles(mask)[0];
        }
        out.push_back(rows);
    };
    std::function<void(int)> dfs = [&](int start) {
        int c = path.back();
        int cx = c % w, cy = c / w;
        int dx[] = {1, 0, -1, 0}, dy[] = {0, -1, 0, 1};
        for (int s = 0; s < 4; ++s) {
            int nx = cx + dx[s], ny = cy + dy[s];
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            int nc = ny * w + nx;
            // Close the cycle; the orientation filter counts each cycle once.
            if (nc == start && path.size() >= 4 && path[1] < path.back()) emit();
            if (nc <= start || used[static_cast<std::size_t>(nc)]) continue;
            if (static_cast<int>(path.size()) >= max_len) continue;
            used[static_cast<std::size_t>(nc)] = 1;
            path.push_back(nc);
            dfs(start);
            path.pop_back();
            used[static_cast<std::size_t>(nc)] = 0;
        }
    };
    for (int s = 0; s < n; ++s) {
        path = {s};
        used[static_cast<std::size_t>(s)] = 1;
        dfs(s);
        used[static_cast<std::size_t>(s)] = 0;
    }
    return out;
}

// Variants of a loop with any subset of its horizontal straights replaced
// by Not gates.
inline std::vector<std::vector<std::string>> with_nots(const std::vector<std::string>& loop) {
    std::vector<std::pair<std::size_t, std::size_t>> spots;
    for (std::size_t y = 0; y < loop.size(); ++y)
        for (std::size_t x = 0; x < loop[y].size(); ++x)
            if (loop[y][x] == '-') spots.push_back({y, x});
    std::vector<std::vector<std::string>> out;
    for (std::uint64_t m = 0; m < (1ull << spots.size()); ++m) {
        auto v = loop;
        for (std::size_t i = 0; i < spots.size(); ++i)
            if (m >> i & 1) v[spots[i].first][spots[i].second] = 'N';
        out.push_back(v);
    }
    return out;
}

}  // namespace samples
