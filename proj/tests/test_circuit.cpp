#include <doctest.h>

#include "circuit_samples.hpp"
#include "lifepre/circuit.hpp"
#include "lifepre/error.hpp"
#include "oracles.hpp"

using namespace lifepre;

namespace {

CircuitGrid grid(const std::vector<std::string>& rows) {
    std::string text;
    for (auto& r : rows) text += r + "\n";
    return parse_circuit(text);
}

}  // namespace

TEST_CASE("tile characters round-trip") {
    for (GateTile t : kGateTiles) CHECK(parse_tile(tile_char(t)) == t);
    CHECK_THROWS_AS(parse_tile('?'), Error);
    std::string text = "r-7\n|.|\nL-J\n";
    CHECK(emit_circuit(parse_circuit(text)) == text);
    CHECK_THROWS_AS(parse_circuit("r-7\n|.\n"), ParseError);
}

TEST_CASE("stub sets") {
    CHECK(stubs(GateTile::Split) == (stub_bit(Side::E) | stub_bit(Side::N) | stub_bit(Side::S)));
    CHECK(stubs(GateTile::Or) == stubs(GateTile::Split));
    CHECK(stubs(GateTile::True) == stub_bit(Side::E));
    CHECK(stubs(GateTile::Blank) == 0);
}

TEST_CASE("well-formedness") {
    CHECK(is_well_formed(CircuitGrid(3, 3)));
    CHECK_FALSE(is_well_formed(grid({"-"})));
    CHECK(is_well_formed(grid({"-"}), Topology::Torus));
    CHECK(is_well_formed(grid({"r7", "LJ"})));
    CHECK_FALSE(is_well_formed(grid({"r-", "LJ"})));
    auto v = well_formedness_violation(grid({"..", ".T"}));
    REQUIRE(v);
    CHECK(v->find("boundary") != std::string::npos);
    CHECK_THROWS_AS(satisfy(grid({"T"})), Error);
}

TEST_CASE("loops and inverters") {
    CHECK(count_satisfying(CircuitGrid(2, 2), 10) == 1);
    CHECK(count_satisfying(grid({"r7", "LJ"}), 10) == 2);
    CHECK(count_satisfying(grid({"rN7", "L-J"}), 10) == 0);
    CHECK(count_satisfying(grid({"rN7", "LNJ"}), 10) == 2);
    // Two sources joined by a wire agree; an inverter between them cannot.
    CHECK(count_satisfying(grid({"T-7", "T-J"}), 10) == 1);
    CHECK_FALSE(satisfy(grid({"TN7", "T-J"})));
}

namespace {

// Two free inputs from source loops feed an Or whose output runs into a
// True, optionally through a Not.
CircuitGrid or_fixture(bool invert_output) {
    CircuitCanvas cv(6, 8);
    cv.line({0, 0}, {1, 0});
    cv.line({1, 0}, {1, 1});
    cv.line({1, 1}, {0, 1});
    cv.line({0, 1}, {0, 0});
    cv.line({0, 1}, {0, 3});
    cv.line({0, 3}, {3, 3});
    cv.line({3, 3}, {3, 5});
    cv.line({0, 6}, {1, 6});
    cv.line({1, 6}, {1, 7});
    cv.line({1, 7}, {0, 7});
    cv.line({0, 7}, {0, 6});
    cv.line({0, 6}, {0, 5});
    cv.line({0, 5}, {3, 5});
    cv.line({3, 4}, {5, 4});
    cv.line({5, 4}, {5, 6});
    cv.line({5, 6}, {4, 6});
    cv.mark({3, 4}, GateTile::Or);
    cv.mark({4, 6}, GateTile::True);
    if (invert_output) cv.mark({4, 4}, GateTile::Not);
    return cv.finish();
}

}  // namespace

TEST_CASE("or gate") {
    auto c = or_fixture(false);
    REQUIRE(is_well_formed(c));
    CHECK(c.at(3, 4) == GateTile::Or);
    CHECK(c.at(0, 1) == GateTile::Split);
    CHECK(count_satisfying(c, 100) == 3);
    CHECK(oracle::circuit_models([&] {
              std::vector<std::string> rows;
              std::string t = emit_circuit(c);
              for (std::size_t p = 0, q; (q = t.find('\n', p)) != std::string::npos; p = q + 1) rows.push_back(t.substr(p, q - p));
              return rows;
          }()) == 3);
    CHECK(count_satisfying(or_fixture(true), 100) == 1);
}

TEST_CASE("satisfy agrees with brute force on random circuits") {
    std::mt19937_64 rng(7);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        auto rows = samples::random_circuit(4, 3, 0.6, rng);
        auto c = grid(rows);
        REQUIRE(is_well_formed(c));
        if (wire_edges(c).size() > 16) continue;
        long long expect = oracle::circuit_models(rows);
        CAPTURE(emit_circuit(c));
        CHECK(static_cast<long long>(count_satisfying(c, 1u << 17)) == expect);
        auto a = satisfy(c);
        CHECK(a.has_value() == (expect > 0));
        if (a) CHECK(satisfies_tiles(c, *a));
        ++checked;
    }
    CHECK(checked > 100);
}

TEST_CASE("closed loops") {
    auto loops = samples::closed_loops(3, 3, 8);
    // 4 unit squares, 2+2 dominoes of squares, and the 8-cycle around the rim.
    CHECK(loops.size() == 13);
    for (auto& l : loops) {
        auto c = grid(l);
        REQUIRE(is_well_formed(c));
        CHECK(count_satisfying(c, 10) == 2);
    }
}

TEST_CASE("rotation invariance on the rotation-closed tiles") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        auto rows = samples::random_circuit(4, 4, 0.7, rng);
        for (auto& r : rows)
            for (auto& ch : r)
                if (ch == 'N' || ch == 'T' || ch == 'S' || ch == 'O') ch = '.';
        auto c = grid(rows);
        if (!is_well_formed(c)) continue;
        auto r = rotate_circuit_ccw(c);
        REQUIRE(r);
        CHECK(is_well_formed(*r));
        CHECK(count_satisfying(c, 4096) == count_satisfying(*r, 4096));
    }
    CHECK_FALSE(rotate_circuit_ccw(grid({"TN7", "T-J"})));
}

TEST_CASE("torus topology") {
    CHECK(count_satisfying(grid({"-"}), 10, Topology::Torus) == 2);
    CHECK(count_satisfying(grid({"N"}), 10, Topology::Torus) == 0);
    CHECK(count_satisfying(grid({"NN"}), 10, Topology::Torus) == 2);
    CHECK(count_satisfying(grid({"X"}), 10, Topology::Torus) == 4);
}

TEST_CASE("canvas infers tiles from wires") {
    CircuitCanvas cv(3, 3);
    cv.line({0, 0}, {2, 0});
    cv.line({2, 0}, {2, 2});
    cv.line({2, 2}, {0, 2});
    cv.line({0, 2}, {0, 0});
    cv.mark({1, 0}, GateTile::Not);
    auto c = cv.finish();
    CHECK(emit_circuit(c) == "rN7\n|.|\nL-J\n");
    CircuitCanvas bad(2, 2);
    bad.line({0, 0}, {1, 0});
    CHECK_THROWS_AS(bad.finish(), Error);
    CircuitCanvas cross(3, 3);
    cross.line({0, 1}, {2, 1});
    cross.line({1, 0}, {1, 2});
    CHECK_THROWS_AS(cross.finish(), Error);  // dangling ends
}
