#include <doctest.h>

#include <random>

#include "lifepre/error.hpp"
#include "lifepre/grid.hpp"

using namespace lifepre;

namespace {

Pattern random_rect(std::mt19937& rng, int w, int h) {
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(w * h));
    std::bernoulli_distribution coin(0.4);
    for (auto& b : bits) b = coin(rng);
    return Pattern::from_bits(Rect(0, 0, w, h), bits);
}

}  // namespace

TEST_CASE("shift follows Q[w - v] = P[w]") {
    auto p = Pattern::from_cells({{{2, 3}, true}});
    auto q = shift(p, {1, 1});
    CHECK(q.at({1, 2}) == true);
    CHECK(q.size() == 1);
    CHECK(shift(Pattern::from_cells({{{0, 0}, true}}), {0, 0}) == Pattern::from_cells({{{0, 0}, true}}));

    std::mt19937 rng(7);
    for (int i = 0; i < 50; ++i) {
        auto r = random_rect(rng, 1 + static_cast<int>(rng() % 6), 1 + static_cast<int>(rng() % 6));
        Cell u{static_cast<int>(rng() % 21) - 10, static_cast<int>(rng() % 21) - 10};
        Cell v{static_cast<int>(rng() % 21) - 10, static_cast<int>(rng() % 21) - 10};
        CHECK(shift(shift(r, u), -u) == r);
        CHECK(shift(r, u + v) == shift(shift(r, v), u));
    }
}

TEST_CASE("rle examples") {
    auto row = parse_rle("x = 3, y = 1\n3o!");
    CHECK(row == Pattern::filled(Rect(0, 0, 3, 1), true));
    auto block = parse_rle("x = 2, y = 2\n2o$2o!");
    CHECK(block == Pattern::filled(Rect(0, 0, 2, 2), true));
    CHECK(emit_rle(Pattern::filled(Rect(0, 0, 1, 1), false)) == "x = 1, y = 1\nb!");
    CHECK(emit_rle(block) == "x = 2, y = 2\n2o$2o!");
    CHECK(emit_rle(block, block.bounds(), {true, 70}) == "x = 2, y = 2, rule = B3/S23\n2o$2o!");
}

TEST_CASE("rle parsing details") {
    auto p = parse_rle("#N glider\n#C comment\nx = 3, y = 3, rule = B3/S23\nbo$2bo$3o!");
    CHECK(p.bounds() == Rect(0, 0, 3, 3));
    CHECK(p.support().size() == 5);
    CHECK(p.bit({1, 0}));
    CHECK_FALSE(p.bit({2, 0}));
    // short rows are padded with dead cells, "2$" skips a row
    auto q = parse_rle("x = 4, y = 3\no2$3bo!");
    CHECK(q.bit({0, 0}));
    CHECK_FALSE(q.bit({0, 1}));
    CHECK(q.bit({3, 2}));
}

TEST_CASE("rle errors carry a position") {
    CHECK_THROWS_AS(parse_rle("x = 2, y = 1\n0o!"), ParseError);
    CHECK_THROWS_AS(parse_rle("x = 2, y = 1\n3o!"), ParseError);
    CHECK_THROWS_AS(parse_rle("x = 2, y = 1\n2o"), ParseError);
    CHECK_THROWS_AS(parse_rle("y = 2\n2o!"), ParseError);
    CHECK_THROWS_AS(parse_rle("x = 1, y = 1, rule = B36/S23\no!"), ParseError);
    CHECK_THROWS_AS(parse_rle("x = 2, y = 1\n2q!"), ParseError);
    try {
        parse_rle("x = 2, y = 1\n2o$o!");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() > 0);
    }
}

TEST_CASE("emit_rle rejects bounds that miss the domain") {
    auto p = Pattern::filled(Rect(0, 0, 3, 3), true);
    CHECK_THROWS_AS(emit_rle(p, Rect(0, 0, 2, 2)), Error);
}

TEST_CASE("rle round trip keeps lines short") {
    std::mt19937 rng(11);
    for (int i = 0; i < 300; ++i) {
        int w = 1 + static_cast<int>(rng() % 64), h = 1 + static_cast<int>(rng() % 64);
        auto p = random_rect(rng, w, h);
        auto text = emit_rle(p);
        std::size_t start = 0;
        while (start < text.size()) {
            auto end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            CHECK(end - start <= 70);
            start = end + 1;
        }
        auto back = parse_rle(text);
        REQUIRE(back == p);
        CHECK(back.support() == p.support());
    }
}

TEST_CASE("cells reader") {
    auto p = parse_cells("!Name: blinker\n.O.\n.O.\n.O.\n");
    CHECK(p.bounds() == Rect(0, 0, 3, 3));
    CHECK(p.support().size() == 3);
    CHECK(p.bit({1, 2}));
}

TEST_CASE("partial patterns") {
    auto p = Pattern::from_rows({"o?", "?."});
    CHECK(p.size() == 2);
    CHECK_FALSE(p.is_rectangular());
    CHECK(p.at({1, 0}) == std::nullopt);
    CHECK(p.at({1, 1}) == false);
    auto q = p.with({1, 0}, true);
    CHECK(q.size() == 3);
    CHECK(p.size() == 2);  // original untouched
    auto t = TriPattern(p);
    CHECK(t.constraint({0, 1}) == std::nullopt);
    CHECK(t.constraint({0, 0}) == true);
    auto r = p.restricted(Rect(0, 0, 1, 1));
    CHECK(r.size() == 1);
    auto far = p.with({10, -3}, true);
    CHECK(far.bounds() == Rect(0, -3, 11, 5));
    CHECK(far.at({10, -3}) == true);
}
