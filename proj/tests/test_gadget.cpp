#include <doctest.h>

#include <filesystem>

#include "lifepre/error.hpp"
#include "lifepre/gadget.hpp"
#include "lifepre/preimage.hpp"

using namespace lifepre;

namespace {

// A straight vertical wire of width two crossing a 6 x h box.
Gadget vertical_wire(int h) {
    PatternWriter w(Rect(0, 0, 6, h));
    for (int y = 0; y < h; ++y) {
        w.set({2, y}, true);
        w.set({3, y}, true);
    }
    Gadget g;
    g.name = "wire" + std::to_string(h);
    g.pattern = std::move(w).freeze();
    g.spec.ports = {{Side::N, 2, {0, 1}}, {Side::S, 2, {0, 1}}};
    g.spec.normalize();
    return g;
}

// Phase along the wire advances by one per row going up, so the N phase is
// the S phase plus h (mod 3). Bits are phases 0 and 1; tuples read N then S.
Relation wire_relation(int h) {
    Relation r;
    for (int s = 0; s < 2; ++s) {
        int n = (s + h) % 3;
        if (n < 2) r.insert(std::string{char('0' + n), char('0' + s)});
    }
    return r;
}

}  // namespace

TEST_CASE("signal patterns") {
    auto w0 = wire_signal_pattern({0, Orientation::Vertical});
    CHECK(w0 == Pattern::from_rows({"oooo", "...."}));
    auto w1 = wire_signal_pattern({1, Orientation::Vertical}, {2, 3});
    CHECK(w1 == Pattern::from_rows({"....", "oooo"}, {2, 3}));
    auto h0 = wire_signal_pattern({0, Orientation::Horizontal});
    CHECK(h0 == Pattern::from_rows({"o.", "o.", "o.", "o."}));
    CHECK(decode_signal(w1, Orientation::Vertical, {2, 3}) == 1);
    CHECK(decode_signal(wire_signal_pattern({2, Orientation::Vertical}), Orientation::Vertical, {0, 0}) == 2);
    CHECK_FALSE(decode_signal(Pattern::from_rows({"o...", "...."}), Orientation::Vertical, {0, 0}));
}

TEST_CASE("port windows straddle the border") {
    CHECK(port_window({Side::N, 2}, 6, 5) == Rect(1, -1, 4, 2));
    CHECK(port_window({Side::S, 2}, 6, 5) == Rect(1, 4, 4, 2));
    CHECK(port_window({Side::W, 1}, 6, 5) == Rect(-1, 0, 2, 4));
    CHECK(port_window({Side::E, 1}, 6, 5) == Rect(5, 0, 2, 4));
}

TEST_CASE("affinity dictionary") {
    CHECK(affinity_of({Side::W, 1}, true) == Affinity::Near);
    CHECK(affinity_of({Side::E, 1}, false) == Affinity::Near);
    CHECK(affinity_of({Side::N, 1}, true) == Affinity::Near);
    CHECK(affinity_of({Side::S, 1}, false) == Affinity::Near);
    CHECK(affinity_of({Side::S, 1}, true) == Affinity::Far);
    for (Side s : kSides)
        for (bool b : {false, true}) CHECK(bit_of({s, 1}, affinity_of({s, 1}, b)) == b);
}

TEST_CASE("charge rule text") {
    auto r = ChargeRule::parse("N,S |- E,N,S");
    CHECK(r.premise == std::set<Side>{Side::N, Side::S});
    CHECK(r.conclusion == std::set<Side>{Side::E, Side::N, Side::S});
    CHECK(r.to_string() == "N,S |- E,N,S");
    CHECK(ChargeRule::parse("|- N").premise.empty());
    CHECK(ChargeRule::parse(ChargeRule::parse("|- N").to_string()) == ChargeRule::parse("|- N"));
    CHECK_THROWS_AS(ChargeRule::parse("N S"), Error);
    CHECK_THROWS_AS(ChargeRule::parse("N |- Q"), Error);
}

TEST_CASE("rotating a relation") {
    std::vector<WirePort> all = {{Side::E, 1}, {Side::N, 1}, {Side::W, 1}, {Side::S, 1}};
    CHECK(rotate_relation({"0011"}, all) == Relation{"1100"});
    CHECK(rotate_relation({"1000"}, all) == Relation{"0001"});
    Relation r = {"0000", "0110", "1011"};
    Relation x = r;
    for (int i = 0; i < 4; ++i) x = rotate_relation(x, all);
    CHECK(x == r);
}

TEST_CASE("rotation keeps affinity tuples up to permutation") {
    GadgetSpec spec;
    spec.ports = {{Side::E, 1}, {Side::N, 2}, {Side::W, 1}, {Side::S, 2}};
    spec.relation = {"0011", "0101", "1110"};
    spec.normalize();
    auto rot = rotate_spec(spec, 6, 5);
    // Old E, N, W, S become new N, W, S, E; in ENWS order the new tuple is
    // (old S, old E, old N, old W).
    Relation expect;
    for (auto& t : to_affinity(spec, spec.relation)) expect.insert(std::string{t[3], t[0], t[1], t[2]});
    CHECK(to_affinity(rot, rot.relation) == expect);
    CHECK(rot.ports[0].side == Side::E);
    CHECK(rot.ports[0].offset == 2);  // from S: 6 - 2 - 2
    CHECK(rot.ports[1].offset == 1);  // from E
}

TEST_CASE("pattern rotation") {
    auto p = Pattern::from_rows({"oo.", "..."});
    auto r = rotate_pattern_ccw(p);
    CHECK(r == Pattern::from_rows({"..", "o.", "o."}));
    Pattern x = p;
    for (int i = 0; i < 4; ++i) x = rotate_pattern_ccw(x);
    CHECK(x == p);
}

TEST_CASE("structure check") {
    auto g = vertical_wire(6);
    CHECK(check_structure(g).empty());
    auto bad = g;
    bad.pattern = g.pattern.with({0, 3}, true);
    CHECK(check_structure(bad).size() == 1);
    bad = g;
    bad.spec.ports[0].offset = 3;
    CHECK_FALSE(check_structure(bad).empty());
}

TEST_CASE("straight wire relation follows the height") {
    for (int h = 3; h <= 8; ++h) {
        CAPTURE(h);
        auto g = vertical_wire(h);
        auto rel = verify_relation(g);
        CHECK_FALSE(rel.inconclusive);
        CHECK(rel.observed == wire_relation(h));
        CHECK(rel.realizable_with_zero_boundary == wire_relation(h));
    }
}

TEST_CASE("wire charging") {
    auto g = vertical_wire(6);
    CHECK(verify_charging(g, ChargeRule::parse("N |- S")).holds);
    CHECK(verify_charging(g, ChargeRule::parse("S |- N")).holds);
    // Nothing forces a blank wire to carry a signal.
    auto blank = verify_charging(g, ChargeRule::parse("|- N"));
    CHECK_FALSE(blank.holds);
    REQUIRE(blank.counterexample);
    // Height 7 shifts the phase: a charged N can meet the blank phase at S.
    CHECK_FALSE(verify_charging(vertical_wire(7), ChargeRule::parse("N |- S")).holds);
}

TEST_CASE("verify a full gadget and its rotations") {
    auto g = vertical_wire(6);
    g.spec.charge_rules = {ChargeRule::parse("N |- S"), ChargeRule::parse("S |- N")};
    g.spec.relation = wire_relation(6);
    g.spec.forced_zero_cells = {{1, 1}, {4, 4}};
    auto rep = verify_gadget(g);
    CHECK(rep.verdict(g.spec) == Verdict::Pass);
    CHECK(rep.nonzero_forced_cells.empty());

    Gadget r = g;
    for (int i = 0; i < 3; ++i) {
        r = rotate_gadget(r);
        CAPTURE(i);
        CHECK(verify_gadget(r).verdict(r.spec) == Verdict::Pass);
    }

    auto wrong = g;
    wrong.spec.relation = {"00"};
    CHECK(verify_gadget(wrong).verdict(wrong.spec) == Verdict::Fail);
    auto leaky = g;
    leaky.spec.forced_zero_cells = {{1, 1}, {0, 2}};
    auto lr = verify_gadget(leaky);
    CHECK(lr.verdict(leaky.spec) == Verdict::Fail);
    CHECK(lr.nonzero_forced_cells.size() == 1);
}

TEST_CASE("tiny enumeration limit is inconclusive") {
    auto g = vertical_wire(6);
    g.spec.relation = wire_relation(6);
    VerifyOptions opts;
    opts.enumeration_limit = 1;
    auto rel = verify_relation(g, opts);
    CHECK(rel.inconclusive);
    CHECK(rel.verdict(g.spec.relation) == Verdict::Inconclusive);
}

TEST_CASE("library entries round-trip") {
    LibraryEntry e;
    e.gadget = vertical_wire(6);
    e.gadget.spec.charge_rules = {ChargeRule::parse("N |- S")};
    e.gadget.spec.relation = wire_relation(6);
    e.gadget.spec.forced_zero_cells = {{0, 2}};
    e.role = "vwire";
    e.from = "a";
    e.to = "b";
    e.orientation = "vertical";
    e.note = "test";
    auto back = parse_library_entry(emit_library_entry(e));
    CHECK(back.gadget.name == e.gadget.name);
    CHECK(back.gadget.pattern == e.gadget.pattern);
    CHECK(back.gadget.spec == e.gadget.spec);
    CHECK(back.role == "vwire");
    CHECK(back.from == "a");
    CHECK(back.note == "test");

    auto dir = std::filesystem::temp_directory_path() / "lifepre_lib_test";
    std::filesystem::remove_all(dir);
    save_library_entry(dir.string(), e);
    auto lib = load_library(dir.string());
    REQUIRE(lib.entries.size() == 1);
    CHECK(lib.find(e.gadget.name) != nullptr);
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(parse_library_entry("{"), Error);
    CHECK_THROWS_AS(parse_library_entry(R"({"name": "x"})"), Error);
}
