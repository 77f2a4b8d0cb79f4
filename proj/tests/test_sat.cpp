#include <doctest.h>

#include <filesystem>
#include <set>
#include <fstream>
#include <random>

#include "lifepre/cdcl.hpp"
#include "lifepre/error.hpp"
#include "lifepre/sat.hpp"

using namespace lifepre;

namespace {

bool brute_force(const CnfInstance& c) {
    for (unsigned m = 0; m < (1u << c.num_vars); ++m) {
        std::vector<bool> model(static_cast<std::size_t>(c.num_vars) + 1);
        for (int v = 1; v <= c.num_vars; ++v) model[static_cast<std::size_t>(v)] = m >> (v - 1) & 1;
        if (satisfies(c, model)) return true;
    }
    return false;
}

CnfInstance random_3cnf(std::mt19937& rng, int vars, int clauses) {
    CnfInstance c;
    c.num_vars = vars;
    std::uniform_int_distribution<int> var(1, vars);
    for (int i = 0; i < clauses; ++i) {
        Clause cl;
        for (int j = 0; j < 3; ++j) cl.push_back(rng() & 1 ? var(rng) : -var(rng));
        c.add(cl);
    }
    return c;
}

}  // namespace

TEST_CASE("trivial instances") {
    CnfInstance c;
    int x = c.new_var();
    c.add({x});
    auto r = solve(c);
    REQUIRE(r.sat);
    CHECK(r.value(x));
    c.add({-x});
    CHECK_FALSE(solve(c).sat);
}

TEST_CASE("random 3-CNF on 12 variables matches brute force") {
    std::mt19937 rng(2024);
    InternalBackend backend;
    int sat_count = 0;
    for (int i = 0; i < 300; ++i) {
        auto c = random_3cnf(rng, 12, 40 + static_cast<int>(rng() % 30));
        bool expect = brute_force(c);
        auto r = backend.solve(c, {});
        CHECK(r.sat == expect);
        sat_count += expect;
        if (!expect) {
            // Monotonicity: more clauses cannot restore satisfiability.
            auto more = c;
            more.add_all(random_3cnf(rng, 12, 5).clauses);
            CHECK_FALSE(backend.solve(more, {}).sat);
        }
    }
    CHECK(sat_count > 20);
    CHECK(sat_count < 280);
}

TEST_CASE("incremental solving with assumptions") {
    std::mt19937 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto c = random_3cnf(rng, 12, 45);
        CdclSolver s;
        s.ensure_vars(12);
        for (auto& cl : c.clauses) s.add_clause(cl);
        for (int j = 0; j < 5; ++j) {
            std::vector<Lit> a = {static_cast<Lit>(1 + rng() % 12) * (rng() & 1 ? 1 : -1),
                                  static_cast<Lit>(1 + rng() % 12) * (rng() & 1 ? 1 : -1)};
            auto with = c;
            for (Lit l : a) with.add({l});
            CHECK((s.solve(a) == CdclSolver::Status::Sat) == brute_force(with));
        }
    }
}

TEST_CASE("enumeration") {
    CnfInstance c;
    c.num_vars = 2;
    std::vector<int> proj = {1};
    CHECK(enumerate(c, proj, 100).size() == 2);
    CHECK(enumerate(c, proj, 1).size() == 1);
    std::vector<int> both = {1, 2};
    c.add({1, 2});
    auto models = enumerate(c, both, 100);
    CHECK(models.size() == 3);
    std::set<std::vector<bool>> distinct(models.begin(), models.end());
    CHECK(distinct.size() == 3);
}

TEST_CASE("dimacs round trip") {
    std::mt19937 rng(3);
    auto c = random_3cnf(rng, 9, 20);
    auto text = to_dimacs(c);
    CHECK(text.rfind("p cnf 9 20\n", 0) == 0);
    auto back = parse_dimacs(text);
    CHECK(back.num_vars == c.num_vars);
    CHECK(back.clauses == c.clauses);
    CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), ParseError);
}

TEST_CASE("external backend failures are backend errors") {
    CHECK_THROWS_AS(make_backend("/nonexistent/solver"), BackendError);
    ExternalBackend broken("/bin/true");
    CnfInstance c;
    c.num_vars = 1;
    CHECK_THROWS_AS(broken.solve(c, {}), BackendError);
}

#ifdef LIFEPRE_DIMACS_TOOL
TEST_CASE("external backend through the bundled DIMACS solver") {
    ExternalBackend ext(LIFEPRE_DIMACS_TOOL);
    InternalBackend in;
    std::mt19937 rng(99);
    for (int i = 0; i < 30; ++i) {
        auto c = random_3cnf(rng, 12, 50);
        CHECK(ext.solve(c, {}).sat == in.solve(c, {}).sat);
    }
    CnfInstance free2;
    free2.num_vars = 2;
    std::vector<int> proj = {1, 2};
    CHECK(ext.enumerate(free2, proj, 10, {}).size() == 4);
}
#endif
