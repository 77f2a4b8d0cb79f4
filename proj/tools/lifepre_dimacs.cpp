// Minimal competition-style solver front end over the built-in CDCL solver:
// reads a DIMACS file and prints "s SATISFIABLE" with a "v" line, or
// "s UNSATISFIABLE". Exit status follows the usual 10 / 20 convention.
#include <fstream>
#include <iostream>
#include <sstream>

#include "lifepre/error.hpp"
#include "lifepre/sat.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: lifepre_dimacs FILE.cnf\n";
        return 2;
    }
    std::ifstream f(argv[1]);
    if (!f) {
        std::cerr << "cannot open " << argv[1] << '\n';
        return 2;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        lifepre::CnfInstance c = lifepre::parse_dimacs(ss.str());
        lifepre::InternalBackend solver;
        lifepre::SolveResult r = solver.solve(c, {});
        if (!r.sat) {
            std::cout << "s UNSATISFIABLE\n";
            return 20;
        }
        std::cout << "s SATISFIABLE\nv";
        for (int v = 1; v <= c.num_vars; ++v) std::cout << ' ' << (r.value(v) ? v : -v);
        std::cout << " 0\n";
        return 10;
    } catch (const lifepre::Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
}
