#include "lifepre/sat.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "lifepre/cdcl.hpp"
#include "lifepre/error.hpp"

namespace lifepre {

bool CnfInstance::well_formed() const {
    for (auto& c : clauses)
        for (Lit l : c)
            if (l == 0 || std::abs(l) > num_vars) return false;
    return true;
}

std::string to_dimacs(const CnfInstance& c, std::span<const Lit> extra_units) {
    std::string out = "p cnf " + std::to_string(c.num_vars) + " " + std::to_string(c.clauses.size() + extra_units.size()) + "\n";
    for (auto& cl : c.clauses) {
        for (Lit l : cl) {
            out += std::to_string(l);
            out += ' ';
        }
        out += "0\n";
    }
    for (Lit l : extra_units) out += std::to_string(l) + " 0\n";
    return out;
}

CnfInstance parse_dimacs(std::string_view text) {
    CnfInstance c;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = false;
    long long declared_clauses = 0;
    Clause current;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c" || tok[0] == 'c') continue;
        if (tok == "p") {
            std::string fmt;
            if (!(ls >> fmt >> c.num_vars >> declared_clauses) || fmt != "cnf")
                throw ParseError("malformed DIMACS header", line_no, 1);
            header = true;
            continue;
        }
        if (!header) throw ParseError("clause before DIMACS header", line_no, 1);
        std::istringstream toks(line);
        long long v;
        while (toks >> v) {
            if (v == 0) {
                c.clauses.push_back(std::move(current));
                current.clear();
            } else {
                if (std::llabs(v) > c.num_vars) throw ParseError("literal exceeds declared variable count", line_no, 1);
                current.push_back(static_cast<Lit>(v));
            }
        }
    }
    if (!header) throw ParseError("missing DIMACS header", line_no, 1);
    if (!current.empty()) c.clauses.push_back(std::move(current));
    return c;
}

bool satisfies(const CnfInstance& c, const std::vector<bool>& model) {
    for (auto& cl : c.clauses) {
        bool sat = false;
        for (Lit l : cl) {
            auto v = static_cast<std::size_t>(std::abs(l));
            if (v >= model.size()) return false;
            if (model[v] == (l > 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

namespace {

void verify_model(const CnfInstance& c, std::span<const Lit> assumptions, const SolveResult& r, const std::string& who) {
    if (!satisfies(c, r.model)) throw BackendError(who + ": returned model violates a clause");
    for (Lit a : assumptions)
        if (!r.value_of_lit(a)) throw BackendError(who + ": returned model violates an assumption");
}

void load(CdclSolver& s, const CnfInstance& c) {
    s.ensure_vars(c.num_vars);
    for (auto& cl : c.clauses)
        if (!s.add_clause(cl)) break;
}

SolveResult extract(const CdclSolver& s, int num_vars) {
    SolveResult r;
    r.sat = true;
    r.model.assign(static_cast<std::size_t>(num_vars) + 1, false);
    for (int v = 1; v <= num_vars; ++v) r.model[static_cast<std::size_t>(v)] = s.model_value(v);
    return r;
}

}  // namespace

std::vector<std::vector<bool>> SatBackend::enumerate(const CnfInstance& c, std::span<const int> projection,
                                                     std::size_t limit, std::span<const Lit> assumptions) {
    CnfInstance work = c;
    std::vector<std::vector<bool>> out;
    while (out.size() < limit) {
        auto r = solve(work, assumptions);
        if (!r.sat) break;
        std::vector<bool> proj;
        Clause block;
        for (int v : projection) {
            bool b = r.value(v);
            proj.push_back(b);
            block.push_back(b ? -v : v);
        }
        out.push_back(std::move(proj));
        if (block.empty()) break;
        work.add(std::move(block));
    }
    return out;
}

SolveResult InternalBackend::solve(const CnfInstance& c, std::span<const Lit> assumptions) {
    CdclSolver s;
    load(s, c);
    auto st = s.solve(assumptions);
    if (st != CdclSolver::Status::Sat) return {};
    auto r = extract(s, c.num_vars);
    verify_model(c, assumptions, r, "internal solver");
    return r;
}

std::vector<std::vector<bool>> InternalBackend::enumerate(const CnfInstance& c, std::span<const int> projection,
                                                          std::size_t limit, std::span<const Lit> assumptions) {
    CdclSolver s;
    load(s, c);
    std::vector<std::vector<bool>> out;
    while (out.size() < limit) {
        if (s.solve(assumptions) != CdclSolver::Status::Sat) break;
        auto r = extract(s, c.num_vars);
        verify_model(c, assumptions, r, "internal solver");
        std::vector<bool> proj;
        Clause block;
        for (int v : projection) {
            bool b = r.value(v);
            proj.push_back(b);
            block.push_back(b ? -v : v);
        }
        out.push_back(std::move(proj));
        if (block.empty() || !s.add_clause(block)) break;
    }
    return out;
}

SolveResult ExternalBackend::solve(const CnfInstance& c, std::span<const Lit> assumptions) {
    namespace fs = std::filesystem;
    char tmpl[] = "/tmp/lifepre-XXXXXX";
    int fd = mkstemp(tmpl);
    if (fd < 0) throw BackendError("cannot create temporary DIMACS file");
    close(fd);
    std::string path = tmpl;
    {
        std::ofstream f(path);
        f << to_dimacs(c, assumptions);
        if (!f) {
            fs::remove(path);
            throw BackendError("cannot write temporary DIMACS file");
        }
    }
    std::string cmd = "'" + exe_ + "' '" + path + "' 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) {
        fs::remove(path);
        throw BackendError("cannot start solver '" + exe_ + "'");
    }
    std::string output;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
    int status = pclose(pipe);
    fs::remove(path);

    std::istringstream in(output);
    std::string line;
    int verdict = 0;  // 1 sat, 2 unsat
    SolveResult r;
    r.model.assign(static_cast<std::size_t>(c.num_vars) + 1, false);
    while (std::getline(in, line)) {
        if (line.rfind("s ", 0) == 0) {
            if (line.find("UNSATISFIABLE") != std::string::npos)
                verdict = 2;
            else if (line.find("SATISFIABLE") != std::string::npos)
                verdict = 1;
        } else if (line.rfind("v ", 0) == 0) {
            std::istringstream vs(line.substr(2));
            long long l;
            while (vs >> l) {
                if (l == 0) continue;
                auto v = static_cast<std::size_t>(std::llabs(l));
                if (v < r.model.size()) r.model[v] = l > 0;
            }
        }
    }
    if (verdict == 0) {
        int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        throw BackendError("solver '" + exe_ + "' gave no verdict (exit status " + std::to_string(code) + ")");
    }
    if (verdict == 2) return {};
    r.sat = true;
    verify_model(c, assumptions, r, "solver '" + exe_ + "'");
    return r;
}

namespace {
std::mutex g_backend_mutex;
std::shared_ptr<SatBackend> g_backend;
}  // namespace

std::shared_ptr<SatBackend> make_backend(const std::string& path) {
    std::string p = path;
    if (p.empty())
        if (const char* env = std::getenv(kSolverEnvVar)) p = env;
    if (p.empty() || p == "internal") return std::make_shared<InternalBackend>();
    if (!std::filesystem::exists(p)) throw BackendError("solver executable '" + p + "' not found");
    return std::make_shared<ExternalBackend>(p);
}

std::shared_ptr<SatBackend> default_backend() {
    std::lock_guard lock(g_backend_mutex);
    if (!g_backend) g_backend = make_backend();
    return g_backend;
}

void set_default_backend(std::shared_ptr<SatBackend> b) {
    std::lock_guard lock(g_backend_mutex);
    g_backend = std::move(b);
}

SolveResult solve(const CnfInstance& c, std::span<const Lit> assumptions, SatBackend* backend) {
    if (!backend) return default_backend()->solve(c, assumptions);
    return backend->solve(c, assumptions);
}

std::vector<std::vector<bool>> enumerate(const CnfInstance& c, std::span<const int> projection, std::size_t limit,
                                         SatBackend* backend, std::span<const Lit> assumptions) {
    if (!backend) return default_backend()->enumerate(c, projection, limit, assumptions);
    return backend->enumerate(c, projection, limit, assumptions);
}

}  // namespace lifepre
