#pragma once
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lifepre/grid.hpp"
#include "lifepre/lifestep.hpp"

namespace lifepre {

struct CnfInstance {
    int num_vars = 0;
    std::vector<Clause> clauses;
    // Optional cell -> variable index for instances built from grids.
    std::map<Cell, int> annotations;

    int new_var() { return ++num_vars; }
    VarAllocator allocator() const { return VarAllocator(num_vars); }
    // Adopts variables handed out by an allocator started from allocator().
    void sync(const VarAllocator& a) { num_vars = std::max(num_vars, a.last()); }
    void add(Clause c) { clauses.push_back(std::move(c)); }
    void add_all(std::vector<Clause> cs) {
        for (auto& c : cs) clauses.push_back(std::move(c));
    }
    // Checks that no literal references a variable above num_vars.
    bool well_formed() const;
};

// DIMACS CNF: "p cnf <vars> <clauses>" then clauses terminated by 0.
std::string to_dimacs(const CnfInstance& c, std::span<const Lit> extra_units = {});
CnfInstance parse_dimacs(std::string_view text);

struct SolveResult {
    bool sat = false;
    std::vector<bool> model;  // model[v] for v in 1..num_vars; index 0 unused

    bool value(int v) const { return model.at(static_cast<std::size_t>(v)); }
    bool value_of_lit(Lit l) const { return l > 0 ? value(l) : !value(-l); }
};

// A black-box SAT procedure. solve() returns a verified model on SAT and
// throws BackendError when the backend itself fails.
class SatBackend {
public:
    virtual ~SatBackend() = default;
    virtual SolveResult solve(const CnfInstance& c, std::span<const Lit> assumptions) = 0;
    // Projected model enumeration; the default re-solves with blocking clauses.
    virtual std::vector<std::vector<bool>> enumerate(const CnfInstance& c, std::span<const int> projection,
                                                     std::size_t limit, std::span<const Lit> assumptions);
    virtual std::string name() const = 0;
};

// In-process CDCL solver (incremental enumeration).
class InternalBackend : public SatBackend {
public:
    SolveResult solve(const CnfInstance& c, std::span<const Lit> assumptions) override;
    std::vector<std::vector<bool>> enumerate(const CnfInstance& c, std::span<const int> projection, std::size_t limit,
                                             std::span<const Lit> assumptions) override;
    std::string name() const override { return "internal"; }
};

// Spawns an external solver on a DIMACS file and reads the "s" / "v" lines.
class ExternalBackend : public SatBackend {
public:
    explicit ExternalBackend(std::string executable) : exe_(std::move(executable)) {}
    SolveResult solve(const CnfInstance& c, std::span<const Lit> assumptions) override;
    std::string name() const override { return exe_; }

private:
    std::string exe_;
};

// Environment variable naming an external solver binary.
inline constexpr const char* kSolverEnvVar = "LIFEPRE_SOLVER";

// `path` empty: the env var if set, otherwise the internal solver.
std::shared_ptr<SatBackend> make_backend(const std::string& path = {});
// Process-wide default used when callers pass no backend.
std::shared_ptr<SatBackend> default_backend();
void set_default_backend(std::shared_ptr<SatBackend> b);

SolveResult solve(const CnfInstance& c, std::span<const Lit> assumptions = {}, SatBackend* backend = nullptr);

// Distinct assignments of `projection` that extend to full models, at most
// `limit` of them. Each entry is aligned with `projection`.
std::vector<std::vector<bool>> enumerate(const CnfInstance& c, std::span<const int> projection, std::size_t limit,
                                         SatBackend* backend = nullptr, std::span<const Lit> assumptions = {});

// True iff every clause has a true literal under model.
bool satisfies(const CnfInstance& c, const std::vector<bool>& model);

}  // namespace lifepre
