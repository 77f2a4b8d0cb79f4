#pragma once
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "lifepre/gadget.hpp"
#include "lifepre/lifestep.hpp"
#include "lifepre/sat.hpp"

namespace lifepre {

enum ExitCode : int {
    kExitOk = 0,
    kExitNegative = 1,
    kExitUsage = 2,
    kExitBackend = 3,
};

// Cells read "pass", "fail", "inconclusive" or "-" (not applicable).
struct VerifyRow {
    std::string name;
    std::string role;
    std::string charging;
    std::string relation;
    std::string zero_boundary;
    std::string composite;
    Verdict verdict = Verdict::Pass;
    std::vector<std::string> notes;

    friend bool operator==(const VerifyRow&, const VerifyRow&) = default;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;  // library order

    bool any_failure() const;
    std::string table() const;
};

VerifyRow verify_entry(const LibraryEntry& e, const VerifyOptions& opts);
VerifyReport verify_library(const GadgetLibrary& lib, const VerifyOptions& opts, unsigned jobs = 1);
VerifyReport verify_all(const std::string& lib_dir, EncodingKind encoding, unsigned jobs = 1,
                        SatBackend* backend = nullptr);

// Runs the 512 x 2 local-rule checks for one encoding and returns the
// number of mismatches against step_cell.
std::size_t encoding_mismatches(EncodingKind kind, SatBackend* backend = nullptr);

// The lifepre command line. Help and results go to `out`, progress and
// diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lifepre
