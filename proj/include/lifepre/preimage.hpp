#pragma once
#include <optional>
#include <string>
#include <vector>

#include "lifepre/grid.hpp"
#include "lifepre/lifestep.hpp"
#include "lifepre/sat.hpp"

namespace lifepre {

struct BoundaryMode {
    enum class Kind { Free, ZeroPadded, Torus };
    Kind kind = Kind::Free;
    int thickness = 0;  // ZeroPadded
    int px = 1, py = 1;  // Torus

    static BoundaryMode free() { return {}; }
    static BoundaryMode zero_padded(int t);
    static BoundaryMode torus(int px, int py);
    // "free", "zero:<t>", "torus:<px>x<py>"
    static BoundaryMode parse(const std::string& s);
    std::string to_string() const;
};

struct PreimageQuery {
    Pattern image;
    BoundaryMode mode;
    TriPattern constraints;  // on preimage cells
    EncodingKind encoding = EncodingKind::DivideConquer;
};

// The cells that carry preimage variables:
//  Free        the image domain dilated by one (irregular images allowed);
//  ZeroPadded  the image bounds grown by thickness + 1;
//  Torus       the image bounds, which must be exactly px x py.
std::vector<Cell> preimage_cells(const PreimageQuery& q);
// Image cells whose successor is constrained (includes the zero padding).
std::vector<Cell> image_cells(const PreimageQuery& q);

// One variable per preimage cell, recorded in annotations. Contradictory
// constraints give an instance that is UNSAT, never an exception. A
// constraint outside the preimage cells throws Error.
CnfInstance build(const PreimageQuery& q);

bool has_preimage(const PreimageQuery& q, SatBackend* backend = nullptr);
// The decoded preimage over preimage_cells(q).
std::optional<Pattern> find_preimage(const PreimageQuery& q, SatBackend* backend = nullptr);

// Distinct restrictions of preimages to `window` (cells must be preimage
// cells). Stops at `limit`.
std::vector<Pattern> enumerate_restrictions(const PreimageQuery& q, const std::vector<Cell>& window, std::size_t limit,
                                            SatBackend* backend = nullptr);
std::size_t count_restrictions(const PreimageQuery& q, const std::vector<Cell>& window, std::size_t limit,
                               SatBackend* backend = nullptr);
std::size_t count_restrictions(const PreimageQuery& q, const Rect& window, std::size_t limit,
                               SatBackend* backend = nullptr);

// No Free-mode preimage. p must be rectangular.
bool is_orphan(const Pattern& p, EncodingKind encoding = EncodingKind::DivideConquer, SatBackend* backend = nullptr);

struct Diamond {
    Pattern q;  // restriction to the window is forced
    Pattern r;  // restriction to the window is not forced
};

// Two q_i-compatible preimages of p (Free mode) that agree on every preimage
// cell within border_depth of the outside of the preimage domain, with Q on
// `window` one of `forced` and R on `window` none of them. Forced patterns
// must be defined on every window cell.
std::optional<Diamond> find_diamond(const Pattern& p, const TriPattern& q_i, const std::vector<Pattern>& forced,
                                    const std::vector<Cell>& window, int border_depth = 2,
                                    EncodingKind encoding = EncodingKind::DivideConquer, SatBackend* backend = nullptr);

// The same search over an instance whose annotations name the preimage
// cells; the two preimages must agree on every cell of `agree`.
std::optional<Diamond> find_diamond(const CnfInstance& instance, const std::vector<Cell>& agree,
                                    const std::vector<Pattern>& forced, const std::vector<Cell>& window,
                                    SatBackend* backend = nullptr);

// Preimage cells within `depth` of a cell outside the preimage domain.
std::vector<Cell> border_cells(const std::vector<Cell>& preimage_domain, int depth);

}  // namespace lifepre
