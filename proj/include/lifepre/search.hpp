#pragma once
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "lifepre/grid.hpp"
#include "lifepre/lifestep.hpp"
#include "lifepre/sat.hpp"

namespace lifepre {

// ---------------------------------------------------------------------------
// Hill climber

enum class OverflowPolicy {
    Invalid,     // an enumeration hitting the limit makes the candidate invalid
    UpperBound,  // the term is replaced by its largest possible value
};

struct HillParams {
    int max_extension = 3;         // cells per border extension tried before random rectangles
    int random_tries = 20;         // random rectangles tried before backtracking
    int random_rect_max = 3;       // side length bound of random rectangles
    std::size_t merge_threshold = 4;   // domains merge when both have at most this many stray restrictions
    std::size_t enumeration_limit = 512;
    OverflowPolicy overflow = OverflowPolicy::Invalid;
    int diamond_depth = 2;         // "near the border": preimage cells this close to the outside
    int crevice_neighbors = 5;     // border cells with this many specified neighbors are filled first
    std::optional<Cell> period;    // P(v) = P(v + period) inside `region`
    std::optional<Rect> region;    // cells outside are never specified
    EncodingKind encoding = EncodingKind::DivideConquer;
};

struct HillProblem {
    std::vector<std::vector<Cell>> domains;  // D_1..D_n
    std::vector<TriPattern> contexts;        // q_1..q_k
    std::vector<std::vector<Pattern>> forced;  // F_i, each pattern defined exactly on D
    TriPattern constraint;                   // p
    HillParams params;

    // Union of the domains, sorted.
    std::vector<Cell> domain() const;
    // Throws Error unless the invariants hold.
    void validate() const;
};

// Text form, one block per field. Blocks of pattern rows ('.', 'o', '?'
// outside the domain) follow a header line and end with "end":
//   domain X Y          rows; the defined cells form D_j
//   context X Y         rows; q_i, defined cells are constraints
//   forced I X Y        rows; one member of F_I (contexts count from 0)
//   constraint X Y      rows; p
// and single-line parameters "param <name> <value...>". '#' starts a
// comment line. Without context blocks there is one unconstrained context.
HillProblem parse_hill_problem(std::string_view text);
HillProblem read_hill_problem(const std::string& path);
std::string emit_hill_problem(const HillProblem& prob);

struct Validity {
    bool valid = true;
    int reason = 0;  // 1 constraint conflict, 2 forced pattern lost, 3 diamond, 4 enumeration overflow
    std::string detail;
};

struct ScoreResult {
    double value = 0;   // +infinity when invalid
    Validity validity;
    bool bounded = false;  // some term was replaced by its upper bound
    // stray[i][j] = |Q_(i,j)|, the restrictions to D_j that are not forced.
    std::vector<std::vector<std::size_t>> stray;
};

inline constexpr double kInvalidScore = std::numeric_limits<double>::infinity();

// Candidate patterns are image patterns; preimages are Free-mode preimages
// of P with every D cell present (cells away from P are unconstrained).
Validity is_valid(const Pattern& p, const HillProblem& prob, SatBackend* backend = nullptr);
ScoreResult score(const Pattern& p, const HillProblem& prob, SatBackend* backend = nullptr);

// The restrictions of q_i-compatible preimages of p to `cells`, at most
// `limit` of them.
std::vector<Pattern> preimage_restrictions(const Pattern& p, const TriPattern& context, const std::vector<Cell>& cells,
                                           std::size_t limit, EncodingKind encoding = EncodingKind::DivideConquer,
                                           SatBackend* backend = nullptr);

// Replaces D_j1 and D_j2 by their union.
HillProblem merge_domains(const HillProblem& prob, std::size_t j1, std::size_t j2);

// Border cells of p: unspecified cells with a specified neighbor (8-way),
// inside the region if there is one. The empty pattern's border is the
// set of image cells whose neighborhoods meet D.
std::vector<Cell> outer_border(const Pattern& p, const HillProblem& prob);

struct TraceEvent {
    enum class Kind { Accept, Backtrack, Merge, Complete, Give_up };
    Kind kind = Kind::Accept;
    int round = 0;
    double score_before = 0;
    double score_after = 0;
    std::size_t domains = 0;  // number of domains after the event
    std::string detail;
};
std::string to_string(TraceEvent::Kind k);

struct HillOptions {
    std::uint64_t seed = 1;
    std::size_t budget = 10000;     // score evaluations
    int max_rounds = 1 << 20;
    std::string checkpoint_dir;     // empty: no checkpoints
    bool resume = false;            // start from checkpoint_dir/checkpoint.txt
    SatBackend* backend = nullptr;
    std::function<void(const TraceEvent&)> on_event;  // progress callback
};

struct HillResult {
    bool success = false;
    Pattern pattern;   // rectangular (or empty) on success, best partial pattern otherwise
    double score = kInvalidScore;
    std::size_t evaluations = 0;
    int rounds = 0;
    HillProblem final_problem;  // after merges
    std::vector<TraceEvent> trace;
};

HillResult hill_climb(const HillProblem& prob, const HillOptions& opts = {});

// ---------------------------------------------------------------------------
// Genetic charger search

struct GeneticProblem {
    int half_width = 6;  // n: the pattern spans columns 0 .. 2n-1
    int height = 10;     // m: the pattern spans rows 0 .. m
    std::size_t population_cap = 100;
    std::size_t offspring = 40;     // new patterns per generation
    double mutation_share = 0.5;    // fraction of offspring made by mutation
    int max_rectangles = 3;         // rectangles per mutation
    int max_rectangle_side = 3;
    double stickiness = 0.8;        // crossover: chance that row i+1 comes from the same parent as row i
    double similarity = 0.95;       // fraction of equal cells that counts as "too similar"
    int similar_limit = 2;          // rejected when too similar to this many kept patterns
    double initial_density = 0.3;
    std::size_t count_limit = 256;  // cap on the restriction count (256 = every 4 x 2 content)
    EncodingKind encoding = EncodingKind::DivideConquer;

    int width() const { return 2 * half_width; }
    Rect bounds() const { return Rect(0, 0, width(), height + 1); }
    // The window whose preimage contents must be exactly two wire signals.
    Rect window() const { return Rect(half_width - 2, 0, 4, 2); }
    // Cells that may change: everything off the thickness-2 border.
    Rect interior() const { return Rect(2, 2, width() - 4, height - 3); }
    void validate() const;
};

// Preimage cells forced to 0 in the realizability check: the outer two rings
// of the preimage minus the wire's strip at the top.
std::vector<Cell> charger_zero_band(const GeneticProblem& prob);
// The wire and zero border with the given interior.
Pattern charger_frame(const GeneticProblem& prob);

struct ChargerScore {
    bool discarded = false;      // fewer than two signals realizable with a zero band
    std::size_t restrictions = 0;
    double value = kInvalidScore;   // restrictions - 2, or +infinity if discarded
};
ChargerScore score_charger(const Pattern& p, const GeneticProblem& prob, SatBackend* backend = nullptr);

// Checks the four charger properties independently of the search; empty
// when all hold.
std::vector<std::string> check_charger(const Pattern& p, const GeneticProblem& prob,
                                       EncodingKind encoding = EncodingKind::SortingNetwork,
                                       SatBackend* backend = nullptr);

// Row crossover: row 0 from a random parent, each later row from the same
// parent as the previous one with probability `stickiness`.
Pattern crossover(const Pattern& a, const Pattern& b, double stickiness, std::mt19937_64& rng);
Pattern mutate(const Pattern& p, const GeneticProblem& prob, std::mt19937_64& rng);
double similarity(const Pattern& a, const Pattern& b);

struct GeneticOptions {
    std::uint64_t seed = 1;
    std::size_t generations = 100;
    std::vector<Pattern> seeds;
    SatBackend* backend = nullptr;
    std::function<void(std::size_t generation, double best)> on_generation;
};

struct GeneticResult {
    std::optional<Pattern> found;
    double best_score = kInvalidScore;
    Pattern best;
    std::size_t generation = 0;  // generation in which the search stopped
    std::size_t evaluations = 0;
};

GeneticResult genetic_charger(const GeneticProblem& prob, const GeneticOptions& opts = {});

}  // namespace lifepre
