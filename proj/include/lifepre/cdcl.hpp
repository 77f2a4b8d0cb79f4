#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include "lifepre/lifestep.hpp"

namespace lifepre {

// Small incremental CDCL solver: two watched literals, first-UIP learning,
// VSIDS, phase saving, Luby restarts and LBD-based clause deletion. Clauses
// and learnt clauses persist across solve() calls; assumptions do not.
class CdclSolver {
public:
    enum class Status { Sat, Unsat, Unknown };

    int num_vars() const { return static_cast<int>(assigns_.size()); }
    int new_var();
    void ensure_vars(int n);

    // DIMACS literals. Returns false once the formula is known UNSAT at level 0.
    bool add_clause(std::span<const Lit> lits);
    bool add_clause(std::initializer_list<Lit> lits) { return add_clause(std::span<const Lit>(lits.begin(), lits.size())); }

    // conflict_budget < 0 means unlimited.
    Status solve(std::span<const Lit> assumptions = {}, long long conflict_budget = -1);

    // Valid after Sat: value of variable v (1-based).
    bool model_value(int v) const { return model_[static_cast<std::size_t>(v - 1)]; }
    const std::vector<bool>& model() const { return model_; }

    bool okay() const { return ok_; }
    long long conflicts() const { return conflicts_; }

private:
    using ILit = std::uint32_t;  // 2*var + sign, var 0-based
    static constexpr ILit kNoLit = 0xffffffffu;
    static constexpr int kNoReason = -1;
    enum : std::uint8_t { kFalse = 0, kTrue = 1, kUndef = 2 };

    struct ClauseData {
        std::vector<ILit> lits;
        bool learnt = false;
        bool deleted = false;
        int lbd = 0;
        double activity = 0;
    };
    struct Watcher {
        int cref;
        ILit blocker;
    };

    static ILit to_ilit(Lit l) { return l > 0 ? 2u * static_cast<ILit>(l - 1) : 2u * static_cast<ILit>(-l - 1) + 1; }
    static std::uint32_t var_of(ILit l) { return l >> 1; }
    static ILit negate(ILit l) { return l ^ 1u; }
    std::uint8_t value(ILit l) const {
        std::uint8_t a = assigns_[var_of(l)];
        return a == kUndef ? a : static_cast<std::uint8_t>(a ^ (l & 1u));
    }
    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    void enqueue(ILit l, int reason);
    int propagate();
    void analyze(int confl, std::vector<ILit>& learnt, int& bt_level, int& lbd);
    void backtrack(int level);
    void attach(int cref);
    ILit pick_branch();
    void bump_var(std::uint32_t v);
    void bump_clause(ClauseData& c);
    void reduce_db();
    bool locked(int cref) const;

    // heap of variables ordered by activity
    void heap_insert(std::uint32_t v);
    void heap_up(std::size_t i);
    void heap_down(std::size_t i);
    std::uint32_t heap_pop();
    bool heap_less(std::uint32_t a, std::uint32_t b) const { return activity_[a] > activity_[b]; }

    bool ok_ = true;
    std::vector<ClauseData> clauses_;
    std::vector<std::vector<Watcher>> watches_;
    std::vector<std::uint8_t> assigns_;
    std::vector<int> level_;
    std::vector<int> reason_;
    std::vector<bool> polarity_;
    std::vector<double> activity_;
    std::vector<std::uint8_t> seen_;
    std::vector<ILit> analyze_toclear_;
    std::vector<ILit> trail_;
    std::vector<int> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<std::uint32_t> heap_;
    std::vector<int> heap_index_;
    double var_inc_ = 1.0;
    double clause_inc_ = 1.0;
    long long conflicts_ = 0;
    std::size_t num_learnts_ = 0;
    std::size_t max_learnts_ = 4000;
    std::vector<bool> model_;
};

}  // namespace lifepre
