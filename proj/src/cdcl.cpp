#include "lifepre/cdcl.hpp"

#include <algorithm>
#include <cmath>

namespace lifepre {

namespace {

double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, seq);
}

}  // namespace

int CdclSolver::new_var() {
    auto v = static_cast<std::uint32_t>(assigns_.size());
    assigns_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    polarity_.push_back(false);
    activity_.push_back(0.0);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_index_.push_back(-1);
    heap_insert(v);
    return static_cast<int>(v) + 1;
}

void CdclSolver::ensure_vars(int n) {
    while (num_vars() < n) new_var();
}

bool CdclSolver::add_clause(std::span<const Lit> lits) {
    if (!ok_) return false;
    backtrack(0);
    std::vector<ILit> c;
    c.reserve(lits.size());
    for (Lit l : lits) {
        ensure_vars(std::abs(l));
        c.push_back(to_ilit(l));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::vector<ILit> kept;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i + 1 < c.size() && c[i + 1] == negate(c[i])) return true;  // tautology
        auto v = value(c[i]);
        if (v == kTrue) return true;
        if (v == kUndef) kept.push_back(c[i]);
    }
    if (kept.empty()) {
        ok_ = false;
        return false;
    }
    if (kept.size() == 1) {
        enqueue(kept[0], kNoReason);
        if (propagate() != kNoReason) ok_ = false;
        return ok_;
    }
    clauses_.push_back({std::move(kept), false, false, 0, 0.0});
    attach(static_cast<int>(clauses_.size()) - 1);
    return true;
}

void CdclSolver::attach(int cref) {
    auto& c = clauses_[static_cast<std::size_t>(cref)];
    watches_[c.lits[0]].push_back({cref, c.lits[1]});
    watches_[c.lits[1]].push_back({cref, c.lits[0]});
}

void CdclSolver::enqueue(ILit l, int reason) {
    auto v = var_of(l);
    assigns_[v] = static_cast<std::uint8_t>((l & 1u) ? kFalse : kTrue);
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(l);
}

// Watch lists are indexed by the watched literal; a clause is visited when
// one of its two watched literals becomes false.
int CdclSolver::propagate() {
    int confl = kNoReason;
    while (qhead_ < trail_.size()) {
        ILit p = trail_[qhead_++];
        ILit false_lit = negate(p);
        auto& ws = watches_[false_lit];
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            Watcher w = ws[i++];
            if (value(w.blocker) == kTrue) {
                ws[j++] = w;
                continue;
            }
            auto& c = clauses_[static_cast<std::size_t>(w.cref)];
            if (c.deleted) continue;
            if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
            ILit first = c.lits[0];
            if (first != w.blocker && value(first) == kTrue) {
                ws[j++] = {w.cref, first};
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.lits.size(); ++k) {
                if (value(c.lits[k]) != kFalse) {
                    std::swap(c.lits[1], c.lits[k]);
                    watches_[c.lits[1]].push_back({w.cref, first});
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = {w.cref, first};
            if (value(first) == kFalse) {
                confl = w.cref;
                qhead_ = trail_.size();
                while (i < ws.size()) ws[j++] = ws[i++];
            } else {
                enqueue(first, w.cref);
            }
        }
        ws.resize(j);
        if (confl != kNoReason) break;
    }
    return confl;
}

void CdclSolver::bump_var(std::uint32_t v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (auto& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_index_[v] >= 0) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void CdclSolver::bump_clause(ClauseData& c) {
    c.activity += clause_inc_;
    if (c.activity > 1e20) {
        for (auto& cl : clauses_)
            if (cl.learnt) cl.activity *= 1e-20;
        clause_inc_ *= 1e-20;
    }
}

void CdclSolver::analyze(int confl, std::vector<ILit>& learnt, int& bt_level, int& lbd) {
    learnt.clear();
    learnt.push_back(kNoLit);
    int path = 0;
    ILit p = kNoLit;
    auto index = static_cast<std::ptrdiff_t>(trail_.size()) - 1;
    do {
        auto& c = clauses_[static_cast<std::size_t>(confl)];
        if (c.learnt) bump_clause(c);
        for (std::size_t j = (p == kNoLit ? 0 : 1); j < c.lits.size(); ++j) {
            ILit q = c.lits[j];
            auto v = var_of(q);
            if (!seen_[v] && level_[v] > 0) {
                seen_[v] = 1;
                bump_var(v);
                if (level_[v] >= decision_level())
                    ++path;
                else
                    learnt.push_back(q);
            }
        }
        while (!seen_[var_of(trail_[static_cast<std::size_t>(index)])]) --index;
        p = trail_[static_cast<std::size_t>(index)];
        --index;
        confl = reason_[var_of(p)];
        seen_[var_of(p)] = 0;
        --path;
    } while (path > 0);
    learnt[0] = negate(p);

    // Drop literals implied by the rest of the clause (local minimization).
    analyze_toclear_.assign(learnt.begin() + 1, learnt.end());
    std::size_t keep = 1;
    for (std::size_t i = 1; i < learnt.size(); ++i) {
        auto v = var_of(learnt[i]);
        int r = reason_[v];
        bool redundant = false;
        if (r != kNoReason) {
            redundant = true;
            for (ILit q : clauses_[static_cast<std::size_t>(r)].lits) {
                auto u = var_of(q);
                if (u != v && !seen_[u] && level_[u] > 0) {
                    redundant = false;
                    break;
                }
            }
        }
        if (!redundant) learnt[keep++] = learnt[i];
    }
    for (ILit l : analyze_toclear_) seen_[var_of(l)] = 0;
    learnt.resize(keep);

    bt_level = 0;
    if (learnt.size() > 1) {
        std::size_t max_i = 1;
        for (std::size_t i = 2; i < learnt.size(); ++i)
            if (level_[var_of(learnt[i])] > level_[var_of(learnt[max_i])]) max_i = i;
        std::swap(learnt[1], learnt[max_i]);
        bt_level = level_[var_of(learnt[1])];
    }
    std::vector<int> levels;
    for (ILit l : learnt) levels.push_back(level_[var_of(l)]);
    std::sort(levels.begin(), levels.end());
    lbd = static_cast<int>(std::unique(levels.begin(), levels.end()) - levels.begin());
}

void CdclSolver::backtrack(int level) {
    if (decision_level() <= level) return;
    auto stop = static_cast<std::size_t>(trail_lim_[static_cast<std::size_t>(level)]);
    for (std::size_t i = trail_.size(); i-- > stop;) {
        auto v = var_of(trail_[i]);
        polarity_[v] = assigns_[v] == kTrue;
        assigns_[v] = kUndef;
        reason_[v] = kNoReason;
        if (heap_index_[v] < 0) heap_insert(v);
    }
    trail_.resize(stop);
    trail_lim_.resize(static_cast<std::size_t>(level));
    qhead_ = trail_.size();
}

CdclSolver::ILit CdclSolver::pick_branch() {
    while (!heap_.empty()) {
        auto v = heap_pop();
        if (assigns_[v] == kUndef) return 2u * v + (polarity_[v] ? 0u : 1u);
    }
    return kNoLit;
}

bool CdclSolver::locked(int cref) const {
    auto& c = clauses_[static_cast<std::size_t>(cref)];
    auto v = var_of(c.lits[0]);
    return reason_[v] == cref && value(c.lits[0]) == kTrue;
}

void CdclSolver::reduce_db() {
    std::vector<int> cand;
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
        auto& c = clauses_[i];
        if (c.learnt && !c.deleted && c.lbd > 2 && !locked(static_cast<int>(i))) cand.push_back(static_cast<int>(i));
    }
    std::sort(cand.begin(), cand.end(), [&](int a, int b) {
        auto& ca = clauses_[static_cast<std::size_t>(a)];
        auto& cb = clauses_[static_cast<std::size_t>(b)];
        if (ca.lbd != cb.lbd) return ca.lbd > cb.lbd;
        return ca.activity < cb.activity;
    });
    for (std::size_t k = 0; k < cand.size() / 2; ++k) {
        auto& c = clauses_[static_cast<std::size_t>(cand[k])];
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
        --num_learnts_;
    }
    for (auto& ws : watches_)
        ws.erase(std::remove_if(ws.begin(), ws.end(),
                                [&](const Watcher& w) { return clauses_[static_cast<std::size_t>(w.cref)].deleted; }),
                 ws.end());
}

CdclSolver::Status CdclSolver::solve(std::span<const Lit> assumptions, long long conflict_budget) {
    model_.clear();
    if (!ok_) return Status::Unsat;
    backtrack(0);
    std::vector<ILit> assume;
    for (Lit l : assumptions) {
        ensure_vars(std::abs(l));
        assume.push_back(to_ilit(l));
    }
    if (propagate() != kNoReason) {
        ok_ = false;
        return Status::Unsat;
    }

    std::vector<ILit> learnt;
    long long start_conflicts = conflicts_;
    int restart_index = 0;
    long long restart_limit = static_cast<long long>(luby(2.0, restart_index) * 100);
    long long since_restart = 0;

    for (;;) {
        int confl = propagate();
        if (confl != kNoReason) {
            ++conflicts_;
            ++since_restart;
            if (decision_level() == 0) {
                ok_ = false;
                return Status::Unsat;
            }
            int bt = 0, lbd = 0;
            analyze(confl, learnt, bt, lbd);
            backtrack(bt);
            if (learnt.size() == 1) {
                enqueue(learnt[0], kNoReason);
            } else {
                clauses_.push_back({learnt, true, false, lbd, 0.0});
                int cref = static_cast<int>(clauses_.size()) - 1;
                bump_clause(clauses_.back());
                attach(cref);
                enqueue(learnt[0], cref);
                ++num_learnts_;
            }
            var_inc_ /= 0.95;
            clause_inc_ /= 0.999;
            continue;
        }

        if (conflict_budget >= 0 && conflicts_ - start_conflicts > conflict_budget) {
            backtrack(0);
            return Status::Unknown;
        }
        if (since_restart >= restart_limit) {
            since_restart = 0;
            restart_limit = static_cast<long long>(luby(2.0, ++restart_index) * 100);
            backtrack(0);
            continue;
        }
        if (num_learnts_ > max_learnts_ + trail_.size()) {
            reduce_db();
            max_learnts_ = max_learnts_ * 11 / 10;
        }

        ILit next = kNoLit;
        while (decision_level() < static_cast<int>(assume.size())) {
            ILit a = assume[static_cast<std::size_t>(decision_level())];
            auto v = value(a);
            if (v == kTrue) {
                trail_lim_.push_back(static_cast<int>(trail_.size()));
            } else if (v == kFalse) {
                backtrack(0);
                return Status::Unsat;
            } else {
                next = a;
                break;
            }
        }
        if (next == kNoLit) {
            next = pick_branch();
            if (next == kNoLit) {
                model_.assign(assigns_.size(), false);
                for (std::size_t v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == kTrue;
                backtrack(0);
                return Status::Sat;
            }
        }
        trail_lim_.push_back(static_cast<int>(trail_.size()));
        enqueue(next, kNoReason);
    }
}

// ---------------------------------------------------------------------------
// activity heap

void CdclSolver::heap_insert(std::uint32_t v) {
    heap_index_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
}

void CdclSolver::heap_up(std::size_t i) {
    auto v = heap_[i];
    while (i > 0) {
        std::size_t parent = (i - 1) / 2;
        if (!heap_less(v, heap_[parent])) break;
        heap_[i] = heap_[parent];
        heap_index_[heap_[i]] = static_cast<int>(i);
        i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<int>(i);
}

void CdclSolver::heap_down(std::size_t i) {
    auto v = heap_[i];
    for (;;) {
        std::size_t child = 2 * i + 1;
        if (child >= heap_.size()) break;
        if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
        if (!heap_less(heap_[child], v)) break;
        heap_[i] = heap_[child];
        heap_index_[heap_[i]] = static_cast<int>(i);
        i = child;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<int>(i);
}

std::uint32_t CdclSolver::heap_pop() {
    auto top = heap_[0];
    heap_index_[top] = -1;
    heap_[0] = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_index_[heap_[0]] = 0;
        heap_down(0);
    }
    return top;
}

}  // namespace lifepre
