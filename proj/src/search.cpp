#include "lifepre/search.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lifepre/error.hpp"
#include "lifepre/gadget.hpp"
#include "lifepre/preimage.hpp"

namespace lifepre {

namespace {

std::string cell_str(Cell c) { return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")"; }

// Free-mode preimage instance of p in which every cell of `extra` has a
// variable, constrained by the context where it says so.
struct Harness {
    CnfInstance cnf;
    int var(Cell c) const { return cnf.annotations.at(c); }
    std::vector<int> vars(const std::vector<Cell>& cells) const {
        std::vector<int> out;
        out.reserve(cells.size());
        for (Cell c : cells) out.push_back(var(c));
        return out;
    }
};

Harness make_harness(const Pattern& p, const TriPattern& context, const std::vector<Cell>& extra, EncodingKind enc) {
    PreimageQuery q{p, BoundaryMode::free(), TriPattern(), enc};
    std::set<Cell> cells;
    if (!p.empty())
        for (Cell c : preimage_cells(q)) cells.insert(c);
    std::map<Cell, bool> inside;
    for (Cell c : context.constrained_cells())
        if (cells.count(c)) inside[c] = *context.constraint(c);
    if (!inside.empty()) q.constraints = TriPattern(Pattern::from_cells(inside));
    Harness h;
    if (!p.empty()) h.cnf = build(q);
    for (Cell c : extra) {
        if (h.cnf.annotations.count(c)) continue;
        int v = h.cnf.new_var();
        h.cnf.annotations[c] = v;
        if (auto b = context.constraint(c)) h.cnf.add({*b ? v : -v});
    }
    return h;
}

std::vector<Lit> literals_for(const Harness& h, const Pattern& q, const std::vector<Cell>& cells) {
    std::vector<Lit> out;
    for (Cell c : cells) {
        int v = h.var(c);
        out.push_back(q.bit(c) ? v : -v);
    }
    return out;
}

std::vector<bool> bits_on(const Pattern& q, const std::vector<Cell>& cells) {
    std::vector<bool> out;
    out.reserve(cells.size());
    for (Cell c : cells) out.push_back(q.bit(c));
    return out;
}

std::optional<Validity> constraint_conflict(const Pattern& p, const HillProblem& prob) {
    for (Cell c : prob.constraint.constrained_cells()) {
        auto b = p.at(c);
        if (b && *b != *prob.constraint.constraint(c))
            return Validity{false, 1, "cell " + cell_str(c) + " contradicts the constraint"};
    }
    return std::nullopt;
}

// Shared by is_valid and score: checks validity and, if `with_score`,
// accumulates the score terms.
ScoreResult evaluate(const Pattern& p, const HillProblem& prob, SatBackend* backend, bool with_score) {
    ScoreResult out;
    auto invalid = [&](Validity v) {
        out.validity = std::move(v);
        out.value = kInvalidScore;
        return out;
    };
    if (auto v = constraint_conflict(p, prob)) return invalid(*v);
    const auto& par = prob.params;
    const auto D = prob.domain();
    out.stray.assign(prob.contexts.size(), std::vector<std::size_t>(prob.domains.size(), 0));
    double total = 0;

    for (std::size_t i = 0; i < prob.contexts.size(); ++i) {
        Harness h = make_harness(p, prob.contexts[i], D, par.encoding);
        const auto& F = prob.forced[i];
        for (std::size_t f = 0; f < F.size(); ++f) {
            auto lits = literals_for(h, F[f], D);
            if (!solve(h.cnf, lits, backend).sat)
                return invalid({false, 2,
                                "forced pattern " + std::to_string(f) + " of context " + std::to_string(i) +
                                    " has no compatible preimage"});
        }
        std::vector<Cell> all;
        for (auto& [c, v] : h.cnf.annotations) all.push_back(c);
        if (auto d = find_diamond(h.cnf, border_cells(all, par.diamond_depth), F, D, backend))
            return invalid({false, 3, "diamond in context " + std::to_string(i)});
        if (!with_score) continue;

        for (std::size_t j = 0; j < prob.domains.size(); ++j) {
            const auto& Dj = prob.domains[j];
            const double size = static_cast<double>(Dj.size());
            std::set<std::vector<bool>> forced_here;
            for (auto& q : F) forced_here.insert(bits_on(q, Dj));
            const std::size_t limit = par.enumeration_limit + forced_here.size();
            auto proj = h.vars(Dj);
            auto models = enumerate(h.cnf, proj, limit, backend);
            if (models.size() >= limit) {
                if (par.overflow == OverflowPolicy::Invalid)
                    return invalid({false, 4,
                                    "more than " + std::to_string(par.enumeration_limit) +
                                        " stray restrictions on domain " + std::to_string(j)});
                double count = std::ldexp(1.0, static_cast<int>(Dj.size())) - static_cast<double>(forced_here.size());
                total += std::log(1 + count * (1 + size) / size) / size;
                out.bounded = true;
                out.stray[i][j] = models.size();
                continue;
            }
            double sum = 0;
            for (auto& r : models) {
                if (forced_here.count(r)) continue;
                ++out.stray[i][j];
                std::size_t best = 0;
                for (auto& q : F) {
                    std::size_t agree = 0;
                    for (std::size_t c = 0; c < Dj.size(); ++c) agree += q.bit(Dj[c]) == r[c];
                    best = std::max(best, agree);
                }
                sum += static_cast<double>(1 + best) / size;
            }
            total += std::log(1 + sum) / size;
        }
    }
    out.value = with_score ? total : 0;
    return out;
}

std::vector<std::string> pattern_rows(const Pattern& p) {
    std::vector<std::string> rows;
    if (p.empty()) return rows;
    const Rect& b = p.bounds();
    for (int y = b.y0; y < b.y1(); ++y) {
        std::string row;
        for (int x = b.x0; x < b.x1(); ++x) {
            auto v = p.at({x, y});
            row += v ? (*v ? 'o' : '.') : '?';
        }
        rows.push_back(row);
    }
    return rows;
}

Pattern cells_pattern(const std::vector<Cell>& cells) {
    std::map<Cell, bool> m;
    for (Cell c : cells) m[c] = false;
    return Pattern::from_cells(m);
}

void emit_block(std::ostream& out, const std::string& header, const Pattern& p) {
    Cell origin = p.empty() ? Cell{0, 0} : Cell{p.bounds().x0, p.bounds().y0};
    out << header << ' ' << origin.x << ' ' << origin.y << '\n';
    for (auto& r : pattern_rows(p)) out << r << '\n';
    out << "end\n";
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Cell> HillProblem::domain() const {
    std::set<Cell> all;
    for (auto& d : domains) all.insert(d.begin(), d.end());
    return {all.begin(), all.end()};
}

void HillProblem::validate() const {
    if (domains.empty()) throw Error("hill problem has no domains");
    for (auto& d : domains)
        if (d.empty()) throw Error("hill problem has an empty domain");
    if (contexts.empty()) throw Error("hill problem has no contexts");
    if (forced.size() != contexts.size()) throw Error("every context needs its forced set");
    auto D = domain();
    for (std::size_t i = 0; i < forced.size(); ++i) {
        if (forced[i].empty()) throw Error("forced set of context " + std::to_string(i) + " is empty");
        for (auto& q : forced[i]) {
            auto dom = q.domain();
            std::sort(dom.begin(), dom.end());
            if (dom != D) throw Error("a forced pattern of context " + std::to_string(i) + " is not defined exactly on D");
        }
    }
    if (params.max_extension < 1) throw Error("max_extension must be at least 1");
    if (params.period && !params.region) throw Error("a period needs a region");
    if (params.period && params.period->x == 0 && params.period->y == 0) throw Error("period must be nonzero");
}

HillProblem parse_hill_problem(std::string_view text) {
    HillProblem prob;
    std::vector<std::pair<int, Pattern>> forced;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    auto read_rows = [&](int start) {
        std::vector<std::string> rows;
        while (std::getline(in, line)) {
            ++lineno;
            if (line == "end") return rows;
            rows.push_back(line);
        }
        throw ParseError("block is missing its 'end' line", start, 1);
    };
    auto need = [&](std::istringstream& ls, auto& v, const char* what) {
        if (!(ls >> v)) throw ParseError(std::string("expected ") + what, lineno, 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == '#') continue;
        const int start = lineno;
        if (key == "domain" || key == "context" || key == "constraint" || key == "forced") {
            int idx = 0, x = 0, y = 0;
            if (key == "forced") need(ls, idx, "context index");
            need(ls, x, "x origin");
            need(ls, y, "y origin");
            Pattern p;
            try {
                p = Pattern::from_rows(read_rows(start), {x, y});
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                throw ParseError(e.what(), start, 1);
            }
            if (key == "domain") {
                if (p.empty()) throw ParseError("empty domain", start, 1);
                prob.domains.push_back(p.domain());
            } else if (key == "context") {
                prob.contexts.push_back(TriPattern(p));
            } else if (key == "constraint") {
                prob.constraint = TriPattern(p);
            } else {
                forced.emplace_back(idx, p);
            }
        } else if (key == "param") {
            std::string name;
            need(ls, name, "parameter name");
            auto& par = prob.params;
            if (name == "max_extension") need(ls, par.max_extension, "value");
            else if (name == "random_tries") need(ls, par.random_tries, "value");
            else if (name == "random_rect_max") need(ls, par.random_rect_max, "value");
            else if (name == "merge_threshold") need(ls, par.merge_threshold, "value");
            else if (name == "enumeration_limit") need(ls, par.enumeration_limit, "value");
            else if (name == "diamond_depth") need(ls, par.diamond_depth, "value");
            else if (name == "crevice_neighbors") need(ls, par.crevice_neighbors, "value");
            else if (name == "overflow") {
                std::string v;
                need(ls, v, "invalid or bound");
                if (v == "invalid") par.overflow = OverflowPolicy::Invalid;
                else if (v == "bound") par.overflow = OverflowPolicy::UpperBound;
                else throw ParseError("overflow must be 'invalid' or 'bound'", lineno, 1);
            } else if (name == "encoding") {
                std::string v;
                need(ls, v, "encoding name");
                try {
                    par.encoding = parse_encoding(v);
                } catch (const Error& e) {
                    throw ParseError(e.what(), lineno, 1);
                }
            } else if (name == "period") {
                Cell c;
                need(ls, c.x, "dx");
                need(ls, c.y, "dy");
                par.period = c;
            } else if (name == "region") {
                int x, y, w, h;
                need(ls, x, "x");
                need(ls, y, "y");
                need(ls, w, "width");
                need(ls, h, "height");
                par.region = Rect(x, y, w, h);
            } else {
                throw ParseError("unknown parameter '" + name + "'", lineno, 1);
            }
        } else {
            throw ParseError("unknown block '" + key + "'", lineno, 1);
        }
    }
    if (prob.contexts.empty()) prob.contexts.push_back(TriPattern());
    prob.forced.assign(prob.contexts.size(), {});
    for (auto& [i, p] : forced) {
        if (i < 0 || static_cast<std::size_t>(i) >= prob.contexts.size())
            throw Error("forced pattern names context " + std::to_string(i) + ", which does not exist");
        prob.forced[static_cast<std::size_t>(i)].push_back(p);
    }
    prob.validate();
    return prob;
}

HillProblem read_hill_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open problem file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_hill_problem(ss.str());
}

std::string emit_hill_problem(const HillProblem& prob) {
    std::ostringstream out;
    for (auto& d : prob.domains) emit_block(out, "domain", cells_pattern(d));
    for (std::size_t i = 0; i < prob.contexts.size(); ++i) {
        emit_block(out, "context", prob.contexts[i].committed());
        for (auto& q : prob.forced[i]) emit_block(out, "forced " + std::to_string(i), q);
    }
    if (!prob.constraint.unconstrained()) emit_block(out, "constraint", prob.constraint.committed());
    const auto& p = prob.params;
    out << "param max_extension " << p.max_extension << '\n'
        << "param random_tries " << p.random_tries << '\n'
        << "param random_rect_max " << p.random_rect_max << '\n'
        << "param merge_threshold " << p.merge_threshold << '\n'
        << "param enumeration_limit " << p.enumeration_limit << '\n'
        << "param overflow " << (p.overflow == OverflowPolicy::Invalid ? "invalid" : "bound") << '\n'
        << "param diamond_depth " << p.diamond_depth << '\n'
        << "param crevice_neighbors " << p.crevice_neighbors << '\n'
        << "param encoding " << to_string(p.encoding) << '\n';
    if (p.period) out << "param period " << p.period->x << ' ' << p.period->y << '\n';
    if (p.region) out << "param region " << p.region->x0 << ' ' << p.region->y0 << ' ' << p.region->width << ' ' << p.region->height << '\n';
    return out.str();
}

Validity is_valid(const Pattern& p, const HillProblem& prob, SatBackend* backend) {
    return evaluate(p, prob, backend, false).validity;
}

ScoreResult score(const Pattern& p, const HillProblem& prob, SatBackend* backend) {
    return evaluate(p, prob, backend, true);
}

std::vector<Pattern> preimage_restrictions(const Pattern& p, const TriPattern& context, const std::vector<Cell>& cells,
                                           std::size_t limit, EncodingKind encoding, SatBackend* backend) {
    Harness h = make_harness(p, context, cells, encoding);
    std::vector<Pattern> out;
    for (auto& m : enumerate(h.cnf, h.vars(cells), limit, backend)) {
        std::map<Cell, bool> bits;
        for (std::size_t i = 0; i < cells.size(); ++i) bits[cells[i]] = m[i];
        out.push_back(Pattern::from_cells(bits));
    }
    return out;
}

HillProblem merge_domains(const HillProblem& prob, std::size_t j1, std::size_t j2) {
    if (j1 >= prob.domains.size() || j2 >= prob.domains.size()) throw Error("merge_domains: index out of range");
    if (j1 == j2) return prob;
    HillProblem out = prob;
    std::set<Cell> u(prob.domains[j1].begin(), prob.domains[j1].end());
    u.insert(prob.domains[j2].begin(), prob.domains[j2].end());
    out.domains.clear();
    for (std::size_t j = 0; j < prob.domains.size(); ++j) {
        if (j == j2) continue;
        if (j == j1)
            out.domains.emplace_back(u.begin(), u.end());
        else
            out.domains.push_back(prob.domains[j]);
    }
    return out;
}

std::vector<Cell> outer_border(const Pattern& p, const HillProblem& prob) {
    const auto& region = prob.params.region;
    auto allowed = [&](Cell c) { return !region || region->contains(c); };
    std::vector<Cell> out;
    std::set<Cell> seen;
    if (p.empty()) {
        // image cells whose neighborhoods meet D
        for (Cell c : prob.domain())
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    Cell n{c.x + dx, c.y + dy};
                    if (allowed(n) && seen.insert(n).second) out.push_back(n);
                }
        std::sort(out.begin(), out.end());
        return out;
    }
    for (Cell c : p.domain())
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                Cell n{c.x + dx, c.y + dy};
                if (!p.in_domain(n) && allowed(n) && seen.insert(n).second) out.push_back(n);
            }
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(TraceEvent::Kind k) {
    switch (k) {
        case TraceEvent::Kind::Accept: return "accept";
        case TraceEvent::Kind::Backtrack: return "backtrack";
        case TraceEvent::Kind::Merge: return "merge";
        case TraceEvent::Kind::Complete: return "complete";
        case TraceEvent::Kind::Give_up: return "give-up";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// The climb

namespace {

struct Candidate {
    Pattern pattern;
    double score = kInvalidScore;
};

struct Node {
    Pattern pattern;
    double score = kInvalidScore;
    std::vector<Candidate> alternatives;  // untried improving extensions, best first
    std::size_t next = 0;
    bool exhausted = false;  // the systematic extensions found nothing better
    int parent = -1;
};

class Climber {
public:
    Climber(HillProblem prob, const HillOptions& opts) : prob_(std::move(prob)), opts_(opts), rng_(opts.seed) {}

    HillResult run();

private:
    ScoreResult rate(const Pattern& p) {
        ++evaluations_;
        return score(p, prob_, opts_.backend);
    }
    bool out_of_budget() const { return evaluations_ >= opts_.budget; }

    // p with the given cells set, copied along the period if there is one.
    std::optional<Pattern> extend(const Pattern& p, const std::map<Cell, bool>& cells) const;
    std::vector<Candidate> improving(const Pattern& p, double current, const std::vector<std::map<Cell, bool>>& exts,
                                     bool allow_equal);
    std::vector<std::map<Cell, bool>> extensions(const std::vector<Cell>& cells, int width) const;
    std::vector<Cell> crevices(const Pattern& p, const std::vector<Cell>& border) const;
    std::optional<Candidate> random_rectangle(const Pattern& p, double current, const std::vector<Cell>& border);
    void try_merge(Node& n);
    std::optional<Pattern> complete(const Pattern& p);
    void log(TraceEvent e);
    void checkpoint(const Node& n);
    bool load_checkpoint(Node& n);

    HillProblem prob_;
    HillOptions opts_;
    std::mt19937_64 rng_;
    std::size_t evaluations_ = 0;
    int round_ = 0;
    std::vector<TraceEvent> trace_;
    std::vector<std::size_t> last_stray_;  // max over contexts, per domain
};

std::optional<Pattern> Climber::extend(const Pattern& p, const std::map<Cell, bool>& cells) const {
    std::map<Cell, bool> all;
    const auto& par = prob_.params;
    for (auto& [c, b] : cells) {
        all[c] = b;
        if (!par.period) continue;
        Cell d = *par.period;
        for (int dir : {-1, 1})
            for (Cell q{c.x + dir * d.x, c.y + dir * d.y}; par.region->contains(q);
                 q = Cell{q.x + dir * d.x, q.y + dir * d.y})
                all[q] = b;
    }
    for (auto& [c, b] : all) {
        if (auto old = p.at(c); old && *old != b) return std::nullopt;
        if (auto want = prob_.constraint.constraint(c); want && *want != b) return std::nullopt;
    }
    return p.with(all);
}

std::vector<std::map<Cell, bool>> Climber::extensions(const std::vector<Cell>& cells, int width) const {
    std::vector<std::map<Cell, bool>> out;
    std::set<Cell> pool(cells.begin(), cells.end());
    std::set<std::vector<Cell>> shapes;
    std::vector<std::vector<Cell>> frontier;
    for (Cell c : cells) frontier.push_back({c});
    for (int w = 1; w < width; ++w) {
        std::vector<std::vector<Cell>> next;
        for (auto& s : frontier)
            for (Cell c : s)
                for (Cell n : {Cell{c.x + 1, c.y}, Cell{c.x - 1, c.y}, Cell{c.x, c.y + 1}, Cell{c.x, c.y - 1}}) {
                    if (!pool.count(n) || std::find(s.begin(), s.end(), n) != s.end()) continue;
                    auto t = s;
                    t.push_back(n);
                    std::sort(t.begin(), t.end());
                    if (shapes.insert(t).second) next.push_back(t);
                }
        frontier = std::move(next);
    }
    for (auto& s : frontier)
        for (unsigned bits = 0; bits < (1u << s.size()); ++bits) {
            std::map<Cell, bool> e;
            for (std::size_t i = 0; i < s.size(); ++i) e[s[i]] = bits >> i & 1;
            out.push_back(e);
        }
    return out;
}

std::vector<Candidate> Climber::improving(const Pattern& p, double current,
                                          const std::vector<std::map<Cell, bool>>& exts, bool allow_equal) {
    std::vector<Candidate> out;
    std::set<std::vector<std::string>> seen;
    for (auto& e : exts) {
        if (out_of_budget()) break;
        auto q = extend(p, e);
        if (!q) continue;
        auto s = rate(*q).value;
        if (s < current || (allow_equal && s == current && s < kInvalidScore)) out.push_back({*q, s});
    }
    std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) { return a.score < b.score; });
    return out;
}

std::vector<Cell> Climber::crevices(const Pattern& p, const std::vector<Cell>& border) const {
    std::vector<Cell> out;
    for (Cell c : border) {
        int n = 0;
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if ((dx || dy) && p.in_domain({c.x + dx, c.y + dy})) ++n;
        if (n >= prob_.params.crevice_neighbors) out.push_back(c);
    }
    return out;
}

std::optional<Candidate> Climber::random_rectangle(const Pattern& p, double current, const std::vector<Cell>& border) {
    if (border.empty()) return std::nullopt;
    const int side = std::max(1, prob_.params.random_rect_max);
    std::uniform_int_distribution<std::size_t> pick(0, border.size() - 1);
    std::uniform_int_distribution<int> len(1, side);
    std::bernoulli_distribution coin(0.5);
    Cell c = border[pick(rng_)];
    int w = len(rng_), h = len(rng_);
    int x0 = c.x - std::uniform_int_distribution<int>(0, w - 1)(rng_);
    int y0 = c.y - std::uniform_int_distribution<int>(0, h - 1)(rng_);
    std::map<Cell, bool> cells;
    for (Cell q : Rect(x0, y0, w, h).cells()) {
        if (p.in_domain(q)) continue;
        if (prob_.params.region && !prob_.params.region->contains(q)) continue;
        auto want = prob_.constraint.constraint(q);
        cells[q] = want ? *want : coin(rng_);
    }
    if (cells.empty()) return std::nullopt;
    auto q = extend(p, cells);
    if (!q) return std::nullopt;
    double s = rate(*q).value;
    if (s < current) return Candidate{*q, s};
    return std::nullopt;
}

void Climber::log(TraceEvent e) {
    e.round = round_;
    e.domains = prob_.domains.size();
    if (opts_.on_event) opts_.on_event(e);
    if (!opts_.checkpoint_dir.empty()) {
        std::ofstream j(std::filesystem::path(opts_.checkpoint_dir) / "journal.log", std::ios::app);
        j << e.round << ' ' << to_string(e.kind) << ' ' << e.score_before << ' ' << e.score_after << ' ' << e.domains;
        if (!e.detail.empty()) j << ' ' << e.detail;
        j << '\n';
    }
    trace_.push_back(std::move(e));
}

void Climber::checkpoint(const Node& n) {
    if (opts_.checkpoint_dir.empty()) return;
    namespace fs = std::filesystem;
    fs::path dir(opts_.checkpoint_dir);
    {
        std::ofstream out(dir / "problem.txt.tmp");
        out << emit_hill_problem(prob_);
    }
    {
        std::ofstream out(dir / "checkpoint.txt.tmp");
        out << "round " << round_ << '\n' << "evaluations " << evaluations_ << '\n' << "rng " << rng_ << '\n';
        if (!n.pattern.empty()) {
            out << "pattern " << n.pattern.bounds().x0 << ' ' << n.pattern.bounds().y0 << '\n';
            for (auto& r : pattern_rows(n.pattern)) out << r << '\n';
            out << "end\n";
        }
    }
    fs::rename(dir / "problem.txt.tmp", dir / "problem.txt");
    fs::rename(dir / "checkpoint.txt.tmp", dir / "checkpoint.txt");
}

bool Climber::load_checkpoint(Node& n) {
    namespace fs = std::filesystem;
    fs::path dir(opts_.checkpoint_dir);
    if (!fs::exists(dir / "checkpoint.txt")) return false;
    prob_ = read_hill_problem((dir / "problem.txt").string());
    std::ifstream in(dir / "checkpoint.txt");
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "round") ls >> round_;
        else if (key == "evaluations") ls >> evaluations_;
        else if (key == "rng") ls >> rng_;
        else if (key == "pattern") {
            Cell o;
            ls >> o.x >> o.y;
            std::vector<std::string> rows;
            while (std::getline(in, line) && line != "end") rows.push_back(line);
            n.pattern = Pattern::from_rows(rows, o);
        }
    }
    evaluations_ = 0;  // the budget applies to this session
    return true;
}

void Climber::try_merge(Node& n) {
    if (prob_.domains.size() < 2) return;
    ScoreResult s = rate(n.pattern);
    if (s.value == kInvalidScore) return;
    std::vector<std::size_t> small;
    for (std::size_t j = 0; j < prob_.domains.size(); ++j) {
        std::size_t worst = 0;
        for (auto& per_ctx : s.stray) worst = std::max(worst, per_ctx[j]);
        if (worst <= prob_.params.merge_threshold) small.push_back(j);
    }
    if (small.size() < 2) return;
    HillProblem merged = merge_domains(prob_, small[0], small[1]);
    ScoreResult after = score(n.pattern, merged, opts_.backend);
    ++evaluations_;
    if (after.value == kInvalidScore) return;
    std::swap(prob_, merged);
    double before = n.score;
    n.score = after.value;
    log({TraceEvent::Kind::Merge, 0, before, after.value, 0,
         "domains " + std::to_string(small[0]) + "+" + std::to_string(small[1])});
}

std::optional<Pattern> Climber::complete(const Pattern& p) {
    if (p.empty()) return p;
    Pattern q = p;
    for (Cell c : p.bounds().cells()) {
        if (q.in_domain(c)) continue;
        bool done = false;
        for (bool b : {false, true}) {
            auto e = extend(q, {{c, b}});
            if (!e) continue;
            ++evaluations_;
            if (is_valid(*e, prob_, opts_.backend).valid) {
                q = *e;
                done = true;
                break;
            }
        }
        if (!done) return std::nullopt;
    }
    return q;
}

HillResult Climber::run() {
    prob_.validate();
    if (!opts_.checkpoint_dir.empty()) {
        std::filesystem::create_directories(opts_.checkpoint_dir);
        std::ofstream j(std::filesystem::path(opts_.checkpoint_dir) / "journal.log", std::ios::app);
        j << "# " << (opts_.resume ? "resume" : "start") << " seed " << opts_.seed << " budget " << opts_.budget << '\n';
    }
    std::vector<Node> nodes(1);
    if (opts_.resume && !opts_.checkpoint_dir.empty()) load_checkpoint(nodes[0]);
    nodes[0].score = rate(nodes[0].pattern).value;

    HillResult res;
    auto finish = [&](bool ok, const Pattern& p, double s) {
        res.success = ok;
        res.pattern = p;
        res.score = s;
        res.evaluations = evaluations_;
        res.rounds = round_;
        res.final_problem = prob_;
        res.trace = trace_;
        return res;
    };
    if (nodes[0].score == kInvalidScore) {
        log({TraceEvent::Kind::Give_up, 0, kInvalidScore, kInvalidScore, 0, "the starting pattern is invalid"});
        return finish(false, nodes[0].pattern, kInvalidScore);
    }

    checkpoint(nodes[0]);
    std::size_t cur = 0;
    std::size_t best = 0;
    for (; round_ < opts_.max_rounds && !out_of_budget(); ++round_) {
        Node& n = nodes[cur];
        if (n.score == 0) {
            try_merge(n);
            if (prob_.domains.size() == 1 && n.score == 0) {
                auto full = complete(n.pattern);
                if (full) {
                    double s = rate(*full).value;
                    log({TraceEvent::Kind::Complete, 0, n.score, s, 0, ""});
                    if (s == 0) return finish(true, *full, s);
                }
                log({TraceEvent::Kind::Give_up, 0, n.score, n.score, 0, "rectangle completion failed"});
                return finish(false, n.pattern, n.score);
            }
            if (n.score == 0) continue;  // another merge may follow
        } else {
            try_merge(n);
        }
        const double current = nodes[cur].score;
        const Pattern here = nodes[cur].pattern;
        auto border = outer_border(here, prob_);

        std::vector<Candidate> better;
        if (!nodes[cur].exhausted) {
            if (auto cr = crevices(here, border); !cr.empty())
                better = improving(here, current, extensions(cr, 1), true);
            for (int w = 1; better.empty() && w <= prob_.params.max_extension && !out_of_budget(); ++w)
                better = improving(here, current, extensions(border, w), false);
            nodes[cur].exhausted = better.empty();
        }
        for (int t = 0; better.empty() && t < prob_.params.random_tries && !out_of_budget(); ++t)
            if (auto c = random_rectangle(here, current, border)) better.push_back(*c);

        if (!better.empty()) {
            Node child;
            child.pattern = better.front().pattern;
            child.score = better.front().score;
            child.parent = static_cast<int>(cur);
            nodes[cur].alternatives.assign(better.begin() + 1, better.end());
            nodes[cur].next = 0;
            log({TraceEvent::Kind::Accept, 0, current, child.score, 0, ""});
            nodes.push_back(std::move(child));
            cur = nodes.size() - 1;
            if (nodes[cur].score < nodes[best].score) best = cur;
            checkpoint(nodes[cur]);
            continue;
        }
        if (out_of_budget()) break;

        // Backtrack to the nearest ancestor with an untried alternative.
        int up = nodes[cur].parent;
        while (up >= 0 && nodes[static_cast<std::size_t>(up)].next >= nodes[static_cast<std::size_t>(up)].alternatives.size())
            up = nodes[static_cast<std::size_t>(up)].parent;
        if (up < 0) continue;  // nothing to return to: keep drawing rectangles here
        Node& anc = nodes[static_cast<std::size_t>(up)];
        Candidate alt = anc.alternatives[anc.next++];
        Node child;
        child.pattern = alt.pattern;
        child.score = rate(alt.pattern).value;  // domains may have merged since
        child.parent = up;
        log({TraceEvent::Kind::Backtrack, 0, current, child.score, 0, "to node " + std::to_string(up)});
        nodes.push_back(std::move(child));
        cur = nodes.size() - 1;
        checkpoint(nodes[cur]);
    }
    const Node& b = nodes[best].score <= nodes[cur].score ? nodes[best] : nodes[cur];
    return finish(false, b.pattern, b.score);
}

}  // namespace

HillResult hill_climb(const HillProblem& prob, const HillOptions& opts) { return Climber(prob, opts).run(); }

// ---------------------------------------------------------------------------
// Genetic charger search

void GeneticProblem::validate() const {
    if (half_width < 3) throw Error("charger half-width must be at least 3");
    if (height < 5) throw Error("charger height must be at least 5");
    if (population_cap < 2) throw Error("population cap must be at least 2");
    if (stickiness < 0 || stickiness > 1) throw Error("stickiness must lie in [0, 1]");
}

std::vector<Cell> charger_zero_band(const GeneticProblem& prob) {
    const int W = prob.width(), m = prob.height, n = prob.half_width;
    std::vector<Cell> out;
    for (int y = -1; y <= m + 1; ++y)
        for (int x = -1; x <= W; ++x) {
            bool ring = x <= 0 || x >= W - 1 || y <= 0 || y >= m;
            bool strip = y <= 0 && x >= n - 2 && x <= n + 1;
            if (ring && !strip) out.push_back({x, y});
        }
    return out;
}

Pattern charger_frame(const GeneticProblem& prob) {
    PatternWriter w(prob.bounds());
    for (int y = 0; y < 2; ++y)
        for (int x = prob.half_width - 1; x <= prob.half_width; ++x) w.set({x, y}, true);
    return std::move(w).freeze();
}

namespace {

// The first two charger properties: the wire on top, zeros on the rest of
// the thickness-2 border.
std::vector<std::string> frame_errors(const Pattern& p, const GeneticProblem& prob) {
    std::vector<std::string> errs;
    const int W = prob.width(), m = prob.height, n = prob.half_width;
    if (!p.is_rectangular() || !(p.bounds() == prob.bounds())) {
        errs.push_back("pattern is not " + std::to_string(W) + " x " + std::to_string(m + 1));
        return errs;
    }
    bool wire_ok = true;
    for (int y = 0; y < 2; ++y)
        for (int x = 0; x < W; ++x) wire_ok = wire_ok && p.bit({x, y}) == (x == n - 1 || x == n);
    if (!wire_ok) errs.push_back("the top two rows are not exactly the wire");
    for (int y = 2; y <= m; ++y)
        for (int x = 0; x < W; ++x) {
            bool border = x < 2 || x >= W - 2 || y >= m - 1;
            if (border && p.bit({x, y})) {
                errs.push_back("live cell " + cell_str({x, y}) + " on the zero border");
                return errs;
            }
        }
    return errs;
}

}  // namespace

ChargerScore score_charger(const Pattern& p, const GeneticProblem& prob, SatBackend* backend) {
    ChargerScore out;
    PreimageQuery q{p, BoundaryMode::free(), TriPattern(), prob.encoding};
    CnfInstance cnf = build(q);
    auto var = [&](Cell c) { return cnf.annotations.at(c); };
    std::vector<Lit> band;
    for (Cell c : charger_zero_band(prob)) band.push_back(-var(c));
    const Rect win = prob.window();
    int realizable = 0;
    for (int phase = 0; phase < 3; ++phase) {
        auto sig = wire_signal_pattern({phase, Orientation::Vertical}, {win.x0, win.y0});
        std::vector<Lit> lits = band;
        for (Cell c : win.cells()) lits.push_back(sig.bit(c) ? var(c) : -var(c));
        if (solve(cnf, lits, backend).sat) ++realizable;
    }
    if (realizable < 2) {
        out.discarded = true;
        return out;
    }
    std::vector<int> proj;
    for (Cell c : win.cells()) proj.push_back(var(c));
    out.restrictions = enumerate(cnf, proj, prob.count_limit, backend).size();
    out.value = static_cast<double>(out.restrictions) - 2;
    return out;
}

std::vector<std::string> check_charger(const Pattern& p, const GeneticProblem& prob, EncodingKind encoding,
                                       SatBackend* backend) {
    auto errs = frame_errors(p, prob);
    if (!p.is_rectangular() || !(p.bounds() == prob.bounds())) return errs;
    const int W = prob.width(), m = prob.height, n = prob.half_width;

    // Independent re-derivation of the preimage checks.
    PreimageQuery q{p, BoundaryMode::free(), TriPattern(), encoding};
    CnfInstance cnf = build(q);
    std::vector<Lit> zero;
    for (int y = -1; y <= m + 1; ++y)
        for (int x = -1; x <= W; ++x) {
            bool outer = x == -1 || x == W || y == -1 || y == m + 1;
            bool second = x == 0 || x == W - 1 || y == 0 || y == m;
            bool wire_strip = (y == -1 || y == 0) && x >= n - 2 && x <= n + 1;
            if ((outer || second) && !wire_strip) zero.push_back(-cnf.annotations.at({x, y}));
        }
    std::vector<Cell> window;
    for (int y = 0; y < 2; ++y)
        for (int x = n - 2; x <= n + 1; ++x) window.push_back({x, y});
    std::vector<int> proj;
    for (Cell c : window) proj.push_back(cnf.annotations.at(c));

    auto models = enumerate(cnf, proj, 3, backend);
    if (models.size() != 2)
        errs.push_back("preimages show " + std::string(models.size() > 2 ? "more than two" : std::to_string(models.size())) +
                       " distinct window contents");
    int signals = 0;
    for (int phase = 0; phase < 3; ++phase) {
        // rows y and y+1 of the window; phase 0 has the upper row alive
        std::vector<Lit> lits = zero;
        for (Cell c : window) {
            bool alive = phase < 2 && c.y == phase;
            int v = cnf.annotations.at(c);
            lits.push_back(alive ? v : -v);
        }
        if (solve(cnf, lits, backend).sat) ++signals;
    }
    if (signals < 2) errs.push_back("fewer than two wire signals are realizable with a zero border");
    for (auto& mdl : models) {
        bool is_signal = false;
        for (int phase = 0; phase < 3 && !is_signal; ++phase) {
            bool match = true;
            for (std::size_t i = 0; i < window.size(); ++i)
                match = match && mdl[i] == (phase < 2 && window[i].y == phase);
            is_signal = match;
        }
        if (!is_signal) {
            errs.push_back("a window content is not a wire signal");
            continue;
        }
        std::vector<Lit> lits = zero;
        for (std::size_t i = 0; i < window.size(); ++i) lits.push_back(mdl[i] ? proj[i] : -proj[i]);
        if (!solve(cnf, lits, backend).sat) errs.push_back("a window content needs live cells on the border");
    }
    return errs;
}

Pattern crossover(const Pattern& a, const Pattern& b, double stickiness, std::mt19937_64& rng) {
    if (!(a.bounds() == b.bounds()) || !a.is_rectangular() || !b.is_rectangular())
        throw Error("crossover needs two rectangular patterns with equal bounds");
    const Rect& r = a.bounds();
    PatternWriter w(r);
    std::bernoulli_distribution coin(0.5), stay(stickiness);
    bool from_a = coin(rng);
    for (int y = r.y0; y < r.y1(); ++y) {
        if (y > r.y0 && !stay(rng)) from_a = !from_a;
        const Pattern& src = from_a ? a : b;
        for (int x = r.x0; x < r.x1(); ++x) w.set({x, y}, src.bit({x, y}));
    }
    return std::move(w).freeze();
}

Pattern mutate(const Pattern& p, const GeneticProblem& prob, std::mt19937_64& rng) {
    const Rect in = prob.interior();
    std::map<Cell, bool> cells;
    std::bernoulli_distribution coin(0.5);
    int count = std::uniform_int_distribution<int>(1, std::max(1, prob.max_rectangles))(rng);
    for (int i = 0; i < count; ++i) {
        int w = std::uniform_int_distribution<int>(1, std::min(prob.max_rectangle_side, in.width))(rng);
        int h = std::uniform_int_distribution<int>(1, std::min(prob.max_rectangle_side, in.height))(rng);
        int x0 = in.x0 + std::uniform_int_distribution<int>(0, in.width - w)(rng);
        int y0 = in.y0 + std::uniform_int_distribution<int>(0, in.height - h)(rng);
        for (Cell c : Rect(x0, y0, w, h).cells()) cells[c] = coin(rng);
    }
    return p.with(cells);
}

double similarity(const Pattern& a, const Pattern& b) {
    if (!(a.bounds() == b.bounds())) return 0;
    std::size_t same = 0, total = 0;
    for (Cell c : a.bounds().cells()) {
        ++total;
        same += a.at(c) == b.at(c);
    }
    return total ? static_cast<double>(same) / static_cast<double>(total) : 1;
}

GeneticResult genetic_charger(const GeneticProblem& prob, const GeneticOptions& opts) {
    prob.validate();
    std::mt19937_64 rng(opts.seed);
    GeneticResult res;
    struct Member {
        Pattern p;
        double s;
    };
    std::vector<Member> pop;
    auto consider = [&](const Pattern& p, std::vector<Member>& into) {
        ++res.evaluations;
        auto s = score_charger(p, prob, opts.backend);
        if (!s.discarded) into.push_back({p, s.value});
    };
    auto record = [&](std::size_t gen) {
        res.generation = gen;
        for (auto& m : pop)
            if (m.s < res.best_score) {
                res.best_score = m.s;
                res.best = m.p;
            }
        if (opts.on_generation) opts.on_generation(gen, res.best_score);
        return res.best_score == 0;
    };

    const Pattern frame = charger_frame(prob);
    for (auto& s : opts.seeds) {
        if (auto errs = frame_errors(s, prob); !errs.empty())
            throw Error("seed pattern violates the charger frame: " + errs.front());
        consider(s, pop);
    }
    {
        std::bernoulli_distribution alive(prob.initial_density);
        std::size_t want = std::min<std::size_t>(prob.population_cap, prob.offspring);
        for (std::size_t t = 0; t < 4 * want && pop.size() < want; ++t) {
            std::map<Cell, bool> cells;
            for (Cell c : prob.interior().cells()) cells[c] = alive(rng);
            consider(frame.with(cells), pop);
        }
    }
    std::stable_sort(pop.begin(), pop.end(), [](const Member& a, const Member& b) { return a.s < b.s; });
    if (record(0)) {
        res.found = res.best;
        return res;
    }

    const std::size_t n_mut = static_cast<std::size_t>(std::lround(prob.mutation_share * static_cast<double>(prob.offspring)));
    for (std::size_t gen = 1; gen <= opts.generations; ++gen) {
        std::vector<Member> all = pop;
        for (std::size_t k = 0; k < prob.offspring; ++k) {
            Pattern child;
            if (pop.empty()) {
                child = mutate(frame, prob, rng);
            } else {
                std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
                if (k < n_mut || pop.size() < 2)
                    child = mutate(pop[pick(rng)].p, prob, rng);
                else
                    child = crossover(pop[pick(rng)].p, pop[pick(rng)].p, prob.stickiness, rng);
            }
            consider(child, all);
        }
        std::stable_sort(all.begin(), all.end(), [](const Member& a, const Member& b) { return a.s < b.s; });
        std::vector<Member> kept;
        for (auto& m : all) {
            if (kept.size() >= prob.population_cap) break;
            int close = 0;
            bool duplicate = false;
            for (auto& k : kept) {
                double sim = similarity(m.p, k.p);
                if (sim == 1) duplicate = true;
                if (sim >= prob.similarity) ++close;
            }
            if (duplicate || close >= prob.similar_limit) continue;
            kept.push_back(m);
        }
        pop = std::move(kept);
        if (record(gen)) {
            res.found = res.best;
            return res;
        }
    }
    return res;
}

}  // namespace lifepre
