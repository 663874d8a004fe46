#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

#include "msic/errors.hpp"
#include "msic/field_matrix.hpp"
#include "msic/generator.hpp"
#include "msic/instance.hpp"

namespace msic {

// ---------------------------------------------------------------------------
// Symbolic fitting templates.
//
// A template column lists only the positions that can be nonzero; everything
// else is a structural zero. Constrained positions either carry a fixed
// value, a search variable, or the dependent member of a split group whose
// weighted sum must hit the group target.
// ---------------------------------------------------------------------------

enum class CellKind : std::uint8_t { Fixed, Var, Dep };

struct ColCell {
    int row;  // 0-based
    CellKind kind;
    int idx = 0;          // variable index (Var) or group index (Dep)
    std::uint8_t val = 0; // Fixed only
};

struct SplitGroup {
    std::uint8_t target; // 1 for the wanted row, 0 for interference rows
    std::vector<std::pair<int, std::uint8_t>> members; // (variable, weight)
    std::uint8_t dep_weight = 1;
};

struct TemplateColumn {
    int sender;   // 1-based
    int receiver; // 1-based
    std::vector<ColCell> cells; // ascending row
};

/// One receiver's slice of the search: its columns and variable range.
struct Block {
    int receiver;
    std::vector<int> cols;
    int var_lo = 0, var_hi = 0;
};

struct FittingTemplate {
    int n = 0, q = 2, m = 0, senders = 0;
    std::vector<TemplateColumn> columns; // storage order = report/extraction order
    std::vector<SplitGroup> groups;
    std::vector<std::array<int, 3>> var_pos; // (k, j, i), 1-based, ascending
    std::vector<Block> blocks;               // receiver-major search order
    int dof() const { return static_cast<int>(var_pos.size()); }
};

/// Template structure at one (row, column) position, for reports and tests.
struct EntryView {
    enum Kind { StructZero, Fixed, Free, Split } kind;
    int fixed = 0;
    int group = -1; // Split only
};

inline EntryView entry_at(const FittingTemplate& t, int row1, int col) {
    for (const auto& cell : t.columns[col].cells) {
        if (cell.row != row1 - 1) continue;
        switch (cell.kind) {
        case CellKind::Fixed: return {EntryView::Fixed, cell.val, -1};
        case CellKind::Dep: return {EntryView::Split, 0, cell.idx};
        case CellKind::Var:
            for (size_t g = 0; g < t.groups.size(); ++g)
                for (auto [v, w] : t.groups[g].members)
                    if (v == cell.idx) return {EntryView::Split, 0, static_cast<int>(g)};
            return {EntryView::Free, 0, -1};
        }
    }
    return {EntryView::StructZero, 0, -1};
}

namespace detail {

inline std::vector<std::uint8_t> group_values(const FittingTemplate& t,
                                              std::span<const std::uint8_t> asg) {
    std::vector<std::uint8_t> gv(t.groups.size());
    for (size_t g = 0; g < t.groups.size(); ++g) {
        const auto& grp = t.groups[g];
        long long sum = grp.target;
        for (auto [v, w] : grp.members) sum -= static_cast<long long>(w) * asg[v];
        int red = gf::mod(sum, t.q);
        gv[g] = static_cast<std::uint8_t>(grp.dep_weight == 1
                                              ? red
                                              : red * gf::inverse(grp.dep_weight, t.q) % t.q);
    }
    return gv;
}

inline std::vector<std::uint8_t> instantiate_column(const FittingTemplate& t, int col,
                                                    std::span<const std::uint8_t> asg,
                                                    std::span<const std::uint8_t> gv) {
    std::vector<std::uint8_t> out(t.n, 0);
    for (const auto& cell : t.columns[col].cells) {
        switch (cell.kind) {
        case CellKind::Fixed: out[cell.row] = cell.val; break;
        case CellKind::Var: out[cell.row] = asg[cell.idx]; break;
        case CellKind::Dep: out[cell.row] = gv[cell.idx]; break;
        }
    }
    return out;
}

} // namespace detail

/// Full matrix F under a completed assignment.
inline FieldMatrix instantiate(const FittingTemplate& t, std::span<const std::uint8_t> asg) {
    auto gv = detail::group_values(t, asg);
    FieldMatrix f(t.n, static_cast<int>(t.columns.size()), t.q);
    for (int c = 0; c < static_cast<int>(t.columns.size()); ++c) {
        auto col = detail::instantiate_column(t, c, asg, gv);
        for (int r = 0; r < t.n; ++r) f.set(r, c, col[r]);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Multi-sender template (columns stored sender-major, F = [F^(1) | F^(2) | ...]).
// ---------------------------------------------------------------------------

namespace detail {

inline FittingTemplate build_template_impl(const Instance& inst, bool collapse_served) {
    FittingTemplate t;
    t.n = inst.n;
    t.q = inst.q;
    t.m = inst.m;
    t.senders = inst.sender_count();
    t.columns.assign(static_cast<size_t>(t.m) * t.senders, {});
    auto col_index = [&](int j, int k) { return (j - 1) * t.m + (k - 1); };

    for (int k = 1; k <= t.m; ++k) {
        Block blk;
        blk.receiver = k;
        blk.var_lo = t.dof();
        for (int j = 1; j <= t.senders; ++j) blk.cols.push_back(col_index(j, k));

        // a receiver fully served by one sender keeps only that sender's
        // conventional column; the rest collapse to zero
        int solo = 0;
        if (collapse_served) {
            for (int j = 1; j <= t.senders && !solo; ++j) {
                if (!inst.sender_has(j, inst.f(k))) continue;
                bool covers = true;
                for (int i : inst.x(k))
                    if (!inst.sender_has(j, i)) { covers = false; break; }
                if (covers) solo = j;
            }
        }

        std::vector<int> group_of_row(inst.n + 1, -1);
        for (int j = 1; j <= t.senders; ++j) {
            auto& col = t.columns[col_index(j, k)];
            col.sender = j;
            col.receiver = k;
            if (solo && j != solo) continue; // forced all-zero column
            for (int i = 1; i <= inst.n; ++i) {
                if (!inst.sender_has(j, i)) continue;
                if (detail::contains(inst.x(k), i)) {
                    int var = t.dof();
                    t.var_pos.push_back({k, j, i});
                    col.cells.push_back({i - 1, CellKind::Var, var});
                    continue;
                }
                std::uint8_t target = (i == inst.f(k)) ? 1 : 0;
                if (solo) {
                    if (target) col.cells.push_back({i - 1, CellKind::Fixed, 0, target});
                    continue;
                }
                auto holders = inst.holders(i);
                if (holders.size() == 1) {
                    if (target) col.cells.push_back({i - 1, CellKind::Fixed, 0, target});
                    continue;
                }
                if (j == holders.front()) {
                    // lowest-indexed holder carries the dependent entry
                    SplitGroup grp;
                    grp.target = target;
                    t.groups.push_back(std::move(grp));
                    group_of_row[i] = static_cast<int>(t.groups.size()) - 1;
                    col.cells.push_back({i - 1, CellKind::Dep, group_of_row[i]});
                } else {
                    int var = t.dof();
                    t.var_pos.push_back({k, j, i});
                    t.groups[group_of_row[i]].members.push_back({var, 1});
                    col.cells.push_back({i - 1, CellKind::Var, var});
                }
            }
        }
        blk.var_hi = t.dof();
        t.blocks.push_back(std::move(blk));
    }
    return t;
}

} // namespace detail

/// Symbolic n x m|S| fitting matrix for a multi-sender instance, with the
/// per-receiver sum coefficients fixed to 1.
inline FittingTemplate build_template(const Instance& inst) {
    return detail::build_template_impl(inst, false);
}

/// Zeroes every column a single fully-capable sender makes redundant.
inline FittingTemplate collapse_single_sender_receivers(const Instance& inst, const FittingTemplate&) {
    return detail::build_template_impl(inst, true);
}

// ---------------------------------------------------------------------------
// Deterministic exhaustive search over template assignments.
//
// Assignments are enumerated in lexicographic order of the variable vector
// (variables ordered by (receiver, sender, row)). Receiver blocks complete
// whole columns, so a prefix cost is a lower bound for the subtree and
// subtrees that cannot strictly improve are skipped. Workers own disjoint
// seed sets and share only a monotone best-cost bound; the final reduction
// orders by (cost, assignment), so the outcome is identical for any worker
// count.
// ---------------------------------------------------------------------------

struct SearchOutcome {
    bool found = false;
    int cost = 0;
    std::vector<std::uint8_t> assignment;
};

namespace detail {

inline std::uint64_t pow_checked(int q, int e, std::uint64_t cap) {
    std::uint64_t v = 1;
    for (int i = 0; i < e; ++i) {
        if (v > cap / q) return cap + 1;
        v *= q;
    }
    return v;
}

template <class State>
class BlockSearch {
public:
    BlockSearch(const FittingTemplate& t, const State& init, int workers)
        : t_(t), init_(init), workers_(workers < 1 ? 1 : workers) {}

    SearchOutcome run() {
        global_best_.store(INT32_MAX, std::memory_order_relaxed);

        // Fix enough leading blocks that every worker gets several seeds.
        std::uint64_t want = static_cast<std::uint64_t>(workers_) * 8;
        std::uint64_t combos = 1;
        prefix_blocks_ = 0;
        while (prefix_blocks_ < static_cast<int>(t_.blocks.size()) && combos < want) {
            const auto& b = t_.blocks[prefix_blocks_];
            combos *= pow_checked(t_.q, b.var_hi - b.var_lo, UINT64_MAX / 2);
            ++prefix_blocks_;
        }
        seed_count_ = combos;

        if (workers_ == 1) {
            Local loc;
            run_worker(0, loc);
            return loc.out;
        }
        std::vector<Local> locals(workers_);
        std::vector<std::thread> threads;
        for (int w = 0; w < workers_; ++w)
            threads.emplace_back([this, w, &locals] { run_worker(w, locals[w]); });
        for (auto& th : threads) th.join();
        SearchOutcome best;
        for (const auto& loc : locals) {
            if (!loc.out.found) continue;
            if (!best.found || loc.out.cost < best.cost ||
                (loc.out.cost == best.cost && loc.out.assignment < best.assignment))
                best = loc.out;
        }
        return best;
    }

private:
    struct Local {
        SearchOutcome out;
        int best = INT32_MAX;
    };

    void run_worker(int w, Local& loc) {
        std::vector<std::uint8_t> asg(t_.dof(), 0);
        for (std::uint64_t seed = w; seed < seed_count_;
             seed += static_cast<std::uint64_t>(workers_)) {
            // decode the seed into the prefix blocks' variable values
            std::uint64_t rest = seed;
            for (int b = prefix_blocks_ - 1; b >= 0; --b) {
                const auto& blk = t_.blocks[b];
                std::uint64_t span = pow_checked(t_.q, blk.var_hi - blk.var_lo, UINT64_MAX / 2);
                std::uint64_t combo = rest % span;
                rest /= span;
                for (int v = blk.var_hi - 1; v >= blk.var_lo; --v) {
                    asg[v] = static_cast<std::uint8_t>(combo % t_.q);
                    combo /= t_.q;
                }
            }
            descend_prefix(0, asg, init_, loc);
        }
    }

    // Applies the already-decoded values of prefix blocks one block at a time
    // so pruning still happens inside the prefix.
    void descend_prefix(int b, std::vector<std::uint8_t>& asg, const State& state, Local& loc) {
        if (b == prefix_blocks_) {
            dfs(b, asg, state, loc);
            return;
        }
        State next = state;
        add_block(next, b, asg);
        if (prune(next.cost(), loc, b + 1)) return;
        descend_prefix(b + 1, asg, next, loc);
    }

    void dfs(int b, std::vector<std::uint8_t>& asg, const State& state, Local& loc) {
        if (b == static_cast<int>(t_.blocks.size())) {
            int cost = state.cost();
            if (cost < loc.best) {
                loc.best = cost;
                loc.out = {true, cost, asg};
                int cur = global_best_.load(std::memory_order_relaxed);
                while (cost < cur &&
                       !global_best_.compare_exchange_weak(cur, cost, std::memory_order_relaxed))
                    ;
            }
            return;
        }
        const auto& blk = t_.blocks[b];
        const int nv = blk.var_hi - blk.var_lo;
        std::fill(asg.begin() + blk.var_lo, asg.begin() + blk.var_hi, 0);
        while (true) {
            State next = state;
            add_block(next, b, asg);
            if (!prune(next.cost(), loc, b + 1)) dfs(b + 1, asg, next, loc);
            // odometer over the block, last variable fastest
            int v = nv - 1;
            while (v >= 0 && asg[blk.var_lo + v] == t_.q - 1) asg[blk.var_lo + v--] = 0;
            if (v < 0) break;
            ++asg[blk.var_lo + v];
        }
    }

    bool prune(int cost, const Local& loc, int blocks_done) const {
        if (blocks_done == static_cast<int>(t_.blocks.size())) return false; // full: score it
        if (cost >= loc.best) return true;
        return cost > global_best_.load(std::memory_order_relaxed);
    }

    void add_block(State& state, int b, std::span<const std::uint8_t> asg) const {
        auto gv = group_values(t_, asg);
        for (int c : t_.blocks[b].cols)
            state.add_column(instantiate_column(t_, c, asg, gv), c);
    }

    const FittingTemplate& t_;
    State init_;
    int workers_;
    int prefix_blocks_ = 0;
    std::uint64_t seed_count_ = 1;
    std::atomic<int> global_best_{INT32_MAX};
};

struct RankState {
    RankAccumulator acc;
    explicit RankState(const FittingTemplate& t) : acc(t.n, t.q) {}
    void add_column(const std::vector<std::uint8_t>& col, int) { acc.add(col); }
    int cost() const { return acc.rank(); }
};

} // namespace detail

template <class State>
SearchOutcome block_search(const FittingTemplate& t, const State& init, std::uint64_t budget,
                           int workers) {
    if (t.dof() >= 40 || detail::pow_checked(t.q, t.dof(), budget) > budget)
        throw BudgetExceeded(t.dof(), budget);
    detail::BlockSearch<State> search(t, init, workers);
    return search.run();
}

// ---------------------------------------------------------------------------
// Minrank solver (optimal multi-sender codelength).
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 24;

struct MinrankResult {
    int n_opt = 0;
    std::vector<std::uint8_t> assignment;
    Generator gen;
};

/// Keeps the leftmost-greedy independent columns of the instantiated matrix;
/// each survivor is transmitted by the sender owning its submatrix.
inline Generator extract_generator(const Instance& inst, const FittingTemplate& t,
                                   std::span<const std::uint8_t> asg) {
    FieldMatrix f = instantiate(t, asg);
    Generator gen;
    gen.n = inst.n;
    gen.q = inst.q;
    gen.cols.resize(inst.sender_count());
    for (int c : independent_columns(f))
        gen.cols[t.columns[c].sender - 1].push_back(f.column(c));
    return gen;
}

inline MinrankResult minrank_search(const Instance& inst, std::uint64_t budget = kDefaultBudget,
                                    int workers = 1) {
    FittingTemplate t = build_template(inst);
    auto outcome = block_search(t, detail::RankState(t), budget, workers);
    MinrankResult res;
    res.n_opt = outcome.cost;
    res.assignment = std::move(outcome.assignment);
    res.gen = extract_generator(inst, t, res.assignment);
    return res;
}

} // namespace msic
