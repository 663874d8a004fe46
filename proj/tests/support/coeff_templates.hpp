#pragma once

// Test-only construction of the fitting-matrix family for an explicit
// per-(receiver, sender) coefficient table, instead of the all-ones
// coefficients the solver bakes in. Used to confirm that the all-ones
// reduction preserves the minimum rank.
//
// For a fixed table, entries of column k_j at rows the sums constrain are:
//   - weighted split-group members when their coefficient is nonzero,
//   - unconstrained (free) when their coefficient is zero.
// A wanted row whose holders all carry coefficient zero makes the table
// unsatisfiable (the sum cannot reach 1), so no template exists for it.

#include <optional>
#include <vector>

#include "msic/fitting.hpp"
#include "msic/instance.hpp"

namespace msic_test {

/// coeffs[k-1][j-1] = a_j^k in [0, q)
inline std::optional<msic::FittingTemplate>
build_coeff_template(const msic::Instance& inst, const std::vector<std::vector<int>>& coeffs) {
    using namespace msic;
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

        std::vector<int> group_of_row(inst.n + 1, -1);
        // a wanted row needs at least one nonzero-coefficient holder
        for (int i = 1; i <= inst.n; ++i) {
            if (i != inst.f(k)) continue;
            bool reachable = false;
            for (int j : inst.holders(i))
                if (coeffs[k - 1][j - 1] != 0) reachable = true;
            if (!reachable) return std::nullopt;
        }
        for (int j = 1; j <= t.senders; ++j) {
            auto& col = t.columns[col_index(j, k)];
            col.sender = j;
            col.receiver = k;
            for (int i = 1; i <= inst.n; ++i) {
                if (!inst.sender_has(j, i)) continue;
                int w = coeffs[k - 1][j - 1];
                if (detail::contains(inst.x(k), i) || w == 0) {
                    int var = t.dof();
                    t.var_pos.push_back({k, j, i});
                    col.cells.push_back({i - 1, CellKind::Var, var});
                    continue;
                }
                std::uint8_t target = (i == inst.f(k)) ? 1 : 0;
                int dep = -1; // lowest nonzero-weight holder carries the dependent entry
                for (int h : inst.holders(i))
                    if (coeffs[k - 1][h - 1] != 0) { dep = h; break; }
                if (dep == j) {
                    SplitGroup grp;
                    grp.target = target;
                    grp.dep_weight = static_cast<std::uint8_t>(w);
                    t.groups.push_back(std::move(grp));
                    group_of_row[i] = static_cast<int>(t.groups.size()) - 1;
                    col.cells.push_back({i - 1, CellKind::Dep, group_of_row[i]});
                } else {
                    int var = t.dof();
                    t.var_pos.push_back({k, j, i});
                    t.groups[group_of_row[i]].members.push_back(
                        {var, static_cast<std::uint8_t>(w)});
                    col.cells.push_back({i - 1, CellKind::Var, var});
                }
            }
        }
        blk.var_hi = t.dof();
        t.blocks.push_back(std::move(blk));
    }
    return t;
}

/// Minimum rank over every coefficient table and every completion.
inline int min_rank_over_all_coefficients(const msic::Instance& inst, std::uint64_t budget) {
    const int q = inst.q;
    const int s = inst.sender_count();
    std::uint64_t tables = 1;
    for (int i = 0; i < inst.m * s; ++i) tables *= q;
    int best = inst.n + 1;
    for (std::uint64_t tv = 0; tv < tables; ++tv) {
        std::vector<std::vector<int>> coeffs(inst.m, std::vector<int>(s));
        std::uint64_t rest = tv;
        for (int k = 0; k < inst.m; ++k)
            for (int j = 0; j < s; ++j, rest /= q) coeffs[k][j] = static_cast<int>(rest % q);
        auto t = build_coeff_template(inst, coeffs);
        if (!t) continue;
        auto outcome = msic::block_search(*t, msic::detail::RankState(*t), budget, 1);
        if (outcome.found && outcome.cost < best) best = outcome.cost;
    }
    return best;
}

} // namespace msic_test
