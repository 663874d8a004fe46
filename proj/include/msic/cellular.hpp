#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "msic/errors.hpp"
#include "msic/field_matrix.hpp"
#include "msic/fitting.hpp"
#include "msic/generator.hpp"
#include "msic/instance.hpp"
#include "msic/oracle.hpp"
#include "msic/structure.hpp"

namespace msic {

/// Coverage-restricted receivers keep only side information their own sender
/// can encode; receivers hearing both senders are untouched.
inline Instance prune_side_info(const Instance& inst) {
    if (!inst.coverage) throw ValidationError("prune_side_info requires coverage");
    Instance out = inst;
    for (int k : inst.coverage->r1)
        out.side_info[k - 1] = detail::intersect(inst.x(k), inst.msg_set(1));
    for (int k : inst.coverage->r2)
        out.side_info[k - 1] = detail::intersect(inst.x(k), inst.msg_set(2));
    return out;
}

/// Fitting template for the cellular case: one conventional column per
/// restricted receiver, a column pair per fully-covered receiver. Columns are
/// stored block-major: F^(1), F^(2), then the F^(3) pairs.
struct CellularTemplate {
    FittingTemplate f;
    std::vector<int> block_of_col; // 1, 2, or 3
};

/// nullopt when some restricted receiver wants a message its audible sender
/// does not hold; no fitting matrix (or code) exists then. Side information
/// is pruned internally, so passing an unpruned instance is harmless.
inline std::optional<CellularTemplate> build_cellular_template(const Instance& raw) {
    if (!raw.coverage) throw ValidationError("cellular template requires coverage");
    if (!coverage_infeasible_receivers(raw).empty()) return std::nullopt;
    Instance inst = prune_side_info(raw);

    CellularTemplate ct;
    FittingTemplate& t = ct.f;
    t.n = inst.n;
    t.q = inst.q;
    t.m = inst.m;
    t.senders = 2;

    struct Pending {
        TemplateColumn col;
        int block;
    };
    std::vector<std::vector<Pending>> by_block(3);

    for (int k = 1; k <= inst.m; ++k) {
        Block blk;
        blk.receiver = k;
        blk.var_lo = t.dof();
        int cls = inst.coverage->in_r1(k) ? 1 : inst.coverage->in_r2(k) ? 2 : 3;
        if (cls != 3) {
            // conventional single-sender pattern over the pruned side info
            TemplateColumn col;
            col.sender = cls;
            col.receiver = k;
            for (int i = 1; i <= inst.n; ++i) {
                if (i == inst.f(k)) {
                    col.cells.push_back({i - 1, CellKind::Fixed, 0, 1});
                } else if (detail::contains(inst.x(k), i)) {
                    int var = t.dof();
                    t.var_pos.push_back({k, cls, i});
                    col.cells.push_back({i - 1, CellKind::Var, var});
                }
            }
            by_block[cls - 1].push_back({std::move(col), cls});
        } else {
            std::vector<int> group_of_row(inst.n + 1, -1);
            for (int j = 1; j <= 2; ++j) {
                TemplateColumn col;
                col.sender = j;
                col.receiver = k;
                for (int i = 1; i <= inst.n; ++i) {
                    if (!inst.sender_has(j, i)) continue;
                    if (detail::contains(inst.x(k), i)) {
                        int var = t.dof();
                        t.var_pos.push_back({k, j, i});
                        col.cells.push_back({i - 1, CellKind::Var, var});
                        continue;
                    }
                    std::uint8_t target = (i == inst.f(k)) ? 1 : 0;
                    bool both = inst.sender_has(1, i) && inst.sender_has(2, i);
                    if (!both) {
                        if (target) col.cells.push_back({i - 1, CellKind::Fixed, 0, target});
                        continue;
                    }
                    if (j == 1) {
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
                by_block[2].push_back({std::move(col), 3});
            }
        }
        blk.var_hi = t.dof();
        t.blocks.push_back(std::move(blk));
    }

    // Flatten to storage order and point each receiver block at its columns.
    std::vector<std::vector<int>> cols_of_receiver(inst.m);
    for (const auto& cls : by_block)
        for (const auto& p : cls) {
            cols_of_receiver[p.col.receiver - 1].push_back(static_cast<int>(t.columns.size()));
            t.columns.push_back(p.col);
            ct.block_of_col.push_back(p.block);
        }
    for (auto& blk : t.blocks) blk.cols = cols_of_receiver[blk.receiver - 1];
    return ct;
}

/// The three instantiated submatrices, in block order.
inline std::array<FieldMatrix, 3> instantiate_blocks(const CellularTemplate& ct,
                                                     std::span<const std::uint8_t> asg) {
    FieldMatrix full = instantiate(ct.f, asg);
    std::array<std::vector<int>, 3> cols;
    for (size_t c = 0; c < ct.block_of_col.size(); ++c)
        cols[ct.block_of_col[c] - 1].push_back(static_cast<int>(c));
    std::array<FieldMatrix, 3> out{FieldMatrix(ct.f.n, 0, ct.f.q),
                                   FieldMatrix(ct.f.n, 0, ct.f.q),
                                   FieldMatrix(ct.f.n, 0, ct.f.q)};
    for (int b = 0; b < 3; ++b)
        for (int c : cols[b]) out[b].append_column(full.column(c));
    return out;
}

struct CellularObjective {
    SubspaceDims dims;
    int objective = 0;
};

/// dim(V1+V2+V3) + dim(V1 ∩ V2); also checks the inclusion-exclusion form
/// d1+d2+d3-dim(V3 ∩ (V1+V2)).
inline CellularObjective cellular_objective(const CellularTemplate& ct,
                                            std::span<const std::uint8_t> asg) {
    auto blocks = instantiate_blocks(ct, asg);
    CellularObjective out;
    out.dims = subspace_dims(blocks[0], blocks[1], blocks[2]);
    out.objective = out.dims.d123 + out.dims.dint12;
    int alt = out.dims.d1 + out.dims.d2 + out.dims.d3 - out.dims.dint3_12;
    if (alt != out.objective)
        throw Error("objective identity violated; dimension bookkeeping is broken");
    return out;
}

/// Sender i transmits an independent column basis of F^(i); F^(3) columns are
/// appended greedily whenever they extend the overall span, each sent by the
/// sender owning its support.
inline Generator extract_cellular_generator(const CellularTemplate& ct,
                                            std::span<const std::uint8_t> asg) {
    FieldMatrix full = instantiate(ct.f, asg);
    Generator gen;
    gen.n = ct.f.n;
    gen.q = ct.f.q;
    gen.cols.resize(2);
    RankAccumulator everything(ct.f.n, ct.f.q);
    for (int pass = 1; pass <= 3; ++pass) {
        RankAccumulator own(ct.f.n, ct.f.q);
        for (size_t c = 0; c < ct.block_of_col.size(); ++c) {
            if (ct.block_of_col[c] != pass) continue;
            auto col = full.column(static_cast<int>(c));
            if (pass < 3) {
                if (!own.add(col)) continue;
                everything.add(col);
                gen.cols[ct.f.columns[c].sender - 1].push_back(std::move(col));
            } else if (everything.add(col)) {
                gen.cols[ct.f.columns[c].sender - 1].push_back(std::move(col));
            }
        }
    }
    return gen;
}

namespace detail {

struct CellularState {
    RankAccumulator a1, a2, a12, a123;
    const std::vector<int>* block_of_col;
    CellularState(const FittingTemplate& t, const std::vector<int>& blocks)
        : a1(t.n, t.q), a2(t.n, t.q), a12(t.n, t.q), a123(t.n, t.q), block_of_col(&blocks) {}
    void add_column(const std::vector<std::uint8_t>& col, int c) {
        int b = (*block_of_col)[c];
        if (b == 1) a1.add(col);
        if (b == 2) a2.add(col);
        if (b != 3) a12.add(col);
        a123.add(col);
    }
    int cost() const { return a123.rank() + a1.rank() + a2.rank() - a12.rank(); }
};

} // namespace detail

struct CellularResult {
    int n_opt = 0;
    std::vector<std::uint8_t> assignment;
    Generator gen;
    SubspaceDims dims;
};

/// Optimal cellular codelength by exhaustive minimization of the subspace
/// objective. nullopt when the instance is infeasible under its coverage.
inline std::optional<CellularResult> cellular_minsearch(const Instance& inst,
                                                        std::uint64_t budget = kDefaultBudget,
                                                        int workers = 1) {
    auto ct = build_cellular_template(inst);
    if (!ct) return std::nullopt;
    auto outcome =
        block_search(ct->f, detail::CellularState(ct->f, ct->block_of_col), budget, workers);
    CellularResult res;
    res.n_opt = outcome.cost;
    res.assignment = std::move(outcome.assignment);
    res.gen = extract_cellular_generator(*ct, res.assignment);
    res.dims = cellular_objective(*ct, res.assignment).dims;
    return res;
}

/// Decodability under coverage; delegates to the shared checker.
inline std::vector<bool> verify_cellular_decoding(const Instance& inst, const Generator& gen) {
    if (!inst.coverage) throw ValidationError("verify_cellular_decoding requires coverage");
    return verify_decoding(inst, gen);
}

// ---------------------------------------------------------------------------
// Structural properties under coverage.
// ---------------------------------------------------------------------------

/// A receiver set in which every member's message is side information of some
/// member (receivers and messages coincide here).
struct HSubgraph {
    std::vector<int> members;
    bool has_r1 = false;
    bool has_r2 = false;
};

inline bool detect_H(const Instance& inst, const std::vector<int>& members) {
    if (members.empty()) return false;
    for (int i : members) {
        bool covered = false;
        for (int k : members)
            if (k != i && detail::contains(inst.x(k), i)) { covered = true; break; }
        if (!covered) return false;
    }
    return true;
}

inline std::vector<HSubgraph> enumerate_H(const Instance& inst, int cap = kDefaultSubsetCap) {
    detail::check_subset_cap(inst, cap);
    if (!inst.coverage) throw ValidationError("H enumeration requires coverage");
    std::vector<HSubgraph> out;
    for (std::uint64_t b = 1; b < (std::uint64_t{1} << inst.n); ++b) {
        auto members = detail::mask_to_set(b);
        if (!detect_H(inst, members)) continue;
        HSubgraph h;
        h.members = std::move(members);
        for (int k : h.members) {
            if (inst.coverage->in_r1(k)) h.has_r1 = true;
            if (inst.coverage->in_r2(k)) h.has_r2 = true;
        }
        out.push_back(std::move(h));
    }
    return out;
}

/// Combinatorial test for the existence of a fitting matrix with
/// dim(V1 ∩ V2) != 0: an H made of restricted receivers from both classes
/// whose columns can overlap in a common 1.
inline bool restricted_overlap_possible(const Instance& raw, int cap = kDefaultSubsetCap) {
    if (!raw.coverage) throw ValidationError("restricted_overlap_possible requires coverage");
    detail::check_subset_cap(raw, cap);
    Instance inst = prune_side_info(raw);
    const auto& cov = *inst.coverage;
    std::uint64_t restricted = detail::to_mask(cov.r1) | detail::to_mask(cov.r2);
    for (std::uint64_t b = 1; b < (std::uint64_t{1} << inst.n); ++b) {
        if (b & ~restricted) continue;
        auto members = detail::mask_to_set(b);
        bool has1 = false, has2 = false;
        for (int k : members) {
            if (cov.in_r1(k)) has1 = true;
            if (cov.in_r2(k)) has2 = true;
        }
        if (!has1 || !has2) continue;
        if (!detect_H(inst, members)) continue;
        for (int k1 : members) {
            if (!cov.in_r1(k1)) continue;
            for (int k2 : members) {
                if (!cov.in_r2(k2)) continue;
                // cross-class side information, or a shared known message
                if (detail::contains(inst.x(k1), k2) || detail::contains(inst.x(k2), k1))
                    return true;
                if (!detail::intersect(inst.x(k1), inst.x(k2)).empty()) return true;
            }
        }
    }
    return false;
}

enum class IntersectionKind { V1CapV2, V3CapV12 };

/// Exhaustive ground truth: does any completed template reach a nonzero
/// dimension of the named intersection?
inline bool exists_nonzero_intersection(const Instance& inst, IntersectionKind which,
                                        std::uint64_t budget = kDefaultBudget) {
    auto ct = build_cellular_template(inst);
    if (!ct) throw ValidationError("instance is infeasible under its coverage");
    const FittingTemplate& t = ct->f;
    if (t.dof() >= 40 || detail::pow_checked(t.q, t.dof(), budget) > budget)
        throw BudgetExceeded(t.dof(), budget);

    struct Probe {
        RankAccumulator a, b, ab; // dim(a)+dim(b)-dim(ab) is the intersection
    };
    std::vector<std::uint8_t> asg(t.dof(), 0);
    Probe init{RankAccumulator(t.n, t.q), RankAccumulator(t.n, t.q), RankAccumulator(t.n, t.q)};

    std::function<bool(int, const Probe&)> walk = [&](int bi, const Probe& state) -> bool {
        if (state.a.rank() + state.b.rank() - state.ab.rank() > 0) return true;
        if (bi == static_cast<int>(t.blocks.size())) return false;
        const auto& blk = t.blocks[bi];
        const int nv = blk.var_hi - blk.var_lo;
        std::fill(asg.begin() + blk.var_lo, asg.begin() + blk.var_hi, 0);
        while (true) {
            Probe next = state;
            auto gv = detail::group_values(t, asg);
            for (int c : blk.cols) {
                auto col = detail::instantiate_column(t, c, asg, gv);
                int cb = ct->block_of_col[c];
                if (which == IntersectionKind::V1CapV2) {
                    if (cb == 1) { next.a.add(col); next.ab.add(col); }
                    if (cb == 2) { next.b.add(col); next.ab.add(col); }
                } else {
                    if (cb == 3) next.a.add(col);
                    else next.b.add(col);
                    next.ab.add(col);
                }
            }
            if (walk(bi + 1, next)) return true;
            int v = nv - 1;
            while (v >= 0 && asg[blk.var_lo + v] == t.q - 1) asg[blk.var_lo + v--] = 0;
            if (v < 0) break;
            ++asg[blk.var_lo + v];
        }
        return false;
    };
    return walk(0, init);
}

// ---------------------------------------------------------------------------
// Cycle classification (directed cycles of the pruned side-information graph).
// ---------------------------------------------------------------------------

struct ClassifiedCycle {
    std::vector<int> nodes; // in traversal order, starting at the smallest
    bool message_connected = false;
    bool reducible = false;
    std::string reason;
};

inline std::vector<std::vector<int>> directed_cycles(const Instance& inst,
                                                     int cap = kDefaultSubsetCap,
                                                     std::uint64_t max_cycles = 100000) {
    detail::check_subset_cap(inst, cap);
    std::vector<std::vector<int>> cycles;
    std::vector<int> path;
    std::vector<bool> on_path(inst.n + 1, false);
    std::function<void(int, int)> dfs = [&](int root, int at) {
        for (int j : inst.x(at)) {
            if (j == root && path.size() >= 2) {
                cycles.push_back(path);
                if (cycles.size() > max_cycles) throw CapExceeded("too many directed cycles");
                continue;
            }
            if (j <= root || on_path[j]) continue;
            on_path[j] = true;
            path.push_back(j);
            dfs(root, j);
            path.pop_back();
            on_path[j] = false;
        }
    };
    for (int root = 1; root <= inst.n; ++root) {
        path = {root};
        on_path.assign(inst.n + 1, false);
        on_path[root] = true;
        dfs(root, root);
    }
    return cycles;
}

/// A cycle can shorten the code unless it is
/// message-disconnected or lives entirely on restricted receivers of both
/// classes.
inline std::vector<ClassifiedCycle> classify_cycles(const Instance& raw,
                                                    int cap = kDefaultSubsetCap) {
    if (!raw.coverage) throw ValidationError("cycle classification requires coverage");
    Instance inst = prune_side_info(raw);
    MessageGraph u = build_message_graph(inst);
    const auto& cov = *inst.coverage;
    std::vector<ClassifiedCycle> out;
    for (auto& nodes : directed_cycles(inst, cap)) {
        ClassifiedCycle cc;
        auto sorted = detail::sorted_unique(nodes);
        cc.message_connected = is_message_connected(sorted, u);
        bool has1 = false, has2 = false, hasc = false;
        for (int k : nodes) {
            if (cov.in_r1(k)) has1 = true;
            if (cov.in_r2(k)) has2 = true;
            if (cov.in_rc(k)) hasc = true;
        }
        if (!cc.message_connected) {
            cc.reducible = false;
            cc.reason = "message-disconnected";
        } else if (hasc) {
            cc.reducible = true;
            cc.reason = "contains-fully-covered-receiver";
        } else if (has1 && has2) {
            cc.reducible = false;
            cc.reason = "spans-both-restricted-classes";
        } else {
            cc.reducible = true;
            cc.reason = "within-one-restricted-class";
        }
        cc.nodes = std::move(nodes);
        out.push_back(std::move(cc));
    }
    return out;
}

/// The cycle itself as a standalone cellular instance: its nodes become the
/// messages and receivers, and each member's side information is exactly its
/// successor along the cycle. In-set side information that is not a cycle
/// edge is dropped, since the classification speaks about what the cycle
/// alone can achieve.
inline Instance induced_cycle_instance(const Instance& raw, const std::vector<int>& nodes) {
    Instance inst = raw.coverage ? prune_side_info(raw) : raw;
    const int t = static_cast<int>(nodes.size());
    auto keep = detail::sorted_unique(nodes);
    std::vector<int> newid(inst.n + 1, 0);
    for (size_t i = 0; i < keep.size(); ++i) newid[keep[i]] = static_cast<int>(i) + 1;
    std::vector<int> succ(inst.n + 1, 0);
    for (int a = 0; a < t; ++a) succ[nodes[a]] = nodes[(a + 1) % t];
    Instance out;
    out.q = inst.q;
    out.n = static_cast<int>(keep.size());
    out.m = out.n;
    for (int k : keep) {
        out.wants.push_back(newid[k]);
        out.side_info.push_back({newid[succ[k]]});
    }
    for (const auto& ms : inst.senders) {
        std::vector<int> s;
        for (int v : ms)
            if (newid[v]) s.push_back(newid[v]);
        out.senders.push_back(std::move(s));
    }
    if (inst.coverage) {
        CoverageProfile cov;
        for (int k : keep) {
            if (inst.coverage->in_r1(k)) cov.r1.push_back(newid[k]);
            else if (inst.coverage->in_r2(k)) cov.r2.push_back(newid[k]);
            else cov.rc.push_back(newid[k]);
        }
        out.coverage = std::move(cov);
    }
    return out;
}

/// Explicit length |cycle|-1 code on the induced subinstance, following the
/// constructive halves of the cycle classification: restricted members send
/// wanted-plus-successor pairs, the rest of a spanning tree is filled in with
/// shared-sender pair sums.
inline Generator reducible_cycle_code(const Instance& raw, const std::vector<int>& nodes) {
    Instance sub = induced_cycle_instance(raw, nodes);
    const auto& cov = *sub.coverage;
    auto keep = detail::sorted_unique(nodes);
    std::vector<int> newid(raw.n + 1, 0);
    for (size_t i = 0; i < keep.size(); ++i) newid[keep[i]] = static_cast<int>(i) + 1;

    const int t = static_cast<int>(nodes.size());
    Generator gen;
    gen.n = sub.n;
    gen.q = sub.q;
    gen.cols.resize(2);
    auto pair_column = [&](int i, int j, int sender) {
        std::vector<std::uint8_t> col(sub.n, 0);
        col[i - 1] = 1;
        col[j - 1] = 1;
        gen.cols[sender - 1].push_back(std::move(col));
    };

    bool hasc = false;
    for (int k = 1; k <= sub.m; ++k)
        if (cov.in_rc(k)) hasc = true;

    if (!hasc) {
        // entire cycle inside one restricted class: drop the closing edge
        int sender = cov.in_r1(newid[nodes[0]]) ? 1 : 2;
        for (int a = 0; a + 1 < t; ++a)
            pair_column(newid[nodes[a]], newid[nodes[a + 1]], sender);
        return gen;
    }

    // restricted members transmit their own pair; then join the segments
    // into a spanning tree with shared-sender edges
    std::vector<int> comp(sub.n + 1);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int v) { return comp[v] == v ? v : comp[v] = find(comp[v]); };
    for (int a = 0; a < t; ++a) {
        int k = newid[nodes[a]];
        int succ = newid[nodes[(a + 1) % t]];
        if (cov.in_rc(k)) continue;
        int sender = cov.in_r1(k) ? 1 : 2;
        pair_column(k, succ, sender);
        comp[find(k)] = find(succ);
    }
    MessageGraph u = build_message_graph(sub);
    auto pair_sender = [&](int i, int j) {
        for (int s = 1; s <= sub.sender_count(); ++s)
            if (sub.sender_has(s, i) && sub.sender_has(s, j)) return s;
        throw Error("no sender holds both tree endpoints");
    };
    auto connected = [&] {
        for (int v = 2; v <= sub.n; ++v)
            if (find(v) != find(1)) return false;
        return true;
    };
    while (!connected()) {
        bool progress = false;
        for (int i = 1; i <= sub.n && !progress; ++i)
            for (int j = i + 1; j <= sub.n && !progress; ++j) {
                if (!u.edge(i, j) || find(i) == find(j)) continue;
                pair_column(i, j, pair_sender(i, j));
                comp[find(i)] = find(j);
                progress = true;
            }
        if (!progress) throw Error("cycle message graph is not connectable");
    }
    return gen;
}

// ---------------------------------------------------------------------------
// Reductions to the unrestricted problem.
// ---------------------------------------------------------------------------

struct CoverageEqualityCertificate {
    int n_opt = 0; // coverage-restricted optimum == unrestricted optimum
};

/// When no fitting matrix can reach dim(V1 ∩ V2) != 0, coverage costs
/// nothing: both solvers must agree. Returns nothing when the condition
/// fails; throws if the agreement it certifies does not hold.
inline std::optional<CoverageEqualityCertificate> coverage_penalty_free(const Instance& raw,
                                                   std::uint64_t budget = kDefaultBudget) {
    if (!raw.coverage) throw ValidationError("coverage_penalty_free requires coverage");
    if (!coverage_infeasible_receivers(raw).empty()) return std::nullopt;
    if (exists_nonzero_intersection(raw, IntersectionKind::V1CapV2, budget))
        return std::nullopt;
    Instance pruned = prune_side_info(raw);
    auto cell = cellular_minsearch(pruned, budget);
    Instance flat = pruned;
    flat.coverage.reset();
    int multi = minrank_search(flat, budget).n_opt;
    if (!cell || cell->n_opt != multi)
        throw Error("restricted and unrestricted optima differ despite dim(V1 cap V2) = 0");
    return CoverageEqualityCertificate{multi};
}

struct CoverageDecomposition {
    int n_opt = 0;
    int n_r1 = 0, n_r2 = 0, n_rc = 0;
};

namespace detail {

/// Single-sender subproblem on the given receivers, over the messages of one
/// sender (reindexed).
inline Instance restricted_subproblem(const Instance& inst, const std::vector<int>& receivers,
                                      int sender) {
    const auto& msgs = inst.msg_set(sender);
    std::vector<int> newid(inst.n + 1, 0);
    for (size_t i = 0; i < msgs.size(); ++i) newid[msgs[i]] = static_cast<int>(i) + 1;
    Instance out;
    out.q = inst.q;
    out.n = static_cast<int>(msgs.size());
    out.m = static_cast<int>(receivers.size());
    for (int k : receivers) {
        out.wants.push_back(newid[inst.f(k)]);
        std::vector<int> x;
        for (int s : inst.x(k))
            if (newid[s]) x.push_back(newid[s]);
        out.side_info.push_back(std::move(x));
    }
    std::vector<int> all(out.n);
    std::iota(all.begin(), all.end(), 1);
    out.senders.push_back(std::move(all));
    return out;
}

/// Two-sender subproblem restricted to the fully-covered receivers.
inline Instance shared_subproblem(const Instance& inst, const std::vector<int>& receivers) {
    Instance out;
    out.q = inst.q;
    out.n = inst.n;
    out.m = static_cast<int>(receivers.size());
    for (int k : receivers) {
        out.wants.push_back(inst.f(k));
        out.side_info.push_back(inst.x(k));
    }
    out.senders = inst.senders;
    return out;
}

} // namespace detail

/// When no fitting matrix can reach dim(V3 ∩ (V1+V2)) != 0, the optimum
/// splits into the three per-coverage-class subproblems.
inline std::optional<CoverageDecomposition> decompose_by_coverage(const Instance& raw,
                                                         std::uint64_t budget = kDefaultBudget) {
    if (!raw.coverage) throw ValidationError("decompose_by_coverage requires coverage");
    if (!coverage_infeasible_receivers(raw).empty()) return std::nullopt;
    if (exists_nonzero_intersection(raw, IntersectionKind::V3CapV12, budget))
        return std::nullopt;
    Instance pruned = prune_side_info(raw);
    CoverageDecomposition d;
    d.n_r1 = pruned.coverage->r1.empty()
                 ? 0
                 : minrank_search(detail::restricted_subproblem(pruned, pruned.coverage->r1, 1),
                                  budget)
                       .n_opt;
    d.n_r2 = pruned.coverage->r2.empty()
                 ? 0
                 : minrank_search(detail::restricted_subproblem(pruned, pruned.coverage->r2, 2),
                                  budget)
                       .n_opt;
    d.n_rc = pruned.coverage->rc.empty()
                 ? 0
                 : minrank_search(detail::shared_subproblem(pruned, pruned.coverage->rc), budget)
                       .n_opt;
    d.n_opt = d.n_r1 + d.n_r2 + d.n_rc;
    auto cell = cellular_minsearch(pruned, budget);
    if (!cell || cell->n_opt != d.n_opt)
        throw Error("subproblem decomposition disagrees with the direct search");
    return d;
}

} // namespace msic
