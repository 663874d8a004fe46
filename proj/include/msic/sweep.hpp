#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "msic/cellular.hpp"
#include "msic/fitting.hpp"
#include "msic/instance.hpp"
#include "msic/oracle.hpp"
#include "msic/structure.hpp"

namespace msic {

// ---------------------------------------------------------------------------
// Exhaustive enumeration of desk-size instances (q = 2, two senders, m = n,
// receiver k wants message k) and solver/property equivalence sweeps over them.
// ---------------------------------------------------------------------------

/// Every sender cover (each message with sender 1, sender 2, or both) crossed
/// with every side-information choice.
inline void enumerate_multisender_instances(int n,
                                            const std::function<void(const Instance&)>& fn) {
    std::uint64_t covers = 1;
    for (int i = 0; i < n; ++i) covers *= 3;
    for (std::uint64_t cv = 0; cv < covers; ++cv) {
        Instance base;
        base.q = 2;
        base.n = base.m = n;
        base.senders.assign(2, {});
        std::uint64_t c = cv;
        for (int i = 1; i <= n; ++i, c /= 3) {
            int where = static_cast<int>(c % 3);
            if (where != 1) base.senders[0].push_back(i);
            if (where != 0) base.senders[1].push_back(i);
        }
        for (int k = 1; k <= n; ++k) base.wants.push_back(k);
        base.side_info.assign(n, {});

        std::uint64_t side_total = 1;
        for (int k = 0; k < n; ++k) side_total <<= (n - 1);
        for (std::uint64_t sv = 0; sv < side_total; ++sv) {
            Instance inst = base;
            std::uint64_t s = sv;
            for (int k = 1; k <= n; ++k) {
                std::uint64_t bits = s & ((std::uint64_t{1} << (n - 1)) - 1);
                s >>= (n - 1);
                std::vector<int> x;
                int slot = 0;
                for (int i = 1; i <= n; ++i) {
                    if (i == k) continue;
                    if ((bits >> slot) & 1) x.push_back(i);
                    ++slot;
                }
                inst.side_info[k - 1] = std::move(x);
            }
            fn(inst);
        }
    }
}

/// Cellular enumeration: additionally crosses every coverage partition.
/// With `pruned_only`, side information is drawn inside the audible sender's
/// message set; otherwise arbitrary (cross-coverage) side information occurs.
inline void enumerate_cellular_instances(int n, bool pruned_only,
                                         const std::function<void(const Instance&)>& fn) {
    std::uint64_t pow3 = 1;
    for (int i = 0; i < n; ++i) pow3 *= 3;
    for (std::uint64_t cv = 0; cv < pow3; ++cv) {
        std::vector<std::vector<int>> senders(2);
        std::uint64_t c = cv;
        for (int i = 1; i <= n; ++i, c /= 3) {
            int where = static_cast<int>(c % 3);
            if (where != 1) senders[0].push_back(i);
            if (where != 0) senders[1].push_back(i);
        }
        for (std::uint64_t pv = 0; pv < pow3; ++pv) {
            CoverageProfile cov;
            std::uint64_t p = pv;
            for (int k = 1; k <= n; ++k, p /= 3) {
                int cls = static_cast<int>(p % 3);
                (cls == 0 ? cov.r1 : cls == 1 ? cov.r2 : cov.rc).push_back(k);
            }
            Instance base;
            base.q = 2;
            base.n = base.m = n;
            base.senders = senders;
            base.coverage = cov;
            for (int k = 1; k <= n; ++k) base.wants.push_back(k);
            base.side_info.assign(n, {});

            std::vector<std::vector<int>> allowed(n);
            for (int k = 1; k <= n; ++k) {
                std::vector<int> pool;
                for (int i = 1; i <= n; ++i) {
                    if (i == k) continue;
                    bool ok = true;
                    if (pruned_only) {
                        if (cov.in_r1(k)) ok = detail::contains(senders[0], i);
                        else if (cov.in_r2(k)) ok = detail::contains(senders[1], i);
                    }
                    if (ok) pool.push_back(i);
                }
                allowed[k - 1] = std::move(pool);
            }
            std::function<void(int, Instance&)> rec = [&](int k, Instance& inst) {
                if (k > n) {
                    fn(inst);
                    return;
                }
                const auto& pool = allowed[k - 1];
                for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pool.size()); ++bits) {
                    std::vector<int> x;
                    for (size_t i = 0; i < pool.size(); ++i)
                        if ((bits >> i) & 1) x.push_back(pool[i]);
                    inst.side_info[k - 1] = std::move(x);
                    rec(k + 1, inst);
                }
                inst.side_info[k - 1].clear();
            };
            rec(1, base);
        }
    }
}

/// Seeded generator for property tests.
inline Instance random_instance(std::mt19937& rng, int n, int q = 2, int senders = 2) {
    Instance inst;
    inst.q = q;
    inst.n = n;
    inst.m = n;
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    inst.senders.assign(senders, {});
    for (int i = 1; i <= n; ++i) {
        int owner = pick(1, senders);
        for (int j = 1; j <= senders; ++j)
            if (j == owner || pick(0, 2) == 0) inst.senders[j - 1].push_back(i);
    }
    for (auto& ms : inst.senders)
        if (ms.empty()) ms.push_back(pick(1, n));
    for (int k = 1; k <= n; ++k) {
        inst.wants.push_back(k);
        std::vector<int> x;
        for (int i = 1; i <= n; ++i)
            if (i != k && pick(0, 2) == 0) x.push_back(i);
        inst.side_info.push_back(std::move(x));
    }
    return inst;
}

struct SweepStats {
    std::string name;
    long long instances = 0;
    long long checked = 0;
    long long violations = 0;
    std::string first_violation;

    void violate(const Instance& inst, const std::string& what) {
        ++violations;
        if (first_violation.empty())
            first_violation = what + "\n" + render_instance(inst);
    }
    bool ok() const { return violations == 0; }
};

/// Minimum fitting-matrix rank against the exhaustive generator search.
inline SweepStats sweep_minrank_vs_oracle(int max_n) {
    SweepStats st;
    st.name = "minrank-vs-oracle";
    for (int n = 1; n <= max_n; ++n)
        enumerate_multisender_instances(n, [&](const Instance& inst) {
            ++st.instances;
            int mr = minrank_search(inst).n_opt;
            int oc = oracle_multisender(inst).n_opt;
            ++st.checked;
            if (mr != oc)
                st.violate(inst, "minrank " + std::to_string(mr) + " != oracle " +
                                     std::to_string(oc));
        });
    return st;
}

/// Saving a transmission is possible exactly when a message-connected 0-cycle
/// exists.
inline SweepStats sweep_uncoded_iff(int max_n) {
    SweepStats st;
    st.name = "uncoded-iff-no-connected-0-cycle";
    for (int n = 1; n <= max_n; ++n)
        enumerate_multisender_instances(n, [&](const Instance& inst) {
            ++st.instances;
            bool uncoded_optimal = minrank_search(inst).n_opt == inst.n;
            bool no_mc_cycle = no_mc_zero_cycle(inst);
            ++st.checked;
            if (uncoded_optimal != no_mc_cycle)
                st.violate(inst, std::string("minrank==n is ") +
                                     (uncoded_optimal ? "true" : "false") +
                                     " but the 0-cycle predicate is " +
                                     (no_mc_cycle ? "true" : "false"));
        });
    return st;
}

/// Every message-connected 0-cycle yields a verified code of length n-1.
inline SweepStats sweep_spanning_tree(int max_n) {
    SweepStats st;
    st.name = "spanning-tree-achievability";
    for (int n = 1; n <= max_n; ++n)
        enumerate_multisender_instances(n, [&](const Instance& inst) {
            ++st.instances;
            MessageGraph u = build_message_graph(inst);
            for (const auto& zc : zero_cycles(inst)) {
                if (!is_message_connected(zc.messages, u) || zc.messages.size() < 2) continue;
                ++st.checked;
                Generator gen = spanning_tree_code(inst, zc.messages);
                if (gen.total_columns() != inst.n - 1)
                    st.violate(inst, "tree code has " + std::to_string(gen.total_columns()) +
                                         " columns");
                else if (!all_decodable(inst, gen))
                    st.violate(inst, "tree code fails to decode");
            }
        });
    return st;
}

/// Edges declared removable by the sufficient conditions never raise the
/// optimum when removed.
inline SweepStats sweep_criticality(int max_n) {
    SweepStats st;
    st.name = "criticality-soundness";
    for (int n = 1; n <= max_n; ++n)
        enumerate_multisender_instances(n, [&](const Instance& inst) {
            ++st.instances;
            int base = -1;
            for (int k = 1; k <= inst.m; ++k)
                for (int j : inst.x(k)) {
                    bool flagged = false;
                    int a = inst.f(k);
                    bool applies = false;
                    for (int s = 1; s <= inst.sender_count(); ++s)
                        if (inst.sender_has(s, a) && !inst.sender_has(s, j)) applies = true;
                    if (applies && cross_message_uncritical(inst, a, j)) flagged = true;
                    auto holders = inst.holders(a);
                    if (!flagged && holders.size() == 1 &&
                        !inst.sender_has(holders.front(), j) && foreign_side_info_uncritical(inst, k))
                        flagged = true;
                    if (!flagged && holders.size() >= 2) {
                        bool outside_all = true;
                        for (int p : holders)
                            if (inst.sender_has(p, j)) outside_all = false;
                        if (outside_all && shared_wanted_uncritical(inst, k, holders.front()))
                            flagged = true;
                    }
                    if (!flagged) continue;
                    ++st.checked;
                    if (base < 0) base = minrank_search(inst).n_opt;
                    int removed = minrank_search(remove_edge(inst, k, j)).n_opt;
                    if (removed > base)
                        st.violate(inst, "edge (" + std::to_string(k) + "," + std::to_string(j) +
                                             ") flagged uncritical but optimum rises " +
                                             std::to_string(base) + "->" +
                                             std::to_string(removed));
                }
        });
    return st;
}

/// Messages outside every message-connected 0-cycle cost exactly one
/// transmission.
inline SweepStats sweep_uncoded_direction(int max_n) {
    SweepStats st;
    st.name = "uncoded-direction";
    for (int n = 1; n <= max_n; ++n)
        enumerate_multisender_instances(n, [&](const Instance& inst) {
            ++st.instances;
            for (int i = 1; i <= inst.n; ++i) {
                if (forms_mc_zero_cycle(inst, i)) continue;
                ++st.checked;
                if (!uncoded_equivalence(inst, i))
                    st.violate(inst, "message " + std::to_string(i) +
                                         " forms no mc 0-cycle but is not uncoded-equivalent");
            }
        });
    return st;
}

/// Cellular subspace objective against the coverage-aware oracle.
inline SweepStats sweep_cellular_vs_oracle(int max_n) {
    SweepStats st;
    st.name = "cellular-vs-oracle";
    for (int n = 1; n <= max_n; ++n)
        enumerate_cellular_instances(n, true, [&](const Instance& inst) {
            ++st.instances;
            auto solver = cellular_minsearch(inst);
            auto oracle = oracle_cellular(inst);
            ++st.checked;
            if (solver.has_value() != oracle.has_value())
                st.violate(inst, "feasibility disagreement");
            else if (solver && solver->n_opt != oracle->n_opt)
                st.violate(inst, "cellular solver " + std::to_string(solver->n_opt) +
                                     " != oracle " + std::to_string(oracle->n_opt));
        });
    return st;
}

/// Combinatorial characterization of dim(V1 cap V2) != 0 against exhaustive
/// template enumeration.
inline SweepStats sweep_overlap_iff(int max_n) {
    SweepStats st;
    st.name = "overlap-characterization-iff";
    for (int n = 1; n <= max_n; ++n)
        enumerate_cellular_instances(n, true, [&](const Instance& inst) {
            ++st.instances;
            if (!coverage_infeasible_receivers(inst).empty()) return; // no fitting matrix
            bool pred = restricted_overlap_possible(inst);
            bool truth = exists_nonzero_intersection(inst, IntersectionKind::V1CapV2);
            ++st.checked;
            if (pred != truth)
                st.violate(inst, std::string("predicate ") + (pred ? "true" : "false") +
                                     " but enumeration says " + (truth ? "true" : "false"));
        });
    return st;
}

/// Dropping cross-coverage side information never changes the optimum.
inline SweepStats sweep_pruning_safety(int max_n) {
    SweepStats st;
    st.name = "pruning-safety";
    for (int n = 1; n <= max_n; ++n)
        enumerate_cellular_instances(n, false, [&](const Instance& inst) {
            ++st.instances;
            auto raw = oracle_cellular(inst);
            auto pruned = oracle_cellular(prune_side_info(inst));
            ++st.checked;
            if (raw.has_value() != pruned.has_value())
                st.violate(inst, "pruning changed feasibility");
            else if (raw && raw->n_opt != pruned->n_opt)
                st.violate(inst, "pruning changed optimum " + std::to_string(raw->n_opt) +
                                     "->" + std::to_string(pruned->n_opt));
        });
    return st;
}

} // namespace msic
