#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "msic/errors.hpp"
#include "msic/fitting.hpp"
#include "msic/generator.hpp"
#include "msic/instance.hpp"
#include "msic/oracle.hpp"

namespace msic {

inline constexpr int kDefaultSubsetCap = 16;

/// A message set B where every receiver wanting a message of B already knows
/// at least one message of B.
struct ZeroCycle {
    std::vector<int> messages;
    std::vector<int> receivers; // every k with f(k) in B
};

namespace detail {

inline void check_subset_cap(const Instance& inst, int cap) {
    if (inst.n > cap)
        throw CapExceeded("subset enumeration cap: n = " + std::to_string(inst.n) +
                          " exceeds " + std::to_string(cap));
}

inline std::vector<int> mask_to_set(std::uint64_t mask) {
    std::vector<int> out;
    for (int i = 0; mask; ++i, mask >>= 1)
        if (mask & 1) out.push_back(i + 1);
    return out;
}

/// True iff B (bitmask) satisfies the covering condition defining Φ.
inline bool in_phi(const Instance& inst, std::uint64_t b,
                   const std::vector<std::uint64_t>& xmask) {
    for (int k = 1; k <= inst.m; ++k) {
        if (!((b >> (inst.f(k) - 1)) & 1)) continue;
        if (!(xmask[k - 1] & b)) return false;
    }
    return true;
}

inline std::vector<std::uint64_t> side_masks(const Instance& inst) {
    std::vector<std::uint64_t> xmask(inst.m);
    for (int k = 1; k <= inst.m; ++k) xmask[k - 1] = to_mask(inst.x(k));
    return xmask;
}

} // namespace detail

/// All nonempty members of Φ; an empty result means the graph is 0-acyclic.
inline std::vector<ZeroCycle> zero_cycles(const Instance& inst, int cap = kDefaultSubsetCap) {
    detail::check_subset_cap(inst, cap);
    auto xmask = detail::side_masks(inst);
    std::vector<ZeroCycle> out;
    for (std::uint64_t b = 1; b < (std::uint64_t{1} << inst.n); ++b) {
        if (!detail::in_phi(inst, b, xmask)) continue;
        ZeroCycle zc;
        zc.messages = detail::mask_to_set(b);
        for (int k = 1; k <= inst.m; ++k)
            if ((b >> (inst.f(k) - 1)) & 1) zc.receivers.push_back(k);
        out.push_back(std::move(zc));
    }
    return out;
}

/// Φ members with no proper Φ subset.
inline std::vector<ZeroCycle> minimal_zero_cycles(const Instance& inst,
                                                  int cap = kDefaultSubsetCap) {
    auto all = zero_cycles(inst, cap);
    std::vector<ZeroCycle> out;
    for (const auto& zc : all) {
        std::uint64_t b = detail::to_mask(zc.messages);
        bool minimal = true;
        for (const auto& other : all) {
            std::uint64_t o = detail::to_mask(other.messages);
            if (o != b && (o & b) == o) { minimal = false; break; }
        }
        if (minimal) out.push_back(zc);
    }
    return out;
}

/// Union of all Φ members ("maximum 0-cycle"); Φ is closed under union.
inline std::vector<int> max_zero_cycle(const Instance& inst, int cap = kDefaultSubsetCap) {
    detail::check_subset_cap(inst, cap);
    auto xmask = detail::side_masks(inst);
    std::uint64_t u = 0;
    for (std::uint64_t b = 1; b < (std::uint64_t{1} << inst.n); ++b)
        if (detail::in_phi(inst, b, xmask)) u |= b;
    return detail::mask_to_set(u);
}

/// Connectivity of the subgraph of U induced by B; singletons are connected.
inline bool is_message_connected(const std::vector<int>& b, const MessageGraph& u) {
    if (b.empty()) return true;
    std::uint64_t want = detail::to_mask(b);
    std::uint64_t seen = std::uint64_t{1} << (b.front() - 1);
    while (true) {
        std::uint64_t next = seen;
        for (int i = 1; i <= u.n; ++i)
            if ((seen >> (i - 1)) & 1) next |= u.adj[i - 1] & want;
        if (next == seen) break;
        seen = next;
    }
    return seen == want;
}

/// True iff some message-connected 0-cycle contains message i.
inline bool forms_mc_zero_cycle(const Instance& inst, int i, int cap = kDefaultSubsetCap) {
    detail::check_subset_cap(inst, cap);
    auto xmask = detail::side_masks(inst);
    MessageGraph u = build_message_graph(inst);
    for (std::uint64_t b = 1; b < (std::uint64_t{1} << inst.n); ++b) {
        if (!((b >> (i - 1)) & 1)) continue;
        if (!detail::in_phi(inst, b, xmask)) continue;
        if (is_message_connected(detail::mask_to_set(b), u)) return true;
    }
    return false;
}

/// No message-connected 0-cycle anywhere; equivalent to "coding cannot beat
/// sending everything uncoded".
inline bool no_mc_zero_cycle(const Instance& inst, int cap = kDefaultSubsetCap) {
    detail::check_subset_cap(inst, cap);
    auto xmask = detail::side_masks(inst);
    MessageGraph u = build_message_graph(inst);
    for (std::uint64_t b = 1; b < (std::uint64_t{1} << inst.n); ++b)
        if (detail::in_phi(inst, b, xmask) && is_message_connected(detail::mask_to_set(b), u))
            return false;
    return true;
}

/// Length n-1 code from a message-connected 0-cycle: pair sums along a
/// spanning tree of the induced message graph, everything outside B uncoded.
inline Generator spanning_tree_code(const Instance& inst, const std::vector<int>& b) {
    auto xmask = detail::side_masks(inst);
    std::uint64_t bm = detail::to_mask(b);
    if (!detail::in_phi(inst, bm, xmask))
        throw ValidationError("message set is not a 0-cycle");
    MessageGraph u = build_message_graph(inst);
    if (!is_message_connected(b, u))
        throw ValidationError("0-cycle is not message-connected");
    if (b.size() < 2)
        throw ValidationError("singleton 0-cycle has no spanning tree edge");

    Generator gen;
    gen.n = inst.n;
    gen.q = inst.q;
    gen.cols.resize(inst.sender_count());
    auto lowest_holder_of_pair = [&](int i, int j) {
        for (int s = 1; s <= inst.sender_count(); ++s)
            if (inst.sender_has(s, i) && inst.sender_has(s, j)) return s;
        throw Error("no sender holds both tree endpoints");
    };
    // BFS tree over the induced subgraph, rooted at the smallest member.
    std::uint64_t seen = std::uint64_t{1} << (b.front() - 1);
    std::vector<int> frontier{b.front()};
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int i : frontier)
            for (int j : b) {
                if ((seen >> (j - 1)) & 1) continue;
                if (!u.edge(i, j)) continue;
                seen |= std::uint64_t{1} << (j - 1);
                std::vector<std::uint8_t> col(inst.n, 0);
                col[i - 1] = 1;
                col[j - 1] = 1;
                gen.cols[lowest_holder_of_pair(i, j) - 1].push_back(std::move(col));
                next.push_back(j);
            }
        frontier = std::move(next);
    }
    for (int i = 1; i <= inst.n; ++i) {
        if ((bm >> (i - 1)) & 1) continue;
        std::vector<std::uint8_t> col(inst.n, 0);
        col[i - 1] = 1;
        gen.cols[inst.holders(i).front() - 1].push_back(std::move(col));
    }
    return gen;
}

// ---------------------------------------------------------------------------
// Side-information criticality.
// ---------------------------------------------------------------------------

/// Sufficient condition for "receivers wanting x_a can drop x_b": no
/// message-connected 0-cycle joins b with a shared message of a sender
/// holding a but not b.
inline bool cross_message_uncritical(const Instance& inst, int a, int b, int cap = kDefaultSubsetCap) {
    detail::check_subset_cap(inst, cap);
    auto mc = shared_messages(inst);
    auto xmask = detail::side_masks(inst);
    MessageGraph u = build_message_graph(inst);
    bool applicable = false;
    for (int i = 1; i <= inst.sender_count(); ++i) {
        if (!inst.sender_has(i, a) || inst.sender_has(i, b)) continue;
        applicable = true;
        std::uint64_t shared_i = 0;
        for (int s : mc)
            if (inst.sender_has(i, s)) shared_i |= std::uint64_t{1} << (s - 1);
        bool found = false;
        for (std::uint64_t bm = 1; bm < (std::uint64_t{1} << inst.n) && !found; ++bm) {
            if (!((bm >> (b - 1)) & 1)) continue;
            if (!(bm & shared_i)) continue;
            if (detail::in_phi(inst, bm, xmask) &&
                is_message_connected(detail::mask_to_set(bm), u))
                found = true;
        }
        if (!found) return true;
    }
    if (!applicable)
        throw ValidationError("no sender holds the wanted message without the side message");
    return false;
}

/// For a receiver wanting an unshared message: its cross-sender side
/// information is removable when none of its unknown shared messages in the
/// serving sender forms a message-connected 0-cycle.
inline bool foreign_side_info_uncritical(const Instance& inst, int k, int cap = kDefaultSubsetCap) {
    auto holders = inst.holders(inst.f(k));
    if (holders.size() != 1)
        throw ValidationError("receiver wants a shared message; use the shared-wanted check");
    int i = holders.front();
    auto mc = shared_messages(inst);
    for (int s : inst.y_set(k)) {
        if (!inst.sender_has(i, s) || !detail::contains(mc, s)) continue;
        if (forms_mc_zero_cycle(inst, s, cap)) return false;
    }
    return true;
}

/// Variant for receivers wanting a shared message, relative to a chosen
/// holder p of the wanted message.
inline bool shared_wanted_uncritical(const Instance& inst, int k, int p, int cap = kDefaultSubsetCap) {
    auto holders = inst.holders(inst.f(k));
    if (holders.size() < 2)
        throw ValidationError("receiver's wanted message is not shared");
    if (!detail::contains(holders, p))
        throw ValidationError("sender p does not hold the wanted message");
    auto mc = shared_messages(inst);
    std::vector<int> mck; // union of message sets of senders holding f(k)
    for (int j : holders)
        mck.insert(mck.end(), inst.msg_set(j).begin(), inst.msg_set(j).end());
    mck = detail::sorted_unique(std::move(mck));
    for (int s : inst.y_set(k)) {
        if (!detail::contains(mck, s) || !detail::contains(mc, s)) continue;
        if (forms_mc_zero_cycle(inst, s, cap)) return false;
    }
    return true;
}

inline Instance remove_edge(const Instance& inst, int k, int j) {
    Instance out = inst;
    auto& x = out.side_info[k - 1];
    x.erase(std::remove(x.begin(), x.end(), j), x.end());
    return out;
}

/// Ground truth: does deleting side-information edge (k, j) strictly increase
/// the optimal codelength? Multi-sender instances go through the minrank
/// solver, coverage instances through the exhaustive oracle.
inline bool is_edge_critical_oracle(const Instance& inst, int k, int j,
                                    std::uint64_t budget = kDefaultBudget) {
    if (!detail::contains(inst.x(k), j))
        throw ValidationError("receiver does not hold that side information");
    Instance reduced = remove_edge(inst, k, j);
    if (inst.coverage) {
        auto base = oracle_cellular(inst);
        auto less = oracle_cellular(reduced);
        if (!base || !less) return false; // infeasible either way: nothing to compare
        return less->n_opt > base->n_opt;
    }
    return minrank_search(reduced, budget).n_opt > minrank_search(inst, budget).n_opt;
}

/// Deletes message i together with its wanters; surviving indices shift down.
inline Instance delete_message(const Instance& inst, int i) {
    Instance out;
    out.q = inst.q;
    out.n = inst.n - 1;
    auto remap = [&](int v) { return v > i ? v - 1 : v; };
    for (int k = 1; k <= inst.m; ++k) {
        if (inst.f(k) == i) continue;
        out.wants.push_back(remap(inst.f(k)));
        std::vector<int> x;
        for (int s : inst.x(k))
            if (s != i) x.push_back(remap(s));
        out.side_info.push_back(std::move(x));
    }
    out.m = static_cast<int>(out.wants.size());
    for (const auto& ms : inst.senders) {
        std::vector<int> s;
        for (int v : ms)
            if (v != i) s.push_back(remap(v));
        out.senders.push_back(std::move(s));
    }
    return out;
}

/// Operational reading of "x_i might as well be sent uncoded": deleting the
/// message and its wanters costs exactly one codeword.
inline bool uncoded_equivalence(const Instance& inst, int i, SearchBounds bounds = {}) {
    int full = oracle_multisender(inst, bounds).n_opt;
    Instance reduced = delete_message(inst, i);
    int rest = reduced.m == 0 ? 0 : oracle_multisender(reduced, bounds).n_opt;
    return full == 1 + rest;
}

/// Per-edge criticality summary: which sufficient conditions fire, and what
/// the oracle says.
struct EdgeCriticality {
    int receiver = 0;
    int message = 0;
    std::optional<bool> cross_message; // pairwise wanted/known condition
    std::optional<bool> foreign_side;  // receiver-level, unshared wanted message
    std::optional<bool> shared_wanted; // receiver-level, shared wanted message
    std::optional<bool> coverage_cut;  // coverage instances: inaudible-sender side info
    bool flagged_uncritical = false;
    bool oracle_critical = false;
};

inline std::vector<EdgeCriticality> criticality_report(const Instance& inst,
                                                       std::uint64_t budget = kDefaultBudget,
                                                       int cap = kDefaultSubsetCap) {
    std::vector<EdgeCriticality> out;
    for (int k = 1; k <= inst.m; ++k) {
        for (int j : inst.x(k)) {
            EdgeCriticality e;
            e.receiver = k;
            e.message = j;
            if (inst.coverage) {
                bool cross = (inst.coverage->in_r1(k) && !inst.sender_has(1, j)) ||
                             (inst.coverage->in_r2(k) && !inst.sender_has(2, j));
                e.coverage_cut = cross;
                e.flagged_uncritical = cross;
            } else {
                int a = inst.f(k);
                bool b_outside_some_holder_of_a = false;
                for (int s = 1; s <= inst.sender_count(); ++s)
                    if (inst.sender_has(s, a) && !inst.sender_has(s, j))
                        b_outside_some_holder_of_a = true;
                if (b_outside_some_holder_of_a) e.cross_message = cross_message_uncritical(inst, a, j, cap);
                auto holders = inst.holders(a);
                if (holders.size() == 1) {
                    if (!inst.sender_has(holders.front(), j))
                        e.foreign_side = foreign_side_info_uncritical(inst, k, cap);
                } else {
                    // which holder carries the wanted share is decided by the
                    // optimal completion, so only edges outside every
                    // candidate sender's set are certified
                    bool outside_all = true;
                    for (int p : holders)
                        if (inst.sender_has(p, j)) outside_all = false;
                    if (outside_all)
                        e.shared_wanted = shared_wanted_uncritical(inst, k, holders.front(), cap);
                }
                e.flagged_uncritical = (e.cross_message && *e.cross_message) ||
                                       (e.foreign_side && *e.foreign_side) ||
                                       (e.shared_wanted && *e.shared_wanted);
            }
            e.oracle_critical = is_edge_critical_oracle(inst, k, j, budget);
            out.push_back(std::move(e));
        }
    }
    return out;
}

} // namespace msic
