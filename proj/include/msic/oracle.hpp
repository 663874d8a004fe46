#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "msic/errors.hpp"
#include "msic/field_matrix.hpp"
#include "msic/generator.hpp"
#include "msic/instance.hpp"

namespace msic {

/// Per-receiver decodability under Claim-1 semantics: receiver k passes iff
/// e_{f(k)} lies in the span of its audible columns plus its side information.
/// With coverage, r1/r2 receivers hear only their own sender's sub-codeword.
inline std::vector<bool> verify_decoding(const Instance& inst, const Generator& gen) {
    check_generator_support(inst, gen);
    std::vector<bool> ok(inst.m, false);
    for (int k = 1; k <= inst.m; ++k) {
        RankAccumulator acc(inst.n, inst.q);
        auto add_sender = [&](int j) {
            for (const auto& col : gen.cols[j - 1]) acc.add(col);
        };
        if (inst.coverage && inst.coverage->in_r1(k)) add_sender(1);
        else if (inst.coverage && inst.coverage->in_r2(k)) add_sender(2);
        else
            for (int j = 1; j <= inst.sender_count(); ++j) add_sender(j);
        for (int i : inst.x(k)) {
            std::vector<std::uint8_t> e(inst.n, 0);
            e[i - 1] = 1;
            acc.add(e);
        }
        std::vector<std::uint8_t> want(inst.n, 0);
        want[inst.f(k) - 1] = 1;
        ok[k - 1] = !acc.would_grow(want);
    }
    return ok;
}

inline bool all_decodable(const Instance& inst, const Generator& gen) {
    auto v = verify_decoding(inst, gen);
    for (bool b : v)
        if (!b) return false;
    return true;
}

/// Caps for the exhaustive generator search.
struct SearchBounds {
    int max_n = 5;
    int max_q = 2;
    int max_len = 0; // 0: up to n columns
    std::uint64_t max_checks = 50'000'000;
};

struct OracleResult {
    int n_opt = 0;
    Generator witness;
};

namespace detail {

inline std::vector<std::uint8_t> unpack_vector(std::uint64_t w, int n, int q) {
    std::vector<std::uint8_t> v(n);
    for (int r = 0; r < n; ++r) {
        v[r] = static_cast<std::uint8_t>(w % q);
        w /= q;
    }
    return v;
}

/// All nonzero vectors supported on M_j, in counting order. With `projective`,
/// only scalar-class representatives (first nonzero entry = 1) are kept;
/// scaling a column never changes any span.
inline std::vector<std::vector<std::uint8_t>> candidate_pool(const Instance& inst, int j,
                                                             bool projective) {
    std::vector<std::vector<std::uint8_t>> pool;
    std::uint64_t total = 1;
    for (size_t i = 0; i < inst.msg_set(j).size(); ++i) total *= inst.q;
    for (std::uint64_t w = 1; w < total; ++w) {
        auto packed = unpack_vector(w, static_cast<int>(inst.msg_set(j).size()), inst.q);
        std::vector<std::uint8_t> v(inst.n, 0);
        for (size_t i = 0; i < packed.size(); ++i) v[inst.msg_set(j)[i] - 1] = packed[i];
        if (projective && inst.q > 2) {
            int first = 0;
            for (int r = 0; r < inst.n; ++r)
                if (v[r]) { first = v[r]; break; }
            if (first != 1) continue;
        }
        pool.push_back(std::move(v));
    }
    return pool;
}

struct Tagged {
    int sender;
    std::vector<std::uint8_t> col;
};

/// Increasing-length exhaustive search over subsets of `cands`; first success
/// in lexicographic subset order wins, which makes the result minimal and
/// deterministic.
inline std::optional<OracleResult> subset_search(const Instance& inst,
                                                 const std::vector<Tagged>& cands,
                                                 int max_len, std::uint64_t max_checks) {
    std::uint64_t checks = 0;
    const int pool = static_cast<int>(cands.size());
    for (int len = 0; len <= max_len; ++len) {
        if (len > pool) break;
        std::vector<int> pick(len);
        for (int i = 0; i < len; ++i) pick[i] = i;
        while (true) {
            if (++checks > max_checks)
                throw CapExceeded("oracle combination cap exceeded");
            Generator gen;
            gen.n = inst.n;
            gen.q = inst.q;
            gen.cols.resize(inst.sender_count());
            for (int i : pick) gen.cols[cands[i].sender - 1].push_back(cands[i].col);
            if (all_decodable(inst, gen)) return OracleResult{len, std::move(gen)};
            // next combination
            int i = len - 1;
            while (i >= 0 && pick[i] == pool - len + i) --i;
            if (i < 0) break;
            ++pick[i];
            for (int t = i + 1; t < len; ++t) pick[t] = pick[t - 1] + 1;
        }
    }
    return std::nullopt;
}

inline void check_caps(const Instance& inst, const SearchBounds& b) {
    if (inst.n > b.max_n)
        throw CapExceeded("oracle cap: n = " + std::to_string(inst.n) + " exceeds " +
                          std::to_string(b.max_n));
    if (inst.q > b.max_q)
        throw CapExceeded("oracle cap: q = " + std::to_string(inst.q) + " exceeds " +
                          std::to_string(b.max_q));
}

} // namespace detail

/// Smallest total column count over sender-attributed column multisets that
/// decodes every receiver; n is always achievable (uncoded).
inline OracleResult oracle_multisender(const Instance& inst, SearchBounds bounds = {}) {
    detail::check_caps(inst, bounds);
    int max_len = bounds.max_len > 0 ? bounds.max_len : inst.n;

    // All senders are audible to everyone, so only the set of distinct column
    // vectors matters; attribute each to its lowest-indexed capable sender.
    std::vector<detail::Tagged> cands;
    std::uint64_t total = 1;
    for (int i = 0; i < inst.n; ++i) total *= inst.q;
    for (std::uint64_t w = 1; w < total; ++w) {
        auto v = detail::unpack_vector(w, inst.n, inst.q);
        if (inst.q > 2) {
            int first = 0;
            for (int r = 0; r < inst.n; ++r)
                if (v[r]) { first = v[r]; break; }
            if (first != 1) continue;
        }
        int sender = 0;
        for (int j = 1; j <= inst.sender_count() && !sender; ++j) {
            bool fits = true;
            for (int r = 0; r < inst.n; ++r)
                if (v[r] && !inst.sender_has(j, r + 1)) { fits = false; break; }
            if (fits) sender = j;
        }
        if (sender) cands.push_back({sender, std::move(v)});
    }
    auto res = detail::subset_search(inst, cands, max_len, bounds.max_checks);
    if (!res)
        throw Error("multi-sender oracle found no code; this should be impossible");
    return *res;
}

/// Coverage-restricted exhaustive search. Returns nullopt when some restricted
/// receiver wants a message its audible sender does not hold: no code of any
/// length can serve it.
inline std::optional<OracleResult> oracle_cellular(const Instance& inst,
                                                   SearchBounds bounds = {}) {
    if (!inst.coverage) throw ValidationError("oracle_cellular requires coverage");
    detail::check_caps(inst, bounds);
    if (!coverage_infeasible_receivers(inst).empty()) return std::nullopt;
    int max_len = bounds.max_len > 0 ? bounds.max_len : inst.n;

    // Attribution matters here: the same vector transmitted by sender 1 and by
    // sender 2 reaches different receivers, so pools stay sender-tagged.
    std::vector<detail::Tagged> cands;
    for (int j = 1; j <= inst.sender_count(); ++j)
        for (auto& v : detail::candidate_pool(inst, j, true))
            cands.push_back({j, std::move(v)});
    auto res = detail::subset_search(inst, cands, max_len, bounds.max_checks);
    if (!res && bounds.max_len > 0)
        throw CapExceeded("oracle max_len reached without finding a code");
    return res;
}

} // namespace msic
