#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "msic/errors.hpp"
#include "msic/field_matrix.hpp"

namespace msic {

namespace detail {

inline bool contains(const std::vector<int>& sorted, int v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

inline std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline std::uint64_t to_mask(const std::vector<int>& one_based) {
    std::uint64_t m = 0;
    for (int v : one_based) m |= std::uint64_t{1} << (v - 1);
    return m;
}

} // namespace detail

/// Which senders each receiver can hear (two-sender cellular setting).
struct CoverageProfile {
    std::vector<int> r1; // hears sender 1 only
    std::vector<int> r2; // hears sender 2 only
    std::vector<int> rc; // hears both

    bool in_r1(int k) const { return detail::contains(r1, k); }
    bool in_r2(int k) const { return detail::contains(r2, k); }
    bool in_rc(int k) const { return detail::contains(rc, k); }

    bool operator==(const CoverageProfile&) const = default;
};

/// An index-coding instance. All indices are 1-based, all index sets sorted.
struct Instance {
    int q = 2;
    int n = 0;
    int m = 0;
    std::vector<int> wants;                  // size m; wants[k-1] = f(k)
    std::vector<std::vector<int>> side_info; // size m; X_k
    std::vector<std::vector<int>> senders;   // size |S|; M_j
    std::optional<CoverageProfile> coverage;

    int sender_count() const { return static_cast<int>(senders.size()); }
    int f(int k) const { return wants[k - 1]; }
    const std::vector<int>& x(int k) const { return side_info[k - 1]; }
    const std::vector<int>& msg_set(int j) const { return senders[j - 1]; }

    bool sender_has(int j, int i) const { return detail::contains(senders[j - 1], i); }

    /// Y_k: everything that is neither wanted by k nor known to k.
    std::vector<int> y_set(int k) const {
        std::vector<int> out;
        for (int i = 1; i <= n; ++i)
            if (i != f(k) && !detail::contains(x(k), i)) out.push_back(i);
        return out;
    }

    /// Senders that hold message i, ascending.
    std::vector<int> holders(int i) const {
        std::vector<int> out;
        for (int j = 1; j <= sender_count(); ++j)
            if (sender_has(j, i)) out.push_back(j);
        return out;
    }

    bool operator==(const Instance&) const = default;
};

/// M_c: messages held by at least two senders.
inline std::vector<int> shared_messages(const Instance& inst) {
    std::vector<int> out;
    for (int i = 1; i <= inst.n; ++i)
        if (static_cast<int>(inst.holders(i).size()) >= 2) out.push_back(i);
    return out;
}

/// Undirected graph joining two messages iff some sender holds both.
struct MessageGraph {
    int n = 0;
    std::vector<std::uint64_t> adj; // adj[i-1] bit (j-1)

    bool edge(int i, int j) const { return (adj[i - 1] >> (j - 1)) & 1; }

    int edge_count() const {
        int c = 0;
        for (int i = 1; i <= n; ++i)
            for (int j = i + 1; j <= n; ++j)
                if (edge(i, j)) ++c;
        return c;
    }
};

inline MessageGraph build_message_graph(const Instance& inst) {
    if (inst.n > 64) throw CapExceeded("message graph supports at most 64 messages");
    MessageGraph g;
    g.n = inst.n;
    g.adj.assign(inst.n, 0);
    for (const auto& ms : inst.senders)
        for (size_t a = 0; a < ms.size(); ++a)
            for (size_t b = a + 1; b < ms.size(); ++b) {
                g.adj[ms[a] - 1] |= std::uint64_t{1} << (ms[b] - 1);
                g.adj[ms[b] - 1] |= std::uint64_t{1} << (ms[a] - 1);
            }
    return g;
}

/// Full semantic validation; throws ValidationError on the first violation.
inline void validate(const Instance& inst) {
    if (!gf::is_prime(inst.q))
        throw ValidationError("q = " + std::to_string(inst.q) + " is not prime");
    if (inst.n < 1 || inst.m < 1) throw ValidationError("n and m must be at least 1");
    if (static_cast<int>(inst.wants.size()) != inst.m)
        throw ValidationError("wants must list exactly m message indices");
    if (static_cast<int>(inst.side_info.size()) != inst.m)
        throw ValidationError("need one side-information set per receiver");
    if (inst.senders.empty()) throw ValidationError("at least one sender required");

    auto check_range = [&](int v, const char* what) {
        if (v < 1 || v > inst.n)
            throw ValidationError(std::string(what) + " index " + std::to_string(v) +
                                  " out of range 1.." + std::to_string(inst.n));
    };
    for (int k = 1; k <= inst.m; ++k) {
        check_range(inst.f(k), "wanted");
        for (int i : inst.x(k)) check_range(i, "side-information");
        if (detail::contains(inst.x(k), inst.f(k)))
            throw ValidationError("receiver " + std::to_string(k) +
                                  " has its wanted message " + std::to_string(inst.f(k)) +
                                  " as side information");
    }

    std::vector<int> uni;
    for (const auto& ms : inst.senders) {
        for (int i : ms) check_range(i, "sender message");
        uni.insert(uni.end(), ms.begin(), ms.end());
    }
    uni = detail::sorted_unique(uni);
    if (static_cast<int>(uni.size()) != inst.n)
        throw ValidationError("sender message sets do not cover every message");

    if (inst.coverage) {
        const auto& cov = *inst.coverage;
        if (inst.sender_count() != 2)
            throw ValidationError("coverage requires exactly two senders");
        if (inst.q != 2) throw ValidationError("coverage requires q = 2");
        if (inst.m != inst.n) throw ValidationError("coverage requires m = n");
        for (int k = 1; k <= inst.m; ++k)
            if (inst.f(k) != k)
                throw ValidationError("coverage requires receiver k to want message k");
        std::vector<int> all;
        all.insert(all.end(), cov.r1.begin(), cov.r1.end());
        all.insert(all.end(), cov.r2.begin(), cov.r2.end());
        all.insert(all.end(), cov.rc.begin(), cov.rc.end());
        std::sort(all.begin(), all.end());
        std::vector<int> want(inst.m);
        for (int k = 1; k <= inst.m; ++k) want[k - 1] = k;
        if (all != want)
            throw ValidationError("coverage classes must partition the receivers");
    }
}

/// Receivers whose wanted message is cut off by coverage; empty means every
/// restricted receiver can be served by its audible sender.
inline std::vector<int> coverage_infeasible_receivers(const Instance& inst) {
    std::vector<int> bad;
    if (!inst.coverage) return bad;
    for (int k : inst.coverage->r1)
        if (!inst.sender_has(1, inst.f(k))) bad.push_back(k);
    for (int k : inst.coverage->r2)
        if (!inst.sender_has(2, inst.f(k))) bad.push_back(k);
    return detail::sorted_unique(bad);
}

// ---------------------------------------------------------------------------
// Instance file format
//
//   q <int>
//   n <int>
//   m <int>
//   wants <m ints>
//   side <k> : <ints or empty>        (m lines, k ascending)
//   sender <j> : <ints>               (one line per sender, j ascending)
//   coverage 1 : <ints>               (optional block of three lines)
//   coverage 2 : <ints>
//   coverage c : <ints>
// ---------------------------------------------------------------------------

namespace detail {

struct Line {
    int number;
    std::vector<std::string> tokens;
};

inline std::vector<Line> tokenize_lines(std::string_view text) {
    std::vector<Line> out;
    int number = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        ++number;
        std::istringstream ss{std::string(text.substr(pos, eol - pos))};
        Line line{number, {}};
        std::string tok;
        while (ss >> tok) line.tokens.push_back(tok);
        if (!line.tokens.empty()) out.push_back(std::move(line));
        pos = eol + 1;
        if (eol == text.size()) break;
    }
    return out;
}

inline int parse_int(const std::string& tok, int line) {
    size_t used = 0;
    int v;
    try {
        v = std::stoi(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size())
        throw ParseError(line, "expected an integer, got '" + tok + "'");
    return v;
}

/// Parses "<keyword> <label> : <ints...>"; returns the ints.
inline std::vector<int> parse_labeled_list(const Line& l, const std::string& keyword,
                                           const std::string& label) {
    if (l.tokens.size() < 3 || l.tokens[0] != keyword || l.tokens[1] != label ||
        l.tokens[2] != ":")
        throw ParseError(l.number, "expected '" + keyword + " " + label + " : ...'");
    std::vector<int> vals;
    for (size_t t = 3; t < l.tokens.size(); ++t)
        vals.push_back(parse_int(l.tokens[t], l.number));
    return vals;
}

} // namespace detail

inline Instance parse_instance(std::string_view text) {
    auto lines = detail::tokenize_lines(text);
    size_t at = 0;
    auto next = [&]() -> const detail::Line& {
        if (at >= lines.size()) throw ParseError(0, "unexpected end of instance file");
        return lines[at++];
    };
    auto scalar = [&](const char* key, int lo, int hi) {
        const auto& l = next();
        if (l.tokens.size() != 2 || l.tokens[0] != key)
            throw ParseError(l.number, std::string("expected '") + key + " <int>'");
        int v = detail::parse_int(l.tokens[1], l.number);
        if (v < lo || v > hi)
            throw ParseError(l.number, std::string(key) + " must be in " + std::to_string(lo) +
                                           ".." + std::to_string(hi));
        return v;
    };

    Instance inst;
    inst.q = scalar("q", 2, 251);
    inst.n = scalar("n", 1, 63);
    inst.m = scalar("m", 1, 1 << 20);

    {
        const auto& l = next();
        if (l.tokens.empty() || l.tokens[0] != "wants")
            throw ParseError(l.number, "expected 'wants <m ints>'");
        if (static_cast<int>(l.tokens.size()) != inst.m + 1)
            throw ParseError(l.number, "wants must list exactly " + std::to_string(inst.m) +
                                           " message indices");
        for (int k = 1; k <= inst.m; ++k)
            inst.wants.push_back(detail::parse_int(l.tokens[k], l.number));
    }

    for (int k = 1; k <= inst.m; ++k) {
        const auto& l = next();
        auto vals = detail::parse_labeled_list(l, "side", std::to_string(k));
        vals = detail::sorted_unique(std::move(vals));
        if (detail::contains(vals, inst.wants[k - 1]))
            throw ParseError(l.number, "receiver " + std::to_string(k) +
                                           " has its wanted message as side information");
        inst.side_info.push_back(std::move(vals));
    }

    while (at < lines.size() && lines[at].tokens[0] == "sender") {
        const auto& l = lines[at++];
        auto vals = detail::parse_labeled_list(l, "sender",
                                               std::to_string(inst.senders.size() + 1));
        if (vals.empty()) throw ParseError(l.number, "sender message set must be nonempty");
        inst.senders.push_back(detail::sorted_unique(std::move(vals)));
    }
    if (inst.senders.empty())
        throw ParseError(at < lines.size() ? lines[at].number : 0, "expected 'sender 1 : ...'");

    if (at < lines.size() && lines[at].tokens[0] == "coverage") {
        CoverageProfile cov;
        cov.r1 = detail::sorted_unique(detail::parse_labeled_list(next(), "coverage", "1"));
        cov.r2 = detail::sorted_unique(detail::parse_labeled_list(next(), "coverage", "2"));
        cov.rc = detail::sorted_unique(detail::parse_labeled_list(next(), "coverage", "c"));
        inst.coverage = std::move(cov);
    }
    if (at < lines.size())
        throw ParseError(lines[at].number, "unexpected trailing content");

    try {
        validate(inst);
    } catch (const ValidationError& e) {
        throw ParseError(0, e.what());
    }
    return inst;
}

inline std::string render_instance(const Instance& inst) {
    std::ostringstream out;
    out << "q " << inst.q << "\n" << "n " << inst.n << "\n" << "m " << inst.m << "\n";
    out << "wants";
    for (int v : inst.wants) out << " " << v;
    out << "\n";
    auto list = [&](const std::string& key, const std::string& label,
                    const std::vector<int>& vals) {
        out << key << " " << label << " :";
        for (int v : vals) out << " " << v;
        out << "\n";
    };
    for (int k = 1; k <= inst.m; ++k) list("side", std::to_string(k), inst.x(k));
    for (int j = 1; j <= inst.sender_count(); ++j)
        list("sender", std::to_string(j), inst.msg_set(j));
    if (inst.coverage) {
        list("coverage", "1", inst.coverage->r1);
        list("coverage", "2", inst.coverage->r2);
        list("coverage", "c", inst.coverage->rc);
    }
    return out.str();
}

} // namespace msic
