#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "msic/errors.hpp"
#include "msic/instance.hpp"

namespace msic {

/// A concrete code: per-sender lists of full-length column vectors.
/// Column j of sender i may only touch rows in M_i.
struct Generator {
    int n = 0;
    int q = 2;
    std::vector<std::vector<std::vector<std::uint8_t>>> cols; // [sender][column][row]

    int total_columns() const {
        int c = 0;
        for (const auto& s : cols) c += static_cast<int>(s.size());
        return c;
    }

    /// All columns flattened in sender order.
    std::vector<std::vector<std::uint8_t>> all_columns() const {
        std::vector<std::vector<std::uint8_t>> out;
        for (const auto& s : cols) out.insert(out.end(), s.begin(), s.end());
        return out;
    }
};

/// Throws if some column uses a message its sender does not hold.
inline void check_generator_support(const Instance& inst, const Generator& gen) {
    if (static_cast<int>(gen.cols.size()) != inst.sender_count())
        throw ValidationError("generator must have one column list per sender");
    if (gen.n != inst.n || gen.q != inst.q)
        throw ValidationError("generator dimensions do not match the instance");
    for (int j = 1; j <= inst.sender_count(); ++j)
        for (const auto& col : gen.cols[j - 1])
            for (int i = 1; i <= inst.n; ++i)
                if (col[i - 1] != 0 && !inst.sender_has(j, i))
                    throw ValidationError("sender " + std::to_string(j) +
                                          " cannot encode message " + std::to_string(i));
}

/// Sub-codeword per sender: x restricted to M_i times the sender's columns.
inline std::vector<std::vector<std::uint8_t>> encode(const Generator& gen,
                                                     std::span<const std::uint8_t> x) {
    if (static_cast<int>(x.size()) != gen.n)
        throw ValidationError("message vector must have length " + std::to_string(gen.n));
    std::vector<std::vector<std::uint8_t>> out;
    for (const auto& sender : gen.cols) {
        std::vector<std::uint8_t> sub;
        for (const auto& col : sender) {
            long long acc = 0;
            for (int r = 0; r < gen.n; ++r) acc += static_cast<long long>(col[r]) * x[r];
            sub.push_back(static_cast<std::uint8_t>(gf::mod(acc, gen.q)));
        }
        out.push_back(std::move(sub));
    }
    return out;
}

// Text format: one line per column, e.g. "s2: x2+x3" or "s1: 2*x1+x4".

inline std::string render_column(int sender, std::span<const std::uint8_t> col) {
    std::ostringstream out;
    out << "s" << sender << ":";
    bool first = true;
    for (size_t r = 0; r < col.size(); ++r) {
        if (!col[r]) continue;
        out << (first ? " " : "+");
        if (col[r] != 1) out << int(col[r]) << "*";
        out << "x" << (r + 1);
        first = false;
    }
    if (first) out << " 0";
    return out.str();
}

inline std::string render_generator(const Generator& gen) {
    std::ostringstream out;
    for (size_t j = 0; j < gen.cols.size(); ++j)
        for (const auto& col : gen.cols[j]) out << render_column(static_cast<int>(j + 1), col) << "\n";
    return out.str();
}

inline Generator parse_generator(std::string_view text, int n, int q, int sender_count) {
    Generator gen;
    gen.n = n;
    gen.q = q;
    gen.cols.resize(sender_count);
    for (const auto& line : detail::tokenize_lines(text)) {
        const auto& head = line.tokens[0];
        if (head.size() < 3 || head[0] != 's' || head.back() != ':')
            throw ParseError(line.number, "expected 's<i>: <terms>'");
        int sender = detail::parse_int(head.substr(1, head.size() - 2), line.number);
        if (sender < 1 || sender > sender_count)
            throw ParseError(line.number, "sender index out of range");
        std::string terms;
        for (size_t t = 1; t < line.tokens.size(); ++t) terms += line.tokens[t];
        std::vector<std::uint8_t> col(n, 0);
        if (terms != "0") {
            size_t pos = 0;
            while (pos < terms.size()) {
                size_t plus = terms.find('+', pos);
                if (plus == std::string::npos) plus = terms.size();
                std::string term = terms.substr(pos, plus - pos);
                int coeff = 1;
                size_t star = term.find('*');
                if (star != std::string::npos) {
                    coeff = detail::parse_int(term.substr(0, star), line.number);
                    term = term.substr(star + 1);
                }
                if (term.empty() || term[0] != 'x')
                    throw ParseError(line.number, "expected term 'x<i>' or '<c>*x<i>'");
                int idx = detail::parse_int(term.substr(1), line.number);
                if (idx < 1 || idx > n)
                    throw ParseError(line.number, "message index out of range");
                col[idx - 1] = static_cast<std::uint8_t>(gf::mod(col[idx - 1] + coeff, q));
                pos = plus + 1;
            }
        }
        gen.cols[sender - 1].push_back(std::move(col));
    }
    return gen;
}

} // namespace msic
