// Command-line front end: solve, analyze, and cross-check index-coding
// instances. Machine mode (--machine) emits stable `key value` lines so runs
// are byte-comparable; text mode is for humans.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "msic/cellular.hpp"
#include "msic/fitting.hpp"
#include "msic/generator.hpp"
#include "msic/instance.hpp"
#include "msic/oracle.hpp"
#include "msic/structure.hpp"
#include "msic/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitInputError = 2;
constexpr int kExitBudget = 3;

struct Options {
    std::string instance_path;
    std::string generator_path;
    std::string message_vector;
    std::uint64_t budget = msic::kDefaultBudget;
    int workers = 0; // 0: hardware concurrency
    bool machine = false;
    int max_n = 3;
    unsigned seed = 1;
    int trials = 200;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw msic::Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

msic::Instance load_instance(const Options& opt) {
    return msic::parse_instance(slurp(opt.instance_path));
}

msic::Generator load_generator(const Options& opt, const msic::Instance& inst) {
    return msic::parse_generator(slurp(opt.generator_path), inst.n, inst.q,
                                 inst.sender_count());
}

int effective_workers(const Options& opt) {
    if (opt.workers > 0) return opt.workers;
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void print_generator(const msic::Generator& gen, bool machine) {
    for (size_t j = 0; j < gen.cols.size(); ++j)
        for (const auto& col : gen.cols[j]) {
            if (machine) std::cout << "column ";
            std::cout << msic::render_column(static_cast<int>(j + 1), col) << "\n";
        }
}

void print_verdicts(const msic::Instance& inst, const msic::Generator& gen, bool machine) {
    auto v = msic::verify_decoding(inst, gen);
    for (int k = 1; k <= inst.m; ++k)
        std::cout << (machine ? "decode " : "receiver ") << k << " "
                  << (v[k - 1] ? "ok" : "fail") << "\n";
}

int cmd_solve(const Options& opt) {
    auto inst = load_instance(opt);
    auto res = msic::minrank_search(inst, opt.budget, effective_workers(opt));
    if (opt.machine) {
        std::cout << "command solve\n";
        std::cout << "q " << inst.q << "\nn " << inst.n << "\nm " << inst.m << "\nsenders "
                  << inst.sender_count() << "\n";
        std::cout << "dof " << msic::build_template(inst).dof() << "\n";
        std::cout << "N_opt " << res.n_opt << "\n";
        print_generator(res.gen, true);
        print_verdicts(inst, res.gen, true);
    } else {
        std::cout << "optimal multi-sender codelength: " << res.n_opt << "\n";
        print_generator(res.gen, false);
        print_verdicts(inst, res.gen, false);
    }
    return kExitOk;
}

void print_dims(const msic::SubspaceDims& d) {
    std::cout << "d1 " << d.d1 << "\nd2 " << d.d2 << "\nd3 " << d.d3 << "\nd12 " << d.d12
              << "\nd123 " << d.d123 << "\ndint12 " << d.dint12 << "\ndint3_12 " << d.dint3_12
              << "\n";
}

int cmd_solve_cellular(const Options& opt) {
    auto inst = load_instance(opt);
    if (!inst.coverage) throw msic::ValidationError("instance has no coverage block");
    auto res = msic::cellular_minsearch(inst, opt.budget, effective_workers(opt));
    if (!res) {
        std::cout << (opt.machine ? "infeasible true\n" : "infeasible: a restricted receiver "
                                                          "wants a message outside its sender\n");
        return kExitInfeasible;
    }
    msic::Instance pruned = msic::prune_side_info(inst);
    if (opt.machine) {
        std::cout << "command solve-cellular\n";
        std::cout << "q " << inst.q << "\nn " << inst.n << "\nm " << inst.m << "\n";
        std::cout << "N_opt " << res->n_opt << "\n";
        print_dims(res->dims);
        print_generator(res->gen, true);
        print_verdicts(pruned, res->gen, true);
    } else {
        std::cout << "optimal cellular codelength: " << res->n_opt << "\n";
        std::cout << "subspace dimensions: d1=" << res->dims.d1 << " d2=" << res->dims.d2
                  << " d3=" << res->dims.d3 << " d12=" << res->dims.d12
                  << " d123=" << res->dims.d123 << " dim(V1^V2)=" << res->dims.dint12
                  << " dim(V3^(V1+V2))=" << res->dims.dint3_12 << "\n";
        print_generator(res->gen, false);
        print_verdicts(pruned, res->gen, false);
    }
    return kExitOk;
}

int cmd_oracle(const Options& opt, bool cellular) {
    auto inst = load_instance(opt);
    msic::SearchBounds bounds;
    bounds.max_n = opt.max_n > bounds.max_n ? opt.max_n : bounds.max_n;
    if (opt.machine) std::cout << "command " << (cellular ? "oracle-cellular" : "oracle") << "\n";
    if (cellular) {
        if (!inst.coverage) throw msic::ValidationError("instance has no coverage block");
        auto res = msic::oracle_cellular(inst, bounds);
        if (!res) {
            std::cout << (opt.machine ? "infeasible true\n" : "infeasible\n");
            return kExitInfeasible;
        }
        std::cout << (opt.machine ? "N_opt " : "oracle optimal codelength: ") << res->n_opt
                  << "\n";
        print_generator(res->witness, opt.machine);
    } else {
        auto res = msic::oracle_multisender(inst, bounds);
        std::cout << (opt.machine ? "N_opt " : "oracle optimal codelength: ") << res.n_opt
                  << "\n";
        print_generator(res.witness, opt.machine);
    }
    return kExitOk;
}

int cmd_verify(const Options& opt) {
    auto inst = load_instance(opt);
    auto gen = load_generator(opt, inst);
    auto v = msic::verify_decoding(inst, gen);
    if (opt.machine) std::cout << "command verify\n";
    bool all = true;
    for (int k = 1; k <= inst.m; ++k) {
        std::cout << (opt.machine ? "decode " : "receiver ") << k << " "
                  << (v[k - 1] ? "ok" : "fail") << "\n";
        all = all && v[k - 1];
    }
    std::cout << (opt.machine ? (all ? "all ok\n" : "all fail\n")
                              : (all ? "all receivers decode\n" : "some receivers fail\n"));
    return all ? kExitOk : kExitInfeasible;
}

int cmd_encode(const Options& opt) {
    auto inst = load_instance(opt);
    auto gen = load_generator(opt, inst);
    msic::check_generator_support(inst, gen);
    std::vector<std::uint8_t> x;
    std::string tok;
    std::istringstream ss(opt.message_vector);
    while (std::getline(ss, tok, ',')) {
        int v = msic::detail::parse_int(tok, 0);
        if (v < 0 || v >= inst.q) throw msic::ValidationError("message symbol out of field range");
        x.push_back(static_cast<std::uint8_t>(v));
    }
    auto words = msic::encode(gen, x);
    if (opt.machine) std::cout << "command encode\n";
    for (size_t j = 0; j < words.size(); ++j) {
        std::cout << (opt.machine ? "codeword_s" : "sender ") << (j + 1)
                  << (opt.machine ? "" : " transmits");
        if (words[j].empty()) std::cout << " -";
        for (auto w : words[j]) std::cout << " " << int(w);
        std::cout << "\n";
    }
    return kExitOk;
}

int cmd_analyze(const Options& opt) {
    auto inst = load_instance(opt);
    if (opt.machine) std::cout << "command analyze\n";
    std::cout << (opt.machine ? "n " : "messages: ") << inst.n << "\n";
    std::cout << (opt.machine ? "m " : "receivers: ") << inst.m << "\n";

    auto mc = msic::shared_messages(inst);
    std::cout << "shared:";
    for (int i : mc) std::cout << " " << i;
    std::cout << "\n";

    msic::MessageGraph u = msic::build_message_graph(inst);
    for (int i = 1; i <= inst.n; ++i)
        for (int j = i + 1; j <= inst.n; ++j)
            if (u.edge(i, j)) std::cout << "edge: " << i << " " << j << "\n";

    for (const auto& zc : msic::zero_cycles(inst, opt.max_n > 16 ? opt.max_n : 16)) {
        std::cout << "zero_cycle:";
        for (int i : zc.messages) std::cout << " " << i;
        std::cout << " | connected="
                  << (msic::is_message_connected(zc.messages, u) ? "true" : "false") << "\n";
    }
    std::cout << "no_mc_zero_cycle "
              << (msic::no_mc_zero_cycle(inst, opt.max_n > 16 ? opt.max_n : 16) ? "true" : "false")
              << "\n";

    if (inst.coverage) {
        msic::Instance pruned = msic::prune_side_info(inst);
        for (const auto& h : msic::enumerate_H(pruned)) {
            std::cout << "h_subgraph:";
            for (int i : h.members) std::cout << " " << i;
            std::cout << " | r1=" << (h.has_r1 ? "true" : "false")
                      << " r2=" << (h.has_r2 ? "true" : "false") << "\n";
        }
        for (const auto& cc : msic::classify_cycles(inst)) {
            std::cout << "cycle:";
            for (int i : cc.nodes) std::cout << " " << i;
            std::cout << " | connected=" << (cc.message_connected ? "true" : "false")
                      << " class=" << (cc.reducible ? "reducible" : "irreducible")
                      << " reason=" << cc.reason << "\n";
        }
        std::cout << "v1v2_overlap_possible "
                  << (msic::restricted_overlap_possible(inst) ? "true" : "false") << "\n";
    }
    return kExitOk;
}

int cmd_critical(const Options& opt) {
    auto inst = load_instance(opt);
    if (opt.machine) std::cout << "command critical\n";
    auto flag = [](const std::optional<bool>& f) {
        return f ? (*f ? "true" : "false") : "n/a";
    };
    for (const auto& e : msic::criticality_report(inst, opt.budget)) {
        std::cout << "edge: " << e.receiver << " " << e.message
                  << " | cross_message=" << flag(e.cross_message)
                  << " foreign_side=" << flag(e.foreign_side)
                  << " shared_wanted=" << flag(e.shared_wanted)
                  << " coverage_cut=" << flag(e.coverage_cut)
                  << " flagged=" << (e.flagged_uncritical ? "true" : "false")
                  << " oracle_critical=" << (e.oracle_critical ? "true" : "false") << "\n";
    }
    return kExitOk;
}

int cmd_sweep(const Options& opt) {
    if (opt.machine) std::cout << "command sweep\n";
    std::cout << (opt.machine ? "max_n " : "exhaustive sweeps up to n = ") << opt.max_n << "\n";
    bool all_ok = true;
    auto report = [&](const msic::SweepStats& st) {
        std::cout << "sweep " << st.name << " instances " << st.instances << " checked "
                  << st.checked << " violations " << st.violations << "\n";
        if (!st.ok()) {
            all_ok = false;
            std::cerr << "first violation in " << st.name << ": " << st.first_violation << "\n";
        }
    };
    report(msic::sweep_minrank_vs_oracle(opt.max_n));
    report(msic::sweep_uncoded_iff(opt.max_n));
    report(msic::sweep_spanning_tree(opt.max_n));
    report(msic::sweep_criticality(opt.max_n));
    report(msic::sweep_uncoded_direction(opt.max_n));
    report(msic::sweep_cellular_vs_oracle(opt.max_n));
    report(msic::sweep_overlap_iff(opt.max_n));
    report(msic::sweep_pruning_safety(opt.max_n));

    // randomized extras: monotonicity of the optimum in side information, and
    // invariance of the oracle under relabeling
    std::mt19937 rng(opt.seed);
    long long mono_bad = 0, perm_bad = 0;
    for (int t = 0; t < opt.trials; ++t) {
        auto inst = msic::random_instance(rng, 1 + static_cast<int>(rng() % 4));
        int base = msic::minrank_search(inst).n_opt;
        // add one random missing edge
        std::vector<std::pair<int, int>> missing;
        for (int k = 1; k <= inst.m; ++k)
            for (int i = 1; i <= inst.n; ++i)
                if (i != inst.f(k) && !msic::detail::contains(inst.x(k), i))
                    missing.push_back({k, i});
        if (!missing.empty()) {
            auto [k, i] = missing[rng() % missing.size()];
            msic::Instance more = inst;
            more.side_info[k - 1].push_back(i);
            more.side_info[k - 1] = msic::detail::sorted_unique(more.side_info[k - 1]);
            if (msic::minrank_search(more).n_opt > base) ++mono_bad;
        }
        // relabel messages and reorder receivers
        std::vector<int> perm(inst.n);
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        msic::Instance rel;
        rel.q = inst.q;
        rel.n = inst.n;
        rel.m = inst.m;
        std::vector<int> order(inst.m);
        std::iota(order.begin(), order.end(), 1);
        std::shuffle(order.begin(), order.end(), rng);
        for (int k : order) {
            rel.wants.push_back(perm[inst.f(k) - 1]);
            std::vector<int> x;
            for (int s : inst.x(k)) x.push_back(perm[s - 1]);
            rel.side_info.push_back(msic::detail::sorted_unique(std::move(x)));
        }
        for (const auto& ms : inst.senders) {
            std::vector<int> s;
            for (int v : ms) s.push_back(perm[v - 1]);
            rel.senders.push_back(msic::detail::sorted_unique(std::move(s)));
        }
        if (msic::oracle_multisender(rel).n_opt != msic::oracle_multisender(inst).n_opt)
            ++perm_bad;
    }
    std::cout << "sweep monotonicity-random trials " << opt.trials << " violations " << mono_bad
              << "\n";
    std::cout << "sweep relabel-invariance-random trials " << opt.trials << " violations "
              << perm_bad << "\n";
    all_ok = all_ok && mono_bad == 0 && perm_bad == 0;
    std::cout << "result " << (all_ok ? "pass" : "fail") << "\n";
    return all_ok ? kExitOk : kExitInfeasible;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal linear index codes for multiple senders and two-sender "
                 "cellular coverage"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd, bool needs_instance) {
        if (needs_instance)
            cmd->add_option("instance", opt.instance_path, "instance file")->required();
        cmd->add_option("--budget", opt.budget, "max assignments to enumerate");
        cmd->add_option("--workers", opt.workers, "worker threads (0 = auto)");
        cmd->add_option("--max-n", opt.max_n, "enumeration size cap");
        cmd->add_option("--seed", opt.seed, "seed for randomized checks");
        cmd->add_flag("--machine", opt.machine, "stable key-value output");
        return cmd;
    };

    auto* solve = add_common(app.add_subcommand("solve", "multi-sender optimal codelength"), true);
    auto* solve_cell = add_common(
        app.add_subcommand("solve-cellular", "two-sender cellular optimal codelength"), true);
    auto* oracle = add_common(
        app.add_subcommand("oracle", "exhaustive generator search (ground truth)"), true);
    auto* oracle_cell = add_common(
        app.add_subcommand("oracle-cellular", "exhaustive cellular search"), true);
    auto* verify = add_common(app.add_subcommand("verify", "check a code decodes"), true);
    verify->add_option("generator", opt.generator_path, "generator file")->required();
    auto* encode = add_common(app.add_subcommand("encode", "encode a message vector"), true);
    encode->add_option("generator", opt.generator_path, "generator file")->required();
    encode->add_option("x", opt.message_vector, "comma-separated message symbols")->required();
    auto* analyze = add_common(
        app.add_subcommand("analyze", "0-cycles, message graph, H-subgraphs, cycle classes"),
        true);
    auto* critical = add_common(
        app.add_subcommand("critical", "per-edge criticality with oracle ground truth"), true);
    auto* sweep = add_common(app.add_subcommand("sweep", "exhaustive property and equivalence sweeps"), false);
    sweep->add_option("--count", opt.trials, "randomized trials");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(opt);
        if (solve_cell->parsed()) return cmd_solve_cellular(opt);
        if (oracle->parsed()) return cmd_oracle(opt, false);
        if (oracle_cell->parsed()) return cmd_oracle(opt, true);
        if (verify->parsed()) return cmd_verify(opt);
        if (encode->parsed()) return cmd_encode(opt);
        if (analyze->parsed()) return cmd_analyze(opt);
        if (critical->parsed()) return cmd_critical(opt);
        if (sweep->parsed()) return cmd_sweep(opt);
    } catch (const msic::BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const msic::CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const msic::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
