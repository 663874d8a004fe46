// Acceptance suite: every release-gating requirement, one PASS/FAIL line
// each. CLI-level requirements spawn the actual binary; the equivalence
// sweeps call the library directly. Exits nonzero if anything fails.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "msic/sweep.hpp"

namespace {

std::string g_cli;
std::string g_fixtures;
int g_failures = 0;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = g_cli + " " + args + " 2>&1";
    RunResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return res;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, got);
    int status = pclose(pipe);
    res.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string grab_value(const std::string& out, const std::string& key) {
    std::istringstream ss(out);
    std::string line;
    while (std::getline(ss, line))
        if (line.rfind(key + " ", 0) == 0) return line.substr(key.size() + 1);
    return "";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int criterion, bool pass, double secs, const std::string& detail) {
    std::printf("criterion %2d %s (%.2f s): %s\n", criterion, pass ? "PASS" : "FAIL", secs,
                detail.c_str());
    if (!pass) ++g_failures;
}

void check_sweep(int criterion, const msic::SweepStats& st, double limit_s, double secs) {
    std::ostringstream d;
    d << st.name << ": " << st.checked << " checks, " << st.violations << " violations";
    bool pass = st.ok() && secs < limit_s;
    if (!st.first_violation.empty())
        d << "\n  first violation: " << st.first_violation;
    report(criterion, pass, secs, d.str());
}

} // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <cli-binary> <fixtures-dir>\n";
        return 2;
    }
    g_cli = argv[1];
    g_fixtures = argv[2];
    auto fixture = [&](const char* name) { return g_fixtures + "/" + name; };

    // 1: length-3 reproduction on the four-message two-sender instance
    {
        auto t0 = std::chrono::steady_clock::now();
        auto res = run_cli("solve " + fixture("instance_b.txt") + " --machine");
        double secs = seconds_since(t0);
        bool pass = res.exit_code == 0 && grab_value(res.out, "N_opt") == "3" && secs < 5.0;
        report(1, pass, secs, "solve instance_b: N_opt=" + grab_value(res.out, "N_opt") +
                                  " exit=" + std::to_string(res.exit_code));
    }

    // 2: cellular reproduction incl. verifying the published two-codeword code
    {
        auto t0 = std::chrono::steady_clock::now();
        auto solve = run_cli("solve-cellular " + fixture("instance_c.txt") + " --machine");
        auto verify = run_cli("verify " + fixture("instance_c.txt") + " " +
                              fixture("example6.gen") + " --machine");
        double secs = seconds_since(t0);
        bool pass = solve.exit_code == 0 && grab_value(solve.out, "N_opt") == "2" &&
                    verify.exit_code == 0 && grab_value(verify.out, "all") == "ok" && secs < 5.0;
        report(2, pass, secs,
               "solve-cellular instance_c: N_opt=" + grab_value(solve.out, "N_opt") +
                   ", verify example6 exit=" + std::to_string(verify.exit_code));
    }

    // 3: minrank == exhaustive oracle on every two-sender instance up to n=3
    {
        auto t0 = std::chrono::steady_clock::now();
        auto st = msic::sweep_minrank_vs_oracle(3);
        check_sweep(3, st, 600.0, seconds_since(t0));
    }

    // 4: cellular objective == coverage oracle on every pruned instance
    {
        auto t0 = std::chrono::steady_clock::now();
        auto st = msic::sweep_cellular_vs_oracle(3);
        check_sweep(4, st, 600.0, seconds_since(t0));
    }

    // 5: uncoded optimality iff no message-connected 0-cycle
    {
        auto t0 = std::chrono::steady_clock::now();
        auto st = msic::sweep_uncoded_iff(3);
        check_sweep(5, st, 600.0, seconds_since(t0));
    }

    // 6: every message-connected 0-cycle yields a verified length n-1 code
    {
        auto t0 = std::chrono::steady_clock::now();
        auto st = msic::sweep_spanning_tree(3);
        check_sweep(6, st, 600.0, seconds_since(t0));
    }

    // 7: sufficient uncriticality conditions never contradict the oracle
    {
        auto t0 = std::chrono::steady_clock::now();
        auto st = msic::sweep_criticality(3);
        check_sweep(7, st, 600.0, seconds_since(t0));
    }

    // 8: combinatorial overlap condition iff exhaustive overlap existence
    {
        auto t0 = std::chrono::steady_clock::now();
        auto st = msic::sweep_overlap_iff(3);
        check_sweep(8, st, 600.0, seconds_since(t0));
    }

    // 9: pruning cross-coverage side information never changes the optimum
    {
        auto t0 = std::chrono::steady_clock::now();
        auto st = msic::sweep_pruning_safety(3);
        check_sweep(9, st, 600.0, seconds_since(t0));
    }

    // 10: both cellular algorithms give 3 on the five-message instance
    {
        auto t0 = std::chrono::steady_clock::now();
        auto solve = run_cli("solve-cellular " + fixture("instance_d.txt") + " --machine");
        auto oracle = run_cli("oracle-cellular " + fixture("instance_d.txt") +
                              " --machine --max-n 5");
        double secs = seconds_since(t0);
        bool pass = grab_value(solve.out, "N_opt") == "3" &&
                    grab_value(oracle.out, "N_opt") == "3" && secs < 5.0;
        report(10, pass, secs,
               "instance_d: solver=" + grab_value(solve.out, "N_opt") +
                   " oracle=" + grab_value(oracle.out, "N_opt"));
    }

    // 11: no message-connected 0-cycle membership => uncoded equivalence
    {
        auto t0 = std::chrono::steady_clock::now();
        auto st = msic::sweep_uncoded_direction(3);
        check_sweep(11, st, 600.0, seconds_since(t0));
    }

    // 12: machine output is byte-identical across repeats and worker counts
    {
        auto t0 = std::chrono::steady_clock::now();
        std::vector<std::string> cmds = {
            "solve " + fixture("instance_a.txt"),
            "solve " + fixture("instance_b.txt"),
            "solve-cellular " + fixture("instance_c.txt"),
            "solve-cellular " + fixture("instance_d.txt"),
            "solve-cellular " + fixture("instance_e.txt"),
            "analyze " + fixture("instance_a.txt"),
            "analyze " + fixture("instance_d.txt"),
            "oracle " + fixture("instance_b.txt"),
            "oracle-cellular " + fixture("instance_c.txt"),
        };
        bool pass = true;
        std::string which;
        for (const auto& cmd : cmds) {
            std::string base = run_cli(cmd + " --machine --workers 1").out;
            for (const char* variant : {"--workers 1", "--workers 4", "--workers 4"}) {
                auto again = run_cli(cmd + " --machine " + variant).out;
                if (again != base) {
                    pass = false;
                    which = cmd + " (" + variant + ")";
                }
            }
        }
        double secs = seconds_since(t0);
        report(12, pass, secs,
               pass ? "9 commands x {1,4} workers x repeats are byte-identical"
                    : "output drifted for: " + which);
    }

    if (g_failures) std::printf("%d criterion(s) FAILED\n", g_failures);
    else std::printf("all criteria passed\n");
    return g_failures ? 1 : 0;
}
