// Self-check suite runner: one line per criterion, nonzero exit on any
// failure.  `--quick` shrinks the longest simulations, `--seed N` and
// `--workers N` override the defaults.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>

#include "mcmccert/verify.hpp"

int main(int argc, char** argv) {
    mcmccert::AcceptanceOptions opt;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--quick") == 0) {
            opt.quick = true;
        } else if (std::strcmp(argv[i], "--seed") == 0 && i + 1 < argc) {
            opt.seed = std::strtoull(argv[++i], nullptr, 10);
        } else if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) {
            opt.workers = static_cast<unsigned>(std::strtoul(argv[++i], nullptr, 10));
        } else {
            std::fprintf(stderr, "usage: %s [--quick] [--seed N] [--workers N]\n", argv[0]);
            return 2;
        }
    }

    try {
        const auto results = mcmccert::run_acceptance(opt);
        int failed = 0;
        for (const auto& r : results) {
            std::printf("[%s] %s (%s) (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                        r.detail.c_str(), r.seconds);
            failed += !r.pass;
        }
        std::printf("%d/%zu checks passed\n", static_cast<int>(results.size()) - failed,
                    results.size());
        return failed == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "acceptance suite aborted: %s\n", e.what());
        return 1;
    }
}
