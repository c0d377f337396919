#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cohorts/arch_system.hpp"
#include "cohorts/containment.hpp"

using namespace cohorts;

namespace {

template <class F>
double timed(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int max_n = argc > 1 ? std::atoi(argv[1]) : 11;
    if (max_n < 1 || max_n > 16) {
        std::fprintf(stderr, "usage: bench_parallel [max_host_size in 1..16]\n");
        return 2;
    }
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("avoider counting, serial reference vs worker-parallel scan\n");
    std::printf("threads available: %d%s\n\n", threads,
                threads == 1 ? " (expect parity, not speedup)" : "");
    std::printf("%-10s %4s %14s %10s %10s %8s\n", "pattern", "n", "avoiders", "serial_s",
                "parallel_s", "speedup");

    std::vector<std::string> patterns = {"(())", "()()()", "((()))", "(()())()"};
    for (const std::string& p : patterns) {
        ArchSystem pat = parse(p);
        int n = max_n;
        std::uint64_t a = 0, b = 0;
        double ts = timed([&] { a = count_avoiders_serial(pat, n); });
        double tp = timed([&] { b = count_avoiders(pat, n); });
        if (a != b) {
            std::fprintf(stderr, "MISMATCH on %s at n=%d: serial %llu, parallel %llu\n",
                         p.c_str(), n, static_cast<unsigned long long>(a),
                         static_cast<unsigned long long>(b));
            return 1;
        }
        std::printf("%-10s %4d %14llu %10.3f %10.3f %7.2fx\n", p.c_str(), n,
                    static_cast<unsigned long long>(a), ts, tp, ts / (tp > 0 ? tp : 1e-9));
    }
    std::printf("\nresults agree pairwise; timings are wall clock.\n");
    return 0;
}
