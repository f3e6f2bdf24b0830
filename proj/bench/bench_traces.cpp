// Frobenius traces: serial reference against the OpenMP kernel.
#include <chrono>
#include <cstdio>

#include <CLI11.hpp>
#include <omp.h>

#include "g2bsd/curve.hpp"
#include "g2bsd/pointcount.hpp"

using namespace g2bsd;

int main(int argc, char** argv)
{
    u64 bound = 300000;
    int repeat = 3, threads = 0;
    CLI::App app{"Point-counting benchmark"};
    app.add_option("--bound", bound, "Largest prime");
    app.add_option("--repeat", repeat, "Timed runs per kernel");
    app.add_option("--threads", threads, "OpenMP threads (0: all)");
    CLI11_PARSE(app, argc, argv);

    auto F = CurveModel::from_ints({0, -1, 1, -2, 2, -4, 2}, {1, 0, 1, 1}).sextic();
    std::vector<u64> ps;
    for (u64 p : primes_up_to(bound))
        if (p > 67) ps.push_back(p);
    if (threads <= 0) threads = omp_get_max_threads();

    auto time = [&](auto&& f) {
        double best = 1e300;
        std::vector<i64> r;
        for (int i = 0; i < repeat; ++i) {
            auto t0 = std::chrono::steady_clock::now();
            r = f();
            best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        return std::pair{best, r};
    };
    auto [ts, rs] = time([&] { return traces_serial(F, ps); });
    auto [to, ro] = time([&] { return traces_omp(F, ps, threads); });
    double work = 0;
    for (u64 p : ps) work += static_cast<double>(p);
    std::printf("primes %zu up to %llu, %d threads\n", ps.size(), static_cast<unsigned long long>(bound), threads);
    std::printf("serial %.3f s (%.2f ns per x)\n", ts, 1e9 * ts / work);
    std::printf("omp    %.3f s (%.2f ns per x), speedup %.2f\n", to, 1e9 * to / work, ts / to);
    std::printf("results %s\n", rs == ro ? "identical" : "DIFFER");
    return rs == ro ? 0 : 1;
}
