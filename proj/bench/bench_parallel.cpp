// Serial reference vs OpenMP kernels: seed ensemble and brute-force grid.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "nswbandit/harness.hpp"
#include "nswbandit/nsw.hpp"
#include "nswbandit/simplex_opt.hpp"

using namespace nswbandit;

namespace {

template <typename F>
double time_it(F&& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool same)
{
    std::printf("%-28s serial %8.3f s  parallel %8.3f s  speedup %5.2fx  %s\n", name, serial, parallel,
                serial / parallel, same ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv)
{
    const std::uint64_t horizon = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20000;
    const std::size_t n_seeds = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 8;
    std::printf("threads=%d horizon=%llu seeds=%zu\n", omp_get_max_threads(),
                static_cast<unsigned long long>(horizon), n_seeds);

    const BanditInstance inst = benchmark_instance();
    const OptimalPolicy opt = optimal_nsw(inst);
    const auto seeds = seed_range(0, n_seeds);
    for (const AgentKind& kind : {AgentKind{EpsilonGreedySpec{ScheduleMode::A}}, AgentKind{UcbSpec{ScheduleMode::A}}}) {
        EnsembleResult ser{};
        EnsembleResult par{};
        const double ts = time_it([&] { ser = ensemble_regret_serial(inst, kind, horizon, seeds, opt); });
        const double tp = time_it([&] { par = ensemble_regret(inst, kind, horizon, seeds, opt); });
        bool same = ser.curve.points.size() == par.curve.points.size();
        for (std::size_t i = 0; same && i < ser.curve.points.size(); ++i) {
            same = ser.curve.points[i].mean_cum_regret == par.curve.points[i].mean_cum_regret;
        }
        report(("ensemble " + agent_label(kind)).c_str(), ts, tp, same);
    }

    const RewardMatrix mu{{0.9, 0.1, 0.5, 0.3, 0.2}, {0.1, 0.9, 0.5, 0.4, 0.6}, {0.5, 0.5, 0.6, 0.7, 0.1}};
    auto f = [&](const Policy& p) { return nsw_eval(p, mu); };
    OptResult ser(Policy::uniform(5));
    OptResult par(Policy::uniform(5));
    const double ts = time_it([&] { ser = brute_force_maximize_serial(f, 5, 60); });
    const double tp = time_it([&] { par = brute_force_maximize(f, 5, 60); });
    report("brute force K=5 R=60", ts, tp, ser.policy == par.policy && ser.objective_value == par.objective_value);
    return 0;
}
