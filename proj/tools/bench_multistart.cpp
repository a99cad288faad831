// Benchmark: serial reference vs OpenMP multistart on a fixed conic scene.
// The two paths must produce identical clustered output; the speedup is the
// interesting number.

#include <chrono>
#include <cstdio>

#include "cmv/scene.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cmv;

int main(int argc, char** argv)
{
    int starts = argc > 1 ? std::atoi(argv[1]) : 1000;
    Scene<Rat> sr = generate_scene(20240710, 2, CurveKind::Conic);
    Scene<double> s = to_f64(sr);
    attach_observations(s);
    apply_noise(s, 1e-3, 7);
    Arrangement<double> arr = s.arrangement();
    Objective obj = make_objective(arr, *s.observations, ModelKind::PlaneCurve);

    auto time_run = [&](bool parallel) {
        auto t0 = std::chrono::steady_clock::now();
        MultistartReport rep = multistart(obj, starts, 42, OptOptions{}, parallel);
        auto t1 = std::chrono::steady_clock::now();
        double dt = std::chrono::duration<double>(t1 - t0).count();
        return std::make_pair(dt, rep);
    };

    auto [t_serial, rep_serial] = time_run(false);
    auto [t_par, rep_par] = time_run(true);

    bool identical = rep_serial.points.size() == rep_par.points.size() &&
                     rep_serial.converged == rep_par.converged;
    for (size_t i = 0; identical && i < rep_serial.points.size(); ++i)
        identical = rep_serial.points[i].params == rep_par.points[i].params &&
                    rep_serial.points[i].hits == rep_par.points[i].hits;

    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif
    std::printf("starts            : %d\n", starts);
    std::printf("threads           : %d\n", threads);
    std::printf("serial            : %.3f s (%d converged, %zu clusters)\n", t_serial,
                rep_serial.converged, rep_serial.points.size());
    std::printf("openmp            : %.3f s (%d converged, %zu clusters)\n", t_par,
                rep_par.converged, rep_par.points.size());
    std::printf("speedup           : %.2fx\n", t_serial / t_par);
    std::printf("identical output  : %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
