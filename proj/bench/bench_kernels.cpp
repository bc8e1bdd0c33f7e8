// Serial vs OpenMP timings for the data-parallel kernels, plus an output
// equality check for each pair.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ztorch/affinity.hpp"
#include "ztorch/parallel.hpp"
#include "ztorch/placement.hpp"
#include "ztorch/workload.hpp"

using namespace ztorch;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

template <class Out>
void row(const char* name, int reps, const std::function<Out(Exec)>& kernel) {
  Out a, b;
  const double ts = best_of(reps, [&] { a = kernel(Exec::serial); });
  const double tp = best_of(reps, [&] { b = kernel(Exec::parallel); });
  std::printf("%-22s %12.3f %12.3f %8.2fx  %s\n", name, ts * 1e3, tp * 1e3, ts / tp, a == b ? "same" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel kernel timings"};
  int n_vnfs = 200000;
  int reps = 5;
  int threads = 0;
  app.add_option("--vnfs", n_vnfs, "population size")->check(CLI::PositiveNumber);
  app.add_option("--reps", reps, "repetitions, best time kept")->check(CLI::PositiveNumber);
  app.add_option("--threads", threads, "OpenMP threads (0 keeps the runtime default)");
  CLI11_PARSE(app, argc, argv);
  set_threads(threads);

  WorkloadConfig wc;
  wc.n_vnfs = n_vnfs;
  wc.horizon = 1000;
  const auto means = draw_vnf_population(wc, baseline_set(wc.baselines));
  std::printf("vnfs=%d threads=%d\n", n_vnfs, max_threads());
  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial ms", "parallel ms", "speedup");

  {
    // One generator per path; both advance one slot per call, so outputs match.
    TraceGenerator gs(means, 0.1, 7), gp(means, 0.1, 7);
    row<std::vector<KpiVector>>("trace next", reps, [&](Exec e) {
      std::vector<KpiVector> out(means.size());
      (e == Exec::serial ? gs : gp).next(out, e);
      return out;
    });
  }

  TraceGenerator gen(means, 0.1, 7);
  SampleWindow window(means.size(), 3);
  window.begin_epoch();
  std::vector<KpiVector> snap(means.size());
  for (int k = 0; k < 10; ++k) {
    gen.next(snap);
    window.add(snap);
  }
  row<std::vector<KpiVector>>("window mean", reps, [&](Exec e) { return window.per_vnf_mean(e); });

  std::vector<ProfilePoint> pts;
  pts.reserve(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) pts.push_back({static_cast<int>(i), snap[i]});
  const auto centers = initial_centers(8, 3);
  row<std::vector<int>>("assign nearest", reps, [&](Exec e) {
    std::vector<int> out(pts.size());
    assign_nearest(pts, centers, out, e);
    return out;
  });

  EkmOptions opt;
  opt.exec = Exec::serial;
  const auto model = ekm(pts, 8, GridSchedule::for_points(pts.size(), 3), opt).model;
  row<std::vector<double>>("variances", reps, [&](Exec e) { return compute_variances(window, model, e); });
  gen.next(snap);
  row<std::vector<int>>("detect deviations", reps, [&](Exec e) { return detect_deviations(model, snap, e); });
  row<std::vector<int>>("ekm", 1, [&](Exec e) {
    EkmOptions o;
    o.exec = e;
    return ekm(pts, 8, GridSchedule::for_points(pts.size(), 3), o).model.group_of;
  });
}
