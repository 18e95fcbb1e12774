// Benchmark: serial reference scan vs the OpenMP scan on the three-loop
// fixture (full N0 = 8500 sweep in the flexible-lattice model).

#include <chrono>
#include <cstdlib>
#include <iostream>

#include <omp.h>

#include "ultra/decider.hpp"

namespace {

ultra::Framework three_loop_fixture() {
  ultra::Framework fw;
  fw.graph.d = 2;
  fw.graph.n_vertices = 1;
  fw.graph.edges = {{0, 0, {1, 0}}, {0, 0, {0, 1}}, {0, 0, {1, 1}}};
  fw.positions = {{ultra::Rat(0), ultra::Rat(0)}};
  fw.lattice = {{ultra::Rat(1), ultra::Rat(0)},
                {ultra::Rat(0), ultra::Rat(1)}};
  return fw;
}

double run_once(const ultra::Framework& fw, int threads) {
  ultra::DecideOptions opts;
  opts.threads = threads;
  auto t0 = std::chrono::steady_clock::now();
  ultra::Verdict v = ultra::decide(fw, ultra::Model::FlexibleLattice, opts);
  std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  if (v.kind != ultra::VerdictKind::Ultrarigid) {
    std::cerr << "unexpected verdict " << ultra::verdict_name(v.kind) << "\n";
    std::exit(1);
  }
  return dt.count();
}

}  // namespace

int main(int argc, char** argv) {
  int max_threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  ultra::Framework fw = three_loop_fixture();

  double serial = run_once(fw, 1);
  std::cout << "serial reference: " << serial << " s\n";
  for (int t = 2; t <= max_threads; t *= 2) {
    double par = run_once(fw, t);
    std::cout << "omp x" << t << ":          " << par << " s  (speedup "
              << serial / par << ")\n";
  }
  return 0;
}
