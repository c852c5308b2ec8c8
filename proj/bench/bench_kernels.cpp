// Serial reference kernels against their OpenMP versions: wall-clock time
// and agreement of the results.

#include <omp.h>

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <string>

#include "waldkit/kernels.hpp"
#include "waldkit/sconstr.hpp"
#include "waldkit/zoo.hpp"

using namespace waldkit;

namespace {

template <class Fn>
double millis(Fn&& fn, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t).count());
  }
  return best;
}

void row(const std::string& kernel, const std::string& input, double serial, double parallel, bool agree) {
  std::cout << std::left << std::setw(22) << kernel << std::setw(28) << input << std::right << std::fixed
            << std::setprecision(2) << std::setw(12) << serial << std::setw(12) << parallel << std::setw(9)
            << (parallel > 0 ? serial / parallel : 0.0) << "  " << (agree ? "same" : "DIFFERENT") << "\n";
}

void bench_category(const std::string& name, const FinCat& c, int repeats) {
  std::optional<kernels::AssocViolation> a;
  std::optional<kernels::AssocViolation> b;
  const double s = millis([&] { a = kernels::associativity_serial(c); }, repeats);
  const double p = millis([&] { b = kernels::associativity_parallel(c); }, repeats);
  const bool same = a.has_value() == b.has_value() && (!a || (a->f == b->f && a->g == b->g && a->h == b->h));
  row("associativity", name, s, p, same);

  const kernels::BlockLayout layout = kernels::block_layout(c);
  std::vector<MorId> ts;
  std::vector<MorId> tp;
  const double s2 = millis([&] { ts = kernels::block_table_serial(c, layout); }, repeats);
  const double p2 = millis([&] { tp = kernels::block_table_parallel(c, layout); }, repeats);
  row("block composition", name, s2, p2, ts == tp);
}

void bench_validation(const std::string& spec, int repeats) {
  const CtxPtr base = make_zoo(spec).ctx;
  WaldOptions serial;
  serial.parallel = false;
  WaldOptions parallel;
  CtxPtr a;
  CtxPtr b;
  const double s = millis([&] { a = rebuild_with_order(*base, SearchOrder{}, serial); }, repeats);
  const double p = millis([&] { b = rebuild_with_order(*base, SearchOrder{}, parallel); }, repeats);
  bool agree = true;
  for (const Span& sp : span_orbits(*base, false, 10'000'000).reps) {
    const Cocone x = a->pushout(sp.f, sp.g);
    const Cocone y = b->pushout(sp.f, sp.g);
    agree = agree && x.apex == y.apex && x.u == y.u && x.v == y.v;
  }
  row("pushout table", spec, s, p, agree);
}

void bench_filtered(const std::string& spec, int m, int repeats) {
  const CtxPtr base = make_zoo(spec).ctx;
  FilteredOptions serial;
  serial.wald.parallel = false;
  FilteredPtr a;
  FilteredPtr b;
  const double s = millis([&] { a = build_Fm(base, m, serial); }, repeats);
  const double p = millis([&] { b = build_Fm(base, m); }, repeats);
  row("F_m cofibrations", spec + " m=" + std::to_string(m), s, p, a->ctx->pair.cof == b->ctx->pair.cof);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::cout << "threads: " << omp_get_max_threads() << ", best of " << repeats << " runs (ms)\n";
  std::cout << std::left << std::setw(22) << "kernel" << std::setw(28) << "input" << std::right << std::setw(12)
            << "serial" << std::setw(12) << "parallel" << std::setw(9) << "speedup" << "  result\n";
  for (const char* spec : {"vect:q=2,N=3", "pointed_sets:N=4", "vect:q=3,N=2"}) {
    bench_category(spec, make_zoo(spec).ctx->cat(), repeats);
  }
  const CtxPtr v = make_zoo("vect:q=2,N=2").ctx;
  bench_category("F_1(vect:q=2,N=2)", build_Fm(v, 1)->cat(), repeats);
  for (const char* spec : {"vect:q=2,N=3", "pointed_sets:N=4", "vect:q=2,N=4"}) bench_validation(spec, repeats);
  bench_filtered("vect:q=2,N=2", 2, repeats);
  bench_filtered("pointed_sets:N=3", 2, repeats);
  return 0;
}
