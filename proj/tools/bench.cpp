// Benchmark comparing the OpenMP kernels against their serial reference
// implementations; also asserts that both produce identical results.

#include <chrono>
#include <cstdio>

#include "cliffcom/commutant.hpp"
#include "cliffcom/dense.hpp"
#include "cliffcom/magic.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void report(const char *name, double serial, double parallel, bool same) {
  std::printf("%-34s serial %7.3fs   openmp %7.3fs   speedup %5.2fx   %s\n", name, serial, parallel,
              parallel > 0 ? serial / parallel : 0.0, same ? "outputs identical" : "OUTPUTS DIFFER");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("openmp enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("openmp not available, both columns run serially\n");
#endif

  {
    auto t0 = Clock::now();
    cliffcom::dense::ClassTable ser = cliffcom::dense::build_class_table(2, 2, 4, false);
    double ts = seconds_since(t0);
    t0 = Clock::now();
    cliffcom::dense::ClassTable par = cliffcom::dense::build_class_table(2, 2, 4, true);
    double tp = seconds_since(t0);
    report("class bucketing (n=2, k=4)", ts, tp, ser.class_id == par.class_id && ser.keys == par.keys);
  }
  {
    auto basis = cliffcom::comm::reduced_monomial_basis(5, 2);
    auto t0 = Clock::now();
    auto ser = cliffcom::comm::gram_serial(basis);
    double ts = seconds_since(t0);
    t0 = Clock::now();
    auto par = cliffcom::comm::gram(basis);
    double tp = seconds_since(t0);
    report("gram assembly (k=5, 270 basis)", ts, tp, ser.expo == par.expo);
  }
  {
    auto s = cliffcom::dense::random_state(7, 99);
    auto t0 = Clock::now();
    auto ser = cliffcom::magic::pauli_expectations_serial(s);
    double ts = seconds_since(t0);
    t0 = Clock::now();
    auto par = cliffcom::magic::pauli_expectations(s);
    double tp = seconds_since(t0);
    report("pauli expectation table (n=7)", ts, tp, ser == par);
  }
  {
    cliffcom::dense::DenseOperator o(256, 2, 4, 2);
    uint64_t x = 5;
    for (auto &v : o.a) {
      x = x * 6364136223846793005ULL + 1442695040888963407ULL;
      v = cliffcom::dense::cplx(double(x >> 33) / double(1u << 31), double(x >> 40) / double(1u << 24));
    }
    auto t0 = Clock::now();
    auto ser = cliffcom::dense::exact_twirl_serial(o);
    double ts = seconds_since(t0);
    t0 = Clock::now();
    auto par = cliffcom::dense::exact_twirl(o);
    double tp = seconds_since(t0);
    report("exact twirl (n=2, k=4)", ts, tp, ser.max_abs_diff(par) == 0.0);
  }
  return 0;
}
