// Compares the serial reference paths against the OpenMP kernels on the two
// scan-heavy operations: repair-space search and satisfying-team counting.
// The workloads are GMP-allocation bound, so speedups track the allocator's
// multicore behaviour rather than the core count.
#include <chrono>
#include <cstdio>

#include "semiteam/cpoly.hpp"
#include "semiteam/repairs.hpp"

using namespace semiteam;

namespace {

double seconds(const std::function<void()>& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void row(const char* name, double serial, double omp, bool equal) {
  std::printf("%-30s %10.3fs %10.3fs %8.2fx  %s\n", name, serial, omp,
              omp > 0 ? serial / omp : 0.0, equal ? "results match" : "MISMATCH");
}

} // namespace

int main() {
  std::printf("%-30s %11s %11s %9s\n", "kernel", "serial", "openmp", "speedup");

  {
    SpecPtr rat = specs::rational();
    UniversePtr u = Universe::of({"a", "b", "c"});
    KTeam team({"x", "y"}, u, rat);
    team.set_weight({0, 0}, parse_value(rat, "1/4"));
    team.set_weight({1, 2}, parse_value(rat, "1/2"));
    team.set_weight({2, 1}, parse_value(rat, "1/4"));
    RepairSpace space;
    for (const char* w : {"0", "1/4", "1/2", "3/4"}) space.weights.push_back(parse_value(rat, w));

    RepairResult rs, ro;
    double ts = seconds(
        [&] { rs = repair_min_nonindep(team, {"x"}, {"y"}, space, ExecMode::Serial); });
    double to = seconds(
        [&] { ro = repair_min_nonindep(team, {"x"}, {"y"}, space, ExecMode::OpenMP); });
    bool equal = rs.distance == ro.distance && rs.repairs.size() == ro.repairs.size();
    for (std::size_t i = 0; equal && i < rs.repairs.size(); ++i)
      equal = rs.repairs[i] == ro.repairs[i];
    row("nonindep repair scan (4^9)", ts, to, equal);
    std::printf("  minimisers: %zu at distance %s\n", rs.repairs.size(),
                rs.distance.str().c_str());
  }

  {
    SpecPtr nat = specs::natural();
    UniversePtr u = Universe::of({"a", "b", "c"});
    KTeam team({"x", "y"}, u, nat);
    team.set_weight({0, 0}, Value::from_uint(nat, 2));
    team.set_weight({1, 2}, Value::from_uint(nat, 1));
    team.set_weight({2, 1}, Value::from_uint(nat, 3));
    RepairSpace space;
    for (unsigned long w = 0; w <= 3; ++w) space.weights.push_back(Value::from_uint(nat, w));
    std::vector<DependencyAtom> constraints{parse_atom("dep(x;y)", {})};

    RepairResult rs, ro;
    double ts = seconds([&] { rs = repair_symmetric(team, constraints, space, ExecMode::Serial); });
    double to = seconds([&] { ro = repair_symmetric(team, constraints, space, ExecMode::OpenMP); });
    bool equal = rs.distance == ro.distance && rs.repairs.size() == ro.repairs.size();
    for (std::size_t i = 0; equal && i < rs.repairs.size(); ++i)
      equal = rs.repairs[i] == ro.repairs[i];
    row("symmetric repair scan (4^9)", ts, to, equal);
  }

  {
    SpecPtr spec = specs::boolean();
    Structure a;
    a.universe = Universe::of({"a", "b"});
    a.vocab.arity["S"] = 1;
    a.relations["S"] = {{0}};
    TfPtr f = parse_team("S(x) | dep(x;y)", a.vocab);
    std::vector<Value> weights{Value::zero(spec), Value::one(spec)};

    mpz_class cs, co;
    double ts = seconds([&] {
      cs = count_satisfying_teams(a, f, {"x", "y", "z"}, weights, SplitStrategy::exact(),
                                  ExecMode::Serial);
    });
    double to = seconds([&] {
      co = count_satisfying_teams(a, f, {"x", "y", "z"}, weights, SplitStrategy::exact(),
                                  ExecMode::OpenMP);
    });
    row("team counting (2^8 teams)", ts, to, cs == co);
    std::printf("  satisfying teams: %s\n", cs.get_str().c_str());
  }

  return 0;
}
