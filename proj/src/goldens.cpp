#include "linlab/goldens.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "linlab/fault.hpp"
#include "linlab/game.hpp"
#include "linlab/linearize.hpp"

namespace linlab {

namespace {

std::vector<Decision> advances(std::initializer_list<std::pair<Proc, int>> runs) {
  std::vector<Decision> out;
  for (auto [p, k] : runs)
    for (int i = 0; i < k; ++i) out.push_back(Decision::advance(p));
  return out;
}

RunResult run_script(const SimConfig& sim, const std::vector<std::vector<Action>>& scripts,
                     std::vector<Decision> decisions) {
  ScriptAdversary adversary(std::move(decisions));
  auto factory = [&](Proc p) -> std::unique_ptr<Program> {
    return std::make_unique<ScriptProgram>(scripts[p]);
  };
  return run(sim, factory, adversary);
}

SimConfig one_register_sim(BackendKind backend, std::uint32_t n) {
  SimConfig sim;
  sim.n = n;
  sim.registers = {RegisterSpec{"R", backend, Value(std::int64_t{0}), std::nullopt}};
  return sim;
}

TraceMeta mwmr_meta(const SimConfig& sim) {
  TraceMeta meta;
  meta.trace = "mwmr";
  meta.n = sim.n;
  meta.seed = sim.seed;
  meta.registers = sim.registers;
  return meta;
}

}  // namespace

TraceFile scripted_vector_overlap() {
  SimConfig sim = one_register_sim(BackendKind::alg_vector, 3);
  std::vector<std::vector<Action>> scripts = {
      {Action::write("R", Value(std::int64_t{1}))},
      {Action::write("R", Value(std::int64_t{2})), Action::read("R")},
      {Action::write("R", Value(std::int64_t{3}))},
  };
  // writer 1 invokes and stalls; writer 2 overtakes mid-way through writer
  // 2's timestamp; writer 2 lands first but batches after writer 3
  std::vector<Decision> d = advances({
      {0, 1},  // op 1 starts
      {1, 1},  // op 2 starts
      {2, 1},  // op 3 starts
      {2, 2},  // op 3 copies entries 1 and 2
      {1, 5},  // op 2 finishes: stores (2,[0,1,0])
      {2, 3},  // op 3 finishes: stores (3,[0,0,1])
      {0, 5},  // op 1 finishes: stores (1,[1,1,1])
      {1, 5},  // the read collects everything and returns (1,[1,1,1])
      {0, 1},
      {1, 1},
      {2, 1},  // everyone returns
  });
  RunResult r = run_script(sim, scripts, std::move(d));
  return TraceFile{mwmr_meta(sim), std::move(r.history)};
}

CounterexampleTriple build_counterexample() {
  SimConfig sim = one_register_sim(BackendKind::alg_lamport, 3);
  const Value v1{std::int64_t{1}}, v2{std::int64_t{2}}, v3{std::int64_t{3}};

  std::vector<std::vector<Action>> case1 = {
      {Action::write("R", v1)},
      {Action::write("R", v2)},
      {Action::read("R")},
  };
  std::vector<std::vector<Action>> case2 = {
      {Action::write("R", v1)},
      {Action::write("R", v2)},
      {Action::write("R", v3), Action::read("R")},
  };

  std::vector<Decision> g = advances({
      {0, 1},  // first write starts
      {0, 2},  // and collects two cells
      {1, 1},  // second write starts
      {1, 4},  // collects everything, stores (2,<1,2>), returns
  });
  auto extend = [](std::vector<Decision> base, std::vector<Decision> tail) {
    base.insert(base.end(), tail.begin(), tail.end());
    return base;
  };
  std::vector<Decision> h1 = extend(g, advances({
                                           {0, 2},  // last cell, stores (1,<1,1>)
                                           {2, 5},  // read returns (2,<1,2>)
                                           {0, 1},
                                           {1, 1},
                                           {2, 1},
                                       }));
  std::vector<Decision> h2 = extend(g, advances({
                                           {2, 5},  // third write stores (3,<2,3>)
                                           {0, 2},  // first write now stores (1,<3,1>)
                                           {2, 5},  // read returns (1,<3,1>)
                                           {0, 1},
                                           {1, 1},
                                           {2, 1},
                                       }));

  CounterexampleTriple out;
  out.g = TraceFile{mwmr_meta(sim), run_script(sim, case1, g).history};
  out.h_case1 = TraceFile{mwmr_meta(sim), run_script(sim, case1, h1).history};
  out.h_case2 = TraceFile{mwmr_meta(sim), run_script(sim, case2, h2).history};
  if (!is_event_prefix(out.g.history, out.h_case1.history) ||
      !is_event_prefix(out.g.history, out.h_case2.history))
    throw std::logic_error("counterexample base is not a prefix of its extensions");
  return out;
}

TraceFile adversarial_game_trace(std::uint32_t n, std::uint64_t seed, std::uint64_t rounds) {
  game::GameConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  cfg.rounds = rounds;
  cfg.backend = BackendKind::lin_adv;
  cfg.adversary = game::AdversaryKind::retro;
  game::GameRunResult r = game::run_game(cfg);

  TraceFile t;
  t.meta.trace = "game";
  t.meta.n = n;
  t.meta.seed = seed;
  t.meta.adversary = game::adversary_name(cfg.adversary);
  t.meta.bounded = cfg.bounded;
  t.meta.rounds = rounds;
  t.meta.registers = game::game_registers(cfg.backend);
  t.history = std::move(r.run.history);
  return t;
}

std::vector<GoldenFile> generate_goldens() {
  std::vector<GoldenFile> files;

  TraceFile fig3 = scripted_vector_overlap();
  files.push_back({"vector_overlap.trace.jsonl", trace_to_string(fig3)});
  VectorLinResult lin = vector_run_linearization(fig3.history);
  files.push_back({"vector_overlap.lin.jsonl", linearization_to_string(lin.lin)});

  CounterexampleTriple ce = build_counterexample();
  files.push_back({"lamport_g.trace.jsonl", trace_to_string(ce.g)});
  files.push_back({"lamport_case1.trace.jsonl", trace_to_string(ce.h_case1)});
  files.push_back({"lamport_case2.trace.jsonl", trace_to_string(ce.h_case2)});

  files.push_back(
      {"game_theorem1_n3.trace.jsonl", trace_to_string(adversarial_game_trace(3, 2026, 2))});
  return files;
}

std::vector<std::string> check_goldens_against(const std::string& dir) {
  std::vector<std::string> problems;
  for (const GoldenFile& f : generate_goldens()) {
    std::filesystem::path path = std::filesystem::path(dir) / f.name;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      problems.push_back(f.name + ": missing from " + dir);
      continue;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    std::string stored = buf.str();
    if (stored == f.contents) continue;
    // name the first differing line
    std::istringstream a(stored), b(f.contents);
    std::string la, lb;
    std::size_t line = 0;
    while (true) {
      ++line;
      bool ga = static_cast<bool>(std::getline(a, la));
      bool gb = static_cast<bool>(std::getline(b, lb));
      if (!ga && !gb) break;
      if (!ga || !gb || la != lb) {
        problems.push_back(f.name + ": first difference at line " + std::to_string(line));
        break;
      }
    }
  }
  return problems;
}

void write_goldens_to(const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const GoldenFile& f : generate_goldens()) {
    std::ofstream out(std::filesystem::path(dir) / f.name, std::ios::binary);
    if (!out) throw TraceError("cannot write golden " + f.name);
    out << f.contents;
  }
}

}  // namespace linlab
