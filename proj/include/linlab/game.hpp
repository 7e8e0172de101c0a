#pragma once

#include <optional>
#include <string>
#include <vector>

#include "linlab/sim.hpp"

namespace linlab {
namespace game {

inline constexpr const char* kR1 = "R1";
inline constexpr const char* kR2 = "R2";
inline constexpr const char* kC = "C";

enum class AdversaryKind {
  random,     // uniform scheduling; atomic / implemented back-ends only
  retro,      // keeps every round alive by ordering the two host writes
              // after seeing the coin ("theorem1"); needs lin-adv
  precommit,  // same schedule but the write order is fixed when the first
              // host write returns, before the coin ("theorem1-wsl")
};

std::string adversary_name(AdversaryKind k);
std::optional<AdversaryKind> adversary_from_name(const std::string& name);

struct GameConfig {
  std::uint32_t n = 3;
  std::uint64_t seed = 0;
  std::uint64_t rounds = 100;  // script cap for the scripted adversaries
  BackendKind backend = BackendKind::atomic;
  AdversaryKind adversary = AdversaryKind::random;
  bool bounded = false;
  std::uint64_t max_steps = 1'000'000;
};

// Register table for one game instance. R1 and C start as bottom, R2 as 0;
// every process writes before reading them in round 1, so the choice is
// behavior-neutral and fixed for determinism.
std::vector<RegisterSpec> game_registers(BackendKind backend);

// The two-phase round program of one process: hosts 0 and 1 write their
// round token into R1 (process 0 also flips a coin into C) and stay only if
// the round counter reaches n-2; players clear R1 and C, read R1 twice and C
// once, leave unless they saw both round tokens in coin order, and then
// reset-and-increment R2.
std::unique_ptr<Program> game_program(Proc i, std::uint32_t n, bool bounded);

std::unique_ptr<Adversary> make_adversary(const GameConfig& cfg);

// Per-process, per-round account of what happened, decoded from the history.
struct HostRound {
  std::uint64_t round = 0;
  Time entered = 0;               // invoke of the round's R1 write
  std::optional<Time> r1_done;    // respond of that write
  std::optional<std::int64_t> coin;  // process 0 only
  std::optional<Time> coin_done;  // respond of the C write
  std::optional<Time> reset_invoked;
  std::optional<std::int64_t> v;  // R2 read result
  bool continued = false;         // saw v >= n-2
  bool complete = false;          // round fully present in the history
};

struct PlayerRound {
  std::uint64_t round = 0;
  Time entered = 0;  // invoke of the round's R1 clear
  std::optional<Plain> u1, u2, c;
  std::optional<Time> guard_time;  // respond of the C read
  bool exited_blank = false;       // guard: some read returned bottom
  bool exited_mismatch = false;    // guard: tokens out of coin order
  std::optional<Time> reset_invoked;   // phase-2 R2 clear
  std::optional<std::int64_t> v;       // R2 read result
  std::optional<Time> incr_responded;  // respond of the R2 increment write
  bool complete = false;
};

struct GameMilestones {
  std::vector<std::vector<HostRound>> hosts;     // index 0,1
  std::vector<std::vector<PlayerRound>> players; // index 0..n-3 for procs 2..n-1
};

GameMilestones parse_game_rounds(const History& h, std::uint32_t n, bool bounded);

// The safety facts that hold in every run over linearizable registers:
// a player that reaches its phase-2 reset in round j read both round-j
// tokens; both hosts entered round j before that; a host entering round j+1
// was preceded by every player's round-j increment; a player evaluating the
// token guard holds the coin process 0 wrote that round; and the tokens a
// player checks in round j always carry round number j.
std::vector<std::string> check_game_safety(const GameMilestones& m, std::uint32_t n, bool bounded);

struct GameRunResult {
  RunResult run;
  GameMilestones milestones;
  std::uint64_t termination_round = 0;  // max round entered; 0 when unknown
};

GameRunResult run_game(const GameConfig& cfg);

// Exit/continue decisions per process per round, for variant comparison.
std::vector<std::vector<std::string>> decision_table(const GameMilestones& m);

}  // namespace game
}  // namespace linlab
