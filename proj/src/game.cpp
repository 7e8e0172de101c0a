#include "linlab/game.hpp"

#include <algorithm>
#include <deque>

#include "linlab/fault.hpp"

namespace linlab {
namespace game {

std::string adversary_name(AdversaryKind k) {
  switch (k) {
    case AdversaryKind::random: return "random";
    case AdversaryKind::retro: return "theorem1";
    case AdversaryKind::precommit: return "theorem1-wsl";
  }
  return "?";
}

std::optional<AdversaryKind> adversary_from_name(const std::string& name) {
  if (name == "random") return AdversaryKind::random;
  if (name == "theorem1") return AdversaryKind::retro;
  if (name == "theorem1-wsl") return AdversaryKind::precommit;
  return std::nullopt;
}

std::vector<RegisterSpec> game_registers(BackendKind backend) {
  return {RegisterSpec{kR1, backend, Value(Bot{}), std::nullopt},
          RegisterSpec{kR2, backend, Value(std::int64_t{0}), std::nullopt},
          RegisterSpec{kC, backend, Value(Bot{}), std::nullopt}};
}

namespace {

Value host_token(std::int64_t bit, std::uint64_t round, bool bounded) {
  if (bounded) return Value(bit);
  return Value(BitRound{bit, round});
}

class HostProgram final : public Program {
 public:
  HostProgram(Proc i, std::uint32_t n, bool bounded) : i_(i), n_(n), bounded_(bounded) {}

  Action step(const LastResult& last) override {
    switch (pc_) {
      case 0:
        pc_ = 1;
        return Action::write(kR1, host_token(i_, j_, bounded_));
      case 1:
        if (i_ == 0) {
          pc_ = 2;
          return Action::coin();
        }
        pc_ = 4;
        return Action::write(kR2, Value(std::int64_t{0}));
      case 2:
        c_ = last.coin;
        pc_ = 3;
        return Action::write(kC, Value(std::int64_t{c_}));
      case 3:
        pc_ = 4;
        return Action::write(kR2, Value(std::int64_t{0}));
      case 4:
        pc_ = 5;
        return Action::read(kR2);
      case 5: {
        const auto* v = std::get_if<std::int64_t>(&last.value);
        if (!v || *v < static_cast<std::int64_t>(n_) - 2) return Action::ret();
        ++j_;
        pc_ = 1;
        return Action::write(kR1, host_token(i_, j_, bounded_));
      }
      default: return Action::ret();
    }
  }

  std::uint64_t round() const override { return j_; }

 private:
  Proc i_;
  std::uint32_t n_;
  bool bounded_;
  std::uint64_t j_ = 1;
  int pc_ = 0;
  int c_ = 0;
};

class PlayerProgram final : public Program {
 public:
  PlayerProgram(std::uint32_t n, bool bounded) : n_(n), bounded_(bounded) { (void)n_; }

  Action step(const LastResult& last) override {
    switch (pc_) {
      case 0:
        pc_ = 1;
        return Action::write(kR1, Value(Bot{}));
      case 1:
        pc_ = 2;
        return Action::write(kC, Value(Bot{}));
      case 2:
        pc_ = 3;
        return Action::read(kR1);
      case 3:
        u1_ = last.value;
        pc_ = 4;
        return Action::read(kR1);
      case 4:
        u2_ = last.value;
        pc_ = 5;
        return Action::read(kC);
      case 5: {
        Plain c = last.value;
        if (std::holds_alternative<Bot>(u1_) || std::holds_alternative<Bot>(u2_) ||
            std::holds_alternative<Bot>(c))
          return Action::ret();
        const auto* ci = std::get_if<std::int64_t>(&c);
        if (!ci) return Action::ret();
        Plain want1 = bounded_ ? Plain(*ci) : Plain(BitRound{*ci, j_});
        Plain want2 = bounded_ ? Plain(1 - *ci) : Plain(BitRound{1 - *ci, j_});
        if (!(u1_ == want1) || !(u2_ == want2)) return Action::ret();
        pc_ = 6;
        return Action::write(kR2, Value(std::int64_t{0}));
      }
      case 6:
        pc_ = 7;
        return Action::read(kR2);
      case 7:
        v_ = std::get<std::int64_t>(last.value);
        pc_ = 8;
        return Action::local();
      case 8:
        pc_ = 9;
        return Action::write(kR2, Value(v_ + 1));
      case 9:
        ++j_;
        pc_ = 1;
        return Action::write(kR1, Value(Bot{}));
      default: return Action::ret();
    }
  }

  std::uint64_t round() const override { return j_; }

 private:
  std::uint32_t n_;
  bool bounded_;
  std::uint64_t j_ = 1;
  int pc_ = 0;
  Plain u1_, u2_;
  std::int64_t v_ = 0;
};

}  // namespace

std::unique_ptr<Program> game_program(Proc i, std::uint32_t n, bool bounded) {
  if (n < 3) throw ConfigError("the game needs at least 3 processes");
  if (i < 2) return std::make_unique<HostProgram>(i, n, bounded);
  return std::make_unique<PlayerProgram>(n, bounded);
}

namespace {

// Scripted schedule shared by the retroactive and pre-committing modes.
// With adversary-controlled back-ends it reproduces, round after round, the
// overlap of the two host writes with the players' first reads; with atomic
// or implemented back-ends it runs each operation solo in the equivalent
// order. Decisions are planned one phase at a time: everything up to the
// coin flip, then the remainder of the round once the outcome is visible.
class ScheduledGameAdversary final : public Adversary {
 public:
  explicit ScheduledGameAdversary(const GameConfig& cfg)
      : n_(cfg.n),
        cap_(cfg.rounds),
        bounded_(cfg.bounded),
        precommit_(cfg.adversary == AdversaryKind::precommit),
        adversarial_(cfg.backend == BackendKind::lin_adv || cfg.backend == BackendKind::wsl_adv),
        backend_(cfg.backend) {}

  std::optional<Decision> next(const AdversaryView& view) override {
    if (queue_.empty()) replan(view);
    if (queue_.empty()) return std::nullopt;
    Decision d = queue_.front();
    queue_.pop_front();
    return d;
  }

 private:
  enum class Plan { round_start, after_coin, done };

  std::vector<Proc> players() const {
    std::vector<Proc> ps;
    for (Proc p = 2; p < n_; ++p) ps.push_back(p);
    return ps;
  }

  // decision builders; op ids mirror the kernel's invoke counter
  OpId inv(Proc p) {
    queue_.push_back(Decision::advance(p));
    return ++op_counter_;
  }
  void resp(Proc p) { queue_.push_back(Decision::advance(p)); }
  void adv(Proc p) { queue_.push_back(Decision::advance(p)); }
  void commit(const std::string& reg, std::vector<OpId> ops) {
    queue_.push_back(Decision::commit(reg, std::move(ops)));
  }
  void choose(OpId op, Value v) { queue_.push_back(Decision::choose(op, std::move(v))); }

  // write+commit+respond of one value by one process (adversarial mode)
  void solo_write(Proc p, const std::string& reg) {
    OpId w = inv(p);
    commit(reg, {w});
    resp(p);
  }

  std::uint32_t advances_for(OpKind kind) const {
    switch (backend_) {
      case BackendKind::atomic: return 1;
      case BackendKind::alg_vector: return kind == OpKind::write ? n_ + 3 : n_ + 2;
      case BackendKind::alg_lamport: return n_ + 2;
      default: throw std::logic_error("solo completion on adversarial back-end");
    }
  }

  // run one whole operation of p to completion (solo mode)
  void complete(Proc p, OpKind kind) {
    std::uint32_t k = advances_for(kind);
    for (std::uint32_t i = 0; i < k; ++i) adv(p);
    ++op_counter_;
  }

  void replan(const AdversaryView& view) {
    switch (plan_) {
      case Plan::done: return;
      case Plan::round_start: {
        if (j_ > cap_) {
          plan_ = Plan::done;
          return;
        }
        if (adversarial_)
          plan_phase1_adversarial();
        else
          plan_phase1_solo();
        plan_ = Plan::after_coin;
        return;
      }
      case Plan::after_coin: {
        int c = view.coins->back();
        if (adversarial_)
          plan_rest_adversarial(c);
        else
          plan_rest_solo(c);
        return;
      }
    }
  }

  void plan_phase1_adversarial() {
    for (Proc p : players()) {
      solo_write(p, kR1);
      solo_write(p, kC);
    }
    p0_write_ = inv(0);
    p1_write_ = inv(1);
    u1_.clear();
    for (Proc p : players()) u1_.push_back(inv(p));
    if (precommit_) commit(kR1, {p0_write_, p1_write_});  // order fixed before the coin
    resp(0);  // first host write returns
    adv(0);   // coin flip; outcome visible from the next decision on
  }

  void plan_rest_adversarial(int c) {
    // the coin value lands in C
    OpId cw = inv(0);
    commit(kC, {cw});
    resp(0);

    auto token = [&](std::int64_t b) { return host_token(b, j_, bounded_); };
    if (precommit_) {
      resp(1);
      for (OpId r : u1_) choose(r, token(0));
    } else if (c == 0) {
      commit(kR1, {p0_write_});
      for (OpId r : u1_) choose(r, token(0));
      commit(kR1, {p1_write_});
      resp(1);
    } else {
      commit(kR1, {p1_write_});
      for (OpId r : u1_) choose(r, token(1));
      commit(kR1, {p0_write_});
      resp(1);
    }
    for (Proc p : players()) resp(p);  // first reads return

    std::int64_t first = precommit_ ? 0 : c;
    for (Proc p : players()) {
      OpId r = inv(p);
      choose(r, token(1 - first));
      resp(p);
    }
    for (Proc p : players()) {
      OpId r = inv(p);
      choose(r, Value(std::int64_t{c}));
      resp(p);
    }

    bool survives = !precommit_ || c == 0;
    if (!survives) {
      for (Proc p : players()) adv(p);  // token guard fails; players leave
      for (Proc h : {Proc{0}, Proc{1}}) {
        solo_write(h, kR2);
        OpId r = inv(h);
        choose(r, Value(std::int64_t{0}));
        resp(h);
        adv(h);  // counter below n-2; host leaves
      }
      plan_ = Plan::done;
      return;
    }

    // phase 2: resets, serialized increments, host checks
    solo_write(0, kR2);
    solo_write(1, kR2);
    for (Proc p : players()) solo_write(p, kR2);
    std::int64_t count = 0;
    for (Proc p : players()) {
      OpId r = inv(p);
      choose(r, Value(count));
      resp(p);
      adv(p);  // local increment
      OpId w = inv(p);
      commit(kR2, {w});
      resp(p);
      ++count;
    }
    for (Proc h : {Proc{0}, Proc{1}}) {
      OpId r = inv(h);
      choose(r, Value(count));
      resp(h);
    }
    ++j_;
    plan_ = Plan::round_start;
  }

  void plan_phase1_solo() {
    for (Proc p : players()) {
      complete(p, OpKind::write);  // R1 <- bottom
      complete(p, OpKind::write);  // C  <- bottom
    }
    complete(0, OpKind::write);  // first host token lands
    adv(0);                      // coin flip
  }

  void plan_rest_solo(int c) {
    complete(0, OpKind::write);                          // C <- c
    for (Proc p : players()) complete(p, OpKind::read);  // first reads see token 0
    complete(1, OpKind::write);                          // second host token lands
    for (Proc p : players()) complete(p, OpKind::read);  // second reads see token 1
    for (Proc p : players()) complete(p, OpKind::read);  // coin reads

    if (c != 0) {
      for (Proc p : players()) adv(p);  // token guard fails; players leave
      for (Proc h : {Proc{0}, Proc{1}}) {
        complete(h, OpKind::write);
        complete(h, OpKind::read);
        adv(h);
      }
      plan_ = Plan::done;
      return;
    }

    complete(0, OpKind::write);
    complete(1, OpKind::write);
    for (Proc p : players()) complete(p, OpKind::write);
    for (Proc p : players()) {
      complete(p, OpKind::read);
      adv(p);
      complete(p, OpKind::write);
    }
    complete(0, OpKind::read);
    complete(1, OpKind::read);
    ++j_;
    plan_ = Plan::round_start;
  }

  std::uint32_t n_;
  std::uint64_t cap_;
  bool bounded_;
  bool precommit_;
  bool adversarial_;
  BackendKind backend_;

  std::deque<Decision> queue_;
  Plan plan_ = Plan::round_start;
  std::uint64_t j_ = 1;
  OpId op_counter_ = 0;
  OpId p0_write_ = 0;
  OpId p1_write_ = 0;
  std::vector<OpId> u1_;
};

}  // namespace

std::unique_ptr<Adversary> make_adversary(const GameConfig& cfg) {
  switch (cfg.adversary) {
    case AdversaryKind::random:
      if (cfg.backend == BackendKind::lin_adv || cfg.backend == BackendKind::wsl_adv)
        throw ConfigError("the random adversary cannot drive adversary-controlled registers");
      return std::make_unique<RandomAdversary>(cfg.seed);
    case AdversaryKind::retro:
      if (cfg.backend != BackendKind::lin_adv)
        throw ConfigError("adversary theorem1 requires --registers lin-adv");
      return std::make_unique<ScheduledGameAdversary>(cfg);
    case AdversaryKind::precommit:
      if (cfg.backend != BackendKind::wsl_adv && cfg.backend != BackendKind::alg_vector &&
          cfg.backend != BackendKind::atomic)
        throw ConfigError("adversary theorem1-wsl requires wsl-adv, alg2, or atomic registers");
      return std::make_unique<ScheduledGameAdversary>(cfg);
  }
  throw ConfigError("unknown adversary");
}

GameMilestones parse_game_rounds(const History& h, std::uint32_t n, bool bounded) {
  // per-process operation sequences, in invocation order
  std::vector<std::vector<OperationRecord>> seq(n);
  {
    OpTable ops = op_table(h);
    for (const Event& e : h.events)
      if (e.kind == EventKind::invoke) {
        if (e.proc >= n) throw TraceError("event from process outside the game");
        seq[e.proc].push_back(ops.at(e.op));
      }
  }

  auto expect = [](const OperationRecord& rec, const std::string& reg, OpKind kind) {
    if (rec.reg != reg || rec.kind != kind)
      throw TraceError("history does not follow the game program at op " + std::to_string(rec.op));
  };

  GameMilestones m;
  m.hosts.resize(2);
  m.players.resize(n - 2);

  for (Proc i = 0; i < 2; ++i) {
    const auto& ops = seq[i];
    std::size_t at = 0;
    std::uint64_t j = 0;
    while (at < ops.size()) {
      HostRound r;
      r.round = ++j;
      bool keep_going = [&] {
        expect(ops[at], kR1, OpKind::write);
        r.entered = ops[at].invoke_time;
        r.r1_done = ops[at].respond_time;
        if (!r.r1_done || ++at >= ops.size()) return false;
        if (i == 0) {
          expect(ops[at], kC, OpKind::write);
          r.coin = as_int(ops[at].argument);
          r.coin_done = ops[at].respond_time;
          if (!r.coin_done || ++at >= ops.size()) return false;
        }
        expect(ops[at], kR2, OpKind::write);
        r.reset_invoked = ops[at].invoke_time;
        if (!ops[at].respond_time || ++at >= ops.size()) return false;
        expect(ops[at], kR2, OpKind::read);
        if (!ops[at].respond_time) return false;
        r.v = std::get<std::int64_t>(unwrap(ops[at].result));
        ++at;
        r.continued = *r.v >= static_cast<std::int64_t>(n) - 2;
        r.complete = true;
        return r.continued;
      }();
      m.hosts[i].push_back(r);
      if (!keep_going) break;
    }
  }

  for (Proc p = 2; p < n; ++p) {
    const auto& ops = seq[p];
    std::size_t at = 0;
    std::uint64_t j = 0;
    auto& rounds = m.players[p - 2];
    while (at < ops.size()) {
      PlayerRound r;
      r.round = ++j;
      bool keep_going = [&] {
        expect(ops[at], kR1, OpKind::write);
        r.entered = ops[at].invoke_time;
        if (!ops[at].respond_time || ++at >= ops.size()) return false;
        expect(ops[at], kC, OpKind::write);
        if (!ops[at].respond_time || ++at >= ops.size()) return false;
        expect(ops[at], kR1, OpKind::read);
        if (!ops[at].respond_time) return false;
        r.u1 = unwrap(ops[at].result);
        if (++at >= ops.size()) return false;
        expect(ops[at], kR1, OpKind::read);
        if (!ops[at].respond_time) return false;
        r.u2 = unwrap(ops[at].result);
        if (++at >= ops.size()) return false;
        expect(ops[at], kC, OpKind::read);
        if (!ops[at].respond_time) return false;
        r.c = unwrap(ops[at].result);
        r.guard_time = ops[at].respond_time;
        ++at;

        // replicate the two exit guards
        if (std::holds_alternative<Bot>(*r.u1) || std::holds_alternative<Bot>(*r.u2) ||
            std::holds_alternative<Bot>(*r.c)) {
          r.exited_blank = true;
          r.complete = true;
          return false;
        }
        std::int64_t ci = std::get<std::int64_t>(*r.c);
        Plain want1 = bounded ? Plain(ci) : Plain(BitRound{ci, j});
        Plain want2 = bounded ? Plain(1 - ci) : Plain(BitRound{1 - ci, j});
        if (!(*r.u1 == want1) || !(*r.u2 == want2)) {
          r.exited_mismatch = true;
          r.complete = true;
          return false;
        }

        if (at >= ops.size()) return false;
        expect(ops[at], kR2, OpKind::write);
        r.reset_invoked = ops[at].invoke_time;
        if (!ops[at].respond_time || ++at >= ops.size()) return false;
        expect(ops[at], kR2, OpKind::read);
        if (!ops[at].respond_time) return false;
        r.v = std::get<std::int64_t>(unwrap(ops[at].result));
        if (++at >= ops.size()) return false;
        expect(ops[at], kR2, OpKind::write);
        r.incr_responded = ops[at].respond_time;
        if (!r.incr_responded) return false;
        ++at;
        r.complete = true;
        return true;
      }();
      rounds.push_back(r);
      if (!keep_going) break;
    }
  }
  return m;
}

std::vector<std::string> check_game_safety(const GameMilestones& m, std::uint32_t n,
                                           bool bounded) {
  (void)n;
  std::vector<std::string> bad;
  auto note = [&](const std::string& s) { bad.push_back(s); };

  auto host_round = [&](Proc h, std::uint64_t j) -> const HostRound* {
    const auto& rounds = m.hosts[h];
    if (j == 0 || j > rounds.size()) return nullptr;
    return &rounds[j - 1];
  };

  for (std::size_t pi = 0; pi < m.players.size(); ++pi) {
    for (const PlayerRound& r : m.players[pi]) {
      if (r.reset_invoked) {
        // read both round tokens, in some order, before entering phase 2
        bool tokens_ok = false;
        if (r.u1 && r.u2) {
          for (std::int64_t b : {0, 1}) {
            Plain a = bounded ? Plain(b) : Plain(BitRound{b, r.round});
            Plain o = bounded ? Plain(1 - b) : Plain(BitRound{1 - b, r.round});
            if (*r.u1 == a && *r.u2 == o) tokens_ok = true;
          }
        }
        if (!tokens_ok)
          note("player " + std::to_string(pi + 2) + " reached phase 2 of round " +
               std::to_string(r.round) + " without reading both round tokens");
        for (Proc h : {Proc{0}, Proc{1}}) {
          const HostRound* hr = host_round(h, r.round);
          if (!hr || hr->entered >= *r.reset_invoked)
            note("host " + std::to_string(h) + " had not entered round " +
                 std::to_string(r.round) + " before player " + std::to_string(pi + 2) +
                 " reached phase 2");
        }
      }
      if (r.guard_time && r.c && !r.exited_blank) {
        const HostRound* h0 = host_round(0, r.round);
        const auto* ci = std::get_if<std::int64_t>(&*r.c);
        if (!ci || !h0 || !h0->coin || *h0->coin != *ci)
          note("player " + std::to_string(pi + 2) + " holds a coin in round " +
               std::to_string(r.round) + " that host 0 did not write that round");
        if (!bounded) {
          const auto* t1 = std::get_if<BitRound>(&*r.u1);
          const auto* t2 = std::get_if<BitRound>(&*r.u2);
          if (!t1 || !t2 || t1->round != r.round || t2->round != r.round)
            note("player " + std::to_string(pi + 2) + " evaluated the token guard of round " +
                 std::to_string(r.round) + " with a token from another round");
        }
      }
    }
  }

  for (Proc h : {Proc{0}, Proc{1}}) {
    for (const HostRound& r : m.hosts[h]) {
      if (r.round < 2) continue;
      Time entered = r.entered;
      std::uint64_t prev = r.round - 1;
      for (std::size_t pi = 0; pi < m.players.size(); ++pi) {
        const auto& rounds = m.players[pi];
        bool ok = prev <= rounds.size() && rounds[prev - 1].incr_responded &&
                  *rounds[prev - 1].incr_responded < entered;
        if (!ok)
          note("host " + std::to_string(h) + " entered round " + std::to_string(r.round) +
               " before player " + std::to_string(pi + 2) + " finished its round " +
               std::to_string(prev) + " increment");
      }
    }
  }
  return bad;
}

GameRunResult run_game(const GameConfig& cfg) {
  if (cfg.n < 3) throw ConfigError("the game needs at least 3 processes");
  SimConfig sim;
  sim.n = cfg.n;
  sim.registers = game_registers(cfg.backend);
  sim.seed = cfg.seed;
  sim.max_steps = cfg.max_steps;
  auto adversary = make_adversary(cfg);
  auto factory = [&](Proc i) { return game_program(i, cfg.n, cfg.bounded); };

  GameRunResult result;
  result.run = run(sim, factory, *adversary);
  result.milestones = parse_game_rounds(result.run.history, cfg.n, cfg.bounded);
  for (std::uint64_t r : result.run.rounds_per_proc)
    result.termination_round = std::max(result.termination_round, r);

  auto bad = check_game_safety(result.milestones, cfg.n, cfg.bounded);
  if (!bad.empty()) throw MonitorViolation("game safety: " + bad.front());
  return result;
}

std::vector<std::vector<std::string>> decision_table(const GameMilestones& m) {
  std::vector<std::vector<std::string>> table;
  for (const auto& rounds : m.hosts) {
    std::vector<std::string> row;
    for (const HostRound& r : rounds)
      row.push_back(!r.complete ? "part" : (r.continued ? "cont" : "exit"));
    table.push_back(std::move(row));
  }
  for (const auto& rounds : m.players) {
    std::vector<std::string> row;
    for (const PlayerRound& r : rounds) {
      if (!r.complete)
        row.push_back("part");
      else if (r.exited_blank)
        row.push_back("blank");
      else if (r.exited_mismatch)
        row.push_back("mismatch");
      else
        row.push_back("cont");
    }
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace game
}  // namespace linlab
