#include <doctest.h>

#include "linlab/fault.hpp"
#include "linlab/linearize.hpp"
#include "linlab/registers.hpp"

using namespace linlab;

namespace {

PendingOp op(OpId id, Proc p, OpKind k, Value arg, Time invoke) {
  PendingOp o;
  o.op = id;
  o.proc = p;
  o.reg = "R";
  o.kind = k;
  o.arg = std::move(arg);
  o.invoke_time = invoke;
  return o;
}

Value token(std::int64_t bit, std::uint64_t round) { return Value(BitRound{bit, round}); }

RegisterSpec spec(BackendKind kind, Value initial = Value(Bot{})) {
  return RegisterSpec{"R", kind, std::move(initial), {}};
}

}  // namespace

TEST_CASE("atomic register returns the latest write") {
  AtomicBackend reg(spec(BackendKind::atomic, Value(std::int64_t{0})));
  CHECK(reg.invoke(op(1, 0, OpKind::read, Value(Bot{}), 1)) == Value(std::int64_t{0}));
  reg.invoke(op(2, 0, OpKind::write, Value(std::int64_t{1}), 3));
  reg.invoke(op(3, 0, OpKind::write, Value(std::int64_t{2}), 5));
  CHECK(reg.invoke(op(4, 1, OpKind::read, Value(Bot{}), 7)) == Value(std::int64_t{2}));
}

TEST_CASE("only the declared writer may write a single-writer register") {
  RegisterSpec s{"Val1", BackendKind::atomic, Value(std::int64_t{0}), Proc{1}};
  AtomicBackend reg(s);
  PendingOp ok = op(1, 1, OpKind::write, Value(std::int64_t{5}), 1);
  ok.reg = "Val1";
  CHECK(reg.invoke(ok).has_value());
  PendingOp bad = op(2, 2, OpKind::write, Value(std::int64_t{6}), 3);
  bad.reg = "Val1";
  CHECK_THROWS_AS(reg.invoke(bad), ConfigError);
  PendingOp read = op(3, 2, OpKind::read, Value(Bot{}), 5);
  read.reg = "Val1";
  CHECK(reg.invoke(read) == Value(std::int64_t{5}));
}

// the round-1 schedule: both host writes overlap the players' first reads,
// the adversary orders them only after both responses are out
TEST_CASE("linearizable back-end may order writes after their responses") {
  AdversarialBackend reg(spec(BackendKind::lin_adv), false);
  reg.invoke(op(1, 0, OpKind::write, token(0, 1), 10));  // [0,1]
  reg.invoke(op(2, 1, OpKind::write, token(1, 1), 11));  // [1,1]
  reg.invoke(op(3, 2, OpKind::read, Value(Bot{}), 12));
  reg.respond(1, 13);  // the write of [0,1] returns, uncommitted

  // coin says 0: [0,1] first, reads between the writes
  reg.commit_writes({1});
  reg.choose_read_value(3, token(0, 1));
  reg.commit_writes({2});
  reg.respond(2, 14);
  CHECK(reg.respond(3, 15) == token(0, 1));

  // a later read sees the second write
  reg.invoke(op(4, 2, OpKind::read, Value(Bot{}), 16));
  reg.choose_read_value(4, token(1, 1));
  CHECK(reg.respond(4, 17) == token(1, 1));
  reg.finalize();
  CHECK(reg.write_log() == std::vector<OpId>{1, 2});
}

TEST_CASE("linearizable back-end can reverse concurrent writes retroactively") {
  AdversarialBackend reg(spec(BackendKind::lin_adv), false);
  reg.invoke(op(1, 0, OpKind::write, token(0, 1), 10));
  reg.invoke(op(2, 1, OpKind::write, token(1, 1), 11));
  reg.invoke(op(3, 2, OpKind::read, Value(Bot{}), 12));
  reg.respond(1, 13);

  // coin says 1: [1,1] first, even though [0,1] already returned
  reg.commit_writes({2});
  reg.choose_read_value(3, token(1, 1));
  reg.commit_writes({1});
  reg.respond(2, 14);
  CHECK(reg.respond(3, 15) == token(1, 1));
  reg.finalize();
  CHECK(reg.write_log() == std::vector<OpId>{2, 1});
}

TEST_CASE("write-strong back-end rejects responses before commitment") {
  AdversarialBackend reg(spec(BackendKind::wsl_adv), true);
  reg.invoke(op(1, 0, OpKind::write, token(0, 1), 10));
  CHECK_THROWS_AS(reg.respond(1, 11), MonitorViolation);
  reg.commit_writes({1});
  CHECK(reg.respond(1, 12) == Value(Bot{}));
}

TEST_CASE("committed write order is append-only and never revised") {
  AdversarialBackend reg(spec(BackendKind::wsl_adv), true);
  reg.invoke(op(1, 0, OpKind::write, Value(std::int64_t{1}), 10));
  reg.invoke(op(2, 1, OpKind::write, Value(std::int64_t{2}), 11));
  reg.commit_writes({1});
  reg.respond(1, 12);
  // a second commitment of the same write is refused outright
  CHECK_THROWS_AS(reg.commit_writes({1}), MonitorViolation);
  // the overlapping write can only be appended after it
  reg.commit_writes({2});
  CHECK(reg.write_log() == std::vector<OpId>{1, 2});
}

TEST_CASE("reads may not respond before a value is chosen") {
  AdversarialBackend reg(spec(BackendKind::lin_adv), false);
  reg.invoke(op(1, 0, OpKind::read, Value(Bot{}), 5));
  CHECK_THROWS_AS(reg.respond(1, 6), MonitorViolation);
}

TEST_CASE("a read may not return a value nothing wrote") {
  AdversarialBackend reg(spec(BackendKind::lin_adv, Value(std::int64_t{0})), false);
  reg.invoke(op(1, 0, OpKind::write, Value(std::int64_t{5}), 5));
  reg.commit_writes({1});
  reg.invoke(op(2, 1, OpKind::read, Value(Bot{}), 6));
  CHECK_THROWS_AS(reg.choose_read_value(2, Value(std::int64_t{9})), MonitorViolation);
  // the initial value is gone once a write is committed before the read
  reg.respond(1, 7);
  reg.invoke(op(3, 1, OpKind::read, Value(Bot{}), 8));
  CHECK_THROWS_AS(reg.choose_read_value(3, Value(std::int64_t{0})), MonitorViolation);
}

TEST_CASE("placement after a real-time successor is a monitor violation") {
  AdversarialBackend reg(spec(BackendKind::lin_adv, Value(std::int64_t{0})), false);
  reg.invoke(op(1, 0, OpKind::write, Value(std::int64_t{5}), 1));
  reg.respond(1, 2);  // write returns, never committed
  reg.invoke(op(2, 1, OpKind::read, Value(Bot{}), 3));
  reg.choose_read_value(2, Value(std::int64_t{0}));  // anchored before all writes
  reg.respond(2, 4);
  // committing the write now would place it after a read it precedes
  CHECK_THROWS_AS(reg.commit_writes({1}), MonitorViolation);
}

TEST_CASE("finalize flags responded-but-unplaced operations") {
  AdversarialBackend reg(spec(BackendKind::lin_adv), false);
  reg.invoke(op(1, 0, OpKind::write, Value(std::int64_t{5}), 1));
  reg.respond(1, 2);
  CHECK_THROWS_AS(reg.finalize(), MonitorViolation);
  reg.commit_writes({1});
  reg.finalize();
}

TEST_CASE("the placement order is itself a valid linearization") {
  AdversarialBackend reg(spec(BackendKind::lin_adv), false);
  History h;
  auto record = [&](EventKind k, OpId id, Proc p, OpKind kind, Value v, Time t) {
    h.events.push_back(Event{k, id, p, "R", kind, std::move(v), t});
  };

  reg.invoke(op(1, 0, OpKind::write, token(0, 1), 1));
  record(EventKind::invoke, 1, 0, OpKind::write, token(0, 1), 1);
  reg.invoke(op(2, 1, OpKind::write, token(1, 1), 2));
  record(EventKind::invoke, 2, 1, OpKind::write, token(1, 1), 2);
  reg.invoke(op(3, 2, OpKind::read, Value(Bot{}), 3));
  record(EventKind::invoke, 3, 2, OpKind::read, Value(Bot{}), 3);
  record(EventKind::respond, 1, 0, OpKind::write, Value(Bot{}), 4);
  reg.respond(1, 4);
  reg.commit_writes({2});
  reg.choose_read_value(3, token(1, 1));
  reg.commit_writes({1});
  record(EventKind::respond, 2, 1, OpKind::write, Value(Bot{}), 5);
  reg.respond(2, 5);
  record(EventKind::respond, 3, 2, OpKind::read, token(1, 1), 6);
  reg.respond(3, 6);
  reg.finalize();

  Linearization lin{reg.placement_order()};
  CHECK(check_linearization(h, lin, Value(Bot{})).ok);
  OracleResult oracle = check_linearizable(h, Value(Bot{}));
  CHECK(oracle.status == OracleStatus::ok);
}
