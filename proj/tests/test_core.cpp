#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "linlab/coin.hpp"
#include "linlab/fault.hpp"
#include "linlab/history.hpp"
#include "linlab/trace_io.hpp"

using namespace linlab;

namespace {

OperationRecord make_op(OpId id, Time invoke, std::optional<Time> respond) {
  OperationRecord r;
  r.op = id;
  r.invoke_time = invoke;
  r.respond_time = respond;
  return r;
}

VectorTs make_ts(const std::vector<std::int64_t>& raw) {
  VectorTs ts;
  for (std::int64_t v : raw) ts.push_back(v < 0 ? TsEntry::infinity() : TsEntry::fin(v));
  return ts;
}

// reference comparator: entries mapped to (is_infinite, n) pairs, compared
// with the standard library's lexicographical compare
Ord reference_compare(const VectorTs& a, const VectorTs& b) {
  auto key = [](const VectorTs& v) {
    std::vector<std::pair<bool, std::uint64_t>> k;
    for (const TsEntry& e : v) k.emplace_back(e.inf, e.inf ? 0 : e.n);
    return k;
  };
  auto ka = key(a), kb = key(b);
  if (ka == kb) return Ord::EQ;
  return std::lexicographical_compare(ka.begin(), ka.end(), kb.begin(), kb.end()) ? Ord::LT
                                                                                  : Ord::GT;
}

}  // namespace

TEST_CASE("precedes follows response-before-invocation") {
  auto a = make_op(1, 0, 5);
  auto b = make_op(2, 6, 9);
  auto c = make_op(3, 3, 9);
  auto p = make_op(4, 2, std::nullopt);
  CHECK(precedes(a, b));
  CHECK(!precedes(a, c));  // overlapping intervals
  CHECK(!precedes(c, a));
  CHECK(!precedes(p, b));  // no response, precedes nothing
  CHECK(!precedes(a, a));
}

TEST_CASE("precedes is a strict partial order on random records") {
  Rng rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<OperationRecord> ops;
    for (OpId i = 1; i <= 8; ++i) {
      Time inv = rng.below(30);
      bool pending = rng.chance(0.2);
      ops.push_back(make_op(i, inv, pending ? std::nullopt
                                            : std::optional<Time>(inv + 1 + rng.below(10))));
    }
    for (const auto& a : ops) {
      CHECK(!precedes(a, a));
      for (const auto& b : ops) {
        if (precedes(a, b)) CHECK(!precedes(b, a));
        for (const auto& c : ops)
          if (precedes(a, b) && precedes(b, c)) CHECK(precedes(a, c));
      }
    }
  }
}

TEST_CASE("vector timestamp comparison") {
  CHECK(vts_compare(make_ts({0, 0, 0}), make_ts({1, -1, -1})) == Ord::LT);
  CHECK(vts_compare(make_ts({-1, -1, -1}), make_ts({-1, -1, -1})) == Ord::EQ);
  // infinity dominates at the first differing entry
  CHECK(reference_compare(make_ts({0, -1, -1}), make_ts({0, 3, 1})) == Ord::GT);
  CHECK(vts_compare(make_ts({0, -1, -1}), make_ts({0, 3, 1})) == Ord::GT);
  CHECK_THROWS_AS(vts_compare(make_ts({0}), make_ts({0, 1})), ConfigError);
}

TEST_CASE("vector timestamp order is total and matches the reference") {
  Rng rng(7);
  auto random_ts = [&] {
    VectorTs ts;
    for (int i = 0; i < 4; ++i)
      ts.push_back(rng.chance(0.25) ? TsEntry::infinity() : TsEntry::fin(rng.below(3)));
    return ts;
  };
  std::vector<VectorTs> sample;
  for (int i = 0; i < 60; ++i) sample.push_back(random_ts());
  for (const auto& a : sample) {
    for (const auto& b : sample) {
      Ord o = vts_compare(a, b);
      CHECK(o == reference_compare(a, b));
      // antisymmetry / totality
      Ord rev = vts_compare(b, a);
      if (o == Ord::LT) CHECK(rev == Ord::GT);
      if (o == Ord::EQ) CHECK(rev == Ord::EQ);
      for (const auto& c : sample) {
        if (o == Ord::LT && vts_compare(b, c) == Ord::LT) CHECK(vts_compare(a, c) == Ord::LT);
      }
    }
  }
}

TEST_CASE("history prefix keeps pending invocations") {
  History h;
  h.events.push_back(Event{EventKind::invoke, 1, 0, "R", OpKind::write, Value(std::int64_t{5}), 1});
  h.events.push_back(Event{EventKind::respond, 1, 0, "R", OpKind::write, Value(Bot{}), 2});
  h.events.push_back(Event{EventKind::invoke, 2, 0, "R", OpKind::read, Value(Bot{}), 3});
  h.events.push_back(Event{EventKind::respond, 2, 0, "R", OpKind::read, Value(std::int64_t{5}), 4});

  CHECK(history_prefix(h, 10).events.size() == 4);
  CHECK(history_prefix(h, 0).events.empty());
  History cut = history_prefix(h, 3);
  CHECK(cut.events.size() == 3);
  auto ops = op_table(cut);
  CHECK(!ops.at(2).complete());
  validate_history(cut);
}

TEST_CASE("validate_history rejects overlapping operations of one process") {
  History h;
  h.events.push_back(Event{EventKind::invoke, 1, 0, "R", OpKind::read, Value(Bot{}), 1});
  h.events.push_back(Event{EventKind::invoke, 2, 0, "R", OpKind::read, Value(Bot{}), 2});
  CHECK_THROWS_AS(validate_history(h), TraceError);
}

TEST_CASE("trace files round-trip") {
  TraceFile t;
  t.meta.trace = "mwmr";
  t.meta.n = 3;
  t.meta.seed = 9;
  t.meta.registers = {RegisterSpec{"R", BackendKind::alg_vector, Value(std::int64_t{0}), {}}};

  VectorCell cell{Plain(std::int64_t{7}), make_ts({1, 0, -1})};
  t.history.events.push_back(
      Event{EventKind::invoke, 1, 2, "R", OpKind::write, Value(std::int64_t{7}), 1});
  t.history.events.push_back(
      Event{EventKind::respond, 1, 2, "R", OpKind::write, Value(Bot{}), 3});
  CellWrite cw;
  cw.time = 2;
  cw.op = 1;
  cw.proc = 2;
  cw.cell = 3;
  cw.stored = Value(cell);
  cw.new_ts[2] = make_ts({1, 0, -1});
  t.history.cell_writes.push_back(cw);

  std::string text = trace_to_string(t);
  std::istringstream in(text);
  TraceFile back = read_trace(in);
  CHECK(back.meta.n == 3);
  CHECK(back.meta.registers.size() == 1);
  CHECK(back.meta.registers[0].backend == BackendKind::alg_vector);
  CHECK(back.history.events.size() == 2);
  CHECK(back.history.cell_writes.size() == 1);
  CHECK(back.history.cell_writes[0].stored == Value(cell));
  CHECK(back.history.cell_writes[0].new_ts.at(2) == make_ts({1, 0, -1}));
  CHECK(trace_to_string(back) == text);

  CHECK(checker_initial(back.meta, "R") ==
        Value(VectorCell{Plain(std::int64_t{0}), vts_zeros(3)}));
}

TEST_CASE("linearization files round-trip") {
  Linearization lin{{3, 2, 1, 4}};
  std::istringstream in(linearization_to_string(lin));
  CHECK(read_linearization(in) == lin);
}

TEST_CASE("coin bits are deterministic and roughly fair") {
  CoinStream a(12345), b(12345), c(54321);
  std::vector<int> first;
  int ones = 0;
  bool differs = false;
  for (int i = 0; i < 100000; ++i) {
    int bit = a.next();
    first.push_back(bit);
    ones += bit;
    if (b.next() != bit) FAIL("same seed diverged");
    if (c.next() != bit) differs = true;
  }
  CHECK(differs);
  CHECK(ones > 49000);
  CHECK(ones < 51000);
}
