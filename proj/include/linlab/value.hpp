#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace linlab {

enum class Ord { LT, EQ, GT };

// One entry of a vector timestamp: a natural number or infinity. Infinity is
// an explicit variant, never a sentinel integer.
struct TsEntry {
  bool inf = false;
  std::uint64_t n = 0;

  static TsEntry fin(std::uint64_t v) { return TsEntry{false, v}; }
  static TsEntry infinity() { return TsEntry{true, 0}; }

  friend bool operator==(const TsEntry& a, const TsEntry& b) {
    return a.inf == b.inf && (a.inf || a.n == b.n);
  }
  friend bool operator!=(const TsEntry& a, const TsEntry& b) { return !(a == b); }
};

Ord ts_entry_compare(const TsEntry& a, const TsEntry& b);

// Length-n array over naturals plus infinity, ordered lexicographically.
using VectorTs = std::vector<TsEntry>;

VectorTs vts_zeros(std::size_t n);
VectorTs vts_infinities(std::size_t n);
bool vts_has_infinity(const VectorTs& a);

// Lexicographic comparison with infinity maximal. Throws ConfigError on a
// length mismatch.
Ord vts_compare(const VectorTs& a, const VectorTs& b);
bool vts_less(const VectorTs& a, const VectorTs& b);
bool vts_leq(const VectorTs& a, const VectorTs& b);

// <sequence number, writer id> pair, ordered lexicographically.
struct LamportTs {
  std::uint64_t sq = 0;
  std::uint32_t pid = 0;

  friend bool operator==(const LamportTs& a, const LamportTs& b) {
    return a.sq == b.sq && a.pid == b.pid;
  }
  friend bool operator!=(const LamportTs& a, const LamportTs& b) { return !(a == b); }
  friend bool operator<(const LamportTs& a, const LamportTs& b) {
    return a.sq != b.sq ? a.sq < b.sq : a.pid < b.pid;
  }
  friend bool operator<=(const LamportTs& a, const LamportTs& b) { return a == b || a < b; }
};

// The undefined value written/read as "bottom".
struct Bot {
  friend bool operator==(const Bot&, const Bot&) { return true; }
  friend bool operator!=(const Bot&, const Bot&) { return false; }
};

// Two-field token [bit, round] written by the game hosts.
struct BitRound {
  std::int64_t bit = 0;
  std::uint64_t round = 0;

  friend bool operator==(const BitRound& a, const BitRound& b) {
    return a.bit == b.bit && a.round == b.round;
  }
  friend bool operator!=(const BitRound& a, const BitRound& b) { return !(a == b); }
};

// Scalar register content: what client programs write and (unwrapped) read.
using Plain = std::variant<Bot, std::int64_t, BitRound>;

// Value stored in a cell of the vector-timestamp register: payload plus its
// vector timestamp.
struct VectorCell {
  Plain v;
  VectorTs ts;

  friend bool operator==(const VectorCell& a, const VectorCell& b) {
    return a.v == b.v && a.ts == b.ts;
  }
  friend bool operator!=(const VectorCell& a, const VectorCell& b) { return !(a == b); }
};

// Value stored in a cell of the Lamport-clock register.
struct LamportCell {
  Plain v;
  LamportTs ts;

  friend bool operator==(const LamportCell& a, const LamportCell& b) {
    return a.v == b.v && a.ts == b.ts;
  }
  friend bool operator!=(const LamportCell& a, const LamportCell& b) { return !(a == b); }
};

// Any value that can appear in a trace: write arguments, read results, cell
// contents. Timestamped pairs appear as read results of the implemented
// multi-writer registers.
using Value = std::variant<Bot, std::int64_t, BitRound, VectorCell, LamportCell>;

inline Value to_value(const Plain& p) {
  return std::visit([](const auto& x) { return Value(x); }, p);
}

// Collapses a timestamped pair to its payload; identity on plain values.
// Client programs observe the payload of implemented-register reads.
Plain unwrap(const Value& v);

bool is_bot(const Value& v);
bool is_int(const Value& v);
std::int64_t as_int(const Value& v);

std::string to_string(const Plain& v);
std::string to_string(const Value& v);
std::string to_string(const VectorTs& ts);
std::string to_string(const LamportTs& ts);

}  // namespace linlab
