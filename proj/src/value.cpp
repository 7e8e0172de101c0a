#include "linlab/value.hpp"

#include <sstream>

#include "linlab/fault.hpp"

namespace linlab {

Ord ts_entry_compare(const TsEntry& a, const TsEntry& b) {
  if (a.inf && b.inf) return Ord::EQ;
  if (a.inf) return Ord::GT;
  if (b.inf) return Ord::LT;
  if (a.n < b.n) return Ord::LT;
  if (a.n > b.n) return Ord::GT;
  return Ord::EQ;
}

VectorTs vts_zeros(std::size_t n) { return VectorTs(n, TsEntry::fin(0)); }

VectorTs vts_infinities(std::size_t n) { return VectorTs(n, TsEntry::infinity()); }

bool vts_has_infinity(const VectorTs& a) {
  for (const auto& e : a)
    if (e.inf) return true;
  return false;
}

Ord vts_compare(const VectorTs& a, const VectorTs& b) {
  if (a.size() != b.size())
    throw ConfigError("vector timestamp length mismatch: " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    Ord o = ts_entry_compare(a[i], b[i]);
    if (o != Ord::EQ) return o;
  }
  return Ord::EQ;
}

bool vts_less(const VectorTs& a, const VectorTs& b) { return vts_compare(a, b) == Ord::LT; }

bool vts_leq(const VectorTs& a, const VectorTs& b) { return vts_compare(a, b) != Ord::GT; }

Plain unwrap(const Value& v) {
  if (const auto* c = std::get_if<VectorCell>(&v)) return c->v;
  if (const auto* c = std::get_if<LamportCell>(&v)) return c->v;
  if (const auto* b = std::get_if<Bot>(&v)) return Plain(*b);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return Plain(*i);
  return Plain(std::get<BitRound>(v));
}

bool is_bot(const Value& v) { return std::holds_alternative<Bot>(v); }

bool is_int(const Value& v) { return std::holds_alternative<std::int64_t>(v); }

std::int64_t as_int(const Value& v) {
  if (!is_int(v)) throw ConfigError("value is not an integer: " + to_string(v));
  return std::get<std::int64_t>(v);
}

std::string to_string(const VectorTs& ts) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) out << ',';
    if (ts[i].inf)
      out << "inf";
    else
      out << ts[i].n;
  }
  out << ']';
  return out.str();
}

std::string to_string(const LamportTs& ts) {
  return "<" + std::to_string(ts.sq) + "," + std::to_string(ts.pid) + ">";
}

std::string to_string(const Plain& v) {
  if (std::holds_alternative<Bot>(v)) return "bot";
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  const auto& br = std::get<BitRound>(v);
  return "[" + std::to_string(br.bit) + "," + std::to_string(br.round) + "]";
}

std::string to_string(const Value& v) {
  if (const auto* c = std::get_if<VectorCell>(&v))
    return "(" + to_string(c->v) + "," + to_string(c->ts) + ")";
  if (const auto* c = std::get_if<LamportCell>(&v))
    return "(" + to_string(c->v) + "," + to_string(c->ts) + ")";
  return to_string(unwrap(v));
}

}  // namespace linlab
