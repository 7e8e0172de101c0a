#include "linlab/trace_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "linlab/fault.hpp"

namespace linlab {

using nlohmann::json;

namespace {

json ts_to_json(const VectorTs& ts) {
  json a = json::array();
  for (const TsEntry& e : ts) {
    if (e.inf)
      a.push_back("inf");
    else
      a.push_back(e.n);
  }
  return a;
}

VectorTs ts_from_json(const json& a) {
  VectorTs ts;
  for (const json& e : a) {
    if (e.is_string()) {
      if (e.get<std::string>() != "inf") throw TraceError("bad timestamp entry");
      ts.push_back(TsEntry::infinity());
    } else {
      ts.push_back(TsEntry::fin(e.get<std::uint64_t>()));
    }
  }
  return ts;
}

json plain_to_json(const Plain& v) {
  if (std::holds_alternative<Bot>(v)) return nullptr;
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  const auto& br = std::get<BitRound>(v);
  return json::array({br.bit, br.round});
}

Plain plain_from_json(const json& j) {
  if (j.is_null()) return Plain(Bot{});
  if (j.is_number()) return Plain(j.get<std::int64_t>());
  if (j.is_array() && j.size() == 2)
    return Plain(BitRound{j[0].get<std::int64_t>(), j[1].get<std::uint64_t>()});
  throw TraceError("unrecognized plain value: " + j.dump());
}

json value_to_json(const Value& v) {
  if (const auto* c = std::get_if<VectorCell>(&v))
    return json{{"ts", ts_to_json(c->ts)}, {"v", plain_to_json(c->v)}};
  if (const auto* c = std::get_if<LamportCell>(&v))
    return json{{"ts", json{{"pid", c->ts.pid}, {"sq", c->ts.sq}}}, {"v", plain_to_json(c->v)}};
  return plain_to_json(unwrap(v));
}

Value value_from_json(const json& j) {
  if (j.is_object()) {
    const json& ts = j.at("ts");
    if (ts.is_array()) return Value(VectorCell{plain_from_json(j.at("v")), ts_from_json(ts)});
    return Value(LamportCell{plain_from_json(j.at("v")),
                             LamportTs{ts.at("sq").get<std::uint64_t>(),
                                       ts.at("pid").get<std::uint32_t>()}});
  }
  return to_value(plain_from_json(j));
}

json event_to_json(const Event& e) {
  return json{{"kind", e.kind == EventKind::invoke ? "invoke" : "respond"},
              {"op_id", e.op},
              {"op_kind", e.op_kind == OpKind::read ? "read" : "write"},
              {"proc", e.proc},
              {"register", e.reg},
              {"time", e.time},
              {"value", value_to_json(e.value)}};
}

Event event_from_json(const json& j) {
  Event e;
  std::string kind = j.at("kind").get<std::string>();
  e.kind = kind == "invoke" ? EventKind::invoke : EventKind::respond;
  e.op = j.at("op_id").get<OpId>();
  e.op_kind = j.at("op_kind").get<std::string>() == "read" ? OpKind::read : OpKind::write;
  e.proc = j.at("proc").get<Proc>();
  e.reg = j.at("register").get<std::string>();
  e.time = j.at("time").get<Time>();
  e.value = value_from_json(j.at("value"));
  return e;
}

json cell_write_to_json(const CellWrite& c) {
  json j{{"kind", "cell-write"}, {"cell", c.cell},     {"op_id", c.op},
         {"proc", c.proc},       {"stored", value_to_json(c.stored)}, {"time", c.time}};
  if (!c.new_ts.empty()) {
    json m = json::object();
    for (const auto& [proc, ts] : c.new_ts) m[std::to_string(proc)] = ts_to_json(ts);
    j["new_ts"] = m;
  }
  return j;
}

CellWrite cell_write_from_json(const json& j) {
  CellWrite c;
  c.cell = j.at("cell").get<int>();
  c.op = j.at("op_id").get<OpId>();
  c.proc = j.at("proc").get<Proc>();
  c.stored = value_from_json(j.at("stored"));
  c.time = j.at("time").get<Time>();
  if (j.contains("new_ts"))
    for (const auto& [key, ts] : j.at("new_ts").items())
      c.new_ts[static_cast<Proc>(std::stoul(key))] = ts_from_json(ts);
  return c;
}

json meta_to_json(const TraceMeta& m) {
  json regs = json::array();
  for (const RegisterSpec& r : m.registers) {
    json jr{{"backend", backend_name(r.backend)},
            {"initial", value_to_json(r.initial)},
            {"name", r.name}};
    if (r.swmr_writer) jr["writer"] = *r.swmr_writer;
    regs.push_back(jr);
  }
  json j{{"kind", "meta"}, {"n", m.n}, {"registers", regs}, {"seed", m.seed}, {"trace", m.trace}};
  if (!m.adversary.empty()) {
    j["adversary"] = m.adversary;
    j["bounded"] = m.bounded;
    j["rounds"] = m.rounds;
  }
  return j;
}

TraceMeta meta_from_json(const json& j) {
  TraceMeta m;
  m.trace = j.at("trace").get<std::string>();
  m.n = j.at("n").get<std::uint32_t>();
  m.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("adversary")) {
    m.adversary = j.at("adversary").get<std::string>();
    m.bounded = j.at("bounded").get<bool>();
    m.rounds = j.at("rounds").get<std::uint64_t>();
  }
  for (const json& jr : j.at("registers")) {
    RegisterSpec r;
    r.name = jr.at("name").get<std::string>();
    auto kind = backend_from_name(jr.at("backend").get<std::string>());
    if (!kind) throw TraceError("unknown backend in trace meta");
    r.backend = *kind;
    r.initial = value_from_json(jr.at("initial"));
    if (jr.contains("writer")) r.swmr_writer = jr.at("writer").get<Proc>();
    m.registers.push_back(std::move(r));
  }
  return m;
}

}  // namespace

void write_trace(const TraceFile& t, std::ostream& out) {
  out << meta_to_json(t.meta).dump() << '\n';
  std::size_t ei = 0;
  std::size_t ci = 0;
  const auto& ev = t.history.events;
  const auto& cw = t.history.cell_writes;
  while (ei < ev.size() || ci < cw.size()) {
    bool take_event = ci >= cw.size() || (ei < ev.size() && ev[ei].time < cw[ci].time);
    if (take_event)
      out << event_to_json(ev[ei++]).dump() << '\n';
    else
      out << cell_write_to_json(cw[ci++]).dump() << '\n';
  }
}

std::string trace_to_string(const TraceFile& t) {
  std::ostringstream out;
  write_trace(t, out);
  return out.str();
}

TraceFile read_trace(std::istream& in) {
  TraceFile t;
  std::string line;
  bool have_meta = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "meta") {
      t.meta = meta_from_json(j);
      have_meta = true;
    } else if (kind == "cell-write") {
      t.history.cell_writes.push_back(cell_write_from_json(j));
    } else {
      t.history.events.push_back(event_from_json(j));
    }
  }
  if (!have_meta) throw TraceError("trace has no meta line");
  return t;
}

TraceFile read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open " + path);
  return read_trace(in);
}

void write_trace_file(const TraceFile& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw TraceError("cannot write " + path);
  write_trace(t, out);
}

void write_linearization(const Linearization& lin, std::ostream& out) {
  for (OpId id : lin.ops) out << id << '\n';
}

std::string linearization_to_string(const Linearization& lin) {
  std::ostringstream out;
  write_linearization(lin, out);
  return out.str();
}

Linearization read_linearization(std::istream& in) {
  Linearization lin;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    lin.ops.push_back(json::parse(line).get<OpId>());
  }
  return lin;
}

Linearization read_linearization_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TraceError("cannot open " + path);
  return read_linearization(in);
}

Value checker_initial(const TraceMeta& meta, const std::string& reg) {
  for (const RegisterSpec& r : meta.registers) {
    if (r.name != reg) continue;
    Plain base = unwrap(r.initial);
    switch (r.backend) {
      case BackendKind::alg_vector: return Value(VectorCell{base, vts_zeros(meta.n)});
      case BackendKind::alg_lamport: return Value(LamportCell{base, LamportTs{0, meta.n}});
      default: return r.initial;
    }
  }
  throw TraceError("register " + reg + " not in trace meta");
}

}  // namespace linlab
