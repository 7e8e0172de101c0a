#include "linlab/linearize.hpp"

#include <algorithm>
#include <set>

#include "linlab/fault.hpp"

namespace linlab {

std::map<OpId, Value> cell_value_map(const History& h) {
  std::map<OpId, Value> m;
  for (const CellWrite& c : h.cell_writes) m.emplace(c.op, c.stored);
  return m;
}

Value effective_write_value(const OperationRecord& rec, const std::map<OpId, Value>& cells) {
  auto it = cells.find(rec.op);
  return it != cells.end() ? it->second : rec.argument;
}

CheckResult check_linearization(const History& h, const Linearization& lin, const Value& initial) {
  OpTable ops;
  try {
    ops = op_table(h);
  } catch (const TraceError& e) {
    return CheckResult::fail(e.what());
  }
  const auto cells = cell_value_map(h);

  std::set<OpId> seen;
  for (OpId id : lin.ops) {
    if (!ops.count(id))
      return CheckResult::fail("linearization names op " + std::to_string(id) +
                               " absent from the history");
    if (!seen.insert(id).second)
      return CheckResult::fail("op " + std::to_string(id) + " appears twice");
  }
  for (const auto& [id, rec] : ops) {
    if (rec.complete() && !seen.count(id))
      return CheckResult::fail("completed op " + std::to_string(id) + " missing");
  }

  // real-time precedence
  for (std::size_t i = 0; i < lin.ops.size(); ++i) {
    const OperationRecord& a = ops.at(lin.ops[i]);
    for (std::size_t j = i + 1; j < lin.ops.size(); ++j) {
      const OperationRecord& b = ops.at(lin.ops[j]);
      if (precedes(b, a))
        return CheckResult::fail("op " + std::to_string(b.op) + " precedes op " +
                                 std::to_string(a.op) + " but is placed after it");
    }
  }

  // register read semantics
  Value last = initial;
  for (OpId id : lin.ops) {
    const OperationRecord& rec = ops.at(id);
    if (rec.kind == OpKind::write) {
      last = effective_write_value(rec, cells);
    } else if (rec.complete() && !(rec.result == last)) {
      return CheckResult::fail("read " + std::to_string(id) + " returns " + to_string(rec.result) +
                               " but the preceding write holds " + to_string(last));
    }
  }
  return CheckResult::pass();
}

namespace {

struct SearchOp {
  OpId id = 0;
  bool completed = false;
  bool is_write = false;
  Time invoke = 0;
  std::optional<Time> respond;
  Value value;  // written value / read result
};

struct SearchSpace {
  std::vector<SearchOp> ops;
  Value initial;
  bool too_big = false;
};

SearchSpace build_space(const History& h, const Value& initial) {
  SearchSpace s;
  s.initial = initial;
  const auto cells = cell_value_map(h);
  for (const auto& [id, rec] : op_table(h)) {
    if (!rec.complete() && rec.kind == OpKind::read) continue;  // never needed
    SearchOp o;
    o.id = id;
    o.completed = rec.complete();
    o.is_write = rec.kind == OpKind::write;
    o.invoke = rec.invoke_time;
    o.respond = rec.respond_time;
    o.value = o.is_write ? effective_write_value(rec, cells) : rec.result;
    s.ops.push_back(std::move(o));
  }
  s.too_big = s.ops.size() > kOracleMaxOps;
  return s;
}

// Depth-first search over (placed set, last write); memoizes dead states.
class OracleSearch {
 public:
  OracleSearch(SearchSpace space, bool enumerate_all)
      : s_(std::move(space)), enumerate_all_(enumerate_all) {
    for (std::size_t i = 0; i < s_.ops.size(); ++i)
      if (s_.ops[i].completed) completed_mask_ |= (1u << i);
  }

  bool find(std::vector<OpId>& out) {
    std::vector<std::size_t> order;
    if (!dfs(0, -1, order)) return false;
    out.clear();
    for (std::size_t i : order) out.push_back(s_.ops[i].id);
    return true;
  }

  std::vector<Linearization> all() {
    std::vector<std::size_t> order;
    dfs(0, -1, order);
    return std::move(found_);
  }

 private:
  bool dfs(std::uint32_t done, int last_write, std::vector<std::size_t>& order) {
    if ((done & completed_mask_) == completed_mask_) {
      if (!enumerate_all_) return true;
      Linearization lin;
      for (std::size_t i : order) lin.ops.push_back(s_.ops[i].id);
      found_.push_back(std::move(lin));
      // keep extending: appending more pending writes yields further
      // distinct linearizations
    }
    auto key = std::make_pair(done, last_write);
    if (!enumerate_all_ && dead_.count(key)) return false;

    const Value& current = last_write < 0 ? s_.initial : s_.ops[last_write].value;
    bool any = false;
    for (std::size_t i = 0; i < s_.ops.size(); ++i) {
      if (done & (1u << i)) continue;
      const SearchOp& o = s_.ops[i];
      if (!feasible(o, done)) continue;
      if (!o.is_write && !(o.value == current)) continue;
      order.push_back(i);
      bool hit = dfs(done | (1u << i), o.is_write ? static_cast<int>(i) : last_write, order);
      if (hit && !enumerate_all_) return true;
      any = any || hit;
      order.pop_back();
    }
    if (!enumerate_all_ && !any) dead_.insert(key);
    return any;
  }

  bool feasible(const SearchOp& o, std::uint32_t done) const {
    for (std::size_t j = 0; j < s_.ops.size(); ++j) {
      const SearchOp& y = s_.ops[j];
      bool placed = done & (1u << j);
      if (!placed) {
        // y must still be placeable after o
        if (y.completed && y.respond && *y.respond < o.invoke) return false;
      } else {
        // o must not really-precede anything already placed
        if (o.respond && *o.respond < y.invoke) return false;
      }
    }
    return true;
  }

  SearchSpace s_;
  bool enumerate_all_;
  std::uint32_t completed_mask_ = 0;
  std::set<std::pair<std::uint32_t, int>> dead_;
  std::vector<Linearization> found_;
};

}  // namespace

OracleResult check_linearizable(const History& h, const Value& initial) {
  SearchSpace space = build_space(h, initial);
  if (space.too_big) return OracleResult{OracleStatus::refused, {}};
  OracleSearch search(std::move(space), false);
  std::vector<OpId> out;
  if (!search.find(out)) return OracleResult{OracleStatus::none, {}};
  return OracleResult{OracleStatus::ok, Linearization{std::move(out)}};
}

std::optional<std::vector<Linearization>> enumerate_linearizations(const History& h,
                                                                   const Value& initial) {
  SearchSpace space = build_space(h, initial);
  if (space.too_big) return std::nullopt;
  OracleSearch search(std::move(space), true);
  return search.all();
}

VectorLinResult vector_run_linearization(const History& h) {
  const OpTable ops = op_table(h);
  for (const Event& e : h.events)
    if (e.reg != h.events.front().reg)
      throw ConfigError("vector linearization expects a single-register history");

  std::map<OpId, VectorTs> stored_ts;
  for (const CellWrite& c : h.cell_writes) {
    const auto* cell = std::get_if<VectorCell>(&c.stored);
    if (!cell) throw TraceError("cell write of op " + std::to_string(c.op) +
                                " carries no vector timestamp");
    stored_ts.emplace(c.op, cell->ts);
  }

  VectorLinResult result;
  std::set<OpId> in_wseq;

  auto active_at = [&](const OperationRecord& rec, Time t) {
    return rec.invoke_time <= t && (!rec.respond_time || t <= *rec.respond_time);
  };

  std::size_t index = 0;
  for (const CellWrite& c : h.cell_writes) {
    ++index;
    if (in_wseq.count(c.op)) continue;

    Batch batch;
    batch.index = index;
    batch.t = c.time;
    batch.leader = c.op;
    for (const auto& [id, rec] : ops) {
      if (rec.kind != OpKind::write || in_wseq.count(id) || !active_at(rec, c.time)) continue;
      auto ts_it = c.new_ts.find(rec.proc);
      if (ts_it == c.new_ts.end())
        throw TraceError("no timestamp snapshot for active write " + std::to_string(id) +
                         " at time " + std::to_string(c.time));
      batch.candidates.push_back(id);
      batch.pts.emplace(id, ts_it->second);
    }
    const VectorTs& leader_pts = batch.pts.at(c.op);
    for (OpId id : batch.candidates)
      if (vts_leq(batch.pts.at(id), leader_pts)) batch.members.push_back(id);
    std::sort(batch.members.begin(), batch.members.end(), [&](OpId a, OpId b) {
      Ord o = vts_compare(batch.pts.at(a), batch.pts.at(b));
      if (o != Ord::EQ) return o == Ord::LT;
      return ops.at(a).proc < ops.at(b).proc;  // equal partial timestamps
    });
    for (OpId id : batch.members) {
      result.wseq.push_back(id);
      in_wseq.insert(id);
    }
    result.batches.push_back(std::move(batch));
  }

  // anchor completed reads after the write of the pair they returned
  std::map<OpId, std::vector<OpId>> reads_after;  // write op -> reads
  std::vector<OpId> initial_reads;
  for (const auto& [id, rec] : ops) {
    if (rec.kind != OpKind::read || !rec.complete()) continue;
    const auto* cell = std::get_if<VectorCell>(&rec.result);
    if (!cell) throw TraceError("read " + std::to_string(id) + " returned no timestamped pair");
    if (!vts_has_infinity(cell->ts) && cell->ts == vts_zeros(cell->ts.size())) {
      initial_reads.push_back(id);
      continue;
    }
    OpId writer = 0;
    bool found = false;
    for (const auto& [wid, ts] : stored_ts)
      if (ts == cell->ts) {
        writer = wid;
        found = true;
        break;
      }
    if (!found)
      throw TraceError("read " + std::to_string(id) + " returned " + to_string(rec.result) +
                       " which no write produced");
    reads_after[writer].push_back(id);
  }
  auto by_start = [&](std::vector<OpId>& v) {
    std::sort(v.begin(), v.end(),
              [&](OpId a, OpId b) { return ops.at(a).invoke_time < ops.at(b).invoke_time; });
  };
  by_start(initial_reads);
  for (auto& [w, v] : reads_after) by_start(v);

  for (OpId id : initial_reads) result.lin.ops.push_back(id);
  for (OpId w : result.wseq) {
    result.lin.ops.push_back(w);
    auto it = reads_after.find(w);
    if (it != reads_after.end())
      for (OpId id : it->second) result.lin.ops.push_back(id);
  }
  return result;
}

CheckResult check_vector_batches(const History& h, const VectorLinResult& r) {
  const OpTable ops = op_table(h);
  std::map<OpId, VectorTs> stored_ts;
  for (const CellWrite& c : h.cell_writes)
    stored_ts.emplace(c.op, std::get<VectorCell>(c.stored).ts);

  for (const Batch& b : r.batches) {
    bool leader_in = std::find(b.members.begin(), b.members.end(), b.leader) != b.members.end();
    if (leader_in && !(b.pts.at(b.leader) == stored_ts.at(b.leader)))
      return CheckResult::fail("leader timestamp incomplete in batch " + std::to_string(b.index));
    const VectorTs& leader_ts = stored_ts.at(b.leader);
    for (OpId id : b.members) {
      if (id != b.leader && !vts_less(b.pts.at(id), leader_ts))
        return CheckResult::fail("member " + std::to_string(id) + " of batch " +
                                 std::to_string(b.index) + " has pts >= leader ts");
      auto it = stored_ts.find(id);
      if (it != stored_ts.end() && !vts_leq(it->second, leader_ts))
        return CheckResult::fail("member " + std::to_string(id) + " of batch " +
                                 std::to_string(b.index) + " stored ts above leader ts");
    }
  }
  for (std::size_t i = 0; i < r.batches.size(); ++i) {
    for (std::size_t j = i + 1; j < r.batches.size(); ++j) {
      for (OpId a : r.batches[i].members) {
        auto ta = stored_ts.find(a);
        if (ta == stored_ts.end()) continue;
        for (OpId b : r.batches[j].members) {
          auto tb = stored_ts.find(b);
          if (tb == stored_ts.end()) continue;
          if (!vts_less(ta->second, tb->second))
            return CheckResult::fail("cross-batch timestamp order broken between op " +
                                     std::to_string(a) + " and op " + std::to_string(b));
        }
      }
    }
  }
  return CheckResult::pass();
}

Linearization drop_trailing_pending_write(const History& h, const Linearization& base,
                                          const Value& initial) {
  std::map<std::string, std::set<Proc>> writers;
  for (const Event& e : h.events)
    if (e.kind == EventKind::invoke && e.op_kind == OpKind::write) writers[e.reg].insert(e.proc);
  for (const auto& [reg, procs] : writers)
    if (procs.size() > 1) throw ConfigError("register " + reg + " has more than one writer");
  CheckResult valid = check_linearization(h, base, initial);
  if (!valid.ok) throw ConfigError("base linearization invalid: " + valid.reason);
  if (base.ops.empty()) return base;
  const OpTable ops = op_table(h);
  const OperationRecord& last = ops.at(base.ops.back());
  if (last.kind == OpKind::write && !last.complete()) {
    Linearization trimmed = base;
    trimmed.ops.pop_back();
    return trimmed;
  }
  return base;
}

CheckResult check_wsl_prefixes(const std::vector<PrefixFamilyEntry>& family,
                               const Value& initial) {
  std::vector<std::vector<OpId>> writes;
  std::vector<OpTable> tables;
  for (const PrefixFamilyEntry& e : family) {
    CheckResult valid = check_linearization(e.h, e.lin, initial);
    if (!valid.ok) return CheckResult::fail("entry is not a linearization: " + valid.reason);
    tables.push_back(op_table(e.h));
    writes.push_back(write_sequence(e.lin, tables.back()));
  }
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (i == j || !is_event_prefix(family[i].h, family[j].h)) continue;
      if (!is_id_prefix(writes[i], writes[j])) {
        Time t = family[i].h.events.empty() ? 0 : family[i].h.events.back().time;
        return CheckResult::fail("write sequence not prefix-stable at prefix ending t=" +
                                 std::to_string(t));
      }
    }
  }
  return CheckResult::pass();
}

RefuteResult refute_wsl(const History& g, const std::vector<History>& extensions,
                        const Value& initial) {
  for (const History& h : extensions)
    if (!is_event_prefix(g, h)) throw ConfigError("extension does not extend the base history");

  RefuteResult result;
  auto g_lins = enumerate_linearizations(g, initial);
  if (!g_lins) {
    result.refused = true;
    return result;
  }
  if (g_lins->empty()) throw ConfigError("base history has no valid linearization");

  std::vector<std::vector<std::vector<OpId>>> ext_write_seqs;
  for (const History& h : extensions) {
    auto lins = enumerate_linearizations(h, initial);
    if (!lins) {
      result.refused = true;
      return result;
    }
    const OpTable ops = op_table(h);
    std::vector<std::vector<OpId>> seqs;
    for (const Linearization& lin : *lins) seqs.push_back(write_sequence(lin, ops));
    ext_write_seqs.push_back(std::move(seqs));
  }

  const OpTable g_ops = op_table(g);
  for (const Linearization& lin : *g_lins) {
    std::vector<OpId> ws = write_sequence(lin, g_ops);
    std::optional<std::size_t> killer;
    for (std::size_t e = 0; e < extensions.size(); ++e) {
      bool survives = false;
      for (const auto& seq : ext_write_seqs[e])
        if (is_id_prefix(ws, seq)) {
          survives = true;
          break;
        }
      if (!survives) {
        killer = e;
        break;
      }
    }
    if (!killer) {
      result.refuted = false;
      result.survivor = lin;
      return result;
    }
    result.witness.emplace_back(lin, *killer);
  }
  result.refuted = true;
  return result;
}

}  // namespace linlab
