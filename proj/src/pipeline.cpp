#include "tabformula/pipeline.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tabformula/errors.hpp"
#include "tabformula/json_io.hpp"
#include "tabformula/rng.hpp"
#include "tabformula/sequence.hpp"

namespace tabformula {

unsigned parse_objectives(std::string_view name) {
  if (name == "nrp") return kObjectiveNrp;
  if (name == "nrp-prompt") return kObjectiveNrpPrompt;
  if (name == "ncp") return kObjectiveNcp;
  if (name == "fmlm") return kObjectiveFmlm;
  if (name == "all") return kObjectiveAll;
  throw std::invalid_argument("unknown objective '" + std::string(name) + "'");
}

void PipelineCounters::merge(const PipelineCounters& o) {
  tables_filtered += o.tables_filtered;
  formulas_seen += o.formulas_seen;
  formulas_rejected += o.formulas_rejected;
  formulas_deduped += o.formulas_deduped;
  units += o.units;
  dangling_references += o.dangling_references;
  non_data_cells += o.non_data_cells;
  missing_headers += o.missing_headers;
  fmlm_cell_fallbacks += o.fmlm_cell_fallbacks;
  lines += o.lines;
}

namespace {

bool references_in_bounds(const Table& table, const FormulaAst& ast) {
  for (const auto& r : references(ast)) {
    if (!table.in_bounds(r.start) || !table.in_bounds(r.end)) return false;
  }
  return true;
}

class UnitEmitter {
 public:
  UnitEmitter(const Table& table, const LocatedFormula& unit, std::uint64_t seed, TableResult& out)
      : table_(table), unit_(unit), seed_(seed), out_(out) {}

  void emit(std::string_view objective, json sample, const PackedSequence& seq) {
    json line{{"objective", std::string(objective)},
              {"table_id", table_.id()},
              {"formula_cell", format_address(unit_.cell)},
              {"formula", render_infix(unit_.ast)},
              {"seed", seed_},
              {"sample", std::move(sample)},
              {"sequence", sequence_to_json(seq)}};
    out_.jsonl += line.dump();
    out_.jsonl.push_back('\n');
    ++out_.counters.lines;
  }

 private:
  const Table& table_;
  const LocatedFormula& unit_;
  std::uint64_t seed_;
  TableResult& out_;
};

void generate_unit(const Table& table, const LocatedFormula& unit, const Vocab& vocab, const PipelineConfig& cfg,
                   TableResult& out) {
  PipelineCounters& counters = out.counters;
  if (!references_in_bounds(table, unit.ast)) {
    ++counters.dangling_references;
    return;
  }
  if (!table.is_data_cell(unit.cell)) {
    ++counters.non_data_cells;
    return;
  }
  ++counters.units;
  const std::uint64_t seed = unit_seed(cfg.seed, table.id(), unit.cell);
  UnitEmitter emitter(table, unit, seed, out);

  Rng mode_rng(stream_seed(seed, "mode"));
  const InputMode mode = choose_input_mode(mode_rng);
  const PrefixSequence prefix = to_prefix(unit.ast);
  const std::vector<std::string> no_text;

  std::optional<FmlmSample> fmlm;
  PackedSequence seq;
  if (mode == InputMode::FormulaTokens) {
    Rng mask_rng(stream_seed(seed, "fmlm"));
    MaskMode mask_mode = mask_rng.below(2) == 0 ? MaskMode::MaskOps : MaskMode::MaskCells;
    const PackedSequence plain = build_sequence(table, no_text, unit.cell, {mode, &prefix}, cfg.max_len, vocab);
    try {
      fmlm = fmlm_mask(prefix, mask_mode, unit.cell, plain.cells, vocab);
    } catch (const UnreachableReference&) {
      ++counters.fmlm_cell_fallbacks;
      fmlm = fmlm_mask(prefix, MaskMode::MaskOps, unit.cell, plain.cells, vocab);
    }
    seq = build_sequence(table, no_text, unit.cell, {mode, &fmlm->tokens}, cfg.max_len, vocab);
  } else {
    seq = build_sequence(table, no_text, unit.cell, {mode, nullptr}, cfg.max_len, vocab);
  }
  const TargetRendering rendering{mode, fmlm ? &fmlm->tokens : nullptr};

  if (cfg.objectives & kObjectiveNrp) {
    try {
      Rng rng(stream_seed(seed, "nrp"));
      auto pairs = nrp_pairs(table, unit.cell, unit.ast, rng);
      if (!pairs.empty()) emitter.emit("nrp", nrp_pairs_to_json(pairs), seq);
    } catch (const NotADataCell&) {
      ++counters.non_data_cells;
    }
  }
  if (cfg.objectives & kObjectiveNrpPrompt) {
    try {
      Rng rng(stream_seed(seed, "nrp-prompt"));
      auto prompt = nrp_prompt(table, unit.cell, unit.ast, vocab, rng, cfg.prompt);
      auto prompt_seq = build_sequence(table, prompt.prompt_tokens, unit.cell, rendering, cfg.max_len, vocab);
      emitter.emit("nrp-prompt", nrp_prompt_to_json(prompt), prompt_seq);
    } catch (const NotADataCell&) {
      ++counters.non_data_cells;
    } catch (const MissingHeader&) {
      ++counters.missing_headers;
    }
  }
  if (cfg.objectives & kObjectiveNcp) {
    for (const auto& s : ncp_samples(unit.ast, table)) emitter.emit("ncp", ncp_to_json(s), seq);
  }
  if ((cfg.objectives & kObjectiveFmlm) && fmlm) {
    emitter.emit("fmlm", fmlm_to_json(*fmlm), seq);
  }
}

}  // namespace

TableResult process_table(const Table& table, const Vocab& vocab, const PipelineConfig& cfg) {
  TableResult out;
  if (cfg.apply_size_filter && !size_filter(table, cfg.size_limits)) {
    ++out.counters.tables_filtered;
    return out;
  }
  ++out.stats.table_count;
  std::vector<LocatedFormula> formulas;
  for (const auto& cell : table.cells()) {
    if (!cell.formula) continue;
    ++out.counters.formulas_seen;
    const NormalizedFormula n = normalize(*cell.formula);
    if (!n.verdict.accepted) {
      ++out.counters.formulas_rejected;
      out.stats.add_rejection(n.verdict.reason);
      continue;
    }
    formulas.push_back({cell.address, parse(n.text)});
  }
  const std::size_t before = formulas.size();
  formulas = dedup_dragged(std::move(formulas), cfg.max_copies);
  out.counters.formulas_deduped = before - formulas.size();
  for (const auto& f : formulas) out.stats.add_formula(f.ast);
  if (!cfg.emit_samples) return out;
  for (const auto& f : formulas) generate_unit(table, f, vocab, cfg, out);
  return out;
}

std::vector<TableResult> process_tables_serial(std::span<const Table> tables, const Vocab& vocab,
                                               const PipelineConfig& config) {
  std::vector<TableResult> out;
  out.reserve(tables.size());
  for (const auto& t : tables) out.push_back(process_table(t, vocab, config));
  return out;
}

std::vector<TableResult> process_tables_parallel(std::span<const Table> tables, const Vocab& vocab,
                                                 const PipelineConfig& config, int threads) {
  std::vector<TableResult> out(tables.size());
  const auto n = static_cast<std::ptrdiff_t>(tables.size());
#ifdef _OPENMP
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(team)
#else
  (void)threads;
#endif
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = process_table(tables[static_cast<std::size_t>(i)], vocab, config);
  }
  return out;
}

std::pair<std::size_t, std::size_t> shard_range(std::size_t count, std::size_t index, std::size_t shards) {
  if (shards == 0 || index >= shards) throw std::invalid_argument("shard index out of range");
  return {count * index / shards, count * (index + 1) / shards};
}

std::string parse_records(const Table& table) {
  std::string out;
  for (const auto& cell : table.cells()) {
    if (!cell.formula) continue;
    const NormalizedFormula n = normalize(*cell.formula);
    json rec{{"table_id", table.id()},
             {"cell", format_address(cell.address)},
             {"formula", *cell.formula},
             {"normalized", n.text},
             {"verdict", std::string(to_string(n.verdict.reason))}};
    if (n.verdict.accepted) {
      const FormulaAst ast = parse(n.text);
      const PrefixSequence prefix = to_prefix(ast);
      json refs = json::array();
      for (const auto& a : referenced_cells(ast)) refs.push_back(format_address(a));
      rec["prefix"] = prefix_to_json(prefix);
      rec["sketch"] = prefix_to_json(sketch(prefix));
      rec["refs"] = std::move(refs);
    } else {
      rec["detail"] = n.verdict.detail;
    }
    out += rec.dump();
    out.push_back('\n');
  }
  return out;
}

}  // namespace tabformula
