#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"

#include "tabformula/errors.hpp"
#include "tabformula/json_io.hpp"
#include "tabformula/metrics.hpp"
#include "tabformula/pipeline.hpp"
#include "tabformula/sequence.hpp"

namespace tabformula::cli {
namespace {

std::uint64_t default_seed() {
  const char* env = std::getenv("FORTAP_SEED");
  if (!env || !*env) return 0;
  std::size_t used = 0;
  const std::string s(env);
  try {
    const std::uint64_t v = std::stoull(s, &used, 10);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error("FORTAP_SEED is not an unsigned integer: '" + s + "'");
}

std::vector<Table> read_all(const std::vector<std::string>& paths) {
  std::vector<Table> tables;
  for (const auto& p : paths) {
    auto part = read_tables(p);
    tables.insert(tables.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return tables;
}

void print_counters(std::ostream& err, std::size_t tables, const PipelineCounters& c) {
  err << "tables=" << tables << " filtered=" << c.tables_filtered << " formulas=" << c.formulas_seen
      << " rejected=" << c.formulas_rejected << " deduped=" << c.formulas_deduped << " units=" << c.units
      << " dangling=" << c.dangling_references << " non_data=" << c.non_data_cells
      << " missing_header=" << c.missing_headers << " fmlm_fallback=" << c.fmlm_cell_fallbacks
      << " lines=" << c.lines << '\n';
}

struct SamplesArgs {
  std::vector<std::string> paths;
  std::string objective = "all";
  std::optional<std::uint64_t> seed;
  int max_len = 512;
  int threads = 0;
  std::size_t shard = 0;
  std::size_t num_shards = 1;
  std::string vocab;
  bool noise_full_vocab = false;
};

int cmd_parse(const std::vector<std::string>& paths, std::ostream& out) {
  for (const auto& t : read_all(paths)) out << parse_records(t);
  return kExitOk;
}

int cmd_samples(const SamplesArgs& a, std::ostream& out, std::ostream& err) {
  PipelineConfig cfg;
  cfg.seed = a.seed ? *a.seed : default_seed();
  cfg.objectives = parse_objectives(a.objective);
  cfg.max_len = a.max_len;
  cfg.prompt.noise_from_full_vocab = a.noise_full_vocab;
  const Vocab vocab = a.vocab.empty() ? Vocab::builtin() : Vocab::load(a.vocab);
  const std::vector<Table> tables = read_all(a.paths);
  const auto [begin, end] = shard_range(tables.size(), a.shard, a.num_shards);
  const std::span<const Table> mine(tables.data() + begin, end - begin);
  const auto results = process_tables_parallel(mine, vocab, cfg, a.threads);
  PipelineCounters total;
  for (const auto& r : results) {
    out << r.jsonl;
    total.merge(r.counters);
  }
  print_counters(err, mine.size(), total);
  return kExitOk;
}

int cmd_stats(const std::vector<std::string>& paths, const std::string& counting, int threads, std::ostream& out,
              std::ostream& err) {
  PipelineConfig cfg;
  cfg.emit_samples = false;
  const std::vector<Table> tables = read_all(paths);
  const auto results = process_tables_parallel(tables, Vocab::builtin(), cfg, threads);
  CorpusStats stats;
  PipelineCounters total;
  for (const auto& r : results) {
    stats.merge(r.stats);
    total.merge(r.counters);
  }
  out << stats_to_json(stats, counting == "cell3" ? RangeCounting::Cell3 : RangeCounting::Cell1).dump(2) << '\n';
  print_counters(err, tables.size(), total);
  return kExitOk;
}

const json& field(const json& rec, const std::string& src, const char* name, json::value_t type) {
  if (!rec.contains(name)) throw SchemaError(src, std::string("/") + name, "missing field");
  const json& v = rec.at(name);
  if (v.type() != type) throw SchemaError(src, std::string("/") + name, "wrong type");
  return v;
}

int cmd_eval(const std::string& path, const std::vector<std::string>& table_paths, bool range_set, std::ostream& out,
             std::ostream& err) {
  std::map<std::string, Table> tables;
  for (auto& t : read_all(table_paths)) {
    std::string id = t.id();
    tables.emplace(std::move(id), std::move(t));
  }
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "/", "cannot open file");
  const EvalOptions options{range_set ? RangeComparison::Set : RangeComparison::Ordered};
  std::vector<EvalVerdict> verdicts;
  std::size_t without_cells = 0;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string src = path + "#L" + std::to_string(line_no);
    const json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) throw SchemaError(src, "/", "malformed record");
    const std::string gold = field(rec, src, "gold", json::value_t::string).get<std::string>();
    const std::string pred = field(rec, src, "pred", json::value_t::string).get<std::string>();
    std::optional<std::vector<CellAddress>> cells;
    if (rec.contains("input_cells")) {
      const json& arr = field(rec, src, "input_cells", json::value_t::array);
      cells.emplace();
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string ptr = "/input_cells/" + std::to_string(i);
        if (!arr[i].is_string()) throw SchemaError(src, ptr, "expected A1 address");
        try {
          cells->push_back(parse_address(arr[i].get<std::string>()));
        } catch (const AddressParseError& e) {
          throw SchemaError(src, ptr, e.what());
        }
      }
    } else if (rec.contains("table_id") && rec.contains("target_cell")) {
      const std::string id = field(rec, src, "table_id", json::value_t::string).get<std::string>();
      const std::string target = field(rec, src, "target_cell", json::value_t::string).get<std::string>();
      auto it = tables.find(id);
      if (it != tables.end()) {
        CellAddress addr;
        try {
          addr = parse_address(target);
        } catch (const AddressParseError& e) {
          throw SchemaError(src, "/target_cell", e.what());
        }
        cells = select_cells(it->second, addr);
      }
    }
    if (cells) {
      verdicts.push_back(eval_prediction(pred, gold, *cells, options));
    } else {
      ++without_cells;
      verdicts.push_back(eval_prediction(pred, gold, options));
    }
  }
  out << summary_to_json(aggregate(verdicts)).dump(2) << '\n';
  err << "records=" << verdicts.size() << " without_input_cells=" << without_cells << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spreadsheet formula corpus tooling"};
  app.require_subcommand(1);

  std::vector<std::string> parse_paths;
  auto* parse = app.add_subcommand("parse", "Normalize and parse every formula cell");
  parse->add_option("paths", parse_paths, "Table files (.json, .jsonl)");

  SamplesArgs sa;
  auto* samples = app.add_subcommand("samples", "Generate pretraining samples as JSONL");
  samples->add_option("paths", sa.paths, "Table files");
  samples->add_option("--objective", sa.objective)->check(CLI::IsMember({"nrp", "nrp-prompt", "ncp", "fmlm", "all"}));
  samples->add_option("--seed", sa.seed, "Global seed (default: FORTAP_SEED or 0)");
  samples->add_option("--max-len", sa.max_len)->check(CLI::IsMember({256, 512}));
  samples->add_option("--threads", sa.threads, "OpenMP threads (0 = default)")->check(CLI::NonNegativeNumber);
  samples->add_option("--shard", sa.shard, "Shard index");
  samples->add_option("--num-shards", sa.num_shards, "Number of contiguous shards")->check(CLI::PositiveNumber);
  samples->add_option("--vocab", sa.vocab, "Vocabulary file, one token per line")->check(CLI::ExistingFile);
  samples->add_flag("--noise-full-vocab", sa.noise_full_vocab, "Draw prompt noise from the whole base vocabulary");

  std::vector<std::string> stats_paths;
  std::string counting = "cell1";
  int stats_threads = 0;
  auto* stats = app.add_subcommand("stats", "Corpus statistics as JSON");
  stats->add_option("paths", stats_paths, "Table files");
  stats->add_option("--range-counting", counting)->check(CLI::IsMember({"cell1", "cell3"}));
  stats->add_option("--threads", stats_threads)->check(CLI::NonNegativeNumber);

  std::string eval_path;
  std::vector<std::string> eval_tables;
  bool range_set = false;
  auto* eval = app.add_subcommand("eval", "Score predicted formulas against gold");
  eval->add_option("gold_pred", eval_path, "JSONL of {table_id, target_cell, gold, pred[, input_cells]}")->required();
  eval->add_option("--tables", eval_tables, "Table files used to derive input cells");
  eval->add_flag("--range-set", range_set, "Compare references as sets");

  std::string vocab_out;
  auto* vocab = app.add_subcommand("vocab", "Write the built-in vocabulary, one token per line");
  vocab->add_option("--out", vocab_out);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitRuntime;
  }

  try {
    if (*parse) return cmd_parse(parse_paths, out);
    if (*samples) {
      if (sa.shard >= sa.num_shards) throw Error("--shard must be below --num-shards");
      return cmd_samples(sa, out, err);
    }
    if (*stats) return cmd_stats(stats_paths, counting, stats_threads, out, err);
    if (*eval) return cmd_eval(eval_path, eval_tables, range_set, out, err);
    if (*vocab) {
      const Vocab v = Vocab::builtin();
      if (vocab_out.empty()) {
        for (std::size_t i = 0; i < v.size(); ++i) out << v.token(static_cast<TokenId>(i)) << '\n';
      } else {
        v.write(vocab_out);
      }
      return kExitOk;
    }
  } catch (const SchemaError& e) {
    err << "schema error: " << e.path() << " " << e.pointer() << ": " << e.what() << '\n';
    return kExitSchema;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace tabformula::cli
