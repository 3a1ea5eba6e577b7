// Command-line surface for the contrastive transfer tagger: synthetic corpus
// generation, event-embedding construction, the two training stages,
// pseudo labeling, evaluation, and the experiment driver.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "cts/artifacts.hpp"
#include "cts/corpus_io.hpp"
#include "cts/pipeline.hpp"
#include "cts/reporting.hpp"
#include "cts/run_config.hpp"
#include "cts/similarity.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::size_t worker_threads(std::size_t jobs) {
  std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CTS_THREADS")) {
    const long cap = std::atol(env);
    if (cap > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return std::min(n, std::max<std::size_t>(1, jobs));
}

json load_json_file(const std::string& path) {
  if (!fs::exists(path)) throw cts::ValueError("file not found: " + path);
  return json::parse(cts::read_file(path));
}

cts::RunConfig load_run_config(const std::string& path) {
  if (path.empty()) return cts::RunConfig{};
  return cts::run_config_from_json(load_json_file(path));
}

void write_snapshot(const fs::path& out_dir, const json& resolved) {
  cts::write_file(out_dir / "resolved-config.json", resolved.dump(2) + "\n");
}

cts::EmbeddingProvider make_provider(const cts::RunConfig& cfg) {
  if (!cfg.embedding_file.empty())
    return cts::EmbeddingProvider::from_word2vec_text(cts::read_file(cfg.embedding_file));
  return cts::EmbeddingProvider::hashing(cfg.train.aux_dim,
                                         cts::derive_seed(cfg.train.seed, "aux-provider"));
}

cts::TemplateSet load_templates(const std::string& path, bool use_fallback) {
  if (path.empty()) {
    cts::TemplateSet t = cts::default_template_set();
    t.use_fallback = use_fallback;
    return t;
  }
  return cts::template_set_from_json(load_json_file(path), use_fallback);
}

std::vector<cts::Document> docs_of_split(const cts::CorpusBundle& bundle, const std::string& split) {
  std::vector<cts::Document> docs = cts::split_docs(bundle, split);
  if (docs.empty()) throw cts::ValueError("corpus has no '" + split + "' split");
  return docs;
}

int cmd_gen_synth(const std::string& config_path, const std::string& out_dir, long seed_flag) {
  cts::SynthConfig cfg;
  std::uint64_t seed = 1;
  if (!config_path.empty()) {
    json j = load_json_file(config_path);
    if (j.contains("seed")) {
      seed = j.at("seed").get<std::uint64_t>();
      j.erase("seed");
    }
    cfg = cts::synth_config_from_json(j);
  }
  if (seed_flag >= 0) seed = static_cast<std::uint64_t>(seed_flag);

  const cts::SynthResult r = cts::gen_synthetic(cfg, seed);
  const fs::path out(out_dir);
  cts::write_corpus_dir(out / "source", r.source, true);
  cts::write_corpus_dir(out / "target", r.target, false);
  cts::write_file(out / "meta.json", cts::to_json(r.meta).dump(2) + "\n");
  json resolved = cts::to_json(cfg);
  resolved["seed"] = seed;
  write_snapshot(out, resolved);
  std::cout << "wrote source (" << r.source.documents.size() << " docs, " << r.source.events.size()
            << " events) and target (" << r.target.documents.size() << " docs, "
            << r.meta.injected.size() << " injected source spans) to " << out_dir << "\n";
  return 0;
}

int cmd_embed_events(cts::RunConfig cfg, const std::string& mode_flag, const std::string& source_dir,
                     const std::string& out_file, bool no_fallback) {
  if (!source_dir.empty()) cfg.source_dir = source_dir;
  if (!mode_flag.empty()) cfg.train.mode = cts::embedding_mode_from_string(mode_flag);
  if (cfg.source_dir.empty()) throw cts::ValueError("embed-events: --source is required");

  const cts::CorpusBundle bundle = cts::load_corpus_dir(cfg.source_dir);
  const cts::EmbeddingProvider provider = make_provider(cfg);
  const cts::TemplateSet templates = load_templates(cfg.templates_file, !no_fallback);
  const cts::EmbeddingSets sets =
      cts::build_embedding_sets(bundle, cfg.train.mode, provider, templates, cfg.train.seed);

  std::size_t empty = 0;
  for (const auto& [key, embs] : sets) empty += embs.empty();
  if (bundle.events.empty()) std::cerr << "warning: corpus has zero events; all sets are empty\n";
  std::cout << "built " << sets.size() << " embedding sets (" << empty << " empty) from "
            << bundle.events.size() << " events\n";

  cts::write_file(out_file, cts::embedding_sets_json(sets, cfg.train.mode, provider.dim).dump() + "\n");
  return 0;
}

int cmd_pretrain(cts::RunConfig cfg, const std::string& source_dir, const std::string& target_dir,
                 const std::string& out_dir) {
  if (!source_dir.empty()) cfg.source_dir = source_dir;
  if (!target_dir.empty()) cfg.target_dir = target_dir;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (cfg.source_dir.empty() || cfg.output_dir.empty())
    throw cts::ValueError("pretrain: --source and --out are required");

  const cts::CorpusBundle source = cts::load_corpus_dir(cfg.source_dir);
  std::vector<cts::Document> extra_storage;
  std::vector<const cts::Document*> extra;
  if (!cfg.target_dir.empty()) {
    const cts::CorpusBundle target = cts::load_corpus_dir(cfg.target_dir);
    extra_storage = target.documents;
    for (const cts::Document& d : extra_storage) extra.push_back(&d);
  }

  const cts::EmbeddingProvider provider = make_provider(cfg);
  const cts::TemplateSet templates = load_templates(cfg.templates_file, true);
  const cts::TaggerModel model = cts::pretrain_source(source, cfg.train, extra, &provider, &templates);
  const fs::path out(cfg.output_dir);
  cts::write_file(out / "model.json", cts::save_checkpoint_string(model) + "\n");
  write_snapshot(out, cts::to_json(cfg));

  const double val_f1 = cts::evaluate(model, cts::split_docs(source, "dev")).macro_f1;
  std::cout << "pretrained model written to " << (out / "model.json").string()
            << " (source dev macro F1 " << val_f1 << ")\n";
  return 0;
}

int cmd_pseudo_label(const std::string& model_path, const std::string& target_dir,
                     const std::string& out_file) {
  const cts::TaggerModel model = cts::load_checkpoint_string(cts::read_file(model_path));
  const cts::CorpusBundle target = cts::load_corpus_dir(target_dir);
  const cts::PseudoSet q = cts::extract_pseudo(model, docs_of_split(target, "train"));
  cts::write_file(out_file, cts::to_json(q).dump(2) + "\n");
  std::cout << "extracted " << q.members.size() << " pseudo entities to " << out_file << "\n";
  return 0;
}

int cmd_finetune(cts::RunConfig cfg, const std::string& model_path, const std::string& target_dir,
                 const std::string& pseudo_file, const std::string& out_dir) {
  if (!target_dir.empty()) cfg.target_dir = target_dir;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (model_path.empty() || cfg.target_dir.empty() || cfg.output_dir.empty())
    throw cts::ValueError("finetune: --model, --target and --out are required");

  cts::TaggerModel model = cts::load_checkpoint_string(cts::read_file(model_path));
  const cts::CorpusBundle target = cts::load_corpus_dir(cfg.target_dir);
  std::vector<cts::Document> train = docs_of_split(target, "train");
  if (cfg.train.fewshot_target)
    train = cts::downsample_fewshot(train, cts::derive_seed(cfg.train.seed, "target-fewshot"),
                                    cfg.train.fewshot_lo, cfg.train.fewshot_hi);
  const std::vector<cts::Document> val = cts::split_docs(target, "dev");

  cts::PseudoSet q;
  if (!pseudo_file.empty())
    q = cts::pseudo_set_from_json(load_json_file(pseudo_file));
  else if (cfg.train.contrastive_target)
    q = cts::extract_pseudo(model, train);

  const cts::TaggerModel tuned = cts::finetune_target(std::move(model), train, val, q, cfg.train);
  const fs::path out(cfg.output_dir);
  cts::write_file(out / "model.json", cts::save_checkpoint_string(tuned) + "\n");
  write_snapshot(out, cts::to_json(cfg));
  const double val_f1 = val.empty() ? 0.0 : cts::evaluate(tuned, val).macro_f1;
  std::cout << "finetuned model written to " << (out / "model.json").string()
            << " (target dev macro F1 " << val_f1 << ", |Q| = " << q.members.size() << ")\n";
  return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& data_path,
                 const std::string& out_dir) {
  const cts::TaggerModel model = cts::load_checkpoint_string(cts::read_file(model_path));
  std::vector<cts::Document> docs;
  const fs::path data(data_path);
  if (fs::is_directory(data)) {
    const cts::CorpusBundle bundle = cts::load_corpus_dir(data);
    docs = docs_of_split(bundle, "test");
  } else {
    docs = cts::parse_conll(cts::read_file(data), data.stem().string() + "-");
  }
  const cts::EvalReport report = cts::evaluate(model, docs);
  std::cout << "macro P=" << report.macro_precision << " R=" << report.macro_recall
            << " F1=" << report.macro_f1 << " over " << docs.size() << " docs\n";
  if (!out_dir.empty()) {
    const fs::path out(out_dir);
    cts::write_file(out / "report.json", cts::to_json(report).dump(2) + "\n");
    cts::write_file(out / "report.csv",
                    cts::report_csv_header() + cts::eval_report_csv_rows("evaluate", "-", "test", report));
    write_snapshot(out, json{{"model", model_path}, {"data", data_path}});
  }
  return 0;
}

int cmd_db_index(const std::string& model_path, const std::string& target_dir,
                 const std::string& split, const std::string& meta_file,
                 const std::string& pseudo_file) {
  const cts::TaggerModel model = cts::load_checkpoint_string(cts::read_file(model_path));
  const cts::CorpusBundle target = cts::load_corpus_dir(target_dir);
  const std::vector<cts::Document> docs = docs_of_split(target, split);

  std::map<std::string, std::vector<cts::Span>> pseudo_spans;
  if (!meta_file.empty()) {
    const cts::SynthMeta meta = cts::synth_meta_from_json(load_json_file(meta_file));
    for (const cts::InjectedSpan& s : meta.injected)
      pseudo_spans[s.doc_id].push_back({s.start, s.end, "pseudo"});
  } else if (!pseudo_file.empty()) {
    pseudo_spans = cts::pseudo_set_from_json(load_json_file(pseudo_file)).by_doc();
  } else {
    pseudo_spans = cts::extract_pseudo(model, docs).by_doc();
  }

  std::vector<std::pair<cts::Vec, int>> clusters;
  for (const cts::Document& doc : docs) {
    const cts::ForwardResult fwd = cts::forward(model, doc);
    for (const cts::Span& g : cts::decode_bio(doc.tags))
      clusters.push_back({cts::entity_repr(fwd.tape.hidden, g.start, g.end), 0});
    const auto it = pseudo_spans.find(doc.id);
    if (it != pseudo_spans.end())
      for (const cts::Span& p : it->second)
        clusters.push_back({cts::entity_repr(fwd.tape.hidden, p.start, p.end), 1});
  }
  std::cout << "db_index " << cts::davies_bouldin(clusters) << " over " << clusters.size()
            << " entity representations\n";
  return 0;
}

int cmd_run_all(cts::RunConfig cfg, const std::string& source_dir, const std::string& target_dir,
                const std::string& out_dir, const std::string& variant_flag,
                const std::string& meta_file, std::vector<std::uint64_t> seeds) {
  if (!source_dir.empty()) cfg.source_dir = source_dir;
  if (!target_dir.empty()) cfg.target_dir = target_dir;
  if (!out_dir.empty()) cfg.output_dir = out_dir;
  if (!variant_flag.empty()) cfg.variant = variant_flag;
  if (!meta_file.empty()) cfg.meta_file = meta_file;
  if (!seeds.empty()) cfg.seeds = std::move(seeds);
  if (cfg.source_dir.empty() || cfg.target_dir.empty() || cfg.output_dir.empty())
    throw cts::ValueError("run-all: --source, --target and --out are required");

  const cts::CorpusBundle source = cts::load_corpus_dir(cfg.source_dir);
  const cts::CorpusBundle target = cts::load_corpus_dir(cfg.target_dir);
  std::optional<cts::SynthMeta> meta;
  if (!cfg.meta_file.empty()) meta = cts::synth_meta_from_json(load_json_file(cfg.meta_file));

  std::vector<cts::Variant> variants;
  if (cfg.variant == "all")
    variants = {cts::Variant::target_only, cts::Variant::direct_transfer, cts::Variant::eg_only,
                cts::Variant::ed_only, cts::Variant::eg_ed};
  else
    variants = {cts::variant_from_string(cfg.variant)};

  const std::size_t threads = worker_threads(variants.size() * cfg.seeds.size());
  const cts::ExperimentReport report = cts::run_experiment(
      cfg.train, source, target, variants, cfg.seeds, meta ? &*meta : nullptr, threads);

  const fs::path out(cfg.output_dir);
  cts::write_file(out / "report.json", cts::to_json(report).dump(2) + "\n");
  cts::write_file(out / "report.csv", cts::experiment_csv(report));
  write_snapshot(out, cts::to_json(cfg));
  for (const cts::VariantSummary& v : report.variants) {
    std::cout << v.variant << ": mean macro F1 " << v.mean_f1 << " +- " << v.std_f1;
    if (!std::isnan(v.mean_db)) std::cout << ", mean DB " << v.mean_db;
    std::cout << ", mean pseudo-style FP " << v.mean_fp << "\n";
  }
  return 0;
}

int cmd_kappa_export(const std::string& embeddings_file, const std::string& out_file) {
  const cts::EmbeddingSets sets = cts::embedding_sets_from_json(load_json_file(embeddings_file));
  cts::KappaCache cache(sets);
  cts::write_file(out_file, cts::kappa_csv(cache));
  std::cout << "wrote kappa table for " << sets.size() << " keys to " << out_file << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contrastive transfer learning for sequence tagging"};
  app.require_subcommand(1);

  std::string config_path, run_path, source_dir, target_dir, out_dir, out_file, model_path;
  std::string mode_flag, variant_flag, pseudo_file, meta_file, data_path, embeddings_file;
  std::string split = "test";
  std::vector<std::uint64_t> seeds;
  long seed_flag = -1;
  bool no_fallback = false;

  auto* gen = app.add_subcommand("gen-synth", "generate a synthetic source/target corpus pair");
  gen->add_option("--config", config_path, "SynthConfig JSON");
  gen->add_option("--out", out_dir, "output directory")->required();
  gen->add_option("--seed", seed_flag, "generator seed (overrides config)");

  auto* embed = app.add_subcommand("embed-events", "build per-entity event embedding sets");
  embed->add_option("--run", run_path, "run config JSON");
  embed->add_option("--mode", mode_flag, "concat|sentEnc");
  embed->add_option("--source", source_dir, "source corpus directory");
  embed->add_option("--out", out_file, "output JSON file")->required();
  embed->add_flag("--no-fallback", no_fallback, "error on event types without a template");

  auto* pretrain = app.add_subcommand("pretrain", "source-domain pretraining");
  pretrain->add_option("--run", run_path, "run config JSON");
  pretrain->add_option("--source", source_dir, "source corpus directory");
  pretrain->add_option("--target", target_dir, "target corpus directory (vocabulary only)");
  pretrain->add_option("--out", out_dir, "output directory");

  auto* pseudo = app.add_subcommand("pseudo-label", "extract pseudo entities on target train docs");
  pseudo->add_option("--model", model_path, "checkpoint JSON")->required();
  pseudo->add_option("--target", target_dir, "target corpus directory")->required();
  pseudo->add_option("--out", out_file, "output JSON file")->required();

  auto* finetune = app.add_subcommand("finetune", "target-domain finetuning");
  finetune->add_option("--run", run_path, "run config JSON");
  finetune->add_option("--model", model_path, "checkpoint JSON")->required();
  finetune->add_option("--target", target_dir, "target corpus directory");
  finetune->add_option("--pseudo", pseudo_file, "pseudo-label JSON (default: extract)");
  finetune->add_option("--out", out_dir, "output directory");

  auto* evaluate = app.add_subcommand("evaluate", "strict entity-level evaluation");
  evaluate->add_option("--model", model_path, "checkpoint JSON")->required();
  evaluate->add_option("--data", data_path, "CoNLL file or corpus directory")->required();
  evaluate->add_option("--out", out_dir, "report output directory");

  auto* db = app.add_subcommand("db-index", "Davies-Bouldin index of target vs pseudo clusters");
  db->add_option("--model", model_path, "checkpoint JSON")->required();
  db->add_option("--target", target_dir, "target corpus directory")->required();
  db->add_option("--split", split, "corpus split (default test)");
  db->add_option("--meta", meta_file, "synthetic meta.json with injected spans");
  db->add_option("--pseudo", pseudo_file, "pseudo-label JSON");

  auto* runall = app.add_subcommand("run-all", "run experiment variants over seeds");
  runall->add_option("--run", run_path, "run config JSON");
  runall->add_option("--source", source_dir, "source corpus directory");
  runall->add_option("--target", target_dir, "target corpus directory");
  runall->add_option("--out", out_dir, "output directory");
  runall->add_option("--variant", variant_flag, "variant name or 'all'");
  runall->add_option("--seeds", seeds, "run seeds");
  runall->add_option("--meta", meta_file, "synthetic meta.json for transfer diagnostics");

  auto* kexp = app.add_subcommand("kappa-export", "export pairwise kappa values as CSV");
  kexp->add_option("--embeddings", embeddings_file, "embedding sets JSON from embed-events")->required();
  kexp->add_option("--out", out_file, "output CSV file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_gen_synth(config_path, out_dir, seed_flag);
    if (embed->parsed())
      return cmd_embed_events(load_run_config(run_path), mode_flag, source_dir, out_file, no_fallback);
    if (pretrain->parsed())
      return cmd_pretrain(load_run_config(run_path), source_dir, target_dir, out_dir);
    if (pseudo->parsed()) return cmd_pseudo_label(model_path, target_dir, out_file);
    if (finetune->parsed())
      return cmd_finetune(load_run_config(run_path), model_path, target_dir, pseudo_file, out_dir);
    if (evaluate->parsed()) return cmd_evaluate(model_path, data_path, out_dir);
    if (db->parsed()) return cmd_db_index(model_path, target_dir, split, meta_file, pseudo_file);
    if (runall->parsed())
      return cmd_run_all(load_run_config(run_path), source_dir, target_dir, out_dir, variant_flag,
                         meta_file, std::move(seeds));
    if (kexp->parsed()) return cmd_kappa_export(embeddings_file, out_file);
  } catch (const cts::ValueError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cts::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
