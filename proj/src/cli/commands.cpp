#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "cli/results.hpp"
#include "embgeo/embp.hpp"
#include "embgeo/error.hpp"
#include "embgeo/explain.hpp"
#include "embgeo/ica.hpp"
#include "embgeo/ingest.hpp"
#include "embgeo/knn.hpp"
#include "embgeo/serialize.hpp"
#include "embgeo/stability.hpp"
#include "embgeo/stats.hpp"
#include "embgeo/synth.hpp"

namespace embgeo::cli {

namespace fs = std::filesystem;

namespace {

struct PairInputs {
  std::string queries;
  std::string targets;
  std::string dataset = "default";
  std::string model = "default";
  bool prompted = false;
  bool normalize = false;
  std::string out;
};

void add_pair_inputs(CLI::App* cmd, PairInputs& in) {
  cmd->add_option("--queries", in.queries, "query-side embeddings (.embp or .csv)")->required();
  cmd->add_option("--targets", in.targets, "target-side embeddings (.embp or .csv)")->required();
  cmd->add_option("--dataset", in.dataset, "dataset label used in the results layout");
  cmd->add_option("--model", in.model, "model label used in the results layout");
  cmd->add_flag("--prompted", in.prompted, "embeddings were produced with a task prompt");
  cmd->add_option("--out", in.out, "results root directory")->required();
}

PairedEmbeddings load_pairs(const PairInputs& in) {
  auto q = load_embeddings(in.queries);
  auto t = load_embeddings(in.targets);
  if (!in.normalize) {
    return validate_paired(std::move(q), std::move(t), {in.dataset, in.model, in.prompted});
  }
  RowMatrix qn = q.data().rowwise().normalized();
  RowMatrix tn = t.data().rowwise().normalized();
  return validate_paired(EmbeddingMatrix(std::move(qn), q.ids()), EmbeddingMatrix(std::move(tn), t.ids()),
                         {in.dataset, in.model, in.prompted});
}

std::string prompt_suffix(bool prompted) { return prompted ? "-prompted" : ""; }

std::string fmt_fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::vector<std::size_t> parse_k_list(const std::string& text, std::size_t n) {
  if (text == "default") return default_k_grid(n);
  std::vector<std::size_t> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size() || !(v > 0.0)) throw std::invalid_argument(item);
      // Values below 1 are fractions of N.
      const double k = v < 1.0 ? v * static_cast<double>(n) : v;
      ks.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(k))));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidParameter, "bad --k-grid entry '" + item + "'");
    }
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

// ---------------------------------------------------------------- retention

struct RetentionArgs {
  PairInputs in;
  std::size_t k = 10;
  std::string k_grid;
  std::string metric = "cosine";
};

int cmd_retention(const RetentionArgs& a, std::ostream& out) {
  const auto metric = metric_from_string(a.metric);
  const auto pairs = load_pairs(a.in);
  const auto ks = a.k_grid.empty() ? std::vector<std::size_t>{a.k} : parse_k_list(a.k_grid, pairs.size());
  const auto results = retention_grid(pairs, ks, metric);

  const auto dir = run_directory(a.in.out, pairs.labels());
  const auto created = now_utc_seconds();
  for (const auto& r : results) {
    const std::string stem = "retention-k" + std::to_string(r.k) + "-" + to_string(metric) +
                             prompt_suffix(a.in.prompted);
    atomic_write(dir / (stem + ".result.json"), dump(to_json(r)));
    RunManifest m{pairs.labels(), ProbeKind::Retention,
                  {{"k", std::to_string(r.k)}, {"metric", to_string(metric)}},
                  stem + ".result.json", created};
    write_manifest(dir / (stem + ".json"), m,
                   {{"mean_retention", r.mean_retention}, {"mean_jaccard", r.mean_jaccard}, {"n", pairs.size()}});
    out << "k=" << r.k << " mean_retention=" << fmt_fixed(r.mean_retention, 6)
        << " mean_jaccard=" << fmt_fixed(r.mean_jaccard, 6) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------- ica

struct IcaArgs {
  PairInputs in;
  std::size_t dim = 32;
  std::uint64_t seed = 0;
  std::size_t max_iter = 10000;
  double tol = 1e-4;
  std::optional<std::uint64_t> shuffle_seed;
};

int cmd_ica(const IcaArgs& a, std::ostream& out) {
  if (a.dim == 0) throw Error(ErrorCode::InvalidParameter, "--dim must be at least 1");
  const auto pairs = load_pairs(a.in);
  IcaOptions opts;
  opts.d_ica = a.dim;
  opts.seed = a.seed;
  opts.max_iter = a.max_iter;
  opts.tol = a.tol;
  const auto model = fit_ica(pairs, opts);
  const auto profile = peak_profile(model, pairs);
  std::optional<PeakProfile> shuffled;
  if (a.shuffle_seed) shuffled = shuffled_profile(model, pairs, *a.shuffle_seed);

  const auto dir = run_directory(a.in.out, pairs.labels());
  const std::string stem = "ica-d" + std::to_string(a.dim) + "-s" + std::to_string(a.seed) +
                           (a.in.normalize ? "-norm" : "") + prompt_suffix(a.in.prompted);
  const auto created = now_utc_seconds();
  std::map<std::string, std::string> params{{"d_ica", std::to_string(a.dim)},
                                            {"seed", std::to_string(a.seed)},
                                            {"max_iter", std::to_string(a.max_iter)},
                                            {"tol", fmt_fixed(a.tol, 10)},
                                            {"normalize", a.in.normalize ? "true" : "false"}};

  save_model(dir / (stem + ".model"), model);
  atomic_write(dir / (stem + ".profile.csv"), profile_csv(profile));
  atomic_write(dir / (stem + ".profile.json"), dump(to_json(profile)));
  write_manifest(dir / (stem + ".json"),
                 RunManifest{pairs.labels(), ProbeKind::Ica, params, stem + ".profile.json", created},
                 {{"gini", profile.gini},
                  {"peak_dim", profile.peak_dim},
                  {"converged", model.converged},
                  {"iterations_used", model.iterations_used},
                  {"model", stem + ".model"}});
  out << "d_ica=" << a.dim << " gini=" << fmt_fixed(profile.gini, 6) << " peak_dim=" << profile.peak_dim
      << " converged=" << (model.converged ? "true" : "false") << " iterations=" << model.iterations_used
      << "\n";

  if (shuffled) {
    const std::string sstem = "shuffle-d" + std::to_string(a.dim) + "-s" + std::to_string(a.seed) +
                              "-ss" + std::to_string(*a.shuffle_seed) + (a.in.normalize ? "-norm" : "") +
                              prompt_suffix(a.in.prompted);
    auto sparams = params;
    sparams["shuffle_seed"] = std::to_string(*a.shuffle_seed);
    atomic_write(dir / (sstem + ".profile.csv"), profile_csv(*shuffled));
    atomic_write(dir / (sstem + ".profile.json"), dump(to_json(*shuffled)));
    write_manifest(dir / (sstem + ".json"),
                   RunManifest{pairs.labels(), ProbeKind::Shuffle, sparams, sstem + ".profile.json", created},
                   {{"gini", shuffled->gini},
                    {"peak_dim", shuffled->peak_dim},
                    {"paired_gini", profile.gini},
                    {"model", stem + ".model"}});
    out << "shuffled gini=" << fmt_fixed(shuffled->gini, 6) << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- stability

struct StabilityArgs {
  PairInputs in;
  std::size_t dim = 32;
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
  std::size_t max_iter = 10000;
  double tol = 1e-4;
  double gini_cv_threshold = 0.01;
  double peak_sigma_threshold = 0.95;
};

int cmd_stability(const StabilityArgs& a, std::ostream& out) {
  if (a.dim == 0) throw Error(ErrorCode::InvalidParameter, "--dim must be at least 1");
  if (a.restarts < 2) throw Error(ErrorCode::InvalidParameter, "--restarts must be at least 2");
  const auto pairs = load_pairs(a.in);
  StabilityOptions opts;
  opts.d_ica = a.dim;
  opts.restarts = a.restarts;
  opts.base_seed = a.seed;
  opts.max_iter = a.max_iter;
  opts.tol = a.tol;
  opts.gini_cv_threshold = a.gini_cv_threshold;
  opts.peak_sigma_threshold = a.peak_sigma_threshold;
  const auto report = stability_report(pairs, opts);

  const auto dir = run_directory(a.in.out, pairs.labels());
  const std::string stem = "stability-d" + std::to_string(a.dim) + "-r" + std::to_string(a.restarts) +
                           "-s" + std::to_string(a.seed) + (a.in.normalize ? "-norm" : "") +
                           prompt_suffix(a.in.prompted);
  atomic_write(dir / (stem + ".report.json"), dump(to_json(report)));
  write_manifest(dir / (stem + ".json"),
                 RunManifest{pairs.labels(),
                             ProbeKind::Stability,
                             {{"d_ica", std::to_string(a.dim)},
                              {"seed", std::to_string(a.seed)},
                              {"restarts", std::to_string(a.restarts)}},
                             stem + ".report.json",
                             now_utc_seconds()},
                 {{"gini_cv", report.gini_cv},
                  {"gini_stable", report.gini_stable},
                  {"peak_agreement_count", report.peak_agreement_count}});
  out << "gini_cv=" << fmt_fixed(report.gini_cv, 6) << " stable=" << (report.gini_stable ? "true" : "false")
      << " peak_agreement=" << report.peak_agreement_count << "/" << a.restarts * (a.restarts - 1) / 2
      << "\n";
  return kOk;
}

// ---------------------------------------------------------------- correlate

struct CorrelateArgs {
  std::string results;
  std::string scores;
  std::string measure = "retention";
  std::string group_by = "dataset";
  std::string out;
  std::vector<std::string> datasets;
  std::size_t k = 10;
  std::string metric = "cosine";
  std::size_t dim = 32;
  std::optional<std::uint64_t> seed;
  bool prompted = false;
  bool ascii_markers = false;
};

struct MeasureSpec {
  ProbeKind probe;
  std::string summary_key;
};

MeasureSpec measure_spec(const std::string& measure) {
  if (measure == "retention") return {ProbeKind::Retention, "mean_retention"};
  if (measure == "jaccard") return {ProbeKind::Retention, "mean_jaccard"};
  if (measure == "gini") return {ProbeKind::Ica, "gini"};
  if (measure == "shuffled-gini") return {ProbeKind::Shuffle, "gini"};
  throw Error(ErrorCode::InvalidParameter,
              "unknown --measure '" + measure + "' (retention|jaccard|gini|shuffled-gini)");
}

bool run_matches(const StoredRun& run, const CorrelateArgs& a, const MeasureSpec& spec) {
  const auto& m = run.manifest;
  if (m.probe != spec.probe || m.labels.prompted != a.prompted) return false;
  const auto param = [&](const std::string& key) {
    auto it = m.parameters.find(key);
    return it == m.parameters.end() ? std::string() : it->second;
  };
  if (spec.probe == ProbeKind::Retention) {
    return param("k") == std::to_string(a.k) && param("metric") == a.metric;
  }
  if (param("d_ica") != std::to_string(a.dim)) return false;
  return !a.seed || param("seed") == std::to_string(*a.seed);
}

std::string join_names(const std::set<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
  return s;
}

int cmd_correlate(const CorrelateArgs& a, std::ostream& out) {
  if (a.group_by != "dataset") {
    throw Error(ErrorCode::InvalidParameter, "--group-by supports only 'dataset'");
  }
  const auto spec = measure_spec(a.measure);
  const auto scores = load_scores(a.scores);
  const auto runs = scan_runs(a.results);

  // dataset -> model -> measure value
  std::map<std::string, std::map<std::string, double>> values;
  for (const auto& run : runs) {
    if (!run_matches(run, a, spec)) continue;
    if (!run.summary.contains(spec.summary_key)) {
      throw Error(ErrorCode::FormatError, "manifest lacks '" + spec.summary_key + "': " + run.path.string());
    }
    auto& slot = values[run.dataset];
    if (slot.count(run.model)) {
      throw Error(ErrorCode::JoinError, "several matching runs for model '" + run.model + "' on '" +
                                            run.dataset + "'; narrow with --k/--dim/--seed");
    }
    slot[run.model] = run.summary.at(spec.summary_key).get<double>();
  }

  std::vector<std::string> datasets = a.datasets;
  if (datasets.empty()) {
    for (const auto& [ds, _] : values) datasets.push_back(ds);
  }
  if (datasets.empty()) throw Error(ErrorCode::JoinError, "no runs match the requested measure");

  struct Row {
    std::string dataset;
    CorrelationResult corr;
  };
  std::vector<Row> rows;
  for (const auto& ds : datasets) {
    const auto it = values.find(ds);
    std::set<std::string> in_results, in_scores;
    if (it != values.end()) {
      for (const auto& [model, _] : it->second) in_results.insert(model);
    }
    for (const auto& e : scores.entries()) {
      if (e.dataset == ds) in_scores.insert(e.model);
    }
    std::set<std::string> only_results, only_scores;
    std::set_difference(in_results.begin(), in_results.end(), in_scores.begin(), in_scores.end(),
                        std::inserter(only_results, only_results.end()));
    std::set_difference(in_scores.begin(), in_scores.end(), in_results.begin(), in_results.end(),
                        std::inserter(only_scores, only_scores.end()));
    if (!only_results.empty() || !only_scores.empty()) {
      std::string msg = "join failed for dataset '" + ds + "'";
      if (!only_results.empty()) msg += "; in results but not in scores: " + join_names(only_results);
      if (!only_scores.empty()) msg += "; in scores but not in results: " + join_names(only_scores);
      throw Error(ErrorCode::JoinError, msg);
    }
    if (in_results.size() < 3) {
      throw Error(ErrorCode::TooFewSamples, "dataset '" + ds + "' has " + std::to_string(in_results.size()) +
                                                " joined models; at least 3 are needed");
    }
    std::vector<double> measure, score;
    for (const auto& model : in_results) {
      measure.push_back(it->second.at(model));
      score.push_back(*scores.find(model, ds));
    }
    rows.push_back({ds, spearman(measure, score)});
  }

  std::ostringstream csv, md;
  csv << "dataset,measure,rho,p,marker,n\n";
  md << "| Dataset | " << a.measure << " ρ | p | n |\n|---|---:|---:|---:|\n";
  json doc{{"schema_version", kSchemaVersion}, {"measure", a.measure}, {"prompted", a.prompted}, {"rows", json::array()}};
  for (const auto& r : rows) {
    const std::string marker = a.ascii_markers ? significance_marker_ascii(r.corr.p_value) : r.corr.marker;
    char p_buf[32];
    std::snprintf(p_buf, sizeof p_buf, "%.6g", r.corr.p_value);
    csv << r.dataset << "," << a.measure << "," << fmt_fixed(r.corr.rho, 6) << "," << p_buf << "," << marker
        << "," << r.corr.n << "\n";
    const std::string rho = fmt_fixed(r.corr.rho, 3);
    md << "| " << r.dataset << " | " << (r.corr.rho >= 0.7 ? "**" + rho + "**" : rho) << r.corr.marker
       << " | " << p_buf << " | " << r.corr.n << " |\n";
    json row = to_json(r.corr);
    row.erase("schema_version");
    row["dataset"] = r.dataset;
    doc["rows"].push_back(row);
    out << r.dataset << " rho=" << rho << r.corr.marker << " p=" << p_buf << " n=" << r.corr.n << "\n";
  }
  const fs::path dir(a.out);
  const std::string stem = "correlation-" + a.measure + prompt_suffix(a.prompted);
  atomic_write(dir / (stem + ".csv"), csv.str());
  atomic_write(dir / (stem + ".md"), md.str());
  atomic_write(dir / (stem + ".json"), dump(doc));
  return kOk;
}

// ------------------------------------------------------------------ explain

struct ExplainArgs {
  std::string model;
  std::string words;
  std::string vocab;
  std::optional<std::size_t> component;
  std::string profile;
  std::size_t n_top = 10;
  std::string out;
};

int cmd_explain(const ExplainArgs& a, std::ostream& out) {
  const auto model = load_model(a.model);
  std::size_t dim = 0;
  if (a.component) {
    dim = *a.component;
  } else if (!a.profile.empty()) {
    try {
      dim = json::parse(read_file(a.profile)).at("peak_dim").get<std::size_t>();
    } catch (const json::exception& e) {
      throw Error(ErrorCode::FormatError, std::string("cannot read peak_dim from profile: ") + e.what());
    }
  } else {
    throw Error(ErrorCode::InvalidParameter, "give --component or --profile");
  }
  const auto row = unmixing_row(model, dim);
  atomic_write(a.out + ".unmixing.csv", unmixing_csv(row));
  json doc{{"schema_version", kSchemaVersion}, {"unmixing", to_json(row)}};
  doc["unmixing"].erase("schema_version");

  if (!a.words.empty() || !a.vocab.empty()) {
    if (a.words.empty() || a.vocab.empty()) {
      throw Error(ErrorCode::InvalidParameter, "--words and --vocab go together");
    }
    const auto words = load_embeddings(a.words);
    const auto vocab = load_vocabulary(a.vocab);
    const auto expl = rank_words(model, words, vocab, dim, a.n_top);
    doc["words"] = to_json(expl);
    doc["words"].erase("schema_version");
    const auto text = render_explanation(expl);
    atomic_write(a.out + ".txt", text);
    out << text;
  }
  out << "top embedding dims for component " << dim << ":";
  for (std::size_t i = 0; i < std::min<std::size_t>(5, row.ranked_dims.size()); ++i) {
    out << " " << row.ranked_dims[i];
  }
  out << "\n";
  atomic_write(a.out + ".json", dump(doc));
  return kOk;
}

// -------------------------------------------------------------------- synth

struct SynthArgs {
  std::string kind = "linear_offset";
  std::size_t n = 1000;
  std::size_t d = 64;
  double offset_norm = 4.0;
  double noise = 0.5;
  std::uint64_t seed = 0;
  std::optional<std::size_t> offset_axis;
  std::string out;
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SynthSpec spec;
  spec.kind = synth_kind_from_string(a.kind);
  spec.n = a.n;
  spec.d = a.d;
  spec.offset_norm = a.offset_norm;
  spec.noise_sigma = a.noise;
  spec.seed = a.seed;
  spec.offset_axis = a.offset_axis;
  const auto result = generate(spec);
  write_embeddings(a.out + ".queries.embp", result.pairs.queries());
  write_embeddings(a.out + ".targets.embp", result.pairs.targets());
  atomic_write(a.out + ".truth.json", dump(to_json(result.truth)));
  out << "wrote " << a.out << ".{queries,targets}.embp and " << a.out << ".truth.json\n";
  return kOk;
}

// ------------------------------------------------------------------- ingest

struct IngestArgs {
  std::string csv;
  std::string out;
};

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
  const auto m = load_embeddings(a.csv, EmbeddingFormat::Csv);
  write_embeddings(a.out, m);
  out << "wrote " << m.rows() << "x" << m.dims() << " to " << a.out << "\n";
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural diagnostics for paired text embeddings", "embgeo"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RetentionArgs ret;
  auto* c_ret = app.add_subcommand("retention", "neighborhood retention between query and target sides");
  add_pair_inputs(c_ret, ret.in);
  auto* k_opt = c_ret->add_option("--k", ret.k, "neighbor count")->capture_default_str();
  c_ret->add_option("--k-grid", ret.k_grid, "'default' or comma list (values < 1 are fractions of N)")
      ->excludes(k_opt);
  c_ret->add_option("--metric", ret.metric, "cosine|euclidean")->capture_default_str();

  IcaArgs ica;
  auto* c_ica = app.add_subcommand("ica", "fit FastICA and export paired/shuffled peak profiles");
  add_pair_inputs(c_ica, ica.in);
  c_ica->add_option("--dim", ica.dim, "number of ICA components")->capture_default_str();
  c_ica->add_option("--seed", ica.seed, "initialisation seed")->capture_default_str();
  c_ica->add_option("--max-iter", ica.max_iter)->capture_default_str();
  c_ica->add_option("--tol", ica.tol)->capture_default_str();
  c_ica->add_option("--shuffle-seed", ica.shuffle_seed, "also export a shuffled-target profile");
  c_ica->add_flag("--normalize", ica.in.normalize, "length-normalise embeddings before fitting");

  StabilityArgs stab;
  auto* c_stab = app.add_subcommand("stability", "multi-restart ICA stability report");
  add_pair_inputs(c_stab, stab.in);
  c_stab->add_option("--dim", stab.dim)->capture_default_str();
  c_stab->add_option("--restarts", stab.restarts)->capture_default_str();
  c_stab->add_option("--seed", stab.seed, "seed of the first restart")->capture_default_str();
  c_stab->add_option("--max-iter", stab.max_iter)->capture_default_str();
  c_stab->add_option("--tol", stab.tol)->capture_default_str();
  c_stab->add_option("--gini-cv-threshold", stab.gini_cv_threshold)->capture_default_str();
  c_stab->add_option("--peak-sigma-threshold", stab.peak_sigma_threshold)->capture_default_str();
  c_stab->add_flag("--normalize", stab.in.normalize, "length-normalise embeddings before fitting");

  CorrelateArgs cor;
  auto* c_cor = app.add_subcommand("correlate", "Spearman correlation of a measure with benchmark scores");
  c_cor->add_option("--results", cor.results, "results root directory")->required();
  c_cor->add_option("--scores", cor.scores, "CSV with header model,dataset,score")->required();
  c_cor->add_option("--measure", cor.measure, "retention|jaccard|gini|shuffled-gini")->capture_default_str();
  c_cor->add_option("--group-by", cor.group_by)->capture_default_str();
  c_cor->add_option("--out", cor.out, "directory for the correlation tables")->required();
  c_cor->add_option("--dataset", cor.datasets, "restrict to these datasets (repeatable)");
  c_cor->add_option("--k", cor.k, "retention runs: neighbor count to use")->capture_default_str();
  c_cor->add_option("--metric", cor.metric, "retention runs: metric to use")->capture_default_str();
  c_cor->add_option("--dim", cor.dim, "ICA runs: d_ica to use")->capture_default_str();
  c_cor->add_option("--seed", cor.seed, "ICA runs: seed to use");
  c_cor->add_flag("--prompted", cor.prompted, "use prompted runs instead of unprompted ones");
  c_cor->add_flag("--ascii-markers", cor.ascii_markers, "write s/d/dd instead of */†/‡ in the CSV");

  ExplainArgs ex;
  auto* c_ex = app.add_subcommand("explain", "salient words and unmixing weights of one component");
  c_ex->add_option("--model-file", ex.model, "model stem written by `ica` (without .json/.embp)")->required();
  c_ex->add_option("--words", ex.words, "word embeddings aligned with --vocab");
  c_ex->add_option("--vocab", ex.vocab, "one word per line");
  c_ex->add_option("--component", ex.component, "ICA component to explain");
  c_ex->add_option("--profile", ex.profile, "profile JSON whose peak_dim is explained");
  c_ex->add_option("--n-top", ex.n_top)->capture_default_str();
  c_ex->add_option("--out", ex.out, "output prefix")->required();

  SynthArgs syn;
  auto* c_syn = app.add_subcommand("synth", "generate paired embeddings with planted structure");
  c_syn->add_option("--kind", syn.kind,
                    "linear_offset|global_shift_only|neighbor_preserving_nonlinear|unstructured")
      ->capture_default_str();
  c_syn->add_option("--n", syn.n)->capture_default_str();
  c_syn->add_option("--d", syn.d)->capture_default_str();
  c_syn->add_option("--offset-norm", syn.offset_norm)->capture_default_str();
  c_syn->add_option("--noise", syn.noise)->capture_default_str();
  c_syn->add_option("--seed", syn.seed)->capture_default_str();
  c_syn->add_option("--offset-axis", syn.offset_axis, "plant the offset along this basis axis");
  c_syn->add_option("--out", syn.out, "output prefix")->required();

  IngestArgs ing;
  auto* c_ing = app.add_subcommand("ingest", "convert an embedding CSV to the EMBP binary format");
  c_ing->add_option("--csv", ing.csv)->required();
  c_ing->add_option("--out", ing.out)->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (c_ret->parsed()) return cmd_retention(ret, out);
    if (c_ica->parsed()) return cmd_ica(ica, out);
    if (c_stab->parsed()) return cmd_stability(stab, out);
    if (c_cor->parsed()) return cmd_correlate(cor, out);
    if (c_ex->parsed()) return cmd_explain(ex, out);
    if (c_syn->parsed()) return cmd_synth(syn, out);
    if (c_ing->parsed()) return cmd_ingest(ing, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}

}  // namespace embgeo::cli
