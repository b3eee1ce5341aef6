#include "embgeo/serialize.hpp"

#include <cstdio>
#include <sstream>

#include "embgeo/embp.hpp"
#include "embgeo/error.hpp"

namespace embgeo {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::filesystem::path with_suffix(const std::filesystem::path& stem, const std::string& suffix) {
  return stem.string() + suffix;
}

}  // namespace

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json to_json(const RetentionResult& r) {
  return json{{"schema_version", kSchemaVersion},
              {"k", r.k},
              {"metric", to_string(r.metric)},
              {"mean_retention", r.mean_retention},
              {"mean_jaccard", r.mean_jaccard},
              {"per_pair_overlap", r.per_pair_overlap},
              {"per_pair_jaccard", r.per_pair_jaccard}};
}

json to_json(const PeakProfile& p) {
  return json{{"schema_version", kSchemaVersion},
              {"gini", p.gini},
              {"peak_dim", p.peak_dim},
              {"shuffled", p.shuffled},
              {"d_ica", p.mean_abs_diff.size()},
              {"mean_abs_diff", p.mean_abs_diff},
              {"std_abs_diff", p.std_abs_diff}};
}

json to_json(const CorrelationResult& c) {
  return json{{"schema_version", kSchemaVersion},
              {"rho", c.rho},
              {"p_value", c.p_value},
              {"n", c.n},
              {"marker", c.marker},
              {"marker_ascii", significance_marker_ascii(c.p_value)},
              {"p_method", c.method == PValueMethod::ExactPermutation ? "exact_permutation"
                                                                      : "student_t"}};
}

json to_json(const StabilityReport& s) {
  json sigma = json::array();
  for (Eigen::Index i = 0; i < s.peak_sigma.rows(); ++i) {
    std::vector<double> row(s.peak_sigma.cols());
    for (Eigen::Index j = 0; j < s.peak_sigma.cols(); ++j) row[static_cast<std::size_t>(j)] = s.peak_sigma(i, j);
    sigma.push_back(row);
  }
  json matchings = json::array();
  for (const auto& m : s.matchings) {
    matchings.push_back({{"run_a", m.run_a}, {"run_b", m.run_b}, {"matching", m.matching},
                         {"peak_matched", m.peak_matched}});
  }
  std::vector<bool> converged = s.converged;
  return json{{"schema_version", kSchemaVersion},
              {"restarts", s.restarts},
              {"seeds", s.seeds},
              {"gini_values", s.gini_values},
              {"peak_dims", s.peak_dims},
              {"converged", converged},
              {"gini_cv", s.gini_cv},
              {"gini_cv_threshold", s.gini_cv_threshold},
              {"gini_stable", s.gini_stable},
              {"peak_sigma_matrix", sigma},
              {"peak_sigma_threshold", s.peak_sigma_threshold},
              {"peak_agreement_count", s.peak_agreement_count},
              {"run_pairs", s.restarts * (s.restarts - 1) / 2},
              {"matchings", matchings}};
}

json to_json(const WordExplanation& e) {
  auto list = [](const auto& items) {
    json a = json::array();
    for (const auto& [w, v] : items) a.push_back({{"word", w}, {"value", v}});
    return a;
  };
  return json{{"schema_version", kSchemaVersion}, {"dim", e.dim}, {"top", list(e.top)},
              {"bottom", list(e.bottom)}};
}

json to_json(const UnmixingRow& u) {
  return json{{"schema_version", kSchemaVersion}, {"dim", u.dim}, {"weights", u.weights},
              {"ranked_dims", u.ranked_dims}};
}

json to_json(const GroundTruth& g) {
  json j{{"schema_version", kSchemaVersion},
         {"kind", to_string(g.spec.kind)},
         {"n", g.spec.n},
         {"d", g.spec.d},
         {"offset_norm", g.spec.offset_norm},
         {"noise_sigma", g.spec.noise_sigma},
         {"seed", g.spec.seed},
         {"offset", g.offset},
         {"permutation", g.permutation},
         {"radii", g.radii}};
  j["offset_axis"] = g.spec.offset_axis ? json(*g.spec.offset_axis) : json(nullptr);
  return j;
}

json to_json(const RunManifest& m) {
  return json{{"schema_version", kSchemaVersion},
              {"record", "run_manifest"},
              {"dataset", m.labels.dataset_name},
              {"model", m.labels.model_name},
              {"prompted", m.labels.prompted},
              {"probe", to_string(m.probe)},
              {"parameters", m.parameters},
              {"result_file", m.result_file},
              {"created_utc", m.created_utc}};
}

RunManifest manifest_from_json(const json& j) {
  try {
    if (j.value("record", "") != "run_manifest") {
      throw Error(ErrorCode::FormatError, "document is not a run manifest");
    }
    RunManifest m;
    m.labels.dataset_name = j.at("dataset").get<std::string>();
    m.labels.model_name = j.at("model").get<std::string>();
    m.labels.prompted = j.at("prompted").get<bool>();
    m.probe = probe_kind_from_string(j.at("probe").get<std::string>());
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    m.result_file = j.value("result_file", "");
    m.created_utc = j.value("created_utc", std::int64_t{0});
    m.validate();
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("malformed manifest: ") + e.what());
  }
}

std::string profile_csv(const PeakProfile& p) {
  std::ostringstream out;
  out << "dim,mean_abs_diff,std_abs_diff\n";
  for (std::size_t i = 0; i < p.mean_abs_diff.size(); ++i) {
    out << i << "," << fmt(p.mean_abs_diff[i]) << "," << fmt(p.std_abs_diff[i]) << "\n";
  }
  return out.str();
}

std::string unmixing_csv(const UnmixingRow& u) {
  std::ostringstream out;
  out << "emb_dim,weight\n";
  for (std::size_t i = 0; i < u.weights.size(); ++i) out << i << "," << fmt(u.weights[i]) << "\n";
  return out.str();
}

void save_model(const std::filesystem::path& stem, const IcaModel& model) {
  const auto d = static_cast<Eigen::Index>(model.whitener.input_dims());
  const auto m = static_cast<Eigen::Index>(model.d_ica);
  RowMatrix packed = RowMatrix::Zero(1 + 2 * m, d);
  std::vector<std::string> ids;
  packed.row(0) = model.whitener.mean.transpose();
  ids.emplace_back("mean");
  packed.middleRows(1, m) = model.whitener.projection;
  for (Eigen::Index i = 0; i < m; ++i) ids.push_back("projection:" + std::to_string(i));
  packed.block(1 + m, 0, m, m) = model.unmixing;
  for (Eigen::Index i = 0; i < m; ++i) ids.push_back("unmixing:" + std::to_string(i));

  const std::vector<double> sv(model.whitener.singular_values.data(),
                               model.whitener.singular_values.data() + model.whitener.singular_values.size());
  json meta{{"schema_version", kSchemaVersion},
            {"record", "ica_model"},
            {"d_ica", model.d_ica},
            {"input_dims", model.whitener.input_dims()},
            {"seed", model.seed},
            {"tol", model.tol},
            {"max_iter", model.max_iter},
            {"iterations_used", model.iterations_used},
            {"converged", model.converged},
            {"singular_values", sv},
            {"matrices", with_suffix(stem, ".embp").filename().string()}};
  write_embp(with_suffix(stem, ".embp"), packed, ids, EmbpDtype::F64);
  atomic_write(with_suffix(stem, ".json"), dump(meta));
}

IcaModel load_model(const std::filesystem::path& stem) {
  json meta;
  try {
    meta = json::parse(read_file(with_suffix(stem, ".json")));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("malformed model metadata: ") + e.what());
  }
  const auto packed = read_embp(with_suffix(stem, ".embp"));
  IcaModel model;
  try {
    model.d_ica = meta.at("d_ica").get<std::size_t>();
    model.seed = meta.at("seed").get<std::uint64_t>();
    model.tol = meta.at("tol").get<double>();
    model.max_iter = meta.at("max_iter").get<std::size_t>();
    model.iterations_used = meta.at("iterations_used").get<std::size_t>();
    model.converged = meta.at("converged").get<bool>();
    const auto sv = meta.at("singular_values").get<std::vector<double>>();
    model.whitener.singular_values = Eigen::Map<const Vector>(sv.data(), static_cast<Eigen::Index>(sv.size()));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("malformed model metadata: ") + e.what());
  }
  const auto m = static_cast<Eigen::Index>(model.d_ica);
  const auto& data = packed.data;
  if (data.rows() != 1 + 2 * m || data.cols() < m) {
    throw Error(ErrorCode::FormatError, "model matrices do not match d_ica=" + std::to_string(model.d_ica));
  }
  model.whitener.mean = data.row(0).transpose();
  model.whitener.projection = data.middleRows(1, m);
  model.unmixing = data.block(1 + m, 0, m, m);
  recompose(model);
  return model;
}

}  // namespace embgeo
