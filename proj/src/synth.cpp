#include "embgeo/synth.hpp"

#include <cmath>

#include "embgeo/error.hpp"
#include "embgeo/rng.hpp"

namespace embgeo {

std::string to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::LinearOffset: return "linear_offset";
    case SynthKind::GlobalShiftOnly: return "global_shift_only";
    case SynthKind::NeighborPreservingNonlinear: return "neighbor_preserving_nonlinear";
    case SynthKind::Unstructured: return "unstructured";
  }
  return "unknown";
}

SynthKind synth_kind_from_string(const std::string& s) {
  if (s == "linear_offset") return SynthKind::LinearOffset;
  if (s == "global_shift_only") return SynthKind::GlobalShiftOnly;
  if (s == "neighbor_preserving_nonlinear") return SynthKind::NeighborPreservingNonlinear;
  if (s == "unstructured") return SynthKind::Unstructured;
  throw Error(ErrorCode::InvalidSpec, "unknown synth kind '" + s + "'");
}

void SynthSpec::validate() const {
  if (n < 2) throw Error(ErrorCode::InvalidSpec, "synth needs N >= 2");
  if (d < 2) throw Error(ErrorCode::InvalidSpec, "synth needs d >= 2");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw Error(ErrorCode::InvalidSpec, "noise_sigma must be a finite value >= 0");
  }
  if (!(offset_norm >= 0.0) || !std::isfinite(offset_norm)) {
    throw Error(ErrorCode::InvalidSpec, "offset_norm must be a finite value >= 0");
  }
  if (offset_axis && *offset_axis >= d) {
    throw Error(ErrorCode::InvalidSpec, "offset_axis " + std::to_string(*offset_axis) +
                                            " out of range for d=" + std::to_string(d));
  }
}

SynthResult generate(const SynthSpec& spec, PairLabels labels) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto d = static_cast<Eigen::Index>(spec.d);
  Rng rng(spec.seed);

  GroundTruth truth;
  truth.spec = spec;

  RowMatrix q(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) q(i, j) = rng.normal();
  }

  auto draw_offset = [&] {
    Vector v = Vector::Zero(d);
    if (spec.offset_axis) {
      v(static_cast<Eigen::Index>(*spec.offset_axis)) = spec.offset_norm;
    } else {
      for (Eigen::Index j = 0; j < d; ++j) v(j) = rng.normal();
      v *= spec.offset_norm / v.norm();
    }
    truth.offset.assign(v.data(), v.data() + v.size());
    return v;
  };

  RowMatrix t(n, d);
  switch (spec.kind) {
    case SynthKind::LinearOffset: {
      const Vector v = draw_offset();
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) t(i, j) = q(i, j) + v(j) + spec.noise_sigma * rng.normal();
      }
      break;
    }
    case SynthKind::GlobalShiftOnly: {
      const Vector v = draw_offset();
      truth.permutation = rng.permutation(spec.n);
      for (Eigen::Index i = 0; i < n; ++i) {
        t.row(i) = q.row(static_cast<Eigen::Index>(truth.permutation[static_cast<std::size_t>(i)])) +
                   v.transpose();
      }
      break;
    }
    case SynthKind::NeighborPreservingNonlinear: {
      truth.radii.resize(spec.n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double r = rng.uniform(0.5, 2.0);
        truth.radii[static_cast<std::size_t>(i)] = r;
        t.row(i) = q.row(i) * (r / q.row(i).norm());
      }
      break;
    }
    case SynthKind::Unstructured: {
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) t(i, j) = rng.normal();
      }
      break;
    }
  }

  std::vector<std::string> qids, tids;
  qids.reserve(spec.n);
  tids.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    qids.push_back("q" + std::to_string(i));
    tids.push_back("t" + std::to_string(i));
  }
  auto pairs = validate_paired(EmbeddingMatrix(std::move(q), std::move(qids)),
                               EmbeddingMatrix(std::move(t), std::move(tids)), std::move(labels));
  return SynthResult{std::move(pairs), std::move(truth)};
}

}  // namespace embgeo
