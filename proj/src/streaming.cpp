#include "grood/streaming.hpp"

#include <chrono>
#include <cmath>

#include "grood/baselines.hpp"
#include "grood/grassmann.hpp"

namespace grood {

const char* to_string(TrackMethod method) noexcept {
  switch (method) {
    case TrackMethod::Geodesic: return "geodesic";
    case TrackMethod::Brand: return "brand";
    case TrackMethod::Kaufman: return "kaufman";
    case TrackMethod::Refactor: return "refactor";
  }
  return "unknown";
}

std::optional<TrackMethod> parse_track_method(std::string_view name) {
  for (auto m : {TrackMethod::Geodesic, TrackMethod::Brand, TrackMethod::Kaufman,
                 TrackMethod::Refactor}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

Factorization absorb_reorthogonalization(const Factorization& f) {
  const double drift = f.u().orthonormality_error();
  if (!(drift <= 1e-3)) {
    throw_error(ErrorKind::InvalidArgument,
                "absorb_reorthogonalization: U too far from orthonormal (" +
                    std::to_string(drift) + ")");
  }
  auto qr = linalg::householder_qr(f.u().mat());
  const double tol = static_cast<double>(f.p()) * linalg::kEps * linalg::max_abs(f.u().mat());
  for (std::size_t k = 0; k < f.p(); ++k) {
    if (!(qr.r(k, k) > tol)) {
      throw_error(ErrorKind::RankDeficient, "absorb_reorthogonalization: U is rank deficient");
    }
  }
  const MatrixStructure kind = f.w_kind() == MatrixStructure::UpperTriangular
                                   ? MatrixStructure::UpperTriangular
                                   : MatrixStructure::General;
  Matrix w = linalg::matmul(qr.r, f.w());
  if (kind == MatrixStructure::UpperTriangular) {
    for (std::size_t j = 0; j < w.cols(); ++j)
      for (std::size_t i = j + 1; i < w.rows(); ++i) w(i, j) = 0.0;
  }
  return Factorization::adopt(OrthonormalFactor::adopt(std::move(qr.q)), std::move(w), kind);
}

namespace {

struct StepResult {
  UpdateKind kind;
  Factorization f;
  double distance;
};

StepResult baseline_step(const Factorization& f, const RankOneUpdate& up,
                         const TrackerConfig& cfg, const UpdateOptions& opts) {
  if (detail::is_zero(up.b)) return {UpdateKind::NoOp, f, 0.0};
  const auto res = linalg::orthogonal_residual(f.u().mat(), up.a, opts.reorth);
  if (!(res.norm > detail::deflation_threshold(opts.deflation_tol, res.a_norm))) {
    UpdateOutcome out = grood_update(f, up, opts);
    return {out.kind, std::move(out.factorization), 0.0};
  }

  switch (cfg.method) {
    case TrackMethod::Brand: {
      BrandResult r = brand_update_factorization(f, up, opts);
      return {UpdateKind::Generic,
              Factorization::adopt(std::move(r.u), std::move(r.w),
                                   MatrixStructure::DiagonalTimesOrthogonal),
              0.0};
    }
    case TrackMethod::Kaufman: {
      KaufmanResult r = kaufman_update(f, up, opts);
      return {UpdateKind::Generic,
              Factorization::adopt(std::move(r.u), std::move(r.r),
                                   MatrixStructure::UpperTriangular),
              0.0};
    }
    case TrackMethod::Refactor:
    case TrackMethod::Geodesic:
      break;
  }
  Matrix x = f.product();
  linalg::ger(x, 1.0, up.a, up.b);
  return {UpdateKind::Generic, full_refactor(x), 0.0};
}

}  // namespace

TrackResult track(Factorization f0, std::span<const RankOneUpdate> updates,
                  const TrackerConfig& cfg) {
  if (!(cfg.deflation_tol > 0.0)) {
    throw_error(ErrorKind::InvalidArgument, "track: deflation_tol must be positive");
  }
  UpdateOptions opts;
  opts.deflation_tol = cfg.deflation_tol;

  const bool keep_x = f0.n() * f0.p() <= kReconMaxEntries;
  Matrix x;
  if (keep_x) x = f0.product();

  TrackResult out{std::move(f0), {}};
  out.reports.reserve(updates.size());
  Factorization& f = out.factorization;

  for (std::size_t step = 0; step < updates.size(); ++step) {
    const RankOneUpdate& up = updates[step];
    try {
      StepReport report{step, UpdateKind::NoOp, 0.0, 0.0, std::nullopt, 0};
      if (cfg.method == TrackMethod::Geodesic) {
        const auto t0 = std::chrono::steady_clock::now();
        UpdateOutcome o = grood_update(std::move(f), up, opts);
        const auto t1 = std::chrono::steady_clock::now();
        report.wall_time_ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
        report.kind = o.kind;
        report.distance = o.distance;
        f = std::move(o.factorization);
      } else {
        const auto t0 = std::chrono::steady_clock::now();
        StepResult r = baseline_step(f, up, cfg, opts);
        const auto t1 = std::chrono::steady_clock::now();
        report.wall_time_ns =
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
        report.kind = r.kind;
        if (r.kind == UpdateKind::Generic && cfg.record_distances) {
          report.distance = subspace_distance(f.u(), r.f.u());
        }
        f = std::move(r.f);
      }

      if (cfg.reorth_every > 0 && (step + 1) % cfg.reorth_every == 0) {
        f = absorb_reorthogonalization(f);
      }
      report.ortho_drift = f.u().orthonormality_error();
      if (keep_x) {
        linalg::ger(x, 1.0, up.a, up.b);
        const double xn = linalg::frobenius_norm(x);
        const double diff = linalg::frobenius_distance(f.product(), x);
        report.recon_residual = xn > 0.0 ? diff / xn : diff;
      }
      out.reports.push_back(report);
    } catch (const TrackError&) {
      throw;
    } catch (const Error& e) {
      throw TrackError(step, e);
    }
  }
  return out;
}

}  // namespace grood
