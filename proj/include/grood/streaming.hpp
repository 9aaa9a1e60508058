#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grood/core.hpp"

namespace grood {

enum class TrackMethod { Geodesic, Brand, Kaufman, Refactor };

const char* to_string(TrackMethod method) noexcept;
/// Accepts the lower-case names geodesic, brand, kaufman, refactor.
std::optional<TrackMethod> parse_track_method(std::string_view name);

struct TrackerConfig {
  std::size_t reorth_every = 0;  // 0 = never
  double deflation_tol = 1e-12;
  TrackMethod method = TrackMethod::Geodesic;
  /// Baseline methods measure the step distance with principal angles only
  /// when set; otherwise their reported distance is 0. The geodesic method
  /// always reports its closed-form distance.
  bool record_distances = true;
};

struct StepReport {
  std::size_t step_index;
  UpdateKind kind;
  double distance;                      // radians
  double ortho_drift;                   // ||U^T U - I||_F after the step
  std::optional<double> recon_residual; // ||UW - X||_F / ||X||_F, when X is kept
  std::int64_t wall_time_ns;            // update call only
};

struct TrackResult {
  Factorization factorization;
  std::vector<StepReport> reports;
};

/// Error raised inside track(), tagged with the 0-based step that failed.
class TrackError : public Error {
public:
  TrackError(std::size_t step, const Error& cause)
      : Error(cause.kind(), "step " + std::to_string(step) + ": " + cause.what()),
        step_(step) {}

  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

/// The accumulated X is kept for the residual column while n * p <= this.
inline constexpr std::size_t kReconMaxEntries = 1'000'000;

/// Applies `updates` in order. Every `reorth_every` steps U is
/// re-orthonormalized with the correction absorbed into W.
TrackResult track(Factorization f0, std::span<const RankOneUpdate> updates,
                  const TrackerConfig& cfg);

/// U = QR (Householder), returns (Q, R W) so that the product is unchanged.
/// Requires ||U^T U - I||_F <= 1e-3; throws RankDeficient for a collapsed U.
Factorization absorb_reorthogonalization(const Factorization& f);

}  // namespace grood
