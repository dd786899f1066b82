#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "locomanip/admittance.hpp"
#include "locomanip/contact.hpp"
#include "locomanip/kdtree.hpp"

namespace locomanip {

// Symmetric output limits for one axis and the rollout horizon used to test
// admissibility.
struct AxisBounds {
  double x_max = 0.05;
  double v_max = 0.1;
  double w_max = 30.0;
  double accel_max = 5.0;
  int horizon_steps = 300;
  double dt = kDefaultDt;

  // Throws InvalidConfig.
  void validate() const;
};

// One point of the admissible set: state (x, v, w) and references (x_ref, w_ref).
struct MoasSample {
  double x = 0.0;
  double v = 0.0;
  double x_ref = 0.0;
  double w = 0.0;
  double w_ref = 0.0;

  std::array<double, 5> as_array() const { return {x, v, x_ref, w, w_ref}; }
  bool operator==(const MoasSample&) const = default;
};

// Rolls out governed_control + integrate_axis for bounds.horizon_steps steps
// from the sample with zeroed integrators. The wrench follows the contact
// spring; whatever part of the sample's wrench the spring does not explain is
// held constant as a persistent disturbance (k_env = 0 gives a constant
// wrench). True iff |x| <= x_max, |v| <= v_max and |w| <= w_max at every step.
bool is_admissible(const MoasSample& sample, const AdmittanceGains& gains,
                   const AxisBounds& bounds, const ContactModel& env);

// The full horizon_steps + 1 states of the same rollout, without early exit.
std::vector<AxisState> rollout(const MoasSample& sample, const AdmittanceGains& gains,
                               const AxisBounds& bounds, const ContactModel& env);

// Sample counts per dimension, ordered (x, v, x_ref, w, w_ref).
struct GridSpec {
  std::array<int, 5> counts = {11, 11, 11, 11, 11};
  std::uint64_t budget = 20'000'000;
  // Half-widths of the sampled box. Unset means the box the bounds span, so
  // two builds with different bounds can still share grid points.
  std::optional<std::array<double, 5>> extent;

  std::uint64_t total() const;
  std::array<double, 5> half_widths(const AxisBounds& bounds) const;
};

// Admissible samples indexed for nearest-neighbour queries. Distances are
// Euclidean after dividing each dimension by its bound.
class MoasIndex {
 public:
  MoasIndex() = default;
  MoasIndex(std::vector<MoasSample> samples, const AxisBounds& bounds);

  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const std::vector<MoasSample>& samples() const { return samples_; }
  const std::array<double, 5>& scales() const { return scales_; }

  std::array<double, 5> normalize(const MoasSample& s) const;
  double distance(const MoasSample& a, const MoasSample& b) const;

  struct Hit {
    std::size_t index = 0;
    double distance = 0.0;
  };
  // Throw EmptyIndex when empty.
  Hit nearest(const MoasSample& query) const;
  std::vector<Hit> k_nearest(const MoasSample& query, std::size_t k) const;
  Hit linear_scan(const MoasSample& query) const;

 private:
  std::vector<MoasSample> samples_;
  std::array<double, 5> scales_{1, 1, 1, 1, 1};
  KdTree<5> tree_;
};

struct MoasBuildSummary {
  std::uint64_t total = 0;
  std::uint64_t retained = 0;
  double retained_fraction = 0.0;
};

// Value of grid point `i` out of `count` across [-bound, bound].
double grid_value(int i, int count, double bound);

// Evaluates every grid point of the box spanned by the bounds and keeps the
// admissible ones. The retained set does not depend on `workers`. Throws
// EmptySet when nothing is admissible and InvalidConfig when the grid exceeds
// its budget.
MoasIndex build_moas(const AdmittanceGains& gains, const AxisBounds& bounds,
                     const ContactModel& env, const GridSpec& grid, int workers = 1,
                     MoasBuildSummary* summary = nullptr);

MoasSample nearest(const MoasIndex& index, const MoasSample& query);

// Half the diagonal of one grid cell in normalized units.
double default_tolerance(const GridSpec& grid);

struct GovernResult {
  double x_ref = 0.0;
  double w_ref = 0.0;
  bool modified = false;
};

struct GovernorOptions {
  // Membership by nearest-sample distance <= tol, unless `exact`.
  double tol = 0.0;
  // Membership by a direct rollout with the gains/bounds/env below.
  bool exact = false;
  AdmittanceGains gains;
  AxisBounds bounds;
  ContactModel env;
  // First batch of nearest samples searched for replacement references; the
  // batch grows until a qualifying pair is found or the set is exhausted.
  std::size_t max_candidates = 256;
};

bool is_member(const MoasIndex& index, const MoasSample& query, const GovernorOptions& opts);

// Leaves the references alone when the query is a member; otherwise keeps
// (x, v, w) and takes (x_ref, w_ref) from the nearest stored sample whose
// references make the query a member, falling back to the plain nearest
// sample when no stored reference pair qualifies.
GovernResult govern(const MoasIndex& index, const MoasSample& query, const GovernorOptions& opts);
GovernResult govern(const MoasIndex& index, const MoasSample& query, double tol);

// Fingerprint of everything a stored set depends on.
std::uint64_t moas_fingerprint(const AdmittanceGains& gains, const AxisBounds& bounds,
                               const ContactModel& env, const GridSpec& grid);

struct MoasArtifact {
  AdmittanceGains gains;
  AxisBounds bounds;
  ContactModel env;
  GridSpec grid;
  std::uint64_t fingerprint = 0;
  std::vector<MoasSample> samples;
};

void save_moas(const std::filesystem::path& path, const MoasArtifact& artifact);
// Throws IoError, ParseError, or FingerprintMismatch when the stored
// fingerprint disagrees with its own parameters or with `expected`.
MoasArtifact load_moas(const std::filesystem::path& path,
                       std::optional<std::uint64_t> expected = std::nullopt);

}  // namespace locomanip
