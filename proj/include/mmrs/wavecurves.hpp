#pragma once

#include <atomic>
#include <memory>
#include <mutex>

#include <optional>
#include <string>
#include <vector>

#include "mmrs/plasticity.hpp"

namespace mmrs {

// State on a wave curve. f is the accumulated velocity jump from the initial
// state (>= 0 on the shock side, <= 0 on the rarefaction side).
struct Waypoint {
  double rho = 0, p = 0, S = 0, q = 0, f = 0;
};

// One piece of a branch with constant beta. S follows the jump relation from
// base; when beta == 0 S stays at base.S.
struct Segment {
  Waypoint base;
  double beta = 0;
  Phase phase = Phase::Elastic;
  std::optional<Waypoint> end;
  // Compression only.
  double rho_max = 0;
  // Tension only: accumulated embedded error of the waypoint integration.
  double err = 0;
};

struct BranchEval {
  double F = 0, dF = 0;
  double rho = 0, S = 0, p = 0;
  double err = 0;
  int segment = 0;
  Phase phase = Phase::Elastic;
  bool shock = false;
};

struct CurveOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  // Tolerance used for cached tension waypoints and q_min.
  double waypoint_rtol = 1e-13;
};

class WaveCurve {
 public:
  WaveCurve(const SideState& s, const Material& m, CurveOptions o = {});

  const SideState& state() const { return s_; }
  const Material& material() const { return m_; }
  double beta_e() const { return beta_e_; }
  double beta_p() const { return beta_p_; }
  double q_k() const { return s_.q(); }
  const std::vector<Segment>& compression() const { return comp_; }
  const std::vector<Segment>& tension() const { return tens_; }

  // Phase letters of segments 0..seg, e.g. "E", "EP", "EPF".
  std::string kind_label(std::size_t seg) const;
  std::optional<std::size_t> segment_for_kind(const std::string& label) const;

  // Hugoniot residual of compression segment seg. The composite form adds
  // the residuals of the frozen waypoints below it.
  double phi(std::size_t seg, double q, double rho) const;
  double phi_active(std::size_t seg, double q, double rho) const;
  double phi_drho(std::size_t seg, double q, double rho) const;
  double phi_drho2(std::size_t seg, double q, double rho) const;
  double phi_dq(std::size_t seg, double rho) const;
  double chi(std::size_t seg, double q, double rho) const;
  // True where the sufficient condition for d2Phi/drho2 <= 0 holds.
  bool concavity_condition(std::size_t seg, double rho) const;

  struct DensityRoot {
    double rho = 0;
    double residual = 0;
    int iterations = 0;
  };
  DensityRoot hugoniot_density(std::size_t seg, double q, double rho_guess = 0) const;

  BranchEval shock_branch(double q) const;
  BranchEval rarefaction_branch(double q, double rtol = 0) const;
  BranchEval evaluate(double q, double rtol = 0) const;

  // Cut-off stress and f there. Both -inf when unbounded.
  // Computed on first use (integration towards zero density).
  double q_min() const;
  double f_min() const;

  double sound_speed2(double rho, double p) const;
  double c_eff(double rho, double p, double beta) const;
  double deviator(const Segment& g, double rho) const;

  // Index of the segment containing q on the relevant branch.
  std::size_t compression_segment(double q) const;
  std::size_t tension_segment(double q) const;

 private:
  void build_compression();
  void build_tension();
  void compute_q_min() const;
  double rho_max_for(const Waypoint& b) const;

  SideState s_;
  Material m_;
  CurveOptions o_;
  double beta_e_ = 0, beta_p_ = 0;
  std::vector<Segment> comp_, tens_;
  struct CutOff {
    std::once_flag once;
    std::atomic<bool> done{false};
    double q = 0, f = 0;
  };
  std::shared_ptr<CutOff> cut_ = std::make_shared<CutOff>();
};

}  // namespace mmrs
