#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "squeeze/annulus_map.hpp"
#include "squeeze/ball_geometry.hpp"
#include "squeeze/domain.hpp"

namespace squeeze {

/// Sampled evidence that an embedding is injective and lands in the open ball.
struct InjectivityCertificate {
  std::size_t samples = 0;
  double min_separation = 0.0;  ///< min |f(a) - f(b)| over sampled pairs
  double max_image_norm = 0.0;  ///< max |f(a)| over interior samples
  bool ok() const { return min_separation > 0.0 && max_image_norm < 1.0; }
};

/// Holomorphic map of a domain into the unit ball of some C^m. `forward` must
/// also accept boundary points (it is evaluated on the boundary image).
struct EmbeddingMap {
  std::string name;
  std::function<PointCn(const PointCn&)> forward;
  nlohmann::json params;
  std::optional<InjectivityCertificate> certificate;
};

/// Samples `samples` interior points and records separation and image norms.
InjectivityCertificate certify_embedding(const Domain& dom, const EmbeddingMap& f, std::size_t samples = 256,
                                         std::uint64_t seed = 7);

/// Builds an EmbeddingMap and attaches its certificate.
EmbeddingMap make_embedding(const Domain& dom, std::string name, std::function<PointCn(const PointCn&)> forward,
                            nlohmann::json params = nlohmann::json::object(), std::size_t cert_samples = 256);

/// Certified lower bound for S_Omega(z).
struct SqueezeBound {
  PointCn at;
  double lower = 0.0;
  double deficit = 1.0;           ///< 1 - lower, computed without cancellation when possible
  double resolution_margin = 0.0;
  std::string certificate;        ///< "sampled", "closed-form" or "symbolic"
  nlohmann::json witness;
};

struct BoundaryImageOptions {
  std::size_t samples = 4096;  ///< per boundary curve (planar) or sphere directions
  std::uint64_t seed = 11;
  bool refine = true;
};

/// Normalises f so that f(z) = 0 (unitary alignment + axis Moebius map), then
/// returns the distance from 0 to the normalised boundary image: the sampled
/// minimum, refined locally (Brent on the curve parameter, pattern search on
/// sphere directions), minus the gap between the two.
SqueezeBound squeeze_lower_from_embedding(const Domain& dom, const PointCn& z, const EmbeddingMap& f,
                                          const BoundaryImageOptions& options = {});

// ---------------------------------------------------------------------------
// Standard annulus A_r = {r < |w| < 1}
// ---------------------------------------------------------------------------

/// Members of the family: inclusion A_r -> D, or the inversion w -> r/w
/// followed by inclusion; each then recentred at the image of the point.
/// Recentring with any further disc automorphism changes nothing after
/// normalisation, so no Moebius grid is searched.
struct AnnulusFamilyValue {
  double lower = 0.0;
  double deficit = 1.0;
};

/// Inclusion witness: (|w| - r)/(1 - r|w|), with s = 1 - |w| given directly.
AnnulusFamilyValue annulus_inclusion(double r, double s);
/// Inversion witness: r(1 - |w|)/(|w| - r^2).
AnnulusFamilyValue annulus_inversion(double r, double s);

/// Best member of the family at w. Throws DomainError unless r < |w| < 1.
SqueezeBound annulus_squeeze_lower(double r, Complex w);
/// Same, with 1 - |w| supplied exactly (for points very close to |w| = 1).
SqueezeBound annulus_squeeze_lower_deficit(double r, double one_minus_abs_w);

/// Canonical map of a ring domain (see AnnulusMap).
std::shared_ptr<const AnnulusMap> canonical_annulus_map(const PlanarDomain& dom, std::size_t nodes_per_curve = 1024);

/// Lower bound at z for a planar domain: 1 (symbolic, Riemann map) when
/// simply connected; the annulus family transported through the canonical
/// map when doubly connected. `map` may be passed to reuse a solve.
SqueezeBound squeeze_lower_planar(const PlanarDomain& dom, Complex z,
                                  std::shared_ptr<const AnnulusMap> map = nullptr);

// ---------------------------------------------------------------------------
// Normalisation pipeline Phi_i -> Psi_i -> F_i
// ---------------------------------------------------------------------------

struct PipelineStage {
  EmbeddingMap phi;  ///< Phi_i with Phi_i(p_i) = 0
  PointCn p;         ///< p_i
};

struct PipelineRow {
  int index = 0;
  double d = 0.0;                 ///< d(p_i)
  double inscribed_phi = 0.0;     ///< S of Phi_i at p_i (measured)
  double eps = 0.0;               ///< (1 - inscribed_phi)/d, measured
  double r = 0.0;                 ///< |Phi_i(0)|
  double confinement_radius = 0.0;   ///< 1 - d/e^{2C}
  double confinement_margin = 0.0;
  double stated_radius = 0.0;     ///< 1 - d/C
  double stated_margin = 0.0;
  double inscribed_f = 0.0;       ///< S of F_i at 0
  double inscribed_f_direct = 0.0;   ///< the same through squeeze_lower_from_embedding
  double target_stated = 0.0;     ///< 1 - 6 C eps
  double margin_stated = 0.0;
  double target_proved = 0.0;     ///< 1 - 6 e^{2C} eps
  double margin_proved = 0.0;
};

struct PipelineReport {
  std::string domain;
  double c = 0.0;
  std::vector<PipelineRow> rows;
  bool confinement_ok = false;   ///< all confinement margins >= 0
  bool lemma25_stated_ok = false;
  bool lemma25_proved_ok = false;
  bool trend_ok = false;         ///< inscribed radii of F_i nondecreasing toward 1
  std::vector<std::string> warnings;
};

/// Runs the pipeline: measures eps_i from the boundary image of Phi_i,
/// checks |Phi_i(0)| <= 1 - d(p_i)/e^{2C}, forms F_i = Psi o U o Phi_i and
/// measures its inscribed ball. Throws ConfigError when Phi_i(p_i) != 0 or a
/// certificate is missing or failing.
PipelineReport theorem21_pipeline(const Domain& dom, const std::vector<PipelineStage>& stages,
                                  const KobayashiConstant& c, const BoundaryImageOptions& options = {});

/// Phi_i = centering automorphism at p_i = (1 - 2^-i) e1 on the unit ball of C^n.
std::vector<PipelineStage> ball_pipeline_stages(const Domain& ball, int count);
/// Phi_i = Psi_{r_i} o (lambda_i L) on the ellipsoid, L(z) = (z_k / a_k),
/// delta = 2^-i, lambda_i = 1 - delta^3, r_i = lambda_i (1 - delta), so that
/// p_i = (a_1 (1 - delta), 0, ...). Starts at i = first.
std::vector<PipelineStage> ellipsoid_pipeline_stages(const Domain& ellipsoid, int first, int count);

}  // namespace squeeze
