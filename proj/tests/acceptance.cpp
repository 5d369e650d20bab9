// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>

#include "squeeze/annulus_map.hpp"
#include "squeeze/ball_geometry.hpp"
#include "squeeze/domain.hpp"
#include "squeeze/experiments.hpp"
#include "squeeze/random.hpp"
#include "squeeze/report.hpp"
#include "squeeze/squeezing.hpp"

using namespace squeeze;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

PointCn random_ball_point(Rng& rng, Eigen::Index n, double max_norm) {
  PointCn z(n);
  for (Eigen::Index k = 0; k < n; ++k) z[k] = Complex(rng.normal(), rng.normal());
  const double rad = max_norm * std::pow(rng.uniform(), 1.0 / (2.0 * n));
  return z * (rad / z.norm());
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome psi_suite() {
  Rng rng(101);
  double worst_trip = 0.0, worst_zero = 0.0, max_image = 0.0, worst_r = 0.0, worst_floor = 0.0;
  for (Eigen::Index n = 1; n <= 3; ++n) {
    for (int i = 0; i < 10000; ++i) {
      const double r = rng.uniform(0.0, 1.0 - 1e-9);
      const PointCn z = random_ball_point(rng, n, 1.0 - 1e-9);
      const PointCn w = psi_apply(r, z);
      max_image = std::max(max_image, w.norm());
      const double trip = (psi_invert(r, w) - z).norm();
      if (trip > worst_trip) {
        // Rounding w alone moves the inverse by eps |1 - z1 r|^2 / (1 - r^2).
        worst_trip = trip;
        worst_r = r;
        worst_floor = std::numeric_limits<double>::epsilon() * std::norm(1.0 - z[0] * r) / ((1.0 - r) * (1.0 + r));
      }
      PointCn e = PointCn::Zero(n);
      e[0] = r;
      worst_zero = std::max(worst_zero, psi_apply(r, e).norm());
    }
  }
  const bool ok = max_image < 1.0 && worst_trip <= 1e-12 && worst_zero <= 1e-14;
  return {ok, "max |image| " + num(max_image) + ", round trip " + num(worst_trip) + " at 1 - r = " + num(1.0 - worst_r) +
                  " (conditioning floor " + num(worst_floor) + "), Psi_r(r e1) " + num(worst_zero)};
}

Outcome norm_identity() {
  Rng rng(202);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double r = i % 10 == 0 ? 1.0 - 1e-6 : rng.uniform(0.0, 1.0 - 1e-6);
    const PointCn z = random_ball_point(rng, 1 + i % 3, 1.0);
    const NormIdentity id = norm_psi_identity(r, z);
    worst = std::max(worst, std::abs(id.lhs - id.rhs));
  }
  return {worst <= 1e-12, "max deviation " + num(worst)};
}

Outcome sphere_sweep() {
  // K = C here; the K = e^{2C} sweep is reported alongside for comparison.
  double worst = 1e300, worst_proved = 1e300;
  int failures = 0;
  for (double c : {0.5, 1.0, 2.0}) {
    for (double d : {1e-1, 1e-2, 1e-3}) {
      for (Confinement form : {Confinement::stated, Confinement::proved}) {
        const KobayashiConstant kc(c);
        const double k = confinement_constant(kc, form);
        for (double ef : {1.0, 0.5, 0.1}) {
          const double eps = ef / (18.0 * k);
          for (double rf : {0.0, 0.5, 0.9, 0.99, 1.0}) {
            const double r = rf * confinement_radius(kc, d, form);
            Lemma25Options opt;
            opt.confinement = form;
            const Lemma25Report rep = lemma25_bound(kc, eps, d, r, 10000, opt);
            if (form == Confinement::stated) {
              worst = std::min(worst, rep.margin);
              if (!rep.pass()) ++failures;
            } else {
              worst_proved = std::min(worst_proved, rep.margin);
            }
          }
        }
      }
    }
  }
  return {failures == 0 && worst >= 0.0,
          "min margin " + num(worst) + " (K = C), " + num(worst_proved) + " (K = e^{2C}, informational)"};
}

Outcome kobayashi_ball_oracle() {
  const double v = kobayashi_ball(point({0.0, 0.0}), point({0.5, 0.0}));
  const double exact = 0.5 * std::log(3.0);
  Rng rng(303);
  double worst_inv = 0.0;
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const PointCn x = random_ball_point(rng, 2, 0.95), y = random_ball_point(rng, 2, 0.95),
                  z = random_ball_point(rng, 2, 0.95);
    const BallAutomorphism t = BallAutomorphism::centering(random_ball_point(rng, 2, 0.9));
    const double dxy = kobayashi_ball(x, y);
    worst_inv = std::max(worst_inv, std::abs(kobayashi_ball(t.apply(x), t.apply(y)) - dxy));
    if (kobayashi_ball(x, z) > dxy + kobayashi_ball(y, z) + 1e-12) ++violations;
  }
  const bool ok = std::abs(v - exact) <= 1e-12 && worst_inv <= 1e-10 && violations == 0;
  return {ok, "d(0, e1/2) = " + num(v) + ", invariance " + num(worst_inv) + ", triangle violations " +
                  std::to_string(violations)};
}

double ball_c_fit = 0.0;

Outcome boundary_estimate() {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::lemma22;
  cfg.scales = 20;
  const ExperimentReport rep = run_lemma22(cfg);
  const auto& c = rep.info["c_fit"];
  ball_c_fit = c["ball"].get<double>();
  const double disc = c["disc"].get<double>();
  std::string detail = "C_fit disc " + num(disc) + ", ball " + num(ball_c_fit) + ", ellipsoid " +
                       num(c["ellipsoid"].get<double>()) + ", omega_prime " + num(c["omega_prime"].get<double>());
  const bool ok = rep.pass() && disc >= 0.34 && disc <= 0.40;
  if (!rep.pass()) {
    for (const auto& a : rep.verdicts) {
      if (!a.pass) detail += "; failed: " + a.name;
    }
  }
  return {ok, detail};
}

Outcome annulus_squeezing() {
  const double r = 0.1;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double t = r + (1.0 - r) * (i + 0.5) / 20.0;
    const SqueezeBound b = annulus_squeeze_lower(r, std::polar(t, 0.3 * i));
    worst = std::max(worst, std::abs(b.witness["inclusion"].get<double>() - (t - r) / (1.0 - r * t)));
  }
  const double ratio = annulus_squeeze_lower(r, 1.0 - 1e-4).deficit / 1e-4;
  const double target = (1.0 + r) / (1.0 - r);
  const bool ok = worst <= 1e-8 && std::abs(ratio - target) <= 0.02 * target;
  return {ok, "inclusion witness error " + num(worst) + ", ratio " + num(ratio) + " vs " + num(target)};
}

Outcome annulus_map_consistency() {
  const double m = AnnulusMap(annulus(0.3, 1.0)).modulus();
  const double ms = AnnulusMap(annulus(0.3 * 2.5, 2.5, Complex(1.0, -2.0))).modulus();
  const PlanarDomain op = build_omega_prime();
  const double m1 = AnnulusMap(op, 1024).modulus(), m2 = AnnulusMap(op, 2048).modulus();
  const bool ok = std::abs(m - 0.3) <= 1e-4 && std::abs(ms - m) <= 1e-4 && std::abs(m1 - m2) <= 1e-3;
  return {ok, "A_0.3 modulus " + num(m) + ", scaled " + num(ms) + ", omega_prime " + num(m1) + " -> " + num(m2)};
}

Outcome ball_pipeline() {
  const Domain ball = DefiningFunctionDomain::ball(2);
  const PipelineReport rep = theorem21_pipeline(ball, ball_pipeline_stages(ball, 10), KobayashiConstant(ball_c_fit));
  double max_eps = 0.0, min_f = 1.0, min_conf = 1e300;
  for (const auto& row : rep.rows) {
    max_eps = std::max(max_eps, row.eps);
    min_f = std::min(min_f, row.inscribed_f);
    min_conf = std::min(min_conf, row.confinement_margin);
  }
  const bool ok = rep.rows.size() == 10 && max_eps <= 1e-9 && min_f >= 1.0 - 1e-6 && min_conf >= 0.0;
  return {ok, "C = " + num(ball_c_fit) + ", max eps " + num(max_eps) + ", min inscribed " + num(min_f) +
                  ", min confinement margin " + num(min_conf)};
}

Outcome counterexample() {
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::counterexample;
  cfg.scales = 30;
  const ExperimentReport rep = run_counterexample(cfg);
  const Table* t = rep.table("counterexample");
  std::string detail;
  if (t != nullptr && !t->rows.empty()) {
    detail = "R_1 " + num(t->rows.front()[4].get<double>()) + ", R_30 " + num(t->rows.back()[4].get<double>());
  }
  for (const auto& a : rep.verdicts) {
    if (!a.pass) detail += "; failed: " + a.name;
  }
  return {rep.pass() && t != nullptr && t->rows.size() == 30, detail};
}

Outcome determinism() {
  int mismatches = 0;
  for (ExperimentKind k : {ExperimentKind::lemma22, ExperimentKind::lemma24_25, ExperimentKind::pipeline,
                           ExperimentKind::counterexample}) {
    ExperimentConfig cfg;
    cfg.experiment = k;
    cfg.seed = 17;
    if (k == ExperimentKind::counterexample) cfg.scales = 12;
    if (k == ExperimentKind::lemma22) cfg.scales = 8;
    if (k == ExperimentKind::lemma24_25) cfg.tolerances = {{"sphere_samples", 2000}};
    if (report_json_text(run_experiment(cfg)) != report_json_text(run_experiment(cfg))) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " of 4 experiments differ on rerun"};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"psi automorphism suite", psi_suite},
      {"psi norm identity", norm_identity},
      {"sphere-image bound sweep", sphere_sweep},
      {"kobayashi ball oracle", kobayashi_ball_oracle},
      {"boundary estimate fit", boundary_estimate},
      {"annulus squeezing", annulus_squeezing},
      {"annulus map self-consistency", annulus_map_consistency},
      {"ball normalisation pipeline", ball_pipeline},
      {"annulus counterexample ratios", counterexample},
      {"report determinism", determinism},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
