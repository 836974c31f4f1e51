#include <algorithm>
#include <cmath>

#include "dilab/error.hpp"
#include "dilab/parallel.hpp"
#include "study_support.hpp"

namespace dilab::studies {

namespace {

struct SurveyGrid {
  GridPtr grid;
  SpectralOperatorPtr free_op;  // radial grids only
};

SurveyGrid survey_grid(int n, double L, int N) {
  SurveyGrid s;
  s.grid = build_grid(n == 2 ? GridMode::cartesian : GridMode::radial, n, L, N);
  if (s.grid->radial()) s.free_op = assemble_hamiltonian(zero_potential(s.grid));
  return s;
}

struct SampleResult {
  double ratio = 0.0;
  double ratio_refined = 0.0;
  double imag = 0.0;
  double ibp = 0.0;
};

SampleResult measure(const ComplexField& h, const ComplexField& h_fine, const SurveyGrid& base, const SurveyGrid& fine,
                     double floor) {
  SampleResult out;
  const cplx a = bilinear_form_a(h, h);
  out.ratio = std::abs(a) / homogeneous_half_norm_sq(h, base.free_op.get());
  out.ratio_refined = bilinear_ratio(h_fine, fine.free_op.get());
  out.imag = std::abs(a.imag());
  const double ibp = bilinear_ibp_value(h);
  out.ibp = std::abs(a.real() - ibp) / (std::abs(ibp) + floor);
  return out;
}

}  // namespace

void bilinear_survey(const ExperimentConfig& cfg, const StudyContext&, ExperimentReport& rep) {
  const std::vector<double> dims = cfg.numbers("survey.dims");
  const long samples = cfg.integer("survey.samples");
  const long refine = cfg.integer("survey.refine");
  const double L = cfg.number("grid.L");
  const double floor = tol(cfg, "floor");
  if (dims.empty()) throw Error(ErrorCode::schema, "survey.dims is empty");
  if (samples < 1 || refine < 2) throw Error(ErrorCode::schema, "survey needs samples >= 1 and refine >= 2");
  const DataParams dp = data_params(cfg);
  double metric = 0.0;

  for (double nd : dims) {
    const int n = static_cast<int>(std::lround(nd));
    if (n < 2 || n != nd) throw Error(ErrorCode::invalid_dimension, "the bilinear survey needs integer n >= 2");
    const int N = static_cast<int>(n == 2 ? cfg.integer("survey.cartesian_N") : cfg.integer("survey.radial_N"));
    const SurveyGrid base = survey_grid(n, L, N);
    const SurveyGrid fine = survey_grid(n, L, N * static_cast<int>(refine));
    std::vector<SampleResult> res(static_cast<std::size_t>(samples));
    parallel_for(res.size(), [&](std::size_t s) {
      UniformSource source(dp.seed * 1000003ULL + 7919ULL * static_cast<std::uint64_t>(n) + s);
      const RandomField field(n, base.grid->radial(), dp, source);
      res[s] = measure(field.sample(base.grid), field.sample(fine.grid), base, fine, floor);
    });
    std::vector<double> idx(res.size()), ratios(res.size());
    double max_b = 0.0, max_f = 0.0, max_im = 0.0, max_ibp = 0.0;
    for (std::size_t s = 0; s < res.size(); ++s) {
      idx[s] = static_cast<double>(s);
      ratios[s] = res[s].ratio;
      max_b = std::max(max_b, res[s].ratio);
      max_f = std::max(max_f, res[s].ratio_refined);
      max_im = std::max(max_im, res[s].imag);
      max_ibp = std::max(max_ibp, res[s].ibp);
    }
    const std::string tag = "n" + std::to_string(n);
    const double change = std::abs(max_f / max_b - 1.0);
    rep.add(make_series("ratio_" + tag, "sample", idx, ratios));
    rep.scalar("max_ratio_" + tag, max_b);
    rep.scalar("max_ratio_refined_" + tag, max_f);
    rep.scalar("refinement_change_" + tag, change);
    rep.scalar("max_imag_" + tag, max_im);
    rep.scalar("max_ibp_error_" + tag, max_ibp);
    rep.holds("max_ratio_finite_" + tag, std::isfinite(max_b) && std::isfinite(max_f) && max_b > 0.0,
              std::to_string(samples) + " seeded fields", max_b);
    rep.at_most("refinement_" + tag, change, tol(cfg, "refinement"), "max ratio under one grid refinement");
    rep.at_most("imaginary_part_" + tag, max_im, tol(cfg, "imag"), "|Im a(h, h)| for real h");
    rep.at_most("integration_by_parts_" + tag, max_ibp, tol(cfg, "ibp"), "a(h, h) against -((n-1)/2) int |h|^2/|x|");
    if (metric == 0.0) metric = max_b;
  }
  rep.scalar("convergence_metric", metric);
}

}  // namespace dilab::studies
