#include "goe_transit/goe.hpp"

#include <string>

namespace goe_transit {

namespace {

void require_positive(double x, const char* name) {
  if (!(x > 0) || !std::isfinite(x))
    throw ParameterError(std::string(name) + " must be a finite value > 0");
}

void require_nonnegative(double x, const char* name) {
  if (!(x >= 0) || !std::isfinite(x))
    throw ParameterError(std::string(name) + " must be a finite value >= 0");
}

}  // namespace

void validate(const ModelParams& p) {
  if (p.N_a < 1) throw ParameterError("N_a must be >= 1");
  if (p.N_b < 1) throw ParameterError("N_b must be >= 1");
  require_positive(p.v_ga, "v_ga");
  require_positive(p.v_gb, "v_gb");
  require_positive(p.v2, "v2");
  require_positive(p.v3, "v3");
  require_positive(p.v4, "v4");
  require_nonnegative(p.Gamma_a, "Gamma_a");
  require_nonnegative(p.Gamma_b, "Gamma_b");
  if (!std::isfinite(p.E)) throw ParameterError("E must be finite");
  if (!std::isfinite(p.t1) || !(std::abs(p.E) < 2 * std::abs(p.t1)))
    throw ParameterError("t1 must satisfy |E| < 2|t1| for a propagating channel");
  if (!std::isfinite(p.t2) || !(std::abs(p.E) < 2 * std::abs(p.t2)))
    throw ParameterError("t2 must satisfy |E| < 2|t2| for a propagating channel");
}

GoeDraw draw(const ModelParams& params, std::uint64_t sample_index, std::uint64_t master_seed) {
  validate(params);
  GoeDraw d;
  d.sample_index = sample_index;
  {
    auto s = make_stream(master_seed, sample_index, StreamComponent::reservoir_a);
    d.H_a = sample_goe(params.N_a, params.v_ga, s);
  }
  {
    auto s = make_stream(master_seed, sample_index, StreamComponent::coupling_v2);
    d.v2_vec = sample_coupling(params.N_a, params.v2, s);
  }
  {
    auto s = make_stream(master_seed, sample_index, StreamComponent::coupling_v3);
    d.v3_vec = sample_coupling(params.N_a, params.v3, s);
  }
  {
    auto s = make_stream(master_seed, sample_index, StreamComponent::reservoir_b);
    d.H_b = sample_goe(params.N_b, params.v_gb, s);
  }
  {
    auto s = make_stream(master_seed, sample_index, StreamComponent::coupling_v4);
    d.v4_vec = sample_coupling(params.N_b, params.v4, s);
  }
  return d;
}

}  // namespace goe_transit
