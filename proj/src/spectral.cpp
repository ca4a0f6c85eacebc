#include "goe_transit/spectral.hpp"

namespace goe_transit {

SelfEnergySet self_energy_set(const EigenSystem<double>& eig_a, const EigenSystem<double>& eig_b,
                              const GoeDraw& dr, const ModelParams& params) {
  if (eig_a.size() != dr.v2_vec.size() || eig_a.size() != dr.v3_vec.size() ||
      eig_b.size() != dr.v4_vec.size())
    throw ParameterError("self_energy_set: draw and eigensystem dimensions disagree");
  const Vector<double> p2 = project(eig_a, dr.v2_vec);
  const Vector<double> p3 = project(eig_a, dr.v3_vec);
  const Vector<double> p4 = project(eig_b, dr.v4_vec);

  SelfEnergySet w;
  w.E = params.E;
  w.w22 = resolvent_bilinear(eig_a.values, p2, p2, params.Gamma_a, params.E);
  w.w33 = resolvent_bilinear(eig_a.values, p3, p3, params.Gamma_a, params.E);
  w.w23 = resolvent_bilinear(eig_a.values, p2, p3, params.Gamma_a, params.E);
  w.w44 = resolvent_bilinear(eig_b.values, p4, p4, params.Gamma_b, params.E);
  return w;
}

SelfEnergySet self_energy_set(const GoeDraw& dr, const ModelParams& params) {
  if (dr.H_a.rows() != params.N_a || dr.H_b.rows() != params.N_b)
    throw ParameterError("self_energy_set: draw dimensions do not match params");
  return self_energy_set(eigh(dr.H_a), eigh(dr.H_b), dr, params);
}

}  // namespace goe_transit
