#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "phdg/mesh.hpp"

namespace phdg {

/// Matrix-level checks of the Dirac-structure identities on one or two
/// elements. Boundary ports are represented by their values at the edge
/// quadrature nodes of the element boundary; the conversion operator of
/// the continuous theory is realized implicitly by those quadrature
/// pairings.

struct PowerResult {
  double power = 0.0;  // should vanish for members of the structure
  double scale = 0.0;  // magnitude of the individual pairing terms
};

/// Power of one random sample of the element Stokes-Dirac structure:
/// efforts are random coefficient vectors, the boundary inputs random
/// samples, flows and outputs follow from the structure relations.
PowerResult element_power(const Mesh& mesh, int element, int r, std::mt19937_64& rng);

/// Apply the interconnection relation to per-face port samples; returns
/// (w_L, w*_L, w_R, w*_R) given (y*_L, y_L, y*_R, y_R).
struct InterconnectPorts {
  std::vector<double> w_l, w_l_star, w_r, w_r_star;
};
InterconnectPorts interconnect(const std::vector<double>& y_l_star,
                               const std::vector<double>& y_l,
                               const std::vector<double>& y_r_star,
                               const std::vector<double>& y_r, double theta);

/// Power of the interconnection tuple under plain quadrature pairing
/// with the given weights.
double interconnect_power(const InterconnectPorts& w,
                          const std::vector<double>& y_l_star,
                          const std::vector<double>& y_l,
                          const std::vector<double>& y_r_star,
                          const std::vector<double>& y_r,
                          const std::vector<double>& weights);

struct ComposeResult {
  double total_power = 0.0;      // element pairs + outer-port pairings
  double outer_pairing = 0.0;    // sum over outer faces of the port pairing
  double assembly_pairing = 0.0; // same quantity from the assembled system
  double scale = 0.0;
};

struct BoundaryData;  // assembly.hpp

/// Two-element composition on the n=1 mesh: interior ports are tied by
/// the interconnection structure, outer ports carry data-mode boundary
/// conditions (null data means homogeneous). The composed power must
/// vanish, and the outer pairing must agree with the assembled system's
/// boundary pairing for the same state.
ComposeResult compose_two_elements(double theta, int r, std::mt19937_64& rng,
                                   const BoundaryData* data = nullptr,
                                   double t = 0.0);

/// Max asymmetry of the extended bilinear form over `samples` random
/// port pairs, relative to the term scale.
double bilinear_symmetry_check(const Mesh& mesh, int element, int r, int samples,
                               std::mt19937_64& rng);

struct DimensionReport {
  int flow_dim = 0;        // dim F_p + dim F_q + 2 * boundary trace dofs
  int solution_dim = 0;    // numerical rank of the realized relation graph
  int trace_dim_p = 0;     // realized dim of tr_p E_p(dK)
  int trace_dim_q = 0;     // realized dim of tr_q E_q(dK)
  int boundary_pairing_rank = 0;  // rank of the q-p trace pairing matrix
};

/// Rank-nullity bookkeeping of the one-element relation (the computable
/// shadow of the dimension criterion and of the surjectivity of the
/// boundary conversion operator).
DimensionReport dimension_check(const Mesh& mesh, int element, int r);

}  // namespace phdg
