#pragma once

#include <array>
#include <map>
#include <vector>

#include "phdg/mesh.hpp"
#include "phdg/spaces.hpp"

namespace phdg {

/// Constitutive coefficients of the port-Hamiltonian wave system:
/// C_p is the mass density, C_q the inverse modulus of rigidity. Both
/// must be strictly positive on the domain.
struct Constitutive {
  ScalarField cp, cq;

  static Constitutive constants(double cp_val, double cq_val);
};

/// Prescribed boundary values for the two co-energy fields.
struct BoundaryData {
  ScalarField g_v;      // velocity on the boundary
  VectorField g_sigma;  // stress components on the boundary

  static BoundaryData homogeneous();
};

enum class BcMode { data, trace };

struct StateVector {
  std::vector<double> v;  // E_p coefficients (velocity)
  std::vector<double> s;  // E_q coefficients (stress)
};

/// Block-sparse operator with per-element row blocks. Identical dense
/// blocks are pooled, which collapses the storage of structured meshes
/// to a handful of unique matrices.
class BlockOperator {
 public:
  BlockOperator(int rows_per_el, int cols_per_el, int n_elements);

  int rows_per_element() const { return rows_per_el_; }
  int cols_per_element() const { return cols_per_el_; }
  int n_elements() const { return n_el_; }
  std::size_t pool_size() const { return pool_.size(); }

  /// Accumulate a dense (rows_per_el x cols_per_el, row-major) block.
  void add_block(int row_el, int col_el, const std::vector<double>& block);

  /// y = A x (overwrites y). Parallel over row elements.
  void apply(const double* x, double* y) const;

  void add_scaled(const BlockOperator& other, double factor);

  /// max_{ij} |(A + B^T)_{ij}| and max_ij |A_ij| over stored blocks;
  /// used by the energy-conservation checks.
  static std::pair<double, double> skew_residual(const BlockOperator& a,
                                                 const BlockOperator& b);

  std::vector<std::vector<double>> to_dense() const;  // test-scale only

  const std::vector<std::pair<int, int>>& row(int el) const { return rows_[el]; }
  const std::vector<double>& pool_block(int id) const { return pool_[id]; }

 private:
  int intern(const std::vector<double>& block);

  int rows_per_el_, cols_per_el_, n_el_;
  std::vector<std::vector<std::pair<int, int>>> rows_;  // (col_el, pool id)
  std::vector<std::vector<double>> pool_;
  std::map<std::vector<double>, int> index_;
};

/// Block-diagonal mass operator (discrete Hodge star realization).
struct BlockDiagMass {
  int block = 0;
  bool diagonal = false;            // true when every block is c * I
  std::vector<double> chol;         // per element: block x block lower factor,
                                    // or just the diagonal when `diagonal`
  std::vector<double> raw_diag;     // diagonal entries when `diagonal`

  void solve_block(int el, const double* in, double* out) const;
  /// x^T M x restricted to one element block.
  double energy_block(int el, const double* x) const;
};

BlockDiagMass assemble_mass(const BrokenSpace& space, const ScalarField& coeff);

/// Volume parts of the coupling blocks (no face terms).
std::pair<BlockOperator, BlockOperator> assemble_volume_coupling(
    const BrokenSpace& ep, const BrokenSpace& eq);

/// Interior-face flux contributions for the parameter theta in [0,1].
/// `swap_lr` relabels every face's left/right pair (used by the
/// equivariance tests together with theta -> 1-theta).
std::pair<BlockOperator, BlockOperator> assemble_interior_flux(
    const BrokenSpace& ep, const BrokenSpace& eq, double theta,
    bool swap_lr = false);

/// Exterior-face contributions. In `data` mode the boundary fluxes are
/// the centered combinations (tr + g)/2, so the state-dependent half
/// enters the coupling blocks and the data half the load vector; in
/// `trace` mode the full traces enter the blocks and the loads vanish.
std::pair<BlockOperator, BlockOperator> assemble_boundary_coupling(
    const BrokenSpace& ep, const BrokenSpace& eq, BcMode mode);

class SemiDiscreteSystem {
 public:
  SemiDiscreteSystem(const BrokenSpace& ep, const BrokenSpace& eq,
                     const Constitutive& c, const BoundaryData& bd,
                     double theta, BcMode mode);

  const BrokenSpace& space_p() const { return ep_; }
  const BrokenSpace& space_q() const { return eq_; }
  const Mesh& mesh() const { return *ep_.mesh; }
  double theta() const { return theta_; }
  BcMode mode() const { return mode_; }

  StateVector zero_state() const;

  /// Time derivative of the state: (Mp^-1 (Kpq s + b_p), Mq^-1 (Kqp v + b_q)).
  void residual(const StateVector& x, double t, StateVector& dxdt) const;

  /// Loads only (zero for trace mode and for homogeneous data).
  void loads(double t, std::vector<double>& bp, std::vector<double>& bq) const;

  double discrete_energy(const StateVector& x) const;

  /// Sum over exterior faces of <y^q|u^p> + <u^q|y^p> with the ports of
  /// the realized boundary flux; dE/dt equals twice this value.
  double boundary_power(const StateVector& x, double t) const;

  /// Coupling only, no mass solve: (Kpq s, Kqp v).
  void apply_coupling(const StateVector& x, StateVector& out) const;

  const BlockOperator& kpq() const { return kpq_; }
  const BlockOperator& kqp() const { return kqp_; }
  const BlockDiagMass& mass_p() const { return mp_; }
  const BlockDiagMass& mass_q() const { return mq_; }

 private:
  BrokenSpace ep_, eq_;
  Constitutive constitutive_;
  BoundaryData bdata_;
  double theta_;
  BcMode mode_;
  BlockDiagMass mp_, mq_;
  BlockOperator kpq_, kqp_;

  struct BoundaryTable {
    int element;
    std::vector<double> weight;              // arclength weights
    std::vector<std::array<double, 2>> xy;   // physical quadrature points
    std::array<double, 2> n_out;
    std::vector<double> pvals;   // np per point
    std::vector<double> qnvals;  // nq per point: (psi_i . n_out)
  };
  std::vector<BoundaryTable> btables_;
};

}  // namespace phdg
