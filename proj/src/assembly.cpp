#include "phdg/assembly.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "phdg/polyforms.hpp"
#include "phdg/quadrature.hpp"

namespace phdg {

Constitutive Constitutive::constants(double cp_val, double cq_val) {
  return {[cp_val](double, double, double) { return cp_val; },
          [cq_val](double, double, double) { return cq_val; }};
}

BoundaryData BoundaryData::homogeneous() {
  return {[](double, double, double) { return 0.0; },
          [](double, double, double) { return std::array<double, 2>{0.0, 0.0}; }};
}

// ---------------------------------------------------------------------------
// BlockOperator

BlockOperator::BlockOperator(int rows_per_el, int cols_per_el, int n_elements)
    : rows_per_el_(rows_per_el), cols_per_el_(cols_per_el), n_el_(n_elements),
      rows_(n_elements) {}

int BlockOperator::intern(const std::vector<double>& block) {
  auto it = index_.find(block);
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(pool_.size());
  pool_.push_back(block);
  index_.emplace(block, id);
  return id;
}

void BlockOperator::add_block(int row_el, int col_el, const std::vector<double>& block) {
  auto& refs = rows_[row_el];
  for (auto& [col, pid] : refs) {
    if (col == col_el) {
      std::vector<double> sum = pool_[pid];
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += block[i];
      pid = intern(sum);
      return;
    }
  }
  refs.emplace_back(col_el, intern(block));
}

void BlockOperator::apply(const double* x, double* y) const {
  const int nr = rows_per_el_, nc = cols_per_el_;
#pragma omp parallel for schedule(static)
  for (int e = 0; e < n_el_; ++e) {
    double* ye = y + static_cast<std::size_t>(e) * nr;
    std::memset(ye, 0, sizeof(double) * nr);
    for (const auto& [col, pid] : rows_[e]) {
      const double* blk = pool_[pid].data();
      const double* xe = x + static_cast<std::size_t>(col) * nc;
      for (int i = 0; i < nr; ++i) {
        double acc = 0.0;
        const double* row = blk + static_cast<std::size_t>(i) * nc;
        for (int j = 0; j < nc; ++j) acc += row[j] * xe[j];
        ye[i] += acc;
      }
    }
  }
}

void BlockOperator::add_scaled(const BlockOperator& other, double factor) {
  for (int e = 0; e < n_el_; ++e)
    for (const auto& [col, pid] : other.rows_[e]) {
      std::vector<double> blk = other.pool_[pid];
      for (double& v : blk) v *= factor;
      add_block(e, col, blk);
    }
}

std::pair<double, double> BlockOperator::skew_residual(const BlockOperator& a,
                                                       const BlockOperator& b) {
  // residual of (A + B^T) over the block sparsity union
  const int nr = a.rows_per_el_, nc = a.cols_per_el_;
  double max_res = 0.0, max_mag = 0.0;
  std::map<std::pair<int, int>, std::vector<double>> acc;
  for (int e = 0; e < a.n_el_; ++e)
    for (const auto& [col, pid] : a.rows_[e]) {
      auto& blk = acc[{e, col}];
      if (blk.empty()) blk.assign(static_cast<std::size_t>(nr) * nc, 0.0);
      const auto& src = a.pool_[pid];
      for (std::size_t i = 0; i < src.size(); ++i) blk[i] += src[i];
      for (double v : src) max_mag = std::max(max_mag, std::abs(v));
    }
  for (int e = 0; e < b.n_el_; ++e)
    for (const auto& [col, pid] : b.rows_[e]) {
      auto& blk = acc[{col, e}];  // transpose placement
      if (blk.empty()) blk.assign(static_cast<std::size_t>(nr) * nc, 0.0);
      const auto& src = b.pool_[pid];
      for (int i = 0; i < b.rows_per_el_; ++i)
        for (int j = 0; j < b.cols_per_el_; ++j)
          blk[static_cast<std::size_t>(j) * nc + i] +=
              src[static_cast<std::size_t>(i) * b.cols_per_el_ + j];
      for (double v : src) max_mag = std::max(max_mag, std::abs(v));
    }
  for (const auto& [key, blk] : acc)
    for (double v : blk) max_res = std::max(max_res, std::abs(v));
  return {max_res, max_mag};
}

std::vector<std::vector<double>> BlockOperator::to_dense() const {
  std::size_t nrow = static_cast<std::size_t>(n_el_) * rows_per_el_;
  std::size_t ncol = static_cast<std::size_t>(n_el_) * cols_per_el_;
  std::vector<std::vector<double>> d(nrow, std::vector<double>(ncol, 0.0));
  for (int e = 0; e < n_el_; ++e)
    for (const auto& [col, pid] : rows_[e]) {
      const auto& blk = pool_[pid];
      for (int i = 0; i < rows_per_el_; ++i)
        for (int j = 0; j < cols_per_el_; ++j)
          d[e * rows_per_el_ + i][col * cols_per_el_ + j] +=
              blk[static_cast<std::size_t>(i) * cols_per_el_ + j];
    }
  return d;
}

// ---------------------------------------------------------------------------
// mass

void BlockDiagMass::solve_block(int el, const double* in, double* out) const {
  if (diagonal) {
    const double* d = chol.data() + static_cast<std::size_t>(el) * block;
    for (int i = 0; i < block; ++i) out[i] = in[i] / (d[i] * d[i]);
    return;
  }
  const double* L = chol.data() + static_cast<std::size_t>(el) * block * block;
  // forward then backward substitution with the lower factor
  for (int i = 0; i < block; ++i) {
    double acc = in[i];
    for (int j = 0; j < i; ++j) acc -= L[i * block + j] * out[j];
    out[i] = acc / L[i * block + i];
  }
  for (int i = block - 1; i >= 0; --i) {
    double acc = out[i];
    for (int j = i + 1; j < block; ++j) acc -= L[j * block + i] * out[j];
    out[i] = acc / L[i * block + i];
  }
}

double BlockDiagMass::energy_block(int el, const double* x) const {
  double acc = 0.0;
  if (diagonal) {
    const double* d = chol.data() + static_cast<std::size_t>(el) * block;
    for (int i = 0; i < block; ++i) acc += d[i] * d[i] * x[i] * x[i];
    return acc;
  }
  const double* L = chol.data() + static_cast<std::size_t>(el) * block * block;
  // x^T L L^T x = |L^T x|^2
  for (int i = 0; i < block; ++i) {
    double row = 0.0;
    for (int j = i; j < block; ++j) row += L[j * block + i] * x[j];
    acc += row * row;
  }
  return acc;
}

BlockDiagMass assemble_mass(const BrokenSpace& space, const ScalarField& coeff) {
  const Mesh& mesh = *space.mesh;
  int nb = space.scalar_block();
  int block = space.dofs_per_element;
  QuadRule rule = triangle_rule(std::min(2 * (space.poly_degree + 1), 20));
  std::vector<double> vals(nb);

  // detect a spatially constant coefficient by sampling
  bool constant = true;
  double c0 = coeff(0.0, mesh.vertices[0].x, mesh.vertices[0].y);
  for (const auto& v : mesh.vertices) {
    if (std::abs(coeff(0.0, v.x, v.y) - c0) > 1e-14 * std::max(1.0, std::abs(c0))) {
      constant = false;
      break;
    }
  }

  BlockDiagMass m;
  m.block = block;
  if (constant) {
    if (c0 <= 0.0) throw std::invalid_argument("assemble_mass: non-positive coefficient");
    // orthonormal reference basis: M = c0 * det(B) * I
    m.diagonal = true;
    m.chol.resize(static_cast<std::size_t>(block) * mesh.elements.size());
    for (std::size_t e = 0; e < mesh.elements.size(); ++e) {
      double d = std::sqrt(c0 * mesh.elements[e].jacobian_det);
      for (int i = 0; i < block; ++i) m.chol[e * block + i] = d;
    }
    return m;
  }

  m.diagonal = false;
  m.chol.assign(static_cast<std::size_t>(block) * block * mesh.elements.size(), 0.0);
  Eigen::MatrixXd M(block, block);
  for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
    M.setZero();
    double det = mesh.elements[e].jacobian_det;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double X = rule.points[q][0], Y = rule.points[q][1];
      Point2 p = mesh.map_point(e, X, Y);
      double c = coeff(0.0, p.x, p.y);
      if (c <= 0.0) throw std::invalid_argument("assemble_mass: non-positive coefficient");
      modal::eval(space.poly_degree, X, Y, vals.data());
      double w = rule.weights[q] * det * c;
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j) {
          double mij = w * vals[i] * vals[j];
          M(i, j) += mij;
          if (space.form_rank == 1) M(nb + i, nb + j) += mij;
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("assemble_mass: singular element mass block");
    Eigen::MatrixXd L = llt.matrixL();
    double* dst = m.chol.data() + static_cast<std::size_t>(e) * block * block;
    for (int i = 0; i < block; ++i)
      for (int j = 0; j < block; ++j) dst[i * block + j] = L(i, j);
  }
  return m;
}

// ---------------------------------------------------------------------------
// coupling blocks

namespace {

struct ElementBasisTables {
  // volume quadrature values/gradients of the scalar blocks of both spaces
  int np, nqb;
  std::vector<double> w;           // weights * detB
  std::vector<double> pvals;       // np per point
  std::vector<double> pgx, pgy;    // physical gradients of E_p basis
  std::vector<double> qvals;       // nqb per point
  std::vector<double> qgx, qgy;    // physical gradients of E_q scalar block
};

ElementBasisTables volume_tables(const BrokenSpace& ep, const BrokenSpace& eq, int e) {
  const Mesh& mesh = *ep.mesh;
  const Element& el = mesh.elements[e];
  const auto& B = el.jacobian;
  double det = el.jacobian_det;
  QuadRule rule = triangle_rule(std::min(2 * (ep.poly_degree + 2), 20));

  ElementBasisTables t;
  t.np = ep.scalar_block();
  t.nqb = eq.scalar_block();
  std::size_t nq = rule.size();
  t.w.resize(nq);
  t.pvals.resize(nq * t.np);
  t.pgx.resize(nq * t.np);
  t.pgy.resize(nq * t.np);
  t.qvals.resize(nq * t.nqb);
  t.qgx.resize(nq * t.nqb);
  t.qgy.resize(nq * t.nqb);
  std::vector<double> gx(std::max(t.np, t.nqb)), gy(std::max(t.np, t.nqb));
  for (std::size_t q = 0; q < nq; ++q) {
    double X = rule.points[q][0], Y = rule.points[q][1];
    t.w[q] = rule.weights[q] * det;
    modal::eval(ep.poly_degree, X, Y, &t.pvals[q * t.np]);
    modal::grad(ep.poly_degree, X, Y, gx.data(), gy.data());
    for (int i = 0; i < t.np; ++i) {
      t.pgx[q * t.np + i] = (B[1][1] * gx[i] - B[1][0] * gy[i]) / det;
      t.pgy[q * t.np + i] = (-B[0][1] * gx[i] + B[0][0] * gy[i]) / det;
    }
    modal::eval(eq.poly_degree, X, Y, &t.qvals[q * t.nqb]);
    modal::grad(eq.poly_degree, X, Y, gx.data(), gy.data());
    for (int i = 0; i < t.nqb; ++i) {
      t.qgx[q * t.nqb + i] = (B[1][1] * gx[i] - B[1][0] * gy[i]) / det;
      t.qgy[q * t.nqb + i] = (-B[0][1] * gx[i] + B[0][0] * gy[i]) / det;
    }
  }
  return t;
}

struct FaceSideTables {
  // traces at the face quadrature points, parametrized by the global
  // face direction, evaluated from one side
  std::vector<double> pvals;   // np per point
  std::vector<double> qnval;   // nq per point: psi_i . n_out of this side
  std::array<double, 2> n_out;
};

FaceSideTables side_tables(const BrokenSpace& ep, const BrokenSpace& eq, int elem,
                           int local_edge, int sign, const QuadRule& rule) {
  const Mesh& mesh = *ep.mesh;
  FaceSideTables t;
  t.n_out = mesh.outward_normal(elem, local_edge);
  int np = ep.scalar_block(), nqb = eq.scalar_block();
  std::size_t n = rule.size();
  t.pvals.resize(n * np);
  t.qnval.resize(n * 2 * nqb);
  auto e0 = edge_endpoints(local_edge);
  std::vector<double> qv(nqb);
  for (std::size_t q = 0; q < n; ++q) {
    double s = rule.points[q][0];
    double u = (sign > 0) ? s : 1.0 - s;  // local edge parameter along the global direction
    double X = e0[0][0] + u * (e0[1][0] - e0[0][0]);
    double Y = e0[0][1] + u * (e0[1][1] - e0[0][1]);
    modal::eval(ep.poly_degree, X, Y, &t.pvals[q * np]);
    modal::eval(eq.poly_degree, X, Y, qv.data());
    for (int i = 0; i < nqb; ++i) {
      t.qnval[q * 2 * nqb + i] = qv[i] * t.n_out[0];
      t.qnval[q * 2 * nqb + nqb + i] = qv[i] * t.n_out[1];
    }
  }
  return t;
}

int face_quad_degree(const BrokenSpace& ep) { return 2 * ep.poly_degree + 5; }

}  // namespace

std::pair<BlockOperator, BlockOperator> assemble_volume_coupling(
    const BrokenSpace& ep, const BrokenSpace& eq) {
  const Mesh& mesh = *ep.mesh;
  int E = static_cast<int>(mesh.elements.size());
  int np = ep.dofs_per_element, nq = eq.dofs_per_element;
  int nqb = eq.scalar_block();
  BlockOperator kpq(np, nq, E), kqp(nq, np, E);
  std::vector<double> apq(static_cast<std::size_t>(np) * nq);
  std::vector<double> aqp(static_cast<std::size_t>(nq) * np);
  for (int e = 0; e < E; ++e) {
    ElementBasisTables t = volume_tables(ep, eq, e);
    std::fill(apq.begin(), apq.end(), 0.0);
    std::fill(aqp.begin(), aqp.end(), 0.0);
    std::size_t nquad = t.w.size();
    for (std::size_t q = 0; q < nquad; ++q) {
      const double* pv = &t.pvals[q * t.np];
      const double* pgx = &t.pgx[q * t.np];
      const double* pgy = &t.pgy[q * t.np];
      const double* qv = &t.qvals[q * t.nqb];
      const double* qgx = &t.qgx[q * t.nqb];
      const double* qgy = &t.qgy[q * t.nqb];
      double w = t.w[q];
      // V-equation: <sigma | d nu^p>_K = -int sigma . grad(nu)
      for (int i = 0; i < np; ++i)
        for (int j = 0; j < nqb; ++j) {
          apq[static_cast<std::size_t>(i) * nq + j] -= w * qv[j] * pgx[i];
          apq[static_cast<std::size_t>(i) * nq + nqb + j] -= w * qv[j] * pgy[i];
        }
      // sigma-equation: -<d nu^q | V>_K = -int div(nu^q) V
      for (int i = 0; i < nqb; ++i)
        for (int j = 0; j < np; ++j) {
          aqp[static_cast<std::size_t>(i) * np + j] -= w * qgx[i] * pv[j];
          aqp[static_cast<std::size_t>(nqb + i) * np + j] -= w * qgy[i] * pv[j];
        }
    }
    kpq.add_block(e, e, apq);
    kqp.add_block(e, e, aqp);
  }
  return {std::move(kpq), std::move(kqp)};
}

std::pair<BlockOperator, BlockOperator> assemble_interior_flux(
    const BrokenSpace& ep, const BrokenSpace& eq, double theta, bool swap_lr) {
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("assemble_interior_flux: theta outside [0,1]");
  const Mesh& mesh = *ep.mesh;
  int E = static_cast<int>(mesh.elements.size());
  int np = ep.dofs_per_element, nq = eq.dofs_per_element;
  BlockOperator kpq(np, nq, E), kqp(nq, np, E);
  QuadRule rule = edge_rule(face_quad_degree(ep));
  std::vector<double> blk_pq(static_cast<std::size_t>(np) * nq);
  std::vector<double> blk_qp(static_cast<std::size_t>(nq) * np);

  for (const auto& f : mesh.faces) {
    if (!f.interior()) continue;
    int elems[2] = {f.left_element, *f.right_element};
    int ledges[2] = {f.local_edge_in_left, f.local_edge_in_right};
    int signs[2] = {f.sign_left, f.sign_right};
    if (swap_lr) {
      std::swap(elems[0], elems[1]);
      std::swap(ledges[0], ledges[1]);
      std::swap(signs[0], signs[1]);
    }
    FaceSideTables sides[2] = {
        side_tables(ep, eq, elems[0], ledges[0], signs[0], rule),
        side_tables(ep, eq, elems[1], ledges[1], signs[1], rule)};
    // numerical fluxes: sigma-hat = theta tr|L + (1-theta) tr|R,
    //                   V-hat = (1-theta) tr|L + theta tr|R
    double gamma[2] = {theta, 1.0 - theta};
    double delta[2] = {1.0 - theta, theta};
    for (int X = 0; X < 2; ++X) {
      for (int Y = 0; Y < 2; ++Y) {
        std::fill(blk_pq.begin(), blk_pq.end(), 0.0);
        std::fill(blk_qp.begin(), blk_qp.end(), 0.0);
        // psi from Y dotted with X's outward normal; note n_R = -n_L
        double flip = (X == Y) ? 1.0 : -1.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          double w = rule.weights[q] * f.length;
          const double* pX = &sides[X].pvals[q * np];
          const double* pY = &sides[Y].pvals[q * np];
          const double* qnX = &sides[X].qnval[q * nq];
          const double* qnY = &sides[Y].qnval[q * nq];
          for (int i = 0; i < np; ++i)
            for (int j = 0; j < nq; ++j)
              blk_pq[static_cast<std::size_t>(i) * nq + j] +=
                  gamma[Y] * flip * w * qnY[j] * pX[i];
          for (int i = 0; i < nq; ++i)
            for (int j = 0; j < np; ++j)
              blk_qp[static_cast<std::size_t>(i) * np + j] +=
                  delta[Y] * w * qnX[i] * pY[j];
        }
        kpq.add_block(elems[X], elems[Y], blk_pq);
        kqp.add_block(elems[X], elems[Y], blk_qp);
      }
    }
  }
  return {std::move(kpq), std::move(kqp)};
}

std::pair<BlockOperator, BlockOperator> assemble_boundary_coupling(
    const BrokenSpace& ep, const BrokenSpace& eq, BcMode mode) {
  const Mesh& mesh = *ep.mesh;
  int E = static_cast<int>(mesh.elements.size());
  int np = ep.dofs_per_element, nq = eq.dofs_per_element;
  BlockOperator kpq(np, nq, E), kqp(nq, np, E);
  QuadRule rule = edge_rule(face_quad_degree(ep));
  double fac = (mode == BcMode::data) ? 0.5 : 1.0;
  std::vector<double> blk_pq(static_cast<std::size_t>(np) * nq);
  std::vector<double> blk_qp(static_cast<std::size_t>(nq) * np);
  for (const auto& f : mesh.faces) {
    if (f.interior()) continue;
    FaceSideTables t =
        side_tables(ep, eq, f.left_element, f.local_edge_in_left, f.sign_left, rule);
    std::fill(blk_pq.begin(), blk_pq.end(), 0.0);
    std::fill(blk_qp.begin(), blk_qp.end(), 0.0);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double w = rule.weights[q] * f.length * fac;
      const double* pv = &t.pvals[q * np];
      const double* qn = &t.qnval[q * nq];
      for (int i = 0; i < np; ++i)
        for (int j = 0; j < nq; ++j)
          blk_pq[static_cast<std::size_t>(i) * nq + j] += w * qn[j] * pv[i];
      for (int i = 0; i < nq; ++i)
        for (int j = 0; j < np; ++j)
          blk_qp[static_cast<std::size_t>(i) * np + j] += w * qn[i] * pv[j];
    }
    kpq.add_block(f.left_element, f.left_element, blk_pq);
    kqp.add_block(f.left_element, f.left_element, blk_qp);
  }
  return {std::move(kpq), std::move(kqp)};
}

// ---------------------------------------------------------------------------
// SemiDiscreteSystem

SemiDiscreteSystem::SemiDiscreteSystem(const BrokenSpace& ep, const BrokenSpace& eq,
                                       const Constitutive& c, const BoundaryData& bd,
                                       double theta, BcMode mode)
    : ep_(ep), eq_(eq), constitutive_(c), bdata_(bd), theta_(theta), mode_(mode),
      kpq_(ep.dofs_per_element, eq.dofs_per_element,
           static_cast<int>(ep.mesh->elements.size())),
      kqp_(eq.dofs_per_element, ep.dofs_per_element,
           static_cast<int>(ep.mesh->elements.size())) {
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("SemiDiscreteSystem: theta outside [0,1]");
  mp_ = assemble_mass(ep_, c.cp);
  mq_ = assemble_mass(eq_, c.cq);

  auto vol = assemble_volume_coupling(ep_, eq_);
  kpq_ = std::move(vol.first);
  kqp_ = std::move(vol.second);
  auto flux = assemble_interior_flux(ep_, eq_, theta);
  kpq_.add_scaled(flux.first, 1.0);
  kqp_.add_scaled(flux.second, 1.0);
  auto bdry = assemble_boundary_coupling(ep_, eq_, mode);
  kpq_.add_scaled(bdry.first, 1.0);
  kqp_.add_scaled(bdry.second, 1.0);

  // boundary quadrature tables for loads and boundary power
  const Mesh& mesh = *ep_.mesh;
  QuadRule rule = edge_rule(face_quad_degree(ep_));
  int np = ep_.dofs_per_element, nq = eq_.dofs_per_element;
  for (int fid = 0; fid < static_cast<int>(mesh.faces.size()); ++fid) {
    const Face& f = mesh.faces[fid];
    if (f.interior()) continue;
    FaceSideTables t =
        side_tables(ep_, eq_, f.left_element, f.local_edge_in_left, f.sign_left, rule);
    BoundaryTable bt;
    bt.element = f.left_element;
    bt.n_out = t.n_out;
    bt.pvals = std::move(t.pvals);
    bt.qnvals = std::move(t.qnval);
    const Point2& a = mesh.vertices[f.vertex_ids[0]];
    const Point2& b = mesh.vertices[f.vertex_ids[1]];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      bt.weight.push_back(rule.weights[q] * f.length);
      double s = rule.points[q][0];
      bt.xy.push_back({a.x + s * (b.x - a.x), a.y + s * (b.y - a.y)});
    }
    (void)np;
    (void)nq;
    btables_.push_back(std::move(bt));
  }
}

StateVector SemiDiscreteSystem::zero_state() const {
  StateVector x;
  x.v.assign(static_cast<std::size_t>(ep_.total_dofs), 0.0);
  x.s.assign(static_cast<std::size_t>(eq_.total_dofs), 0.0);
  return x;
}

void SemiDiscreteSystem::loads(double t, std::vector<double>& bp,
                               std::vector<double>& bq) const {
  bp.assign(static_cast<std::size_t>(ep_.total_dofs), 0.0);
  bq.assign(static_cast<std::size_t>(eq_.total_dofs), 0.0);
  if (mode_ == BcMode::trace) return;
  int np = ep_.dofs_per_element, nq = eq_.dofs_per_element;
  for (const auto& bt : btables_) {
    double* bpe = bp.data() + static_cast<std::size_t>(bt.element) * np;
    double* bqe = bq.data() + static_cast<std::size_t>(bt.element) * nq;
    for (std::size_t q = 0; q < bt.weight.size(); ++q) {
      double gv = bdata_.g_v(t, bt.xy[q][0], bt.xy[q][1]);
      auto gs = bdata_.g_sigma(t, bt.xy[q][0], bt.xy[q][1]);
      double gsn = gs[0] * bt.n_out[0] + gs[1] * bt.n_out[1];
      double w = bt.weight[q];
      const double* pv = &bt.pvals[q * np];
      const double* qn = &bt.qnvals[q * nq];
      for (int i = 0; i < np; ++i) bpe[i] += 0.5 * w * gsn * pv[i];
      for (int i = 0; i < nq; ++i) bqe[i] += 0.5 * w * gv * qn[i];
    }
  }
}

void SemiDiscreteSystem::apply_coupling(const StateVector& x, StateVector& out) const {
  out.v.resize(x.v.size());
  out.s.resize(x.s.size());
  kpq_.apply(x.s.data(), out.v.data());
  kqp_.apply(x.v.data(), out.s.data());
}

void SemiDiscreteSystem::residual(const StateVector& x, double t,
                                  StateVector& dxdt) const {
  dxdt.v.resize(x.v.size());
  dxdt.s.resize(x.s.size());
  kpq_.apply(x.s.data(), dxdt.v.data());
  kqp_.apply(x.v.data(), dxdt.s.data());
  if (mode_ == BcMode::data) {
    thread_local std::vector<double> bp, bq;
    loads(t, bp, bq);
    for (std::size_t i = 0; i < bp.size(); ++i) dxdt.v[i] += bp[i];
    for (std::size_t i = 0; i < bq.size(); ++i) dxdt.s[i] += bq[i];
  }
  int E = static_cast<int>(ep_.mesh->elements.size());
  int np = ep_.dofs_per_element, nq = eq_.dofs_per_element;
#pragma omp parallel
  {
    std::vector<double> tmp(std::max(np, nq));
#pragma omp for schedule(static)
    for (int e = 0; e < E; ++e) {
      mp_.solve_block(e, dxdt.v.data() + static_cast<std::size_t>(e) * np, tmp.data());
      std::copy(tmp.begin(), tmp.begin() + np,
                dxdt.v.begin() + static_cast<std::size_t>(e) * np);
      mq_.solve_block(e, dxdt.s.data() + static_cast<std::size_t>(e) * nq, tmp.data());
      std::copy(tmp.begin(), tmp.begin() + nq,
                dxdt.s.begin() + static_cast<std::size_t>(e) * nq);
    }
  }
}

double SemiDiscreteSystem::discrete_energy(const StateVector& x) const {
  int E = static_cast<int>(ep_.mesh->elements.size());
  int np = ep_.dofs_per_element, nq = eq_.dofs_per_element;
  double acc = 0.0;
#pragma omp parallel for reduction(+ : acc) schedule(static)
  for (int e = 0; e < E; ++e) {
    acc += mp_.energy_block(e, x.v.data() + static_cast<std::size_t>(e) * np);
    acc += mq_.energy_block(e, x.s.data() + static_cast<std::size_t>(e) * nq);
  }
  return acc;
}

double SemiDiscreteSystem::boundary_power(const StateVector& x, double t) const {
  int np = ep_.dofs_per_element, nq = eq_.dofs_per_element;
  double acc = 0.0;
  for (const auto& bt : btables_) {
    const double* ve = x.v.data() + static_cast<std::size_t>(bt.element) * np;
    const double* se = x.s.data() + static_cast<std::size_t>(bt.element) * nq;
    for (std::size_t q = 0; q < bt.weight.size(); ++q) {
      const double* pv = &bt.pvals[q * np];
      const double* qn = &bt.qnvals[q * nq];
      double vh = 0.0, snh = 0.0;
      for (int i = 0; i < np; ++i) vh += ve[i] * pv[i];
      for (int i = 0; i < nq; ++i) snh += se[i] * qn[i];
      double w = bt.weight[q];
      if (mode_ == BcMode::data) {
        double gv = bdata_.g_v(t, bt.xy[q][0], bt.xy[q][1]);
        auto gs = bdata_.g_sigma(t, bt.xy[q][0], bt.xy[q][1]);
        double gsn = gs[0] * bt.n_out[0] + gs[1] * bt.n_out[1];
        // ports u = -g/2, y = -tr: <y^q|u^p> + <u^q|y^p>
        acc += w * 0.5 * (snh * gv + gsn * vh);
      } else {
        // trace mode: u = -tr/2, y = -tr
        acc += w * snh * vh;
      }
    }
  }
  return acc;
}

}  // namespace phdg
