#include "phdg/dirac.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "phdg/assembly.hpp"
#include "phdg/polyforms.hpp"
#include "phdg/quadrature.hpp"
#include "phdg/spaces.hpp"
#include "phdg/timeint.hpp"

namespace phdg {

namespace {

// One-element sampling machinery shared by the checks: volume quadrature
// tables for the two scalar blocks and boundary quadrature along the
// three edges with the element's outward normals.
struct ElementCtx {
  const Mesh* mesh;
  int element;
  int r, np, nqb, nq;
  QuadRule vrule, erule;
  std::vector<double> vw;                       // volume weights * detB
  std::vector<double> pvals, pgx, pgy;          // per volume point
  std::vector<double> qvals, qgx, qgy;
  // boundary: 3 edges x quad points, traversed by local edge parameter
  std::vector<double> bw;                       // arclength weights
  std::vector<double> bp;                       // np per point
  std::vector<double> bqn;                      // nq per point: psi_i . n_out
  int bpts = 0;
};

ElementCtx make_ctx(const Mesh& mesh, int element, int r) {
  ElementCtx c;
  c.mesh = &mesh;
  c.element = element;
  c.r = r;
  c.np = modal::space_dim(r);
  c.nqb = modal::space_dim(r + 1);
  c.nq = 2 * c.nqb;
  c.vrule = triangle_rule(std::min(2 * (r + 2), 20));
  c.erule = edge_rule(2 * r + 5);

  const Element& el = mesh.elements[element];
  const auto& B = el.jacobian;
  double det = el.jacobian_det;
  std::size_t nv = c.vrule.size();
  c.vw.resize(nv);
  c.pvals.resize(nv * c.np);
  c.pgx.resize(nv * c.np);
  c.pgy.resize(nv * c.np);
  c.qvals.resize(nv * c.nqb);
  c.qgx.resize(nv * c.nqb);
  c.qgy.resize(nv * c.nqb);
  std::vector<double> gx(c.nqb), gy(c.nqb);
  for (std::size_t q = 0; q < nv; ++q) {
    double X = c.vrule.points[q][0], Y = c.vrule.points[q][1];
    c.vw[q] = c.vrule.weights[q] * det;
    modal::eval(r, X, Y, &c.pvals[q * c.np]);
    modal::grad(r, X, Y, gx.data(), gy.data());
    for (int i = 0; i < c.np; ++i) {
      c.pgx[q * c.np + i] = (B[1][1] * gx[i] - B[1][0] * gy[i]) / det;
      c.pgy[q * c.np + i] = (-B[0][1] * gx[i] + B[0][0] * gy[i]) / det;
    }
    modal::eval(r + 1, X, Y, &c.qvals[q * c.nqb]);
    modal::grad(r + 1, X, Y, gx.data(), gy.data());
    for (int i = 0; i < c.nqb; ++i) {
      c.qgx[q * c.nqb + i] = (B[1][1] * gx[i] - B[1][0] * gy[i]) / det;
      c.qgy[q * c.nqb + i] = (-B[0][1] * gx[i] + B[0][0] * gy[i]) / det;
    }
  }

  int per_edge = static_cast<int>(c.erule.size());
  c.bpts = 3 * per_edge;
  c.bw.resize(c.bpts);
  c.bp.resize(static_cast<std::size_t>(c.bpts) * c.np);
  c.bqn.resize(static_cast<std::size_t>(c.bpts) * c.nq);
  std::vector<double> qv(c.nqb);
  for (int le = 0; le < 3; ++le) {
    auto nout = mesh.outward_normal(element, le);
    auto ep = edge_endpoints(le);
    // physical edge length from the mapped endpoints
    Point2 pa = mesh.map_point(element, ep[0][0], ep[0][1]);
    Point2 pb = mesh.map_point(element, ep[1][0], ep[1][1]);
    double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
    for (int q = 0; q < per_edge; ++q) {
      int idx = le * per_edge + q;
      double s = c.erule.points[q][0];
      double X = ep[0][0] + s * (ep[1][0] - ep[0][0]);
      double Y = ep[0][1] + s * (ep[1][1] - ep[0][1]);
      c.bw[idx] = c.erule.weights[q] * len;
      modal::eval(c.r, X, Y, &c.bp[static_cast<std::size_t>(idx) * c.np]);
      modal::eval(c.r + 1, X, Y, qv.data());
      for (int i = 0; i < c.nqb; ++i) {
        c.bqn[static_cast<std::size_t>(idx) * c.nq + i] = qv[i] * nout[0];
        c.bqn[static_cast<std::size_t>(idx) * c.nq + c.nqb + i] = qv[i] * nout[1];
      }
    }
  }
  return c;
}

// boundary samples of tr V and (w . n_out) for given coefficients
void boundary_traces(const ElementCtx& c, const std::vector<double>& ep_coeffs,
                     const std::vector<double>& eq_coeffs, std::vector<double>& v_tr,
                     std::vector<double>& sn_tr) {
  v_tr.assign(c.bpts, 0.0);
  sn_tr.assign(c.bpts, 0.0);
  for (int q = 0; q < c.bpts; ++q) {
    const double* pv = &c.bp[static_cast<std::size_t>(q) * c.np];
    const double* qn = &c.bqn[static_cast<std::size_t>(q) * c.nq];
    for (int i = 0; i < c.np; ++i) v_tr[q] += ep_coeffs[i] * pv[i];
    for (int i = 0; i < c.nq; ++i) sn_tr[q] += eq_coeffs[i] * qn[i];
  }
}

// dual-vector representations of the structure flows:
// fp_rep[i] = <phi_i | f^p>, fq_rep[i] = <psi_i | f^q>
void structure_flows(const ElementCtx& c, const std::vector<double>& ep_coeffs,
                     const std::vector<double>& eq_coeffs,
                     const std::vector<double>& u_p, const std::vector<double>& u_star,
                     std::vector<double>& fp_rep, std::vector<double>& fq_rep) {
  fp_rep.assign(c.np, 0.0);
  fq_rep.assign(c.nq, 0.0);
  std::size_t nv = c.vw.size();
  for (std::size_t q = 0; q < nv; ++q) {
    const double* pv = &c.pvals[q * c.np];
    const double* pgx = &c.pgx[q * c.np];
    const double* pgy = &c.pgy[q * c.np];
    const double* qv = &c.qvals[q * c.nqb];
    const double* qgx = &c.qgx[q * c.nqb];
    const double* qgy = &c.qgy[q * c.nqb];
    double w = c.vw[q];
    double div_w = 0.0, ve = 0.0, gvx = 0.0, gvy = 0.0;
    for (int i = 0; i < c.nqb; ++i)
      div_w += eq_coeffs[i] * qgx[i] + eq_coeffs[c.nqb + i] * qgy[i];
    for (int i = 0; i < c.np; ++i) {
      ve += ep_coeffs[i] * pv[i];
      gvx += ep_coeffs[i] * pgx[i];
      gvy += ep_coeffs[i] * pgy[i];
    }
    // <phi_i | f^p> volume part: -int phi_i div(w_e)
    for (int i = 0; i < c.np; ++i) fp_rep[i] -= w * pv[i] * div_w;
    // <psi_i | f^q> volume part: -int psi_i . grad V_e
    for (int i = 0; i < c.nqb; ++i) {
      fq_rep[i] -= w * qv[i] * gvx;
      fq_rep[c.nqb + i] -= w * qv[i] * gvy;
    }
  }
  std::vector<double> v_tr, sn_tr;
  boundary_traces(c, ep_coeffs, eq_coeffs, v_tr, sn_tr);
  for (int q = 0; q < c.bpts; ++q) {
    double w = c.bw[q];
    const double* pv = &c.bp[static_cast<std::size_t>(q) * c.np];
    const double* qn = &c.bqn[static_cast<std::size_t>(q) * c.nq];
    for (int i = 0; i < c.np; ++i)
      fp_rep[i] += w * pv[i] * (0.5 * sn_tr[q] + u_star[q]);
    for (int i = 0; i < c.nq; ++i)
      fq_rep[i] += w * qn[i] * (0.5 * v_tr[q] + u_p[q]);
  }
}

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

PowerResult element_power(const Mesh& mesh, int element, int r, std::mt19937_64& rng) {
  ElementCtx c = make_ctx(mesh, element, r);
  auto ep_coeffs = random_vec(c.np, rng);
  auto eq_coeffs = random_vec(c.nq, rng);
  auto u_p = random_vec(c.bpts, rng);
  auto u_star = random_vec(c.bpts, rng);

  std::vector<double> fp_rep, fq_rep;
  structure_flows(c, ep_coeffs, eq_coeffs, u_p, u_star, fp_rep, fq_rep);

  std::vector<double> v_tr, sn_tr;
  boundary_traces(c, ep_coeffs, eq_coeffs, v_tr, sn_tr);

  double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0;
  for (int i = 0; i < c.np; ++i) t1 += ep_coeffs[i] * fp_rep[i];
  for (int i = 0; i < c.nq; ++i) t2 += eq_coeffs[i] * fq_rep[i];
  for (int q = 0; q < c.bpts; ++q) {
    // outputs y^p = -tr V, y^{p*} = -(w . n_out)
    t3 += c.bw[q] * (-sn_tr[q]) * u_p[q];
    t4 += c.bw[q] * u_star[q] * (-v_tr[q]);
  }
  PowerResult res;
  res.power = t1 + t2 + t3 + t4;
  res.scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4);
  return res;
}

InterconnectPorts interconnect(const std::vector<double>& y_l_star,
                               const std::vector<double>& y_l,
                               const std::vector<double>& y_r_star,
                               const std::vector<double>& y_r, double theta) {
  if (theta < 0.0 || theta > 1.0)
    throw std::invalid_argument("interconnect: theta outside [0,1]");
  std::size_t n = y_l.size();
  InterconnectPorts w;
  w.w_l.resize(n);
  w.w_l_star.resize(n);
  w.w_r.resize(n);
  w.w_r_star.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    w.w_l[i] = (-0.5 + theta) * y_l[i] - theta * y_r[i];
    w.w_l_star[i] = (0.5 - theta) * y_l_star[i] + (theta - 1.0) * y_r_star[i];
    w.w_r[i] = (1.0 - theta) * y_l[i] + (theta - 0.5) * y_r[i];
    w.w_r_star[i] = theta * y_l_star[i] + (0.5 - theta) * y_r_star[i];
  }
  return w;
}

double interconnect_power(const InterconnectPorts& w,
                          const std::vector<double>& y_l_star,
                          const std::vector<double>& y_l,
                          const std::vector<double>& y_r_star,
                          const std::vector<double>& y_r,
                          const std::vector<double>& weights) {
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    acc += weights[i] * (y_l_star[i] * w.w_l[i] + w.w_l_star[i] * y_l[i] +
                         y_r_star[i] * w.w_r[i] + w.w_r_star[i] * y_r[i]);
  return acc;
}

ComposeResult compose_two_elements(double theta, int r, std::mt19937_64& rng,
                                   const BoundaryData* data, double t) {
  Mesh mesh = build_structured_mesh(1);
  auto [ep, eq] = make_spaces(mesh, r);
  ElementCtx ctx[2] = {make_ctx(mesh, 0, r), make_ctx(mesh, 1, r)};

  // one interior face: identify it and its position in each element's
  // boundary point列 (local edge index block)
  int fid = -1;
  for (int i = 0; i < static_cast<int>(mesh.faces.size()); ++i)
    if (mesh.faces[i].interior()) fid = i;
  const Face& f = mesh.faces[fid];
  int elL = f.left_element, elR = *f.right_element;
  int leL = f.local_edge_in_left, leR = f.local_edge_in_right;
  int per_edge = static_cast<int>(ctx[0].erule.size());

  StateVector x;
  x.v = random_vec(static_cast<std::size_t>(ep.total_dofs), rng);
  x.s = random_vec(static_cast<std::size_t>(eq.total_dofs), rng);

  // interconnection inputs on the shared face, sampled in the frame of
  // the left element's outward normal and along the global direction of
  // the face (the left element traverses it with sign +1)
  auto face_samples = [&](int elem, int local_edge, int sign, std::vector<double>& vtr,
                          std::vector<double>& sn, std::vector<double>& wts) {
    const ElementCtx& c = ctx[elem];
    const double* vc = x.v.data() + static_cast<std::size_t>(elem) * c.np;
    const double* sc = x.s.data() + static_cast<std::size_t>(elem) * c.nq;
    vtr.assign(per_edge, 0.0);
    sn.assign(per_edge, 0.0);
    wts.assign(per_edge, 0.0);
    for (int q = 0; q < per_edge; ++q) {
      // index q along the global direction; flip for sign -1
      int own = (sign > 0) ? q : per_edge - 1 - q;
      int idx = local_edge * per_edge + own;
      wts[q] = c.bw[idx];
      const double* pv = &c.bp[static_cast<std::size_t>(idx) * c.np];
      const double* qn = &c.bqn[static_cast<std::size_t>(idx) * c.nq];
      for (int i = 0; i < c.np; ++i) vtr[q] += vc[i] * pv[i];
      for (int i = 0; i < c.nq; ++i) sn[q] += sc[i] * qn[i];
    }
  };
  std::vector<double> y_l, y_r, ystar_l, ystar_r, wts, wtsR;
  face_samples(elL, leL, f.sign_left, y_l, ystar_l, wts);
  face_samples(elR, leR, f.sign_right, y_r, ystar_r, wtsR);
  // ystar_r was sampled with the right element's outward normal; convert
  // to the left frame
  for (auto& v : ystar_r) v = -v;

  InterconnectPorts w = interconnect(ystar_l, y_l, ystar_r, y_r, theta);

  // per-element boundary input samples (own frame, ordered by the own
  // local edge parameter)
  std::vector<double> up[2], ustar[2];
  for (int e = 0; e < 2; ++e) {
    up[e].assign(ctx[e].bpts, 0.0);
    ustar[e].assign(ctx[e].bpts, 0.0);
  }
  // interior face ports per the interconnection choice: element L gets
  // (w_l, w*_l), element R gets (-w_r, -w*_r); the star samples convert
  // back to each element's own frame
  for (int q = 0; q < per_edge; ++q) {
    int ownL = (f.sign_left > 0) ? q : per_edge - 1 - q;
    int ownR = (f.sign_right > 0) ? q : per_edge - 1 - q;
    up[elL][leL * per_edge + ownL] = w.w_l[q];
    ustar[elL][leL * per_edge + ownL] = w.w_l_star[q];
    up[elR][leR * per_edge + ownR] = -w.w_r[q];
    // own frame of R flips the star representation once more
    ustar[elR][leR * per_edge + ownR] = w.w_r_star[q];
  }
  // outer faces: data-mode ports u = -g/2 evaluated at the physical
  // quadrature points
  for (int e = 0; e < 2; ++e) {
    for (int le = 0; le < 3; ++le) {
      bool is_shared = (e == elL && le == leL) || (e == elR && le == leR);
      if (is_shared) continue;
      auto nout = mesh.outward_normal(e, le);
      auto endpoints = edge_endpoints(le);
      for (int q = 0; q < per_edge; ++q) {
        int idx = le * per_edge + q;
        double gv = 0.0, gsn = 0.0;
        if (data) {
          double s = ctx[e].erule.points[q][0];
          double X = endpoints[0][0] + s * (endpoints[1][0] - endpoints[0][0]);
          double Y = endpoints[0][1] + s * (endpoints[1][1] - endpoints[0][1]);
          Point2 p = mesh.map_point(e, X, Y);
          gv = data->g_v(t, p.x, p.y);
          auto gs = data->g_sigma(t, p.x, p.y);
          gsn = gs[0] * nout[0] + gs[1] * nout[1];
        }
        up[e][idx] = -0.5 * gv;
        ustar[e][idx] = -0.5 * gsn;
      }
    }
  }

  // flows and the element power pairs
  double pair_sum = 0.0, outer_pair = 0.0, scale = 0.0;
  for (int e = 0; e < 2; ++e) {
    const ElementCtx& c = ctx[e];
    std::vector<double> epc(x.v.begin() + static_cast<std::size_t>(e) * c.np,
                            x.v.begin() + static_cast<std::size_t>(e + 1) * c.np);
    std::vector<double> eqc(x.s.begin() + static_cast<std::size_t>(e) * c.nq,
                            x.s.begin() + static_cast<std::size_t>(e + 1) * c.nq);
    std::vector<double> fp_rep, fq_rep;
    structure_flows(c, epc, eqc, up[e], ustar[e], fp_rep, fq_rep);
    double t1 = 0.0, t2 = 0.0;
    for (int i = 0; i < c.np; ++i) t1 += epc[i] * fp_rep[i];
    for (int i = 0; i < c.nq; ++i) t2 += eqc[i] * fq_rep[i];
    pair_sum += t1 + t2;
    scale += std::abs(t1) + std::abs(t2);

    std::vector<double> v_tr, sn_tr;
    boundary_traces(c, epc, eqc, v_tr, sn_tr);
    for (int le = 0; le < 3; ++le) {
      bool is_shared = (e == elL && le == leL) || (e == elR && le == leR);
      if (is_shared) continue;
      for (int q = 0; q < per_edge; ++q) {
        int idx = le * per_edge + q;
        double contrib = c.bw[idx] * ((-sn_tr[idx]) * up[e][idx] +
                                      ustar[e][idx] * (-v_tr[idx]));
        outer_pair += contrib;
        scale += std::abs(contrib);
      }
    }
  }

  ComposeResult res;
  res.total_power = pair_sum + outer_pair;
  res.outer_pairing = outer_pair;
  res.scale = scale;

  // cross-module oracle: the assembled system evaluates the same
  // boundary pairing for the same state
  BoundaryData bd = data ? *data : BoundaryData::homogeneous();
  SemiDiscreteSystem sys(ep, eq, Constitutive::constants(1.0, 1.0), bd, theta,
                         BcMode::data);
  res.assembly_pairing = sys.boundary_power(x, t);
  return res;
}

double bilinear_symmetry_check(const Mesh& mesh, int element, int r, int samples,
                               std::mt19937_64& rng) {
  ElementCtx c = make_ctx(mesh, element, r);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    auto ep1 = random_vec(c.np, rng), ep2 = random_vec(c.np, rng);
    auto eq1 = random_vec(c.nq, rng), eq2 = random_vec(c.nq, rng);
    auto fp1 = random_vec(c.np, rng), fp2 = random_vec(c.np, rng);
    auto fq1 = random_vec(c.nq, rng), fq2 = random_vec(c.nq, rng);
    std::vector<double> v1, s1, v2, s2;
    boundary_traces(c, ep1, eq1, v1, s1);
    boundary_traces(c, ep2, eq2, v2, s2);
    auto dot = [](const std::vector<double>& a, const std::vector<double>& b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
      return acc;
    };
    auto bpair = [&](const std::vector<double>& sn, const std::vector<double>& v) {
      double acc = 0.0;
      for (int q = 0; q < c.bpts; ++q) acc += c.bw[q] * sn[q] * v[q];
      return acc;
    };
    double forward = dot(ep2, fp1) + dot(ep1, fp2) + dot(eq2, fq1) + dot(eq1, fq2) +
                     bpair(s2, v1) + bpair(s1, v2) + bpair(s2, v1) + bpair(s1, v2);
    double backward = dot(ep1, fp2) + dot(ep2, fp1) + dot(eq1, fq2) + dot(eq2, fq1) +
                      bpair(s1, v2) + bpair(s2, v1) + bpair(s1, v2) + bpair(s2, v1);
    double scale = std::abs(dot(ep2, fp1)) + std::abs(dot(ep1, fp2)) +
                   std::abs(dot(eq2, fq1)) + std::abs(dot(eq1, fq2)) +
                   2.0 * (std::abs(bpair(s2, v1)) + std::abs(bpair(s1, v2)));
    double asym = std::abs(forward - backward) / std::max(scale, 1e-300);
    worst = std::max(worst, asym);
  }
  return worst;
}

DimensionReport dimension_check(const Mesh& mesh, int element, int r) {
  ElementCtx c = make_ctx(mesh, element, r);
  DimensionReport rep;

  // realized boundary trace spaces via weighted sampling matrices
  Eigen::MatrixXd Tp(c.bpts, c.np), Tq(c.bpts, c.nq);
  for (int q = 0; q < c.bpts; ++q) {
    double sw = std::sqrt(c.bw[q]);
    for (int i = 0; i < c.np; ++i)
      Tp(q, i) = sw * c.bp[static_cast<std::size_t>(q) * c.np + i];
    for (int i = 0; i < c.nq; ++i)
      Tq(q, i) = sw * c.bqn[static_cast<std::size_t>(q) * c.nq + i];
  }
  auto rank_of = [](const Eigen::MatrixXd& m) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    double tol = 1e-10 * svd.singularValues()(0);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > tol) ++rank;
    return rank;
  };
  rep.trace_dim_p = rank_of(Tp);
  rep.trace_dim_q = rank_of(Tq);

  // boundary pairing between realized trace samples (Lemma 4.3 shadow)
  Eigen::JacobiSVD<Eigen::MatrixXd> svp(Tp, Eigen::ComputeThinU);
  Eigen::JacobiSVD<Eigen::MatrixXd> svq(Tq, Eigen::ComputeThinU);
  Eigen::MatrixXd Up = svp.matrixU().leftCols(rep.trace_dim_p);
  Eigen::MatrixXd Uq = svq.matrixU().leftCols(rep.trace_dim_q);
  Eigen::MatrixXd pairing = Uq.transpose() * Up;  // weights already folded in
  rep.boundary_pairing_rank = rank_of(pairing);

  // relation graph: inputs (e^p, e^q, u^p, u^*) with the boundary inputs
  // constrained to the realized p-trace space
  int bp = rep.trace_dim_p;
  int nin = c.np + c.nq + 2 * bp;
  rep.flow_dim = c.np + c.nq + 2 * bp;
  Eigen::MatrixXd graph(2 * nin, nin);
  graph.setZero();
  graph.topLeftCorner(nin, nin).setIdentity();
  // unweighted p-trace basis as boundary input carrier
  Eigen::MatrixXd Up_samples = Up;
  for (int q = 0; q < c.bpts; ++q)
    Up_samples.row(q) /= std::sqrt(c.bw[q]);
  std::vector<double> epc(c.np), eqc(c.nq), u_p(c.bpts), u_star(c.bpts);
  std::vector<double> fp_rep, fq_rep, v_tr, sn_tr;
  for (int j = 0; j < nin; ++j) {
    std::fill(epc.begin(), epc.end(), 0.0);
    std::fill(eqc.begin(), eqc.end(), 0.0);
    std::fill(u_p.begin(), u_p.end(), 0.0);
    std::fill(u_star.begin(), u_star.end(), 0.0);
    if (j < c.np)
      epc[j] = 1.0;
    else if (j < c.np + c.nq)
      eqc[j - c.np] = 1.0;
    else if (j < c.np + c.nq + bp)
      for (int q = 0; q < c.bpts; ++q) u_p[q] = Up_samples(q, j - c.np - c.nq);
    else
      for (int q = 0; q < c.bpts; ++q) u_star[q] = Up_samples(q, j - c.np - c.nq - bp);
    structure_flows(c, epc, eqc, u_p, u_star, fp_rep, fq_rep);
    boundary_traces(c, epc, eqc, v_tr, sn_tr);
    // outputs projected onto the realized trace space coordinates
    Eigen::VectorXd yv(c.bpts), ys(c.bpts);
    for (int q = 0; q < c.bpts; ++q) {
      yv(q) = -v_tr[q] * std::sqrt(c.bw[q]);
      ys(q) = -sn_tr[q] * std::sqrt(c.bw[q]);
    }
    Eigen::VectorXd yp = Up.transpose() * yv;
    Eigen::VectorXd ypstar = Up.transpose() * ys;
    for (int i = 0; i < c.np; ++i) graph(nin + i, j) = fp_rep[i];
    for (int i = 0; i < c.nq; ++i) graph(nin + c.np + i, j) = fq_rep[i];
    for (int i = 0; i < bp; ++i) {
      graph(nin + c.np + c.nq + i, j) = yp(i);
      graph(nin + c.np + c.nq + bp + i, j) = ypstar(i);
    }
  }
  rep.solution_dim = rank_of(graph);
  return rep;
}

}  // namespace phdg
