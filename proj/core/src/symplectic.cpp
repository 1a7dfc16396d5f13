#include <modloc/symplectic.hpp>

#include <stdexcept>

namespace modloc {

SymplecticSpace::SymplecticSpace(Mat omega, double tol)
    : omega_(std::move(omega)), cond_(0) {
  if (omega_.rows() != omega_.cols() || omega_.rows() == 0)
    throw std::invalid_argument("form matrix must be square and nonempty");
  const double scale = omega_.cwiseAbs().maxCoeff();
  if (scale <= 0 ||
      (omega_ + omega_.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw std::invalid_argument("form matrix must be skew-symmetric");
  Eigen::BDCSVD<Mat> svd(omega_);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= tol * sv(0))
    throw std::invalid_argument("form matrix must be invertible");
  cond_ = sv(0) / smin;
}

SymplecticSpace SymplecticSpace::standard(int half_dim) {
  if (half_dim < 1)
    throw std::invalid_argument("half dimension must be positive");
  const int n = half_dim;
  Mat omega = Mat::Zero(2 * n, 2 * n);
  omega.topRightCorner(n, n) = Mat::Identity(n, n);
  omega.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return SymplecticSpace(std::move(omega));
}

SymplecticSubspace::SymplecticSubspace(
    std::shared_ptr<const SymplecticSpace> space, const Mat& spanning,
    double rel_tol)
    : space_(std::move(space)) {
  if (!space_) throw std::invalid_argument("null symplectic space");
  if (spanning.rows() != space_->dim())
    throw std::invalid_argument("spanning row count does not match the space");
  basis_ = orthonormal_span(spanning, rel_tol);
  if (basis_.cols() != spanning.cols())
    throw std::invalid_argument("spanning vectors are not independent");
}

Mat SymplecticSubspace::skew_gram() const {
  return basis_.transpose() * space_->omega() * basis_;
}

SymplecticRank symplectic_rank(const SymplecticSubspace& H, double rel_tol) {
  const int k = H.dim();
  if (k == 0) return {0, Mat(H.space().dim(), 0)};
  Mat G = H.skew_gram();
  Eigen::JacobiSVD<Mat> svd(G, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  int r = 0;
  while (r < k && sv(r) > rel_tol * std::max(smax, 1e-300)) ++r;
  // The restricted form is skew, so its rank is even; a threshold that
  // splits a tiny 2x2 block can report an odd count, rounded down here.
  if (r % 2 != 0) --r;
  Mat center_raw = H.basis() * svd.matrixV().rightCols(k - r);
  return {r, orthonormal_span(center_raw)};
}

boost::rational<long> gleason_measure(const SymplecticSubspace& H) {
  return {symplectic_rank(H).rank, H.space().dim()};
}

DarbouxDecomposition darboux_decompose(const SymplecticSubspace& H,
                                       double pivot_rel_tol) {
  const Mat& omega = H.space().omega();
  Mat W = H.basis();
  DarbouxDecomposition out;
  out.degenerate_pivot_count = 0;
  out.center_basis = Mat(H.space().dim(), 0);
  if (W.cols() == 0) return out;

  Mat G0 = W.transpose() * omega * W;
  const double scale = std::max(G0.cwiseAbs().maxCoeff(), 1e-300);
  const double thresh = pivot_rel_tol * scale;

  while (W.cols() >= 2) {
    Mat G = W.transpose() * omega * W;
    int pi = 0, pj = 1;
    double best = 0;
    for (int i = 0; i < G.rows(); ++i)
      for (int j = i + 1; j < G.cols(); ++j)
        if (std::abs(G(i, j)) > best) {
          best = std::abs(G(i, j));
          pi = i;
          pj = j;
        }
    if (best <= thresh) {
      // Everything that remains pairs below threshold: central by fiat.
      for (int i = 0; i < G.rows(); ++i) {
        double rowmax = 0;
        for (int j = 0; j < G.cols(); ++j)
          if (j != i) rowmax = std::max(rowmax, std::abs(G(i, j)));
        if (rowmax > 0) ++out.degenerate_pivot_count;
      }
      break;
    }
    Vec h = W.col(pi);
    Vec ht = W.col(pj) / G(pi, pj);  // sigma(h, ht) = 1
    Mat plane(W.rows(), 2);
    plane << h, ht;
    out.planes.push_back(plane);

    Mat rest(W.rows(), W.cols() - 2);
    int c = 0;
    for (int j = 0; j < W.cols(); ++j) {
      if (j == pi || j == pj) continue;
      Vec w = W.col(j);
      Vec omega_w = omega * w;
      // symplectic Gram-Schmidt step: remove the (h, ht) components
      rest.col(c++) = w + ht.dot(omega_w) * h - h.dot(omega_w) * ht;
    }
    W = orthonormal_span(rest);
  }
  if (W.cols() > 0) {
    Mat joined(W.rows(), out.center_basis.cols() + W.cols());
    joined << out.center_basis, W;
    out.center_basis = orthonormal_span(joined);
  }
  return out;
}

namespace {

void require_plane(const SymplecticSubspace& P) {
  if (P.dim() != 2 || symplectic_rank(P).rank != 2)
    throw std::invalid_argument("not a symplectic plane");
}

int intersection_dim(const SymplecticSubspace& A, const SymplecticSubspace& B,
                     double angle_tol) {
  return static_cast<int>(
      intersection_basis(A.basis(), B.basis(), A.space().dim(), angle_tol)
          .cols());
}

SymplecticSubspace plane_of(const std::shared_ptr<const SymplecticSpace>& sp,
                            const Vec& a, const Vec& b) {
  Mat m(a.size(), 2);
  m << a, b;
  return SymplecticSubspace(sp, m);
}

}  // namespace

std::vector<SymplecticSubspace> plane_chain(const SymplecticSubspace& K,
                                            const SymplecticSubspace& H,
                                            double tol) {
  require_plane(K);
  require_plane(H);
  const auto& sp = K.space_ptr();

  std::vector<SymplecticSubspace> chain;
  const int d0 = intersection_dim(K, H, 1e-8);
  if (d0 == 2) {
    chain = {K};
  } else if (d0 == 1) {
    chain = {K, H};
  } else {
    Mat C = K.basis().transpose() * sp->omega() * H.basis();
    Eigen::JacobiSVD<Mat> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double coupling = svd.singularValues()(0);
    const double scale = spectral_norm(sp->omega());
    if (coupling > 1e-10 * scale) {
      // sigma couples the planes: u in K, v in H with sigma(u, v) != 0
      Vec u = K.basis() * svd.matrixU().col(0);
      Vec v = H.basis() * svd.matrixV().col(0);
      chain = {K, plane_of(sp, u, v), H};
    } else {
      // K inside H': bridge through a shared diagonal direction
      DarbouxDecomposition dK = darboux_decompose(K);
      DarbouxDecomposition dH = darboux_decompose(H);
      if (dK.planes.size() != 1 || dH.planes.size() != 1)
        throw std::invalid_argument("not a symplectic plane");
      Vec e1 = dK.planes[0].col(0), f1 = dK.planes[0].col(1);
      Vec e2 = dH.planes[0].col(0), f2 = dH.planes[0].col(1);
      chain = {K, plane_of(sp, e1 + e2, f1), plane_of(sp, e1 + e2, f2), H};
    }
  }

  for (const auto& node : chain) require_plane(node);
  for (size_t i = 0; i + 1 < chain.size(); ++i) {
    Mat inter = intersection_basis(chain[i].basis(), chain[i + 1].basis(),
                                   sp->dim(), tol);
    if (inter.cols() != 1)
      throw std::runtime_error("plane chain adjacency is not one-dimensional");
  }
  return chain;
}

RealSubspace factorial_part(const RealSubspace& H, double rel_tol) {
  const ComplexSpace& sp = H.space();
  const int k = H.dim();
  if (k == 0) return H;
  // restricted form: G_ij = sigma(b_i, b_j) = (i b_i) . b_j
  Mat G = sp.apply_i(H.basis()).transpose() * H.basis();
  Eigen::JacobiSVD<Mat> svd(G, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  int r = 0;
  while (r < k && sv(r) > rel_tol * std::max(smax, 1e-300)) ++r;
  if (r % 2 != 0) --r;
  if (r == k) return H;
  Mat Z = orthonormal_span(H.basis() * svd.matrixV().rightCols(k - r));
  // F = {x = B c in H : Z^T x = 0}; dim F = dim H - dim Z = rank
  Mat M = Z.transpose() * H.basis();
  Eigen::JacobiSVD<Mat> msvd(M, Eigen::ComputeFullV);
  const auto& msv = msvd.singularValues();
  int mr = 0;
  while (mr < msv.size() && msv(mr) > 1e-10 * std::max(msv(0), 1e-300)) ++mr;
  Mat F = orthonormal_span(H.basis() * msvd.matrixV().rightCols(k - mr));
  if (static_cast<int>(F.cols()) != r)
    throw std::runtime_error("factorial part dimension mismatch");
  return RealSubspace(sp, std::move(F));
}

}  // namespace modloc
