#include "cgdare/geometry.hpp"

namespace cgdare {

Quadruple::Quadruple(Matrix A_, Matrix B_, Matrix C_, Matrix D_)
    : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)), D(std::move(D_)) {
    if (A.rows() != A.cols() || B.rows() != A.rows() || C.cols() != A.rows() ||
        D.rows() != C.rows() || D.cols() != B.cols()) {
        throw DimensionMismatch("Quadruple: inconsistent dimensions");
    }
}

Quadruple Quadruple::from_triple(const PopovTriple& sigma) {
    return Quadruple(sigma.A(), sigma.B(), sigma.C(), sigma.D());
}

Subspace reachable_subspace(const Matrix& A, const Matrix& B, const TolerancePolicy& tol) {
    if (A.rows() != A.cols() || B.rows() != A.rows()) {
        throw DimensionMismatch("reachable_subspace: inconsistent dimensions");
    }
    Subspace S = image_basis(B, tol);
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const Subspace grown = subspace_sum(S, image_basis(A * S.basis(), tol), tol);
        if (grown.dim() == S.dim()) break;
        S = grown;
    }
    return S;
}

Subspace unobservable_subspace(const Matrix& A, const Matrix& C, const TolerancePolicy& tol) {
    if (A.rows() != A.cols() || C.cols() != A.rows()) {
        throw DimensionMismatch("unobservable_subspace: inconsistent dimensions");
    }
    return reachable_subspace(A.transpose(), C.transpose(), tol).complement(tol);
}

KalmanForm controllability_form(const Matrix& A, const Matrix& B, const TolerancePolicy& tol) {
    const Subspace reach = reachable_subspace(A, B, tol);
    const Subspace comp = reach.complement(tol);
    const Eigen::Index n = A.rows();
    const Eigen::Index k = reach.dim();

    KalmanForm form;
    form.k = k;
    form.T.resize(n, n);
    form.T << reach.basis(), comp.basis();
    const Matrix At = form.T.transpose() * A * form.T;
    const Matrix Bt = form.T.transpose() * B;
    form.A11 = At.topLeftCorner(k, k);
    form.A12 = At.topRightCorner(k, n - k);
    form.A22 = At.bottomRightCorner(n - k, n - k);
    form.B1 = Bt.topRows(k);
    return form;
}

namespace {

// [A; C] V inside (V + 0_p) + im [B; D], as subspaces of R^{n+p}
Subspace nulling_target(const Quadruple& quad, const Subspace& V, const TolerancePolicy& tol) {
    const Eigen::Index n = quad.n();
    const Eigen::Index p = quad.p();
    Matrix embedded(n + p, V.dim());
    embedded << V.basis(), Matrix::Zero(p, V.dim());
    Matrix BD(n + p, quad.m());
    BD << quad.B, quad.D;
    return subspace_sum(Subspace(n + p, embedded), image_basis(BD, tol), tol);
}

Matrix stacked_map(const Quadruple& quad) {
    Matrix AC(quad.n() + quad.p(), quad.n());
    AC << quad.A, quad.C;
    return AC;
}

}  // namespace

bool is_output_nulling(const Quadruple& quad, const Subspace& V, const TolerancePolicy& tol) {
    if (V.ambient_dim() != quad.n()) {
        throw DimensionMismatch("is_output_nulling: subspace has wrong ambient dimension");
    }
    if (V.dim() == 0) return true;
    const Subspace target = nulling_target(quad, V, tol);
    const Subspace mapped = image_basis(stacked_map(quad) * V.basis(), tol);
    return subspace_contains(target, mapped, tol);
}

bool is_friend(const Quadruple& quad, const Subspace& V, const Matrix& F,
               const TolerancePolicy& tol) {
    if (F.rows() != quad.m() || F.cols() != quad.n()) {
        throw DimensionMismatch("is_friend: F must be m x n");
    }
    if (V.dim() == 0) return true;
    const Matrix Acl = quad.A - quad.B * F;
    const Matrix Ccl = quad.C - quad.D * F;
    const Subspace mapped = image_basis(Acl * V.basis(), tol);
    if (!subspace_contains(V, mapped, tol)) return false;
    const double scale = 1.0 + Ccl.cwiseAbs().maxCoeff();
    return (Ccl * V.basis()).cwiseAbs().maxCoeff() <= 1e-8 * scale;
}

Subspace largest_output_nulling(const Quadruple& quad, const TolerancePolicy& tol) {
    const Eigen::Index n = quad.n();
    const Matrix AC = stacked_map(quad);
    Subspace V = Subspace::full(n);
    for (Eigen::Index i = 0; i <= n; ++i) {
        const Subspace W = nulling_target(quad, V, tol);
        // next iterate: x with [A; C] x inside W
        const Matrix N = Matrix::Identity(W.ambient_dim(), W.ambient_dim()) - W.projector();
        const Subspace V_next = kernel_basis(N * AC, tol);
        if (V_next.dim() == V.dim()) break;
        V = V_next;
    }
    return V;
}

Subspace reachability_on(const Quadruple& quad, const Subspace& V, const Matrix& F,
                         const TolerancePolicy& tol) {
    if (!is_output_nulling(quad, V, tol)) {
        throw NotOutputNulling("reachability_on: V is not output-nulling");
    }
    if (!is_friend(quad, V, F, tol)) {
        throw NotAFriend("reachability_on: F is not a friend of V");
    }
    const Subspace BkerD = image_basis(quad.B * kernel_basis(quad.D, tol).basis(), tol);
    const Subspace seed = subspace_intersect(V, BkerD, tol);
    const Matrix Acl = quad.A - quad.B * F;
    // smallest Acl-invariant subspace containing the seed, by image growth
    Subspace S = seed;
    for (Eigen::Index i = 0; i < quad.n(); ++i) {
        const Subspace grown = subspace_sum(S, image_basis(Acl * S.basis(), tol), tol);
        if (grown.dim() == S.dim()) break;
        S = grown;
    }
    return S;
}

Subspace r0(const PopovTriple& sigma, const Matrix& X, const TolerancePolicy& tol) {
    const XQuantities q = x_quantities(sigma, X, tol);
    return reachable_subspace(q.A_X, sigma.B() * q.G_X, tol);
}

Matrix restriction(const Matrix& A, const Subspace& V, const TolerancePolicy& tol) {
    if (V.ambient_dim() != A.rows() || A.rows() != A.cols()) {
        throw DimensionMismatch("restriction: dimensions inconsistent");
    }
    if (V.dim() == 0) return Matrix(0, 0);
    const Matrix mapped = A * V.basis();
    const Matrix off = mapped - V.projector() * mapped;
    if (off.cwiseAbs().maxCoeff() > std::sqrt(tol.rank_rel) * (1.0 + A.cwiseAbs().maxCoeff())) {
        throw NotInvariant("restriction: subspace is not A-invariant");
    }
    return V.basis().transpose() * mapped;
}

}  // namespace cgdare
