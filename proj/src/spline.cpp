#include <krod/spline.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace krod {

int SplineSpace::element_of(double s) const noexcept {
    const double h = element_size();
    int e = static_cast<int>(std::floor(s / h));
    return std::clamp(e, 0, n_elements - 1);
}

std::vector<double> SplineSpace::greville() const {
    const int m = basis_count();
    std::vector<double> g(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        double sum = 0.0;
        for (int k = 1; k <= degree; ++k) sum += knots[static_cast<std::size_t>(i + k)];
        g[static_cast<std::size_t>(i)] = sum / degree;
    }
    return g;
}

SplineSpace make_space(int degree, int continuity, int n_elements, double length) {
    if (degree < 2) throw std::invalid_argument("degree must be >= 2");
    if (continuity < 1 || continuity > degree - 1)
        throw std::invalid_argument("continuity must satisfy 1 <= r <= p-1");
    if (n_elements < 1) throw std::invalid_argument("n_elements must be >= 1");
    if (!(length > 0.0) || !std::isfinite(length)) throw std::invalid_argument("length must be > 0");

    SplineSpace space;
    space.degree = degree;
    space.continuity = continuity;
    space.n_elements = n_elements;
    space.length = length;
    auto& t = space.knots;
    t.assign(static_cast<std::size_t>(degree + 1), 0.0);
    for (int e = 1; e < n_elements; ++e) {
        const double s = length * static_cast<double>(e) / n_elements;
        for (int k = 0; k < degree - continuity; ++k) t.push_back(s);
    }
    for (int k = 0; k <= degree; ++k) t.push_back(length);
    return space;
}

namespace {

// Knot span index k with t_k <= s < t_{k+1}; the right end belongs to the
// last non-empty span.
int find_span(const SplineSpace& space, double s) {
    const int p = space.degree;
    const int n = space.basis_count() - 1;
    const auto& t = space.knots;
    if (s >= t[static_cast<std::size_t>(n + 1)]) return n;
    if (s <= t[static_cast<std::size_t>(p)]) return p;
    auto it = std::upper_bound(t.begin() + p, t.begin() + n + 1, s);
    return static_cast<int>(std::distance(t.begin(), it)) - 1;
}

}  // namespace

BasisDerivatives evaluate_basis_derivatives(const SplineSpace& space, double s, int n_derivs) {
    const int p = space.degree;
    const auto& U = space.knots;
    const int span = find_span(space, s);
    const int nd = std::min(n_derivs, p);

    // Cox-de Boor triangle with the standard derivative recursion.
    Matrix ndu(p + 1, p + 1);
    Vector left(p + 1), right(p + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left(j) = s - U[static_cast<std::size_t>(span + 1 - j)];
        right(j) = U[static_cast<std::size_t>(span + j)] - s;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right(r + 1) + left(j - r);
            const double temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right(r + 1) * temp;
            saved = left(j - r) * temp;
        }
        ndu(j, j) = saved;
    }

    BasisDerivatives out;
    out.first_index = span - p;
    out.ders = Matrix::Zero(n_derivs + 1, p + 1);
    for (int j = 0; j <= p; ++j) out.ders(0, j) = ndu(j, p);

    Matrix a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= nd; ++k) {
            double d = 0.0;
            const int rk = r - k, pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            out.ders(k, r) = d;
            std::swap(s1, s2);
        }
    }
    double factor = p;
    for (int k = 1; k <= nd; ++k) {
        out.ders.row(k) *= factor;
        factor *= (p - k);
    }
    return out;
}

BasisEval evaluate_basis(const SplineSpace& space, double s) {
    const BasisDerivatives bd = evaluate_basis_derivatives(space, s, 2);
    BasisEval out;
    out.first_index = bd.first_index;
    out.values = bd.ders.row(0).transpose();
    out.d1 = bd.ders.row(1).transpose();
    out.d2 = bd.ders.row(2).transpose();
    return out;
}

std::string to_string(BoundaryKind kind) {
    switch (kind) {
        case BoundaryKind::Free: return "free";
        case BoundaryKind::Pinned: return "pinned";
        case BoundaryKind::Clamped: return "clamped";
    }
    return "free";
}

BoundaryKind boundary_kind_from_string(const std::string& text) {
    if (text == "free") return BoundaryKind::Free;
    if (text == "pinned") return BoundaryKind::Pinned;
    if (text == "clamped") return BoundaryKind::Clamped;
    throw std::invalid_argument("unknown boundary kind '" + text + "'");
}

std::vector<int> outlier_orders(int degree, BoundaryKind kind) {
    switch (kind) {
        case BoundaryKind::Free:
            if (degree == 2) return {2};
            if (degree == 3) return {3};
            return {2, 3};
        case BoundaryKind::Pinned:
            if (degree == 2) return {};
            return {2};
        case BoundaryKind::Clamped:
            if (degree <= 3) return {};
            return {4};
    }
    return {};
}

namespace {

void transverse_basis(const Vec3& director, Vec3& t1, Vec3& t2) {
    const Vec3 d = director.normalized();
    // Pick the coordinate axis least aligned with d to seed the frame.
    Eigen::Index k = 0;
    d.cwiseAbs().minCoeff(&k);
    Vec3 seed = Vec3::Zero();
    seed(k) = 1.0;
    t1 = (seed - seed.dot(d) * d).normalized();
    t2 = d.cross(t1);
    // Snap round-off so axis-aligned directors give exact unit rows.
    for (Vec3* t : {&t1, &t2})
        for (int i = 0; i < 3; ++i)
            if (std::abs((*t)(i)) < 1e-15) (*t)(i) = 0.0;
}

}  // namespace

ConstraintSet essential_constraints(BoundarySide side, BoundaryKind kind, const Vec3& director,
                                    int components) {
    ConstraintSet rows;
    if (kind == BoundaryKind::Free) return rows;
    if (components == 1) {
        rows.push_back({side, 0, Vec3::UnitX(), false});
        if (kind == BoundaryKind::Clamped) rows.push_back({side, 1, Vec3::UnitX(), false});
        return rows;
    }
    for (int c = 0; c < 3; ++c) rows.push_back({side, 0, Vec3::Unit(c), false});
    if (kind == BoundaryKind::Clamped) {
        Vec3 t1, t2;
        transverse_basis(director, t1, t2);
        rows.push_back({side, 1, t1, false});
        rows.push_back({side, 1, t2, false});
    }
    return rows;
}

ConstraintSet outlier_constraints(int degree, BoundarySide side, BoundaryKind kind,
                                  int components) {
    ConstraintSet rows;
    for (int order : outlier_orders(degree, kind)) {
        if (components == 1) {
            rows.push_back({side, order, Vec3::UnitX(), true});
        } else {
            for (int c = 0; c < 3; ++c) rows.push_back({side, order, Vec3::Unit(c), true});
        }
    }
    return rows;
}

Matrix constraint_matrix(const SplineSpace& space, const ConstraintSet& constraints,
                         int components) {
    const int m = space.basis_count();
    Matrix A = Matrix::Zero(static_cast<Eigen::Index>(constraints.size()), components * m);
    for (std::size_t r = 0; r < constraints.size(); ++r) {
        const auto& row = constraints[r];
        if (row.order < 0 || row.order > space.degree)
            throw ConstraintError("constraint order " + std::to_string(row.order) +
                                  " is not representable in a degree-" +
                                  std::to_string(space.degree) + " space");
        const double s = row.side == BoundarySide::Start ? 0.0 : space.length;
        const BasisDerivatives bd = evaluate_basis_derivatives(space, s, row.order);
        for (int a = 0; a <= space.degree; ++a) {
            const double v = bd.ders(row.order, a);
            const int i = bd.first_index + a;
            for (int c = 0; c < components; ++c)
                A(static_cast<Eigen::Index>(r), components * i + c) = v * row.direction(c);
        }
        const double scale = A.row(static_cast<Eigen::Index>(r)).cwiseAbs().maxCoeff();
        if (scale == 0.0) throw ConstraintError("constraint row is identically zero");
        A.row(static_cast<Eigen::Index>(r)) /= scale;
    }
    return A;
}

Vector ExtractionMatrix::reduce(const Vector& full) const {
    Vector out(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t j = 0; j < kept.size(); ++j) out(static_cast<Eigen::Index>(j)) = full(kept[j]);
    return out;
}

ExtractionMatrix build_extraction(const SplineSpace& space, const ConstraintSet& constraints,
                                  int components) {
    const int n = components * space.basis_count();
    const Matrix A = constraint_matrix(space, constraints, components);
    const int n_rows = static_cast<int>(A.rows());

    // Group rows that share coefficients; each group yields one diagonal block.
    std::vector<int> parent(static_cast<std::size_t>(n_rows));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
        return x;
    };
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    for (int r = 0; r < n_rows; ++r) {
        for (int j = 0; j < n; ++j) {
            if (A(r, j) == 0.0) continue;
            int& o = owner[static_cast<std::size_t>(j)];
            if (o < 0) {
                o = r;
            } else {
                parent[static_cast<std::size_t>(find(r))] = find(o);
            }
        }
    }

    std::vector<int> pivot_of_col(static_cast<std::size_t>(n), -1);
    // Dependent coefficient -> (free column, weight) contributions.
    std::vector<std::vector<std::pair<int, double>>> dependents(static_cast<std::size_t>(n));

    for (int root = 0; root < n_rows; ++root) {
        if (find(root) != root) continue;
        std::vector<int> rows;
        for (int r = 0; r < n_rows; ++r)
            if (find(r) == root) rows.push_back(r);
        std::vector<int> cols;
        for (int j = 0; j < n; ++j)
            for (int r : rows)
                if (A(r, j) != 0.0) {
                    cols.push_back(j);
                    break;
                }
        // Eliminate coefficients closest to the constrained boundary first.
        bool at_end = true;
        for (int r : rows)
            if (constraints[static_cast<std::size_t>(r)].side == BoundarySide::Start) at_end = false;
        if (at_end) std::reverse(cols.begin(), cols.end());

        Matrix B(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b)
                B(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = A(rows[a], cols[b]);

        // Reduced row echelon form with row pivoting, columns in preference order.
        const double tol = 1e-10;
        std::vector<int> pivot_cols;
        Eigen::Index next = 0;
        for (Eigen::Index b = 0; b < B.cols() && next < B.rows(); ++b) {
            Eigen::Index best = next;
            for (Eigen::Index a = next; a < B.rows(); ++a)
                if (std::abs(B(a, b)) > std::abs(B(best, b))) best = a;
            if (std::abs(B(best, b)) <= tol) continue;
            B.row(next).swap(B.row(best));
            B.row(next) /= B(next, b);
            for (Eigen::Index a = 0; a < B.rows(); ++a)
                if (a != next && B(a, b) != 0.0) B.row(a) -= B(a, b) * B.row(next);
            pivot_cols.push_back(static_cast<int>(b));
            ++next;
        }
        if (next < B.rows())
            throw ConstraintError("boundary constraints are linearly dependent or over-constrain "
                                  "the space (rank " + std::to_string(next) + " of " +
                                  std::to_string(B.rows()) + " rows)");
        std::vector<bool> is_pivot(cols.size(), false);
        for (int b : pivot_cols) is_pivot[static_cast<std::size_t>(b)] = true;
        for (std::size_t k = 0; k < pivot_cols.size(); ++k) {
            const int pc = cols[static_cast<std::size_t>(pivot_cols[k])];
            pivot_of_col[static_cast<std::size_t>(pc)] = static_cast<int>(k);
            for (std::size_t b = 0; b < cols.size(); ++b) {
                if (is_pivot[b]) continue;
                const double w = -B(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(b));
                if (w != 0.0) dependents[static_cast<std::size_t>(cols[b])].push_back({pc, w});
            }
        }
    }

    ExtractionMatrix ex;
    std::vector<Triplet> trips;
    for (int j = 0; j < n; ++j) {
        if (pivot_of_col[static_cast<std::size_t>(j)] >= 0) continue;
        const int col = static_cast<int>(ex.kept.size());
        ex.kept.push_back(j);
        trips.emplace_back(j, col, 1.0);
        for (const auto& [row, w] : dependents[static_cast<std::size_t>(j)]) trips.emplace_back(row, col, w);
    }
    ex.C.resize(n, static_cast<Eigen::Index>(ex.kept.size()));
    ex.C.setFromTriplets(trips.begin(), trips.end());
    ex.C.makeCompressed();
    return ex;
}

}  // namespace krod
