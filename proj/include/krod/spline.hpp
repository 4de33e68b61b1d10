#pragma once

#include <krod/types.hpp>

#include <string>
#include <vector>

namespace krod {

/// Uniform open B-spline space on [0, L].
///
/// Interior knots are repeated (p - r) times so the basis is C^r across
/// element boundaries; the first and last knots are repeated p + 1 times.
struct SplineSpace {
    int degree = 3;
    int continuity = 1;
    int n_elements = 1;
    double length = 1.0;
    std::vector<double> knots;

    [[nodiscard]] int basis_count() const noexcept {
        return n_elements * (degree - continuity) + continuity + 1;
    }
    [[nodiscard]] double element_size() const noexcept { return length / n_elements; }
    /// Index of the element containing s (the last element owns s = L).
    [[nodiscard]] int element_of(double s) const noexcept;
    /// Index of the first basis function supported on element e.
    [[nodiscard]] int first_basis_of_element(int e) const noexcept {
        return e * (degree - continuity);
    }
    /// Greville abscissae; interpolating a linear function at these points
    /// reproduces it exactly.
    [[nodiscard]] std::vector<double> greville() const;
};

/// Build and validate a space: p >= 2, 1 <= r <= p-1, n_elements >= 1, L > 0.
/// Throws std::invalid_argument naming the offending parameter.
[[nodiscard]] SplineSpace make_space(int degree, int continuity, int n_elements, double length);

/// Values and first two derivatives of the p+1 non-zero basis functions at s.
struct BasisEval {
    int first_index = 0;
    Vector values;
    Vector d1;
    Vector d2;
};

[[nodiscard]] BasisEval evaluate_basis(const SplineSpace& space, double s);

/// Derivatives of order 0..n_derivs of the non-zero basis functions at s.
/// Row k holds the k-th derivative; columns follow first_index.
struct BasisDerivatives {
    int first_index = 0;
    Matrix ders;
};

[[nodiscard]] BasisDerivatives evaluate_basis_derivatives(const SplineSpace& space, double s,
                                                          int n_derivs);

enum class BoundarySide { Start, End };
enum class BoundaryKind { Free, Pinned, Clamped };

[[nodiscard]] std::string to_string(BoundaryKind kind);
[[nodiscard]] BoundaryKind boundary_kind_from_string(const std::string& text);

/// One linear homogeneous row: direction . phi^(order)(side) = 0.
/// For scalar (single-component) fields only direction.x() is used.
struct BoundaryConstraint {
    BoundarySide side = BoundarySide::Start;
    int order = 0;
    Vec3 direction = Vec3::UnitX();
    bool outlier = false;

    bool operator==(const BoundaryConstraint&) const = default;
};

using ConstraintSet = std::vector<BoundaryConstraint>;

/// Extra derivative orders pinned to zero at a boundary of the given kind to
/// remove the spurious highest-frequency modes of the space.
///
/// The table was obtained from the discrete axial and transverse spectra of
/// linear rods (see README): free ends pin the natural orders {2,3} (cubic
/// keeps only 3), pinned ends pin 2, clamped ends pin 4 once p >= 4.
[[nodiscard]] std::vector<int> outlier_orders(int degree, BoundaryKind kind);

/// Essential rows for a boundary of the given kind. A clamped end fixes the
/// position and the direction `director` of the tangent (the two transverse
/// components of phi' vanish), a pinned end fixes only the position.
[[nodiscard]] ConstraintSet essential_constraints(BoundarySide side, BoundaryKind kind,
                                                  const Vec3& director, int components = 3);

/// Outlier-removal rows (one per component and order) for one boundary.
[[nodiscard]] ConstraintSet outlier_constraints(int degree, BoundarySide side, BoundaryKind kind,
                                                int components = 3);

/// Dense constraint matrix A (rows x components*m) for the given rows.
[[nodiscard]] Matrix constraint_matrix(const SplineSpace& space, const ConstraintSet& constraints,
                                       int components = 3);

/// Raised when the requested constraints cannot be satisfied independently.
class ConstraintError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Constant map from reduced to full coefficients, q = C q_red.
///
/// Columns that belong to unconstrained coefficients are unit vectors, so the
/// matrix is the identity away from the boundary blocks. Every column is a
/// coefficient vector satisfying all constraint rows.
struct ExtractionMatrix {
    SparseMatrix C;
    /// For each reduced coordinate the full index whose value it carries.
    std::vector<int> kept;

    [[nodiscard]] int full_dim() const { return static_cast<int>(C.rows()); }
    [[nodiscard]] int reduced_dim() const { return static_cast<int>(C.cols()); }
    [[nodiscard]] Vector expand(const Vector& reduced) const { return C * reduced; }
    [[nodiscard]] Vector reduce(const Vector& full) const;
};

[[nodiscard]] ExtractionMatrix build_extraction(const SplineSpace& space,
                                                const ConstraintSet& constraints,
                                                int components = 3);

}  // namespace krod
