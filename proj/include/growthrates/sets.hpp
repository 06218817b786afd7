#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "growthrates/linalg.hpp"

namespace growthrates {

enum class SetKind { WholeSpace, NonnegOrthant, Box, Polyhedron, ProductCone };

struct ConeSegment {
  enum class Kind { NonnegOrthant, Free };
  Kind kind;
  std::size_t len;
};

// Exact polyhedral projection cap: active-set enumeration costs 2^rows.
inline constexpr std::size_t kMaxPolyhedronRows = 25;

// Exact Euclidean projection onto {C x <= d, A_eq x = b_eq} by enumerating
// active-constraint subsets. Each subset's equality-constrained least
// distance problem is solved through an affine projector built once, so the
// object is cheap to reuse across many points.
class PolyhedralProjector {
 public:
  PolyhedralProjector(Matrix c, Vector d, Matrix a_eq, Vector b_eq);

  Vector project(const Vector& x) const;
  bool contains(const Vector& x, double tol = 1e-9) const;
  std::size_t dim() const { return dim_; }

  const Matrix& ineq_matrix() const { return c_; }
  const Vector& ineq_rhs() const { return d_; }
  const Matrix& eq_matrix() const { return a_eq_; }
  const Vector& eq_rhs() const { return b_eq_; }

 private:
  std::size_t dim_;
  Matrix c_;
  Vector d_;
  Matrix a_eq_;
  Vector b_eq_;
  struct Candidate {
    std::vector<std::size_t> active;  // inequality rows treated as equalities
    std::optional<AffineProjector> projector;  // nullopt = unconstrained subset
  };
  std::vector<Candidate> candidates_;

  void verify_kkt(const Vector& x, const Vector& z, double tol) const;
};

class FeasibleSet {
 public:
  FeasibleSet() = default;  // whole space of dimension 0; assign before use

  static FeasibleSet whole_space(std::size_t dim);
  static FeasibleSet nonneg_orthant(std::size_t dim);
  static FeasibleSet box(Vector lower, Vector upper);
  static FeasibleSet polyhedron(Matrix c, Vector d, Matrix a_eq, Vector b_eq);
  static FeasibleSet product_cone(std::vector<ConeSegment> segments);

  SetKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

  Vector project(const Vector& x) const;
  bool contains(const Vector& x, double tol = 1e-9) const;

  // Inequality description C x <= d of the set (empty C for the whole
  // space; polyhedron equalities fold into +- row pairs). Used to assemble
  // optimal-set polyhedra and Hoffman constants.
  std::pair<Matrix, Vector> inequality_form() const;

  // Polyhedron data when kind() == Polyhedron.
  const PolyhedralProjector& polyhedron_data() const;

  // Per-coordinate interval [lo_i, hi_i] when the set is separable
  // (everything except Polyhedron); +-inf marks an unbounded side.
  std::pair<Vector, Vector> coordinate_bounds() const;

  const std::vector<ConeSegment>& segments() const { return segments_; }

 private:
  SetKind kind_ = SetKind::WholeSpace;
  std::size_t dim_ = 0;
  Vector lower_, upper_;  // Box
  std::vector<ConeSegment> segments_;
  std::shared_ptr<const PolyhedralProjector> poly_;
};

// One-shot exact projection onto {C x <= d, A_eq x = b_eq}.
Vector project_polyhedron(const Matrix& c, const Vector& d, const Matrix& a_eq,
                          const Vector& b_eq, const Vector& x);

}  // namespace growthrates
