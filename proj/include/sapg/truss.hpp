#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sapg/feasible_set.hpp"
#include "sapg/linalg.hpp"
#include "sapg/smoothing.hpp"

namespace sapg {

/// Planar pin-jointed ground structure: node coordinates, candidate bars as
/// node-index pairs, and the set of support-constrained global dofs
/// (dof 2*node for x, 2*node + 1 for y).
struct GroundStructure {
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::pair<int, int>> bars;
  std::vector<int> fixed_dofs;
  double young_modulus = 2.0e11;

  Eigen::VectorXd bar_lengths;    // filled by make_ground_structure
  std::vector<int> free_index;    // global dof -> free dof, -1 when fixed
  int free_dof_count = 0;

  int node_count() const { return static_cast<int>(nodes.size()); }
  int bar_count() const { return static_cast<int>(bars.size()); }
};

/// Validates and completes a ground structure: computes bar lengths, the
/// free-dof numbering, and rejects degenerate geometry (zero-length or
/// duplicate bars, out-of-range indices, kinematically unstable supports).
GroundStructure make_ground_structure(std::vector<Eigen::Vector2d> nodes,
                                      std::vector<std::pair<int, int>> bars,
                                      std::vector<int> fixed_dofs,
                                      double young_modulus = 2.0e11);

enum class SupportPattern { LeftEdge, RightEdge, BottomEdge, TopEdge };

/// Regular cols x rows node grid with spacing h, connected by every bar
/// whose column/row offsets (dc, dr) satisfy max(|dc|, |dr|) <= level and
/// gcd(|dc|, |dr|) = 1; the gcd filter drops bars that would lie on top of
/// shorter collinear ones. Support nodes are fixed in both dofs.
GroundStructure build_grid_ground_structure(int cols, int rows, double spacing,
                                            int level = 1,
                                            SupportPattern support = SupportPattern::LeftEdge,
                                            double young_modulus = 2.0e11);

/// Per-bar data for stiffness assembly, with the fixed dofs already removed:
/// K(x) = sum_j x_j * axial_j * b_j b_j^T where axial_j = E / l_j and b_j
/// holds the direction cosines at the bar's free dofs.
class ElementStiffness {
 public:
  struct Bar {
    int dofs[4];
    double values[4];
    int count = 0;     // live entries in dofs/values
    double axial = 0;  // E / l_j
  };

  explicit ElementStiffness(const GroundStructure& gs);

  int bar_count() const { return static_cast<int>(bars_.size()); }
  int free_dof_count() const { return free_dof_count_; }
  const std::vector<Bar>& bars() const { return bars_; }

  SymMatrix assemble(const Eigen::VectorXd& x) const;

  /// Sparse product b_j^T w for the columns of w.
  Eigen::VectorXd bar_dot(int j, const Eigen::MatrixXd& w) const;

 private:
  std::vector<Bar> bars_;
  int free_dof_count_;
};

inline SymMatrix assemble_stiffness(const ElementStiffness& elements, const Eigen::VectorXd& x) {
  return elements.assemble(x);
}

/// One column of the load scenario matrix: a unit direction at a node,
/// scaled by a magnitude.
struct LoadColumn {
  int node = 0;
  Eigen::Vector2d direction = Eigen::Vector2d::Zero();
  double magnitude = 0.0;
};

/// Load scenario matrix Q (free dofs x scenarios). The uncertainty set is
/// the ellipsoid { Q e : ||e|| <= 1 }, so worst-case compliance over it is
/// lambda_max(Q^T K(x)^{-1} Q).
class LoadUncertainty {
 public:
  LoadUncertainty(const GroundStructure& gs, const std::vector<LoadColumn>& columns);

  const Eigen::MatrixXd& q() const { return q_; }
  int scenario_count() const { return static_cast<int>(q_.cols()); }

 private:
  Eigen::MatrixXd q_;
};

/// A(x) = Q^T K(x)^{-1} Q as a MatrixMap. Evaluation factorizes K(x) once
/// and shares W = K(x)^{-1} Q with the derivative closures; with
/// g_j = W^T b_j the derivative quadratic forms are
/// u^T (dA/dx_j) u = -axial_j (u^T g_j)^2.
class TrussMatrixMap final : public MatrixMap {
 public:
  TrussMatrixMap(std::shared_ptr<const ElementStiffness> elements, Eigen::MatrixXd q);

  int order() const override { return static_cast<int>(q_.cols()); }
  int dimension() const override;
  Evaluation evaluate(const Eigen::VectorXd& x) const override;

 private:
  std::shared_ptr<const ElementStiffness> elements_;
  Eigen::MatrixXd q_;
};

inline SymMatrix eval_A(const TrussMatrixMap& map, const Eigen::VectorXd& x) {
  return map.eval(x);
}

inline SymMatrix eval_dA(const TrussMatrixMap& map, const Eigen::VectorXd& x, int j) {
  return map.evaluate(x).derivative(j);
}

/// Grid, load, budget and smoothing parameters of one robust-compliance
/// instance. Loads are a pair of orthogonal scenario columns per loaded
/// node, spanning an uncertainty ellipse; `ellipse_full_axis` says whether
/// the two magnitudes are full axis lengths (halved to get semi-axes) or
/// semi-axes already. An empty `loaded_nodes` means the middle node of the
/// free edge opposite the supports.
struct InstanceConfig {
  int cols = 9;
  int rows = 3;
  double spacing = 1.0;
  int connectivity = 1;
  SupportPattern support = SupportPattern::LeftEdge;
  double young_modulus = 2.0e11;
  std::vector<int> loaded_nodes;
  double ellipse_horizontal = 2.0e5;
  double ellipse_vertical = 2.78e5;
  bool ellipse_full_axis = true;
  double volume_budget = 0.1;
  double x_min = 1.0e-8;
  double l_estimate = 1.0e5;
  double lprime_estimate = 0.0;
};

/// One assembled robust-compliance problem: minimize the worst-case
/// compliance lambda_max(Q^T K(x)^{-1} Q) over the volume-budget set.
struct RobustComplianceProblem {
  GroundStructure structure;
  std::shared_ptr<const ElementStiffness> elements;
  std::shared_ptr<const TrussMatrixMap> matrix_map;
  std::shared_ptr<const SpectralLseObjective> objective;
  std::shared_ptr<const BoxBudgetSet> feasible;

  int bar_count() const { return structure.bar_count(); }
  int scenario_count() const { return matrix_map->order(); }

  /// Design spreading the budget uniformly: x_j = V0 / sum_k l_k.
  Eigen::VectorXd uniform_design() const;
};

RobustComplianceProblem build_instance(const InstanceConfig& config);

}  // namespace sapg
