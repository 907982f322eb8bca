#include "sapg/truss.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

namespace sapg {

GroundStructure make_ground_structure(std::vector<Eigen::Vector2d> nodes,
                                      std::vector<std::pair<int, int>> bars,
                                      std::vector<int> fixed_dofs, double young_modulus) {
  GroundStructure gs;
  gs.nodes = std::move(nodes);
  gs.bars = std::move(bars);
  gs.young_modulus = young_modulus;

  const int nn = gs.node_count();
  if (nn < 2) {
    throw InvalidGeometry("ground structure: need at least 2 nodes, got " +
                          std::to_string(nn));
  }
  if (gs.bars.empty()) {
    throw InvalidGeometry("ground structure: no bars");
  }
  if (!(young_modulus > 0.0)) {
    throw InvalidArgument("ground structure: Young modulus must be positive");
  }

  std::set<std::pair<int, int>> seen;
  gs.bar_lengths.resize(gs.bar_count());
  for (int j = 0; j < gs.bar_count(); ++j) {
    auto& [a, b] = gs.bars[j];
    if (a < 0 || a >= nn || b < 0 || b >= nn) {
      throw InvalidGeometry("bar " + std::to_string(j) + ": node index out of range");
    }
    if (a == b) {
      throw InvalidGeometry("bar " + std::to_string(j) + ": connects node " +
                            std::to_string(a) + " to itself");
    }
    if (a > b) {
      std::swap(a, b);
    }
    if (!seen.insert({a, b}).second) {
      throw InvalidGeometry("bar " + std::to_string(j) + ": duplicate of bar (" +
                            std::to_string(a) + ", " + std::to_string(b) + ")");
    }
    const double l = (gs.nodes[b] - gs.nodes[a]).norm();
    if (!(l > 1e-12)) {
      throw InvalidGeometry("bar " + std::to_string(j) + ": zero length");
    }
    gs.bar_lengths(j) = l;
  }

  std::sort(fixed_dofs.begin(), fixed_dofs.end());
  fixed_dofs.erase(std::unique(fixed_dofs.begin(), fixed_dofs.end()), fixed_dofs.end());
  for (int d : fixed_dofs) {
    if (d < 0 || d >= 2 * nn) {
      throw InvalidGeometry("fixed dof " + std::to_string(d) + " out of range");
    }
  }
  gs.fixed_dofs = std::move(fixed_dofs);

  gs.free_index.assign(2 * nn, 0);
  for (int d : gs.fixed_dofs) {
    gs.free_index[d] = -1;
  }
  int next = 0;
  for (int d = 0; d < 2 * nn; ++d) {
    if (gs.free_index[d] == 0) {
      gs.free_index[d] = next++;
    }
  }
  gs.free_dof_count = next;
  if (gs.free_dof_count < 1) {
    throw InvalidGeometry("ground structure: every dof is fixed");
  }

  // Stability check: the uniform all-ones design must give a positive
  // definite stiffness matrix, otherwise the structure has a mechanism.
  ElementStiffness elements(gs);
  try {
    cholesky(elements.assemble(Eigen::VectorXd::Ones(gs.bar_count())));
  } catch (const NotPositiveDefinite&) {
    throw InvalidGeometry(
        "ground structure: kinematically unstable (singular stiffness matrix at "
        "the uniform design)");
  }
  return gs;
}

GroundStructure build_grid_ground_structure(int cols, int rows, double spacing, int level,
                                            SupportPattern support, double young_modulus) {
  if (cols < 2 || rows < 2) {
    throw InvalidGeometry("grid: need at least 2x2 nodes, got " + std::to_string(cols) +
                          "x" + std::to_string(rows));
  }
  if (!(spacing > 0.0)) {
    throw InvalidArgument("grid: spacing must be positive");
  }
  if (level < 1) {
    throw InvalidArgument("grid: connectivity level must be >= 1");
  }

  // Node (c, r) at (c * h, r * h), numbered row-major: index = r * cols + c.
  std::vector<Eigen::Vector2d> nodes;
  nodes.reserve(static_cast<std::size_t>(cols) * rows);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      nodes.emplace_back(c * spacing, r * spacing);
    }
  }

  std::vector<std::pair<int, int>> bars;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int a = r * cols + c;
      for (int dr = -level; dr <= level; ++dr) {
        for (int dc = 1; dc <= level; ++dc) {
          // Offsets with dc >= 1, plus straight-up (0, dr>0), cover each
          // direction exactly once.
          if (std::gcd(dc, std::abs(dr)) != 1) {
            continue;
          }
          const int c2 = c + dc;
          const int r2 = r + dr;
          if (c2 >= 0 && c2 < cols && r2 >= 0 && r2 < rows) {
            bars.emplace_back(a, r2 * cols + c2);
          }
        }
        if (dr >= 1 && std::gcd(0, dr) == 1 && r + dr < rows) {
          bars.emplace_back(a, (r + dr) * cols + c);
        }
      }
    }
  }

  std::vector<int> fixed;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const bool on_edge = (support == SupportPattern::LeftEdge && c == 0) ||
                           (support == SupportPattern::RightEdge && c == cols - 1) ||
                           (support == SupportPattern::BottomEdge && r == 0) ||
                           (support == SupportPattern::TopEdge && r == rows - 1);
      if (on_edge) {
        const int node = r * cols + c;
        fixed.push_back(2 * node);
        fixed.push_back(2 * node + 1);
      }
    }
  }

  return make_ground_structure(std::move(nodes), std::move(bars), std::move(fixed),
                               young_modulus);
}

ElementStiffness::ElementStiffness(const GroundStructure& gs)
    : free_dof_count_(gs.free_dof_count) {
  bars_.resize(gs.bar_count());
  for (int j = 0; j < gs.bar_count(); ++j) {
    const auto [a, b] = gs.bars[j];
    const double l = gs.bar_lengths(j);
    const Eigen::Vector2d t = (gs.nodes[b] - gs.nodes[a]) / l;

    Bar& bar = bars_[j];
    bar.axial = gs.young_modulus / l;
    const int global[4] = {2 * a, 2 * a + 1, 2 * b, 2 * b + 1};
    const double coeff[4] = {-t.x(), -t.y(), t.x(), t.y()};
    for (int i = 0; i < 4; ++i) {
      const int free = gs.free_index[global[i]];
      if (free >= 0) {
        bar.dofs[bar.count] = free;
        bar.values[bar.count] = coeff[i];
        ++bar.count;
      }
    }
  }
}

SymMatrix ElementStiffness::assemble(const Eigen::VectorXd& x) const {
  if (x.size() != bar_count()) {
    throw DimensionMismatch("assemble_stiffness: design has size " +
                            std::to_string(x.size()) + ", expected " +
                            std::to_string(bar_count()));
  }
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(free_dof_count_, free_dof_count_);
  for (int j = 0; j < bar_count(); ++j) {
    const Bar& bar = bars_[j];
    const double s = x(j) * bar.axial;
    for (int p = 0; p < bar.count; ++p) {
      for (int q = 0; q < bar.count; ++q) {
        k(bar.dofs[p], bar.dofs[q]) += s * bar.values[p] * bar.values[q];
      }
    }
  }
  return SymMatrix::from_full(k);
}

Eigen::VectorXd ElementStiffness::bar_dot(int j, const Eigen::MatrixXd& w) const {
  if (j < 0 || j >= bar_count()) {
    throw IndexOutOfRange("bar_dot: bar index " + std::to_string(j));
  }
  if (w.rows() != free_dof_count_) {
    throw DimensionMismatch("bar_dot: matrix has " + std::to_string(w.rows()) +
                            " rows, expected " + std::to_string(free_dof_count_));
  }
  const Bar& bar = bars_[j];
  Eigen::VectorXd out = Eigen::VectorXd::Zero(w.cols());
  for (int p = 0; p < bar.count; ++p) {
    out += bar.values[p] * w.row(bar.dofs[p]).transpose();
  }
  return out;
}

LoadUncertainty::LoadUncertainty(const GroundStructure& gs,
                                 const std::vector<LoadColumn>& columns) {
  if (columns.empty()) {
    throw EmptyInput("LoadUncertainty: no load columns");
  }
  const int d = gs.free_dof_count;
  if (static_cast<int>(columns.size()) > d) {
    throw InvalidArgument("LoadUncertainty: " + std::to_string(columns.size()) +
                          " scenarios exceed " + std::to_string(d) + " free dofs");
  }
  q_ = Eigen::MatrixXd::Zero(d, static_cast<int>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const LoadColumn& col = columns[c];
    if (col.node < 0 || col.node >= gs.node_count()) {
      throw IndexOutOfRange("LoadUncertainty: node " + std::to_string(col.node) +
                            " out of range");
    }
    const double norm = col.direction.norm();
    if (!(norm > 0.0)) {
      throw InvalidArgument("LoadUncertainty: zero direction at column " +
                            std::to_string(c));
    }
    const Eigen::Vector2d f = col.direction / norm * col.magnitude;
    bool touched = false;
    for (int axis = 0; axis < 2; ++axis) {
      const int free = gs.free_index[2 * col.node + axis];
      if (free >= 0) {
        q_(free, static_cast<int>(c)) = f(axis);
        touched = true;
      }
    }
    if (!touched) {
      throw InvalidGeometry("LoadUncertainty: load column " + std::to_string(c) +
                            " acts only on fixed dofs of node " + std::to_string(col.node));
    }
  }
}

TrussMatrixMap::TrussMatrixMap(std::shared_ptr<const ElementStiffness> elements,
                               Eigen::MatrixXd q)
    : elements_(std::move(elements)), q_(std::move(q)) {
  if (!elements_) {
    throw InvalidArgument("TrussMatrixMap: null element stiffness");
  }
  if (q_.rows() != elements_->free_dof_count()) {
    throw DimensionMismatch("TrussMatrixMap: Q has " + std::to_string(q_.rows()) +
                            " rows, expected " + std::to_string(elements_->free_dof_count()));
  }
  if (q_.cols() < 1) {
    throw EmptyInput("TrussMatrixMap: Q has no columns");
  }
}

int TrussMatrixMap::dimension() const { return elements_->bar_count(); }

MatrixMap::Evaluation TrussMatrixMap::evaluate(const Eigen::VectorXd& x) const {
  const SymMatrix k = elements_->assemble(x);
  const CholeskyFactor factor = cholesky(k);
  Eigen::MatrixXd w0 = chol_solve(factor, q_);
  // One iterative-refinement pass: K is often ill-conditioned (area ratios
  // up to V0 / (x_min l_j)), and the bare solve's forward error would
  // otherwise dominate the accuracy of A(x) and everything downstream.
  w0 += chol_solve(factor, Eigen::MatrixXd(q_ - k.mat() * w0));
  auto w = std::make_shared<const Eigen::MatrixXd>(std::move(w0));

  MatrixMap::Evaluation ev{SymMatrix::from_full(q_.transpose() * *w), nullptr, nullptr};

  const auto elements = elements_;
  const int n = order();
  // u^T (dA/dx_j) u = -axial_j (u^T g_j)^2 with g_j = W^T b_j.
  ev.quadratic_forms = [elements, w, n](const Eigen::MatrixXd& basis) {
    if (basis.rows() != n) {
      throw DimensionMismatch("TrussMatrixMap: basis has " + std::to_string(basis.rows()) +
                              " rows, expected " + std::to_string(n));
    }
    const int m = elements->bar_count();
    Eigen::MatrixXd d(basis.cols(), m);
    for (int j = 0; j < m; ++j) {
      const Eigen::VectorXd g = elements->bar_dot(j, *w);
      d.col(j) = -elements->bars()[j].axial *
                 (basis.transpose() * g).array().square().matrix();
    }
    return d;
  };
  ev.derivative = [elements, w, n](int j) {
    if (j < 0 || j >= elements->bar_count()) {
      throw IndexOutOfRange("TrussMatrixMap: derivative index " + std::to_string(j));
    }
    const Eigen::VectorXd g = elements->bar_dot(j, *w);
    SymMatrix da(n);
    da.add_outer(-elements->bars()[j].axial, g);
    return da;
  };
  return ev;
}

Eigen::VectorXd RobustComplianceProblem::uniform_design() const {
  const double x = feasible->volume_budget() / structure.bar_lengths.sum();
  return feasible->project(Eigen::VectorXd::Constant(bar_count(), x));
}

RobustComplianceProblem build_instance(const InstanceConfig& config) {
  RobustComplianceProblem p;
  p.structure = build_grid_ground_structure(config.cols, config.rows, config.spacing,
                                            config.connectivity, config.support,
                                            config.young_modulus);

  if (config.x_min * p.structure.bar_lengths.sum() > config.volume_budget) {
    throw InfeasibleVolumeBudget(
        "instance: x_min * total bar length = " +
        std::to_string(config.x_min * p.structure.bar_lengths.sum()) +
        " exceeds volume budget " + std::to_string(config.volume_budget));
  }

  std::vector<int> loaded = config.loaded_nodes;
  if (loaded.empty()) {
    // Middle node of the free edge opposite the supports.
    const int mid_row = config.rows / 2;
    const int mid_col = config.cols / 2;
    switch (config.support) {
      case SupportPattern::LeftEdge:
        loaded = {mid_row * config.cols + (config.cols - 1)};
        break;
      case SupportPattern::RightEdge:
        loaded = {mid_row * config.cols};
        break;
      case SupportPattern::BottomEdge:
        loaded = {(config.rows - 1) * config.cols + mid_col};
        break;
      case SupportPattern::TopEdge:
        loaded = {mid_col};
        break;
    }
  }

  const double scale = config.ellipse_full_axis ? 0.5 : 1.0;
  std::vector<LoadColumn> columns;
  columns.reserve(2 * loaded.size());
  for (int node : loaded) {
    columns.push_back({node, {1.0, 0.0}, scale * config.ellipse_horizontal});
    columns.push_back({node, {0.0, 1.0}, scale * config.ellipse_vertical});
  }

  LoadUncertainty loads(p.structure, columns);
  p.elements = std::make_shared<const ElementStiffness>(p.structure);
  p.matrix_map = std::make_shared<const TrussMatrixMap>(p.elements, loads.q());
  p.objective = std::make_shared<const SpectralLseObjective>(
      p.matrix_map, config.l_estimate, config.lprime_estimate);
  p.feasible = std::make_shared<const BoxBudgetSet>(p.structure.bar_lengths,
                                                    config.volume_budget, config.x_min);
  return p;
}

}  // namespace sapg
