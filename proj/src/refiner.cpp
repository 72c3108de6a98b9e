#include "dentseg/refiner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "dentseg/maxflow.hpp"

namespace dentseg {

namespace {

constexpr double kProbFloor = 1e-12;

LabelField argmax_labels(const Eigen::MatrixXd& unary) {
  LabelField labels(unary.rows());
  for (Eigen::Index i = 0; i < unary.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
      if (unary(i, c) < unary(i, best)) best = c;
    }
    labels[i] = best;
  }
  return labels;
}

}  // namespace

MrfProblem build_mrf(const ProbabilityField& prob, const TriangleMesh& mesh,
                     const CellGeometry& geometry, const RefinerConfig& config) {
  const int n = mesh.cell_count();
  if (prob.cell_count() != n) {
    throw std::invalid_argument("refine: probability field has " +
                                std::to_string(prob.cell_count()) + " cells, mesh has " +
                                std::to_string(n));
  }
  if (static_cast<int>(geometry.normals.size()) != n) {
    throw std::invalid_argument("refine: geometry does not match mesh");
  }
  if (config.lambda < 0) throw std::invalid_argument("refine: lambda must be >= 0");
  if (config.sigma <= 0) throw std::invalid_argument("refine: sigma must be > 0");

  MrfProblem problem;
  problem.unary.resize(n, kNumClasses);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < kNumClasses; ++c) {
      problem.unary(i, c) = -std::log(std::max(prob.matrix(i, c), kProbFloor));
    }
    problem.unary.row(i).array() -= problem.unary.row(i).minCoeff();
  }

  // undirected mesh edge -> incident faces, in face order
  std::map<std::pair<int, int>, std::vector<int>> edge_faces;
  for (int f = 0; f < n; ++f) {
    const auto& face = mesh.faces[f];
    for (int e = 0; e < 3; ++e) {
      int a = face[e], b = face[(e + 1) % 3];
      if (a > b) std::swap(a, b);
      edge_faces[{a, b}].push_back(f);
    }
  }

  std::map<std::pair<int, int>, double> weights;
  for (const auto& [edge, faces] : edge_faces) {
    for (std::size_t p = 0; p < faces.size(); ++p) {
      for (std::size_t q = p + 1; q < faces.size(); ++q) {
        int a = faces[p], b = faces[q];
        if (a > b) std::swap(a, b);
        const double cosine =
            std::clamp(geometry.normals[a].dot(geometry.normals[b]), -1.0, 1.0);
        weights.emplace(std::make_pair(a, b), std::exp(-std::acos(cosine) / config.sigma));
      }
    }
  }
  problem.edges.reserve(weights.size());
  for (const auto& [pair, w] : weights) {
    problem.edges.push_back({pair.first, pair.second, w});
  }
  return problem;
}

double mrf_energy(const MrfProblem& problem, const LabelField& labels, double lambda) {
  const int n = problem.cell_count();
  if (static_cast<int>(labels.size()) != n) {
    throw std::invalid_argument("mrf_energy: labeling does not match problem size");
  }
  double energy = 0;
  for (int i = 0; i < n; ++i) energy += problem.unary(i, labels[i]);
  for (const auto& e : problem.edges) {
    if (labels[e.a] != labels[e.b]) energy += lambda * e.weight;
  }
  return energy;
}

LabelField solve_mrf(const MrfProblem& problem, double lambda) {
  if (lambda < 0) throw std::invalid_argument("solve_mrf: lambda must be >= 0");
  const int n = problem.cell_count();
  LabelField labels = argmax_labels(problem.unary);
  if (lambda == 0 || n == 0) return labels;

  double energy = mrf_energy(problem, labels, lambda);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int alpha = 0; alpha < kNumClasses; ++alpha) {
      // binary subproblem: value 0 keeps the current label, 1 switches to alpha
      MaxFlowGraph graph(n);
      for (int i = 0; i < n; ++i) {
        graph.add_unary(i, problem.unary(i, labels[i]), problem.unary(i, alpha));
      }
      for (const auto& e : problem.edges) {
        const double a_cost = labels[e.a] != labels[e.b] ? lambda * e.weight : 0.0;
        const double b_cost = labels[e.a] != alpha ? lambda * e.weight : 0.0;
        const double c_cost = alpha != labels[e.b] ? lambda * e.weight : 0.0;
        // Potts is metric, so b + c - a >= d = 0; decompose into unary shifts
        // plus one submodular arc.
        graph.add_unary(e.a, 0.0, c_cost - a_cost);
        graph.add_unary(e.b, 0.0, -c_cost);
        graph.add_edge_01(e.a, e.b, b_cost + c_cost - a_cost);
      }
      graph.solve();

      LabelField candidate = labels;
      for (int i = 0; i < n; ++i) {
        if (graph.side_of(i)) candidate[i] = alpha;
      }
      const double candidate_energy = mrf_energy(problem, candidate, lambda);
      if (candidate_energy < energy) {
        labels = std::move(candidate);
        energy = candidate_energy;
        improved = true;
      }
    }
  }
  return labels;
}

LabelField refine(const ProbabilityField& prob, const TriangleMesh& mesh,
                  const CellGeometry& geometry, const RefinerConfig& config) {
  const MrfProblem problem = build_mrf(prob, mesh, geometry, config);
  return solve_mrf(problem, config.lambda);
}

}  // namespace dentseg
