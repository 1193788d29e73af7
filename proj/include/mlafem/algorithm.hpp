#ifndef MLAFEM_ALGORITHM_HPP
#define MLAFEM_ALGORITHM_HPP

#include "assembly.hpp"
#include "cg.hpp"
#include "dense.hpp"
#include "eigenpair.hpp"
#include "eigensolver.hpp"
#include "errors.hpp"
#include "estimator.hpp"
#include "marking.hpp"
#include "mesh.hpp"
#include "problem.hpp"
#include "quadrature.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mlafem {

struct AdaptiveConfig {
  double theta = 0.4;
  int max_iterations = 20;
  long max_dofs = 200000;
  int num_eigenpairs = 1;
  double linear_tol = 1e-10;
  double eig_tol = 1e-8;

  void validate() const {
    if (!(theta > 0.0 && theta < 1.0)) throw ConfigurationError("theta must lie in (0,1)");
    if (max_iterations < 0) throw ConfigurationError("max_iterations must be >= 0");
    if (max_dofs < 1) throw ConfigurationError("max_dofs must be positive");
    if (num_eigenpairs < 1) throw ConfigurationError("number of eigenpairs must be >= 1");
    if (!(linear_tol > 0.0) || !(eig_tol > 0.0)) throw ConfigurationError("tolerances must be positive");
  }
};

/// Wall-clock seconds per phase of one level.
struct PhaseTimes {
  double solve = 0.0;    // assembly and linear solves
  double eig = 0.0;      // eigenvalue solves (sparse, or projected dense)
  double estimate = 0.0;
  double mark = 0.0;
  double refine = 0.0;
};

struct LevelRecord {
  int level = 0;
  int dofs = 0;
  int elements = 0;
  std::vector<double> eigenvalues;
  std::vector<double> eta;    // eta_h(u_i, Omega) per eigenpair
  std::vector<double> errors; // |lambda_i - reference|, NaN without reference
  double osc = 0.0;           // oscillation of the element residuals, summed over pairs
  PhaseTimes times;
  OpCounters work;
  int dropped_columns = 0;
  int max_generation = 0;
};

/// Called once per level with the level's mesh, its discrete functions (full
/// vertex vectors) and the indicator field used for marking.
using LevelObserver =
    std::function<void(const LevelRecord&, const Mesh&, std::span<const Vector>, const IndicatorField&)>;

struct AdaptiveResult {
  std::vector<LevelRecord> levels;
  Mesh mesh;      // last mesh that was solved on
  EigenSet pairs; // eigenpairs on `mesh`, full vertex vectors
};

namespace detail {

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

struct LevelSystem {
  SparseMatrix k; // reduced to free dofs
  SparseMatrix m;
};

inline LevelSystem assemble_reduced(const Mesh& mesh, const ProblemDef& problem) {
  return {apply_dirichlet(assemble_stiffness(mesh, problem), mesh), apply_dirichlet(assemble_mass(mesh), mesh)};
}

inline EigenSet expand_pairs(const EigenSet& reduced, const Mesh& mesh) {
  EigenSet out;
  for (const auto& p : reduced.pairs) out.pairs.push_back({p.lambda, expand_dirichlet(p.u, mesh)});
  return out;
}

inline EigenSet coarse_solve(const Mesh& mesh, const ProblemDef& problem, const AdaptiveConfig& cfg, OpCounters& work,
                             PhaseTimes& times) {
  Stopwatch sw;
  const LevelSystem sys = assemble_reduced(mesh, problem);
  times.solve += sw.seconds();
  Stopwatch se;
  SparseEigenOptions opt;
  opt.tol = cfg.eig_tol;
  opt.linear_tol = cfg.linear_tol;
  const EigenSet red = sparse_smallest_eigs(sys.k, sys.m, cfg.num_eigenpairs, opt, {}, &work);
  times.eig += se.seconds();
  return expand_pairs(red, mesh);
}

// Reorders and re-signs `next` so that pair i best matches the i-th previous
// eigenvector (prolonged to the new mesh) in the mass inner product.
inline void track_pairs(EigenSet& next, std::span<const Vector> previous_reduced, std::span<const Vector> next_reduced,
                        const SparseMatrix& m) {
  const std::size_t q = next.size();
  if (previous_reduced.size() != q) return;
  std::vector<std::vector<double>> overlap(q, std::vector<double>(q));
  for (std::size_t i = 0; i < q; ++i) {
    const Vector mp = m * previous_reduced[i];
    for (std::size_t j = 0; j < q; ++j) overlap[i][j] = dot(mp, next_reduced[j]);
  }
  std::vector<int> slot_of(q, -1);
  std::vector<char> used(q, 0);
  for (std::size_t round = 0; round < q; ++round) {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < q; ++i) {
      if (slot_of[i] >= 0) continue;
      for (std::size_t j = 0; j < q; ++j) {
        if (used[j]) continue;
        if (std::abs(overlap[i][j]) > best) {
          best = std::abs(overlap[i][j]);
          bi = i;
          bj = j;
        }
      }
    }
    slot_of[bi] = static_cast<int>(bj);
    used[bj] = 1;
  }
  EigenSet ordered;
  for (std::size_t i = 0; i < q; ++i) {
    EigenPair p = next.pairs[slot_of[i]];
    if (overlap[i][slot_of[i]] < 0) scale(-1.0, p.u);
    ordered.pairs.push_back(std::move(p));
  }
  next = std::move(ordered);
}

// Estimates every pair, fills the record and returns the summed field.
inline IndicatorField estimate(const Mesh& mesh, const ProblemDef& problem, const EigenSet& pairs, LevelRecord& rec) {
  Stopwatch sw;
  IndicatorField sum;
  double osc_sq = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const IndicatorField f = eigen_indicators(mesh, problem, pairs[i]);
    rec.eta.push_back(f.eta());
    sum += f;
    osc_sq += oscillation(mesh, eigen_residual(mesh, problem, pairs[i]), 1).total;
    rec.eigenvalues.push_back(pairs[i].lambda);
    const auto ref = problem.reference(i);
    rec.errors.push_back(ref ? std::abs(pairs[i].lambda - *ref) : std::numeric_limits<double>::quiet_NaN());
  }
  rec.osc = std::sqrt(osc_sq);
  rec.times.estimate += sw.seconds();
  return sum;
}

// Coarse basis restricted to free dofs: rows are fine free dofs, columns coarse free dofs.
inline SparseMatrix restricted_prolongation(const Mesh& coarse, const Mesh& fine) {
  const SparseMatrix p = prolongation(coarse, fine);
  std::vector<int> coarse_col(static_cast<std::size_t>(coarse.num_vertices()), -1);
  for (std::size_t k = 0; k < coarse.free_dofs().size(); ++k) coarse_col[coarse.free_dofs()[k]] = static_cast<int>(k);
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < fine.free_dofs().size(); ++r) {
    const int row = fine.free_dofs()[r];
    const auto cols = p.row_columns(row);
    const auto vals = p.row_values(row);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (coarse_col[cols[k]] >= 0) t.push_back({static_cast<int>(r), coarse_col[cols[k]], vals[k]});
    }
  }
  return SparseMatrix::from_triplets(fine.num_free_dofs(), coarse.num_free_dofs(), std::move(t));
}

// B^T A B for sparse A (n x n) and sparse B (n x c).
inline DenseMatrix project(const SparseMatrix& a, const SparseMatrix& b) {
  DenseMatrix out(b.cols(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    const auto bi_cols = b.row_columns(i);
    const auto bi_vals = b.row_values(i);
    if (bi_cols.empty()) continue;
    const auto acols = a.row_columns(i);
    const auto avals = a.row_values(i);
    for (std::size_t k = 0; k < acols.size(); ++k) {
      const auto bj_cols = b.row_columns(acols[k]);
      const auto bj_vals = b.row_values(acols[k]);
      for (std::size_t s = 0; s < bi_cols.size(); ++s) {
        const double left = bi_vals[s] * avals[k];
        for (std::size_t t = 0; t < bj_cols.size(); ++t) out(bi_cols[s], bj_cols[t]) += left * bj_vals[t];
      }
    }
  }
  return out;
}

inline Vector cholesky_solve(const DenseMatrix& l, std::span<const double> rhs) {
  const int n = l.rows();
  Vector x(rhs.begin(), rhs.end());
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < i; ++k) x[i] -= l(i, k) * x[k];
    x[i] /= l(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int k = i + 1; k < n; ++k) x[i] -= l(k, i) * x[k];
    x[i] /= l(i, i);
  }
  return x;
}

} // namespace detail

/// Mass-orthogonalises the augmentation vectors against the coarse space
/// span(B0) and against each other; vectors whose remaining mass norm falls
/// below drop_tol times their original norm are dropped. Returns the number
/// of dropped vectors.
inline int orthogonalize_augmentation(std::vector<Vector>& extra, const SparseMatrix& b0, const SparseMatrix& m,
                                      double drop_tol = 1e-10) {
  const DenseMatrix gram = detail::project(m, b0);
  const DenseMatrix l = cholesky(gram);
  std::vector<Vector> kept;
  int dropped = 0;
  for (Vector v : extra) {
    const double original = std::sqrt(std::max(0.0, dot(v, m * v)));
    for (int pass = 0; pass < 2; ++pass) {
      const Vector mv = m * v;
      const Vector c = detail::cholesky_solve(l, b0.multiply_transpose(mv));
      const Vector bc = b0 * c;
      axpy(-1.0, bc, v);
      const Vector mv2 = m * v;
      for (const Vector& w : kept) axpy(-dot(w, mv2), w, v);
    }
    const double left = std::sqrt(std::max(0.0, dot(v, m * v)));
    if (!(left > drop_tol * original)) {
      ++dropped;
      continue;
    }
    scale(1.0 / left, v);
    kept.push_back(std::move(v));
  }
  extra = std::move(kept);
  return dropped;
}

/// Eigenpairs of the pencil (K, M) restricted to span(B0) + span(extra).
/// Vectors are reduced (free-dof) vectors; `extra` is modified by
/// orthogonalize_augmentation. Returns the q smallest pairs.
inline EigenSet solve_augmented_space(const SparseMatrix& k, const SparseMatrix& m, const SparseMatrix& b0,
                                      std::vector<Vector>& extra, int q, int* dropped = nullptr,
                                      OpCounters* counters = nullptr) {
  const int d = orthogonalize_augmentation(extra, b0, m);
  if (dropped) *dropped = d;
  if (d > 0) std::clog << "mlafem: warning: dropped " << d << " dependent augmentation vector(s)\n";
  const int nc = b0.cols();
  const int na = static_cast<int>(extra.size());
  const int n = nc + na;
  if (n < q) throw ReductionError("augmented space has fewer dimensions than requested eigenpairs");
  DenseMatrix ar(n, n), br(n, n);
  const DenseMatrix kc = detail::project(k, b0);
  const DenseMatrix mc = detail::project(m, b0);
  for (int i = 0; i < nc; ++i) {
    for (int j = 0; j < nc; ++j) {
      ar(i, j) = kc(i, j);
      br(i, j) = mc(i, j);
    }
  }
  for (int a = 0; a < na; ++a) {
    const Vector ku = k * extra[a];
    const Vector mu = m * extra[a];
    const Vector kb = b0.multiply_transpose(ku);
    const Vector mb = b0.multiply_transpose(mu);
    for (int i = 0; i < nc; ++i) {
      ar(i, nc + a) = ar(nc + a, i) = kb[i];
      br(i, nc + a) = br(nc + a, i) = mb[i];
    }
    for (int c = 0; c <= a; ++c) {
      ar(nc + a, nc + c) = ar(nc + c, nc + a) = dot(extra[c], ku);
      br(nc + a, nc + c) = br(nc + c, nc + a) = dot(extra[c], mu);
    }
  }
  const EigenSet small = dense_sym_gen_eig(ar, br, q);
  if (counters) ++counters->dense_eigensolves;
  EigenSet out;
  for (int j = 0; j < q; ++j) {
    const Vector xc(small[j].u.begin(), small[j].u.begin() + nc);
    Vector u = b0 * xc;
    for (int a = 0; a < na; ++a) axpy(small[j].u[nc + a], extra[a], u);
    scale(1.0 / std::sqrt(dot(u, m * u)), u);
    fix_sign(u);
    out.pairs.push_back({small[j].lambda, std::move(u)});
  }
  return out;
}

namespace detail {

// How the next mesh is produced from the current one; nullopt stops the loop.
using Refiner = std::function<std::optional<Mesh>(const Mesh&, const IndicatorField&, PhaseTimes&)>;
// Produces the eigenpairs on `fine` from those on `mesh`.
using Advance = std::function<EigenSet(const Mesh& mesh, const EigenSet& pairs, const Mesh& fine, LevelRecord& rec)>;

inline AdaptiveResult eigen_loop(const ProblemDef& problem, const AdaptiveConfig& cfg, const Mesh& initial,
                                 const Refiner& refiner, const Advance& advance, const LevelObserver& observer) {
  problem.validate();
  cfg.validate();
  AdaptiveResult result;
  LevelRecord rec;
  Mesh mesh = initial;
  EigenSet pairs = coarse_solve(mesh, problem, cfg, rec.work, rec.times);
  for (int level = 0;; ++level) {
    rec.level = level;
    rec.dofs = mesh.num_free_dofs();
    rec.elements = mesh.num_elements();
    rec.max_generation = mesh.max_generation();
    const IndicatorField field = estimate(mesh, problem, pairs, rec);

    std::optional<Mesh> fine;
    if (level < cfg.max_iterations) fine = refiner(mesh, field, rec.times);
    result.levels.push_back(rec);
    if (observer) {
      std::vector<Vector> fns;
      for (const auto& p : pairs.pairs) fns.push_back(p.u);
      observer(result.levels.back(), mesh, fns, field);
    }
    if (!fine || fine->num_free_dofs() > cfg.max_dofs) break;

    rec = LevelRecord{};
    pairs = advance(mesh, pairs, *fine, rec);
    mesh = std::move(*fine);
  }
  result.mesh = std::move(mesh);
  result.pairs = std::move(pairs);
  return result;
}

inline Refiner dorfler_refiner(double theta) {
  return [theta](const Mesh& mesh, const IndicatorField& field, PhaseTimes& times) -> std::optional<Mesh> {
    Stopwatch sm;
    const std::vector<int> marked = dorfler_mark(field.eta_sq, theta);
    times.mark += sm.seconds();
    if (marked.empty()) return std::nullopt;
    Stopwatch sr;
    Mesh fine = bisect(mesh, marked);
    times.refine += sr.seconds();
    return fine;
  };
}

// Prolongs full vertex vectors and reduces them to the fine free dofs.
inline std::vector<Vector> prolong_reduced(const Mesh& mesh, const EigenSet& pairs, const Mesh& fine) {
  const SparseMatrix p = prolongation(mesh, fine);
  std::vector<Vector> out;
  for (const auto& pair : pairs.pairs) out.push_back(apply_dirichlet(p * pair.u, fine));
  return out;
}

inline Advance direct_advance(const ProblemDef& problem, const AdaptiveConfig& cfg) {
  return [&problem, cfg](const Mesh& mesh, const EigenSet& pairs, const Mesh& fine, LevelRecord& rec) {
    Stopwatch sw;
    const LevelSystem sys = assemble_reduced(fine, problem);
    rec.times.solve += sw.seconds();
    Stopwatch se;
    const std::vector<Vector> start = prolong_reduced(mesh, pairs, fine);
    SparseEigenOptions opt;
    opt.tol = cfg.eig_tol;
    opt.linear_tol = cfg.linear_tol;
    EigenSet red = sparse_smallest_eigs(sys.k, sys.m, cfg.num_eigenpairs, opt, start, &rec.work);
    std::vector<Vector> next;
    for (const auto& p : red.pairs) next.push_back(p.u);
    track_pairs(red, start, next, sys.m);
    rec.times.eig += se.seconds();
    return expand_pairs(red, fine);
  };
}

} // namespace detail

/// Multilevel correction AFEM. Per level: estimate and mark on the current
/// mesh, bisect, solve one source problem per eigenpair on the refined mesh
/// with right-hand side lambda_k u_k, then solve the small eigenproblem on the
/// initial-mesh space augmented by the corrected vectors. No eigenvalue
/// iteration runs on refined meshes.
inline AdaptiveResult multilevel_correction_solve(const ProblemDef& problem, const AdaptiveConfig& cfg,
                                                  std::optional<Mesh> initial = std::nullopt,
                                                  const LevelObserver& observer = {}) {
  const Mesh coarse = initial ? *initial : initial_mesh(problem.domain, problem.coarse_cells);
  auto advance = [&](const Mesh& mesh, const EigenSet& pairs, const Mesh& fine, LevelRecord& rec) {
    detail::Stopwatch sw;
    const detail::LevelSystem sys = detail::assemble_reduced(fine, problem);
    const SparseMatrix p = prolongation(mesh, fine);
    std::vector<Vector> previous;
    std::vector<Vector> corrected;
    for (const auto& pair : pairs.pairs) {
      const Vector u_fine = p * pair.u;
      Vector rhs = assemble_load(fine, u_fine);
      scale(pair.lambda, rhs);
      const Vector guess = apply_dirichlet(u_fine, fine);
      corrected.push_back(cg_solve(sys.k, apply_dirichlet(rhs, fine), cfg.linear_tol, -1, guess, &rec.work).x);
      previous.push_back(guess);
    }
    rec.times.solve += sw.seconds();

    detail::Stopwatch se;
    const SparseMatrix b0 = detail::restricted_prolongation(coarse, fine);
    EigenSet red = solve_augmented_space(sys.k, sys.m, b0, corrected, cfg.num_eigenpairs, &rec.dropped_columns, &rec.work);
    std::vector<Vector> next;
    for (const auto& q : red.pairs) next.push_back(q.u);
    detail::track_pairs(red, previous, next, sys.m);
    rec.times.eig += se.seconds();
    return detail::expand_pairs(red, fine);
  };
  return detail::eigen_loop(problem, cfg, coarse, detail::dorfler_refiner(cfg.theta), advance, observer);
}

/// Standard AFEM baseline: the full sparse eigenproblem is solved on every
/// refined mesh (warm-started from the previous level).
inline AdaptiveResult direct_afem_solve(const ProblemDef& problem, const AdaptiveConfig& cfg,
                                        std::optional<Mesh> initial = std::nullopt, const LevelObserver& observer = {}) {
  const Mesh coarse = initial ? *initial : initial_mesh(problem.domain, problem.coarse_cells);
  return detail::eigen_loop(problem, cfg, coarse, detail::dorfler_refiner(cfg.theta), detail::direct_advance(problem, cfg),
                            observer);
}

/// Uniform refinement with the sparse eigensolver; each level halves h (two
/// bisection sweeps). theta is ignored.
inline AdaptiveResult uniform_refinement_solve(const ProblemDef& problem, const AdaptiveConfig& cfg,
                                               std::optional<Mesh> initial = std::nullopt,
                                               const LevelObserver& observer = {}) {
  const Mesh coarse = initial ? *initial : initial_mesh(problem.domain, problem.coarse_cells);
  detail::Refiner uniform = [](const Mesh& mesh, const IndicatorField&, PhaseTimes& times) -> std::optional<Mesh> {
    detail::Stopwatch sr;
    Mesh fine = mesh.refine_uniform(2);
    times.refine += sr.seconds();
    return fine;
  };
  return detail::eigen_loop(problem, cfg, coarse, uniform, detail::direct_advance(problem, cfg), observer);
}

/// Energy-norm error ||u - u_h||_a against an analytic solution, degree-4 quadrature.
inline double energy_error(const Mesh& mesh, const ProblemDef& problem, std::span<const double> uh,
                           const ScalarField& exact, const VectorField& exact_gradient) {
  double sum = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto g = mesh.geometry(e);
    const auto& v = mesh.element_vertices(e);
    const std::array<double, 3> ue{uh[v[0]], uh[v[1]], uh[v[2]]};
    const Vec2 grad_h = g.gradient(ue);
    for (const auto& qp : quadrature::degree4_rule) {
      const Point2 x = g.map(qp.bary[0], qp.bary[1], qp.bary[2]);
      const Vec2 de = exact_gradient(x) - grad_h;
      const double diff = exact(x) - (qp.bary[0] * ue[0] + qp.bary[1] * ue[1] + qp.bary[2] * ue[2]);
      sum += g.area * qp.weight * (dot(problem.A(x) * de, de) + problem.potential(x) * diff * diff);
    }
  }
  return std::sqrt(sum);
}

/// Record of one level of the source-problem loop. `energy` is a(u_h, u_h).
struct BvpLevelRecord {
  int level = 0;
  int dofs = 0;
  int elements = 0;
  double energy = 0.0;
  double error = std::numeric_limits<double>::quiet_NaN(); // ||u - u_h||_a when u is known
  double eta = 0.0;
  double osc = 0.0;
  PhaseTimes times;
  OpCounters work;
  int max_generation = 0;
};

struct BvpResult {
  std::vector<BvpLevelRecord> levels;
  Mesh mesh;
  Vector u;
};

using BvpObserver = std::function<void(const BvpLevelRecord&, const Mesh&, std::span<const double>, const IndicatorField&)>;

/// Standard AFEM for the source problem L u = f: solve, estimate, Doerfler
/// mark, bisect. Stops early when the marking comes back empty.
inline BvpResult afem_bvp_solve(const SourceProblem& source, const AdaptiveConfig& cfg,
                                std::optional<Mesh> initial = std::nullopt, const BvpObserver& observer = {}) {
  const ProblemDef& problem = source.op;
  problem.validate();
  cfg.validate();
  if (!source.f) throw ConfigurationError("source problem without right-hand side");
  BvpResult result;
  Mesh mesh = initial ? *initial : initial_mesh(problem.domain, problem.coarse_cells);
  Vector guess;
  for (int level = 0;; ++level) {
    BvpLevelRecord rec;
    rec.level = level;
    rec.dofs = mesh.num_free_dofs();
    rec.elements = mesh.num_elements();
    rec.max_generation = mesh.max_generation();

    detail::Stopwatch sw;
    const SparseMatrix k_full = assemble_stiffness(mesh, problem);
    const SparseMatrix k = apply_dirichlet(k_full, mesh);
    const Vector b = apply_dirichlet(assemble_load(mesh, source.f), mesh);
    const Vector x = cg_solve(k, b, cfg.linear_tol, -1, guess, &rec.work).x;
    Vector u = expand_dirichlet(x, mesh);
    rec.energy = dot(x, k * x);
    rec.times.solve = sw.seconds();

    detail::Stopwatch se;
    const IndicatorField field = bvp_indicators(mesh, problem, u, source.f);
    rec.eta = field.eta();
    const ElementFunction residual = [&](int e, Point2 p) {
      const auto g = mesh.geometry(e);
      const auto& v = mesh.element_vertices(e);
      const auto bc = barycentric(p, g.vertex[0], g.vertex[1], g.vertex[2]);
      const double ux = bc[0] * u[v[0]] + bc[1] * u[v[1]] + bc[2] * u[v[2]];
      return source.f(p) + dot(problem.div_A(p), g.gradient({u[v[0]], u[v[1]], u[v[2]]})) - problem.potential(p) * ux;
    };
    rec.osc = oscillation(mesh, residual, 1).osc();
    if (source.exact && source.exact_gradient) rec.error = energy_error(mesh, problem, u, source.exact, source.exact_gradient);
    rec.times.estimate = se.seconds();

    std::optional<Mesh> fine;
    if (level < cfg.max_iterations) {
      detail::Stopwatch sm;
      const std::vector<int> marked = dorfler_mark(field.eta_sq, cfg.theta);
      rec.times.mark = sm.seconds();
      if (!marked.empty()) {
        detail::Stopwatch sr;
        fine = bisect(mesh, marked);
        rec.times.refine = sr.seconds();
      }
    }
    result.levels.push_back(rec);
    if (observer) observer(rec, mesh, u, field);
    if (!fine || fine->num_free_dofs() > cfg.max_dofs) {
      result.mesh = std::move(mesh);
      result.u = std::move(u);
      break;
    }
    guess = apply_dirichlet(prolongation(mesh, *fine) * u, *fine);
    mesh = std::move(*fine);
  }
  return result;
}

/// Discrepancy of the Rayleigh quotient expansion
///   a(w,w)/(w,w) - lambda = a(w-u,w-u)/(w,w) - lambda (w-u,w-u)/(w,w)
/// evaluated with the discrete forms K and M, for an eigenpair (lambda, u).
inline double eigenvalue_error_expansion_check(const SparseMatrix& k, const SparseMatrix& m, const EigenPair& pair,
                                               std::span<const double> w) {
  const double ww = bilinear(m, w, w);
  if (!(ww > 0.0)) throw ConfigurationError("expansion check: (w,w) = 0");
  Vector d(w.begin(), w.end());
  axpy(-1.0, pair.u, d);
  const double lhs = bilinear(k, w, w) / ww - pair.lambda;
  const double rhs = bilinear(k, d, d) / ww - pair.lambda * bilinear(m, d, d) / ww;
  return std::abs(lhs - rhs);
}

} // namespace mlafem

#endif
