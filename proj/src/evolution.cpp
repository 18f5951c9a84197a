// Copyright 2026 The skqd-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "skqd/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "skqd/errors.hpp"

namespace skqd {
namespace {

constexpr std::size_t kExpMemoryBudget = std::size_t{512} << 20;

double operator_norm_bound(const SpaceOperator& op) {
  const auto& c = op.compiled();
  double b = 0.0;
  for (const auto& t : c.diagonal) b += std::abs(t.coeff);
  for (const auto& g : c.groups) {
    double mx = 0.0;
    for (const auto& e : g.element) mx = std::max(mx, std::abs(e));
    b += mx;
  }
  return b;
}

}  // namespace

void EvolutionConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step must be positive");
  if (d < 1) throw InvalidArgument("Krylov dimension must be at least 1");
  if (const auto* tr = std::get_if<Trotter2Method>(&method)) {
    if (tr->reps < 1) throw InvalidArgument("Trotter repetitions must be at least 1");
  } else {
    const double tol = std::get<ExactMethod>(method).tol;
    if (!(tol > 0.0) || tol > 1e-6) throw InvalidArgument("exact-evolution tolerance must lie in (0, 1e-6]");
  }
}

State evolve_exact(const SpaceOperator& op, const State& s, double t, double tol) {
  if (!s.space->same_as(*op.space())) throw DimensionError("state and operator use different spaces");
  if (t == 0.0) return s;
  const std::size_t dim = s.dim();
  const double total = std::abs(t);
  const double direction = t > 0 ? 1.0 : -1.0;
  const double hnorm = std::max(operator_norm_bound(op), 1e-300);
  const int n = s.n_sites();
  const std::size_t m_cap = std::min({dim, std::max<std::size_t>(30, 10 * static_cast<std::size_t>(n)),
                                      std::max<std::size_t>(8, kExpMemoryBudget / (sizeof(cplx) * dim))});

  const double norm_in = s.norm();
  if (norm_in == 0.0) return s;
  std::vector<cplx> psi = s.amps;
  std::vector<cplx> basis(m_cap * dim);
  std::vector<cplx> w(dim);
  auto vec = [&](std::size_t i) { return std::span<cplx>(basis.data() + i * dim, dim); };

  double done = 0.0;
  double tau = std::min(total, 10.0 / hnorm);
  while (done < total) {
    tau = std::min(tau, total - done);
    const double beta0 = norm(std::span<const cplx>(psi));
    {
      auto v0 = vec(0);
      for (std::size_t i = 0; i < dim; ++i) v0[i] = psi[i] / beta0;
    }
    std::vector<double> alpha, beta;
    Eigen::VectorXcd coeffs;
    bool accepted = false;
    double err = 0.0;
    std::size_t used = 0;
    for (std::size_t j = 0; j < m_cap; ++j) {
      op.apply(std::span<const cplx>(vec(j)), w);
      double a = 0.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i <= j; ++i) {
          const cplx c = dot(std::span<const cplx>(vec(i)), std::span<const cplx>(w));
          if (i == j) a += c.real();
          axpy(-c, std::span<const cplx>(vec(i)), std::span<cplx>(w));
        }
      }
      alpha.push_back(a);
      const double b = norm(std::span<const cplx>(w));
      used = j + 1;

      const auto sz = static_cast<Eigen::Index>(used);
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(sz, sz);
      for (Eigen::Index i = 0; i < sz; ++i) tri(i, i) = alpha[static_cast<std::size_t>(i)];
      for (Eigen::Index i = 0; i + 1 < sz; ++i) {
        tri(i, i + 1) = beta[static_cast<std::size_t>(i)];
        tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
      const Eigen::VectorXd& lam = es.eigenvalues();
      const Eigen::MatrixXd& q = es.eigenvectors();
      Eigen::VectorXcd phase(sz);
      for (Eigen::Index i = 0; i < sz; ++i) {
        phase(i) = std::exp(cplx(0.0, -direction * tau * lam(i))) * q(0, i);
      }
      coeffs = q.cast<cplx>() * phase;
      err = beta0 * b * std::abs(coeffs(sz - 1));
      const bool breakdown = b < 1e-14 * std::max(1.0, hnorm);
      if (err <= tol * (tau / total) || breakdown || used == dim) {
        accepted = true;
        break;
      }
      if (j + 1 < m_cap) {
        beta.push_back(b);
        auto next = vec(j + 1);
        for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] / b;
      }
    }
    if (!accepted) {
      tau *= 0.5;
      if (tau < total * 1e-9) throw ConvergenceError("exponential propagation stalled", err);
      continue;
    }
    std::fill(psi.begin(), psi.end(), cplx{});
    for (std::size_t l = 0; l < used; ++l) {
      axpy(beta0 * coeffs(static_cast<Eigen::Index>(l)), std::span<const cplx>(vec(l)), std::span<cplx>(psi));
    }
    done += tau;
    if (used < m_cap / 2) tau *= 1.5;
  }

  State out(s.space, std::move(psi));
  const double drift = std::abs(out.norm() - norm_in) / norm_in;
  if (drift > 10.0 * tol) throw ConvergenceError("norm drift in exponential propagation", drift);
  scale(norm_in / out.norm(), std::span<cplx>(out.amps));
  return out;
}

State evolve_exact(const TermList& h, const State& s, double t, double tol) {
  SpaceOperator op(h, s.space);
  return evolve_exact(op, s, t, tol);
}

struct TrotterPlan::LocalUnitary {
  std::size_t n_local = 0;
  Bits flip_local = 0;
  // Nonzero entries of each row: (column local config, value).
  std::vector<std::vector<std::pair<std::size_t, cplx>>> rows;
};

TrotterPlan::TrotterPlan(const TermList& h, SpacePtr space) : op_(h, std::move(space)) {
  const auto& groups = op_.compiled().groups;
  // Greedy edge coloring in (span, position) order: single-site flips share
  // one layer, chain bonds alternate, rectangles use at most four colors.
  std::vector<Bits> used_sites;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    Bits sites = 0;
    for (int p : groups[g].support) sites |= Bits{1} << p;
    std::size_t c = 0;
    while (c < layers_.size() && (used_sites[c] & sites) != 0) ++c;
    if (c == layers_.size()) {
      layers_.emplace_back();
      used_sites.push_back(0);
    }
    layers_[c].push_back(g);
    used_sites[c] |= sites;
  }
}

void TrotterPlan::apply_group(std::size_t g, const LocalUnitary& u, std::vector<cplx>& in,
                              std::vector<cplx>& buf) const {
  const FlipGroup& grp = op_.compiled().groups[g];
  const SpacePtr& space = op_.space();
  const std::size_t d = space->dim();
  Bits support_mask = 0;
  for (int p : grp.support) support_mask |= Bits{1} << p;
  bool leaked = false;
#pragma omp parallel for schedule(static) if (d > 16384) reduction(|| : leaked)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(d); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const Bits a = space->state(i);
    const std::size_t l = grp.local_index(a);
    const Bits base = a & ~support_mask;
    cplx acc{};
    for (const auto& [lc, val] : u.rows[l]) {
      std::size_t j;
      if (lc == l) {
        j = i;
      } else if (lc == (l ^ u.flip_local) && grp.element[l] != cplx{}) {
        j = op_.neighbor(g, i);
      } else {
        Bits b = base;
        for (std::size_t s = 0; s < grp.support.size(); ++s) {
          if ((lc >> s) & 1U) b |= Bits{1} << grp.support[s];
        }
        j = space->index(b);
      }
      if (j == Space::npos) {
        leaked = true;
        continue;
      }
      acc += val * in[j];
    }
    buf[i] = acc;
  }
  if (leaked) throw SymmetryError("layer exponential leaves the sector");
  in.swap(buf);
}

void TrotterPlan::evolve(State& s, double dt, int reps) const {
  if (!s.space->same_as(*op_.space())) throw DimensionError("state and Trotter plan use different spaces");
  if (reps < 1) throw InvalidArgument("Trotter repetitions must be at least 1");
  const double half = 0.5 * dt / reps;
  const auto& groups = op_.compiled().groups;
  const std::size_t d = s.dim();

  std::vector<cplx> diag_phase(d);
  const auto diag = op_.diagonal();
  for (std::size_t i = 0; i < d; ++i) diag_phase[i] = std::exp(cplx(0.0, -half * diag[i]));

  std::vector<LocalUnitary> unitaries(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const FlipGroup& grp = groups[g];
    LocalUnitary& u = unitaries[g];
    u.n_local = grp.element.size();
    for (std::size_t s2 = 0; s2 < grp.support.size(); ++s2) {
      if ((grp.flip >> grp.support[s2]) & 1U) u.flip_local |= Bits{1} << s2;
    }
    const auto nl = static_cast<Eigen::Index>(u.n_local);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(nl, nl);
    for (std::size_t l = 0; l < u.n_local; ++l) {
      m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l ^ u.flip_local)) = grp.element[l];
    }
    // Exponentiate each connected block separately so that couplings absent
    // from the generator stay exactly zero.
    std::vector<std::size_t> comp(u.n_local);
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](std::size_t x) {
      while (comp[x] != x) x = comp[x] = comp[comp[x]];
      return x;
    };
    for (std::size_t r = 0; r < u.n_local; ++r) {
      for (std::size_t c = 0; c < u.n_local; ++c) {
        if (m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) != cplx{}) comp[find(r)] = find(c);
      }
    }
    u.rows.assign(u.n_local, {});
    for (std::size_t root = 0; root < u.n_local; ++root) {
      std::vector<std::size_t> members;
      for (std::size_t x = 0; x < u.n_local; ++x) {
        if (find(x) == root) members.push_back(x);
      }
      if (members.empty()) continue;
      const auto bs = static_cast<Eigen::Index>(members.size());
      Eigen::MatrixXcd block(bs, bs);
      for (Eigen::Index r = 0; r < bs; ++r) {
        for (Eigen::Index c = 0; c < bs; ++c) {
          block(r, c) = m(static_cast<Eigen::Index>(members[static_cast<std::size_t>(r)]),
                          static_cast<Eigen::Index>(members[static_cast<std::size_t>(c)]));
        }
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(block);
      Eigen::VectorXcd ph(bs);
      for (Eigen::Index k = 0; k < bs; ++k) ph(k) = std::exp(cplx(0.0, -half * es.eigenvalues()(k)));
      const Eigen::MatrixXcd ub = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
      for (Eigen::Index r = 0; r < bs; ++r) {
        for (Eigen::Index c = 0; c < bs; ++c) {
          u.rows[members[static_cast<std::size_t>(r)]].emplace_back(members[static_cast<std::size_t>(c)], ub(r, c));
        }
      }
    }
  }

  std::vector<cplx> buf(d);
  auto apply_diag = [&]() {
    for (std::size_t i = 0; i < d; ++i) s.amps[i] *= diag_phase[i];
  };
  for (int r = 0; r < reps; ++r) {
    apply_diag();
    for (const auto& layer : layers_) {
      for (std::size_t g : layer) apply_group(g, unitaries[g], s.amps, buf);
    }
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
      for (auto g = it->rbegin(); g != it->rend(); ++g) apply_group(*g, unitaries[*g], s.amps, buf);
    }
    apply_diag();
  }
}

State trotter_step(const TermList& h, const State& s, double dt, int reps) {
  TrotterPlan plan(h, s.space);
  State out = s;
  plan.evolve(out, dt, reps);
  return out;
}

std::vector<State> krylov_states(const TermList& h, const State& psi0, const EvolutionConfig& cfg) {
  cfg.validate();
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(cfg.d));
  out.push_back(psi0);
  if (cfg.d == 1) return out;
  if (const auto* tr = std::get_if<Trotter2Method>(&cfg.method)) {
    TrotterPlan plan(h, psi0.space);
    for (int k = 1; k < cfg.d; ++k) {
      State next = out.back();
      plan.evolve(next, cfg.dt, tr->reps);
      out.push_back(std::move(next));
    }
  } else {
    const double tol = std::get<ExactMethod>(cfg.method).tol;
    SpaceOperator op(h, psi0.space);
    for (int k = 1; k < cfg.d; ++k) out.push_back(evolve_exact(op, out.back(), cfg.dt, tol));
  }
  return out;
}

}  // namespace skqd
