#include "sumlab/spectral.hpp"

#include <bit>
#include <cmath>

#include "difftable.hpp"
#include "lattice.hpp"
#include "sumlab/energy.hpp"

namespace sumlab {

namespace {

/// For each x ∈ A-A, the indices a with x + a ∈ A (row order of the matrices).
std::vector<std::vector<std::uint32_t>> shift_lists(const GSet& a) {
  return detail::with_lattice(a, [&](const auto& ops, const detail::Scale&, const auto& enc) {
    using Ops = std::decay_t<decltype(ops)>;
    const auto& av = enc[0];
    detail::CountMap<Ops> index;
    for (std::size_t i = 0; i < av.size(); ++i) index[av[i]] = i + 1;
    const auto r = detail::self_differences(ops, av);
    std::vector<std::vector<std::uint32_t>> out;
    out.reserve(r.size());
    for (const auto& [x, _] : r.entries()) {
      auto& row = out.emplace_back();
      for (std::size_t i = 0; i < av.size(); ++i) {
        if (detail::lookup<Ops>(index, ops.add(x, av[i])) != 0) row.push_back(static_cast<std::uint32_t>(i));
      }
    }
    return out;
  });
}

bool nonneg_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0 || m(i, j) != m(j, i)) return false;
    }
  }
  return true;
}

}  // namespace

EnergyMatrices build_matrices(const GSet& a, std::uint64_t delta) {
  if (a.size() > kDenseOrderLimit) {
    throw Error(ErrorCode::TooLarge, "dense matrices are limited to order " + std::to_string(kDenseOrderLimit));
  }
  if (delta < 1) throw Error(ErrorCode::BadSpec, "delta must be at least 1");
  EnergyMatrices m;
  m.set = a;
  m.delta = delta;
  const auto n = static_cast<Eigen::Index>(a.size());
  m.r_exact = detail::with_lattice(a, [&](const auto& ops, const detail::Scale&, const auto& enc) {
    const auto& av = enc[0];
    const auto r = detail::self_differences(ops, av);
    std::vector<std::uint64_t> out(av.size() * av.size());
    for (std::size_t i = 0; i < av.size(); ++i) {
      for (std::size_t j = 0; j < av.size(); ++j) out[i * av.size() + j] = r.get(ops.sub(av[i], av[j]));
    }
    return out;
  });
  m.R.resize(n, n);
  m.M.resize(n, n);
  m.Mprime.resize(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(delta));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const std::uint64_t r = m.r_exact[static_cast<std::size_t>(i * n + j)];
      m.R(i, j) = static_cast<double>(r);
      m.M(i, j) = std::sqrt(static_cast<double>(r));
      m.Mprime(i, j) = r <= delta ? scale * static_cast<double>(r) : 0.0;
    }
  }
  return m;
}

PsdWitness psd_witness(const EnergyMatrices& mats, const Eigen::VectorXd& v) {
  if (static_cast<std::size_t>(v.size()) != mats.order()) {
    throw Error(ErrorCode::DimensionMismatch, "vector of length " + std::to_string(v.size()) + " for order " +
                                                  std::to_string(mats.order()));
  }
  PsdWitness w;
  w.direct = v.dot(mats.R * v);
  for (const auto& row : shift_lists(mats.set)) {
    double s = 0;
    for (auto i : row) s += v[i];
    w.sum_of_squares += s * s;
  }
  return w;
}

TraceRoutes trace_m2r(const EnergyMatrices& mats) {
  TraceRoutes out;
  out.direct = (mats.M * mats.M * mats.R).trace();
  out.combinatorial = detail::with_lattice(mats.set, [&](const auto& ops, const detail::Scale&, const auto& enc) {
    using Ops = std::decay_t<decltype(ops)>;
    const auto& av = enc[0];
    const auto r = detail::self_differences(ops, av);
    detail::CountMap<Ops> member;
    for (const auto& x : av) member[x] = 1;
    // bits[d] = {b ∈ A : b - d ∈ A}, so |A ∩ (A+d) ∩ (A+d')| = |bits[d] & bits[d']|.
    const std::size_t words = (av.size() + 63) / 64;
    const auto& entries = r.entries();
    std::vector<std::uint64_t> bits(entries.size() * words, 0);
    for (std::size_t e = 0; e < entries.size(); ++e) {
      for (std::size_t i = 0; i < av.size(); ++i) {
        if (detail::lookup<Ops>(member, ops.sub(av[i], entries[e].first)) != 0) {
          bits[e * words + i / 64] |= 1ULL << (i % 64);
        }
      }
    }
    std::vector<double> root(entries.size());
    for (std::size_t e = 0; e < entries.size(); ++e) root[e] = std::sqrt(static_cast<double>(entries[e].second));
    long double total = 0;
    for (std::size_t e = 0; e < entries.size(); ++e) {
      for (std::size_t f = 0; f < entries.size(); ++f) {
        const std::uint64_t rdd = r.get(ops.sub(entries[e].first, entries[f].first));
        if (rdd == 0) continue;
        std::uint64_t common = 0;
        for (std::size_t w = 0; w < words; ++w) common += std::popcount(bits[e * words + w] & bits[f * words + w]);
        total += static_cast<long double>(root[e]) * root[f] * static_cast<long double>(rdd) *
                 static_cast<long double>(common);
      }
    }
    return static_cast<double>(total);
  });
  return out;
}

Eigenpair principal_eigen(const Eigen::MatrixXd& mat, double tol) {
  if (!nonneg_symmetric(mat)) {
    throw Error(ErrorCode::BadSpec, "power iteration needs a symmetric entrywise-nonnegative matrix");
  }
  const Eigen::Index n = mat.rows();
  Eigenpair out;
  if (n == 0) return out;
  const double shift = mat.rowwise().sum().maxCoeff();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
  if (shift == 0) {
    out.v1 = v;
    return out;
  }
  double rayleigh = v.dot(mat * v);
  for (std::size_t it = 1; it <= kPowerIterationCap; ++it) {
    Eigen::VectorXd w = mat * v + shift * v;
    v = w.normalized();
    const double next = v.dot(mat * v);
    const bool done = std::abs(next - rayleigh) < tol * std::max(1.0, std::abs(next));
    rayleigh = next;
    if (done) {
      out.iterations = it;
      out.mu1 = rayleigh;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (v[i] != 0) {
          if (v[i] < 0) v = -v;
          break;
        }
      }
      out.v1 = v;
      return out;
    }
  }
  throw Error(ErrorCode::NoConvergence, "power iteration did not settle within the iteration cap");
}

SpectralChain spectral_chain_check(const GSet& a, std::uint64_t delta) {
  a.require_theorem_input();
  const auto mats = build_matrices(a, delta);
  SpectralChain c;
  c.delta = delta;
  c.size = a.size();
  c.Eprime = tail_decompose(a, delta).e_low;
  const auto eig = principal_eigen(mats.Mprime);
  c.mu1 = eig.mu1;
  c.rayleigh_R = eig.v1.dot(mats.R * eig.v1);
  const auto tr = trace_m2r(mats);
  c.trace = tr.direct;
  c.trace_combinatorial = tr.combinatorial;
  c.E3 = moment_energy(a, 3);
  c.sigma = sigma_sum(a);

  const double n = static_cast<double>(a.size());
  const double d = static_cast<double>(delta);
  const double eprime_per = c.Eprime.get_d() / n;
  c.bound_i = eprime_per / std::sqrt(d);
  c.bound_ii = std::sqrt(d) * c.mu1;
  auto tol = [](double x) { return kSpectralTolerance * std::max(1.0, std::abs(x)); };
  c.step_i = c.mu1 >= c.bound_i - tol(c.bound_i);
  c.step_ii = c.rayleigh_R >= c.bound_ii - tol(c.bound_ii) && c.bound_ii >= eprime_per - tol(eprime_per);

  BigInt e6;
  mpz_pow_ui(e6.get_mpz_t(), c.Eprime.get_mpz_t(), 6);
  BigInt n6;
  mpz_ui_pow_ui(n6.get_mpz_t(), a.size(), 6);
  const BigInt dd = static_cast<unsigned long>(delta);
  c.lhs = e6;
  c.rhs = n6 * c.E3 * dd * dd * c.sigma;
  c.final_ok = c.lhs <= c.rhs;
  return c;
}

}  // namespace sumlab
