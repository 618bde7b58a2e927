#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tangles/eigen.hpp"
#include "tangles/matrix.hpp"

namespace tangles {

inline constexpr int kMaxParties = 12;

// Party 0 owns the most significant bit of the basis index: |abc> sits at
// index 4a + 2b + c, so party p of an n-party index is bit (n-1-p).
inline int bit_of_party(std::size_t index, int party, int n) {
  return static_cast<int>((index >> (n - 1 - party)) & 1u);
}

struct Ket {
  int n = 0;                 // number of qubits, 1..12
  std::vector<cplx> amps;    // 2^n amplitudes, party 0 = most significant bit
  bool normalized = false;   // true when the squared norm was within 1e-12 of 1 at construction
};

inline double norm2(const Ket& psi) {
  double s = 0.0;
  for (const cplx& a : psi.amps) s += std::norm(a);
  return s;
}

inline Ket make_ket(int n, std::vector<cplx> amps) {
  if (n < 1 || n > kMaxParties) throw std::invalid_argument("party count outside [1,12]");
  if (amps.size() != (std::size_t{1} << n))
    throw std::invalid_argument("amplitude vector length is not 2^n");
  for (const cplx& a : amps)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw std::invalid_argument("non-finite amplitude");
  Ket psi{n, std::move(amps), false};
  psi.normalized = std::abs(norm2(psi) - 1.0) <= 1e-12;
  return psi;
}

inline Ket normalized(const Ket& psi) {
  const double n2 = norm2(psi);
  if (n2 <= 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  Ket out = psi;
  const double inv = 1.0 / std::sqrt(n2);
  for (cplx& a : out.amps) a *= inv;
  out.normalized = true;
  return out;
}

// (a|0...0> + b|1...1>) / norm
inline Ket ghz_ket(int n, cplx a, cplx b) {
  if (n < 1 || n > kMaxParties) throw std::invalid_argument("party count outside [1,12]");
  const double nrm = std::sqrt(std::norm(a) + std::norm(b));
  if (nrm == 0.0) throw std::invalid_argument("ghz_ket needs (a,b) != (0,0)");
  std::vector<cplx> amps(std::size_t{1} << n, 0.0);
  amps.front() = a / nrm;
  amps.back() = b / nrm;
  return make_ket(n, std::move(amps));
}

struct LocalOperator {
  int party = 0;
  cplx m[2][2] = {{1.0, 0.0}, {0.0, 1.0}};
};

// Apply one 2x2 operator per party (all parties covered exactly once).
// Returns the unnormalized image and its squared norm; callers decide
// whether to renormalize.
inline std::pair<Ket, double> apply_local(const std::vector<LocalOperator>& ops, const Ket& psi) {
  if (static_cast<int>(ops.size()) != psi.n)
    throw std::invalid_argument("apply_local needs exactly one operator per party");
  std::vector<bool> seen(psi.n, false);
  for (const LocalOperator& op : ops) {
    if (op.party < 0 || op.party >= psi.n) throw std::invalid_argument("operator party out of range");
    if (seen[op.party]) throw std::invalid_argument("duplicate operator party");
    seen[op.party] = true;
  }
  std::vector<cplx> cur = psi.amps;
  std::vector<cplx> next(cur.size());
  for (const LocalOperator& op : ops) {
    const std::size_t bit = std::size_t{1} << (psi.n - 1 - op.party);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const std::size_t i0 = i & ~bit, i1 = i | bit;
      const int b = (i & bit) ? 1 : 0;
      next[i] = op.m[b][0] * cur[i0] + op.m[b][1] * cur[i1];
    }
    std::swap(cur, next);
  }
  Ket out{psi.n, std::move(cur), false};
  const double p = norm2(out);
  out.normalized = std::abs(p - 1.0) <= 1e-12;
  return {out, p};
}

// Reorder parties: after the call, party q of the result is party perm[q] of
// the input.
inline Ket permute_parties(const Ket& psi, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != psi.n)
    throw std::invalid_argument("permutation length must equal the party count");
  std::vector<bool> seen(psi.n, false);
  for (int p : perm) {
    if (p < 0 || p >= psi.n || seen[p]) throw std::invalid_argument("not a permutation of the parties");
    seen[p] = true;
  }
  std::vector<cplx> out(psi.amps.size());
  for (std::size_t i = 0; i < psi.amps.size(); ++i) {
    std::size_t j = 0;
    for (int q = 0; q < psi.n; ++q)
      j |= static_cast<std::size_t>(bit_of_party(i, perm[q], psi.n)) << (psi.n - 1 - q);
    out[j] = psi.amps[i];
  }
  Ket res{psi.n, std::move(out), psi.normalized};
  return res;
}

struct DensityMatrix {
  std::vector<int> parties;  // strictly ascending labels of the retained parties
  Matrix rho;                // 2^k x 2^k, basis ordered with parties[0] most significant
};

namespace detail {

inline void check_keep_list(const std::vector<int>& keep, int n) {
  if (keep.empty()) throw std::domain_error("partial trace must keep at least one party");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n) throw std::invalid_argument("kept party label out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("kept party labels must be strictly ascending");
  }
}

}  // namespace detail

inline DensityMatrix partial_trace(const Ket& psi, const std::vector<int>& keep) {
  detail::check_keep_list(keep, psi.n);
  const int k = static_cast<int>(keep.size());
  std::vector<int> traced;
  for (int p = 0; p < psi.n; ++p)
    if (std::find(keep.begin(), keep.end(), p) == keep.end()) traced.push_back(p);

  const std::size_t dk = std::size_t{1} << k;
  const std::size_t dt = std::size_t{1} << traced.size();
  DensityMatrix out{keep, Matrix(dk, dk)};
  for (std::size_t e = 0; e < dt; ++e) {
    std::size_t base = 0;
    for (std::size_t t = 0; t < traced.size(); ++t)
      base |= ((e >> (traced.size() - 1 - t)) & 1u) << (psi.n - 1 - traced[t]);
    for (std::size_t i = 0; i < dk; ++i) {
      std::size_t fi = base;
      for (int q = 0; q < k; ++q) fi |= ((i >> (k - 1 - q)) & 1u) << (psi.n - 1 - keep[q]);
      for (std::size_t j = 0; j < dk; ++j) {
        std::size_t fj = base;
        for (int q = 0; q < k; ++q) fj |= ((j >> (k - 1 - q)) & 1u) << (psi.n - 1 - keep[q]);
        out.rho(i, j) += psi.amps[fi] * std::conj(psi.amps[fj]);
      }
    }
  }
  return out;
}

inline DensityMatrix partial_trace(const DensityMatrix& in, const std::vector<int>& keep) {
  const int k_in = static_cast<int>(in.parties.size());
  // keep holds positions into in.parties? No: actual party labels, which must
  // be a subset of in.parties.
  detail::check_keep_list(keep, kMaxParties);
  std::vector<int> pos;  // positions of kept labels inside in.parties
  for (int label : keep) {
    auto it = std::find(in.parties.begin(), in.parties.end(), label);
    if (it == in.parties.end()) throw std::invalid_argument("kept party not present in density matrix");
    pos.push_back(static_cast<int>(it - in.parties.begin()));
  }
  std::vector<int> tpos;
  for (int p = 0; p < k_in; ++p)
    if (std::find(pos.begin(), pos.end(), p) == pos.end()) tpos.push_back(p);

  const int k = static_cast<int>(pos.size());
  const std::size_t dk = std::size_t{1} << k;
  const std::size_t dt = std::size_t{1} << tpos.size();
  DensityMatrix out{keep, Matrix(dk, dk)};
  for (std::size_t e = 0; e < dt; ++e) {
    std::size_t base = 0;
    for (std::size_t t = 0; t < tpos.size(); ++t)
      base |= ((e >> (tpos.size() - 1 - t)) & 1u) << (k_in - 1 - tpos[t]);
    for (std::size_t i = 0; i < dk; ++i) {
      std::size_t fi = base;
      for (int q = 0; q < k; ++q) fi |= ((i >> (k - 1 - q)) & 1u) << (k_in - 1 - pos[q]);
      for (std::size_t j = 0; j < dk; ++j) {
        std::size_t fj = base;
        for (int q = 0; q < k; ++q) fj |= ((j >> (k - 1 - q)) & 1u) << (k_in - 1 - pos[q]);
        out.rho(i, j) += in.rho(fi, fj);
      }
    }
  }
  return out;
}

// Validate the standard density matrix contract: Hermitian within herm_tol,
// unit trace within trace_tol, and eigenvalues >= -psd_tol.
inline void check_density(const DensityMatrix& d, double herm_tol = 1e-12,
                          double trace_tol = 1e-12, double psd_tol = 1e-10) {
  if (d.rho.rows() != d.rho.cols()) throw std::invalid_argument("density matrix must be square");
  if (d.rho.rows() != (std::size_t{1} << d.parties.size()))
    throw std::invalid_argument("density matrix size does not match its party list");
  if (d.rho.hermiticity_defect() > herm_tol)
    throw std::invalid_argument("density matrix is not Hermitian within tolerance");
  if (std::abs(d.rho.trace() - cplx(1.0)) > trace_tol)
    throw std::invalid_argument("density matrix trace is not 1 within tolerance");
  const std::vector<double> w = hermitian_eigenvalues(d.rho);
  if (w.back() < -psd_tol)
    throw std::invalid_argument("density matrix has a negative eigenvalue beyond tolerance");
}

inline DensityMatrix pure_density(const Ket& psi) {
  const Ket n = psi.normalized ? psi : normalized(psi);
  std::vector<int> parties(psi.n);
  for (int p = 0; p < psi.n; ++p) parties[p] = p;
  DensityMatrix out{std::move(parties), Matrix(n.amps.size(), n.amps.size())};
  for (std::size_t i = 0; i < n.amps.size(); ++i)
    for (std::size_t j = 0; j < n.amps.size(); ++j)
      out.rho(i, j) = n.amps[i] * std::conj(n.amps[j]);
  return out;
}

}  // namespace tangles
