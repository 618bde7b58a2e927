#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tangles/matrix.hpp"

namespace tangles {

inline constexpr int kMaxThetaParties = 6;

enum class Parity { even, odd };

// The epsilon-product operators. Even parity: theta_plus = eps tensored k times on 2^k dimensions, a
// signed permutation (one entry per row). Odd parity: theta_minus on the doubled space
// of 2k qubits (dimension 4^k); rows carry zero or exactly two entries.
// Entries are {-1, 0, +1}; rows are stored sparsely.
class EpsilonOperator {
 public:
  struct Entry {
    std::uint32_t col;
    std::int8_t sign;
  };

  EpsilonOperator(int k, Parity parity) : k_(k), parity_(parity) {
    if (k < 2 || k > kMaxThetaParties) throw std::domain_error("theta party count outside [2,6]");
    if (parity == Parity::even && k % 2 != 0)
      throw std::domain_error("even-parity theta requires even k");
    if (parity == Parity::odd && (k % 2 == 0 || k < 3))
      throw std::domain_error("odd-parity theta requires odd k >= 3");
    if (parity == Parity::even)
      build_even();
    else
      build_odd();
  }

  int k() const { return k_; }
  Parity parity() const { return parity_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<Entry>& row(std::size_t i) const { return rows_[i]; }

  Matrix as_matrix() const {
    Matrix m(dim(), dim());
    for (std::size_t i = 0; i < dim(); ++i)
      for (const Entry& e : rows_[i]) m(i, e.col) = static_cast<double>(e.sign);
    return m;
  }

  // x^T Theta y, no conjugation (the anti-linear pairing the tangles are built on).
  cplx bilinear(const std::vector<cplx>& x, const std::vector<cplx>& y) const {
    if (x.size() != dim() || y.size() != dim())
      throw std::invalid_argument("bilinear operand length mismatch");
    cplx total = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (x[i] == cplx(0.0) || rows_[i].empty()) continue;
      cplx acc = 0.0;
      for (const Entry& e : rows_[i]) acc += static_cast<double>(e.sign) * y[e.col];
      total += x[i] * acc;
    }
    return total;
  }

 private:
  static int eps(int a, int b) { return (a == b) ? 0 : (a == 0 ? 1 : -1); }  // eps(0,1)=+1, eps(1,0)=-1

  void build_even() {
    const std::size_t d = std::size_t{1} << k_;
    rows_.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      const std::uint32_t j = static_cast<std::uint32_t>(~i & (d - 1));
      const std::int8_t sign = (std::popcount(i) % 2 == 0) ? 1 : -1;
      rows_[i].push_back({j, sign});
    }
  }

  void build_odd() {
    // Doubled space: qubit p of the 2k-qubit index is bit (2k-1-p); the first
    // copy occupies parties 0..k-1, the second copy parties k..2k-1.
    const int kk = 2 * k_;
    const std::size_t d = std::size_t{1} << kk;
    rows_.resize(d);
    auto bit = [kk](std::size_t idx, int party) { return static_cast<int>((idx >> (kk - 1 - party)) & 1u); };
    for (std::size_t i = 0; i < d; ++i) {
      const int a = eps(bit(i, 0), bit(i, k_));
      if (a == 0) continue;
      // Columns: parties 1..k-1 of both copies are forced to the flipped bit;
      // the distinguished pair (j0, jk) ranges over the two eps-supported values.
      std::size_t base = 0;
      int mid = 1;
      for (int l = 1; l < k_; ++l) {
        const int il = bit(i, l), ikl = bit(i, k_ + l);
        mid *= eps(il, 1 - il) * eps(ikl, 1 - ikl);
        base |= static_cast<std::size_t>(1 - il) << (kk - 1 - l);
        base |= static_cast<std::size_t>(1 - ikl) << (kk - 1 - (k_ + l));
      }
      for (int j0 = 0; j0 <= 1; ++j0) {
        const int jk = 1 - j0;
        const int sign = a * eps(j0, jk) * mid;
        std::size_t col = base;
        col |= static_cast<std::size_t>(j0) << (kk - 1);
        col |= static_cast<std::size_t>(jk) << (kk - 1 - k_);
        rows_[i].push_back({static_cast<std::uint32_t>(col), static_cast<std::int8_t>(sign)});
      }
    }
  }

  int k_;
  Parity parity_;
  std::vector<std::vector<Entry>> rows_;
};

// Memoized builder; the returned reference stays valid for the program's life.
inline const EpsilonOperator& build_theta(int k, Parity parity) {
  static std::map<std::pair<int, int>, std::unique_ptr<EpsilonOperator>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(k, static_cast<int>(parity));
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<EpsilonOperator>(k, parity)).first;
  return *it->second;
}

}  // namespace tangles
