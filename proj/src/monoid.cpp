#include "ltsep/monoid.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <stdexcept>

namespace ltsep {

BoolMatrix::BoolMatrix(std::size_t n)
    : n_(n), words_((n + 63) / 64), bits_(n * ((n + 63) / 64), 0) {}

BoolMatrix BoolMatrix::identity(std::size_t n) {
  BoolMatrix m(n);
  for (State i = 0; i < n; ++i) m.set(i, i);
  return m;
}

void BoolMatrix::set(State i, State j, bool value) {
  auto& w = bits_[i * words_ + j / 64];
  std::uint64_t mask = std::uint64_t{1} << (j % 64);
  w = value ? (w | mask) : (w & ~mask);
}

BoolMatrix BoolMatrix::operator*(const BoolMatrix& rhs) const {
  if (n_ != rhs.n_) throw std::invalid_argument("matrix dimension mismatch");
  BoolMatrix out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::uint64_t* dst = &out.bits_[i * words_];
    for (std::size_t w = 0; w < words_; ++w) {
      std::uint64_t row = bits_[i * words_ + w];
      while (row) {
        std::size_t j = w * 64 + std::countr_zero(row);
        row &= row - 1;
        const std::uint64_t* src = &rhs.bits_[j * words_];
        for (std::size_t x = 0; x < words_; ++x) dst[x] |= src[x];
      }
    }
  }
  return out;
}

bool BoolMatrix::is_zero() const {
  for (auto w : bits_)
    if (w) return false;
  return true;
}

bool BoolMatrix::contains(const BoolMatrix& rhs) const {
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (rhs.bits_[i] & ~bits_[i]) return false;
  return true;
}

BoolMatrix BoolMatrix::meet(const BoolMatrix& rhs) const {
  BoolMatrix out(n_);
  for (std::size_t i = 0; i < bits_.size(); ++i)
    out.bits_[i] = bits_[i] & rhs.bits_[i];
  return out;
}

StateSet BoolMatrix::row(State i) const {
  StateSet out;
  for (State j = 0; j < n_; ++j)
    if (get(i, j)) out.insert(j);
  return out;
}

StateSet BoolMatrix::diagonal() const {
  StateSet out;
  for (State i = 0; i < n_; ++i)
    if (get(i, i)) out.insert(i);
  return out;
}

std::vector<std::pair<State, State>> BoolMatrix::entries() const {
  std::vector<std::pair<State, State>> out;
  for (State i = 0; i < n_; ++i)
    for (State j = 0; j < n_; ++j)
      if (get(i, j)) out.emplace_back(i, j);
  return out;
}

std::size_t BoolMatrix::hash() const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (auto w : bits_) {
    h ^= w;
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return static_cast<std::size_t>(h);
}

std::string BoolMatrix::to_string() const {
  std::string out;
  for (State i = 0; i < n_; ++i) {
    for (State j = 0; j < n_; ++j) out += get(i, j) ? '1' : '0';
    out += '\n';
  }
  return out;
}

BoolMatrix letter_matrix(const Nfa& nfa, Symbol a) {
  BoolMatrix m(nfa.num_states());
  for (State p = 0; p < nfa.num_states(); ++p)
    for (State q : nfa.successors(p, a)) m.set(p, q);
  return m;
}

BoolMatrix word_matrix(const Nfa& nfa, const Word& w) {
  BoolMatrix m = BoolMatrix::identity(nfa.num_states());
  for (Symbol a : w) m = m * letter_matrix(nfa, a);
  return m;
}

std::optional<std::size_t> TransitionMonoid::index_of(const BoolMatrix& m) const {
  auto it = index.find(m);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::size_t TransitionMonoid::evaluate(const Word& w) const {
  std::size_t cur = 0;
  for (Symbol a : w) cur = right.at(cur).at(a);
  return cur;
}

std::size_t TransitionMonoid::multiply(std::size_t lhs, std::size_t rhs) const {
  std::size_t cur = lhs;
  for (Symbol a : words.at(rhs)) cur = right.at(cur).at(a);
  return cur;
}

TransitionMonoid transition_monoid(const Nfa& nfa, std::size_t budget) {
  TransitionMonoid m;
  m.num_states = nfa.num_states();
  std::vector<BoolMatrix> letters;
  for (Symbol a = 0; a < nfa.alphabet_size(); ++a)
    letters.push_back(letter_matrix(nfa, a));

  auto intern = [&](BoolMatrix mat, Word word) -> std::pair<std::size_t, bool> {
    auto [it, fresh] = m.index.emplace(mat, m.elements.size());
    if (fresh) {
      if (m.elements.size() >= budget)
        throw BudgetExceeded("transition monoid exceeds " +
                             std::to_string(budget) + " elements");
      m.elements.push_back(std::move(mat));
      m.words.push_back(std::move(word));
      m.right.emplace_back();
    }
    return {it->second, fresh};
  };

  intern(BoolMatrix::identity(nfa.num_states()), {});
  // Shortlex BFS over the right Cayley graph.
  for (std::size_t i = 0; i < m.elements.size(); ++i) {
    m.right[i].resize(letters.size());
    for (Symbol a = 0; a < letters.size(); ++a) {
      Word w = m.words[i];
      w.push_back(a);
      auto [idx, fresh] = intern(m.elements[i] * letters[a], std::move(w));
      (void)fresh;
      m.right[i][a] = idx;
    }
  }
  for (Symbol a = 0; a < letters.size(); ++a) m.generator_of.push_back(m.right[0][a]);

  // Semigroup part: BFS seeded by the generators, so nonempty words only.
  m.in_semigroup.assign(m.size(), false);
  m.nonempty_words.assign(m.size(), Word{});
  std::deque<std::size_t> queue;
  for (Symbol a = 0; a < letters.size(); ++a) {
    std::size_t g = m.generator_of[a];
    if (!m.in_semigroup[g]) {
      m.in_semigroup[g] = true;
      m.nonempty_words[g] = Word{a};
      queue.push_back(g);
    }
  }
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop_front();
    for (Symbol a = 0; a < letters.size(); ++a) {
      std::size_t j = m.right[i][a];
      if (m.in_semigroup[j]) continue;
      m.in_semigroup[j] = true;
      m.nonempty_words[j] = m.nonempty_words[i];
      m.nonempty_words[j].push_back(a);
      queue.push_back(j);
    }
  }
  return m;
}

std::uint64_t profile_width_bound(std::uint64_t monoid_size) {
  return 4 * (monoid_size + 1);
}

std::uint64_t profile_width_bound(const TransitionMonoid& m) {
  return profile_width_bound(m.size());
}

namespace {

void check_k(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("profile width k must be >= 1");
}

double geometric_log10(std::uint64_t terms_minus_one, std::uint64_t base) {
  // log10(Σ_{i≤t} base^i)
  if (base <= 1) return std::log10(static_cast<double>(terms_minus_one) + 1.0);
  double b = static_cast<double>(base);
  double t = static_cast<double>(terms_minus_one);
  // (b^{t+1}-1)/(b-1) ≈ b^{t+1}/(b-1) for large t
  if (t * std::log10(b) > 15)
    return (t + 1) * std::log10(b) - std::log10(b - 1);
  return std::log10((std::pow(b, t + 1) - 1) / (b - 1));
}

BigInt geometric_sum(std::uint64_t terms_minus_one, std::uint64_t base) {
  BigInt sum = 0, power = 1;
  for (std::uint64_t i = 0; i <= terms_minus_one; ++i) {
    sum += power;
    power *= base;
  }
  return sum;
}

double alphabet_size_log10(std::uint64_t k, std::uint64_t a) {
  std::uint64_t kl = k / 2, kr = k - kl;
  return geometric_log10(kl, a) + geometric_log10(kr, a);
}

}  // namespace

BigInt profile_alphabet_size(std::uint64_t k, std::uint64_t alphabet_size) {
  check_k(k);
  if (alphabet_size_log10(k, alphabet_size) > 1e6)
    throw BudgetExceeded("profile alphabet size too large to materialise");
  std::uint64_t kl = k / 2, kr = k - kl;
  return geometric_sum(kl, alphabet_size) * geometric_sum(kr, alphabet_size);
}

BigInt threshold_bound(std::uint64_t k, std::uint64_t alphabet_size,
                       std::uint64_t n, std::uint64_t max_bits) {
  check_k(k);
  if (n == 0) throw std::invalid_argument("n must be >= 1");
  double log10_d = threshold_bound_log10(k, alphabet_size, n);
  if (!(log10_d * 3.3219280948873623 <= static_cast<double>(max_bits)))
    throw BudgetExceeded("threshold bound exceeds " + std::to_string(max_bits) +
                         " bits");
  BigInt ak = profile_alphabet_size(k, alphabet_size);
  BigInt base = ak * n;
  return boost::multiprecision::pow(base, static_cast<unsigned>(ak));
}

double threshold_bound_log10(std::uint64_t k, std::uint64_t alphabet_size,
                             std::uint64_t n) {
  check_k(k);
  double log_ak = alphabet_size_log10(k, alphabet_size);
  double log_base = log_ak + std::log10(static_cast<double>(n));
  // |A_k| · log10(|A_k| n), kept in log space for huge |A_k|
  if (log_ak > 300) return std::numeric_limits<double>::infinity();
  return std::pow(10.0, log_ak) * log_base;
}

std::string format_bound(std::uint64_t k, std::uint64_t alphabet_size,
                         std::uint64_t n, std::size_t max_digits) {
  double lg = threshold_bound_log10(k, alphabet_size, n);
  if (lg < static_cast<double>(max_digits)) {
    return threshold_bound(k, alphabet_size, n).str();
  }
  double log_ak = alphabet_size_log10(k, alphabet_size);
  char buf[128];
  if (std::isinf(lg)) {
    std::snprintf(buf, sizeof buf, "(|A_k|*%llu)^|A_k| with |A_k| ~ 1e%.0f",
                  static_cast<unsigned long long>(n), log_ak);
    return buf;
  }
  double exponent = std::floor(lg);
  double mantissa = std::pow(10.0, lg - exponent);
  std::snprintf(buf, sizeof buf, "~%.3fe+%.0f", mantissa, exponent);
  return buf;
}

}  // namespace ltsep
