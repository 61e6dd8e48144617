#include "artifact/field.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace artifact {

namespace {

// Conway polynomials, coefficients x^0 .. x^e.
const std::map<std::pair<int, int>, std::vector<int>>& modulus_table() {
  static const std::map<std::pair<int, int>, std::vector<int>> table = {
      {{2, 1}, {1, 1}},
      {{2, 2}, {1, 1, 1}},
      {{2, 3}, {1, 1, 0, 1}},
      {{2, 4}, {1, 1, 0, 0, 1}},
      {{2, 5}, {1, 0, 1, 0, 0, 1}},
      {{2, 6}, {1, 1, 0, 1, 1, 0, 1}},
      {{2, 7}, {1, 1, 0, 0, 0, 0, 0, 1}},
      {{2, 8}, {1, 0, 1, 1, 1, 0, 0, 0, 1}},
      {{3, 1}, {1, 1}},
      {{3, 2}, {2, 2, 1}},
      {{3, 3}, {1, 2, 0, 1}},
      {{3, 4}, {2, 0, 0, 2, 1}},
      {{3, 5}, {1, 2, 0, 0, 0, 1}},
      {{3, 6}, {2, 2, 1, 0, 2, 0, 1}},
      {{3, 7}, {1, 0, 2, 0, 0, 0, 0, 1}},
      {{3, 8}, {2, 2, 2, 0, 1, 2, 0, 0, 1}},
      {{5, 1}, {3, 1}},
      {{5, 2}, {2, 4, 1}},
      {{5, 3}, {3, 3, 0, 1}},
      {{5, 4}, {2, 4, 4, 0, 1}},
      {{5, 5}, {3, 4, 0, 0, 0, 1}},
      {{5, 6}, {2, 0, 1, 4, 1, 0, 1}},
      {{5, 7}, {3, 3, 0, 0, 0, 0, 0, 1}},
      {{5, 8}, {2, 4, 3, 0, 1, 0, 0, 0, 1}},
  };
  return table;
}

// Remainder of a by b over F_p; b monic.
std::vector<int> poly_rem(std::vector<int> a, const std::vector<int>& b, int p) {
  const int db = static_cast<int>(b.size()) - 1;
  for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
    const int c = a[i] % p;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) {
      a[i - db + j] = ((a[i - db + j] - c * b[j]) % p + p) % p;
    }
  }
  a.resize(std::max(db, 0));
  return a;
}

}  // namespace

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_irreducible_mod_p(const std::vector<int>& poly, int p) {
  const int deg = static_cast<int>(poly.size()) - 1;
  if (deg < 1 || poly.back() % p == 0) return false;
  if (deg == 1) return true;
  // Trial division by every monic polynomial of degree 1..deg/2.
  for (int k = 1; 2 * k <= deg; ++k) {
    long long count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (long long code = 0; code < count; ++code) {
      std::vector<int> div(k + 1, 0);
      long long c = code;
      for (int i = 0; i < k; ++i) {
        div[i] = static_cast<int>(c % p);
        c /= p;
      }
      div[k] = 1;
      auto r = poly_rem(poly, div, p);
      bool zero = true;
      for (int v : r)
        if (v % p != 0) zero = false;
      if (zero) return false;
    }
  }
  return true;
}

std::vector<int> canonical_modulus(int p, int e) {
  auto it = modulus_table().find({p, e});
  if (it != modulus_table().end()) return it->second;
  if (e == 1) return {0, 1};
  throw std::invalid_argument("no canonical modulus for p=" + std::to_string(p) +
                              ", e=" + std::to_string(e));
}

Field::Field(int p, int e) : p_(p), e_(e) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime");
  if (e < 1) throw std::invalid_argument("extension degree must be >= 1");
  std::uint64_t q = 1;
  for (int i = 0; i < e; ++i) q *= static_cast<std::uint64_t>(p);
  if (q > (1u << 24)) throw std::invalid_argument("field too large");
  q_ = static_cast<std::uint32_t>(q);
  modulus_ = canonical_modulus(p, e);
  if (!is_irreducible_mod_p(modulus_, p))
    throw std::logic_error("modulus table entry is reducible");
  if (e == 1) {
    if (p == 2) {
      primitive_ = 1;
    } else {
      for (fe g = 2; g < q_; ++g) {
        fe x = 1;
        std::uint32_t order = 0;
        do {
          x = static_cast<fe>((static_cast<std::uint64_t>(x) * g) % p_);
          ++order;
        } while (x != 1);
        if (order == q_ - 1) {
          primitive_ = g;
          break;
        }
      }
    }
    return;
  }

  neg_table_.resize(q_);
  for (fe a = 0; a < q_; ++a) {
    auto c = coeffs(a);
    for (auto& v : c) v = (p_ - v) % p_;
    neg_table_[a] = from_coeffs(c);
  }
  if (p_ != 2 && q_ <= 1024) {
    add_table_.resize(static_cast<std::size_t>(q_) * q_);
    for (fe a = 0; a < q_; ++a)
      for (fe b = 0; b < q_; ++b) add_table_[a * q_ + b] = add_digits(a, b);
  }

  auto slow_mul = [&](fe a, fe b) {
    auto ca = coeffs(a), cb = coeffs(b);
    std::vector<int> prod(2 * e_ - 1, 0);
    for (int i = 0; i < e_; ++i)
      for (int j = 0; j < e_; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p_;
    auto r = poly_rem(prod, modulus_, p_);
    r.resize(e_, 0);
    return from_coeffs(r);
  };

  exp_.assign(2 * (q_ - 1), 0);
  log_.assign(q_, 0);
  for (fe g = 2; g < q_; ++g) {
    std::vector<fe> powers;
    powers.reserve(q_ - 1);
    fe x = 1;
    do {
      powers.push_back(x);
      x = slow_mul(x, g);
    } while (x != 1 && powers.size() < q_);
    if (powers.size() == q_ - 1) {
      primitive_ = g;
      for (std::uint32_t k = 0; k < q_ - 1; ++k) {
        exp_[k] = powers[k];
        exp_[k + q_ - 1] = powers[k];
        log_[powers[k]] = k;
      }
      return;
    }
  }
  throw std::logic_error("no primitive element found");
}

FieldPtr Field::get(int p, int e) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({p, e});
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const Field>(p, e);
  cache[{p, e}] = f;
  return f;
}

FieldPtr Field::of_order(std::uint32_t q) {
  for (int p = 2; p <= static_cast<int>(q); ++p) {
    if (!is_prime(p) || q % p != 0) continue;
    std::uint32_t r = q;
    int e = 0;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    if (r != 1) break;
    return get(p, e);
  }
  throw std::invalid_argument("field order must be a prime power: " + std::to_string(q));
}

fe Field::add_digits(fe a, fe b) const {
  fe out = 0, place = 1;
  for (int i = 0; i < e_; ++i) {
    const fe da = a % p_, db = b % p_;
    out += ((da + db) % p_) * place;
    a /= p_;
    b /= p_;
    place *= p_;
  }
  return out;
}

fe Field::inv(fe a) const {
  if (a == 0) throw std::domain_error("inverse of zero in F_" + std::to_string(q_));
  if (e_ == 1) return pow(a, q_ - 2);
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

fe Field::pow(fe a, std::uint64_t k) const {
  fe result = 1;
  fe base = a;
  while (k > 0) {
    if (k & 1) result = mul(result, base);
    base = mul(base, base);
    k >>= 1;
  }
  return result;
}

fe Field::frobenius(fe a, int r) const {
  for (int i = 0; i < r; ++i) a = pow(a, static_cast<std::uint64_t>(p_));
  return a;
}

fe Field::from_int(long long v) const {
  long long m = v % p_;
  if (m < 0) m += p_;
  return static_cast<fe>(m);
}

fe Field::generator() const { return e_ == 1 ? primitive_ : static_cast<fe>(p_); }

std::vector<int> Field::coeffs(fe a) const {
  std::vector<int> c(e_, 0);
  for (int i = 0; i < e_; ++i) {
    c[i] = static_cast<int>(a % p_);
    a /= p_;
  }
  return c;
}

fe Field::from_coeffs(const std::vector<int>& c) const {
  fe out = 0, place = 1;
  for (int i = 0; i < e_; ++i) {
    const int v = i < static_cast<int>(c.size()) ? ((c[i] % p_) + p_) % p_ : 0;
    out += static_cast<fe>(v) * place;
    place *= p_;
  }
  return out;
}

std::string Field::to_string(fe a) const {
  if (e_ == 1) return std::to_string(a);
  auto c = coeffs(a);
  std::string s;
  for (int i = e_ - 1; i >= 0; --i) {
    if (c[i] == 0) continue;
    if (!s.empty()) s += "+";
    if (i == 0 || c[i] != 1) s += std::to_string(c[i]);
    if (i >= 1) s += "x";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

}  // namespace artifact
