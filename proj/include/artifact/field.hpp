#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace artifact {

// Field elements are encoded as integers sum_i c_i p^i, c_i the coefficient of x^i
// in the residue modulo the field's fixed irreducible polynomial.
using fe = std::uint32_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
 public:
  // Canonical field of order p^e. Instances are shared and immutable.
  static FieldPtr get(int p, int e = 1);
  static FieldPtr of_order(std::uint32_t q);

  int p() const { return p_; }
  int e() const { return e_; }
  std::uint32_t q() const { return q_; }
  // Monic modulus, coefficients from x^0 up to x^e.
  const std::vector<int>& modulus() const { return modulus_; }

  fe add(fe a, fe b) const {
    if (e_ == 1) {
      fe s = a + b;
      return s >= static_cast<fe>(p_) ? s - p_ : s;
    }
    if (p_ == 2) return a ^ b;
    if (!add_table_.empty()) return add_table_[a * q_ + b];
    return add_digits(a, b);
  }
  fe neg(fe a) const {
    if (e_ == 1) return a == 0 ? 0 : p_ - a;
    if (p_ == 2) return a;
    return neg_table_[a];
  }
  fe sub(fe a, fe b) const { return add(a, neg(b)); }
  fe mul(fe a, fe b) const {
    if (a == 0 || b == 0) return 0;
    if (e_ == 1) return static_cast<fe>((static_cast<std::uint64_t>(a) * b) % p_);
    return exp_[log_[a] + log_[b]];
  }
  fe inv(fe a) const;
  fe div(fe a, fe b) const { return mul(a, inv(b)); }
  fe pow(fe a, std::uint64_t k) const;
  // x -> x^(p^r)
  fe frobenius(fe a, int r = 1) const;
  fe from_int(long long v) const;
  fe generator() const;  // residue class of x
  fe primitive() const { return primitive_; }

  std::vector<int> coeffs(fe a) const;
  fe from_coeffs(const std::vector<int>& c) const;
  std::string to_string(fe a) const;

  Field(int p, int e);

 private:
  fe add_digits(fe a, fe b) const;

  int p_;
  int e_;
  std::uint32_t q_;
  std::vector<int> modulus_;
  fe primitive_ = 1;
  std::vector<fe> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<fe> add_table_;
  std::vector<fe> neg_table_;
};

// Canonical modulus for (p,e) from the built-in table; throws outside p in {2,3,5}, e <= 8
// unless e == 1.
std::vector<int> canonical_modulus(int p, int e);
bool is_irreducible_mod_p(const std::vector<int>& poly, int p);
bool is_prime(long long n);

}  // namespace artifact
