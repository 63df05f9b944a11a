#pragma once

// Characteristic-2 field tower GF(q) < GF(q^2) < GF(q^4), q = 2^h, realised
// inside the single ambient field GF(2^{4h}).  Elements are bit-vectors:
// bit i is the coefficient of X^i in the residue polynomial.

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace hxpw {

class Field;

/// Element of the ambient field.  A default-constructed Fe is unbound and
/// every arithmetic operation on it throws.
class Fe {
 public:
  Fe() = default;
  Fe(const Field& field, std::uint32_t bits);

  std::uint32_t bits() const { return bits_; }
  const Field* field() const { return field_; }
  bool is_zero() const { return bits_ == 0; }
  bool is_one() const { return bits_ == 1; }

  Fe inv() const;
  Fe pow(std::uint64_t e) const;
  /// x^{2^k}, k reduced modulo the ambient degree.
  Fe frob(int k) const;

  friend Fe operator+(Fe a, Fe b);
  friend Fe operator-(Fe a, Fe b) { return a + b; }
  friend Fe operator*(Fe a, Fe b);
  friend Fe operator/(Fe a, Fe b) { return a * b.inv(); }
  Fe& operator+=(Fe o) { return *this = *this + o; }
  Fe& operator*=(Fe o) { return *this = *this * o; }

  friend bool operator==(Fe a, Fe b) {
    return a.bits_ == b.bits_ && a.field_ == b.field_;
  }
  friend bool operator!=(Fe a, Fe b) { return !(a == b); }
  /// Integer-encoding order; only meaningful within one field.
  friend bool operator<(Fe a, Fe b) { return a.bits_ < b.bits_; }

 private:
  const Field* field_ = nullptr;
  std::uint32_t bits_ = 0;
};

namespace detail {

inline int poly_degree(std::uint64_t p) {
  int d = -1;
  while (p) {
    ++d;
    p >>= 1;
  }
  return d;
}

inline std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
  const int dm = poly_degree(m);
  for (int da = poly_degree(a); da >= dm; da = poly_degree(a)) a ^= m << (da - dm);
  return a;
}

/// Irreducibility over GF(2) by trial division against every polynomial of
/// degree 1..deg/2.
inline bool is_irreducible(std::uint64_t p) {
  const int n = poly_degree(p);
  if (n < 1) return false;
  for (int d = 1; 2 * d <= n; ++d) {
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << d); ++c) {
      if (poly_mod(p, (std::uint64_t{1} << d) | c) == 0) return false;
    }
  }
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace detail

/// Immutable field context.  Construct with make_field(); Fe values keep a
/// raw pointer to their Field, so the context must outlive them.
class Field {
 public:
  static constexpr int kMaxH = 4;

  explicit Field(int h) : h_(h) {
    if (h < 1) throw std::invalid_argument("field exponent h must be >= 1");
    if (h > kMaxH) {
      throw std::invalid_argument("field exponent h > " + std::to_string(kMaxH) +
                                  " is not supported");
    }
    degree_ = 4 * h;
    size_ = std::uint32_t{1} << degree_;
    modulus_ = 0;
    for (std::uint64_t c = 0; c < (std::uint64_t{1} << degree_); ++c) {
      const std::uint64_t cand = (std::uint64_t{1} << degree_) | c;
      if (detail::is_irreducible(cand)) {
        modulus_ = cand;
        break;
      }
    }
    if (modulus_ == 0) throw std::runtime_error("no irreducible polynomial found");
    build_tables();

    for (std::uint32_t x = 0; x < size_; ++x) {
      if ((frob_raw(x, 2 * h_) ^ x) == 1) {
        omega_ = x;
        break;
      }
    }
    for (std::uint32_t x = 0; x < size_; ++x) {
      if (frob_raw(x, 2 * h_) == x && (frob_raw(x, h_) ^ x) == 1) {
        zeta_ = x;
        break;
      }
    }
    if ((frob_raw(omega_, 2 * h_) ^ omega_) != 1 || frob_raw(omega_, 2 * h_) == omega_) {
      throw std::logic_error("omega construction failed");
    }
    for (int m : {h_, 2 * h_, 4 * h_}) subfields_.push_back(scan_subfield(m));
  }

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  int h() const { return h_; }
  int degree() const { return degree_; }
  std::uint32_t size() const { return size_; }
  std::uint64_t q() const { return std::uint64_t{1} << h_; }
  std::uint64_t modulus() const { return modulus_; }
  std::string modulus_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    std::uint64_t m = modulus_;
    do {
      s.insert(s.begin(), digits[m & 0xf]);
      m >>= 4;
    } while (m);
    return "0x" + s;
  }

  Fe zero() const { return Fe(*this, 0); }
  Fe one() const { return Fe(*this, 1); }
  Fe elem(std::uint32_t bits) const { return Fe(*this, bits); }
  /// omega^{q^2} = omega + 1; smallest such encoding.
  Fe omega() const { return Fe(*this, omega_); }
  /// zeta in GF(q^2) with zeta^q = zeta + 1; smallest such encoding.  {1, zeta}
  /// is the GF(q)-basis of GF(q^2) used for coordinates.
  Fe zeta() const { return Fe(*this, zeta_); }

  // Raw arithmetic on encodings.  No context checks.
  std::uint32_t mul_raw(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  std::uint32_t inv_raw(std::uint32_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return inv_[a];
  }
  std::uint32_t frob_raw(std::uint32_t a, int k) const {
    if (a == 0) return 0;
    k %= degree_;
    if (k < 0) k += degree_;
    const std::uint64_t e = (static_cast<std::uint64_t>(log_[a]) << k) % (size_ - 1);
    return exp_[e];
  }
  std::uint32_t pow_raw(std::uint32_t a, std::uint64_t e) const {
    std::uint32_t r = 1;
    std::uint32_t b = a;
    while (e) {
      if (e & 1) r = mul_raw(r, b);
      b = mul_raw(b, b);
      e >>= 1;
    }
    return r;
  }

  /// Carry-less product reduced by the modulus.  The table-driven mul_raw is
  /// built from this.
  std::uint32_t mul_reference(std::uint32_t a, std::uint32_t b) const {
    std::uint64_t acc = 0;
    for (int i = 0; i < degree_; ++i) {
      if ((b >> i) & 1) acc ^= static_cast<std::uint64_t>(a) << i;
    }
    return static_cast<std::uint32_t>(detail::poly_mod(acc, modulus_));
  }

  /// Inverse by the extended Euclidean algorithm on polynomials.
  std::uint32_t inv_euclid(std::uint32_t a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    std::uint64_t r0 = modulus_, r1 = a;
    std::uint64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
      std::uint64_t quo = 0;
      std::uint64_t rem = r0;
      const int d1 = detail::poly_degree(r1);
      for (int dr = detail::poly_degree(rem); dr >= d1; dr = detail::poly_degree(rem)) {
        quo ^= std::uint64_t{1} << (dr - d1);
        rem ^= r1 << (dr - d1);
      }
      std::uint64_t prod = 0;
      for (int i = 0; i <= detail::poly_degree(quo); ++i) {
        if ((quo >> i) & 1) prod ^= s1 << i;
      }
      r0 = r1;
      r1 = rem;
      const std::uint64_t s2 = s0 ^ prod;
      s0 = s1;
      s1 = s2;
    }
    return static_cast<std::uint32_t>(detail::poly_mod(s0, modulus_));
  }

  bool owns(std::uint32_t bits) const { return bits < size_; }

  /// x in GF(2^m) iff x^{2^m} = x.  m must divide the ambient degree.
  bool in_subfield(Fe x, int m) const {
    check_divisor(m);
    return frob_raw(x.bits(), m) == x.bits();
  }
  bool in_gf_q(Fe x) const { return in_subfield(x, h_); }
  bool in_gf_q2(Fe x) const { return in_subfield(x, 2 * h_); }

  /// Absolute trace sum_{i<m} x^{2^i} of x in GF(2^m).
  int abs_trace(Fe x, int m) const {
    if (!in_subfield(x, m)) throw std::invalid_argument("abs_trace: element outside GF(2^m)");
    std::uint32_t acc = 0;
    for (int i = 0; i < m; ++i) acc ^= frob_raw(x.bits(), i);
    if (acc > 1) throw std::logic_error("abs_trace left the prime field");
    return static_cast<int>(acc);
  }

  /// x + x^q + x^{q^2} + x^{q^3}, the trace down to GF(q).
  Fe rel_trace_to_q(Fe x) const {
    const std::uint32_t b = x.bits();
    return elem(b ^ frob_raw(b, h_) ^ frob_raw(b, 2 * h_) ^ frob_raw(b, 3 * h_));
  }

  /// All elements of GF(2^m) in ascending encoding order.
  std::vector<Fe> enumerate_subfield(int m) const {
    check_divisor(m);
    if (m == h_) return subfields_[0];
    if (m == 2 * h_) return subfields_[1];
    if (m == 4 * h_) return subfields_[2];
    return scan_subfield(m);
  }
  const std::vector<Fe>& gf_q() const { return subfields_[0]; }
  const std::vector<Fe>& gf_q2() const { return subfields_[1]; }
  const std::vector<Fe>& all() const { return subfields_[2]; }

  /// Square root; every element of a binary field is a square.
  Fe sqrt(Fe x) const { return elem(frob_raw(x.bits(), degree_ - 1)); }

 private:
  void check_divisor(int m) const {
    if (m <= 0 || degree_ % m != 0) {
      throw std::invalid_argument("subfield degree " + std::to_string(m) +
                                  " does not divide " + std::to_string(degree_));
    }
  }

  std::vector<Fe> scan_subfield(int m) const {
    std::vector<Fe> out;
    for (std::uint32_t x = 0; x < size_; ++x) {
      if (frob_raw(x, m) == x) out.push_back(elem(x));
    }
    return out;
  }

  void build_tables() {
    const std::uint64_t order = size_ - 1;
    const auto primes = detail::prime_factors(order);
    auto ref_pow = [&](std::uint32_t a, std::uint64_t e) {
      std::uint32_t r = 1;
      while (e) {
        if (e & 1) r = mul_reference(r, a);
        a = mul_reference(a, a);
        e >>= 1;
      }
      return r;
    };
    std::uint32_t gen = 0;
    for (std::uint32_t g = 2; g < size_ && gen == 0; ++g) {
      bool primitive = true;
      for (auto p : primes) {
        if (ref_pow(g, order / p) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) gen = g;
    }
    if (size_ == 2) gen = 1;
    if (gen == 0) throw std::logic_error("no primitive element found");
    exp_.assign(2 * order + 1, 0);
    log_.assign(size_, 0);
    std::uint32_t x = 1;
    for (std::uint64_t i = 0; i < order; ++i) {
      exp_[i] = x;
      log_[x] = static_cast<std::uint32_t>(i);
      x = mul_reference(x, gen);
    }
    for (std::uint64_t i = order; i < exp_.size(); ++i) exp_[i] = exp_[i - order];
    inv_.assign(size_, 0);
    for (std::uint32_t a = 1; a < size_; ++a) inv_[a] = inv_euclid(a);
  }

  int h_ = 0;
  int degree_ = 0;
  std::uint32_t size_ = 0;
  std::uint64_t modulus_ = 0;
  std::uint32_t omega_ = 0;
  std::uint32_t zeta_ = 0;
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> inv_;
  std::vector<std::vector<Fe>> subfields_;
};

using FieldPtr = std::shared_ptr<const Field>;

inline FieldPtr make_field(int h) { return std::make_shared<const Field>(h); }

inline Fe::Fe(const Field& field, std::uint32_t bits) : field_(&field), bits_(bits) {
  if (!field.owns(bits)) throw std::invalid_argument("encoding outside the field");
}

namespace detail {
inline const Field& common_field(Fe a, Fe b) {
  if (a.field() == nullptr || a.field() != b.field()) {
    throw std::invalid_argument("field elements from different contexts");
  }
  return *a.field();
}
inline const Field& bound_field(Fe a) {
  if (a.field() == nullptr) throw std::invalid_argument("unbound field element");
  return *a.field();
}
}  // namespace detail

inline Fe operator+(Fe a, Fe b) {
  const Field& f = detail::common_field(a, b);
  return Fe(f, a.bits_ ^ b.bits_);
}

inline Fe operator*(Fe a, Fe b) {
  const Field& f = detail::common_field(a, b);
  return Fe(f, f.mul_raw(a.bits_, b.bits_));
}

inline Fe Fe::inv() const {
  const Field& f = detail::bound_field(*this);
  return Fe(f, f.inv_raw(bits_));
}

inline Fe Fe::pow(std::uint64_t e) const {
  const Field& f = detail::bound_field(*this);
  return Fe(f, f.pow_raw(bits_, e));
}

inline Fe Fe::frob(int k) const {
  const Field& f = detail::bound_field(*this);
  return Fe(f, f.frob_raw(bits_, k));
}

}  // namespace hxpw
