#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace osp {

// Exact rational scalar. Thin wrapper over GMP so the rest of the library
// never sees expression templates.
class Rat {
public:
    Rat() : v_(0) {}
    Rat(int n) : v_(n) {}
    Rat(long n) : v_(n) {}
    Rat(long long n) : v_(static_cast<long>(n)) {}
    Rat(int num, int den) : v_(num, den) {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }
    explicit Rat(const std::string& s) : v_(s) { v_.canonicalize(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw std::domain_error("Rat: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
    friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
    friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
    friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.v_ > b.v_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.v_ <= b.v_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.v_ >= b.v_; }

    Rat inv() const {
        if (is_zero()) throw std::domain_error("Rat: inverse of zero");
        return Rat(mpq_class(1 / v_));
    }

    std::string str() const { return v_.get_str(); }
    std::string num_str() const { return v_.get_num().get_str(); }
    std::string den_str() const { return v_.get_den().get_str(); }

    const mpq_class& raw() const { return v_; }

    // Reduction of the numerator times inverse denominator mod p; p prime.
    std::uint64_t mod(std::uint64_t p) const;

private:
    mpq_class v_;
};

inline Rat rat(int num, int den = 1) { return Rat(num, den); }

// Prime field element with a scoped runtime modulus. Used only as a
// pre-pass inside rank computations; every final dimension is confirmed
// rationally.
class Fp {
public:
    static std::uint64_t modulus() { return mod_; }

    // RAII scope for the modulus.
    struct Scope {
        explicit Scope(std::uint64_t p) : prev(mod_) { mod_ = p; }
        ~Scope() { mod_ = prev; }
        std::uint64_t prev;
    };

    Fp() : v_(0) {}
    explicit Fp(std::uint64_t v) : v_(v % mod_) {}
    Fp(int v) {
        long long r = v % static_cast<long long>(mod_);
        if (r < 0) r += mod_;
        v_ = static_cast<std::uint64_t>(r);
    }

    bool is_zero() const { return v_ == 0; }
    std::uint64_t value() const { return v_; }

    Fp operator-() const { return Fp(v_ == 0 ? 0 : mod_ - v_); }
    Fp& operator+=(const Fp& o) {
        v_ += o.v_;
        if (v_ >= mod_) v_ -= mod_;
        return *this;
    }
    Fp& operator-=(const Fp& o) {
        v_ = (v_ >= o.v_) ? v_ - o.v_ : v_ + mod_ - o.v_;
        return *this;
    }
    Fp& operator*=(const Fp& o) {
        v_ = static_cast<std::uint64_t>((static_cast<unsigned __int128>(v_) * o.v_) % mod_);
        return *this;
    }
    Fp& operator/=(const Fp& o) { return *this *= o.inv(); }

    friend Fp operator+(Fp a, const Fp& b) { a += b; return a; }
    friend Fp operator-(Fp a, const Fp& b) { a -= b; return a; }
    friend Fp operator*(Fp a, const Fp& b) { a *= b; return a; }
    friend Fp operator/(Fp a, const Fp& b) { a /= b; return a; }
    friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Fp& a, const Fp& b) { return a.v_ != b.v_; }

    Fp inv() const {
        if (v_ == 0) throw std::domain_error("Fp: inverse of zero");
        // extended Euclid
        long long t = 0, nt = 1;
        long long r = static_cast<long long>(mod_), nr = static_cast<long long>(v_);
        while (nr != 0) {
            long long q = r / nr;
            long long tmp = t - q * nt; t = nt; nt = tmp;
            tmp = r - q * nr; r = nr; nr = tmp;
        }
        if (t < 0) t += static_cast<long long>(mod_);
        return Fp(static_cast<std::uint64_t>(t));
    }

private:
    static inline thread_local std::uint64_t mod_ = 2147483659ULL;  // first prime above 2^31
    std::uint64_t v_;
};

inline std::uint64_t Rat::mod(std::uint64_t p) const {
    Fp::Scope s(p);
    mpz_class num = v_.get_num(), den = v_.get_den();
    mpz_class pz = mpz_class(static_cast<unsigned long>(p));
    mpz_class nr = ((num % pz) + pz) % pz;
    mpz_class dr = ((den % pz) + pz) % pz;
    Fp r = Fp(static_cast<std::uint64_t>(nr.get_ui())) / Fp(static_cast<std::uint64_t>(dr.get_ui()));
    return r.value();
}

}  // namespace osp
