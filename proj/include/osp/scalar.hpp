#pragma once

#include "osp/rational.hpp"

#include <stdexcept>
#include <string>

namespace osp {

// Scalar carrying one formal parameter to at most first degree:  c0 + c1*x.
// The ideal reductions substitute the quadratic relation once per pair group,
// so a degree-2 term can only arise from a bookkeeping bug; multiplication
// throws when both factors carry the parameter.
class LinPoly {
public:
    LinPoly() : c0_(0), c1_(0) {}
    LinPoly(const Rat& c) : c0_(c), c1_(0) {}
    LinPoly(int c) : c0_(c), c1_(0) {}
    LinPoly(const Rat& c0, const Rat& c1) : c0_(c0), c1_(c1) {}

    static LinPoly param() { return LinPoly(Rat(0), Rat(1)); }

    const Rat& constant() const { return c0_; }
    const Rat& slope() const { return c1_; }
    bool is_zero() const { return c0_.is_zero() && c1_.is_zero(); }
    bool has_param() const { return !c1_.is_zero(); }

    LinPoly operator-() const { return LinPoly(-c0_, -c1_); }
    LinPoly& operator+=(const LinPoly& o) { c0_ += o.c0_; c1_ += o.c1_; return *this; }
    LinPoly& operator-=(const LinPoly& o) { c0_ -= o.c0_; c1_ -= o.c1_; return *this; }
    LinPoly& operator*=(const LinPoly& o) {
        if (has_param() && o.has_param())
            throw std::domain_error("LinPoly: parameter degree would exceed 1");
        Rat nc1 = c0_ * o.c1_ + c1_ * o.c0_;
        c0_ *= o.c0_;
        c1_ = nc1;
        return *this;
    }

    friend LinPoly operator+(LinPoly a, const LinPoly& b) { a += b; return a; }
    friend LinPoly operator-(LinPoly a, const LinPoly& b) { a -= b; return a; }
    friend LinPoly operator*(LinPoly a, const LinPoly& b) { a *= b; return a; }
    friend bool operator==(const LinPoly& a, const LinPoly& b) {
        return a.c0_ == b.c0_ && a.c1_ == b.c1_;
    }
    friend bool operator!=(const LinPoly& a, const LinPoly& b) { return !(a == b); }

    Rat eval(const Rat& x) const { return c0_ + c1_ * x; }

    std::string str(const char* name = "x") const {
        if (c1_.is_zero()) return c0_.str();
        std::string s;
        if (!c0_.is_zero()) s = c0_.str() + " + ";
        s += c1_.str() + std::string("*") + name;
        return s;
    }

private:
    Rat c0_, c1_;
};

}  // namespace osp
