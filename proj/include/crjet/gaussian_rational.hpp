#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <utility>

#include "crjet/errors.hpp"

namespace crjet {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Element of Q(i): re + im*i with exact rational parts.
/// Both parts are kept reduced with positive denominator by the backing
/// rational type, so equality is plain componentwise comparison.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long value) : re_(value) {}
    GaussianRational(BigRational re) : re_(std::move(re)) {}
    GaussianRational(BigRational re, BigRational im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational i() { return {BigRational(0), BigRational(1)}; }

    static GaussianRational from_ratio(long num, long den) {
        if (den == 0) throw domain_error("zero denominator");
        return {BigRational(num, den)};
    }

    const BigRational& re() const { return re_; }
    const BigRational& im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    GaussianRational conj() const { return {re_, -im_}; }

    /// re^2 + im^2, a nonnegative rational.
    BigRational norm() const { return re_ * re_ + im_ * im_; }

    GaussianRational operator-() const { return {-re_, -im_}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o) {
        BigRational r = re_ * o.re_ - im_ * o.im_;
        BigRational m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    GaussianRational& operator/=(const GaussianRational& o) {
        if (o.is_zero()) throw domain_error("division by zero in Q(i)");
        BigRational n = o.norm();
        BigRational r = (re_ * o.re_ + im_ * o.im_) / n;
        BigRational m = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }

    /// Forms: "0", "2", "-1/2", "i", "-i", "2/3i", "1+i", "1-1/2i".
    std::string str() const {
        if (is_zero()) return "0";
        if (im_ == 0) return rational_str(re_);
        std::string imag = imag_str(boost::multiprecision::abs(im_));
        if (re_ == 0) return (im_ < 0 ? "-" : "") + imag;
        return rational_str(re_) + (im_ < 0 ? "-" : "+") + imag;
    }

    static std::string rational_str(const BigRational& q) {
        std::string s = numerator(q).str();
        if (denominator(q) != 1) s += "/" + denominator(q).str();
        return s;
    }

private:
    static std::string imag_str(const BigRational& q) {
        if (q == 1) return "i";
        return rational_str(q) + "i";
    }

    BigRational re_{0};
    BigRational im_{0};
};

} // namespace crjet
