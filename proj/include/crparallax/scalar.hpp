#pragma once

#include <cmath>
#include <complex>
#include <string>

#include <gmpxx.h>

namespace crparallax {

using Complex = std::complex<double>;

/// Exact complex number with rational real and imaginary parts.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(long value) : re_(value) {}
    GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im))
    {
        re_.canonicalize();
        im_.canonicalize();
    }

    static GaussianRational fraction(long num, long den) { return {mpq_class(num, den)}; }
    static GaussianRational unit() { return {mpq_class(0), mpq_class(1)}; }

    const mpq_class& real() const { return re_; }
    const mpq_class& imag() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }

    GaussianRational& operator+=(const GaussianRational& o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational& operator*=(const GaussianRational& o);
    GaussianRational& operator/=(const GaussianRational& o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {mpq_class(-a.re_), mpq_class(-a.im_)}; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    /// Accumulates a*b into this without temporaries for the common real case.
    void add_product(const GaussianRational& a, const GaussianRational& b);

    Complex to_complex() const { return {re_.get_d(), im_.get_d()}; }

    /// "p/q" for real values, "p/q+r/s*i" otherwise.
    std::string str() const;

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Complex> {
    static constexpr bool exact = false;
    static constexpr const char* name = "floating";
};

template <>
struct scalar_traits<GaussianRational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "exact";
};

template <class S>
concept CoefficientField = requires { scalar_traits<S>::exact; };

template <class S>
inline constexpr bool is_exact_v = scalar_traits<S>::exact;

inline Complex conjugate(const Complex& z) { return std::conj(z); }
inline GaussianRational conjugate(const GaussianRational& z) { return {z.real(), mpq_class(-z.imag())}; }

inline double magnitude(const Complex& z) { return std::abs(z); }
inline double magnitude(const GaussianRational& z) { return std::abs(z.to_complex()); }

inline bool is_zero(const Complex& z) { return z.real() == 0.0 && z.imag() == 0.0; }
inline bool is_zero(const GaussianRational& z) { return z.is_zero(); }

inline Complex to_complex(const Complex& z) { return z; }
inline Complex to_complex(const GaussianRational& z) { return z.to_complex(); }

inline void add_product(Complex& acc, const Complex& a, const Complex& b) { acc += a * b; }
inline void add_product(GaussianRational& acc, const GaussianRational& a, const GaussianRational& b)
{
    acc.add_product(a, b);
}

/// Converts an exact literal into the coefficient field.
template <CoefficientField S>
S from_gaussian(const GaussianRational& q)
{
    if constexpr (is_exact_v<S>) {
        return q;
    } else {
        return q.to_complex();
    }
}

template <CoefficientField S>
S imaginary_unit()
{
    return from_gaussian<S>(GaussianRational::unit());
}

template <CoefficientField S>
S from_int(long n)
{
    return from_gaussian<S>(GaussianRational(n));
}

template <CoefficientField S>
S rational(long num, long den)
{
    return from_gaussian<S>(GaussianRational::fraction(num, den));
}

/// Exact zero test in exact mode, |z| <= tol in floating mode.
template <CoefficientField S>
bool negligible(const S& z, double tol)
{
    if constexpr (is_exact_v<S>) {
        return is_zero(z);
    } else {
        return magnitude(z) <= tol;
    }
}

std::string to_string(const Complex& z);
std::string to_string(const GaussianRational& z);

} // namespace crparallax
