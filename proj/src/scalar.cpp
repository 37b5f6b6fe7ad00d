#include "crparallax/scalar.hpp"

#include <cstdio>
#include <stdexcept>

namespace crparallax {

GaussianRational& GaussianRational::operator*=(const GaussianRational& o)
{
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    mpq_class re = re_ * o.re_ - im_ * o.im_;
    mpq_class im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o)
{
    if (o.is_zero()) {
        throw std::domain_error("GaussianRational: division by zero");
    }
    if (sgn(o.im_) == 0) {
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    mpq_class norm = o.re_ * o.re_ + o.im_ * o.im_;
    mpq_class re = (re_ * o.re_ + im_ * o.im_) / norm;
    mpq_class im = (im_ * o.re_ - re_ * o.im_) / norm;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
}

void GaussianRational::add_product(const GaussianRational& a, const GaussianRational& b)
{
    thread_local mpq_class tmp;
    const bool a_real = sgn(a.im_) == 0;
    const bool b_real = sgn(b.im_) == 0;
    if (sgn(a.re_) != 0 && sgn(b.re_) != 0) {
        mpq_mul(tmp.get_mpq_t(), a.re_.get_mpq_t(), b.re_.get_mpq_t());
        re_ += tmp;
    }
    if (a_real && b_real) {
        return;
    }
    if (!a_real && !b_real) {
        mpq_mul(tmp.get_mpq_t(), a.im_.get_mpq_t(), b.im_.get_mpq_t());
        re_ -= tmp;
    }
    if (!b_real && sgn(a.re_) != 0) {
        mpq_mul(tmp.get_mpq_t(), a.re_.get_mpq_t(), b.im_.get_mpq_t());
        im_ += tmp;
    }
    if (!a_real && sgn(b.re_) != 0) {
        mpq_mul(tmp.get_mpq_t(), a.im_.get_mpq_t(), b.re_.get_mpq_t());
        im_ += tmp;
    }
}

std::string GaussianRational::str() const
{
    if (sgn(im_) == 0) {
        return re_.get_str();
    }
    if (sgn(re_) == 0) {
        return im_.get_str() + "*i";
    }
    return re_.get_str() + (sgn(im_) > 0 ? "+" : "") + im_.get_str() + "*i";
}

std::string to_string(const Complex& z)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
    return buf;
}

std::string to_string(const GaussianRational& z) { return z.str(); }

} // namespace crparallax
