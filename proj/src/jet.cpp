#include "martinkern/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "martinkern/errors.hpp"

namespace martinkern {

namespace {

constexpr double kSingular = 1e-300;

int common_order(const Jet& a, const Jet& b) {
    return std::min(a.order(), b.order());
}

} // namespace

Jet::Jet(int order, Complex value) {
    if (order < 0) {
        throw std::invalid_argument("jet order must be non-negative");
    }
    coeffs_.assign(static_cast<size_t>(order) + 1, Complex{});
    coeffs_[0] = value;
}

Jet Jet::variable(int order, Complex at) {
    Jet j(order, at);
    if (order >= 1) {
        j[1] = 1.0;
    }
    return j;
}

Jet Jet::from_coeffs(std::vector<Complex> coeffs) {
    if (coeffs.empty()) {
        throw std::invalid_argument("jet needs at least one coefficient");
    }
    Jet j;
    j.coeffs_ = std::move(coeffs);
    return j;
}

Complex Jet::derivative(int r) const {
    return factorial(r) * coeffs_.at(static_cast<size_t>(r));
}

Jet Jet::truncated(int order) const {
    Jet j(order);
    for (int k = 0; k <= std::min(order, this->order()); ++k) {
        j[k] = (*this)[k];
    }
    return j;
}

Jet Jet::differentiated() const {
    const int n = std::max(order() - 1, 0);
    Jet d(n);
    for (int k = 0; k + 1 <= order(); ++k) {
        d[k] = static_cast<double>(k + 1) * (*this)[k + 1];
    }
    return d;
}

Jet Jet::reciprocal() const {
    return Complex{1.0} / *this;
}

Jet Jet::pow(int exponent) const {
    if (exponent < 0) {
        return reciprocal().pow(-exponent);
    }
    Jet result(order(), 1.0);
    Jet base = *this;
    while (exponent > 0) {
        if (exponent & 1) {
            result *= base;
        }
        exponent >>= 1;
        if (exponent > 0) {
            base *= base;
        }
    }
    return result;
}

Jet& Jet::operator+=(const Jet& rhs) {
    coeffs_.resize(static_cast<size_t>(common_order(*this, rhs)) + 1);
    for (int k = 0; k <= order(); ++k) {
        (*this)[k] += rhs[k];
    }
    return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
    coeffs_.resize(static_cast<size_t>(common_order(*this, rhs)) + 1);
    for (int k = 0; k <= order(); ++k) {
        (*this)[k] -= rhs[k];
    }
    return *this;
}

Jet& Jet::operator*=(const Jet& rhs) {
    *this = *this * rhs;
    return *this;
}

Jet& Jet::operator/=(const Jet& rhs) {
    *this = *this / rhs;
    return *this;
}

Jet& Jet::operator+=(Complex rhs) {
    coeffs_[0] += rhs;
    return *this;
}

Jet& Jet::operator-=(Complex rhs) {
    coeffs_[0] -= rhs;
    return *this;
}

Jet& Jet::operator*=(Complex rhs) {
    for (auto& c : coeffs_) {
        c *= rhs;
    }
    return *this;
}

Jet& Jet::operator/=(Complex rhs) {
    for (auto& c : coeffs_) {
        c /= rhs;
    }
    return *this;
}

Jet Jet::operator-() const {
    Jet j = *this;
    for (auto& c : j.coeffs_) {
        c = -c;
    }
    return j;
}

double Jet::distance(const Jet& other) const {
    double d = 0.0;
    for (int k = 0; k <= common_order(*this, other); ++k) {
        d = std::max(d, std::abs((*this)[k] - other[k]));
    }
    return d;
}

double Jet::sup_norm() const {
    double d = 0.0;
    for (const auto& c : coeffs_) {
        d = std::max(d, std::abs(c));
    }
    return d;
}

Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }

Jet operator*(const Jet& lhs, const Jet& rhs) {
    const int n = common_order(lhs, rhs);
    Jet out(n);
    for (int k = 0; k <= n; ++k) {
        Complex s{};
        for (int j = 0; j <= k; ++j) {
            s += lhs[j] * rhs[k - j];
        }
        out[k] = s;
    }
    return out;
}

Jet operator/(const Jet& lhs, const Jet& rhs) {
    const Complex b0 = rhs.value();
    if (std::abs(b0) < kSingular) {
        throw Error(ErrorCode::SingularJet, "division by a jet with vanishing value");
    }
    const int n = common_order(lhs, rhs);
    Jet q(n);
    for (int k = 0; k <= n; ++k) {
        Complex s = lhs[k];
        for (int j = 1; j <= k; ++j) {
            s -= rhs[j] * q[k - j];
        }
        q[k] = s / b0;
    }
    return q;
}

Jet operator+(Jet lhs, Complex rhs) { return lhs += rhs; }
Jet operator-(Jet lhs, Complex rhs) { return lhs -= rhs; }
Jet operator*(Jet lhs, Complex rhs) { return lhs *= rhs; }
Jet operator/(Jet lhs, Complex rhs) { return lhs /= rhs; }
Jet operator+(Complex lhs, Jet rhs) { return rhs += lhs; }
Jet operator-(Complex lhs, const Jet& rhs) { return (-rhs) + lhs; }
Jet operator*(Complex lhs, Jet rhs) { return rhs *= lhs; }
Jet operator/(Complex lhs, const Jet& rhs) {
    return Jet::constant(rhs.order(), lhs) / rhs;
}

Jet sqrt(const Jet& x) {
    Jet s(x.order(), std::sqrt(x.value()));
    if (x.order() == 0) {
        return s;
    }
    if (std::abs(s.value()) < kSingular) {
        throw Error(ErrorCode::SingularJet, "square root jet at a zero value");
    }
    const Complex two_s0 = 2.0 * s.value();
    for (int k = 1; k <= x.order(); ++k) {
        Complex acc = x[k];
        for (int j = 1; j < k; ++j) {
            acc -= s[j] * s[k - j];
        }
        s[k] = acc / two_s0;
    }
    return s;
}

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) {
        f *= k;
    }
    return f;
}

} // namespace martinkern
