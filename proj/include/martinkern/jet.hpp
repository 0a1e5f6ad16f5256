#pragma once

#include <complex>
#include <span>
#include <vector>

namespace martinkern {

using Complex = std::complex<double>;

/**
 * Truncated Taylor expansion in λ around a base point.
 *
 * Coefficient k holds the k-th λ-derivative divided by k!. All arithmetic
 * truncates at the order of the operands; mixing jets of different orders
 * yields a jet of the smaller order.
 */
class Jet {
public:
    Jet() : coeffs_(1) {}
    explicit Jet(int order, Complex value = {});

    static Jet constant(int order, Complex value) { return Jet(order, value); }
    /// The independent variable λ expanded at `at`.
    static Jet variable(int order, Complex at);
    static Jet from_coeffs(std::vector<Complex> coeffs);

    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    Complex value() const noexcept { return coeffs_[0]; }
    /// r-th derivative, i.e. r! times coefficient r.
    Complex derivative(int r) const;

    Complex operator[](int k) const { return coeffs_[static_cast<size_t>(k)]; }
    Complex& operator[](int k) { return coeffs_[static_cast<size_t>(k)]; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }

    Jet truncated(int order) const;
    /// d/dλ of the expansion; the result has one order less (order 0 stays 0).
    Jet differentiated() const;
    Jet reciprocal() const;
    Jet pow(int exponent) const;

    Jet& operator+=(const Jet& rhs);
    Jet& operator-=(const Jet& rhs);
    Jet& operator*=(const Jet& rhs);
    Jet& operator/=(const Jet& rhs);
    Jet& operator+=(Complex rhs);
    Jet& operator-=(Complex rhs);
    Jet& operator*=(Complex rhs);
    Jet& operator/=(Complex rhs);

    Jet operator-() const;

    /// Largest coefficient-wise modulus of the difference.
    double distance(const Jet& other) const;
    double sup_norm() const;

private:
    std::vector<Complex> coeffs_;
};

Jet operator+(Jet lhs, const Jet& rhs);
Jet operator-(Jet lhs, const Jet& rhs);
Jet operator*(const Jet& lhs, const Jet& rhs);
Jet operator/(const Jet& lhs, const Jet& rhs);
Jet operator+(Jet lhs, Complex rhs);
Jet operator-(Jet lhs, Complex rhs);
Jet operator*(Jet lhs, Complex rhs);
Jet operator/(Jet lhs, Complex rhs);
Jet operator+(Complex lhs, Jet rhs);
Jet operator-(Complex lhs, const Jet& rhs);
Jet operator*(Complex lhs, Jet rhs);
Jet operator/(Complex lhs, const Jet& rhs);

/// Principal-branch square root; higher coefficients need a non-zero value.
Jet sqrt(const Jet& x);

double factorial(int n);

} // namespace martinkern
