#pragma once

#include "errors.hpp"
#include "vec3.hpp"

namespace boojum {

// Symmetric traceless 3x3 matrix stored by its five independent entries.
// The (3,3) entry is implicit as -(q11+q22).
struct QTensor {
    double q11 = 0.0, q12 = 0.0, q13 = 0.0, q22 = 0.0, q23 = 0.0;

    QTensor() = default;
    QTensor(double a11, double a12, double a13, double a22, double a23)
        : q11(a11), q12(a12), q13(a13), q22(a22), q23(a23) {}

    double q33() const { return -q11 - q22; }

    QTensor operator+(const QTensor& o) const {
        return {q11 + o.q11, q12 + o.q12, q13 + o.q13, q22 + o.q22, q23 + o.q23};
    }
    QTensor operator-(const QTensor& o) const {
        return {q11 - o.q11, q12 - o.q12, q13 - o.q13, q22 - o.q22, q23 - o.q23};
    }
    QTensor operator*(double s) const {
        return {q11 * s, q12 * s, q13 * s, q22 * s, q23 * s};
    }
    QTensor& operator+=(const QTensor& o) {
        q11 += o.q11; q12 += o.q12; q13 += o.q13; q22 += o.q22; q23 += o.q23;
        return *this;
    }
    QTensor& operator-=(const QTensor& o) {
        q11 -= o.q11; q12 -= o.q12; q13 -= o.q13; q22 -= o.q22; q23 -= o.q23;
        return *this;
    }

    // Frobenius norm squared of the full 3x3 matrix, |Q|^2 = tr(Q^2).
    double norm2() const {
        const double a33 = q33();
        return q11 * q11 + q22 * q22 + a33 * a33 +
               2.0 * (q12 * q12 + q13 * q13 + q23 * q23);
    }
    double norm() const { return std::sqrt(norm2()); }

    // tr(A B) for symmetric A, B; equals the Frobenius inner product.
    double dot(const QTensor& o) const {
        return q11 * o.q11 + q22 * o.q22 + q33() * o.q33() +
               2.0 * (q12 * o.q12 + q13 * o.q13 + q23 * o.q23);
    }

    Vec3 apply(const Vec3& v) const {
        const double a33 = q33();
        return {q11 * v.x + q12 * v.y + q13 * v.z,
                q12 * v.x + q22 * v.y + q23 * v.z,
                q13 * v.x + q23 * v.y + a33 * v.z};
    }

    double det() const {
        const double a33 = q33();
        return q11 * (q22 * a33 - q23 * q23) - q12 * (q12 * a33 - q23 * q13) +
               q13 * (q12 * q23 - q22 * q13);
    }

    // tr(Q^3) = 3 det(Q) for traceless Q.
    double tr_cubed() const { return 3.0 * det(); }

    // Deviatoric (traceless) part of a symmetric matrix given by its upper triangle.
    static QTensor deviatoric(double m11, double m12, double m13,
                              double m22, double m23, double m33) {
        const double t = (m11 + m22 + m33) / 3.0;
        return {m11 - t, m12, m13, m22 - t, m23};
    }
};

inline QTensor operator*(double s, const QTensor& q) { return q * s; }

// Material constants of the model with the derived quantities the solver and
// tests rely on. Construction validates b^2 > 27 a c and positivity.
struct MaterialParams {
    double a = 0.0;
    double b = 1.0, c = 1.0, s1 = 1.0, s2 = 1.0;
    double L = 1.0;
    // Derived on construction:
    double s0 = 0.0;          // (b + sqrt(b^2 - 24 a c)) / (4 c)
    double linf_bound = 0.0;  // sqrt(2 s0^2 / 3 + s1 / (12 s2))
    double min_f_bulk = 0.0;  // min over S_0 of the quartic bulk potential

    MaterialParams(double a_, double b_, double c_, double s1_, double s2_, double L_);

    MaterialParams with_L(double new_L) const {
        return MaterialParams(a, b, c, s1, s2, new_L);
    }
};

double s0_of(double a, double b, double c);

// Bulk potential shifted so its minimum over S_0 is zero.
double f_bulk(const QTensor& q, const MaterialParams& p);

// Gradient of f_bulk under the tr(AB) pairing; symmetric traceless.
QTensor f_bulk_grad(const QTensor& q, const MaterialParams& p);

// Fournier-Galatola surface density at outward unit normal nu.
double f_surface(const QTensor& q, const Vec3& nu, const MaterialParams& p);

QTensor f_surface_grad(const QTensor& q, const Vec3& nu, const MaterialParams& p);

// Q = s0 (n x n - I/3) for unit n.
QTensor uniaxial(const Vec3& n, const MaterialParams& p);

struct DirectorState {
    Vec3 n{0.0, 0.0, 1.0}; // leading unit eigenvector, sign-fixed
    double s = 0.0;        // 3/2 of the leading eigenvalue
    double beta = 0.0;     // biaxiality in [0,1]
};

DirectorState director_of(const QTensor& q);

} // namespace boojum
