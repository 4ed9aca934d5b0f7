#include "qtensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace boojum {

namespace {

constexpr double kUnitTol = 1e-9;

void require_unit(const Vec3& v, const char* what) {
    if (std::abs(v.norm() - 1.0) > kUnitTol) {
        std::ostringstream os;
        os << what << " must be a unit vector; got |v| = " << v.norm();
        throw InvalidParameter(os.str());
    }
}

double f_bulk_star(const QTensor& q, double a, double b, double c) {
    const double t2 = q.norm2();
    const double t3 = q.tr_cubed();
    return 0.5 * a * t2 - (b / 3.0) * t3 + 0.25 * c * t2 * t2;
}

// Bulk potential restricted to the uniaxial ray s (n x n - I/3):
// tr(Q^2) = 2 s^2 / 3 and tr(Q^3) = 2 s^3 / 9.
double f_bulk_star_ray(double s, double a, double b, double c) {
    return (a / 3.0) * s * s - (2.0 * b / 27.0) * s * s * s +
           (c / 9.0) * s * s * s * s;
}

// Golden-section minimization of the bulk potential along the uniaxial ray,
// used once per parameter set to confirm the closed-form minimum.
double min_f_bulk_numeric(double a, double b, double c, double s0) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 0.0, hi = 2.5 * s0;
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = f_bulk_star_ray(x1, a, b, c);
    double f2 = f_bulk_star_ray(x2, a, b, c);
    for (int it = 0; it < 200; ++it) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f_bulk_star_ray(x1, a, b, c);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f_bulk_star_ray(x2, a, b, c);
        }
    }
    return std::min(f1, f2);
}

} // namespace

double s0_of(double a, double b, double c) {
    if (!(b > 0.0) || !(c > 0.0)) {
        throw InvalidParameter("material constants b and c must be positive");
    }
    if (!(b * b > 27.0 * a * c)) {
        std::ostringstream os;
        os << "parameters must satisfy b^2 > 27ac; got b^2 = " << b * b
           << ", 27ac = " << 27.0 * a * c;
        throw InvalidParameter(os.str());
    }
    return (b + std::sqrt(b * b - 24.0 * a * c)) / (4.0 * c);
}

MaterialParams::MaterialParams(double a_, double b_, double c_, double s1_,
                               double s2_, double L_)
    : a(a_), b(b_), c(c_), s1(s1_), s2(s2_), L(L_) {
    s0 = s0_of(a, b, c);
    if (!(s1 > 0.0) || !(s2 > 0.0)) {
        throw InvalidParameter("anchoring constants s1 and s2 must be positive");
    }
    if (!(L > 0.0)) {
        throw InvalidParameter("elastic constant L must be positive");
    }
    linf_bound = std::sqrt(2.0 * s0 * s0 / 3.0 + s1 / (12.0 * s2));
    min_f_bulk = f_bulk_star_ray(s0, a, b, c);

    const double numeric = min_f_bulk_numeric(a, b, c, s0);
    const double scale = std::max(1.0, std::abs(min_f_bulk));
    if (std::abs(numeric - min_f_bulk) > 1e-9 * scale) {
        std::ostringstream os;
        os << "closed-form bulk minimum " << min_f_bulk
           << " disagrees with 1-D minimization " << numeric;
        throw NumericalError(os.str());
    }
}

double f_bulk(const QTensor& q, const MaterialParams& p) {
    return f_bulk_star(q, p.a, p.b, p.c) - p.min_f_bulk;
}

QTensor f_bulk_grad(const QTensor& q, const MaterialParams& p) {
    const double t2 = q.norm2();
    const double a33 = q.q33();
    // Upper triangle of Q^2.
    const double m11 = q.q11 * q.q11 + q.q12 * q.q12 + q.q13 * q.q13;
    const double m12 = q.q11 * q.q12 + q.q12 * q.q22 + q.q13 * q.q23;
    const double m13 = q.q11 * q.q13 + q.q12 * q.q23 + q.q13 * a33;
    const double m22 = q.q12 * q.q12 + q.q22 * q.q22 + q.q23 * q.q23;
    const double m23 = q.q12 * q.q13 + q.q22 * q.q23 + q.q23 * a33;
    const double m33 = q.q13 * q.q13 + q.q23 * q.q23 + a33 * a33;
    const QTensor q2_dev = QTensor::deviatoric(m11, m12, m13, m22, m23, m33);
    return q * (p.a + p.c * t2) - q2_dev * p.b;
}

double f_surface(const QTensor& q, const Vec3& nu, const MaterialParams& p) {
    require_unit(nu, "surface normal");
    const Vec3 qn = q.apply(nu);
    const double nqn = nu.dot(qn);
    const double nq2n = qn.norm2();
    const double s0 = p.s0;
    const double dev = q.norm2() - 2.0 * s0 * s0 / 3.0;
    return p.s1 * (nq2n + (2.0 / 3.0) * s0 * nqn + s0 * s0 / 9.0) +
           p.s2 * dev * dev;
}

QTensor f_surface_grad(const QTensor& q, const Vec3& nu, const MaterialParams& p) {
    require_unit(nu, "surface normal");
    const Vec3 w = q.apply(nu);
    const double d = w.dot(nu); // tr(Q nu x nu)
    // Traceless symmetrized dyad Q(nu x nu) + (nu x nu)Q - (2/3) tr[.] I.
    const QTensor anchor{
        2.0 * w.x * nu.x - (2.0 / 3.0) * d,
        w.x * nu.y + nu.x * w.y,
        w.x * nu.z + nu.x * w.z,
        2.0 * w.y * nu.y - (2.0 / 3.0) * d,
        w.y * nu.z + nu.y * w.z};
    const QTensor nn{nu.x * nu.x - 1.0 / 3.0, nu.x * nu.y, nu.x * nu.z,
                     nu.y * nu.y - 1.0 / 3.0, nu.y * nu.z};
    const double dev = q.norm2() - 2.0 * p.s0 * p.s0 / 3.0;
    return anchor * p.s1 + nn * ((2.0 / 3.0) * p.s0 * p.s1) + q * (4.0 * p.s2 * dev);
}

QTensor uniaxial(const Vec3& n, const MaterialParams& p) {
    require_unit(n, "director");
    const double s0 = p.s0;
    return {s0 * (n.x * n.x - 1.0 / 3.0), s0 * n.x * n.y, s0 * n.x * n.z,
            s0 * (n.y * n.y - 1.0 / 3.0), s0 * n.y * n.z};
}

namespace {

// Cyclic Jacobi for a symmetric 3x3 matrix; deterministic and ample for
// nodal post-processing.
void jacobi_eigen(const QTensor& q, std::array<double, 3>& eval,
                  std::array<Vec3, 3>& evec) {
    double A[3][3] = {{q.q11, q.q12, q.q13},
                      {q.q12, q.q22, q.q23},
                      {q.q13, q.q23, q.q33()}};
    double V[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = A[0][1] * A[0][1] + A[0][2] * A[0][2] + A[1][2] * A[1][2];
        if (off < 1e-32) break;
        for (int pq = 0; pq < 3; ++pq) {
            const int pi = pq == 2 ? 1 : 0;
            const int qi = pq == 0 ? 1 : 2;
            if (A[pi][qi] == 0.0) continue;
            const double theta = (A[qi][qi] - A[pi][pi]) / (2.0 * A[pi][qi]);
            const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                             (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            const double cs = 1.0 / std::sqrt(t * t + 1.0);
            const double sn = t * cs;
            for (int k = 0; k < 3; ++k) {
                const double akp = A[k][pi], akq = A[k][qi];
                A[k][pi] = cs * akp - sn * akq;
                A[k][qi] = sn * akp + cs * akq;
            }
            for (int k = 0; k < 3; ++k) {
                const double apk = A[pi][k], aqk = A[qi][k];
                A[pi][k] = cs * apk - sn * aqk;
                A[qi][k] = sn * apk + cs * aqk;
            }
            for (int k = 0; k < 3; ++k) {
                const double vkp = V[k][pi], vkq = V[k][qi];
                V[k][pi] = cs * vkp - sn * vkq;
                V[k][qi] = sn * vkp + cs * vkq;
            }
        }
    }
    for (int i = 0; i < 3; ++i) {
        eval[i] = A[i][i];
        evec[i] = Vec3{V[0][i], V[1][i], V[2][i]}.normalized();
    }
}

} // namespace

DirectorState director_of(const QTensor& q) {
    DirectorState out;
    const double qn2 = q.norm2();
    if (qn2 < 1e-24) {
        // Isotropic point (defect core): fixed convention.
        return out;
    }
    std::array<double, 3> eval;
    std::array<Vec3, 3> evec;
    jacobi_eigen(q, eval, evec);
    int lead = 0;
    for (int i = 1; i < 3; ++i) {
        if (eval[i] > eval[lead]) lead = i;
    }
    Vec3 n = evec[lead];
    // Sign fix: first component larger than tolerance made positive.
    double flip = 1.0;
    if (std::abs(n.x) > 1e-12) {
        flip = n.x > 0.0 ? 1.0 : -1.0;
    } else if (std::abs(n.y) > 1e-12) {
        flip = n.y > 0.0 ? 1.0 : -1.0;
    } else {
        flip = n.z > 0.0 ? 1.0 : -1.0;
    }
    out.n = n * flip;
    out.s = 1.5 * eval[lead];
    const double t3 = q.tr_cubed();
    const double beta = 1.0 - 6.0 * t3 * t3 / (qn2 * qn2 * qn2);
    out.beta = std::clamp(beta, 0.0, 1.0);
    return out;
}

} // namespace boojum
