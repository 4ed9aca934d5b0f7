#include <doctest.h>

#include "core/qtensor.hpp"

#include <array>
#include <cmath>
#include <random>

using namespace boojum;

namespace {

MaterialParams reference_params(double L = 1.0) {
    return MaterialParams(-0.3, 1.0, 1.0, 1.0, 1.0, L);
}

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Vec3 v{g(rng), g(rng), g(rng)};
    while (v.norm() < 1e-6) v = Vec3{g(rng), g(rng), g(rng)};
    return v.normalized();
}

QTensor random_q(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng), u(rng), u(rng)};
}

// Full 3x3 matrix form, used as the independent route in the oracles below.
using Mat = std::array<std::array<double, 3>, 3>;

Mat to_mat(const QTensor& q) {
    return {{{q.q11, q.q12, q.q13}, {q.q12, q.q22, q.q23}, {q.q13, q.q23, q.q33()}}};
}

Mat mat_mul(const Mat& a, const Mat& b) {
    Mat c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

double mat_fro2(const Mat& a) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += a[i][j] * a[i][j];
    return s;
}

double mat_trace(const Mat& a) { return a[0][0] + a[1][1] + a[2][2]; }

// Chart basis: perturbation of stored entry k as a matrix direction.
QTensor chart_dir(int k) {
    switch (k) {
        case 0: return {1, 0, 0, 0, 0};
        case 1: return {0, 1, 0, 0, 0};
        case 2: return {0, 0, 1, 0, 0};
        case 3: return {0, 0, 0, 1, 0};
        default: return {0, 0, 0, 0, 1};
    }
}

double golden_min_bulk_ray(double a, double b, double c, double hi) {
    auto f = [&](double s) {
        return (a / 3.0) * s * s - (2.0 * b / 27.0) * s * s * s +
               (c / 9.0) * s * s * s * s;
    };
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 0.0;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < 300; ++i) {
        if (f1 < f2) {
            hi = x2; x2 = x1; f2 = f1;
            x1 = hi - phi * (hi - lo); f1 = f(x1);
        } else {
            lo = x1; x1 = x2; f1 = f2;
            x2 = lo + phi * (hi - lo); f2 = f(x2);
        }
    }
    return std::min(f1, f2);
}

// Definitional Fournier-Galatola density via Q^(s0) and the tangent projector.
double f_surface_definitional(const QTensor& q, const Vec3& nu,
                              const MaterialParams& p) {
    Mat m = to_mat(q);
    for (int i = 0; i < 3; ++i) m[i][i] += p.s0 / 3.0;
    Mat proj{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) proj[i][j] = (i == j ? 1.0 : 0.0) - nu[i] * nu[j];
    const Mat pm = mat_mul(proj, m);
    Mat normal_part{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) normal_part[i][j] = m[i][j] - pm[i][j];
    const double dev = mat_fro2(m) - p.s0 * p.s0;
    return p.s1 * mat_fro2(normal_part) + p.s2 * dev * dev;
}

} // namespace

TEST_SUITE_BEGIN("qtensor");

TEST_CASE("s0 closed form") {
    CHECK(s0_of(0.0, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    // Direct evaluation of (b + sqrt(b^2 - 24ac)) / (4c).
    const double expected = (1.0 + std::sqrt(1.0 + 24.0 * 0.3)) / 4.0;
    CHECK(s0_of(-0.3, 1.0, 1.0) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(s0_of(-0.3, 1.0, 1.0) == doctest::Approx(0.965891).epsilon(1e-6));
    CHECK_THROWS_AS(s0_of(1.0 / 27.0 + 1e-9, 1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(s0_of(0.0, -1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(s0_of(0.0, 1.0, 0.0), InvalidParameter);
}

TEST_CASE("material params derived values") {
    const MaterialParams p = reference_params();
    CHECK(p.linf_bound ==
          doctest::Approx(std::sqrt(2.0 * p.s0 * p.s0 / 3.0 + 1.0 / 12.0))
              .epsilon(1e-14));
    CHECK_THROWS_AS(MaterialParams(1.0, 1.0, 1.0, 1.0, 1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(MaterialParams(-0.3, 1.0, 1.0, -1.0, 1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(MaterialParams(-0.3, 1.0, 1.0, 1.0, 1.0, 0.0), InvalidParameter);
}

TEST_CASE("bulk potential vanishes exactly on the uniaxial minimizers") {
    const MaterialParams p = reference_params();
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
        const QTensor q = uniaxial(random_unit(rng), p);
        CHECK(std::abs(f_bulk(q, p)) < 1e-10);
    }
}

TEST_CASE("bulk potential at the isotropic state") {
    const MaterialParams p = reference_params();
    // Independent oracle: 1-D golden-section minimization over the ray.
    const double min_numeric = golden_min_bulk_ray(p.a, p.b, p.c, 2.5 * p.s0);
    CHECK(f_bulk(QTensor{}, p) == doctest::Approx(-min_numeric).epsilon(1e-10));
    CHECK(f_bulk(QTensor{}, p) == doctest::Approx(0.0633352).epsilon(1e-5));

    const MaterialParams p0(0.0, 2.0, 1.0, 1.0, 1.0, 1.0);
    const double s0 = p0.s0; // equals b / (2c)
    CHECK(s0 == doctest::Approx(1.0));
    const double expected = -(-2.0 * p0.b * s0 * s0 * s0 / 27.0 +
                              p0.c * s0 * s0 * s0 * s0 / 9.0);
    CHECK(f_bulk(QTensor{}, p0) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(f_bulk(QTensor{}, p0) ==
          doctest::Approx(-golden_min_bulk_ray(0.0, 2.0, 1.0, 2.5)).epsilon(1e-10));
}

TEST_CASE("bulk potential is nonnegative for bounded random tensors") {
    const MaterialParams p = reference_params();
    std::mt19937_64 rng(12);
    for (int i = 0; i < 10000; ++i) {
        QTensor q = random_q(rng, 2.0);
        const double n = q.norm();
        if (n > 3.0 * p.s0) q = q * (3.0 * p.s0 / n);
        CHECK(f_bulk(q, p) >= -1e-9);
    }
}

TEST_CASE("bulk gradient matches the full-matrix formula and finite differences") {
    const MaterialParams p = reference_params();
    std::mt19937_64 rng(13);
    CHECK(f_bulk_grad(QTensor{}, p).norm() == 0.0);
    for (int i = 0; i < 100; ++i) {
        const QTensor q = random_q(rng, 1.2);
        const QTensor g = f_bulk_grad(q, p);

        // Independent route: assemble a Q - b (Q^2 - |Q|^2 I/3) + c |Q|^2 Q
        // from full 3x3 matrices.
        const Mat qm = to_mat(q);
        const Mat q2 = mat_mul(qm, qm);
        const double t2 = mat_trace(q2);
        Mat gm{};
        for (int r = 0; r < 3; ++r) {
            for (int s = 0; s < 3; ++s) {
                gm[r][s] = p.a * qm[r][s] -
                           p.b * (q2[r][s] - (r == s ? t2 / 3.0 : 0.0)) +
                           p.c * t2 * qm[r][s];
            }
        }
        CHECK(std::abs(mat_trace(gm)) < 1e-12);
        const Mat gq = to_mat(g);
        for (int r = 0; r < 3; ++r)
            for (int s = 0; s < 3; ++s)
                CHECK(gq[r][s] == doctest::Approx(gm[r][s]).epsilon(1e-12));

        // Central differences along each chart direction.
        const double h = 1e-5;
        for (int k = 0; k < 5; ++k) {
            const QTensor d = chart_dir(k);
            const double fp = f_bulk(q + d * h, p);
            const double fm = f_bulk(q - d * h, p);
            const double fd = (fp - fm) / (2.0 * h);
            const double an = g.dot(d);
            CHECK(fd == doctest::Approx(an).epsilon(1e-6));
        }
    }
}

TEST_CASE("bulk gradient has no component along the uniaxial manifold") {
    const MaterialParams p = reference_params();
    std::mt19937_64 rng(14);
    for (int i = 0; i < 20; ++i) {
        const Vec3 n = random_unit(rng);
        Vec3 dn = random_unit(rng);
        dn = (dn - n * dn.dot(n)).normalized();
        const QTensor q = uniaxial(n, p);
        const QTensor g = f_bulk_grad(q, p);
        const double h = 1e-6;
        const QTensor qp = uniaxial((n + dn * h).normalized(), p);
        const QTensor qm = uniaxial((n - dn * h).normalized(), p);
        const QTensor dq = (qp - qm) * (1.0 / (2.0 * h));
        CHECK(std::abs(g.dot(dq)) < 1e-8 * std::max(1.0, dq.norm()));
    }
}

TEST_CASE("surface density closed forms") {
    const MaterialParams p = reference_params();
    const double s0 = p.s0;
    std::mt19937_64 rng(15);

    // Tangential uniaxial state has zero surface energy.
    for (int i = 0; i < 20; ++i) {
        const Vec3 nu = random_unit(rng);
        Vec3 n = random_unit(rng);
        n = (n - nu * n.dot(nu)).normalized();
        CHECK(std::abs(f_surface(uniaxial(n, p), nu, p)) < 1e-10);
    }

    // Normal alignment costs s1 s0^2.
    const Vec3 e3{0, 0, 1};
    CHECK(f_surface(uniaxial(e3, p), e3, p) ==
          doctest::Approx(p.s1 * s0 * s0).epsilon(1e-12));

    // Isotropic value.
    CHECK(f_surface(QTensor{}, e3, p) ==
          doctest::Approx(p.s1 * s0 * s0 / 9.0 +
                          (4.0 / 9.0) * p.s2 * s0 * s0 * s0 * s0)
              .epsilon(1e-12));

    // Lemma-style identity on arbitrary directors.
    for (int i = 0; i < 100; ++i) {
        const Vec3 nu = random_unit(rng);
        const Vec3 n = random_unit(rng);
        const double dotn = n.dot(nu);
        CHECK(f_surface(uniaxial(n, p), nu, p) ==
              doctest::Approx(p.s1 * s0 * s0 * dotn * dotn).epsilon(1e-10));
    }

    CHECK_THROWS_AS(f_surface(QTensor{}, Vec3{0, 0, 2}, p), InvalidParameter);
}

TEST_CASE("surface density agrees with the definitional form") {
    const MaterialParams p = reference_params();
    std::mt19937_64 rng(16);
    for (int i = 0; i < 200; ++i) {
        const QTensor q = random_q(rng, 1.5);
        const Vec3 nu = random_unit(rng);
        const double lhs = f_surface(q, nu, p);
        const double rhs = f_surface_definitional(q, nu, p);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("surface gradient value at zero and finite differences") {
    const MaterialParams p = reference_params();
    std::mt19937_64 rng(17);

    const Vec3 e3{0, 0, 1};
    const QTensor g0 = f_surface_grad(QTensor{}, e3, p);
    const QTensor expected =
        QTensor{-1.0 / 3.0, 0, 0, -1.0 / 3.0, 0} * ((2.0 / 3.0) * p.s0 * p.s1);
    CHECK((g0 - expected).norm() < 1e-14);

    for (int i = 0; i < 100; ++i) {
        const QTensor q = random_q(rng, 1.2);
        const Vec3 nu = random_unit(rng);
        const QTensor g = f_surface_grad(q, nu, p);
        const double h = 1e-5;
        for (int k = 0; k < 5; ++k) {
            const QTensor d = chart_dir(k);
            const double fd =
                (f_surface(q + d * h, nu, p) - f_surface(q - d * h, nu, p)) /
                (2.0 * h);
            CHECK(fd == doctest::Approx(g.dot(d)).epsilon(1e-6));
        }
    }
}

TEST_CASE("surface gradient is flat along tangential uniaxial rotations") {
    const MaterialParams p = reference_params();
    std::mt19937_64 rng(18);
    for (int i = 0; i < 20; ++i) {
        const Vec3 nu = random_unit(rng);
        Vec3 n = random_unit(rng);
        n = (n - nu * n.dot(nu)).normalized();
        const QTensor q = uniaxial(n, p);
        // Rotate the director inside the tangent circle.
        const Vec3 t = nu.cross(n);
        const double h = 1e-6;
        const QTensor qp = uniaxial((n + t * h).normalized(), p);
        const QTensor qm = uniaxial((n - t * h).normalized(), p);
        const QTensor dq = (qp - qm) * (1.0 / (2.0 * h));
        const QTensor g = f_surface_grad(q, nu, p);
        CHECK(std::abs(g.dot(dq)) < 1e-8 * std::max(1.0, dq.norm()));
    }
}

TEST_CASE("uniaxial construction") {
    const MaterialParams p = reference_params();
    const double s0 = p.s0;
    const QTensor q = uniaxial(Vec3{0, 0, 1}, p);
    CHECK(q.q11 == doctest::Approx(-s0 / 3.0).epsilon(1e-15));
    CHECK(q.q22 == doctest::Approx(-s0 / 3.0).epsilon(1e-15));
    CHECK(q.q33() == doctest::Approx(2.0 * s0 / 3.0).epsilon(1e-15));
    CHECK(q.q12 == 0.0);

    std::mt19937_64 rng(19);
    for (int i = 0; i < 50; ++i) {
        const Vec3 n = random_unit(rng);
        const QTensor a = uniaxial(n, p);
        const QTensor b = uniaxial(-1.0 * n, p);
        CHECK((a - b).norm() < 1e-15);
        CHECK(a.norm2() == doctest::Approx(2.0 * s0 * s0 / 3.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(uniaxial(Vec3{0, 0, 0.5}, p), InvalidParameter);
}

TEST_CASE("director extraction") {
    const MaterialParams p = reference_params();
    const DirectorState d = director_of(uniaxial(Vec3{0, 0, 1}, p));
    CHECK(d.n.z == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.s == doctest::Approx(p.s0).epsilon(1e-12));
    CHECK(d.beta == doctest::Approx(0.0));

    const double r = 1.0 / std::sqrt(2.0);
    const DirectorState biax = director_of(QTensor{r, 0, 0, -r, 0});
    CHECK(biax.beta == doctest::Approx(1.0).epsilon(1e-12));

    const DirectorState iso = director_of(QTensor{});
    CHECK(iso.s == 0.0);
    CHECK(iso.beta == 0.0);
    CHECK(iso.n.z == 1.0);

    // Sign convention: first sizable component positive.
    std::mt19937_64 rng(20);
    for (int i = 0; i < 50; ++i) {
        const Vec3 n = random_unit(rng);
        const DirectorState ds = director_of(uniaxial(n, p));
        const double align = std::abs(ds.n.dot(n));
        CHECK(align == doctest::Approx(1.0).epsilon(1e-10));
        if (std::abs(ds.n.x) > 1e-9) {
            CHECK(ds.n.x > 0.0);
        }
    }
}

TEST_SUITE_END();
