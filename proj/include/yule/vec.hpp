#ifndef YULE_VEC_HPP
#define YULE_VEC_HPP

#include <array>
#include <cmath>
#include <initializer_list>
#include <stdexcept>

namespace yule {

// Maximum embedding dimension supported by the inline vector type.
inline constexpr int kMaxDim = 8;

// Point/vector in R^dim with inline storage, so trees with millions of
// segments need no per-point allocation. dim is fixed per run.
struct Vec {
    std::array<double, kMaxDim> c{};
    int dim = 0;

    Vec() = default;

    explicit Vec(int d) : dim(d) { check_dim(d); }

    Vec(std::initializer_list<double> xs) : dim(static_cast<int>(xs.size())) {
        check_dim(dim);
        int i = 0;
        for (double x : xs) c[static_cast<std::size_t>(i++)] = x;
    }

    static void check_dim(int d) {
        if (d < 1 || d > kMaxDim)
            throw std::invalid_argument("Vec: dimension must be between 1 and 8");
    }

    static Vec zero(int d) { return Vec(d); }

    double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
    double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }

    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < dim; ++i) c[i] += o.c[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < dim; ++i) c[i] -= o.c[i];
        return *this;
    }
    Vec& operator*=(double a) {
        for (int i = 0; i < dim; ++i) c[i] *= a;
        return *this;
    }

    friend Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend Vec operator*(double a, Vec v) { return v *= a; }
    friend Vec operator*(Vec v, double a) { return v *= a; }

    friend bool operator==(const Vec& a, const Vec& b) {
        if (a.dim != b.dim) return false;
        for (int i = 0; i < a.dim; ++i)
            if (a.c[i] != b.c[i]) return false;
        return true;
    }
};

inline double dot(const Vec& a, const Vec& b) {
    double s = 0;
    for (int i = 0; i < a.dim; ++i) s += a.c[i] * b.c[i];
    return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }

inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }

inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

}  // namespace yule

#endif  // YULE_VEC_HPP
