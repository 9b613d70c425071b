#pragma once

// Brute-force majorization oracle, independent of the library's witness path:
// lambda_A lies in the convex hull of the n! row permutations of lambda_B.
// Membership is decided by an exhaustive LP over the n! vertices, solved with
// a self-contained dense two-phase simplex (classic KACTL-style tableau).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

namespace oracle {

/// max c.x subject to Ax <= b, x >= 0; returns -inf if infeasible.
struct TinySimplex {
    using Vec = std::vector<double>;
    using Mat = std::vector<Vec>;

    static constexpr double kEps = 1e-9;
    int m, n;
    std::vector<int> N, B;
    Mat D;

    TinySimplex(const Mat& a, const Vec& b, const Vec& c)
        : m(static_cast<int>(b.size())), n(static_cast<int>(c.size())), N(n + 1), B(m),
          D(m + 2, Vec(n + 2)) {
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) D[i][j] = a[i][j];
        for (int i = 0; i < m; ++i) {
            B[i] = n + i;
            D[i][n] = -1;
            D[i][n + 1] = b[i];
        }
        for (int j = 0; j < n; ++j) {
            N[j] = j;
            D[m][j] = -c[j];
        }
        N[n] = -1;
        D[m + 1][n] = 1;
    }

    void pivot(int r, int s) {
        double* a = D[r].data();
        double inv = 1.0 / a[s];
        for (int i = 0; i < m + 2; ++i) {
            if (i != r && std::abs(D[i][s]) > kEps) {
                double* b2 = D[i].data();
                double inv2 = b2[s] * inv;
                for (int j = 0; j < n + 2; ++j) b2[j] -= a[j] * inv2;
                b2[s] = a[s] * inv2;
            }
        }
        for (int j = 0; j < n + 2; ++j)
            if (j != s) D[r][j] *= inv;
        for (int i = 0; i < m + 2; ++i)
            if (i != r) D[i][s] *= -inv;
        D[r][s] = inv;
        std::swap(B[r], N[s]);
    }

    bool simplex(int phase) {
        int x = m + phase - 1;
        for (;;) {
            int s = -1;
            for (int j = 0; j < n + 1; ++j) {
                if (N[j] == -phase) continue;
                if (s == -1 || std::make_pair(D[x][j], N[j]) < std::make_pair(D[x][s], N[s]))
                    s = j;
            }
            if (D[x][s] >= -kEps) return true;
            int r = -1;
            for (int i = 0; i < m; ++i) {
                if (D[i][s] <= kEps) continue;
                if (r == -1 || std::make_pair(D[i][n + 1] / D[i][s], B[i]) <
                                   std::make_pair(D[r][n + 1] / D[r][s], B[r]))
                    r = i;
            }
            if (r == -1) return false;
            pivot(r, s);
        }
    }

    double solve(Vec& x) {
        int r = 0;
        for (int i = 1; i < m; ++i)
            if (D[i][n + 1] < D[r][n + 1]) r = i;
        if (D[r][n + 1] < -kEps) {
            pivot(r, n);
            if (!simplex(2) || D[m + 1][n + 1] < -kEps)
                return -std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (B[i] == -1) {
                    int s = 0;
                    for (int j = 1; j <= n; ++j)
                        if (s == -1 ||
                            std::make_pair(D[i][j], N[j]) < std::make_pair(D[i][s], N[s]))
                            s = j;
                    pivot(i, s);
                }
            }
        }
        bool ok = simplex(1);
        x.assign(n, 0.0);
        for (int i = 0; i < m; ++i)
            if (B[i] < n) x[B[i]] = D[i][n + 1];
        return ok ? D[m][n + 1] : std::numeric_limits<double>::infinity();
    }
};

/// Is lambda_A = sum_sigma w_sigma P_sigma lambda_B solvable over probability
/// weights w?  Columns are n x m eigen data, row-major [point][member].
inline bool hull_membership(const std::vector<std::vector<double>>& lambda_a,
                            const std::vector<std::vector<double>>& lambda_b, double tol) {
    const std::size_t n = lambda_a.size();
    const std::size_t m = lambda_a.front().size();

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<std::size_t>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    const std::size_t vars = perms.size();
    TinySimplex::Mat a;
    TinySimplex::Vec b;
    // |sum_sigma w_sigma (P_sigma lambda_B)_(i,j) - lambda_A(i,j)| <= tol
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            TinySimplex::Vec row(vars);
            for (std::size_t s = 0; s < vars; ++s) row[s] = lambda_b[perms[s][i]][j];
            TinySimplex::Vec neg(vars);
            for (std::size_t s = 0; s < vars; ++s) neg[s] = -row[s];
            a.push_back(row);
            b.push_back(lambda_a[i][j] + tol);
            a.push_back(neg);
            b.push_back(-(lambda_a[i][j] - tol));
        }
    }
    // sum w = 1
    a.emplace_back(vars, 1.0);
    b.push_back(1.0);
    a.emplace_back(vars, -1.0);
    b.push_back(-1.0);

    TinySimplex::Vec x;
    TinySimplex lp(a, b, TinySimplex::Vec(vars, 0.0));
    return std::isfinite(lp.solve(x));
}

}  // namespace oracle
