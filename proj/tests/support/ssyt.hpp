#pragma once

// Independent Schur-polynomial oracle: direct enumeration of semistandard
// Young tableaux.  Deliberately naive — no determinants, no recurrences —
// so it shares no code path with the library evaluation it cross-checks.

#include <array>
#include <complex>
#include <vector>

namespace ssyt {

using cplx = std::complex<double>;

namespace detail {

inline void fill(const std::array<int, 4>& lam, std::vector<std::vector<int>>& rows, int r,
                 int c, const std::array<cplx, 4>& x, cplx monomial, cplx& total) {
    if (r == 4 || lam[static_cast<std::size_t>(r)] == 0) {
        total += monomial;
        return;
    }
    if (c == lam[static_cast<std::size_t>(r)]) {
        fill(lam, rows, r + 1, 0, x, monomial, total);
        return;
    }
    int lo = 1;
    if (c > 0) lo = std::max(lo, rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c - 1)]);            // weak rows
    if (r > 0 && c < lam[static_cast<std::size_t>(r - 1)])
        lo = std::max(lo, rows[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(c)] + 1); // strict columns
    for (int v = lo; v <= 4; ++v) {
        rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v;
        fill(lam, rows, r, c + 1, x, monomial * x[static_cast<std::size_t>(v - 1)], total);
    }
}

} // namespace detail

// s_lambda(x1..x4) = sum over SSYT of shape lambda with entries in {1..4}
// of the content monomial.
inline cplx schur(const std::array<cplx, 4>& x, std::array<int, 4> lam) {
    std::vector<std::vector<int>> rows(4);
    for (int r = 0; r < 4; ++r) rows[static_cast<std::size_t>(r)].resize(
        static_cast<std::size_t>(lam[static_cast<std::size_t>(r)]), 0);
    cplx total(0.0, 0.0);
    detail::fill(lam, rows, 0, 0, x, cplx(1.0, 0.0), total);
    return total;
}

// Same indexing the library uses: exponent triple to partition.
inline cplx coefficient(const std::array<cplx, 4>& x, int nu1, int nu2, int nu3) {
    return schur(x, {nu1 + nu2 + nu3, nu2 + nu3, nu3, 0});
}

} // namespace ssyt
