#include "bergman/svd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bergman {

std::vector<double> singular_values_jacobi(std::vector<std::complex<double>> a, int rows,
                                           int cols, double tol, int max_sweeps) {
    using cplx = std::complex<double>;
    if (rows < 1 || cols < 1 || static_cast<long>(rows) * cols != static_cast<long>(a.size()))
        throw std::invalid_argument("singular_values_jacobi: shape mismatch");

    // column-major working copy
    std::vector<cplx> col(static_cast<size_t>(rows) * cols);
    for (int j = 0; j < rows; ++j)
        for (int k = 0; k < cols; ++k) col[static_cast<size_t>(k) * rows + j] = a[j * cols + k];

    auto col_ptr = [&](int k) { return col.data() + static_cast<size_t>(k) * rows; };

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < cols - 1; ++p) {
            for (int q = p + 1; q < cols; ++q) {
                cplx* cp = col_ptr(p);
                cplx* cq = col_ptr(q);
                double app = 0.0, aqq = 0.0;
                cplx apq = 0.0;
                for (int i = 0; i < rows; ++i) {
                    app += std::norm(cp[i]);
                    aqq += std::norm(cq[i]);
                    apq += std::conj(cp[i]) * cq[i];
                }
                const double denom = std::sqrt(app * aqq);
                if (denom == 0.0 || std::abs(apq) <= tol * denom) continue;
                off = std::max(off, std::abs(apq) / denom);

                const double mod = std::abs(apq);
                const cplx phase = apq / mod;
                const double tau = (aqq - app) / (2.0 * mod);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < rows; ++i) {
                    cplx vp = cp[i], vq = cq[i];
                    cp[i] = c * vp - s * std::conj(phase) * vq;
                    cq[i] = s * phase * vp + c * vq;
                }
            }
        }
        if (off < tol) break;
    }

    std::vector<double> sv(cols);
    for (int k = 0; k < cols; ++k) {
        double n2 = 0.0;
        const cplx* ck = col_ptr(k);
        for (int i = 0; i < rows; ++i) n2 += std::norm(ck[i]);
        sv[k] = std::sqrt(n2);
    }
    std::sort(sv.begin(), sv.end(), std::greater<double>());
    return sv;
}

}  // namespace bergman
