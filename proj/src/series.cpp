#include <bhlab/series.hpp>

namespace bhlab
{

Series<Rat> binomial_series(const Rat &alpha, unsigned b, std::size_t order)
{
    if (b == 0) {
        throw std::invalid_argument("binomial_series: b must be positive");
    }
    std::vector<Rat> out(order, Rat(0));
    Rat coeff(1);
    for (std::size_t k = 0; k * b < order; ++k) {
        // binom(alpha, k) (-1)^k, updated incrementally.
        out[k * b] = coeff;
        coeff *= -(alpha - Rat(static_cast<unsigned long>(k))) / Rat(static_cast<unsigned long>(k + 1));
    }
    return Series<Rat>(std::move(out));
}

Series<Rat> weierstrass_p_tail(const Rat &g2, const Rat &g3, std::size_t order)
{
    std::vector<Rat> out(order, Rat(0));
    // q[k] is the coefficient of u^(2k-2).
    std::vector<Rat> q;
    for (std::size_t k = 2; 2 * k - 2 < order; ++k) {
        if (q.size() < k + 1) {
            q.resize(k + 1, Rat(0));
        }
        if (k == 2) {
            q[k] = g2 / Rat(20);
        } else if (k == 3) {
            q[k] = g3 / Rat(28);
        } else {
            Rat sum(0);
            for (std::size_t m = 2; m + 2 <= k; ++m) {
                sum += q[m] * q[k - m];
            }
            q[k] = Rat(3) * sum / Rat(static_cast<long>((2 * k + 1) * (k - 3)));
        }
        out[2 * k - 2] = q[k];
    }
    return Series<Rat>(std::move(out));
}

Series<Rat> exp_series(std::size_t order)
{
    std::vector<Rat> out;
    out.reserve(order);
    Rat term(1);
    for (std::size_t k = 0; k < order; ++k) {
        out.push_back(term);
        term /= Rat(static_cast<unsigned long>(k + 1));
    }
    return Series<Rat>(std::move(out));
}

Series<Rat> log1p_series(std::size_t order)
{
    std::vector<Rat> out(order, Rat(0));
    for (std::size_t k = 1; k < order; ++k) {
        out[k] = Rat((k % 2 == 1) ? 1L : -1L, static_cast<long>(k));
    }
    return Series<Rat>(std::move(out));
}

} // namespace bhlab
