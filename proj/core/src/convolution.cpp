#include "fkpp/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fkpp {

namespace {

// Panel index j with x_j <= p <= x_{j+1}, robust to rounding at node hits.
int panel_of(const std::vector<double>& x, double dx, double p) {
    const int n = static_cast<int>(x.size()) - 1;
    int j = std::clamp(static_cast<int>(p / dx), 0, n - 1);
    while (j > 0 && x[j] > p) --j;
    while (j < n - 1 && x[j + 1] < p) ++j;
    return j;
}

// Trapezium weights of the integral over [lo, hi] with u linear between nodes.
void accumulate_weights(const std::vector<double>& x, double dx, double lo, double hi,
                        std::vector<double>& w) {
    const int j0 = panel_of(x, dx, lo);
    const int j1 = panel_of(x, dx, hi);
    if (j0 == j1) {
        const double t0 = (lo - x[j0]) / dx;
        const double t1 = (hi - x[j0]) / dx;
        const double h = hi - lo;
        w[j0] += 0.5 * h * ((1.0 - t0) + (1.0 - t1));
        w[j0 + 1] += 0.5 * h * (t0 + t1);
        return;
    }
    {
        const double t0 = (lo - x[j0]) / dx;
        const double h = x[j0 + 1] - lo;
        w[j0] += 0.5 * h * (1.0 - t0);
        w[j0 + 1] += 0.5 * h * (1.0 + t0);
    }
    for (int j = j0 + 1; j < j1; ++j) {
        w[j] += 0.5 * dx;
        w[j + 1] += 0.5 * dx;
    }
    {
        const double s = (hi - x[j1]) / dx;
        const double h = hi - x[j1];
        w[j1] += 0.5 * h * (2.0 - s);
        w[j1 + 1] += 0.5 * h * s;
    }
}

} // namespace

ConvolutionOperator::ConvolutionOperator(const Grid& g, const Params& p, WindowRule rule) {
    if (g.n < 1) throw std::invalid_argument("convolution: empty grid");
    const double a = g.a;
    const bool full = (rule == WindowRule::full_interval) ||
                      (rule == WindowRule::automatic && a <= 0.5);
    if (rule == WindowRule::full_interval && a > 0.5)
        throw std::invalid_argument("convolution: full-interval window rule requires a <= 1/2");

    dx_ = g.dx;
    a_ = a;
    const int m = g.size();
    alpha_.resize(m);
    beta_.resize(m);
    row_begin_.resize(m);
    row_offset_.resize(m + 1, 0);
    lo_panel_.resize(m);
    hi_panel_.resize(m);
    lo_frac_.resize(m);
    hi_frac_.resize(m);

    std::vector<double> w(m);
    size_t total = 0;
    for (int i = 0; i < m; ++i) {
        alpha_[i] = full ? 0.0 : std::max(g.x[i] - 0.5, 0.0);
        beta_[i] = full ? a : std::min(g.x[i] + 0.5, a);
        lo_panel_[i] = panel_of(g.x, dx_, alpha_[i]);
        hi_panel_[i] = panel_of(g.x, dx_, beta_[i]);
        lo_frac_[i] = (alpha_[i] - g.x[lo_panel_[i]]) / dx_;
        hi_frac_[i] = (beta_[i] - g.x[hi_panel_[i]]) / dx_;
        total += static_cast<size_t>(hi_panel_[i] + 1 - lo_panel_[i] + 1);
    }
    weights_.assign(total, 0.0);

    halfwidth_ = 0;
    size_t pos = 0;
    for (int i = 0; i < m; ++i) {
        const int first = lo_panel_[i];
        const int last = hi_panel_[i] + 1;
        row_begin_[i] = first;
        row_offset_[i] = static_cast<int>(pos);
        std::fill(w.begin() + first, w.begin() + last + 1, 0.0);
        accumulate_weights(g.x, dx_, alpha_[i], beta_[i], w);
        for (int j = first; j <= last; ++j) weights_[pos++] = w[j];
        halfwidth_ = std::max({halfwidth_, i - first, last - i});
    }
    row_offset_[m] = static_cast<int>(pos);
}

std::span<const double> ConvolutionOperator::row_weights(int i) const {
    return {weights_.data() + row_offset_[i],
            static_cast<size_t>(row_offset_[i + 1] - row_offset_[i])};
}

std::vector<double> ConvolutionOperator::apply(const Profile& u) const {
    const int m = rows();
    if (static_cast<int>(u.size()) != m)
        throw std::invalid_argument("convolution: profile does not match operator grid");

    // Cumulative trapezium integral at nodes, then O(1) per row from the
    // precomputed fractional endpoint panels.
    std::vector<double> c(m);
    c[0] = 0.0;
    for (int j = 0; j + 1 < m; ++j) c[j + 1] = c[j] + 0.5 * dx_ * (u[j] + u[j + 1]);

    auto upto = [&](int j, double t) {
        const double up = (1.0 - t) * u[j] + t * u[j + 1];
        return c[j] + 0.5 * t * dx_ * (u[j] + up);
    };

    std::vector<double> out(m);
    for (int i = 0; i < m; ++i)
        out[i] = upto(hi_panel_[i], hi_frac_[i]) - upto(lo_panel_[i], lo_frac_[i]);
    return out;
}

std::vector<double> ConvolutionOperator::apply_weights(const Profile& u) const {
    const int m = rows();
    if (static_cast<int>(u.size()) != m)
        throw std::invalid_argument("convolution: profile does not match operator grid");
    std::vector<double> out(m, 0.0);
    for (int i = 0; i < m; ++i) {
        const auto w = row_weights(i);
        const double* uu = u.data() + row_begin_[i];
        double s = 0.0;
        for (size_t k = 0; k < w.size(); ++k) s += w[k] * uu[k];
        out[i] = s;
    }
    return out;
}

ConvolutionOperator build_convolution(const Grid& g, const Params& p, WindowRule rule) {
    return ConvolutionOperator(g, p, rule);
}

} // namespace fkpp
