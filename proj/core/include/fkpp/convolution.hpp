#pragma once

#include <span>
#include <vector>

#include "fkpp/grid.hpp"

namespace fkpp {

/// Which window rule to use when precomputing quadrature weights. The automatic
/// rule selects full_interval for a <= 1/2 and clipped for a > 1/2; the explicit
/// values exist so the two can be compared at the matching point a = 1/2.
enum class WindowRule { automatic, full_interval, clipped };

/// Precomputed trapezium weights for the top-hat convolution
///   (K u)_i  ~  integral of u over [alpha(x_i), beta(x_i)],
/// where the window is [0, a] for a <= 1/2 and [max(x_i - 1/2, 0), min(x_i + 1/2, a)]
/// otherwise. Window endpoints falling between nodes contribute a partial panel
/// with u linearly interpolated at the cut point, so constants integrate exactly.
///
/// Immutable after construction; safe to share across threads.
class ConvolutionOperator {
public:
    ConvolutionOperator(const Grid& g, const Params& p, WindowRule rule = WindowRule::automatic);

    int rows() const { return static_cast<int>(row_begin_.size()); }
    double alpha(int i) const { return alpha_[i]; }
    double beta(int i) const { return beta_[i]; }

    /// First column with a nonzero weight in row i.
    int row_begin(int i) const { return row_begin_[i]; }
    std::span<const double> row_weights(int i) const;

    /// Max distance from the diagonal to a nonzero weight, over all rows.
    int band_halfwidth() const { return halfwidth_; }

    /// O(n) evaluation via cumulative trapezium sums.
    std::vector<double> apply(const Profile& u) const;

    /// Banded weight-matrix product; agrees with apply() to roundoff.
    std::vector<double> apply_weights(const Profile& u) const;

    double dx() const { return dx_; }

private:
    double dx_ = 0.0;
    double a_ = 0.0;
    int halfwidth_ = 0;
    std::vector<double> alpha_, beta_;
    std::vector<int> row_begin_;
    std::vector<int> row_offset_; // prefix offsets into weights_
    std::vector<double> weights_;
    // fractional endpoint panels for the O(n) apply path
    std::vector<int> lo_panel_, hi_panel_;
    std::vector<double> lo_frac_, hi_frac_;
};

ConvolutionOperator build_convolution(const Grid& g, const Params& p,
                                      WindowRule rule = WindowRule::automatic);

} // namespace fkpp
