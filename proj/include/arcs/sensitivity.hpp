#pragma once

/// @file sensitivity.hpp
/// Sensitivity function families chi(v), xi(w): the built-in power family
/// chat*(1+s)^(-k), a constant family for exploratory runs, and a tabulated
/// family with monotone-preserving interpolation. Hypothesis validation
/// (positivity, integrable tail, damping inequality, product bound) lives
/// here as well.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "arcs/errors.hpp"

namespace arcs {

enum class SensitivityKind { power, constant, tabulated };

struct SensitivityTriple {
    double value;
    double derivative;
    double tail;
};

/// One sensitivity function on [eta_floor, inf).
///
/// Power family closed forms:
///   value(s)      = chat * (1+s)^(-k)
///   derivative(s) = -k * chat * (1+s)^(-k-1)
///   tail(s)       = chat * (1+s)^(1-k) / (k-1)          (k > 1)
///   int_{eta}^{v} = chat * ((1+eta)^(1-k) - (1+v)^(1-k)) / (k-1)
///
/// Tabulated data is interpolated with a monotone cubic (Fritsch-Carlson
/// slopes) and integrated piecewise exactly; beyond the last node the curve
/// is continued by the power law matched to the final two nodes, whose
/// fitted exponent must exceed 1 for tail integrals to converge.
class SensitivitySpec {
  public:
    static SensitivitySpec power(double chat, double k, double eta_floor = 0.0,
                                 double holder_theta = 1.0) {
        SensitivitySpec s;
        s.kind_ = SensitivityKind::power;
        s.chat_ = require_positive(chat, "chat");
        s.k_ = k;
        s.eta_floor_ = require_nonnegative(eta_floor, "eta_floor");
        s.holder_theta_ = holder_theta;
        return s;
    }

    static SensitivitySpec constant(double value, double eta_floor = 0.0) {
        SensitivitySpec s;
        s.kind_ = SensitivityKind::constant;
        s.chat_ = require_positive(value, "constant value");
        s.eta_floor_ = require_nonnegative(eta_floor, "eta_floor");
        return s;
    }

    /// Nodes must start at eta_floor, be strictly increasing, with positive
    /// values; at least 4 nodes so the end behavior is fit from real data.
    static SensitivitySpec tabulated(std::vector<double> s_nodes,
                                     std::vector<double> values) {
        SensitivitySpec sp;
        sp.kind_ = SensitivityKind::tabulated;
        if (s_nodes.size() != values.size() || s_nodes.size() < 4)
            throw ValidationError("tabulated family needs >= 4 (s, value) pairs");
        for (std::size_t i = 0; i < s_nodes.size(); ++i) {
            if (i > 0 && !(s_nodes[i] > s_nodes[i - 1]))
                throw ValidationError("tabulated s nodes must be strictly increasing");
            if (!(values[i] > 0.0))
                throw ValidationError("tabulated values must be positive");
        }
        sp.eta_floor_ = require_nonnegative(s_nodes.front(), "eta_floor");
        sp.nodes_ = std::move(s_nodes);
        sp.vals_ = std::move(values);
        sp.build_interpolant();
        return sp;
    }

    SensitivityKind kind() const { return kind_; }
    double chat() const { return chat_; }
    double k() const { return k_; }
    double eta_floor() const { return eta_floor_; }
    double holder_theta() const { return holder_theta_; }
    double alpha_like() const { return alpha_like_; }
    double c_bound() const { return c_bound_; }
    void set_alpha_like(double a) { alpha_like_ = a; }
    void set_c_bound(double c) { c_bound_ = c; }

    double value(double s) const {
        require_domain(s);
        switch (kind_) {
            case SensitivityKind::power: return chat_ * std::pow(1.0 + s, -k_);
            case SensitivityKind::constant: return chat_;
            case SensitivityKind::tabulated: return tab_value(s);
        }
        return 0.0;
    }

    double derivative(double s) const {
        require_domain(s);
        switch (kind_) {
            case SensitivityKind::power:
                return -k_ * chat_ * std::pow(1.0 + s, -k_ - 1.0);
            case SensitivityKind::constant: return 0.0;
            case SensitivityKind::tabulated: return tab_derivative(s);
        }
        return 0.0;
    }

    /// Integral of the function over [s, inf).
    double tail_integral(double s) const {
        require_domain(s);
        switch (kind_) {
            case SensitivityKind::power:
                if (k_ <= 1.0)
                    throw DivergentTail("power family tail diverges for k <= 1");
                return chat_ * std::pow(1.0 + s, 1.0 - k_) / (k_ - 1.0);
            case SensitivityKind::constant:
                throw DivergentTail("constant sensitivity has no finite tail");
            case SensitivityKind::tabulated: return tab_tail(s);
        }
        return 0.0;
    }

    /// Integral of the function over [eta_floor, v]. Arguments below the
    /// floor are clamped to it (yielding 0); callers count clamps separately.
    double partial_integral(double v) const {
        if (v <= eta_floor_) return 0.0;
        switch (kind_) {
            case SensitivityKind::power: {
                if (k_ == 1.0)
                    return chat_ * std::log((1.0 + v) / (1.0 + eta_floor_));
                return chat_ *
                       (std::pow(1.0 + eta_floor_, 1.0 - k_) -
                        std::pow(1.0 + v, 1.0 - k_)) /
                       (k_ - 1.0);
            }
            case SensitivityKind::constant: return chat_ * (v - eta_floor_);
            case SensitivityKind::tabulated: return tab_partial(v);
        }
        return 0.0;
    }

    /// value(max(s, eta_floor)); increments *clamp_count when the clamp binds.
    double value_clamped(double s, std::uint64_t* clamp_count) const {
        if (s < eta_floor_) {
            if (clamp_count) ++*clamp_count;
            s = eta_floor_;
        }
        return value(s);
    }

  private:
    SensitivitySpec() = default;

    static double require_positive(double x, const char* name) {
        if (!(x > 0.0)) throw ValidationError(std::string(name) + " must be > 0");
        return x;
    }
    static double require_nonnegative(double x, const char* name) {
        if (!(x >= 0.0)) throw ValidationError(std::string(name) + " must be >= 0");
        return x;
    }
    void require_domain(double s) const {
        if (s < eta_floor_)
            throw DomainError("sensitivity evaluated below eta_floor");
    }

    // Monotone cubic Hermite pieces: Fritsch-Carlson slope limiting keeps the
    // interpolant inside the data's monotone segments.
    void build_interpolant() {
        const std::size_t n = nodes_.size();
        slopes_.assign(n, 0.0);
        std::vector<double> d(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            d[i] = (vals_[i + 1] - vals_[i]) / (nodes_[i + 1] - nodes_[i]);
        slopes_[0] = d[0];
        slopes_[n - 1] = d[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (d[i - 1] * d[i] <= 0.0)
                slopes_[i] = 0.0;
            else {
                const double h0 = nodes_[i] - nodes_[i - 1];
                const double h1 = nodes_[i + 1] - nodes_[i];
                const double wh = 3.0 * (h0 + h1);
                slopes_[i] = wh / ((wh / 2.0 - h1) / d[i - 1] + (wh / 2.0 + h1) / d[i]);
            }
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (d[i] == 0.0) { slopes_[i] = slopes_[i + 1] = 0.0; continue; }
            const double a = slopes_[i] / d[i], b = slopes_[i + 1] / d[i];
            const double s2 = a * a + b * b;
            if (s2 > 9.0) {
                const double t = 3.0 / std::sqrt(s2);
                slopes_[i] = t * a * d[i];
                slopes_[i + 1] = t * b * d[i];
            }
        }
        // Cumulative exact integrals of the cubic pieces from the first node.
        cum_.assign(n, 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i)
            cum_[i + 1] = cum_[i] + piece_integral(i, nodes_[i + 1]);
        // End continuation: power law through the last two nodes.
        const double x0 = 1.0 + nodes_[n - 2], x1 = 1.0 + nodes_[n - 1];
        if (vals_[n - 1] < vals_[n - 2])
            tail_k_ = std::log(vals_[n - 2] / vals_[n - 1]) / std::log(x1 / x0);
        else
            tail_k_ = 0.0;
    }

    std::size_t piece_of(double s) const {
        const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
        std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
        if (i == 0) return 0;
        if (i >= nodes_.size()) return nodes_.size() - 2;
        return i - 1;
    }

    double tab_value(double s) const {
        const std::size_t n = nodes_.size();
        if (s >= nodes_[n - 1]) {
            const double base = (1.0 + nodes_[n - 1]) / (1.0 + s);
            return vals_[n - 1] * std::pow(base, tail_k_);
        }
        const std::size_t i = piece_of(s);
        const double h = nodes_[i + 1] - nodes_[i];
        const double t = (s - nodes_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return vals_[i] * (2 * t3 - 3 * t2 + 1) + h * slopes_[i] * (t3 - 2 * t2 + t) +
               vals_[i + 1] * (-2 * t3 + 3 * t2) + h * slopes_[i + 1] * (t3 - t2);
    }

    double tab_derivative(double s) const {
        const std::size_t n = nodes_.size();
        if (s >= nodes_[n - 1]) {
            const double v = tab_value(s);
            return -tail_k_ * v / (1.0 + s);
        }
        const std::size_t i = piece_of(s);
        const double h = nodes_[i + 1] - nodes_[i];
        const double t = (s - nodes_[i]) / h;
        const double t2 = t * t;
        return (vals_[i] * (6 * t2 - 6 * t) / h + slopes_[i] * (3 * t2 - 4 * t + 1) +
                vals_[i + 1] * (-6 * t2 + 6 * t) / h + slopes_[i + 1] * (3 * t2 - 2 * t));
    }

    /// Exact integral of piece i over [nodes_[i], b], b inside the piece.
    double piece_integral(std::size_t i, double b) const {
        const double h = nodes_[i + 1] - nodes_[i];
        const double t = (b - nodes_[i]) / h;
        const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
        const double I00 = t4 / 2 - t3 + t;            // int 2t^3-3t^2+1
        const double I10 = t4 / 4 - 2 * t3 / 3 + t2 / 2; // int t^3-2t^2+t
        const double I01 = -t4 / 2 + t3;               // int -2t^3+3t^2
        const double I11 = t4 / 4 - t3 / 3;            // int t^3-t^2
        return h * (vals_[i] * I00 + h * slopes_[i] * I10 + vals_[i + 1] * I01 +
                    h * slopes_[i + 1] * I11);
    }

    double integral_from_floor(double s) const {
        const std::size_t n = nodes_.size();
        if (s >= nodes_[n - 1]) {
            double tail_part = 0.0;
            const double yN = vals_[n - 1], xN = 1.0 + nodes_[n - 1];
            if (tail_k_ == 1.0)
                tail_part = yN * xN * std::log((1.0 + s) / xN);
            else
                tail_part = yN * std::pow(xN, tail_k_) *
                            (std::pow(xN, 1.0 - tail_k_) - std::pow(1.0 + s, 1.0 - tail_k_)) /
                            (tail_k_ - 1.0);
            return cum_[n - 1] + tail_part;
        }
        const std::size_t i = piece_of(s);
        return cum_[i] + piece_integral(i, s);
    }

    double tab_partial(double v) const { return integral_from_floor(v); }

    double tab_tail(double s) const {
        if (tail_k_ <= 1.0)
            throw DivergentTail("tabulated end continuation decays too slowly");
        const std::size_t n = nodes_.size();
        const double yN = vals_[n - 1], xN = 1.0 + nodes_[n - 1];
        const double tail_inf = yN * xN / (tail_k_ - 1.0);
        if (s >= nodes_[n - 1]) {
            const double ratio = std::pow(xN / (1.0 + s), tail_k_ - 1.0);
            return tail_inf * ratio;
        }
        return (cum_[n - 1] - integral_from_floor(s)) + tail_inf;
    }

    SensitivityKind kind_ = SensitivityKind::power;
    double chat_ = 1.0;
    double k_ = 2.0;
    double eta_floor_ = 0.0;
    double holder_theta_ = 1.0;
    double alpha_like_ = std::numeric_limits<double>::quiet_NaN();
    double c_bound_ = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> nodes_, vals_, slopes_, cum_;
    double tail_k_ = 0.0;
};

inline SensitivityTriple sensitivity_eval(const SensitivitySpec& spec, double s) {
    return {spec.value(s), spec.derivative(s), spec.tail_integral(s)};
}

/// Largest damping constant a for which derivative(s) + a * value(s)^2 <= 0
/// on [eta_floor, inf), for the power family: k * (1+eta_floor)^(k-1) / chat.
/// The ratio -derivative/value^2 is increasing in s, so the floor binds.
inline double max_alpha(const SensitivitySpec& spec) {
    if (spec.kind() != SensitivityKind::power)
        throw Unsupported("max_alpha is defined for the power family only");
    if (spec.k() < 1.0)
        throw DomainError("max_alpha requires k >= 1");
    return spec.k() * std::pow(1.0 + spec.eta_floor(), spec.k() - 1.0) / spec.chat();
}

struct HypothesisReport {
    bool positive = false;        ///< value(s) > 0 at every sample
    bool integrable_tail = false; ///< finite integral over [eta_floor, inf)
    bool damping = false;         ///< derivative + alpha*value^2 <= 0 at every sample
    double damping_fail_s = std::numeric_limits<double>::quiet_NaN();
    double c_bound = 0.0;         ///< 1.01 * sup of s*value(s) over the sample
    bool all_ok() const { return positive && integrable_tail && damping; }
};

/// Samples s on eta_floor plus a 512-point geometric grid reaching
/// eta_floor + 1e6, plus the analytic maximizer of s*value(s) for the power
/// family. The damping inequality is accepted up to a relative round-off
/// allowance so the equality case alpha = max_alpha passes.
inline HypothesisReport validate_hypotheses(const SensitivitySpec& spec,
                                            double alpha_like) {
    HypothesisReport rep;
    const double eta = spec.eta_floor();
    std::vector<double> samples;
    samples.reserve(515);
    samples.push_back(eta);
    for (int i = 0; i < 512; ++i) {
        const double offset = 1e-6 * std::pow(1e12, i / 511.0);
        samples.push_back(eta + offset);
    }
    if (spec.kind() == SensitivityKind::power && spec.k() > 1.0) {
        const double s_star = 1.0 / (spec.k() - 1.0);
        if (s_star > eta) samples.push_back(s_star);
    }

    rep.positive = true;
    rep.damping = true;
    double sup_product = 0.0;
    for (double s : samples) {
        const double val = spec.value(s);
        const double der = spec.derivative(s);
        if (!(val > 0.0)) rep.positive = false;
        sup_product = std::max(sup_product, s * val);
        const double lhs = der + alpha_like * val * val;
        const double scale = std::abs(der) + std::abs(alpha_like) * val * val;
        if (lhs > 1e-12 * std::max(scale, 1.0) && rep.damping) {
            rep.damping = false;
            rep.damping_fail_s = s;
        }
    }
    rep.c_bound = 1.01 * sup_product;

    try {
        (void)spec.tail_integral(eta);
        rep.integrable_tail = true;
    } catch (const DivergentTail&) {
        rep.integrable_tail = false;
    }
    return rep;
}

} // namespace arcs
