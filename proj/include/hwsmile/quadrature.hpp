#pragma once

#include <vector>

namespace hwsmile {

// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once per order and
// cached process-wide.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussLegendreRule& gauss_legendre(int order);

// Integrates fn over [a, b] with one Gauss-Legendre panel.
template <class Fn>
double gl_panel(Fn&& fn, double a, double b, int order) {
    const GaussLegendreRule& rule = gauss_legendre(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * fn(mid + half * rule.nodes[i]);
    return half * sum;
}

// Panel edges covering [a, b]: every cut point inside (a, b) becomes an edge
// and panels longer than max_len are subdivided. cuts need not be sorted.
std::vector<double> make_panels(double a, double b, const std::vector<double>& cuts,
                                double max_len = 1.0);

template <class Fn>
double gl_composite(Fn&& fn, const std::vector<double>& edges, int order) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        sum += gl_panel(fn, edges[i], edges[i + 1], order);
    return sum;
}

} // namespace hwsmile
