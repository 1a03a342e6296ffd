#include "hwsmile/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace hwsmile {

namespace {

// Newton iteration on P_n; standard construction, symmetric nodes.
GaussLegendreRule build_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double eps = 1e-15;
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < eps)
                break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[n - 1 - i] = rule.weights[i];
    }
    return rule;
}

} // namespace

const GaussLegendreRule& gauss_legendre(int order) {
    if (order < 1)
        throw std::invalid_argument("Gauss-Legendre order must be >= 1");
    static std::mutex mtx;
    static std::map<int, GaussLegendreRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

std::vector<double> make_panels(double a, double b, const std::vector<double>& cuts,
                                double max_len) {
    if (b < a)
        throw std::invalid_argument("make_panels: bounds out of order");
    std::vector<double> edges;
    edges.push_back(a);
    for (double c : cuts) {
        if (c > a && c < b)
            edges.push_back(c);
    }
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double x, double y) { return std::abs(x - y) < 1e-14; }),
                edges.end());

    std::vector<double> refined;
    refined.push_back(edges.front());
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double l = edges[i];
        const double r = edges[i + 1];
        const int splits = std::max(1, static_cast<int>(std::ceil((r - l) / max_len)));
        for (int k = 1; k <= splits; ++k)
            refined.push_back(l + (r - l) * k / splits);
    }
    return refined;
}

} // namespace hwsmile
