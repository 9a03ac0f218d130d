#include "shelab/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace shelab {

namespace {
double pairwise_rec(const double* p, std::size_t n) {
    if (n <= 16) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_rec(p, half) + pairwise_rec(p + half, n - half);
}
} // namespace

double pairwise_sum(std::span<const double> xs) {
    return pairwise_rec(xs.data(), xs.size());
}

Summary summarize(std::span<const double> xs) {
    Summary s;
    s.count = xs.size();
    if (xs.empty()) return s;
    s.mean = pairwise_sum(xs) / static_cast<double>(xs.size());
    s.min = std::numeric_limits<double>::infinity();
    s.max = -std::numeric_limits<double>::infinity();
    for (double v : xs) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    if (xs.size() > 1) {
        std::vector<double> dev2(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double d = xs[i] - s.mean;
            dev2[i] = d * d;
        }
        const double var = pairwise_sum(dev2) / static_cast<double>(xs.size() - 1);
        s.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
    }
    return s;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // Prefer the shortest representation that still round-trips.
    for (int prec = 1; prec < 17; ++prec) {
        char cand[40];
        std::snprintf(cand, sizeof cand, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(cand, "%lf", &back);
        if (back == v || (std::isnan(back) && std::isnan(v))) return std::string(cand);
    }
    return std::string(buf);
}

} // namespace shelab
