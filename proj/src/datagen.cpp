#include "bcpnn/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bcpnn/rng.hpp"

namespace bcpnn {

namespace {

struct Pt {
    double x, y;
};
using Stroke = std::vector<Pt>; // polyline in the unit box, y down

std::vector<Stroke> arc(double cx, double cy, double rx, double ry, double a0, double a1,
                        int segments = 12) {
    Stroke s;
    for (int k = 0; k <= segments; ++k) {
        double a = a0 + (a1 - a0) * double(k) / segments;
        s.push_back({cx + rx * std::cos(a), cy + ry * std::sin(a)});
    }
    return {s};
}

constexpr double kPi = 3.14159265358979323846;

// Two handwriting styles per digit; classes are multimodal the way real
// handwriting is, which is what separates template read-outs from
// prototype-based representations.
std::vector<Stroke> digit_strokes(int digit, int style) {
    switch (digit) {
        case 0:
            if (style == 0) return arc(0.50, 0.50, 0.24, 0.34, 0.0, 2.0 * kPi, 20);
            return arc(0.50, 0.50, 0.15, 0.33, 0.0, 2.0 * kPi, 20); // narrow oval
        case 1:
            if (style == 0) return {{{0.34, 0.30}, {0.52, 0.16}, {0.52, 0.84}}};
            return {{{0.38, 0.26}, {0.54, 0.16}, {0.54, 0.84}}, // with a base bar
                    {{0.36, 0.84}, {0.70, 0.84}}};
        case 2: {
            if (style == 0) {
                auto top = arc(0.50, 0.30, 0.22, 0.15, -kPi, 0.0, 10);
                top.push_back({{0.72, 0.30}, {0.28, 0.82}, {0.74, 0.82}});
                return top;
            }
            auto top = arc(0.47, 0.28, 0.19, 0.13, -0.9 * kPi, 0.0, 10);
            top.push_back({{0.66, 0.28}, {0.60, 0.52}, {0.30, 0.78}, {0.30, 0.84}});
            top.push_back({{0.28, 0.82}, {0.72, 0.80}});
            return top;
        }
        case 3: {
            if (style == 0) {
                auto upper = arc(0.46, 0.32, 0.22, 0.15, -0.8 * kPi, 0.45 * kPi, 10);
                auto lower = arc(0.46, 0.66, 0.24, 0.17, -0.45 * kPi, 0.8 * kPi, 10);
                upper.insert(upper.end(), lower.begin(), lower.end());
                return upper;
            }
            std::vector<Stroke> s = {{{0.30, 0.18}, {0.68, 0.18}, {0.48, 0.44}}}; // flat top
            auto lower = arc(0.47, 0.63, 0.23, 0.19, -0.4 * kPi, 0.85 * kPi, 12);
            s.insert(s.end(), lower.begin(), lower.end());
            return s;
        }
        case 4:
            if (style == 0)
                return {{{0.58, 0.14}, {0.24, 0.58}, {0.78, 0.58}}, {{0.60, 0.30}, {0.60, 0.86}}};
            return {{{0.32, 0.14}, {0.30, 0.52}, {0.76, 0.52}}, // open top, left leg
                    {{0.62, 0.14}, {0.62, 0.86}}};
        case 5: {
            std::vector<Stroke> s;
            if (style == 0) {
                s = {{{0.72, 0.16}, {0.32, 0.16}, {0.31, 0.46}}};
                auto bowl = arc(0.48, 0.64, 0.23, 0.19, -0.5 * kPi, 0.75 * kPi, 12);
                s.insert(s.end(), bowl.begin(), bowl.end());
            } else {
                s = {{{0.76, 0.18}, {0.28, 0.18}, {0.28, 0.42}}};
                auto bowl = arc(0.46, 0.62, 0.26, 0.22, -0.45 * kPi, 0.7 * kPi, 12);
                s.insert(s.end(), bowl.begin(), bowl.end());
            }
            return s;
        }
        case 6: {
            std::vector<Stroke> s;
            if (style == 0)
                s = {{{0.64, 0.14}, {0.40, 0.38}, {0.32, 0.62}}};
            else
                s = {{{0.58, 0.12}, {0.40, 0.34}, {0.34, 0.56}, {0.33, 0.70}}}; // straighter stem
            auto loop = arc(0.48, 0.66, 0.17, 0.17, 0.0, 2.0 * kPi, 14);
            s.insert(s.end(), loop.begin(), loop.end());
            return s;
        }
        case 7:
            if (style == 0) return {{{0.26, 0.18}, {0.76, 0.18}, {0.42, 0.84}}};
            return {{{0.26, 0.20}, {0.74, 0.20}, {0.46, 0.84}}, // with crossbar
                    {{0.36, 0.52}, {0.66, 0.52}}};
        case 8: {
            if (style == 0) {
                auto upper = arc(0.50, 0.32, 0.17, 0.15, 0.0, 2.0 * kPi, 14);
                auto lower = arc(0.50, 0.66, 0.21, 0.18, 0.0, 2.0 * kPi, 14);
                upper.insert(upper.end(), lower.begin(), lower.end());
                return upper;
            }
            auto upper = arc(0.54, 0.30, 0.14, 0.13, 0.0, 2.0 * kPi, 14); // smaller, offset top
            auto lower = arc(0.47, 0.65, 0.22, 0.19, 0.0, 2.0 * kPi, 14);
            upper.insert(upper.end(), lower.begin(), lower.end());
            return upper;
        }
        case 9: {
            auto loop = arc(0.52, 0.34, 0.18, 0.17, 0.0, 2.0 * kPi, 14);
            if (style == 0)
                loop.push_back({{0.70, 0.40}, {0.60, 0.85}});
            else
                loop.push_back({{0.70, 0.36}, {0.70, 0.85}}); // straight tail
            return loop;
        }
        default:
            return {};
    }
}

double dist_to_segment(double px, double py, Pt a, Pt b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0.0 ? ((px - a.x) * vx + (py - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = px - (a.x + t * vx), dy = py - (a.y + t * vy);
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace

Dataset synth_digits(uint32_t n_samples, uint64_t seed) {
    constexpr uint32_t kSide = 28;
    Dataset d;
    d.rows = kSide;
    d.cols = kSide;
    d.pixels.resize(size_t(n_samples) * kSide * kSide);
    d.labels.resize(n_samples);

    Rng rng = Rng::stream(seed, 7);
    for (uint32_t n = 0; n < n_samples; ++n) {
        const int digit = int(rng.below(10));
        const int style = int(rng.below(2));
        d.labels[n] = uint8_t(digit);

        // per-sample jitter
        const double rot = rng.uniform(-0.24, 0.24);
        const double sx = rng.uniform(0.78, 1.12), sy = rng.uniform(0.78, 1.12);
        const double shear = rng.uniform(-0.20, 0.20);
        const double tx = rng.uniform(-0.10, 0.10), ty = rng.uniform(-0.10, 0.10);
        const double width = rng.uniform(0.032, 0.064);
        const double amp = rng.uniform(0.75, 1.0);
        const double wobble = rng.uniform(0.004, 0.02); // local stroke deformation

        const double cr = std::cos(rot), sr = std::sin(rot);
        auto map = [&](Pt p) -> Pt {
            double x = p.x - 0.5, y = p.y - 0.5;
            x += shear * y;
            x *= sx;
            y *= sy;
            return {0.5 + tx + cr * x - sr * y, 0.5 + ty + sr * x + cr * y};
        };

        std::vector<Stroke> strokes = digit_strokes(digit, style);
        for (Stroke& s : strokes)
            for (Pt& p : s) {
                p = map(p);
                p.x += rng.uniform(-wobble, wobble);
                p.y += rng.uniform(-wobble, wobble);
            }

        const double sigma = width * 0.5;
        uint8_t* img = d.pixels.data() + size_t(n) * kSide * kSide;
        for (uint32_t r = 0; r < kSide; ++r) {
            for (uint32_t c = 0; c < kSide; ++c) {
                const double px = (c + 0.5) / kSide, py = (r + 0.5) / kSide;
                double best = 1e9;
                for (const Stroke& s : strokes)
                    for (size_t k = 0; k + 1 < s.size(); ++k)
                        best = std::min(best, dist_to_segment(px, py, s[k], s[k + 1]));
                double v = amp * std::exp(-0.5 * (best / sigma) * (best / sigma));
                img[r * kSide + c] = uint8_t(std::lround(255.0 * std::min(1.0, v)));
            }
        }
        // sparse speckle noise
        for (int k = 0; k < 6; ++k) {
            const uint32_t p = uint32_t(rng.below(kSide * kSide));
            const double v = img[p] / 255.0 + rng.uniform(0.0, 0.35);
            img[p] = uint8_t(std::lround(255.0 * std::min(1.0, v)));
        }
    }
    return d;
}

} // namespace bcpnn
